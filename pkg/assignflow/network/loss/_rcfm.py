# -*- coding: utf-8 -*-
#
#   Riemannian conditional flow matching loss
#

import logging
import torch
import torch.nn as nn
from ...errors import NonFiniteError
from ...geometry import pushed_norm_sq

__all__ = ['RCFMLoss', 'rcfm_loss']
log = logging.getLogger(__name__)


class RCFMLoss(nn.modules.loss._Loss):
    """ Computes the Riemannian conditional flow matching loss of a fitness field along e-geodesics.

    For every training tuple the loss is the squared Fisher-Rao norm
    :math:`\\| R_{W_t}[F_\\theta(W_t) - (u_\\beta - u_0)] \\|^2_{W_t}`, averaged over the batch.
    Because the replicator map annihilates constants, the loss is invariant to adding a per-row constant to the field output.

    Args:
        reduction (str, optional): ``'mean'``, ``'sum'`` or ``'none'``; Default **'mean'**

    Attributes:
        self.loss_tuples: Per-tuple losses of the last call, detached
    """

    def __init__(self, reduction='mean'):
        super().__init__(reduction=reduction)
        self.loss_tuples = None

    def forward(self, output, target):
        """ Compute the loss.

        Args:
            output (torch.Tensor): Field output ``F(W_t)`` with shape ``(B, n, c)``
            target (assignflow.data.transform.TrainingTuple): Batch of training tuples the output was computed on

        Raises:
            NonFiniteError: if any per-tuple loss is NaN or infinite; ``err.index`` holds the first offending tuple
        """
        if output.dim() < 3 or output.shape[0] == 0:
            raise ValueError('RCFMLoss needs a nonempty batch of field outputs')
        losses = pushed_norm_sq(target.W_t, output - (target.u_beta - target.u0))
        self.loss_tuples = losses.detach()

        bad = ~torch.isfinite(self.loss_tuples)
        if bad.any():
            index = int(bad.nonzero()[0, 0])
            raise NonFiniteError(
                f'Non-finite loss for training tuple {index} [t={float(target.t[index]):.6f}]', index=index
            )

        if self.reduction == 'mean':
            return losses.mean()
        elif self.reduction == 'sum':
            return losses.sum()
        return losses


def rcfm_loss(field, batch):
    """ Loss value and parameter gradients of a field on a batch of training tuples.

    Args:
        field (assignflow.network.module.FitnessField): Field to evaluate
        batch (assignflow.data.transform.TrainingTuple): Batch of training tuples

    Return:
        tuple: (scalar loss tensor, tuple of gradients in parameter declaration order)
    """
    params = tuple(field.parameters())
    with torch.enable_grad():
        loss = RCFMLoss()(field(batch.W_t), batch)
        grads = torch.autograd.grad(loss, params, allow_unused=True)
    grads = tuple(torch.zeros_like(p) if g is None else g for p, g in zip(params, grads))
    return loss.detach(), grads
