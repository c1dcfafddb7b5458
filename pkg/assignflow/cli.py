# -*- coding: utf-8 -*-
#
#   Command line interface
#

import os
import sys
import logging
import argparse
import torch

import assignflow as af
from .errors import CheckpointError, DenseBudgetError, DimensionError, NonFiniteError, RejectionError

__all__ = ['main', 'build_arg_parser', 'EXIT_CODES']
log = logging.getLogger(__name__)

#: Stable exit codes of the command line interface
EXIT_CODES = {
    'ok': 0,
    'usage': 2,
    'unreadable': 3,
    'dimension': 4,
    'nonfinite': 5,
    'checkpoint': 6,
    'budget': 7,
}


class UsageError(Exception):
    """ Missing or inconsistent command line arguments. """


class UnreadableInputError(Exception):
    """ An input file could not be opened or parsed. """


def _read(fn, *args, **kwargs):
    """ Run a reader, mapping I/O and format errors to :class:`UnreadableInputError`. """
    try:
        return fn(*args, **kwargs)
    except (DimensionError, DenseBudgetError):
        raise
    except (OSError, ValueError) as err:
        raise UnreadableInputError(str(err)) from err


def _params(args):
    """ Run configuration from the optional config file, overridden by command line flags. """
    if args.config is not None:
        try:
            params = af.engine.HyperParameters.from_file(args.config)
        except (OSError, ValueError, AttributeError, TypeError, ImportError) as err:
            raise UnreadableInputError(f'Configuration file [{args.config}]: {err}') from err
    else:
        params = af.engine.HyperParameters()

    flags = {key: getattr(args, key) for key in af.engine.RUN_KEYS if getattr(args, key, None) is not None}
    try:
        params.update(**flags)
    except ValueError as err:
        raise UsageError(str(err)) from err
    return params


def _generator(seed):
    return torch.Generator().manual_seed(seed)


def _load_field(params):
    if params.checkpoint is None:
        raise UsageError('A checkpoint is required (--checkpoint or config key)')
    if not os.path.exists(params.checkpoint):
        raise UnreadableInputError(f'Checkpoint not found [{params.checkpoint}]')
    field, header = af.network.module.FitnessField.load_checkpoint(params.checkpoint)

    # Settings stored in the checkpoint apply unless given explicitly
    try:
        for key in ('eps', 'scheme', 'integration_steps'):
            if key not in params.explicit and key in header:
                params.set(key, header[key])
                params.explicit.discard(key)
        params.validate()
    except ValueError as err:
        raise CheckpointError(f'Invalid run settings in checkpoint header: {err}') from err
    return field


def cmd_train(args):
    params = _params(args)
    if params.dataset is None or params.checkpoint is None:
        raise UsageError('Training needs a dataset and a checkpoint path')

    labels, n, c = _read(af.data.read_configurations, params.dataset, params.n, params.c)
    dataset = _read(af.data.ConfigurationDataset, labels, c, n)
    log.info(f'Training a {params.variant} field on {len(dataset)} configurations [n={n} c={c}]')

    field, losses = af.engine.train(dataset, params)
    field.save_weights(
        params.checkpoint, eps=params.eps, scheme=params.scheme, integration_steps=params.integration_steps
    )

    trace = params.output if params.output is not None else f'{params.checkpoint}.loss.csv'
    af.data.write_loss_trace(trace, losses)
    log.info(f'Loss trace written to {trace}')


def cmd_sample(args):
    params = _params(args)
    if params.output is None:
        raise UsageError('Sampling needs an output file')
    field = _load_field(params)

    samples = af.flow.sample_configurations(
        field, args.count, _generator(params.seed), params.integrator_config(), params.t_end
    )
    af.data.write_configurations(params.output, samples, field.c)
    log.info(f'{len(samples)} configurations written to {params.output}')

    if field.c ** field.n <= af.geometry.DENSE_BUDGET:
        histogram = args.histogram if args.histogram is not None else f'{params.output}.hist.csv'
        af.data.write_histogram(histogram, samples, field.n, field.c)
    else:
        log.info('Too many configurations for a dense histogram, skipping it')


def cmd_loglik(args):
    params = _params(args)
    field = _load_field(params)
    if args.configurations is None:
        raise UsageError('A configurations file is required')

    configurations, _, _ = _read(af.data.read_configurations, args.configurations, field.n, field.c)
    generator = _generator(params.seed)
    config = params.integrator_config(direction='backward')

    rows = []
    for alpha in configurations:
        estimate = af.flow.loglik_lower_bound(
            field,
            alpha,
            params.n_samples,
            generator,
            eps=params.eps,
            mass=params.mass,
            t_end=params.t_end,
            config=config,
            divergence=params.divergence,
        )
        rows.append((alpha, estimate))
        print(
            f'{" ".join(map(str, alpha.tolist()))}\t{estimate.bound:.6f} nats\t'
            f'{estimate.bits_per_dim:.6f} bits/dim\tstderr {estimate.stderr:.6f}'
        )

    if params.output is not None:
        af.data.write_likelihood_report(params.output, rows, field.c)
        log.info(f'Likelihood report written to {params.output}')


def cmd_eval(args):
    samples, n, c = _read(af.data.read_configurations, args.samples)
    if (args.reference is None) == (args.joint is None):
        raise UsageError('Give exactly one of --reference or --joint')

    if args.joint is not None:
        reference, rn, rc = _read(af.data.read_joint, args.joint)
    else:
        labels, rn, rc = _read(af.data.read_configurations, args.reference)
        reference = None
    if (rn, rc) != (n, c):
        raise DimensionError(f'Samples have n={n} c={c}, reference has n={rn} c={rc}')
    if reference is None:
        reference = _read(af.geometry.empirical_joint, labels, c)
    if samples.shape[0] == 0:
        raise UnreadableInputError(f'No samples in {args.samples}')

    empirical = af.geometry.empirical_joint(samples, c)
    marg_emp = af.geometry.marginalize(empirical, n, c)
    marg_ref = af.geometry.marginalize(reference, n, c)
    marginal_tv = 0.5 * (marg_emp - marg_ref).abs().sum(-1)

    print(f'tv\t{float(af.geometry.tv_distance(empirical, reference)):.6f}')
    for i, tv in enumerate(marginal_tv.tolist()):
        print(f'marginal_tv[{i}]\t{tv:.6f}')
    print(f'entropy_samples\t{float(af.geometry.entropy(empirical)):.6f}')
    print(f'entropy_reference\t{float(af.geometry.entropy(reference)):.6f}')


def cmd_synth(args):
    if (args.target is None) == (args.joint is None):
        raise UsageError('Give exactly one of --target or --joint')
    if args.output is None:
        raise UsageError('Synthesizing needs an output file')

    if args.joint is not None:
        p, n, c = _read(af.data.read_joint, args.joint)
    else:
        p, n, c = af.data.targets.TARGETS[args.target](args.c)

    samples = af.data.targets.sample_joint(p, n, c, args.count, _generator(args.seed))
    af.data.write_configurations(args.output, samples, c)
    log.info(f'{args.count} configurations of {args.target or args.joint} written to {args.output}')


def _add_run_flags(parser, *groups):
    """ Flags mirroring run configuration keys, all defaulting to None so they only override when given. """
    parser.add_argument('--config', help='Flat key = value run configuration file')
    parser.add_argument('--seed', type=int, help='Random seed')
    if 'train' in groups:
        parser.add_argument('--dataset', help='Training configurations')
        parser.add_argument('--n', type=int, help='Declared number of variables')
        parser.add_argument('--c', type=int, help='Declared number of categories')
        parser.add_argument('--variant', choices=('linear', 'mlp'), help='Fitness field variant')
        parser.add_argument('--hidden', help='Hidden layer sizes of the MLP, eg. 256,256')
        parser.add_argument('--bias', help='Bias term of the linear field (true|false)')
        parser.add_argument('--eps', type=float, help='Smoothing constant of the corners')
        parser.add_argument('--batch-size', dest='batch_size', type=int, help='Configurations per step')
        parser.add_argument('--steps', type=int, help='Number of training steps')
        parser.add_argument('--lr', type=float, help='Adam learning rate')
        parser.add_argument('--lr-schedule', dest='lr_schedule', choices=('constant', 'cosine'), help='Learning rate schedule')
        parser.add_argument('--deterministic', help='Strict deterministic algorithms (true|false)')
    if 'flow' in groups:
        parser.add_argument('--scheme', choices=('rk4', 'euler'), help='Integration scheme')
        parser.add_argument('--integration-steps', dest='integration_steps', type=int, help='Integration steps')
        parser.add_argument('--t-end', dest='t_end', type=float, help='Integration horizon')
    if 'likelihood' in groups:
        parser.add_argument('--mass', type=float, help='Truncation mass of the proposal')
        parser.add_argument('--n-samples', dest='n_samples', type=int, help='Importance samples per configuration')
        parser.add_argument('--divergence', choices=('exact', 'hutchinson'), help='Divergence estimator')
    parser.add_argument('--checkpoint', help='Checkpoint file')
    parser.add_argument('--output', help='Output file')


def build_arg_parser():
    parser = argparse.ArgumentParser(
        prog='assignflow',
        description='Flow matching on the assignment manifold for discrete joint distributions.',
    )
    parser.add_argument('--loglvl', help='Console log level, eg. DEBUG or WARNING')
    sub = parser.add_subparsers(dest='command', required=True)

    train = sub.add_parser('train', help='Train a fitness field on a dataset')
    _add_run_flags(train, 'train', 'flow')
    train.set_defaults(func=cmd_train)

    sample = sub.add_parser('sample', help='Sample configurations from a checkpoint')
    _add_run_flags(sample, 'flow')
    sample.add_argument('--count', type=int, default=10000, help='Number of configurations')
    sample.add_argument('--histogram', help='Histogram CSV; Default <output>.hist.csv')
    sample.set_defaults(func=cmd_sample)

    loglik = sub.add_parser('loglik', help='Lower bounds on configuration log-likelihoods')
    _add_run_flags(loglik, 'flow', 'likelihood')
    loglik.add_argument('--eps', type=float, help='Smoothing constant of the corners')
    loglik.add_argument('--configurations', help='Configurations to evaluate')
    loglik.set_defaults(func=cmd_loglik)

    evaluate = sub.add_parser('eval', help='Compare samples to a reference distribution')
    evaluate.add_argument('--samples', required=True, help='Sampled configurations')
    evaluate.add_argument('--reference', help='Reference dataset')
    evaluate.add_argument('--joint', help='Explicit reference joint distribution')
    evaluate.set_defaults(func=cmd_eval)

    synth = sub.add_parser('synth', help='Generate a dataset from a synthetic or explicit target')
    synth.add_argument('--target', choices=sorted(af.data.targets.TARGETS), help='Built-in target')
    synth.add_argument('--joint', help='Explicit joint distribution file')
    synth.add_argument('--c', type=int, default=16, help='Grid resolution of the two-dimensional targets')
    synth.add_argument('--count', type=int, default=100000, help='Number of configurations')
    synth.add_argument('--seed', type=int, default=0, help='Random seed')
    synth.add_argument('--output', help='Dataset file')
    synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None):
    """ Entry point of the ``assignflow`` command, returning its exit code. """
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code

    if args.loglvl is not None:
        af.logger.setConsoleLevel(args.loglvl.upper())
    threads = os.environ.get('AF_NUM_THREADS')
    if threads:
        torch.set_num_threads(int(threads))

    try:
        args.func(args)
    except UsageError as err:
        log.error(str(err))
        return EXIT_CODES['usage']
    except UnreadableInputError as err:
        log.error(f'Unreadable input: {err}')
        return EXIT_CODES['unreadable']
    except DimensionError as err:
        log.error(f'Dimension mismatch: {err}')
        return EXIT_CODES['dimension']
    except NonFiniteError as err:
        log.error(f'Non-finite numerics: {err}')
        return EXIT_CODES['nonfinite']
    except CheckpointError as err:
        log.error(f'Checkpoint error: {err}')
        return EXIT_CODES['checkpoint']
    except DenseBudgetError as err:
        log.error(f'Dense budget exceeded: {err}')
        return EXIT_CODES['budget']
    except RejectionError as err:
        log.error(str(err))
        return EXIT_CODES['nonfinite']
    return EXIT_CODES['ok']


if __name__ == '__main__':
    sys.exit(main())
