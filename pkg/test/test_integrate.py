# -*- coding: utf-8 -*-
import math
import unittest
import torch
from assignflow.flow import *
from assignflow.data.transform import sample_reference
from assignflow.errors import NonFiniteError
from assignflow.geometry import barycenter, exp_e, project_tangent, replicator
from assignflow.models import LinearField, MLPField


def random_linear_field(n, c, generator, scale=1.0, bias=False):
    field = LinearField(n, c, bias=bias)
    with torch.no_grad():
        for param in field.parameters():
            param.copy_(scale * torch.randn(param.shape, dtype=torch.double, generator=generator))
    return field


class TestConfig(unittest.TestCase):
    def test_invalid(self):
        with self.assertRaises(ValueError):
            IntegratorConfig(scheme='midpoint')
        with self.assertRaises(ValueError):
            IntegratorConfig(steps=0)
        with self.assertRaises(ValueError):
            IntegratorConfig(direction='sideways')

    def test_grid(self):
        grid = IntegratorConfig(steps=4).grid(1.0, 0.0)
        self.assertEqual(grid.tolist(), [1.0, 0.75, 0.5, 0.25, 0.0])


class TestIntegrate(unittest.TestCase):
    def setUp(self):
        self.gen = torch.Generator().manual_seed(30)
        self.u0 = sample_reference(2, 3, (4,), self.gen)

    def test_zero_field(self):
        field = LinearField(2, 3)
        for scheme in ('rk4', 'euler'):
            out = integrate(field, self.u0, config=IntegratorConfig(scheme=scheme))
            self.assertTrue(torch.equal(out, self.u0))

    def test_constant_field(self):
        """ A constant field gives the straight line u0 + t * P0 f for both schemes """
        field = LinearField(2, 3, bias=True)
        f = torch.tensor([[1.0, -2.0, 0.5], [0.3, 0.3, 3.0]], dtype=torch.double)
        with torch.no_grad():
            field.layers[0].bias.copy_(f.reshape(-1))

        expected = self.u0 + project_tangent(f)
        for scheme in ('rk4', 'euler'):
            out = integrate(field, self.u0, config=IntegratorConfig(scheme=scheme, steps=50))
            self.assertLess((out - expected).abs().max().item(), 1e-12)

        half = integrate(field, self.u0, 0.0, 0.5)
        self.assertLess((half - (self.u0 + 0.5 * project_tangent(f))).abs().max().item(), 1e-12)

    def test_lifted_rhs_chain_rule(self):
        """ Moving u along the lifted field moves W along the replicator equation """
        field = random_linear_field(2, 3, self.gen)
        bary = barycenter(2, 3)
        h = 1e-5
        with torch.no_grad():
            du = lifted_rhs(field, self.u0)
            W = exp_e(bary, self.u0)
            fd = (exp_e(bary, self.u0 + h * du) - exp_e(bary, self.u0 - h * du)) / (2 * h)
            self.assertLess((fd - replicator(W, field(W))).abs().max().item(), 1e-8)
            self.assertLess(du.sum(-1).abs().max().item(), 1e-12)

    def test_convergence_order(self):
        field = random_linear_field(2, 3, self.gen, scale=1.0)
        reference = integrate(field, self.u0, config=IntegratorConfig(steps=10 ** 4))
        coarse = integrate(field, self.u0, config=IntegratorConfig(steps=16))
        fine = integrate(field, self.u0, config=IntegratorConfig(steps=32))

        err_coarse = (coarse - reference).norm().item()
        err_fine = (fine - reference).norm().item()
        self.assertGreaterEqual(math.log2(err_coarse / err_fine), 3.5)

    def test_euler_is_first_order(self):
        field = random_linear_field(2, 3, self.gen, scale=1.5)
        reference = integrate(field, self.u0, config=IntegratorConfig(steps=2000))
        coarse = integrate(field, self.u0, config=IntegratorConfig('euler', 200))
        fine = integrate(field, self.u0, config=IntegratorConfig('euler', 400))
        order = math.log2((coarse - reference).norm().item() / (fine - reference).norm().item())
        self.assertAlmostEqual(order, 1.0, delta=0.2)

    def test_roundtrip(self):
        for field in (random_linear_field(2, 3, self.gen), MLPField(2, 3, hidden=(16, 16), generator=self.gen)):
            u1 = integrate(field, self.u0)
            back = integrate(field, u1, config=IntegratorConfig(direction='backward'))
            self.assertLess((back - self.u0).abs().max().item(), 1e-6)

    def test_trajectory(self):
        field = random_linear_field(2, 3, self.gen)
        u1, path = integrate(field, self.u0, config=IntegratorConfig(steps=10), trajectory=True)
        self.assertEqual(len(path), 11)
        self.assertEqual(path.times[0].item(), 0.0)
        self.assertEqual(path.times[-1].item(), 1.0)
        self.assertTrue(torch.equal(path.states[0], self.u0))
        self.assertTrue(torch.equal(path.states[-1], u1))
        self.assertEqual(len(list(path)), 11)

        W = path.assignments()
        self.assertEqual(W.shape, (11, 4, 2, 3))
        self.assertLess((W.sum(-1) - 1).abs().max().item(), 1e-12)

    def test_direction_mismatch(self):
        field = LinearField(2, 3)
        with self.assertRaises(ValueError):
            integrate(field, self.u0, 1.0, 0.0)
        with self.assertRaises(ValueError):
            integrate(field, self.u0, 0.0, 1.0, IntegratorConfig(direction='backward'))
        with self.assertRaises(ValueError):
            integrate(field, self.u0, 0.5, 0.5)

    def test_non_finite(self):
        field = LinearField(2, 3)
        with torch.no_grad():
            field.layers[0].weight.fill_(math.nan)
        with self.assertRaises(NonFiniteError) as ctx:
            integrate(field, self.u0)
        self.assertEqual(ctx.exception.step, 0)


class TestSampling(unittest.TestCase):
    def setUp(self):
        self.field = LinearField(2, 3)

    def test_zero_field_marginals(self):
        """ An untrained field rounds the reference samples, so every category is equally likely """
        count = 10 ** 5
        samples = sample_configurations(self.field, count, torch.Generator().manual_seed(31))
        self.assertEqual(samples.shape, (count, 2))

        sigma = math.sqrt((1 / 3) * (2 / 3) / count)
        for i in range(2):
            freq = torch.bincount(samples[:, i], minlength=3).double() / count
            self.assertLess((freq - 1 / 3).abs().max().item(), 4 * sigma)

    def test_counts(self):
        self.assertEqual(sample_configurations(self.field, 0).shape, (0, 2))
        self.assertEqual(sample_configurations(self.field, 1).shape, (1, 2))
        with self.assertRaises(ValueError):
            sample_configurations(self.field, -1)

    def test_chunks_and_seed(self):
        a = sample_configurations(self.field, 50, torch.Generator().manual_seed(32), chunk_size=7)
        b = sample_configurations(self.field, 50, torch.Generator().manual_seed(32), chunk_size=7)
        self.assertTrue(torch.equal(a, b))
        self.assertEqual(a.shape, (50, 2))

    def test_ties(self):
        samples, ties = sample_configurations(self.field, 10, torch.Generator().manual_seed(33), ties=True)
        self.assertEqual(samples.shape, (10, 2))
        self.assertEqual(ties, 0)

    def test_backward_config(self):
        with self.assertRaises(ValueError):
            sample_configurations(self.field, 10, config=IntegratorConfig(direction='backward'))


if __name__ == '__main__':
    unittest.main()
