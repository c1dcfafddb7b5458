# -*- coding: utf-8 -*-
import math
import unittest
import torch
from assignflow.errors import DenseBudgetError, DimensionError
from assignflow.geometry import *
from assignflow.data.targets import sample_joint


class TestIndexing(unittest.TestCase):
    def test_row_major_order(self):
        configs = all_configurations(2, 3)
        self.assertEqual(configs.shape, (9, 2))
        self.assertEqual(configs[0].tolist(), [0, 0])
        self.assertEqual(configs[1].tolist(), [0, 1])
        self.assertEqual(configs[3].tolist(), [1, 0])
        self.assertTrue(torch.equal(configuration_to_index(configs, 3), torch.arange(9)))

    def test_dense_budget(self):
        self.assertEqual(num_configurations(3, 4), 64)
        with self.assertRaises(DenseBudgetError):
            num_configurations(25, 2)
        with self.assertRaises(DenseBudgetError):
            embed(barycenter(25, 2))


class TestEmbedding(unittest.TestCase):
    def setUp(self):
        self.gen = torch.Generator().manual_seed(5)

    def random_state(self, n, c):
        return torch.softmax(torch.randn(n, c, dtype=torch.double, generator=self.gen), -1)

    def test_product_of_two_binaries(self):
        w1, w2 = 0.3, 0.8
        W = torch.tensor([[w1, 1 - w1], [w2, 1 - w2]], dtype=torch.double)
        expected = torch.tensor([w1 * w2, w1 * (1 - w2), (1 - w1) * w2, (1 - w1) * (1 - w2)], dtype=torch.double)
        self.assertTrue(torch.allclose(embed(W), expected, atol=1e-15))

        W = torch.tensor([[0.9, 0.1], [0.9, 0.1]], dtype=torch.double)
        expected = torch.tensor([0.81, 0.09, 0.09, 0.01], dtype=torch.double)
        self.assertTrue(torch.allclose(embed(W), expected, atol=1e-15))

    def test_barycenter_is_uniform(self):
        p = embed(barycenter(3, 3))
        self.assertTrue(torch.allclose(p, torch.full((27,), 1 / 27, dtype=torch.double), atol=1e-15))

    def test_normalization(self):
        for n, c in ((2, 2), (3, 4), (5, 2)):
            self.assertLess(abs(embed(self.random_state(n, c)).sum().item() - 1), 1e-10)

    def test_marginalize_embed_identity(self):
        for n, c in ((1, 3), (2, 2), (3, 3), (4, 2)):
            W = self.random_state(n, c)
            self.assertLess((marginalize(embed(W), n, c) - W).abs().max().item(), 1e-12)

    def test_marginals_of_extreme_points(self):
        beta = torch.tensor([1, 0, 2])
        p = torch.zeros(27, dtype=torch.double)
        p[configuration_to_index(beta, 3)] = 1
        expected = torch.nn.functional.one_hot(beta, 3).double()
        self.assertTrue(torch.equal(marginalize(p, 3, 3), expected))

    def test_marginals_of_coupled_binaries(self):
        p = torch.tensor([0.45, 0.05, 0.05, 0.45], dtype=torch.double)
        self.assertTrue(torch.allclose(marginalize(p, 2, 2), torch.full((2, 2), 0.5, dtype=torch.double)))

    def test_marginalize_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            marginalize(torch.full((5,), 0.2, dtype=torch.double), 2, 2)


class TestEntropy(unittest.TestCase):
    def setUp(self):
        self.gen = torch.Generator().manual_seed(6)

    def test_uniform_and_dirac(self):
        self.assertAlmostEqual(entropy(torch.full((4,), 0.25, dtype=torch.double)).item(), math.log(4), places=14)
        dirac = torch.tensor([0.0, 1.0, 0.0, 0.0], dtype=torch.double)
        self.assertEqual(entropy(dirac).item(), 0.0)

    def test_additivity_over_factors(self):
        W = torch.softmax(torch.randn(3, 4, dtype=torch.double, generator=self.gen), -1)
        joint = entropy(embed(W)).item()
        factors = sum(entropy(W[i]).item() for i in range(3))
        self.assertLess(abs(joint - factors), 1e-10)

    def test_product_has_maximum_entropy(self):
        """Among joints with the marginals of T(W), the product measure has the largest entropy (n=c=2 brute force)"""
        direction = torch.tensor([1.0, -1.0, -1.0, 1.0], dtype=torch.double)
        for w1, w2 in ((0.5, 0.5), (0.3, 0.8), (0.9, 0.2)):
            W = torch.tensor([[w1, 1 - w1], [w2, 1 - w2]], dtype=torch.double)
            product = embed(W)
            best = entropy(product).item()
            lo = -min(product[0], product[3]).item()
            hi = min(product[1], product[2]).item()
            for delta in torch.linspace(lo, hi, 201, dtype=torch.double):
                p = (product + delta * direction).clamp_min(0)
                self.assertTrue(torch.allclose(marginalize(p, 2, 2), W, atol=1e-12))
                self.assertLessEqual(entropy(p).item(), best + 1e-9)


class TestEmpiricalJoint(unittest.TestCase):
    def test_single_and_pair(self):
        beta = torch.tensor([[1, 0]])
        p = empirical_joint(beta, 2)
        self.assertTrue(torch.equal(p, torch.tensor([0.0, 0.0, 1.0, 0.0], dtype=torch.double)))

        p = empirical_joint(torch.tensor([[1, 0], [0, 1]]), 2)
        self.assertTrue(torch.equal(p, torch.tensor([0.0, 0.5, 0.5, 0.0], dtype=torch.double)))

    def test_empty_input(self):
        with self.assertRaises(ValueError):
            empirical_joint(torch.zeros((0, 2), dtype=torch.long), 2)

    def test_labels_out_of_range(self):
        """ Labels outside [0, c) are rejected instead of aliasing another configuration """
        with self.assertRaises(ValueError):
            empirical_joint(torch.tensor([[2, 0], [0, 0]]), 2)
        with self.assertRaises(ValueError):
            empirical_joint(torch.tensor([[0, 2]]), 2)
        with self.assertRaises(ValueError):
            empirical_joint(torch.tensor([[0, -1]]), 2)
        with self.assertRaises(ValueError):
            configuration_to_index(torch.tensor([3, 0]), 3)

    def test_concentration(self):
        p = torch.tensor([0.45, 0.05, 0.05, 0.45], dtype=torch.double)
        samples = sample_joint(p, 2, 2, 10 ** 6, torch.Generator().manual_seed(7))
        self.assertLess(tv_distance(empirical_joint(samples, 2), p).item(), 3 * math.sqrt(4 / 10 ** 6))


class TestTotalVariation(unittest.TestCase):
    def test_values(self):
        p = torch.tensor([0.45, 0.05, 0.05, 0.45], dtype=torch.double)
        uniform = torch.full((4,), 0.25, dtype=torch.double)
        self.assertEqual(tv_distance(p, p).item(), 0.0)
        self.assertAlmostEqual(tv_distance(uniform, p).item(), 0.4, places=15)

        e0 = torch.tensor([1.0, 0.0, 0.0, 0.0], dtype=torch.double)
        e1 = torch.tensor([0.0, 0.0, 1.0, 0.0], dtype=torch.double)
        self.assertEqual(tv_distance(e0, e1).item(), 1.0)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            tv_distance(torch.ones(4, dtype=torch.double) / 4, torch.ones(8, dtype=torch.double) / 8)


if __name__ == '__main__':
    unittest.main()
