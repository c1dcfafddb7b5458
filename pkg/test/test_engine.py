# -*- coding: utf-8 -*-
import math
import os
import tempfile
import unittest
import torch
import assignflow as af
from assignflow.engine import *
from assignflow.data import ConfigurationDataset, targets
from assignflow.errors import DimensionError
from assignflow.flow import sample_configurations
from assignflow.geometry import empirical_joint, marginalize, tv_distance


class TestHyperParameters(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name, text=None):
        fn = os.path.join(self.tmp.name, name)
        if text is not None:
            with open(fn, 'w') as f:
                f.write(text)
        return fn

    def test_defaults(self):
        params = HyperParameters()
        self.assertEqual(params.variant, 'linear')
        self.assertEqual(params.hidden, (256, 256))
        self.assertEqual(params.batch_size, 512)
        self.assertEqual(params.steps, 2000)
        self.assertEqual(params.lr, 0.0005)
        self.assertEqual(params.eps, 0.01)
        self.assertEqual(params.mass, 0.8)
        self.assertIsNone(params.n)
        self.assertEqual(params.batch, 0)
        self.assertEqual(params.explicit, set())

    def test_parsing(self):
        params = HyperParameters(steps='10', hidden='32, 16', bias='yes', n='none', lr='1e-3')
        self.assertEqual(params.steps, 10)
        self.assertEqual(params.hidden, (32, 16))
        self.assertIs(params.bias, True)
        self.assertIsNone(params.n)
        self.assertEqual(params.lr, 0.001)
        self.assertEqual(params.explicit, {'steps', 'hidden', 'bias', 'n', 'lr'})

        with self.assertRaises(ValueError):
            HyperParameters(steps='ten')
        with self.assertRaises(ValueError):
            HyperParameters(bias='maybe')

    def test_unknown_keys(self):
        with self.assertRaises(ValueError):
            HyperParameters(learning_rate=0.1)

    def test_private_keys(self):
        params = HyperParameters(_note='not serialized')
        self.assertEqual(params.note, 'not serialized')
        params.save(self.path('run.cfg'))
        with open(self.path('run.cfg')) as f:
            self.assertNotIn('note', f.read())

    def test_validation(self):
        for kwargs in (
            dict(eps=0),
            dict(eps=1),
            dict(mass=1.0),
            dict(t_end=0),
            dict(t_end=1.5),
            dict(variant='cnn'),
            dict(scheme='midpoint'),
            dict(divergence='trace'),
            dict(lr_schedule='step'),
            dict(lr=0),
            dict(batch_size=0),
            dict(steps=-1),
            dict(hidden='64,0'),
            dict(c=1),
            dict(n=0),
        ):
            with self.assertRaises(ValueError, msg=str(kwargs)):
                HyperParameters(**kwargs)

    def test_flat_file(self):
        fn = self.path('run.cfg', '# toy run\nsteps = 25\nvariant=mlp  # inline comment\n\nhidden = 8,8\n')
        params = HyperParameters.from_file(fn)
        self.assertEqual(params.steps, 25)
        self.assertEqual(params.variant, 'mlp')
        self.assertEqual(params.hidden, (8, 8))

        with self.assertRaises(ValueError):
            HyperParameters.from_file(self.path('bad.cfg', 'steps 25\n'))
        with self.assertRaises(ValueError):
            HyperParameters.from_file(self.path('unknown.cfg', 'epochs = 3\n'))

    def test_save_roundtrip(self):
        params = HyperParameters(steps=7, variant='mlp', hidden=(4, 5), bias=True, n=3, c=4, scheme='euler')
        params.save(self.path('run.cfg'))
        loaded = HyperParameters.from_file(self.path('run.cfg'))
        self.assertEqual(repr(loaded), repr(params))

    def test_python_file(self):
        params = HyperParameters.from_file(self.path('a.py', "params = {'steps': 3, 'variant': 'mlp'}\n"))
        self.assertEqual((params.steps, params.variant), (3, 'mlp'))

        fn = self.path('b.py', "def config(steps=1):\n    return {'steps': steps}\n")
        self.assertEqual(HyperParameters.from_file(fn, variable='config', steps=9).steps, 9)

        fn = self.path('c.py', "import assignflow as af\nparams = af.engine.HyperParameters(lr=0.1)\n")
        self.assertEqual(HyperParameters.from_file(fn).lr, 0.1)

        with self.assertRaises(AttributeError):
            HyperParameters.from_file(self.path('d.py', 'other = {}\n'))
        with self.assertRaises(TypeError):
            HyperParameters.from_file(self.path('e.py', 'params = 5\n'))

    def test_update(self):
        params = HyperParameters(steps=5)
        params.update(steps=None, lr=0.01, scheme='euler')
        self.assertEqual(params.steps, 5)
        self.assertEqual(params.lr, 0.01)
        self.assertEqual(params.explicit, {'steps', 'lr', 'scheme'})
        with self.assertRaises(ValueError):
            params.update(eps=2)

    def test_views(self):
        params = HyperParameters(steps=5, seed=3, scheme='euler', integration_steps=20)
        config = params.train_config()
        self.assertIsInstance(config, TrainConfig)
        self.assertEqual((config.steps, config.seed, config.variant), (5, 3, 'linear'))

        integrator = params.integrator_config('backward')
        self.assertEqual((integrator.scheme, integrator.steps, integrator.direction), ('euler', 20, 'backward'))

    def test_add_optimizer(self):
        params = HyperParameters()
        net = torch.nn.Linear(2, 2)
        first = torch.optim.SGD(net.parameters(), lr=0.1)
        second = torch.optim.Adam(net.parameters())
        params.add_optimizer(first)
        params.add_optimizer(second)
        self.assertIs(params.optimizer, first)
        self.assertEqual(params.optimizers, [first, second])

        scheduler = torch.optim.lr_scheduler.StepLR(first, 1)
        params.add_scheduler(scheduler)
        self.assertIs(params.scheduler, scheduler)
        self.assertNotIn('optimizers', repr(params))


class CountingEngine(Engine):
    def process_batch(self, data):
        self.seen.append(data)

    def train_batch(self):
        pass

    @Engine.batch_end(2)
    def every_second(self):
        self.hook_calls.append(self.batch)


class PlainEngine(Engine):
    def process_batch(self, data):
        pass

    def train_batch(self):
        pass


class TestEngine(unittest.TestCase):
    def setUp(self):
        self.params = HyperParameters(network=torch.nn.Linear(1, 1))

    def test_hooks(self):
        engine = CountingEngine(self.params, range(6), seen=[], hook_calls=[])
        instance_calls = []
        engine.add_hook('batch_start', lambda eng: instance_calls.append(eng.batch), 3)
        engine()

        self.assertEqual(engine.seen, list(range(6)))
        self.assertEqual(engine.hook_calls, [2, 4, 6])
        self.assertEqual(instance_calls, [3, 6])
        self.assertEqual(self.params.batch, 6)
        self.assertFalse(self.params.network.training)

    def test_hooks_do_not_leak(self):
        self.assertEqual(PlainEngine._hooks['batch_end'], ())
        self.assertEqual(len(CountingEngine._hooks['batch_end']), 1)
        with self.assertRaises(ValueError):
            PlainEngine(self.params, []).add_hook('epoch_end', print)

    def test_quit(self):
        class StoppingEngine(CountingEngine):
            def quit(self):
                return self.batch >= 3

        engine = StoppingEngine(self.params, range(10), seen=[], hook_calls=[])
        engine()
        self.assertEqual(engine.seen, [0, 1, 2])
        self.assertEqual(engine.hook_calls, [2])

    def test_attribute_forwarding(self):
        engine = PlainEngine(self.params, [])
        self.assertEqual(engine.steps, self.params.steps)
        engine.steps = 11
        self.assertEqual(self.params.steps, 11)
        with self.assertRaises(AttributeError):
            engine.does_not_exist


class TestTrain(unittest.TestCase):
    def setUp(self):
        p, n, c = targets.coupled_binaries()
        self.dataset = ConfigurationDataset(targets.sample_joint(p, n, c, 500, torch.Generator().manual_seed(20)), c)

    def short_run(self, **kwargs):
        config = dict(steps=5, batch_size=16, variant='mlp', hidden=(8, 8), lr=0.01)
        config.update(kwargs)
        return train(self.dataset, HyperParameters(**config), log_interval=2)

    def test_derive_generators(self):
        a = [torch.rand(3, generator=g) for g in derive_generators(4)]
        b = [torch.rand(3, generator=g) for g in derive_generators(4)]
        self.assertTrue(all(torch.equal(x, y) for x, y in zip(a, b)))
        self.assertFalse(torch.equal(a[0], a[1]))

    def test_zero_steps(self):
        field, losses = train(self.dataset, TrainConfig(steps=0))
        self.assertEqual(losses, [])
        self.assertIsInstance(field, af.models.LinearField)
        self.assertTrue(all((p == 0).all() for p in field.parameters()))

    def test_short_run(self):
        field, losses = self.short_run()
        self.assertEqual(len(losses), 5)
        self.assertTrue(all(math.isfinite(loss) for loss in losses))
        self.assertFalse(field.training)

    def test_deterministic(self):
        """ Same seed and dataset give bitwise identical parameters and traces """
        field_a, losses_a = self.short_run(seed=7)
        field_b, losses_b = self.short_run(seed=7)
        self.assertEqual(losses_a, losses_b)
        for a, b in zip(field_a.parameters(), field_b.parameters()):
            self.assertTrue(torch.equal(a, b))

        field_c, losses_c = self.short_run(seed=8)
        self.assertNotEqual(losses_a, losses_c)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            train(self.dataset, HyperParameters(steps=1, n=3))
        with self.assertRaises(DimensionError):
            train(self.dataset, HyperParameters(steps=1), field=af.models.LinearField(2, 3))

    def test_cosine_schedule(self):
        params = HyperParameters(steps=4, batch_size=8, lr_schedule='cosine')
        train(self.dataset, params)
        self.assertEqual(params.batch, 4)
        self.assertLess(params.optimizer.param_groups[0]['lr'], 1e-12)

    def test_reused_parameters(self):
        """ Training twice with one configuration replaces the optimizer and scheduler """
        params = HyperParameters(steps=3, batch_size=8, lr_schedule='cosine')
        train(self.dataset, params)
        train(self.dataset, params)
        self.assertEqual(len(params.optimizers), 1)
        self.assertEqual(len(params.schedulers), 1)
        self.assertEqual(params.batch, 3)

    def test_deterministic_setting_restored(self):
        before = torch.are_deterministic_algorithms_enabled()
        self.short_run(deterministic=True)
        self.assertEqual(torch.are_deterministic_algorithms_enabled(), before)
        self.short_run(deterministic=False)
        self.assertEqual(torch.are_deterministic_algorithms_enabled(), before)

    def test_report_hook_registered_once(self):
        """ Calling an engine again reports every step once """
        field = af.models.LinearField(2, 2)
        params = HyperParameters(steps=2, batch_size=4, n=2, c=2, network=field)
        params.add_optimizer(torch.optim.Adam(field.parameters()))
        loader = af.data.resampling_dataloader(self.dataset, 4, 2, generator=torch.Generator().manual_seed(23))
        engine = FlowMatchingEngine(params, loader, generator=torch.Generator().manual_seed(24), log_interval=1)

        for _ in range(2):
            with self.assertLogs('assignflow', level='INFO') as cm:
                engine()
            self.assertEqual(sum(r.levelname == 'TRAIN' for r in cm.records), 2)
        self.assertEqual(len(engine.loss_trace), 4)

    @unittest.skipUnless(os.environ.get('AF_SLOW'), 'Long training run, set AF_SLOW to enable')
    def test_coupled_binaries(self):
        p, n, c = targets.coupled_binaries()
        data = targets.sample_joint(p, n, c, 10 ** 5, torch.Generator().manual_seed(21))
        field, losses = train(ConfigurationDataset(data, c), TrainConfig())
        self.assertTrue(all(math.isfinite(loss) for loss in losses))

        samples = sample_configurations(field, 10 ** 4, torch.Generator().manual_seed(22))
        emp = empirical_joint(samples, c)
        self.assertLessEqual(tv_distance(emp, p).item(), 0.05)
        self.assertLessEqual(tv_distance(marginalize(emp, n, c), marginalize(p, n, c)).max().item(), 0.03)

    @unittest.skipUnless(os.environ.get('AF_SLOW'), 'Long training run, set AF_SLOW to enable')
    def test_gaussian_mixture(self):
        p, n, c = targets.gaussian_mixture(16)
        data = targets.sample_joint(p, n, c, 10 ** 5, torch.Generator().manual_seed(23))
        params = HyperParameters(variant='mlp', hidden=(64, 64), steps=5000, lr=1e-3, lr_schedule='cosine')
        field, _ = train(ConfigurationDataset(data, c), params)

        samples = sample_configurations(field, 10 ** 5, torch.Generator().manual_seed(24))
        emp = empirical_joint(samples, c)
        self.assertLessEqual(tv_distance(emp, p).item(), 0.15)
        self.assertEqual(set(emp.topk(4).indices.tolist()), set(p.topk(4).indices.tolist()))


if __name__ == '__main__':
    unittest.main()
