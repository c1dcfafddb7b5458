# -*- coding: utf-8 -*-
#
#   Base engine class
#

import logging
import signal
from abc import ABC, abstractmethod

import assignflow as af

__all__ = ['Engine']
log = logging.getLogger(__name__)


class Engine(ABC):
    """ This class removes the boilerplate code needed for writing a step-based training cycle. |br|
    Here is the code that runs when the engine is called:

    .. literalinclude:: /../assignflow/engine/_engine.py
       :language: python
       :pyobject: Engine.__call__
       :dedent: 4

    Args:
        params (assignflow.engine.HyperParameters): Run configuration for the engine to work with
        dataloader (iterable, optional): Iterable yielding one batch per optimizer step
        **kwargs (dict, optional): Keywords arguments that will be set as attributes of the engine

    Attributes:
        self.sigint: Boolean value indicating whether a SIGINT (CTRL+C) was send; Default **False**
        self.*: All values of the :class:`~assignflow.engine.HyperParameters` can be accessed in this class as well

    Note:
        Hook functions run at the start or end of every Xth batch.
        Methods decorated inside the class body are collected for that class and its subclasses.
        Other functions can be added to a single engine with :meth:`add_hook`.

        >>> class TrainingEngine(af.engine.Engine):
        ...     def process_batch(self, data):
        ...         pass
        ...
        ...     def train_batch(self):
        ...         pass
        ...
        ...     @af.engine.Engine.batch_end(100)
        ...     def backup(self):
        ...         pass    # This method will be executed at the end of every 100th batch
    """

    _init_done = False
    _hooks = {'batch_start': (), 'batch_end': ()}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        hooks = {kind: list(fns) for kind, fns in cls._hooks.items()}
        for attr in vars(cls).values():
            for kind, interval in getattr(attr, '_engine_hooks', ()):
                hooks[kind].append((interval, attr))
        cls._hooks = {kind: tuple(fns) for kind, fns in hooks.items()}

    def __init__(self, params, dataloader=None, **kwargs):
        self.params = params
        if dataloader is not None:
            self.dataloader = dataloader
        else:
            log.warning('No dataloader given, make sure to have a self.dataloader property for this engine to work with.')

        self.sigint = False
        self._instance_hooks = {'batch_start': [], 'batch_end': []}

        # Logging
        self.__log = af.logger

        # Set attributes
        for key in kwargs:
            if not hasattr(self, key):
                setattr(self, key, kwargs[key])
            else:
                log.warning(f'{key} attribute already exists on engine.')

        self._init_done = True

    def __call__(self):
        """ Start the training cycle. """
        previous = signal.signal(signal.SIGINT, self.__sigint_handler)
        try:
            self.start()

            log.info('Start training')
            self.network.train()

            for data in self.dataloader:
                # Batch Start
                self.batch += 1
                self._run_hooks(self.batch, 'batch_start')

                # Forward, backward and optimizer step
                self.process_batch(data)
                self.train_batch()

                # Batch End
                self._run_hooks(self.batch, 'batch_end')

                # Check if we need to stop training
                if self.quit() or self.sigint:
                    log.info('Reached quitting criteria')
                    break
        finally:
            signal.signal(signal.SIGINT, previous)
            self.network.eval()

    def __getattr__(self, name):
        if name != 'params' and hasattr(self.params, name):
            return getattr(self.params, name)
        else:
            raise AttributeError(f'{name} attribute does not exist')

    def __setattr__(self, name, value):
        if self._init_done and name not in dir(self) and hasattr(self.params, name):
            setattr(self.params, name, value)
        else:
            super().__setattr__(name, value)

    def __sigint_handler(self, signal, frame):
        if not self.sigint:
            log.debug('SIGINT caught. Waiting for gracefull exit')
            self.sigint = True

    def log(self, msg):
        """ Log messages about training and testing.
        This function will automatically prepend the messages with **TRAIN** or **TEST**.

        Args:
            msg (str): message to be printed
        """
        if self.network.training:
            self.__log.train(msg)
        else:
            self.__log.test(msg)

    def add_hook(self, kind, fn, interval=1):
        """ Register a hook on this engine only.

        Args:
            kind (str): ``'batch_start'`` or ``'batch_end'``
            fn (callable): Bound method without arguments or function taking the engine as single argument
            interval (int, optional): Number dictating how often to run the hook; Default **1**
        """
        if kind not in self._instance_hooks:
            raise ValueError(f'Unknown hook type [{kind}]')
        self._instance_hooks[kind].append((interval, fn))

    def _run_hooks(self, value, kind):
        """ Internal method that will execute registered hooks. """
        for interval, fn in (*self._hooks[kind], *self._instance_hooks[kind]):
            if value % interval == 0:
                if hasattr(fn, '__self__'):
                    fn()
                else:
                    fn(self)

    @staticmethod
    def _mark(kind, interval):
        def decorator(fn):
            fn._engine_hooks = getattr(fn, '_engine_hooks', ()) + ((kind, interval),)
            return fn

        return decorator

    @classmethod
    def batch_start(cls, interval=1):
        """ Decorator marking a method to run at the start of every Xth batch.

        Args:
            interval (int, optional): Number dictating how often to run the hook; Default **1**
        """
        return cls._mark('batch_start', interval)

    @classmethod
    def batch_end(cls, interval=1):
        """ Decorator marking a method to run at the end of every Xth batch.

        Args:
            interval (int, optional): Number dictating how often to run the hook; Default **1**
        """
        return cls._mark('batch_end', interval)

    def start(self):
        """ First function that gets called when starting the engine. |br|
        Any required setup code can come in here.
        """
        pass

    @abstractmethod
    def process_batch(self, data):
        """ This function should contain the code to process the forward and backward pass of one batch. """
        pass

    @abstractmethod
    def train_batch(self):
        """ This function should contain the code to update the weights of the network. |br|
        Statistical computations, performing backups at regular intervals, etc. also happen here.
        """
        pass

    def quit(self):
        """ This function gets called after every training step and decides if the training cycle continues.

        Return:
            Boolean: Whether are not to stop the training cycle

        Note:
            This function gets called before checking the ``self.sigint`` attribute.
            If it evaluates to **True**, the cycle stops after this step.
        """
        return False
