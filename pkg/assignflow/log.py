# -*- coding: utf-8 -*-
#
#   Assignflow logger: console and file logging for the assignflow.* loggers
#   Adds the TRAIN and TEST levels, used for loss reports and likelihood bounds.
#

import os
import copy
import types
import logging

__all__ = ['logger']

LEVELS = {
    'TEST': 38,
    'TRAIN': 39,
}

_BOLD = '\033[01m'
_RESET = '\033[00m'
_COLORS = {
    'CRITICAL': '\033[31m',
    'ERROR': '\033[31m',
    'TRAIN': '\033[34m',
    'TEST': '\033[32m',
    'WARNING': '\033[33m',
    'INFO': '\033[37m',
    'DEBUG': '\033[1;30m',
}


class ColoredFormatter(logging.Formatter):
    """ Formatter that pads the level name and optionally colors it. """

    def __init__(self, fmt, color=True, **kwargs):
        super().__init__(fmt, **kwargs)
        self.color = color

    def format(self, record):
        record = copy.copy(record)
        name = record.levelname
        if self.color and name in _COLORS:
            record.levelname = f'{_BOLD}{_COLORS[name]}{name:10}{_RESET}'
        else:
            record.levelname = f'{name:10}'
        return super().format(record)

    def setColor(self, value):
        """ Enable or disable colored console output. """
        self.color = value


class LevelFilter(logging.Filter):
    """ Only let records through whose level name is in ``levels`` (``None`` lets everything through). """

    def __init__(self, levels=None):
        super().__init__()
        self.levels = None if levels is None else frozenset(levels)

    def filter(self, record):
        return self.levels is None or record.levelname in self.levels


def _level_method(level):
    def method(self, message, *args, **kwargs):
        if self.isEnabledFor(level):
            self._log(level, message, args, **kwargs)

    return method


for _name, _level in LEVELS.items():
    logging.addLevelName(_level, _name)
    setattr(logging.Logger, _name.lower(), _level_method(_level))


def _console_handler():
    handler = logging.StreamHandler()
    level = os.environ.get('AF_LOGLVL', 'INFO').upper()
    handler.setLevel(int(level) if level.isdigit() else level)
    if level == 'DEBUG':
        handler.setFormatter(ColoredFormatter('{levelname} [{name}] {message}', style='{'))
    else:
        handler.setFormatter(ColoredFormatter('{levelname} {message}', style='{'))
    return handler


def createFileHandler(self, filename, levels=None, filemode='a'):
    """ Write log messages of the assignflow loggers to a file.

    Args:
        filename (str): Path of the log file
        levels (iterable of str, optional): Level names to write, eg. ``('TRAIN', 'TEST')``; Default **all**
        filemode (str, optional): File opening mode; Default **'a'**

    Returns:
        logging.FileHandler: The handler, so it can be removed again with ``logger.removeHandler``
    """
    fh = logging.FileHandler(filename=filename, mode=filemode)
    fh.setLevel(logging.NOTSET)
    fh.addFilter(LevelFilter(levels))
    fh.setFormatter(logging.Formatter('{asctime} {levelname} [{name}] {message}', style='{'))
    self.addHandler(fh)
    return fh


_console = _console_handler()

logger = logging.getLogger('assignflow')
logger.setLevel(logging.DEBUG)
logger.addHandler(_console)
logger.setConsoleLevel = _console.setLevel
logger.setConsoleColor = _console.formatter.setColor
logger.setLogFile = types.MethodType(createFileHandler, logger)
