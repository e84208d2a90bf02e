import numpy as np

from errors import ConfigurationError


def normalize_key(key):
    '''
    Config keys are case insensitive, and - and _ mean the same thing.
    '''
    return key.strip().lower().replace('-', '_')


def parse_float(text, name):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise ConfigurationError(f'{name} must be a number, got {text!r}.')

    if not np.isfinite(value):
        raise ConfigurationError(f'{name} must be finite, got {text!r}.')

    return value


def parse_int(text, name):
    '''
    Parse a base 10 integer. Floats with an integral value ("1e4") are accepted.
    '''

    try:
        return int(str(text).strip())
    except ValueError:
        pass

    value = parse_float(text, name)

    if value != int(value):
        raise ConfigurationError(f'{name} must be an integer, got {text!r}.')

    return int(value)


def parse_amplitudes(text):
    '''
    Parse comma separated complex amplitudes, e.g. "0.6, 0.8j" or "1, -0.5+0.5j".
    '''

    try:
        amplitudes = [complex(part.strip().replace(' ', '')) for part in text.split(',')]
    except ValueError:
        raise ConfigurationError(f'Cannot read amplitudes from {text!r}.')

    if not all(np.isfinite(a) for a in amplitudes):
        raise ConfigurationError(f'Amplitudes must be finite, got {text!r}.')

    return np.array(amplitudes, dtype = np.complex128)


class Sweep:
    """
    A parameter swept over an evenly spaced grid, written NAME=START:STOP:N.
    """

    def __init__(self, name, start, stop, count):
        self.name = name
        self.start = start
        self.stop = stop
        self.count = count


    @classmethod
    def parse(cls, text):
        name, sep, grid = text.partition('=')
        parts = grid.split(':')

        if not sep or len(parts) != 3:
            raise ConfigurationError(f'Sweep must look like NAME=START:STOP:N, got {text!r}.')

        count = parse_int(parts[2], 'sweep point count')

        if count < 1:
            raise ConfigurationError(f'Sweep needs at least one point, got {count}.')

        return cls(normalize_key(name), parse_float(parts[0], 'sweep start'), parse_float(parts[1], 'sweep stop'), count)


    def values(self):
        return np.linspace(self.start, self.stop, self.count)


    def __str__(self):
        return f'{self.name}={self.start:g}:{self.stop:g}:{self.count}'


def time_grid(t_max, points):
    return np.linspace(0.0, t_max, points)
