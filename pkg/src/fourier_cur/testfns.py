"""Benchmark functions on [-pi, pi]^2 and a name registry for the CLI."""
import numpy as np

from .errors import InvalidArgumentError

__all__ = ["f1", "f2", "f3", "REGISTRY", "get_function", "test_function", "register"]

_KINK_SCALE = (5 ** 0.75 * 15 / (4 * np.sqrt(3))) ** 2


def f1(x1, x2):
    """Kink function: product of truncated parabolas centred at (1/2, 1/2)."""
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return (_KINK_SCALE
            * np.maximum(0.0, 0.2 - (x1 - 0.5) ** 2)
            * np.maximum(0.0, 0.2 - (x2 - 0.5) ** 2))


def f2(x1, x2):
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return (1.0 - x1**2 - x2**2) * np.exp(x1 * np.cos(x2))


def f3(x1, x2):
    x1, x2 = np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)
    return 1.0 / (0.1 + x1**2 + x2**2) + 1.0 / (0.01 + (x1 - 0.5) ** 2 + (x2 - 0.5) ** 2)


REGISTRY = {"f1": f1, "f2": f2, "f3": f3}


def register(name, func):
    """Add a vectorised bivariate function under ``name``."""
    REGISTRY[name] = func
    return func


def get_function(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown test function {name!r}; registered: {', '.join(sorted(REGISTRY))}"
        ) from None


def test_function(name, x1, x2):
    return get_function(name)(x1, x2)


# keep pytest from collecting test_function when imported into test modules
test_function.__test__ = False
