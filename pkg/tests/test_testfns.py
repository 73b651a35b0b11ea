import numpy as np
import pytest

from fourier_cur.errors import InvalidArgumentError
from fourier_cur.testfns import REGISTRY, f1, f2, f3, get_function, register, test_function

PROBE = np.linspace(-np.pi, np.pi, 1000)
X1, X2 = np.meshgrid(PROBE, PROBE, indexing="ij")


def test_point_values():
    assert f2(0, 0) == 1.0
    assert test_function("f3", 0.0, 0.0) == pytest.approx(10 + 1 / 0.51, abs=1e-12)
    expected = (5 ** 0.75 * 15 / (4 * np.sqrt(3))) ** 2 / 25
    assert f1(0.5, 0.5) == pytest.approx(expected, rel=1e-14)
    assert f1(0.5, 0.5) == pytest.approx(2.0963, abs=1e-4)


def test_f1_support():
    v = f1(X1, X2)
    assert np.all(v >= 0)
    outside = (np.abs(X1 - 0.5) >= 1 / np.sqrt(5)) | (np.abs(X2 - 0.5) >= 1 / np.sqrt(5))
    assert np.all(v[outside] == 0) and np.all(v[~outside] > 0)


def test_f3_positive_and_all_bounded():
    assert np.all(f3(X1, X2) > 0)
    for f in (f1, f2, f3):
        assert np.isfinite(f(X1, X2)).all()


def test_registry():
    assert {"f1", "f2", "f3"} <= set(REGISTRY)
    with pytest.raises(InvalidArgumentError):
        get_function("f9")
    g = register("_tmp", lambda a, b: a + b)
    try:
        assert test_function("_tmp", 1.0, 2.0) == 3.0 and get_function("_tmp") is g
    finally:
        del REGISTRY["_tmp"]
