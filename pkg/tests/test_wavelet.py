import math

import numpy as np
import pytest

import oracles
from hybridtumor.imaging import GrayImage
from hybridtumor.wavelet import DB2, HAAR, SwtSubbands, WaveletFilterPair, iswt2, swt2


@pytest.mark.parametrize("pair", [HAAR, DB2], ids=["haar", "db2"])
def test_filter_orthonormality(pair):
    lo, hi = np.array(pair.lo), np.array(pair.hi)
    assert abs((lo**2).sum() - 1) < 1e-12
    assert abs((hi**2).sum() - 1) < 1e-12
    assert abs((lo * hi).sum()) < 1e-12


def test_haar_coefficients():
    s = 1 / math.sqrt(2)
    assert HAAR.lo == (s, s) and HAAR.hi == (s, -s)


def test_filter_validation():
    with pytest.raises(ValueError):
        WaveletFilterPair((1.0,), (1.0,))
    with pytest.raises(ValueError):
        WaveletFilterPair((1.0, 1.0), (1.0, 1.0, 0.0, 0.0))


def test_constant_image():
    sub = swt2(GrayImage(np.full((12, 10), 37, dtype=np.uint8)))
    assert np.allclose(sub.A, 74.0, atol=1e-12, rtol=0)
    for plane in (sub.H, sub.V, sub.D):
        assert np.abs(plane).max() <= 1e-12


@pytest.mark.parametrize("pair", [HAAR, DB2], ids=["haar", "db2"])
@pytest.mark.parametrize("seed", range(3))
def test_matches_direct_sum(pair, seed):
    x = np.random.default_rng(seed).normal(size=(8, 8)) * 50
    ref = oracles.swt2_bruteforce(x.tolist(), pair.lo, pair.hi)
    sub = swt2(x, pair)
    for name in "AHVD":
        assert np.allclose(getattr(sub, name), ref[name], atol=1e-10, rtol=0)


def test_planes_keep_shape():
    sub = swt2(np.zeros((9, 13)))
    assert all(p.shape == (9, 13) for p in sub)


@pytest.mark.parametrize("shift", [(1, 0), (0, 3), (5, 2)])
def test_shift_equivariance(shift):
    x = np.random.default_rng(4).integers(0, 256, (16, 16)).astype(float)
    a = swt2(np.roll(x, shift, axis=(0, 1)))
    b = swt2(x)
    for pa, pb in zip(a, b):
        assert np.allclose(pa, np.roll(pb, shift, axis=(0, 1)), atol=1e-12, rtol=0)


@pytest.mark.parametrize("pair", [HAAR, DB2], ids=["haar", "db2"])
def test_round_trip(pair):
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.normal(size=(16, 16)) * 100
        assert np.abs(iswt2(swt2(x, pair), pair) - x).max() <= 1e-9


def test_zero_and_constant_inverse():
    z = np.zeros((6, 6))
    assert (iswt2(SwtSubbands(z, z, z, z)) == 0).all()
    x = np.full((6, 6), 3.25)
    assert np.abs(iswt2(swt2(x)) - 3.25).max() <= 1e-9


def test_linearity():
    rng = np.random.default_rng(2)
    x, y = rng.normal(size=(10, 10)), rng.normal(size=(10, 10))
    a, b = 2.5, -0.75
    lhs = swt2(a * x + b * y)
    for pl, px, py in zip(lhs, swt2(x), swt2(y)):
        assert np.allclose(pl, a * px + b * py, atol=1e-9, rtol=0)


def test_energy():
    x = np.random.default_rng(9).normal(size=(20, 14))
    e = sum((p**2).sum() for p in swt2(x))
    assert e == pytest.approx(4 * (x**2).sum(), rel=1e-6)


def test_errors():
    with pytest.raises(ValueError):
        swt2(np.zeros((3, 3)), DB2)
    z = np.zeros((4, 4))
    with pytest.raises(ValueError):
        iswt2(SwtSubbands(z, z, z, np.zeros((4, 5))))
