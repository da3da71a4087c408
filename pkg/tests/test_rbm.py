import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nqsweights.exceptions import NumericOverflowError
from nqsweights.rbm import (
    FlatWeightVector,
    RbmParameters,
    flatten,
    grad_log_psi,
    init_random,
    log_psi,
    logcosh,
    logcosh_and_tanh,
    psi_vector,
    unflatten,
)
from nqsweights.spin_systems import HilbertBasis, SpinConfiguration

from oracles import central_difference


def random_params(rng, n, m, field, scale=0.5):
    w = rng.normal(0, scale, (m, n))
    b = rng.normal(0, scale, m)
    if field == "complex":
        w = w + 1j * rng.normal(0, scale, (m, n))
        b = b + 1j * rng.normal(0, scale, m)
    return RbmParameters(w, b, field)


def test_init_deterministic():
    a = init_random(8, 1, "real", seed=7)
    b = init_random(8, 1, "real", seed=7)
    np.testing.assert_array_equal(a.weights, b.weights)
    np.testing.assert_array_equal(a.hidden_bias, b.hidden_bias)
    c = init_random(8, 1, "real", seed=8)
    assert not np.array_equal(a.weights, c.weights)


def test_init_shapes():
    p = init_random(8, 1, "real", seed=3)
    assert p.weights.shape == (8, 8) and p.hidden_bias.shape == (8,)
    assert p.n_params == 72
    q = init_random(12, 2, "complex", seed=3)
    assert q.weights.shape == (24, 12) and q.hidden_bias.shape == (24,)
    assert q.weights.dtype == complex


def test_init_scale():
    p = init_random(12, 2, "complex", seed=0)
    v = p.vector()
    assert np.std(v.real) == pytest.approx(0.01, rel=0.15)
    assert np.std(v.imag) == pytest.approx(0.01, rel=0.15)
    assert abs(np.corrcoef(v.real, v.imag)[0, 1]) < 0.2


def test_zero_params_uniform():
    p = RbmParameters(np.zeros((3, 3)), np.zeros(3))
    for bits in range(8):
        assert log_psi(p, SpinConfiguration(3, bits)) == 0.0
    psi, c = psi_vector(p, HilbertBasis(3))
    np.testing.assert_array_equal(psi, np.ones(8))
    assert c == 0.0


def test_constant_unit():
    p = RbmParameters(np.zeros((1, 4)), [np.arccosh(np.e)])
    for bits in range(16):
        assert log_psi(p, SpinConfiguration(4, bits)) == pytest.approx(1.0, abs=1e-14)


def test_logcosh_matches_naive_and_is_stable():
    z = np.linspace(-20, 20, 101)
    np.testing.assert_allclose(logcosh(z), np.log(np.cosh(z)), atol=1e-13)
    zc = z + 1j * np.linspace(-1.3, 1.3, 101)
    np.testing.assert_allclose(np.exp(logcosh(zc)), np.cosh(zc), rtol=1e-12)
    big = np.array([1e3, -1e3, 1e3 + 2j, -1e3 - 0.5j])
    out = logcosh(big)
    assert np.all(np.isfinite(out))
    np.testing.assert_allclose(out.real, 1e3 - np.log(2.0), rtol=1e-14)


def test_logcosh_and_tanh_agree_with_reference():
    rng = np.random.default_rng(4)
    z = rng.normal(0, 2, 200) + 1j * rng.normal(0, 0.5, 200)
    log_abs, phase, t = logcosh_and_tanh(z)
    np.testing.assert_allclose(np.exp(log_abs + 1j * phase), np.cosh(z), rtol=1e-12)
    np.testing.assert_allclose(log_abs, logcosh(z).real, atol=1e-13)
    np.testing.assert_allclose(t, np.tanh(z), atol=1e-13)
    big = np.array([800.0 + 0.3j, -900.0 - 2.0j])
    log_abs, phase, t = logcosh_and_tanh(big)
    np.testing.assert_allclose(log_abs, logcosh(big).real, rtol=1e-14)
    np.testing.assert_allclose(t, [1.0, -1.0], atol=1e-14)
    x = rng.normal(0, 5, 50)
    log_abs, phase, t = logcosh_and_tanh(x)
    assert phase is None
    np.testing.assert_allclose(log_abs, np.log(np.cosh(x)), atol=1e-12)
    np.testing.assert_allclose(t, np.tanh(x), atol=1e-14)


def test_log_psi_evenness():
    rng = np.random.default_rng(0)
    p = random_params(rng, 6, 6, "real")
    w, b = p.weights.copy(), p.hidden_bias.copy()
    w[2] *= -1
    b[2] *= -1
    q = RbmParameters(w, b)
    spins = HilbertBasis(6).configurations()
    np.testing.assert_allclose(log_psi(p, spins), log_psi(q, spins), atol=1e-14)


def test_log_psi_deterministic():
    rng = np.random.default_rng(5)
    p = random_params(rng, 8, 16, "complex")
    conf = SpinConfiguration(8, 173)
    assert log_psi(p, conf) == log_psi(p, conf)


def test_log_psi_overflow_raises():
    p = RbmParameters(np.full((1, 2), 1e308), [0.0])
    with pytest.raises(NumericOverflowError):
        log_psi(p, [1, 1])


def test_psi_vector_shift_and_positivity():
    rng = np.random.default_rng(2)
    p = random_params(rng, 5, 5, "real", scale=3.0)
    psi, c = psi_vector(p, HilbertBasis(5))
    assert np.all(psi > 0)
    assert psi.max() == pytest.approx(1.0, abs=1e-15)
    spins = HilbertBasis(5).configurations()
    np.testing.assert_allclose(np.log(psi) + c, log_psi(p, spins), atol=1e-12)

    q = random_params(rng, 5, 10, "complex", scale=3.0)
    psi, _ = psi_vector(q, HilbertBasis(5))
    assert not np.any(np.isnan(psi))
    assert np.abs(psi).max() == pytest.approx(1.0, abs=1e-15)


def test_grad_log_psi_zero_params():
    p = RbmParameters(np.zeros((4, 4)), np.zeros(4))
    g = grad_log_psi(p, SpinConfiguration(4, 5))
    np.testing.assert_array_equal(g.hidden_bias, np.zeros(4))
    np.testing.assert_array_equal(g.weights, np.zeros((4, 4)))


def _fd_log_psi_real(p, x, step=1e-5):
    def f(vec):
        return log_psi(RbmParameters.from_vector(vec, p.n_visible, "real"), x)

    return central_difference(f, p.vector(), step)


def _fd_log_psi_complex(p, x, step=1e-5):
    vec = p.vector()

    def f_re(r):
        return log_psi(RbmParameters.from_vector(r + 1j * vec.imag, p.n_visible, "complex"), x)

    def f_im(i):
        return log_psi(RbmParameters.from_vector(vec.real + 1j * i, p.n_visible, "complex"), x)

    d_re = np.array([
        (f_re(vec.real + step * e) - f_re(vec.real - step * e)) / (2 * step) for e in np.eye(vec.size)
    ])
    d_im = np.array([
        (f_im(vec.imag + step * e) - f_im(vec.imag - step * e)) / (2 * step) for e in np.eye(vec.size)
    ])
    return d_re, d_im


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def test_grad_log_psi_real_finite_differences():
    rng = np.random.default_rng(11)
    p = random_params(rng, 8, 8, "real")
    x = SpinConfiguration(8, 0b10110010).spins
    g = grad_log_psi(p, x).vector()
    assert rel_err(g, _fd_log_psi_real(p, x)) < 1e-6


def test_grad_log_psi_complex_finite_differences():
    rng = np.random.default_rng(12)
    p = random_params(rng, 6, 12, "complex")
    x = SpinConfiguration(6, 0b011010).spins
    g = grad_log_psi(p, x).vector()
    d_re, d_im = _fd_log_psi_complex(p, x)
    # holomorphic: d/dRe = g, d/dIm = i g
    assert rel_err(g, d_re) < 1e-6
    assert rel_err(1j * g, d_im) < 1e-6


def test_flatten_real_round_trip():
    p = init_random(8, 1, "real", seed=1)
    flat = flatten(p)
    assert flat.values.shape == (72,)
    assert flat.column_names[:2] == ["W_0_0", "W_0_1"] and flat.column_names[-1] == "b_7"
    q = unflatten(flat)
    np.testing.assert_array_equal(flatten(q).values, flat.values)
    np.testing.assert_array_equal(q.weights, p.weights)


def test_flatten_complex_real_parts():
    p = init_random(12, 2, "complex", seed=1)
    flat = flatten(p)
    assert flat.values.shape == (312,)
    assert flat.values.dtype == float
    q = unflatten(flat)
    np.testing.assert_array_equal(q.weights.real, p.weights.real)
    np.testing.assert_array_equal(q.hidden_bias.real, p.hidden_bias.real)


def test_flatten_ordering_under_hidden_permutation():
    p = init_random(4, 2, "real", seed=3)
    perm = np.array([5, 2, 7, 0, 1, 3, 6, 4])
    q = RbmParameters(p.weights[perm], p.hidden_bias[perm])
    fp, fq = flatten(p).values, flatten(q).values
    w_blocks = fp[:32].reshape(8, 4)
    np.testing.assert_array_equal(fq[:32].reshape(8, 4), w_blocks[perm])
    np.testing.assert_array_equal(fq[32:], fp[32:][perm])


@settings(max_examples=25)
@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=12, max_size=12))
def test_flatten_unflatten_bit_exact(values):
    flat = FlatWeightVector(np.array(values), 3, 3, "real")
    np.testing.assert_array_equal(flatten(unflatten(flat)).values, flat.values)


@settings(max_examples=25, deadline=None)
@given(st.floats(-1e3, 1e3), st.floats(-3, 3))
def test_log_psi_finite_on_large_preactivations(re, im):
    p = RbmParameters(np.zeros((1, 2)), [complex(re, im)], "complex")
    if abs(re) < 1e-6 and abs(abs(im) - np.pi / 2) < 1e-6:
        return  # zero of cosh
    assert np.isfinite(log_psi(p, [1, -1]))
