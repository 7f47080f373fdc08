import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtfa.groups import build_cyclic, build_dihedral
from gtfa.harmonic import (
    Signal,
    constant_signal,
    convolve,
    delta_signal,
    fourier,
    haar_inner,
    inverse_fourier,
    nc_integral,
    plancherel_inner,
    random_signal,
)


def test_haar_inner_ones():
    g, _ = build_cyclic(6)
    one = constant_signal(g)
    assert haar_inner(one, one) == pytest.approx(1.0)


def test_haar_inner_delta():
    g, _ = build_cyclic(5)
    d = delta_signal(g)
    assert haar_inner(d, d) == pytest.approx(g.order)


def test_haar_inner_direct_sum_oracle(rng):
    g, _ = build_cyclic(8)
    u, v = random_signal(g, rng), random_signal(g, rng)
    direct = sum(u.values[x] * np.conj(v.values[x]) for x in range(8)) / 8
    assert abs(haar_inner(u, v) - direct) < 1e-12


def test_haar_inner_group_mismatch():
    u = constant_signal(build_cyclic(4)[0])
    v = constant_signal(build_cyclic(5)[0])
    with pytest.raises(ValueError, match="mismatch"):
        haar_inner(u, v)


def test_fourier_of_constant(group_and_dual):
    g, d = group_and_dual
    c = fourier(constant_signal(g))
    for k, b in enumerate(c.blocks):
        expect = 1.0 if k == d.trivial_index else 0.0
        assert np.abs(b - expect * np.eye(b.shape[0])).max() < 1e-12


def test_fourier_of_delta(group_and_dual):
    g, d = group_and_dual
    c = fourier(delta_signal(g))
    for b in c.blocks:
        assert np.abs(b - np.eye(b.shape[0])).max() < 1e-12


def test_fourier_of_character():
    g, _ = build_cyclic(4)
    u = Signal(g, np.exp(2j * np.pi * np.arange(4) / 4))
    c = fourier(u)
    vals = [b[0, 0] for b in c.blocks]
    assert vals[1] == pytest.approx(1)
    assert max(abs(v) for k, v in enumerate(vals) if k != 1) < 1e-12


def test_inverse_of_trivial_delta():
    g, d = build_cyclic(6)
    blocks = [np.zeros((1, 1), dtype=complex) for _ in d.irreps]
    blocks[d.trivial_index][0, 0] = 1.0
    u = inverse_fourier(type(fourier(constant_signal(g)))(d, blocks))
    assert np.abs(u.values - 1).max() < 1e-12


def test_inverse_of_identity_blocks_is_delta(group_and_dual):
    g, d = group_and_dual
    c = fourier(delta_signal(g))  # identity blocks
    u = inverse_fourier(c)
    expect = np.zeros(g.order)
    expect[g.identity] = g.order
    assert np.abs(u.values - expect).max() < 1e-10


def test_roundtrip_random(group_and_dual, rng):
    g, _ = group_and_dual
    u = random_signal(g, rng)
    assert np.abs(inverse_fourier(fourier(u)).values - u.values).max() < 1e-10


def test_nc_integral_examples(rng):
    g, _ = build_dihedral(4)
    assert nc_integral(fourier(constant_signal(g))) == pytest.approx(1.0)
    u = random_signal(g, rng)
    assert nc_integral(fourier(u)) == pytest.approx(u.values[g.identity], abs=1e-10)
    zero = fourier(Signal(g, np.zeros(g.order)))
    assert nc_integral(zero) == 0


def test_plancherel(group_and_dual, rng):
    g, _ = group_and_dual
    u, v = random_signal(g, rng), random_signal(g, rng)
    assert abs(haar_inner(u, v) - plancherel_inner(fourier(u), fourier(v))) < 1e-10


def test_convolution_identity(group_and_dual, rng):
    g, _ = group_and_dual
    u = random_signal(g, rng)
    assert np.abs(convolve(u, delta_signal(g)).values - u.values).max() < 1e-10


def test_convolution_with_ones(rng):
    g, _ = build_dihedral(3)
    v = random_signal(g, rng)
    got = convolve(constant_signal(g), v)
    lam = haar_inner(v, constant_signal(g))
    assert np.abs(got.values - lam).max() < 1e-12


def test_convolution_theorem_order_reversal(group_and_dual, rng):
    g, _ = group_and_dual
    u, v = random_signal(g, rng), random_signal(g, rng)
    lhs = fourier(convolve(u, v))
    uh, vh = fourier(u), fourier(v)
    for lb, ub, vb in zip(lhs.blocks, uh.blocks, vh.blocks):
        assert np.abs(lb - vb @ ub).max() < 1e-10  # v_hat u_hat, reversed


def test_translation_covariance(rng):
    g, d = build_dihedral(3)
    u = random_signal(g, rng)
    y = 4
    shifted = Signal(g, u.values[g.cayley[g.inverse[y]]])  # u(y^{-1} x)
    lhs = fourier(shifted)
    uh = fourier(u)
    for lb, ub, eta in zip(lhs.blocks, uh.blocks, d.irreps):
        assert np.abs(lb - ub @ eta.star[y]).max() < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
                min_size=6, max_size=6),
       st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
                min_size=6, max_size=6))
def test_parseval_property(uv, vv):
    g, _ = build_dihedral(3)
    u, v = Signal(g, uv), Signal(g, vv)
    scale = max(np.abs(u.values).max(), np.abs(v.values).max(), 1.0)
    lhs = haar_inner(u, v)
    rhs = plancherel_inner(fourier(u), fourier(v))
    assert abs(lhs - rhs) <= 1e-10 * scale * scale


def test_signal_length_validation():
    g, _ = build_cyclic(4)
    with pytest.raises(ValueError, match="length"):
        Signal(g, np.ones(5))
