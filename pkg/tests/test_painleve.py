import numpy as np
import pytest
from scipy import special
from scipy.integrate import quad

from dnls_painleve.painleve import (AI0, AIP0, PainleveError, PainleveInputError, PainleveTable, airy,
                                    airy_in_window, airy_tail, residue_matrices, residue_matrices_from_values,
                                    solve_pii, tail_integral)


@pytest.fixture(scope="module")
def tables():
    return {k: solve_pii(k, -8.0) for k in (0.1, 0.5, 0.9)}


@pytest.fixture(scope="module")
def hm():
    return solve_pii(1.0, -6.0)


# -- Airy ------------------------------------------------------------------


def test_airy_origin_values():
    a, ap = airy(0.0)
    assert a == pytest.approx(0.35502805388781723926, abs=1e-16)
    assert ap == pytest.approx(-0.25881940379280679840, abs=1e-16)
    assert (AI0, AIP0) == (a, ap)


def test_airy_against_scipy_on_window():
    s = np.linspace(-30.0, 30.0, 3001)
    a, ap = airy(s)
    ref = special.airy(s)
    assert np.max(np.abs(a - ref[0])) < 1e-12
    assert np.max(np.abs(ap - ref[1])) < 1e-12


@pytest.mark.parametrize("s", [-2.0, 2.0, 8.0, 4.5])
def test_airy_seams_continuous(s):
    lo, hi = airy(np.nextafter(s, -np.inf)), airy(np.nextafter(s, np.inf))
    assert abs(lo[0] - hi[0]) < 1e-14 and abs(lo[1] - hi[1]) < 1e-13


@pytest.mark.parametrize("s", [6.0, 8.0, 10.0])
def test_airy_large_s_shape(s):
    a, _ = airy(s)
    assert a * 2 * np.sqrt(np.pi) * s**0.25 * np.exp(2 / 3 * s**1.5) == pytest.approx(1.0, rel=0.02)


def test_airy_window_flag():
    assert airy_in_window(0.0) and airy_in_window(30.0)
    assert not airy_in_window(-31.0)
    assert list(airy_in_window([-40.0, 1.0, 40.0])) == [False, True, False]


def test_airy_tail_identity_against_quadrature():
    for s in (-3.0, 0.0, 2.5, 8.0):
        q = quad(lambda x: airy(x)[0] ** 2, s, 40.0, epsabs=1e-15, epsrel=1e-13, limit=400)[0]
        assert airy_tail(1.0, s) == pytest.approx(q, abs=1e-12)


# -- Painleve II ------------------------------------------------------------


def test_zero_kappa_is_zero():
    T = solve_pii(0.0, -8.0)
    assert not np.any(T.u) and not np.any(T.tail)
    assert T.u_at(1.3) == 0.0 and tail_integral(T, -2.0) == 0.0


@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9])
def test_ode_residual(tables, kappa):
    T = tables[kappa]
    nodes = T.s[5:-5:5]
    assert np.max(T.ode_residual(nodes)) < 1e-8


def test_ode_residual_hastings_mcleod(hm):
    assert np.max(hm.ode_residual(hm.s[5:-5:5])) < 1e-8


@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9])
def test_airy_regime(tables, kappa):
    s = np.linspace(5.0, 9.0, 41)
    ai, _ = airy(s)
    assert np.max(np.abs(tables[kappa].u_at(s) / (kappa * ai) - 1.0)) < 1e-3


@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9, 1.0])
def test_matching_point_independence(kappa):
    s_min = -5.0
    a = solve_pii(kappa, s_min, 10.0)
    b = solve_pii(kappa, s_min, 14.0)
    s = np.linspace(-5.0, 10.0, 301)
    assert np.max(np.abs(a.u_at(s) - b.u_at(s))) < 1e-7


def test_hastings_mcleod_value_two_oracles(hm):
    half = solve_pii(1.0, -6.0, rtol=0.5e-11, atol=0.5e-13)
    shifted = solve_pii(1.0, -6.0, s_max=14.0)
    u0 = hm.u_at(0.0)
    assert abs(u0 - half.u_at(0.0)) < 1e-8
    assert abs(u0 - shifted.u_at(0.0)) < 1e-8
    # grows toward sqrt(-s/2) on the negative axis
    assert abs(hm.u_at(-6.0) - np.sqrt(3.0)) < 2e-3


def test_kappa_oddness_exact():
    a, b = solve_pii(0.7, -10.0), solve_pii(-0.7, -10.0)
    assert np.array_equal(a.u, -b.u)
    assert np.array_equal(a.u_prime, -b.u_prime)
    assert np.array_equal(a.tail, b.tail)
    s = np.linspace(-9.5, 12.0, 57)
    assert np.array_equal(a.u_at(s), -b.u_at(s))


def test_sign_convention_in_matching_regime(tables):
    for k, T in tables.items():
        s = np.linspace(3.0, 10.0, 15)
        assert np.all(T.u_at(s) / k > 0)


def test_tail_at_s_max_equals_airy_closed_form(tables):
    for k, T in tables.items():
        assert T.tail[0] == pytest.approx(airy_tail(k, T.s_max), abs=1e-10)
        assert tail_integral(T, T.s_max) == pytest.approx(k * k * (airy(10.0)[1] ** 2 - 10.0 * airy(10.0)[0] ** 2),
                                                          abs=1e-10)


def test_tail_monotone_and_additive(tables):
    T = tables[0.9]
    assert np.all(np.diff(T.tail) >= -1e-15)  # s descends along the table, so I grows
    a, b = 0.0, 4.0
    q = quad(lambda s: T.u_at(s) ** 2, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    assert abs(tail_integral(T, a) - (tail_integral(T, b) + q)) < 1e-10


def test_tail_beyond_s_max_uses_airy(tables):
    T = tables[0.5]
    assert tail_integral(T, 12.0) == pytest.approx(airy_tail(0.5, 12.0), rel=1e-14)


def test_guards():
    with pytest.raises(PainleveInputError):
        solve_pii(1.2, -5.0)
    with pytest.raises(PainleveInputError):
        solve_pii(0.5, -5.0, s_max=6.0)
    with pytest.raises(PainleveInputError):
        solve_pii(1.0, -13.0)
    with pytest.raises(PainleveInputError):
        solve_pii(0.5, -31.0)
    with pytest.raises(PainleveInputError):
        solve_pii(0.5, -5.0).u_at(-6.0)


def test_growth_monitor_aborts():
    # the separatrix solution is unstable under backward shooting far to the left
    with pytest.raises(PainleveError):
        solve_pii(1.0, -12.0)


def test_ablowitz_segur_reaches_minus_thirty():
    T = solve_pii(0.5, -30.0)
    assert np.max(np.abs(T.u)) < 1.0
    assert np.max(T.ode_residual(np.linspace(-29.9, 9.9, 200))) < 1e-8


def test_csv_round_trip(tables):
    T = tables[0.5]
    doc = PainleveTable.read_csv(T.to_csv())
    assert doc["meta"]["kappa"] == 0.5 and doc["meta"]["s_max"] == 10.0
    assert doc["meta"]["rtol"] == 1e-11 and doc["meta"]["atol"] == 1e-13
    assert np.array_equal(doc["s"], T.s) and np.array_equal(doc["u"], T.u)
    assert np.array_equal(doc["u_prime"], T.u_prime) and np.array_equal(doc["tail"], T.tail)


# -- residue matrices ---------------------------------------------------------


def test_residue_zero():
    mp, mi = residue_matrices_from_values(0.0, 0.0, 0.0, 1.0)
    assert not np.any(mp.entries) and not np.any(mi.entries)


def test_residue_structure_random(tables):
    rng = np.random.default_rng(7)
    T = tables[0.9]
    for _ in range(100):
        s = rng.uniform(-8.0, 10.0)
        phi = rng.uniform(-np.pi, np.pi)
        mp, mi = residue_matrices(T, s, phi)
        u, I = T.u_at(s), tail_integral(T, s)
        assert mp.trace == 0 and mi.trace == 0
        assert mp.entries[0, 0] == -0.5j * I
        assert mi.entries[0, 0] == -0.5j * I
        for m in (mp, mi):
            assert abs(abs(m.entries[0, 1]) - abs(u) / 2) <= 4 * np.finfo(float).eps * abs(u)
            assert abs(abs(m.entries[1, 0]) - abs(u) / 2) <= 4 * np.finfo(float).eps * abs(u)


def test_residue_phi_zero_offdiagonals():
    _, mi = residue_matrices_from_values(0.4, 0.1, 0.0, 0.0)
    assert mi.entries[0, 1] == pytest.approx(-0.5j * -0.4)
    assert mi.entries[1, 0] == pytest.approx(-0.5j * 0.4)
