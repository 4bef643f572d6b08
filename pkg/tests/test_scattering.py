import math

import numpy as np
import pytest

from dnls_painleve import _jost_py, jost_kernel
from dnls_painleve.phase import Case
from dnls_painleve.scatdata import ScatteringData, assemble, default_real_samples
from dnls_painleve.scattering import (DatumValidationError, F_at_one, InitialDatum, Scatterer, ScatteringError,
                                      SingularPointError, SpectralModel, chi_bump, headline_datum, make_datum,
                                      modified_reflection_R, nu_from_reflection, reflection_at_minus_one)

RNG_SEED = 20


@pytest.fixture(scope="module")
def sc():
    s = Scatterer(headline_datum(L=18))
    s.discrete_spectrum()
    return s


@pytest.fixture(scope="module")
def tanh_sc():
    s = Scatterer(make_datum("tanh", L=18))
    s.discrete_spectrum()
    return s


@pytest.fixture(scope="module")
def sd(sc):
    return assemble(sc, default_real_samples(40))


def _upper_points(n, seed, im_min=0.1):
    rng = np.random.default_rng(seed)
    return rng.uniform(-3, 3, n) + 1j * rng.uniform(im_min, 3, n)


# -- data validation --------------------------------------------------------------


def test_validation_rejects_wrong_background():
    x = np.linspace(-18, 18, 3601)
    with pytest.raises(DatumValidationError, match="left endpoint"):
        InitialDatum(x, np.tanh(x) + 0.1).validate()
    with pytest.raises(DatumValidationError, match="right endpoint"):
        InitialDatum(x, np.where(x > 17.9, 0.9, np.tanh(x))).validate()


def test_validation_rejects_bad_grid_and_kind():
    with pytest.raises(DatumValidationError):
        InitialDatum([0.0, 1.0, 1.5], [0, 0, 0])
    with pytest.raises(DatumValidationError):
        make_datum("square")


def test_validation_rejects_slow_decay():
    # endpoint values match the background but the perturbation still has slope there
    x = np.linspace(-18, 18, 3601)
    q = np.tanh(x) + 1e-3 * np.sin(np.pi * x / 18) * (np.abs(x) < 18)
    with pytest.raises(DatumValidationError, match="differences"):
        InitialDatum(x, q, background_tolerance=1e-6).validate()


def test_excluded_points(sc):
    for z in (0.0, 1.0, -1.0, 1.01, -0.995):
        with pytest.raises(SingularPointError):
            sc.reflection([z])
    with pytest.raises(SingularPointError):
        sc.solver.matched([0j])


# -- kernel and backends -------------------------------------------------------


def test_backends_agree(sc):
    s = sc.solver
    real = np.array([1.7, -2.5, 1.0, -1.0, 0.4], dtype=complex)
    a = _jost_py.propagate(s._fw[0], s._fw[1], s.h, real, s._ys(real, -1.0))
    b = jost_kernel.propagate(s._fw[0], s._fw[1], s.h, real, s._ys(real, -1.0))
    assert np.max(np.abs(a - b)) < 1e-12
    # off the axis only the first column of m^- is bounded; the other one
    # grows like exp(2 Im(zeta) x) and magnifies rounding differences
    upper = np.array([0.3 + 0.2j, 1j, -2.5 + 0.01j])
    a = _jost_py.propagate(s._fw[0], s._fw[1], s.h, upper, s._ys(upper, -1.0))
    b = jost_kernel.propagate(s._fw[0], s._fw[1], s.h, upper, s._ys(upper, -1.0))
    assert np.max(np.abs(a[:, :, 0] - b[:, :, 0])) < 1e-12
    y = s._ys(np.array([0.8 + 0.3j]), -1.0)[0]
    pa = _jost_py.propagate_path(s.qa, s.qb, s.h, 0.8 + 0.3j, y)
    pb = jost_kernel.propagate_path(s.qa, s.qb, s.h, 0.8 + 0.3j, y)
    assert np.max(np.abs(pa[:, :, 0] - pb[:, :, 0])) < 1e-12


def test_backend_reported():
    assert jost_kernel.BACKEND in ("python", "cython")


def test_determinant_preserved_along_path(sc):
    # det m = det Y = 1 - z^-2 is invariant under the trace-free flow
    for z in (0.7 + 0.4j, 2.3, -0.5 + 0.1j):
        for side in ("minus", "plus"):
            sol = sc.solver.solve(z, side)
            scale = np.max(np.abs(sol.m)) ** 2  # rounding rides on the largest column
            assert np.max(np.abs(sol.det() - (1 - z**-2))) < 1e-12 * scale


def test_richardson_order():
    d = make_datum("sech2", amplitude=0.3, L=18)
    v = [Scatterer(d, h=h).s11(0.7)[0] for h in (0.04, 0.02, 0.01)]
    ratio = abs(v[0] - v[1]) / abs(v[1] - v[2])
    assert 14.0 < ratio < 18.0


def test_domain_truncation(sc):
    wider = Scatterer(headline_datum(L=20))
    assert abs(wider.s11(0.7)[0] - sc.s11(0.7)[0]) < 1e-12


# -- real-line data ---------------------------------------------------------------


def test_unitarity(sc):
    z = default_real_samples(200)
    s11, s21 = sc.scattering_coefficients(z)
    assert np.max(np.abs(np.abs(s11) ** 2 - np.abs(s21) ** 2 - 1.0)) < 1e-6


def test_reflection_inversion_symmetry(sc):
    z = np.array([1.3, 2.0, 4.5, -1.6, -3.0, 0.4])
    np.testing.assert_allclose(sc.reflection(1 / z), np.conj(sc.reflection(z)), atol=1e-10)


def test_reflection_conjugation_symmetry_of_matrix(sc):
    # s22(z) = conj s11(z), s12(z) = conj s21(z) on the real line
    S = sc.scattering_matrix(np.array([1.5, -2.2, 0.6]))
    np.testing.assert_allclose(S[:, 1, 1], np.conj(S[:, 0, 0]), atol=1e-10)
    np.testing.assert_allclose(S[:, 0, 1], np.conj(S[:, 1, 0]), atol=1e-10)


def test_reflection_bounded_and_decaying(sc):
    z = np.array([1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0])
    r = np.abs(sc.reflection(z))
    assert np.all(r < 1.0)
    # O(z^-2) envelope, with super-algebraic decay for this smooth datum
    assert np.all(r * z**2 < 0.6)
    assert np.all(np.diff(r) < 0)


def test_reflection_decay_rate(sc):
    # smooth data decay faster than z^-2, so z^2 |r| must not grow along z = 5, 10, 20
    for sign in (1, -1):
        z = sign * np.array([5.0, 10.0, 20.0])
        scaled = np.abs(sc.reflection(z)) * z**2
        assert np.all(np.diff(scaled) < 0) and scaled[0] < 0.1


def test_tanh_is_reflectionless(tanh_sc):
    z = default_real_samples(60)
    assert np.max(np.abs(tanh_sc.reflection(z))) < 1e-5
    assert len(tanh_sc.zeros) == 1 and abs(tanh_sc.zeros[0] - 1j) < 1e-8
    assert tanh_sc.norming_constant(tanh_sc.zeros[0]) == pytest.approx(-2.0, abs=1e-6)


def test_nu_positive_and_two_forms_agree(sc):
    z = default_real_samples(100)
    nu = sc.nu(z)
    assert np.all(nu > -1e-12)
    alt = nu_from_reflection(sc.reflection(z))
    assert np.max(np.abs(nu - alt)) < 1e-9


def test_nu_inversion_symmetric(sc):
    s = np.array([0.3, -0.45, 0.8])
    np.testing.assert_array_equal(sc.nu(s), sc.nu(1 / s))
    assert sc.nu(np.array([0.0]))[0] == 0.0


# -- discrete spectrum -----------------------------------------------------------


def test_discrete_spectrum_headline(sc):
    assert len(sc.zeros) == 1
    zj = sc.zeros[0]
    assert abs(abs(zj) - 1) < 1e-10 and zj.imag > 0
    assert abs(sc.s11(zj)[0]) < 1e-10


def test_eigenvalue_and_norming_refine(sc):
    fine = Scatterer(headline_datum(L=18), h=0.005)
    zf = fine.discrete_spectrum()
    assert abs(zf[0] - sc.zeros[0]) < 1e-9
    assert abs(fine.norming_constant(zf[0]) - sc.norming_constant(sc.zeros[0])) < 1e-8


def test_derivative_two_ways(sc):
    zj = sc.zeros[0]
    assert abs(sc.s11_derivative(zj) - sc.s11_derivative_fd(zj)) < 1e-9


def test_norming_constant_phase(sc):
    zj = sc.zeros[0]
    c = sc.norming_constant(zj)
    w = c / (1j * zj)
    assert abs(w.imag) < 1e-8 * abs(w)
    assert w.real > 0  # c = -2 at z = i for the pure tanh soliton gives c/(iz) = 2
    assert abs(math.remainder(np.angle(c) - np.angle(1j * zj), 2 * math.pi)) < 1e-6


# -- trace formula and T ----------------------------------------------------------


def test_trace_formula_closure(sc):
    for z in _upper_points(20, RNG_SEED):
        assert abs(sc.trace_s11(z) - sc.s11(z)[0]) < 1e-4


def test_trace_formula_guard(sc):
    with pytest.raises(ScatteringError):
        sc.trace_s11(1.0 + 1e-5j)


@pytest.mark.parametrize("case", [Case.I, Case.II])
def test_T_symmetries(sc, case):
    rng = np.random.default_rng(4)
    for _ in range(50):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3) * rng.choice([-1, 1]))
        Tz = sc.T(z, case)
        assert abs(Tz * np.conj(sc.T(np.conj(z), case)) - 1.0) < 1e-9
        assert abs(Tz * sc.T(1 / z, case) - 1.0) < 1e-9


@pytest.mark.parametrize("case", [Case.I, Case.II])
def test_T_jump_across_positive_axis(sc, case):
    for x in (0.4, 0.8, 1.4, 2.5, 5.0):
        r = sc.reflection([x])[0]
        below = sc.T(x, case, side=-1)
        above = sc.T(x, case, side=+1)
        assert abs(below - above * (1 - abs(r) ** 2)) < 1e-9


def test_T_boundary_values_are_limits(sc):
    # off-axis values at eps and 2 eps, extrapolated linearly to the axis
    x = 1.6
    for side in (+1, -1):
        eps = 1e-3
        a = sc.T(complex(x, side * eps), Case.II)
        b = sc.T(complex(x, side * 2 * eps), Case.II)
        assert abs((2 * a - b) - sc.T(x, Case.II, side=side)) < 1e-5


@pytest.mark.parametrize("case", [Case.I, Case.II])
def test_T_at_infinity(sc, case):
    Tinf = sc.T_infinity(case)
    d1 = abs(sc.T(1e5j, case) - Tinf)
    d2 = abs(sc.T(1e6j, case) - Tinf)
    assert d2 < 1e-5
    assert d2 < d1  # the approach is O(1/z)


def test_T_rejects_branch_ray(sc):
    with pytest.raises(ScatteringError):
        sc.T(2.0)


def test_T_without_spectral_data_is_blaschke_only():
    m = SpectralModel(zeros=[1j])
    z = 0.3 + 0.7j
    assert m.T(z, Case.I) == pytest.approx((z - 1j) / (1j * z - 1), abs=1e-15)
    assert m.T(z, Case.II) == 1.0
    assert m.T_infinity(Case.I) == pytest.approx(-1j, abs=1e-15)


# -- edge quantities ----------------------------------------------------------


def test_edge_values_headline(sc):
    rm = reflection_at_minus_one(sc)
    F = F_at_one(sc)
    assert rm.generic and F.generic
    assert abs(abs(rm.value) - 1.0) < 1e-8
    assert abs(abs(F.value) - 1.0) < 1e-8
    assert abs(abs(sc.G(1.0)) - 1.0) < 1e-8


def test_edge_continuity(sc):
    S11, S21 = sc.edge_determinants(1.0)
    for d in (1e-2, 1e-3, 1e-4):
        a, b = sc.edge_determinants(1 + d)
        assert abs(a - S11) < 3 * d and abs(b - S21) < 3 * d


def test_edge_nongeneric_tanh(tanh_sc):
    S11, _ = tanh_sc.edge_determinants(-1.0)
    assert abs(S11) < 1e-8
    rm = reflection_at_minus_one(tanh_sc)
    assert not rm.generic and abs(rm.value) < 1e-8


def _raw_r(sc):
    def r(x):
        d = sc.solver.determinants(np.array([complex(x)]))
        return complex(d["S21"][0] / d["S11"][0])
    return r


def test_modified_reflection_stable_at_one(sc):
    F = F_at_one(sc).value
    R1 = F * sc.G(1.0) ** 2
    assert abs(R1 - 1.0) < 1e-8
    r = _raw_r(sc)
    for d in (1e-2, 1e-3, 1e-4):
        for x in (1 + d, 1 - d):
            raw = modified_reflection_R(sc, [x], lambda _: F, r, use_cutoff=False)[0]
            cut = modified_reflection_R(sc, [x], lambda _: F, r)[0]
            assert abs(raw - R1) < 20 * d
            assert abs(cut - R1) < 3 * d


def test_chi_bump():
    assert chi_bump(np.array([1.0]))[0] == 1.0
    assert chi_bump(np.array([1.1, 0.85, 2.0])).tolist() == [0.0, 0.0, 0.0]
    v = chi_bump(np.linspace(0.9, 1.1, 101))
    assert np.all((v >= 0) & (v <= 1))


# -- assembled data and JSON ----------------------------------------------------


def test_json_round_trip_bit_exact(sd):
    back = ScatteringData.from_json(sd.to_json())
    for name in ("z", "r", "s11", "s21", "nu", "zeros", "norming"):
        a, b = getattr(sd, name), getattr(back, name)
        assert len(a) == len(b)
        for u, v in zip(a, b):
            assert complex(u).real.hex() == complex(v).real.hex()
            assert complex(u).imag.hex() == complex(v).imag.hex()
    assert back.integrals == sd.integrals
    assert back.edge == sd.edge
    assert back.to_json() == sd.to_json()


def test_json_save_load(tmp_path, sd):
    p = tmp_path / "s.json"
    sd.save(p)
    assert ScatteringData.load(p).to_json() == sd.to_json()


def test_json_schema_checked(sd):
    text = sd.to_json().replace("dnls-scattering/1", "other/9")
    with pytest.raises(ValueError):
        ScatteringData.from_json(text)


def test_assembled_t_infinity_matches_model(sc, sd):
    for case in (Case.I, Case.II):
        assert sd.T_infinity(case) == pytest.approx(sc.T_infinity(case), abs=1e-14)


def test_moment_positive_and_finite(sd):
    assert math.isfinite(sd.integrals["moment"]) and sd.integrals["moment"] > 0
    assert sd.integrals["half_moment"] == pytest.approx(0.5 * sd.integrals["moment"], rel=1e-8)
