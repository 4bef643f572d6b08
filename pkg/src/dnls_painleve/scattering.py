"""Direct scattering for q(x, 0) on the +-1 background.

Conventions
-----------
* Lax x-part: psi_x = L psi with L = i sigma3 (Q - lam) = i [[-lam, conj q], [-q, lam]].
* Jost solutions psi^+- ~ Y_+- exp(-i zeta x sigma3) as x -> +-inf, Y_+- = I +- sigma1 / z.
* m^+- = psi^+- exp(i zeta x sigma3); psi^- = psi^+ S(z), det Y_+- = 1 - z**-2.
* s_ij = S_ij / (1 - z**-2) where S11 = det[psi1^-, psi2^+] and
  S21 = det[psi1^+, psi1^-] are the regular determinants.

Every determinant is evaluated at an interior matching point ``x_match``
with m^- propagated forward from the left end of the grid and m^+ backward
from the right end. Both directions are then stable in the half-plane where
the relevant columns are analytic, including at eigenvalues, where
psi1^- is a bound state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import jost_kernel
from .phase import Case
from .quadrature import gauss_kronrod

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
_G1 = 0.5 - math.sqrt(3.0) / 6.0
_G2 = 0.5 + math.sqrt(3.0) / 6.0


class DatumValidationError(ValueError):
    """Initial datum outside the admissible finite-density class."""


class SingularPointError(ValueError):
    """Evaluation requested inside the exclusion radius of {0, -1, +1}."""


class ScatteringError(RuntimeError):
    """Numerical failure in the scattering computation."""


class DegenerateEdgeError(ScatteringError):
    pass


def Y(z, side: str) -> np.ndarray:
    s = 1.0 if side == "plus" else -1.0
    z = complex(z)
    return np.array([[1.0, s / z], [s / z, 1.0]], dtype=complex)


def lax_matrix(q: complex, z: complex) -> np.ndarray:
    lam = 0.5 * (z + 1.0 / z)
    return 1j * np.array([[-lam, np.conj(q)], [-q, lam]], dtype=complex)


# --------------------------------------------------------------------------
# initial data


@dataclass
class InitialDatum:
    """Samples of q0 on a uniform grid, optionally with the exact profile."""

    x: np.ndarray
    q: np.ndarray
    background_tolerance: float = 1e-12
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.q = np.asarray(self.q, dtype=complex)
        if self.x.ndim != 1 or self.x.size < 2 or self.x.shape != self.q.shape:
            raise DatumValidationError("grid and values must be 1-d arrays of equal length >= 2")
        d = np.diff(self.x)
        if not np.all(d > 0) or np.ptp(d) > 1e-9 * d[0]:
            raise DatumValidationError("grid must be uniform and increasing")
        self._spline = None

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def validate(self) -> None:
        tol = self.background_tolerance
        left = abs(self.q[0] + 1.0)
        right = abs(self.q[-1] - 1.0)
        if left > tol:
            raise DatumValidationError(f"left endpoint x={self.x[0]:g}: |q0 + 1| = {left:.3e} > {tol:.1e}")
        if right > tol:
            raise DatumValidationError(f"right endpoint x={self.x[-1]:g}: |q0 - 1| = {right:.3e} > {tol:.1e}")
        # surrogate for the weighted Sobolev hypothesis: first and second
        # differences of the perturbation also vanish at both ends
        w = self.q - np.tanh(self.x)
        for k in (1, 2):
            dk = np.diff(w, n=k) / self.dx**k
            if max(abs(dk[0]), abs(dk[-1])) > max(tol, 1e-10) * 10 ** k:
                raise DatumValidationError(f"order-{k} differences of q0 - tanh do not decay at the grid ends")

    def __call__(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.profile is not None:
            return np.asarray(self.profile(xs), dtype=complex)
        if self._spline is None:
            self._spline = (CubicSpline(self.x, self.q.real), CubicSpline(self.x, self.q.imag))
        return self._spline[0](xs) + 1j * self._spline[1](xs)


def make_datum(kind: str = "tanh", *, L: float = 20.0, dx: float = 0.01, amplitude: float = 0.0,
               width: float = 1.0, center: float = 0.0, background_tolerance: float = 1e-12) -> InitialDatum:
    """Built-in data: ``tanh``, ``gaussian`` (tanh + a exp(-((x-c)/w)^2)) and ``sech2``."""
    if kind == "tanh":
        def prof(x):
            return np.tanh(x).astype(complex)
    elif kind == "gaussian":
        def prof(x):
            return (np.tanh(x) + amplitude * np.exp(-(((x - center) / width) ** 2))).astype(complex)
    elif kind == "sech2":
        def prof(x):
            return (np.tanh(x) + amplitude / np.cosh((x - center) / width) ** 2).astype(complex)
    else:
        raise DatumValidationError(f"unknown datum kind {kind!r}")
    n = int(round(2 * L / dx)) + 1
    x = np.linspace(-L, L, n)
    params = dict(kind=kind, L=L, dx=dx, amplitude=amplitude, width=width, center=center)
    return InitialDatum(x, prof(x), background_tolerance, prof, kind, params)


def headline_datum(**kw) -> InitialDatum:
    """tanh(x) + 0.3 exp(-x^2)."""
    kw.setdefault("amplitude", 0.3)
    return make_datum("gaussian", **kw)


# --------------------------------------------------------------------------
# Jost solutions


@dataclass
class JostSolution:
    z: complex
    side: str
    x: np.ndarray
    m: np.ndarray  # (len(x), 2, 2)

    def det(self) -> np.ndarray:
        return self.m[:, 0, 0] * self.m[:, 1, 1] - self.m[:, 0, 1] * self.m[:, 1, 0]


class JostSolver:
    """Propagates m^+- across the grid of a datum with a fixed Magnus step."""

    def __init__(self, datum: InitialDatum, h: float = 0.01, x_match: float = 0.0, validate: bool = True):
        if validate:
            datum.validate()
        self.datum = datum
        a, b = float(datum.x[0]), float(datum.x[-1])
        n = max(2, int(math.ceil((b - a) / h)))
        self.h = (b - a) / n
        self.xl, self.xr = a, b
        self.nodes = a + self.h * np.arange(n + 1)
        k = int(round((x_match - a) / self.h))
        self.k_match = min(max(k, 1), n - 1)
        self.x_match = float(self.nodes[self.k_match])
        xs = self.nodes[:-1]
        self.qa = np.ascontiguousarray(datum(xs + _G1 * self.h), dtype=complex)
        self.qb = np.ascontiguousarray(datum(xs + _G2 * self.h), dtype=complex)
        km = self.k_match
        self._fw = (np.ascontiguousarray(self.qa[:km]), np.ascontiguousarray(self.qb[:km]))
        # backward sweep: reversed order, Gauss nodes swap roles
        self._bw = (np.ascontiguousarray(self.qb[km:][::-1]), np.ascontiguousarray(self.qa[km:][::-1]))
        self.n_solves = 0

    @staticmethod
    def _ys(z: np.ndarray, sign: float) -> np.ndarray:
        y = np.empty((z.size, 2, 2), dtype=complex)
        y[:, 0, 0] = y[:, 1, 1] = 1.0
        y[:, 0, 1] = y[:, 1, 0] = sign / z
        return y

    def matched(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(m^-(x_match), m^+(x_match)) for an array of z, shape (nz, 2, 2) each."""
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        if np.any(z == 0):
            raise SingularPointError("z = 0 is excluded")
        self.n_solves += z.size
        mm = jost_kernel.propagate(self._fw[0], self._fw[1], self.h, z, self._ys(z, -1.0))
        mp = jost_kernel.propagate(self._bw[0], self._bw[1], -self.h, z, self._ys(z, 1.0))
        return mm, mp

    def solve(self, z: complex, side: str) -> JostSolution:
        """Full trajectory of m^- (left to right) or m^+ (right to left)."""
        z = complex(z)
        if z == 0:
            raise SingularPointError("z = 0 is excluded")
        if side == "minus":
            path = jost_kernel.propagate_path(self.qa, self.qb, self.h, z, Y(z, "minus"))
            return JostSolution(z, side, self.nodes.copy(), path)
        if side == "plus":
            qa = np.ascontiguousarray(self.qb[::-1])
            qb = np.ascontiguousarray(self.qa[::-1])
            path = jost_kernel.propagate_path(qa, qb, -self.h, z, Y(z, "plus"))
            return JostSolution(z, side, self.nodes.copy(), path[::-1].copy())
        raise ValueError("side must be 'minus' or 'plus'")

    def determinants(self, z) -> dict[str, np.ndarray]:
        """Regular determinants S11, S21, S12, S22 (the s_ij times 1 - z**-2)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        mm, mp = self.matched(z)
        zet = 0.5 * (z - 1.0 / z)
        ph = np.exp(2j * zet * self.x_match)

        def det(a, b):
            return a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]

        m1m, m2m = mm[:, :, 0], mm[:, :, 1]
        m1p, m2p = mp[:, :, 0], mp[:, :, 1]
        return {
            "S11": det(m1m, m2p),
            "S21": det(m1p, m1m) / ph,
            "S12": det(m2m, m2p) * ph,
            "S22": det(m1p, m2m),
        }


# --------------------------------------------------------------------------
# spectral model used by every nu-integral


class SpectralModel:
    """nu(zeta) on the real line plus the discrete spectrum.

    ``nu`` must be vectorised. The base class serves synthetic data (given
    nu and zeros); :class:`Scatterer` provides the Jost-based one.
    """

    cutoff = 30.0

    def __init__(self, nu: Callable[[np.ndarray], np.ndarray] | None = None,
                 zeros: Sequence[complex] = (), singular: Sequence[float] = (-1.0, 1.0)):
        self._nu = nu if nu is not None else (lambda s: np.zeros(np.shape(s)))
        self.zeros = [complex(z) for z in zeros]
        self.singular = tuple(singular)
        self.quad_tol = (1e-11, 1e-10)

    def nu(self, s) -> np.ndarray:
        return np.asarray(self._nu(np.asarray(s, dtype=float)), dtype=float)

    # ---- integrals -----------------------------------------------------
    def integrate(self, g: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                  extra_breaks: Sequence[float] = (), fn: Callable | None = None) -> complex:
        """int_a^b nu(s) g(s) ds on a finite range with breakpoints at 0 and the singular points.

        Segments that end at a logarithmic point of nu are integrated in the
        graded variable s = p + (e - p) t^4, which removes the singularity.
        ``fn`` replaces the product nu*g when given.
        """
        f = fn if fn is not None else (lambda s: self.nu(s) * g(s))
        br = sorted({a, b, *[p for p in (0.0, *self.singular, *extra_breaks) if a < p < b]})
        ea, er = self.quad_tol
        total = 0j
        for lo, hi in zip(br[:-1], br[1:]):
            total += self._segment(f, lo, hi, ea, er)
        return total

    def _segment(self, f, lo: float, hi: float, ea: float, er: float) -> complex:
        sing_lo = any(lo == p for p in self.singular)
        sing_hi = any(hi == p for p in self.singular)
        if sing_lo or sing_hi:
            p, e = (lo, hi) if sing_lo else (hi, lo)

            def ff(t, p=p, e=e):
                with np.errstate(invalid="ignore"):
                    out = f(p + (e - p) * t**4) * 4.0 * t**3 * (e - p)
                # s rounds onto the singular point only where t^3 log t ~ 0
                return np.where(np.isfinite(out), out, 0.0)

            res = gauss_kronrod(ff, 0.0, 1.0, epsabs=ea, epsrel=er, max_intervals=6000)
            val = res.value if sing_lo else -res.value
        else:
            res = gauss_kronrod(f, lo, hi, epsabs=ea, epsrel=er, max_intervals=6000)
            val = res.value
        if not res.converged:
            raise ScatteringError(f"nu-quadrature failed on [{lo}, {hi}]: error {res.error:.2e}")
        return val

    def _tail_coeff(self, side: float) -> float:
        Z = self.cutoff
        return float(self.nu(np.array([side * Z]))[0]) * Z**4

    def cauchy(self, z: complex, a: float, b: float) -> complex:
        """int_a^b nu(s)/(s - z) ds, a, b in {-inf, 0, +inf} allowed.

        Infinite ends are cut at +-cutoff; beyond it nu ~ c s^-4, integrated
        in closed form. Points within 0.1 of the axis use subtraction of
        nu(Re z) so that the near-singular kernel is integrated analytically.
        """
        Z = self.cutoff
        lo = -Z if a == -math.inf else a
        hi = Z if b == math.inf else b
        total = 0j
        x0 = z.real
        near = abs(z.imag) < 0.1 and lo < x0 < hi
        if near:
            nu0 = float(self.nu(np.array([x0]))[0])
            ea, er = self.quad_tol

            def f(s):
                return (self.nu(s) - nu0) / (s - z)

            res_value = self.integrate(None, lo, hi, extra_breaks=[x0], fn=f)
            total += res_value + nu0 * (np.log(hi - z) - np.log(lo - z))
        else:
            total += self.integrate(lambda s: 1.0 / (s - z), lo, hi)
        if b == math.inf:
            total += self._tail_coeff(1.0) * _quartic_tail(z, Z)
        if a == -math.inf:
            total -= self._tail_coeff(-1.0) * _quartic_tail(-z, Z)
        return complex(total)

    def moment(self, a: float, b: float) -> float:
        """int_a^b nu(s)/s ds over [0, inf) or (-inf, 0]."""
        Z = self.cutoff
        lo = -Z if a == -math.inf else a
        hi = Z if b == math.inf else b
        val = self.integrate(lambda s: 1.0 / s, lo, hi).real
        if b == math.inf:
            val += self._tail_coeff(1.0) / (4 * Z**4)
        if a == -math.inf:
            val -= self._tail_coeff(-1.0) / (4 * Z**4)
        return float(val)

    def half_moment(self) -> float:
        """int_0^inf nu(s) / (2 s) ds, integrated with its own kernel."""
        Z = self.cutoff
        val = self.integrate(lambda s: 0.5 / s, 0.0, Z).real
        return float(val + self._tail_coeff(1.0) / (8 * Z**4))

    # ---- trace formula and T ----------------------------------------------
    def blaschke(self, z: complex) -> complex:
        out = 1.0 + 0j
        for zj in self.zeros:
            out *= (z - zj) / (z - np.conj(zj))
        return out

    def trace_s11(self, z: complex) -> complex:
        z = complex(z)
        if z.imag < 1e-3:
            raise ScatteringError("trace formula needs Im z >= 1e-3")
        integral = self.cauchy(z, -math.inf, 0.0) + self.cauchy(z, 0.0, math.inf)
        return complex(self.blaschke(z) * np.exp(-1j * integral))

    def T(self, z: complex, case=Case.I, side: int = 0) -> complex:
        """T(z) off [0, inf); side=+1/-1 gives the boundary value from above/below.

        Case I carries the Blaschke factors (z - z_j)/(z z_j - 1), Case II none.
        """
        case = Case.parse(case)
        z = complex(z)
        if side == 0 and z.imag == 0 and z.real >= 0:
            raise ScatteringError("T is evaluated off the branch ray [0, inf)")
        if side != 0:
            if z.imag != 0:
                raise ValueError("boundary values are taken at real z")
            z = complex(z.real, side * 1e-300)  # only the sign of Im z is used below
        c = self._cauchy_boundary(z)
        expo = -1j * (c - self.half_moment())
        out = np.exp(expo)
        if case is Case.I:
            for zj in self.zeros:
                out *= (z - zj) / (z * zj - 1.0)
        return complex(out)

    def _cauchy_boundary(self, z: complex) -> complex:
        return self.cauchy(z, 0.0, math.inf)

    def T_infinity(self, case=Case.I) -> complex:
        case = Case.parse(case)
        out = np.exp(1j * self.half_moment())
        if case is Case.I:
            for zj in self.zeros:
                out *= np.conj(zj)
        return complex(out)

    def G(self, z: complex) -> complex:
        """s11 / T_+ in its regular form (Case II T), valid on the real axis."""
        z = complex(z)
        integral = self.cauchy(z, -math.inf, 0.0)
        return complex(self.blaschke(z) * np.exp(-1j * integral - 1j * self.half_moment()))


def _quartic_tail(z: complex, Z: float) -> complex:
    """int_Z^inf s^-4 / (s - z) ds."""
    if abs(z) < 0.5 * Z:
        return complex(sum(z**k / ((4 + k) * Z ** (4 + k)) for k in range(40)))
    # partial fractions of 1 / (s^4 (s - z))
    return complex(-np.log((Z - z) / Z) / z**4 - 1.0 / (z**3 * Z) - 1.0 / (2 * z**2 * Z**2)
                   - 1.0 / (3 * z * Z**3))


def nu_from_reflection(r) -> np.ndarray:
    """nu = -(1/2 pi) log(1 - |r|^2)."""
    r = np.asarray(r)
    return -np.log1p(-np.abs(r) ** 2) / (2.0 * np.pi)


def chi_bump(z, radius: float = 0.1, center: float = 1.0):
    """C-infinity cutoff equal to 1 at ``center`` and 0 outside the radius."""
    d = np.abs(np.asarray(z, dtype=float) - center) / radius
    out = np.zeros_like(d)
    inside = d < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - d[inside] ** 2))
    return out


# --------------------------------------------------------------------------
# Jost-based scattering


class Scatterer(SpectralModel):
    """Scattering data of a concrete initial datum."""

    def __init__(self, datum: InitialDatum, h: float = 0.01, exclusion: float = 0.02,
                 cutoff: float = 30.0, validate: bool = True):
        super().__init__(None, ())
        self.solver = JostSolver(datum, h=h, validate=validate)
        self.datum = datum
        self.exclusion = exclusion
        self.cutoff = cutoff
        self._nu_cache: dict[float, float] = {}
        self._zeros_found = False

    # ---- coefficients --------------------------------------------------
    def _check_real(self, z: np.ndarray) -> None:
        for p in (0.0, -1.0, 1.0):
            if np.any(np.abs(z - p) < self.exclusion):
                raise SingularPointError(f"evaluation within {self.exclusion} of z = {p:g}")

    def scattering_coefficients(self, z) -> tuple[np.ndarray, np.ndarray]:
        """(s11, s21) at real z outside the exclusion neighbourhoods."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        self._check_real(z)
        d = self.solver.determinants(z)
        den = 1.0 - z**-2.0
        return d["S11"] / den, d["S21"] / den

    def scattering_matrix(self, z) -> np.ndarray:
        """Full S(z) (shape (nz, 2, 2)) at real or complex z."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        d = self.solver.determinants(z)
        den = 1.0 - z**-2.0
        out = np.empty((z.size, 2, 2), dtype=complex)
        out[:, 0, 0] = d["S11"] / den
        out[:, 0, 1] = d["S12"] / den
        out[:, 1, 0] = d["S21"] / den
        out[:, 1, 1] = d["S22"] / den
        return out

    def reflection(self, z) -> np.ndarray:
        s11, s21 = self.scattering_coefficients(z)
        return s21 / s11

    def s11(self, z) -> np.ndarray:
        """s11 anywhere in the closed upper half-plane (z != 0, +-1)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return self.solver.determinants(z)["S11"] / (1.0 - z**-2.0)

    # ---- nu with symmetric evaluation and caching ---------------------------
    def nu(self, s) -> np.ndarray:
        """nu(zeta) = (1/pi) log|s11(zeta)|, using nu(zeta) = nu(1/zeta) for |zeta| < 1.

        By unitarity 1 - |r|^2 = |s11|^-2, and |s11| = |S11| / |1 - zeta^-2|
        keeps full relative accuracy next to the logarithmic points +-1.
        """
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        w = np.where(np.abs(flat) < 1.0, 1.0 / np.where(flat == 0, 1.0, flat), flat)
        out = np.empty(flat.size)
        need = []
        for i, v in enumerate(w):
            if flat[i] == 0.0 or abs(abs(v) - 1.0) == 0.0:
                out[i] = 0.0 if flat[i] == 0.0 else np.inf
                continue
            got = self._nu_cache.get(float(v))
            if got is None:
                need.append(i)
            else:
                out[i] = got
        if need:
            keys = np.unique(w[need])
            S11 = self.solver.determinants(keys)["S11"]
            vals = (np.log(np.abs(S11)) - np.log(np.abs(1.0 - keys**-2.0))) / np.pi
            for k, v in zip(keys, vals):
                self._nu_cache[float(k)] = float(v)
            for i in need:
                out[i] = self._nu_cache[float(w[i])]
        return out.reshape(s.shape)

    # ---- discrete spectrum ---------------------------------------------
    def s11_derivative(self, z0: complex, radius: float = 1e-3, n: int = 64) -> complex:
        """s11'(z0) by the trapezoid rule on a circle (Cauchy integral)."""
        th = 2.0 * np.pi * np.arange(n) / n
        w = z0 + radius * np.exp(1j * th)
        return complex(np.mean(self.s11(w) * np.exp(-1j * th)) / radius)

    def s11_derivative_fd(self, z0: complex, h: float = 1e-4) -> complex:
        v = self.s11(np.array([z0 + h, z0 - h, z0 + 1j * h, z0 - 1j * h]))
        return complex(0.25 * ((v[0] - v[1]) / h + (v[2] - v[3]) / (1j * h)))

    def discrete_spectrum(self, n_scan: int = 2048, scan_threshold: float = 1e-2,
                          tol: float = 1e-10, max_iter: int = 40) -> list[complex]:
        phi = np.pi * (np.arange(n_scan) + 0.5) / n_scan
        vals = np.abs(self.s11(np.exp(1j * phi)))
        cand = [i for i in range(n_scan)
                if vals[i] < scan_threshold
                and (i == 0 or vals[i] <= vals[i - 1])
                and (i == n_scan - 1 or vals[i] <= vals[i + 1])]
        roots: list[complex] = []
        for i in cand:
            z = complex(np.exp(1j * phi[i]))
            for _ in range(max_iter):
                f = complex(self.s11(z)[0])
                if abs(f) < tol:
                    break
                d = self.s11_derivative(z)
                if abs(d) < 1e-8:
                    raise ScatteringError(f"near-double eigenvalue close to {z:.6f}: |s11'| = {abs(d):.2e}")
                step = f / d
                if abs(step) > 0.05:  # damping
                    step *= 0.05 / abs(step)
                z = z - step
            else:
                raise ScatteringError(f"root polish failed near arg z = {phi[i]:.6f}")
            if abs(complex(self.s11(z)[0])) >= tol:
                raise ScatteringError("root polish failed")
            if z.imag <= 0 or abs(abs(z) - 1.0) > 1e-6:
                raise ScatteringError(f"eigenvalue {z} off the upper unit circle")
            if all(abs(z - r) > 1e-8 for r in roots):
                roots.append(z)
        roots.sort(key=lambda w: np.angle(w))
        self.zeros = roots
        self._zeros_found = True
        return roots

    def norming_constant(self, zj: complex) -> complex:
        """c_j = s21(z_j) / s11'(z_j) with s21(z_j) = ratio psi1^- / psi2^+ at the matching point."""
        zj = complex(zj)
        mm, mp = self.solver.matched(np.array([zj]))
        m1m = mm[0, :, 0]
        m2p = mp[0, :, 1]
        zet = 0.5 * (zj - 1.0 / zj)
        # psi1^- = b psi2^+; psi_k = m_k exp(-+ i zeta x)
        b = np.vdot(m2p, m1m) / np.vdot(m2p, m2p) * np.exp(-2j * zet * self.solver.x_match)
        d = self.s11_derivative(zj)
        if abs(d) < 1e-8:
            raise ScatteringError("ill-conditioned eigenvalue: |s11'(z_j)| too small")
        return complex(b / d)

    # ---- edge data -------------------------------------------------------
    def edge_determinants(self, z0: float) -> tuple[complex, complex]:
        """(S11(z0), S21(z0)) at z0 = +-1 (the kernels handle zeta = 0 exactly)."""
        d = self.solver.determinants(np.array([complex(z0)]))
        return complex(d["S11"][0]), complex(d["S21"][0])

    def edge_slope(self, z0: float, h: float = 1e-4) -> tuple[complex, complex]:
        d = self.solver.determinants(np.array([z0 + h, z0 - h], dtype=complex))
        return (complex((d["S11"][0] - d["S11"][1]) / (2 * h)),
                complex((d["S21"][0] - d["S21"][1]) / (2 * h)))


# --------------------------------------------------------------------------
# edge quantities used by the Painleve matching


@dataclass
class EdgeLimit:
    value: complex
    generic: bool
    note: str = ""


def edge_threshold() -> float:
    return 1e-8


def reflection_at_minus_one(sc: Scatterer) -> EdgeLimit:
    """r(-1) = S21(-1)/S11(-1), or the ratio of slopes when S11(-1) vanishes."""
    S11, S21 = sc.edge_determinants(-1.0)
    if abs(S11) > edge_threshold():
        return EdgeLimit(S21 / S11, True)
    d11, d21 = sc.edge_slope(-1.0)
    if abs(d11) < edge_threshold():
        raise DegenerateEdgeError("S11 and its slope both vanish at z = -1")
    return EdgeLimit(d21 / d11, False, "S11(-1) = 0: limit taken from slopes")


def F_at_one(sc: Scatterer) -> EdgeLimit:
    """F(1) = conj(S21(1)) / S11(1), with the slope ratio when S11(1) = 0."""
    S11, S21 = sc.edge_determinants(1.0)
    if abs(S11) > edge_threshold():
        return EdgeLimit(np.conj(S21) / S11, True)
    d11, d21 = sc.edge_slope(1.0)
    if abs(d11) < edge_threshold():
        raise DegenerateEdgeError("S11 and its slope both vanish at z = 1")
    return EdgeLimit(np.conj(d21) / d11, False, "S11(1) = 0: limit taken from slopes")


def modified_reflection_R(sc: SpectralModel, z, F: Callable[[float], complex],
                          r: Callable[[float], complex], chi_radius: float = 0.1,
                          use_cutoff: bool = True) -> np.ndarray:
    """R(z) = (1 - chi) conj(r) T_+^-2 / (1 - |r|^2) + chi F G^2 on the real axis near 1."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    out = np.empty(z.size, dtype=complex)
    for i, x in enumerate(z):
        ch = float(chi_bump(x, chi_radius)) if use_cutoff else 0.0
        val = 0j
        if ch < 1.0:
            rv = r(x)
            Tp = sc.T(x, Case.II, side=+1)
            val += (1 - ch) * np.conj(rv) * Tp**-2 / (1 - abs(rv) ** 2)
        if ch > 0.0:
            val += ch * F(x) * sc.G(x) ** 2
        out[i] = val
    return out
