"""Painleve II fixed by Airy decay, its tail integral, and the residue matrices.

u'' = 2 u^3 + s u,   u(s) ~ kappa Ai(s) as s -> +inf.

The solution is built by integrating backward from s_max with Airy data;
backward is the stable direction for the decaying Airy branch.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

AI0 = 0.355028053887817239260063186004183  # 3^(-2/3) / Gamma(2/3)
AIP0 = -0.258819403792806798405183560189203  # -3^(-1/3) / Gamma(1/3)

AIRY_WINDOW = (-30.0, 30.0)
_ANCHOR_STEP = 0.25
_ASYMPTOTIC_FROM = 8.0


class PainleveError(RuntimeError):
    pass


class PainleveInputError(ValueError):
    """Request outside the supported (kappa, s) range."""


# --------------------------------------------------------------------------
# Airy function


def _taylor(s0: float, y: float, yp: float, h: float) -> tuple[float, float]:
    """Advance (Ai, Ai') from s0 by h with the Taylor series of y'' = s y."""
    val = y + yp * h
    der = yp
    hp = h  # h^(n-1) for n = 1
    # a_{n+1} from a_{n-1}, a_{n-2}: (n+1) n a_{n+1} = s0 a_{n-1} + a_{n-2}
    coeffs = [y, yp]
    n = 1
    while True:
        n += 1
        an = (s0 * coeffs[n - 2] + (coeffs[n - 3] if n >= 3 else 0.0)) / (n * (n - 1))
        coeffs.append(an)
        der += n * an * hp
        hp *= h
        term = an * hp
        val += term
        if n > 12 and abs(term) < 1e-19 * max(1.0, abs(val)) and abs(coeffs[n - 1] * hp) < 1e-19:
            break
        if n > 200:
            break
    return val, der


def _asymptotic(s: float) -> tuple[float, float]:
    """Large-s expansion, truncated at the smallest term."""
    z = (2.0 / 3.0) * s**1.5
    pre = math.exp(-z) / (2.0 * math.sqrt(math.pi))
    su, sv = 1.0, 1.0
    u = 1.0
    last = math.inf
    for k in range(1, 60):
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        v = -(6 * k + 1) / (6 * k - 1) * u
        tu = (-1) ** k * u / z**k
        if abs(tu) > last:
            break
        su += tu
        sv += (-1) ** k * v / z**k
        last = abs(tu)
        if last < 1e-17:
            break
    return pre * su / s**0.25, -pre * sv * s**0.25


@lru_cache(maxsize=None)
def _anchors_negative() -> tuple[tuple[float, float, float], ...]:
    out = [(0.0, AI0, AIP0)]
    s, y, yp = 0.0, AI0, AIP0
    while s > AIRY_WINDOW[0] - 1.0:
        y, yp = _taylor(s, y, yp, -_ANCHOR_STEP)
        s -= _ANCHOR_STEP
        out.append((s, y, yp))
    return tuple(out)


@lru_cache(maxsize=None)
def _anchors_middle() -> tuple[tuple[float, float, float], ...]:
    s = _ASYMPTOTIC_FROM
    y, yp = _asymptotic(s)
    out = [(s, y, yp)]
    while s > 0.0:
        y, yp = _taylor(s, y, yp, -_ANCHOR_STEP)
        s -= _ANCHOR_STEP
        out.append((s, y, yp))
    return tuple(out)


def _airy_scalar(s: float) -> tuple[float, float]:
    if s >= _ASYMPTOTIC_FROM:
        return _asymptotic(s)
    if s > 2.0:
        anchors = _anchors_middle()
        i = int(round((_ASYMPTOTIC_FROM - s) / _ANCHOR_STEP))
    elif s >= -2.0:
        return _taylor(0.0, AI0, AIP0, s)
    else:
        anchors = _anchors_negative()
        i = min(int(round(-s / _ANCHOR_STEP)), len(anchors) - 1)
    s0, y, yp = anchors[i]
    return _taylor(s0, y, yp, s - s0)


def airy(s):
    """(Ai(s), Ai'(s)); absolute error below 1e-12 on [-30, 30].

    Outside that window the values are best effort; see :func:`airy_in_window`.
    """
    if np.ndim(s) == 0:
        return _airy_scalar(float(s))
    flat = np.asarray(s, dtype=float).ravel()
    out = np.array([_airy_scalar(v) for v in flat])
    return out[:, 0].reshape(np.shape(s)), out[:, 1].reshape(np.shape(s))


def airy_in_window(s) -> np.ndarray | bool:
    s = np.asarray(s, dtype=float)
    ok = (s >= AIRY_WINDOW[0]) & (s <= AIRY_WINDOW[1])
    return bool(ok) if ok.ndim == 0 else ok


def airy_tail(kappa: float, s: float) -> float:
    """kappa^2 int_s^inf Ai^2 = kappa^2 (Ai'(s)^2 - s Ai(s)^2)."""
    a, ap = airy(s)
    return kappa * kappa * (ap * ap - s * a * a)


# --------------------------------------------------------------------------
# Painleve II table


@dataclass
class PainleveTable:
    kappa: float
    s_max: float
    s_min: float
    s: np.ndarray  # descending
    u: np.ndarray
    u_prime: np.ndarray
    tail: np.ndarray
    rtol: float = 1e-11
    atol: float = 1e-13
    _sol: object = field(default=None, repr=False)
    _sign: float = 1.0

    def _check(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if np.any(s < self.s_min - 1e-12):
            raise PainleveInputError(f"s below table range (s_min = {self.s_min})")
        return s

    def _eval(self, s) -> np.ndarray:
        s = self._check(s)
        hi = np.minimum(s, self.s_max)
        if self._sol is None:
            y = np.zeros((3,) + np.shape(s))
        else:
            y = np.asarray(self._sol(hi))
        # beyond s_max the solution is the Airy tail itself
        beyond = s > self.s_max
        if np.any(beyond):
            k = abs(self.kappa)
            sb = s[beyond] if np.ndim(s) else s
            a, ap = airy(sb)
            if np.ndim(s):
                y[0][beyond] = k * a
                y[1][beyond] = k * ap
                y[2][beyond] = airy_tail(k, sb) if np.ndim(sb) == 0 else np.array([airy_tail(k, v) for v in sb])
            else:
                y = np.array([k * a, k * ap, airy_tail(k, float(s))])
        return y

    def u_at(self, s):
        return self._sign * self._eval(s)[0]

    def u_prime_at(self, s):
        return self._sign * self._eval(s)[1]

    def tail_at(self, s):
        return self._eval(s)[2]

    def ode_residual(self, s, h: float = 1e-2) -> np.ndarray:
        """|u'' - 2u^3 - su| with u'' from a 6th-order central difference of the dense u'."""
        s = np.asarray(s, dtype=float)
        d = self.u_prime_at
        upp = (45 * (d(s + h) - d(s - h)) - 9 * (d(s + 2 * h) - d(s - 2 * h))
               + (d(s + 3 * h) - d(s - 3 * h))) / (60 * h)
        u = self.u_at(s)
        return np.abs(upp - 2 * u**3 - s * u)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# kappa={self.kappa!r}\n# s_max={self.s_max!r}\n# s_min={self.s_min!r}\n")
        buf.write(f"# rtol={self.rtol!r}\n# atol={self.atol!r}\n")
        buf.write("s,u,u_prime,tail\n")
        for row in zip(self.s, self.u, self.u_prime, self.tail):
            buf.write(",".join(repr(float(v)) for v in row) + "\n")
        return buf.getvalue()

    @staticmethod
    def read_csv(text: str) -> dict:
        meta, rows = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                k, _, v = line[1:].strip().partition("=")
                try:
                    meta[k] = float(v)
                except ValueError:  # hashes, PASS/FAIL flags and the like stay text
                    meta[k] = v
            elif line and not line.startswith("s,"):
                rows.append([float(x) for x in line.split(",")])
        arr = np.array(rows)
        return dict(meta=meta, s=arr[:, 0], u=arr[:, 1], u_prime=arr[:, 2], tail=arr[:, 3])


def solve_pii(kappa: float, s_min: float = -8.0, s_max: float = 10.0, *, rtol: float = 1e-11,
              atol: float = 1e-13, spacing: float = 0.01, growth_limit: float = 1e3) -> PainleveTable:
    """Backward shooting from (|kappa| Ai(s_max), |kappa| Ai'(s_max)); sign attached by oddness."""
    kappa = float(kappa)
    if abs(kappa) > 1.0:
        raise PainleveInputError("|kappa| > 1: the Airy-decaying solution has poles on the real line")
    if s_max < 8.0:
        raise PainleveInputError("s_max must be at least 8")
    if abs(kappa) > 0.999 and s_min < -12.0:
        raise PainleveInputError("|kappa| ~ 1 grows like sqrt(-s/2): s_min must be >= -12")
    if s_min < -30.0:
        raise PainleveInputError("s_min below -30 is outside the supported range")
    n = int(round((s_max - s_min) / spacing)) + 1
    grid = np.linspace(s_max, s_min, n)
    k = abs(kappa)
    sign = 1.0 if kappa >= 0 else -1.0
    if k == 0.0:
        z = np.zeros(n)
        return PainleveTable(kappa, s_max, s_min, grid, z, z.copy(), z.copy(), rtol, atol, None, sign)

    a, ap = airy(s_max)
    y0 = [k * a, k * ap, airy_tail(k, s_max)]

    def rhs(s, y):
        return [y[1], 2.0 * y[0] ** 3 + s * y[0], -y[0] ** 2]

    def blowup(s, y):
        return abs(y[0]) - growth_limit

    blowup.terminal = True
    # The starting data sit near 1e-10, so a bare absolute tolerance would swamp
    # them; atol is taken relative to the size of the initial state instead.
    atol_vec = atol * np.maximum(np.abs(y0), 1e-300)
    sol = solve_ivp(rhs, (s_max, s_min), y0, method="DOP853", rtol=rtol, atol=atol_vec, dense_output=True,
                    events=blowup)
    if sol.status == 1:
        raise PainleveError(f"|u| exceeded {growth_limit:g} near s = {sol.t[-1]:.4f}")
    if not sol.success:
        raise PainleveError(f"integration failed: {sol.message}")
    y = sol.sol(grid)
    return PainleveTable(kappa, s_max, s_min, grid, sign * y[0], sign * y[1], y[2], rtol, atol, sol.sol, sign)


def tail_integral(table: PainleveTable, s: float) -> float:
    """int_s^inf u^2 from the integrated tail component (Airy closed form past s_max)."""
    return float(table.tail_at(s))


# --------------------------------------------------------------------------
# residue matrices


@dataclass(frozen=True)
class ResidueMatrix:
    entries: np.ndarray
    s: float
    phi0: float

    @property
    def trace(self) -> complex:
        return complex(self.entries[0, 0] + self.entries[1, 1])


def residue_matrices_from_values(u: float, I: float, s: float, phi0: float) -> tuple[ResidueMatrix, ResidueMatrix]:
    mp = 0.5 * np.array([[-1j * I, u], [u, 1j * I]], dtype=complex)
    e = np.exp(1j * phi0)
    minf = -0.5j * np.array([[I, -np.conj(e) * u], [e * u, -I]], dtype=complex)
    return ResidueMatrix(mp, s, phi0), ResidueMatrix(minf, s, phi0)


def residue_matrices(table: PainleveTable, s: float, phi0: float) -> tuple[ResidueMatrix, ResidueMatrix]:
    """M1^P = (1/2)[[-iI, u], [u, iI]] and M1^inf = -(i/2)[[I, -e^{-i phi0} u], [e^{i phi0} u, -I]]."""
    return residue_matrices_from_values(float(table.u_at(s)), tail_integral(table, s), float(s), float(phi0))
