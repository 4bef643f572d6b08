"""Phase function, stationary points, region labels and transition scalings.

The oscillatory exponent of the jump matrix is ``2 i t theta(z)`` with

    theta(z) = xi (z - 1/z) - (z**2 - z**-2) / 2,      xi = x / (2 t).

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np


class Region(str, enum.Enum):
    SOLITONIC_I = "SolitonicI"
    SOLITONLESS_II = "SolitonlessII"
    TRANSITION_MINUS1 = "TransitionMinus1"
    TRANSITION_PLUS1 = "TransitionPlus1"


class Case(str, enum.Enum):
    """Transition case: ``I`` near z = -1 (x ~ -2t), ``II`` near z = +1."""

    I = "CaseI"  # noqa: E741
    II = "CaseII"

    @classmethod
    def parse(cls, value) -> "Case":
        if isinstance(value, Case):
            return value
        v = str(value).strip().lower()
        if v in {"casei", "i", "1", "minus1", "-1"}:
            return cls.I
        if v in {"caseii", "ii", "2", "plus1", "+1"}:
            return cls.II
        raise ValueError(f"unknown case tag {value!r}")


def _check_nonzero(z) -> None:
    if np.any(np.asarray(z) == 0):
        raise ZeroDivisionError("theta, zeta and lambda are singular at z = 0")


def lam(z):
    """lambda(z) = (z + 1/z) / 2."""
    _check_nonzero(z)
    return 0.5 * (z + 1.0 / z)


def zeta(z):
    """zeta(z) = (z - 1/z) / 2; lambda**2 - zeta**2 = 1."""
    _check_nonzero(z)
    return 0.5 * (z - 1.0 / z)


def theta(z, xi):
    """Phase function theta(z; xi) (accepts scalars or arrays)."""
    _check_nonzero(z)
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    return xi * (z - 1.0 / z) - 0.5 * (z * z - 1.0 / (z * z))


def theta_prime(z, xi):
    """d theta / dz = xi (1 + z**-2) - (z + z**-3)."""
    _check_nonzero(z)
    return xi * (1.0 + z**-2) - (z + z**-3)


def re_2i_theta(z, xi):
    """Re(2 i theta(z)) from the closed form in Re z, Im z."""
    _check_nonzero(z)
    z = np.asarray(z, dtype=complex)
    u, v = z.real, z.imag
    m2 = u * u + v * v
    out = 2.0 * u * v * (1.0 + 1.0 / (m2 * m2)) - 2.0 * xi * v * (1.0 + 1.0 / m2)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# stationary points


@dataclass(frozen=True)
class PhaseGeometry:
    xi: float
    eta: float | None
    xi1: float | None
    xi2: float | None
    region: Region

    @property
    def has_points(self) -> bool:
        return self.xi1 is not None


def _eta(xi: float) -> float:
    if xi < 0:
        return 0.5 * (xi - math.sqrt(xi * xi + 8.0))
    return 0.5 * (xi + math.sqrt(xi * xi + 8.0))


def stationary_points(xi: float) -> PhaseGeometry:
    """Real stationary points of theta for |xi| >= 1.

    They are the roots of ``z**2 - eta z + 1 = 0``. Returns point-free
    geometry for |xi| < 1. At xi = -1 (resp. +1) the double root -1
    (resp. +1) is returned twice.
    """
    xi = float(xi)
    if abs(xi) < 1.0:
        return PhaseGeometry(xi, None, None, None, Region.SOLITONIC_I)
    eta = _eta(xi)
    disc = max(eta * eta - 4.0, 0.0)
    sq = math.sqrt(disc)
    if xi < 0:
        # roots (eta +- sq)/2, both negative; xi1 is the one in (-1, 0)
        big = 0.5 * (eta - sq)  # most negative, |big| >= 1
        small = 1.0 / big  # Vieta, avoids cancellation in (eta + sq)/2
        region = Region.TRANSITION_MINUS1 if xi == -1.0 else Region.SOLITONLESS_II
        return PhaseGeometry(xi, eta, small, big, region)
    big = 0.5 * (eta + sq)
    small = 1.0 / big
    region = Region.TRANSITION_PLUS1 if xi == 1.0 else Region.SOLITONLESS_II
    return PhaseGeometry(xi, eta, small, big, region)


# --------------------------------------------------------------------------
# regions and scalings


def _require_positive_time(t: float) -> None:
    if not t > 0:
        raise ValueError(f"t must be positive, got {t!r}")


def classify_region(x: float, t: float, C: float) -> Region:
    """Region label of (x, t); transition labels take precedence.

    The transition strips are closed at |xi -+ 1| = 0 so that the rays
    x = -+2t themselves are labelled as transition points.
    """
    _require_positive_time(t)
    if not C > 0:
        raise ValueError("C must be positive")
    xi = x / (2.0 * t)
    t23 = t ** (2.0 / 3.0)
    if abs(xi + 1.0) * t23 <= C:
        return Region.TRANSITION_MINUS1
    if abs(xi - 1.0) * t23 <= C:
        return Region.TRANSITION_PLUS1
    return Region.SOLITONIC_I if abs(xi) < 1.0 else Region.SOLITONLESS_II


@dataclass(frozen=True)
class ScaledCoordinates:
    x: float
    t: float
    xi: float
    tau: float
    s: float
    case: Case

    def k_of_z(self, z):
        """Affine map z -> k onto the Painleve variable."""
        if self.case is Case.I:
            return self.tau ** (1.0 / 3.0) * (z + 1.0)
        return -self.tau ** (1.0 / 3.0) * (z - 1.0)

    def z_of_k(self, k):
        if self.case is Case.I:
            return k / self.tau ** (1.0 / 3.0) - 1.0
        return 1.0 - k / self.tau ** (1.0 / 3.0)


def scaled_vars(x: float, t: float, case) -> ScaledCoordinates:
    _require_positive_time(t)
    case = Case.parse(case)
    xi = x / (2.0 * t)
    tau = 0.75 * t
    if case is Case.I:
        s = (8.0 / 3.0) * (xi + 1.0) * tau ** (2.0 / 3.0)
    else:
        s = -(8.0 / 3.0) * (xi - 1.0) * tau ** (2.0 / 3.0)
    return ScaledCoordinates(x, t, xi, tau, s, case)


def xi_from_s(s: float, t: float, case) -> float:
    """Invert the s-scaling: the xi at which (x = 2 t xi, t) has Painleve variable s."""
    _require_positive_time(t)
    case = Case.parse(case)
    tau = 0.75 * t
    shift = 3.0 * s / (8.0 * tau ** (2.0 / 3.0))
    return -1.0 + shift if case is Case.I else 1.0 - shift


def x_from_s(s: float, t: float, case) -> float:
    return 2.0 * t * xi_from_s(s, t, case)


def scaled_phase_points(x: float, t: float, case) -> tuple[float, float] | None:
    """Scaled stationary points k_1, k_2 (None when |xi| < 1)."""
    sc = scaled_vars(x, t, case)
    geo = stationary_points(sc.xi)
    if not geo.has_points:
        return None
    return float(sc.k_of_z(geo.xi1)), float(sc.k_of_z(geo.xi2))


def confinement_radius(C: float) -> float:
    """(3/4)**(1/3) sqrt(2C): bound on |k_j| inside a transition strip."""
    return 0.75 ** (1.0 / 3.0) * math.sqrt(2.0 * C)


def default_disk_radius(C: float) -> float:
    return 1.5 * confinement_radius(C)


def phase_remainder(z, x: float, t: float, case):
    """t theta(z) - (4/3) k**3 - s k from the exact closed forms."""
    sc = scaled_vars(x, t, case)
    k = sc.k_of_z(np.asarray(z, dtype=complex))
    out = t * theta(z, sc.xi) - (4.0 / 3.0) * k**3 - sc.s * k
    return complex(out) if np.ndim(out) == 0 else out


def phase_remainder_series(z, x: float, t: float, case, n_terms: int = 60):
    """Truncated power series for the same remainder (documentation/cross-check).

    Case I:  (2/3) sum_{n>=4} (n-1) tau^((3-n)/3) k^n
             + (4/3)(xi+1) sum_{n>=2} tau^((3-n)/3) k^n
    Case II: same first sum, second term with -(4/3)(xi-1).
    """
    sc = scaled_vars(x, t, case)
    k = sc.k_of_z(np.asarray(z, dtype=complex))
    tau = sc.tau
    a = sum((n - 1) * tau ** ((3.0 - n) / 3.0) * k**n for n in range(4, 4 + n_terms))
    b = sum(tau ** ((3.0 - n) / 3.0) * k**n for n in range(2, 2 + n_terms))
    coef = (sc.xi + 1.0) if sc.case is Case.I else -(sc.xi - 1.0)
    return (2.0 / 3.0) * a + (4.0 / 3.0) * coef * b


# --------------------------------------------------------------------------
# sampled signature audit
#
# Each sector is a sampling predicate around an apex (0, xi_1 or xi_2) with
# the opening angle phi; the bound is on Re(2 i theta) with the stated sign.
# The xi_2 sectors are split by the distance |z - xi_2| to the apex: the split
# by |z| itself is violated just outside |z| = 2.


@dataclass(frozen=True)
class Sector:
    name: str
    apex: float
    arg_lo: float
    arg_hi: float
    radius: float
    sign: int  # +1: Re(2 i theta) >= bound, -1: Re(2 i theta) <= -bound
    bound: str  # "sin2phi", "quad_xi1", "quad_xi2", "linear"
    re_lo: float = -math.inf
    re_hi: float = math.inf
    near_apex: bool | None = None  # True: |z - c| <= 2, False: > 2
    split_center: float | None = None  # c; defaults to the apex

    def accepts(self, z: np.ndarray) -> np.ndarray:
        ok = (z.real > self.re_lo) & (z.real < self.re_hi) & (np.abs(z) > 1e-12)
        if self.near_apex is not None:
            c = self.apex if self.split_center is None else self.split_center
            d = np.abs(z - c)
            ok &= (d <= 2.0) if self.near_apex else (d > 2.0)
        return ok

    def lower_bound(self, z: np.ndarray, geo: PhaseGeometry) -> np.ndarray:
        v = np.abs(z.imag)
        if self.bound == "sin2phi":
            return np.abs(np.sin(2.0 * np.angle(z))) * v
        u = z.real - self.apex
        if self.bound == "quad_xi1":
            return 4.0 / abs(geo.xi1) * u * u * v
        if self.bound == "quad_xi2":
            return u * u * v / (8.0 * abs(geo.xi2) ** 3)
        if self.bound == "linear":
            return 2.0 * math.sqrt(2.0) * v
        raise ValueError(self.bound)

    def conjugate(self) -> "Sector":
        name = self.name[:-4] if self.name.endswith("_bar") else self.name + "_bar"
        return Sector(name, self.apex, -self.arg_hi, -self.arg_lo, self.radius, -self.sign,
                      self.bound, self.re_lo, self.re_hi, self.near_apex, self.split_center)


def signature_sectors(xi: float, phi: float = math.pi / 6, far: float = 10.0,
                      split: str = "apex") -> list[Sector]:
    """Upper and lower sectors with their claimed sign of Re(2 i theta).

    ``split="origin"`` measures the near/far cut of the xi_2 sectors by |z|
    instead of |z - xi_2|; that variant has genuine violations and serves as
    a negative control.
    """
    if split not in ("apex", "origin"):
        raise ValueError(f"unknown split {split!r}")
    if not 0 < phi < math.pi / 4:
        raise ValueError("opening angle must lie in (0, pi/4)")
    geo = stationary_points(xi)
    if abs(xi) <= 1.0:
        raise ValueError("sector audit needs |xi| > 1")
    x1, x2 = geo.xi1, geo.xi2
    gam = 0.5 * x1
    r0 = abs(gam) / math.cos(phi)
    pi = math.pi
    if xi < -1:
        upper = [
            Sector("Omega3", 0.0, 0.0, phi, far, +1, "sin2phi"),
            Sector("Omega0", 0.0, pi - phi, pi, r0, -1, "sin2phi", re_lo=gam),
            Sector("Omega1", x1, 0.0, phi, r0, -1, "quad_xi1", re_hi=gam),
            Sector("Omega2_near", x2, pi - phi, pi, far, -1, "quad_xi2", near_apex=True),
            Sector("Omega2_far", x2, pi - phi, pi, far, -1, "linear", near_apex=False),
        ]
    else:
        upper = [
            Sector("Omega3", 0.0, pi - phi, pi, far, -1, "sin2phi"),
            Sector("Omega0", 0.0, 0.0, phi, r0, +1, "sin2phi", re_hi=gam),
            Sector("Omega1", x1, pi - phi, pi, r0, +1, "quad_xi1", re_lo=gam),
            Sector("Omega2_near", x2, 0.0, phi, far, +1, "quad_xi2", near_apex=True),
            Sector("Omega2_far", x2, 0.0, phi, far, +1, "linear", near_apex=False),
        ]
    if split == "origin":
        upper = [replace(s, split_center=0.0) if s.near_apex is not None else s for s in upper]
    return upper + [s.conjugate() for s in upper]


def sample_sector(sector: Sector, n: int, rng: np.random.Generator) -> np.ndarray:
    out: list[np.ndarray] = []
    got = 0
    while got < n:
        r = sector.radius * np.sqrt(rng.uniform(0.0, 1.0, 4 * n))
        a = rng.uniform(sector.arg_lo, sector.arg_hi, 4 * n)
        z = sector.apex + r * np.exp(1j * a)
        z = z[sector.accepts(z)]
        out.append(z)
        got += z.size
    return np.concatenate(out)[:n]


@dataclass(frozen=True)
class SectorAudit:
    xi: float
    sector: str
    n: int
    violations: int
    worst_margin: float  # min over samples of sign*Re(2 i theta) - bound

    @property
    def passed(self) -> bool:
        return self.violations == 0


def audit_signature(xi: float, n: int, rng: np.random.Generator,
                    phi: float = math.pi / 6, sectors: list[Sector] | None = None) -> list[SectorAudit]:
    geo = stationary_points(xi)
    res = []
    for sec in sectors if sectors is not None else signature_sectors(xi, phi):
        z = sample_sector(sec, n, rng)
        margin = sec.sign * re_2i_theta(z, xi) - sec.lower_bound(z, geo)
        # tolerance only for round-off at the apex where both sides vanish
        bad = int(np.count_nonzero(margin < -1e-12))
        res.append(SectorAudit(float(xi), sec.name, int(z.size), bad, float(margin.min())))
    return res


def remainder_sup(t: float, case, s: float = 0.0, k_max: float = 0.5, n: int = 401) -> float:
    """max over the closed disk |k| <= k_max of |S(t; k)| at Painleve variable s.

    The disk is sampled on a polar grid; the maximum modulus principle puts
    the supremum on the boundary circle, but the interior rings are cheap.
    """
    case = Case.parse(case)
    x = x_from_s(s, t, case)
    sc = scaled_vars(x, t, case)
    ang = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    rad = np.linspace(0.0, k_max, 11)[1:]
    k = (rad[:, None] * np.exp(1j * ang)[None, :]).ravel()
    return float(np.max(np.abs(phase_remainder(sc.z_of_k(k), x, t, case))))


def fit_power(ts, values) -> float:
    """Least-squares slope of log(values) against log(ts)."""
    lt = np.log(np.asarray(ts, dtype=float))
    lv = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(lt, lv, 1)[0])
