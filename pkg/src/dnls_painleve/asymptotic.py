"""Transition-region prediction q ~ e^{i alpha} (1 + tau^{-1/3} beta).

Everything here is a pure function of a :class:`ScatteringData` record and a
:class:`PainleveTable`; no Jost solves happen at evaluation time.
"""

from __future__ import annotations

import cmath
import io
import math
import warnings
from dataclasses import dataclass, field

from .painleve import PainleveTable, solve_pii
from .phase import Case, Region, classify_region, scaled_vars
from .scatdata import ScatteringData
from .scattering import DegenerateEdgeError

KAPPA_CLAMP = 1e-6
INDETERMINATE_EDGE = 1e-8

PREDICTION_COLUMNS = ("x", "t", "xi", "s", "tau", "alpha_inf", "phi0", "re_beta", "im_beta",
                      "re_q_pred", "im_q_pred")


class OutOfRegionError(ValueError):
    pass


class KappaError(ValueError):
    pass


def _wrap(a: float) -> float:
    """Map an angle into (-pi, pi]."""
    w = math.remainder(a, 2 * math.pi)
    return math.pi if w == -math.pi else w


def alpha_infty(sd: ScatteringData, case) -> float:
    """Case I: -2 sum arg z_j + int_0^inf nu/zeta.  Case II: the integral alone."""
    case = Case.parse(case)
    alpha = float(sd.integrals["moment"])
    if case is Case.I:
        alpha -= 2.0 * sum(cmath.phase(z) for z in sd.zeros)
    return alpha


@dataclass(frozen=True)
class EdgePhase:
    phi0: float
    flagged: bool = False
    note: str = ""
    printed: float | None = None  # Case II: the formula without the doubled G term


def phi0(sd: ScatteringData, case) -> EdgePhase:
    case = Case.parse(case)
    e = sd.edge
    if case is Case.I:
        r = complex(e["r_minus"])
        if abs(r) < INDETERMINATE_EDGE:
            return EdgePhase(0.0, True, "|r(-1)| indeterminate; generic value 0 used")
        return EdgePhase(_wrap(cmath.phase(r)))
    if e.get("degenerate_plus") or e.get("F_plus") is None:
        raise DegenerateEdgeError("S11(1) and its slope vanish: phi0 undefined")
    F = complex(e["F_plus"])
    G = complex(e["G_plus"])
    if abs(F) < INDETERMINATE_EDGE:
        return EdgePhase(0.0, True, "|F(1)| indeterminate; generic value 0 used", 0.0)
    aF, aG = cmath.phase(F), cmath.phase(G)
    return EdgePhase(_wrap(aF + 2.0 * aG), printed=_wrap(aF + aG))


def kappa(sd: ScatteringData, case, *, airy_sign: int | None = None) -> float:
    """Airy amplitude: Case I -|r(-1)|, Case II +|R(1)| (signs as stated; override with airy_sign)."""
    case = Case.parse(case)
    e = sd.edge
    if case is Case.I:
        mag = abs(complex(e["r_minus"]))
        sign = -1
    else:
        if e.get("F_plus") is None:
            raise DegenerateEdgeError("S11(1) and its slope vanish: |R(1)| undefined")
        mag = abs(complex(e["F_plus"])) * abs(complex(e["G_plus"])) ** 2
        sign = 1
    if airy_sign is not None:
        sign = 1 if airy_sign >= 0 else -1
    if mag > 1.0:
        if mag - 1.0 > KAPPA_CLAMP:
            raise KappaError(f"|kappa| = {mag!r} exceeds 1 beyond rounding")
        warnings.warn(f"|kappa| = {mag!r} clamped to 1", RuntimeWarning, stacklevel=2)
        mag = 1.0
    return sign * mag


def beta(case, table: PainleveTable, s: float, phi: float) -> complex:
    """Case I: -(i/2)(u e^{i phi} + I);  Case II: +(i/2)(u e^{i phi} + I)."""
    return beta_from_values(case, float(table.u_at(s)), float(table.tail_at(s)), phi)


def beta_from_values(case, u: float, I: float, phi: float) -> complex:
    case = Case.parse(case)
    core = 0.5j * (u * cmath.exp(1j * phi) + I)
    return -core if case is Case.I else core


@dataclass(frozen=True)
class AsymptoticPrediction:
    case_tag: Case
    x: float
    t: float
    xi: float
    s: float
    tau: float
    alpha_inf: float
    phi0: float
    u: float
    tail: float
    beta: complex
    q_pred: complex
    error_scale_claim: float = -0.5
    flags: tuple[str, ...] = ()

    def row(self) -> list[float]:
        return [self.x, self.t, self.xi, self.s, self.tau, self.alpha_inf, self.phi0,
                self.beta.real, self.beta.imag, self.q_pred.real, self.q_pred.imag]


@dataclass
class Predictor:
    """Bundles the constants of one case so that many (x, t) points reuse one PII table.

    ``alpha_sign`` and ``airy_sign`` exist to evaluate the competing sign
    readings; the defaults are the stated ones.
    """

    sd: ScatteringData
    case: Case
    C: float = 1.0
    s_min: float = -6.0
    s_max: float = 10.0
    alpha_sign: int = 1
    airy_sign: int | None = None
    phi_variant: str = "corrected"
    table: PainleveTable | None = None
    alpha: float = field(init=False)
    phase: EdgePhase = field(init=False)
    kappa: float = field(init=False)

    def __post_init__(self):
        self.case = Case.parse(self.case)
        self.alpha = alpha_infty(self.sd, self.case)
        self.phase = phi0(self.sd, self.case)
        self.kappa = kappa(self.sd, self.case, airy_sign=self.airy_sign)
        if abs(self.kappa) >= 0.999:
            # growth regime: keep to the range where the bounded branch is reliable
            self.s_min = max(self.s_min, 0.0)
        if self.table is None:
            self.table = solve_pii(self.kappa, self.s_min, self.s_max)

    @property
    def phi(self) -> float:
        if self.phi_variant == "printed" and self.phase.printed is not None:
            return self.phase.printed
        return self.phase.phi0

    def identity_defect(self) -> float:
        """|e^{i alpha} - T(inf)^2|."""
        return abs(cmath.exp(1j * self.alpha) - self.sd.T_infinity(self.case) ** 2)

    def __call__(self, x: float, t: float) -> AsymptoticPrediction:
        region = classify_region(x, t, self.C)
        want = Region.TRANSITION_MINUS1 if self.case is Case.I else Region.TRANSITION_PLUS1
        if region is not want:
            raise OutOfRegionError(f"(x, t) = ({x}, {t}) lies in {region.value}, not {want.value}")
        sv = scaled_vars(x, t, self.case)
        if sv.s < self.table.s_min:
            raise OutOfRegionError(f"s = {sv.s:.4f} below the supported range [{self.table.s_min}, inf)")
        u = float(self.table.u_at(sv.s))
        I = float(self.table.tail_at(sv.s))
        b = beta_from_values(self.case, u, I, self.phi)
        a = self.alpha_sign * self.alpha
        q = cmath.exp(1j * a) * (1.0 + sv.tau ** (-1.0 / 3.0) * b)
        flags = (self.phase.note,) if self.phase.flagged else ()
        return AsymptoticPrediction(self.case, x, t, sv.xi, sv.s, sv.tau, a, self.phi, u, I, b, q,
                                    flags=flags)


def q_asymptotic(x: float, t: float, sd: ScatteringData, C: float, case=None, **kw) -> AsymptoticPrediction:
    """One-shot prediction; the case is inferred from the region when not given."""
    if case is None:
        region = classify_region(x, t, C)
        if region is Region.TRANSITION_MINUS1:
            case = Case.I
        elif region is Region.TRANSITION_PLUS1:
            case = Case.II
        else:
            raise OutOfRegionError(f"(x, t) = ({x}, {t}) lies in {region.value}")
    return Predictor(sd, case, C, **kw)(x, t)


def predictions_csv(preds, header: dict | None = None) -> str:
    buf = io.StringIO()
    for k, v in (header or {}).items():
        buf.write(f"# {k}={v}\n")
    buf.write(",".join(PREDICTION_COLUMNS) + "\n")
    for p in preds:
        buf.write(",".join(repr(float(v)) for v in p.row()) + "\n")
    return buf.getvalue()


def modulus_bound(tau: float, b: complex) -> float:
    """Triangle-inequality bound on ||q_pred| - 1|."""
    eps = tau ** (-1.0 / 3.0) * abs(b)
    return eps + 0.5 * eps**2 * (1 + 1e-12)


__all__ = ["alpha_infty", "phi0", "kappa", "beta", "beta_from_values", "AsymptoticPrediction", "Predictor",
           "q_asymptotic", "predictions_csv", "modulus_bound", "EdgePhase", "OutOfRegionError", "KappaError",
           "PREDICTION_COLUMNS"]
