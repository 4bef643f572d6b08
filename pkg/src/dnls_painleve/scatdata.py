"""Assembled scattering data and its JSON form.

Doubles are written with ``repr`` (shortest round-trip decimal), so reading
the file back reproduces every value bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import jost_kernel
from .phase import Case
from .scattering import (DegenerateEdgeError, F_at_one, Scatterer, reflection_at_minus_one)

SCHEMA = "dnls-scattering/1"


def default_real_samples(n: int = 200, zmax: float = 20.0, avoid: float = 0.05) -> np.ndarray:
    """n real spectral points: |z| log-spaced in (avoid, zmax), both signs, away from +-1."""
    half = n // 2
    mags = np.geomspace(avoid * 1.01, zmax, half + 16)
    mags = mags[np.abs(mags - 1.0) >= avoid][:half]
    return np.concatenate([-mags[::-1], mags])


@dataclass
class ScatteringData:
    z: list[float]
    r: list[complex]
    s11: list[complex]
    s21: list[complex]
    nu: list[float]
    zeros: list[complex]
    norming: list[complex]
    edge: dict
    integrals: dict
    provenance: dict = field(default_factory=dict)

    # ------------------------------------------------------------------
    def T_infinity(self, case) -> complex:
        case = Case.parse(case)
        out = np.exp(1j * self.integrals["half_moment"])
        if case is Case.I:
            for zj in self.zeros:
                out *= np.conj(zj)
        return complex(out)

    # ------------------------------------------------------------------
    def to_json(self) -> str:
        def c(v):
            return [float(np.real(v)), float(np.imag(v))]

        doc = {
            "schema": SCHEMA,
            "samples": [[float(z), *c(r), *c(a), *c(b), float(n)]
                        for z, r, a, b, n in zip(self.z, self.r, self.s11, self.s21, self.nu)],
            "sample_columns": ["z", "re_r", "im_r", "re_s11", "im_s11", "re_s21", "im_s21", "nu"],
            "discrete": [[float(np.angle(zj)), *c(cj), *c(zj)] for zj, cj in zip(self.zeros, self.norming)],
            "discrete_columns": ["arg_z", "re_c", "im_c", "re_z", "im_z"],
            "edge": {k: (c(v) if isinstance(v, complex) else v) for k, v in self.edge.items()},
            "integrals": {k: float(v) for k, v in self.integrals.items()},
            "provenance": self.provenance,
        }
        return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "ScatteringData":
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {doc.get('schema')!r}")
        rows = doc["samples"]
        edge = {}
        for k, v in doc["edge"].items():
            edge[k] = complex(v[0], v[1]) if isinstance(v, list) else v
        return cls(
            z=[r[0] for r in rows],
            r=[complex(r[1], r[2]) for r in rows],
            s11=[complex(r[3], r[4]) for r in rows],
            s21=[complex(r[5], r[6]) for r in rows],
            nu=[r[7] for r in rows],
            zeros=[complex(d[3], d[4]) for d in doc["discrete"]],
            norming=[complex(d[1], d[2]) for d in doc["discrete"]],
            edge=edge,
            integrals=dict(doc["integrals"]),
            provenance=doc["provenance"],
        )

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "ScatteringData":
        return cls.from_json(Path(path).read_text())


def assemble(sc: Scatterer, z_samples: np.ndarray | None = None, extra: dict | None = None) -> ScatteringData:
    """Run every scattering computation needed downstream and freeze the result."""
    z = default_real_samples() if z_samples is None else np.asarray(z_samples, dtype=float)
    s11, s21 = sc.scattering_coefficients(z)
    zeros = sc.discrete_spectrum()
    norming = [sc.norming_constant(zj) for zj in zeros]
    nu = sc.nu(z)

    edge: dict = {}
    S11m, S21m = sc.edge_determinants(-1.0)
    S11p, S21p = sc.edge_determinants(1.0)
    edge.update(S11_minus=S11m, S21_minus=S21m, S11_plus=S11p, S21_plus=S21p)
    rm = reflection_at_minus_one(sc)
    edge.update(r_minus=complex(rm.value), r_minus_generic=rm.generic)
    try:
        F = F_at_one(sc)
        edge.update(F_plus=complex(F.value), F_plus_generic=F.generic, degenerate_plus=False)
    except DegenerateEdgeError:
        edge.update(F_plus=complex(np.nan, 0), F_plus_generic=False, degenerate_plus=True)
    G1 = sc.G(1.0)
    edge["G_plus"] = complex(G1)

    moment = sc.moment(0.0, math.inf)
    half = sc.half_moment()
    neg_c = sc.cauchy(1.0 + 0j, -math.inf, 0.0).real
    integrals = dict(moment=moment, half_moment=half, cauchy_neg_at_one=neg_c)

    d = sc.datum
    provenance = dict(
        datum=d.label, datum_params=d.params, grid=[float(d.x[0]), float(d.x[-1]), int(d.x.size)],
        jost_step=sc.solver.h, x_match=sc.solver.x_match, exclusion=sc.exclusion, cutoff=sc.cutoff,
        quad_tol=list(sc.quad_tol), backend=jost_kernel.BACKEND,
    )
    if extra:
        provenance.update(extra)
    if edge.get("degenerate_plus"):
        edge["F_plus"] = None
    return ScatteringData(list(map(float, z)), list(map(complex, s21 / s11)), list(map(complex, s11)),
                          list(map(complex, s21)), list(map(float, nu)), list(zeros), norming, edge,
                          integrals, provenance)
