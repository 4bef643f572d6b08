"""Run configuration: JSON documents validated against a defaults tree.

Every key a config may contain appears in ``DEFAULTS``; anything else is
rejected before a single number is computed.
"""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path

from . import __version__

DEFAULTS: dict = {
    "datum": {"kind": "gaussian", "amplitude": 0.3, "width": 1.0, "center": 0.0, "L": 18.0, "dx": 0.01,
              "background_tolerance": 1e-12},
    "region_C": 1.0,
    "case": "both",
    "s_values": [0.0],
    "t_values": [40.0, 80.0, 160.0],
    "scattering": {"jost_step": 0.01, "exclusion": 0.02, "cutoff": 30.0, "n_samples": 200, "z_max": 20.0},
    "painleve": {"kappa": 0.5, "s_min": -8.0, "s_max": 10.0, "rtol": 1e-11, "atol": 1e-13, "spacing": 0.01},
    "evolver": {"dt": 0.004, "v_max": 8.0, "margin": 30.0, "dx_max": 0.08, "L": None, "N": None,
                "leakage_threshold": 1e-3, "diag_every": 1.0},
    "compare": {"error_floor": 1e-6, "window": 20.0},
    "signature": {"xi": [-1.01, -1.001, 1.001, 1.01], "n": 1000, "phi": 0.5235987755982988,
                  "remainder_t": [100.0, 200.0, 400.0, 800.0], "k_max": 0.5, "remainder_s": 0.0},
}

_CASES = {"minus1", "plus1", "both"}


class ConfigError(ValueError):
    pass


def _merge(base: dict, over: dict, path: str) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        where = f"{path}.{k}" if path else k
        if k not in base:
            raise ConfigError(f"unknown key {where!r}")
        if isinstance(base[k], dict):
            if not isinstance(v, dict):
                raise ConfigError(f"{where!r} must be a table")
            out[k] = _merge(base[k], v, where)
        else:
            out[k] = v
    return out


def _number(v, where: str, positive: bool = False) -> None:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where!r} must be a number")
    if positive and not v > 0:
        raise ConfigError(f"{where!r} must be positive")


def validate(cfg: dict) -> None:
    d = cfg["datum"]
    if d["kind"] not in ("tanh", "gaussian", "sech2"):
        raise ConfigError(f"datum.kind must be tanh, gaussian or sech2, not {d['kind']!r}")
    for k in ("amplitude", "center"):
        _number(d[k], f"datum.{k}")
    for k in ("width", "L", "dx", "background_tolerance"):
        _number(d[k], f"datum.{k}", positive=True)
    _number(cfg["region_C"], "region_C", positive=True)
    if cfg["case"] not in _CASES:
        raise ConfigError(f"case must be one of {sorted(_CASES)}")
    for key in ("s_values", "t_values"):
        if not isinstance(cfg[key], list) or not cfg[key]:
            raise ConfigError(f"{key!r} must be a non-empty list")
        for v in cfg[key]:
            _number(v, key, positive=(key == "t_values"))
    for block in ("scattering", "painleve", "compare"):
        for k, v in cfg[block].items():
            _number(v, f"{block}.{k}")
    for k, v in cfg["evolver"].items():
        if v is not None:
            _number(v, f"evolver.{k}", positive=True)
    sig = cfg["signature"]
    for k in ("xi", "remainder_t"):
        if not isinstance(sig[k], list) or not sig[k]:
            raise ConfigError(f"signature.{k} must be a non-empty list")
    for v in sig["xi"]:
        _number(v, "signature.xi")
        if abs(v) <= 1:
            raise ConfigError("signature.xi entries need |xi| > 1")
    _number(sig["n"], "signature.n", positive=True)


def resolve(doc: dict | None = None) -> dict:
    cfg = _merge(DEFAULTS, doc or {}, "")
    validate(cfg)
    return cfg


def load(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return resolve(doc)


def config_hash(cfg: dict) -> str:
    blob = json.dumps({"config": cfg, "version": __version__}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]
