"""Command-line entry point: ``dnls-lab``.

Exit codes: 0 success, 1 numerical failure, 2 validation failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from . import __version__, pipeline
from .asymptotic import KappaError, OutOfRegionError
from .config import ConfigError, load, resolve
from .evolver import EvolutionError
from .painleve import PainleveError, PainleveInputError
from .quadrature import QuadratureError
from .scatdata import ScatteringData
from .scattering import DatumValidationError, DegenerateEdgeError, ScatteringError, SingularPointError

EXIT_OK, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 1, 2

_VALIDATION = (ConfigError, DatumValidationError, OutOfRegionError, SingularPointError, KappaError,
               PainleveInputError)
_NUMERICAL = (ScatteringError, PainleveError, EvolutionError, QuadratureError, DegenerateEdgeError,
              FloatingPointError, ArithmeticError)


def _config(path: str | None) -> dict:
    return load(path) if path else resolve({})


def _outdir(out: str) -> Path:
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _csv_text(head: dict, columns, rows) -> str:
    buf = io.StringIO()
    for k, v in head.items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    return str(o)


def _dump(path: Path, doc: dict) -> None:
    doc = {k: v for k, v in doc.items() if not k.startswith("_")}
    path.write_text(json.dumps(doc, indent=1, sort_keys=True, default=_json_default))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="dnls-lab")
def cli():
    """Scattering, Painleve II and PDE checks for transition-region asymptotics."""


def common(f):
    f = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="JSON run configuration.")(f)
    f = click.option("--out", default="out", show_default=True, type=click.Path(file_okay=False),
                     help="Output directory.")(f)
    f = click.option("--threads", default=1, show_default=True, type=click.IntRange(1, 256))(f)
    f = click.option("--seed", default=0, show_default=True, type=int, help="Seed for sampling audits.")(f)
    f = click.option("--case", "case_tag", type=click.Choice(["minus1", "plus1"]), default=None,
                     help="Restrict to one transition region.")(f)
    return f


@cli.command()
@common
def scatter(config_path, out, threads, seed, case_tag):
    """Compute scattering data and write scattering.json."""
    cfg = _config(config_path)
    sd = pipeline.scatter(cfg)
    path = _outdir(out) / "scattering.json"
    sd.save(path)
    click.echo(f"wrote {path}  zeros={len(sd.zeros)}  max|r|={max(abs(r) for r in sd.r):.3e}")


@cli.command()
@common
@click.option("--kappa", type=float, default=None, help="Airy amplitude (overrides config).")
@click.option("--s-min", type=float, default=None)
@click.option("--s-max", type=float, default=None)
def painleve(config_path, out, threads, seed, case_tag, kappa, s_min, s_max):
    """Tabulate the Painleve II solution with Airy decay."""
    cfg = _config(config_path)
    table = pipeline.painleve(cfg, kappa, s_min, s_max)
    text = table.to_csv()
    foot = pipeline.airy_footer(table)
    head = pipeline.header(cfg)
    text = "".join(f"# {k}={v}\n" for k, v in head.items()) + text
    text += "".join(f"# {k}={v}\n" for k, v in foot.items())
    path = _outdir(out) / "painleve.csv"
    path.write_text(text)
    click.echo(f"wrote {path}  kappa={table.kappa}  airy_check={foot['airy_check']}")


def _scattering(cfg, scattering_file):
    if scattering_file:
        return ScatteringData.load(scattering_file)
    return pipeline.scatter(cfg)


@cli.command()
@common
@click.option("--scattering", "scattering_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Reuse a scattering.json instead of recomputing.")
def predict(config_path, out, threads, seed, case_tag, scattering_file):
    """Evaluate the transition-region prediction on the configured (s, t) grid."""
    cfg = _config(config_path)
    sd = _scattering(cfg, scattering_file)
    rows = pipeline.predict(cfg, sd, case_tag)
    path = _outdir(out) / "predictions.csv"
    path.write_text(_csv_text(pipeline.header(cfg), pipeline.PREDICT_COLUMNS, pipeline.predictions_table(rows)))
    flagged = sum(r.pred is None for r in rows)
    click.echo(f"wrote {path}  rows={len(rows)}  flagged={flagged}")


@cli.command()
@common
def evolve(config_path, out, threads, seed, case_tag):
    """Run the PDE to the largest configured time, writing snapshots and diagnostics."""
    cfg = _config(config_path)
    od = _outdir(out)
    head = pipeline.header(cfg)

    def snap(st):
        (od / f"snapshot_t{st.t:g}.csv").write_text("".join(f"# {k}={v}\n" for k, v in head.items())
                                                    + st.snapshot_csv())

    state = pipeline.run_evolution(cfg, threads, on_snapshot=snap)
    (od / "diagnostics.csv").write_text(state.diagnostics.to_csv(dict(head, **state.params.as_dict())))
    click.echo(f"evolved to t={state.t:g}  max leakage={max(state.diagnostics.leakage):.2e}")


@cli.command()
@common
@click.option("--scattering", "scattering_file", type=click.Path(exists=True, dir_okay=False), default=None)
def compare(config_path, out, threads, seed, case_tag, scattering_file):
    """PDE field against prediction over the t-list; fits the error decay exponent."""
    cfg = _config(config_path)
    sd = _scattering(cfg, scattering_file)
    rep = pipeline.compare(cfg, sd, case_tag, threads)
    od = _outdir(out)
    _dump(od / "compare.json", rep)
    rows = []
    for c in rep["_cells"]:
        rows.append([c.case.value, c.s, c.t, c.x, c.q_num.real, c.q_num.imag, c.q_pred["stated"].real,
                     c.q_pred["stated"].imag, c.error()])
    (od / "compare_plot.csv").write_text(_csv_text(pipeline.header(cfg), (
        "case", "s", "t", "x", "re_q_num", "im_q_num", "re_q_pred", "im_q_pred", "error"), rows))
    for ser in rep["series"]:
        v = ser["variants"]["stated"]
        e = ", ".join(f"{x:.3e}" for x in v["errors"])
        ex = "n/a" if v["fitted_exponent"] is None else f"{v['fitted_exponent']:.3f}"
        click.echo(f"{ser['case']} s={ser['s']:g}: errors [{e}]  exponent {ex} ({v['fit_status']})")


@cli.command()
@common
def signature(config_path, out, threads, seed, case_tag):
    """Sampled sign-chart audit and remainder-decay fit."""
    cfg = _config(config_path)
    rep = pipeline.signature(cfg, seed, case_tag)
    _dump(_outdir(out) / "signature.json", rep)
    bad = [a for a in rep["sectors"] if not a["passed"]]
    for f in rep["remainder"]:
        click.echo(f"{f['case']}: remainder exponent {f['exponent']:.3f}")
    click.echo(f"signature audit {rep['status']}  ({len(rep['sectors'])} sectors, {len(bad)} failing)")
    if rep["status"] != "PASS":
        raise _AuditFailed()


class _AuditFailed(Exception):
    pass


def main(argv=None) -> int:
    """Run the CLI and translate failures into the exit-code contract."""
    try:
        cli.main(args=argv, prog_name="dnls-lab", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_NUMERICAL
    except click.ClickException as exc:
        exc.show()
        return EXIT_VALIDATION
    except _VALIDATION as exc:
        click.echo(f"validation error: {exc}", err=True)
        return EXIT_VALIDATION
    except _AuditFailed:
        return EXIT_NUMERICAL
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
