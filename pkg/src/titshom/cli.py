"""Batch front end: verification suites, symbol reduction, bounds calculator.

Every subcommand prints a human-readable verdict and exits 0 only when all
checks pass. `--report PATH` writes the byte-stable JSON form; config files
are key=value lines whose values lose to explicit flags.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click

from . import actions
from . import bounds as bounds_mod
from . import building as building_mod
from . import partsix, reports, zsymbols
from .errors import TitshomError, UnknownSuite


def _read_config(path: str | None) -> dict:
    if not path:
        return {}
    out: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.BadParameter(f"expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        value = value.strip().strip('"')
        try:
            out[key.strip()] = int(value)
        except ValueError:
            out[key.strip()] = value
    return out


def _suite_params(config: dict, **flags) -> dict:
    """Config fills in params the flags left unset; explicit flags win."""
    params = {k: v for k, v in config.items() if k in _PARAM_KEYS}
    for key, value in flags.items():
        if value is not None:
            params[key] = value
    return params


_PARAM_KEYS = {"n", "q", "seed", "budget", "count", "bases", "shape"}


def _print_report(rep: reports.SuiteReport) -> None:
    for c in rep.checks:
        status = "PASS" if c.passed else "FAIL"
        click.echo(f"[{status}] {c.claim}: {c.description} ({c.elapsed_ms} ms)")
        if not c.passed:
            click.echo("  expected: " + json.dumps(reports._jsonable(c.expected), sort_keys=True))
            click.echo("  computed: " + json.dumps(reports._jsonable(c.computed), sort_keys=True))
    click.echo("all checks passed" if rep.all_pass else "some checks FAILED")


def _finish(rep: reports.SuiteReport, report: str | None, csv: str | None, stable: bool) -> None:
    _print_report(rep)
    if report:
        Path(report).write_text(rep.to_json(stable_timings=stable))
    if csv:
        Path(csv).write_text(rep.to_csv(stable_timings=stable))
    if not rep.all_pass:
        sys.exit(1)


def _run(name: str, params: dict, report: str | None, csv: str | None = None,
         stable: bool = False, workers: int = 1) -> None:
    try:
        rep = reports.run_suite(name, params, workers=workers)
    except TitshomError as exc:
        raise click.ClickException(str(exc))
    _finish(rep, report, csv, stable)


report_option = click.option("--report", type=click.Path(dir_okay=False), default=None,
                             help="Write the JSON report here.")
stable_option = click.option("--stable-timings", is_flag=True,
                             help="Zero elapsed_ms fields for byte-identical reports.")
config_option = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                             default=None, help="key=value defaults; flags win.")


@click.group()
def main() -> None:
    """Exact homology checks for buildings, partition complexes, and bounds."""


@main.command()
@click.option("--n", type=int, default=None, help="Ambient rank.")
@click.option("--q", type=int, default=None, help="Field size.")
@report_option
@stable_option
@config_option
def building(n, q, report, stable_timings, config):
    """Top-homology rank and unipotent basis checks for one (n, q)."""
    _run("building", _suite_params(_read_config(config), n=n, q=q), report, stable=stable_timings)


@main.command()
@click.option("--n", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--budget", type=int, default=None)
@report_option
@stable_option
@config_option
def bar(n, q, budget, report, stable_timings, config):
    """Exactness of the ordered-decomposition complex for one (n, q)."""
    _run("bar", _suite_params(_read_config(config), n=n, q=q, budget=budget), report, stable=stable_timings)


@main.command()
@click.option("--q", type=int, default=None)
@report_option
@stable_option
@config_option
def rank2(q, report, stable_timings, config):
    """Rank-2 chamber pairing surjectivity for one q."""
    _run("rank2", _suite_params(_read_config(config), q=q), report, stable=stable_timings)


_GROUP_RE = re.compile(r"(gl|sl|borel)\((\d+),(\d+)\)\Z")


@main.command()
@click.option("--group", "group_spec", default=None,
              help="gl(N,Q), sl(2,Q) or borel(N,Q); omit to run the full suite.")
@click.option("--module", "module_spec", default="steinberg",
              type=click.Choice(["steinberg", "trivial"]), show_default=True)
@report_option
@stable_option
@config_option
def coinv(group_spec, module_spec, report, stable_timings, config):
    """Coinvariants of the Steinberg lattice under matrix group actions."""
    if group_spec is None:
        _run("coinv", _suite_params(_read_config(config)), report, stable=stable_timings)
        return
    m = _GROUP_RE.match(group_spec.strip().lower())
    if not m:
        raise click.BadParameter("group must look like gl(3,2), sl(2,3) or borel(3,2)")
    kind, n, q = m.group(1), int(m.group(2)), int(m.group(3))
    if kind == "sl" and n != 2:
        raise click.BadParameter("special linear generators are only wired for rank 2")
    st = building_mod.steinberg(n, q)
    if kind == "gl":
        gens = building_mod.gl_generators(n, q)
    elif kind == "sl":
        gens = building_mod.sl2_generators(q)
    else:
        gens = building_mod.borel_generators(n, q)
    if module_spec == "trivial":
        rank, mats = 1, [actions.trivial_action(1)(g) for g in gens]
    else:
        rank, mats = st.rank, [actions.st_action_matrix(st, g) for g in gens]
    group = actions.coinvariants(rank, mats)
    payload = {"group": group_spec, "module": module_spec, "coinvariants": str(group)}
    click.echo(json.dumps(payload, sort_keys=True))
    if report:
        Path(report).write_text(json.dumps(payload, sort_keys=True) + "\n")


def _parse_symbol(text: str) -> tuple[tuple[int, ...], ...]:
    rows = []
    for row in text.strip().split(";"):
        row = row.strip()
        if not row:
            raise click.BadParameter(f"empty row in symbol {text!r}")
        rows.append(tuple(int(x) for x in row.split(",")))
    if len({len(r) for r in rows}) != 1 or len(rows) != len(rows[0]):
        raise click.BadParameter(f"symbol {text!r} must be square: n rows of n entries")
    return tuple(rows)


def _reduce_one(vectors) -> dict:
    sym = zsymbols.ApartmentSymbol.from_vectors(vectors)
    terms = zsymbols.ash_rudolph(sym)
    unimodular = all(t.det() in (1, -1) for _, t in terms)
    lhs = zsymbols.apartment_eval(sym)
    rhs: dict = {}
    for coeff, term in terms:
        for key, v in zsymbols.apartment_eval(term).items():
            rhs[key] = rhs.get(key, 0) + coeff * v
    matches = lhs == {k: v for k, v in rhs.items() if v}
    return {
        "input": [list(v) for v in vectors],
        "terms": [
            {"coeff": coeff, "vectors": [list(v) for v in term.lines]}
            for coeff, term in terms
        ],
        "unimodular": unimodular,
        "evaluation_matches": matches,
        "verified": unimodular and matches,
    }


@main.command()
@click.option("--symbol", default=None, help='Rows are the vectors: "a11,a12;a21,a22".')
@click.option("--batch", type=click.Path(exists=True, dir_okay=False), default=None,
              help="File with one symbol per line, same syntax.")
@report_option
def reduce(symbol, batch, report):
    """Rewrite integer apartment symbols as verified unimodular combinations."""
    if (symbol is None) == (batch is None):
        raise click.UsageError("provide exactly one of --symbol or --batch")
    texts = [symbol] if symbol else [
        line for line in Path(batch).read_text().splitlines() if line.strip()
    ]
    results = []
    for text in texts:
        try:
            results.append(_reduce_one(_parse_symbol(text)))
        except TitshomError as exc:
            raise click.ClickException(f"symbol {text!r}: {exc}")
    for res in results:
        click.echo(json.dumps(res, sort_keys=True))
    if report:
        Path(report).write_text(json.dumps(results, sort_keys=True) + "\n")
    if not all(r["verified"] for r in results):
        sys.exit(1)


@main.command()
@click.option("--seed", type=int, default=None)
@click.option("--bases", type=int, default=None, help="Random bases per rank.")
@report_option
@stable_option
@config_option
def bykovskii(seed, bases, report, stable_timings, config):
    """Presentation relations: deletion images vanish exactly."""
    _run("bykovskii", _suite_params(_read_config(config), seed=seed, bases=bases),
         report, stable=stable_timings)


@main.command()
@click.option("--n", type=int, default=None, help="Largest label count checked exhaustively.")
@click.option("--seed", type=int, default=None)
@click.option("--count", type=int, default=None, help="Random larger instances.")
@report_option
@stable_option
@config_option
def barset(n, seed, count, report, stable_timings, config):
    """Restricted partition complexes are spheres; oracle cross-check."""
    _run("barset", _suite_params(_read_config(config), n=n, seed=seed, count=count),
         report, stable=stable_timings)


@main.command()
@click.option("--n", type=int, default=4, show_default=True)
@click.option("--shape", default="all", show_default=True,
              help="One augmentation shape tag, or 'all'.")
@report_option
def part6(n, shape, report):
    """Per-claim verdict table for the localized partition complexes."""
    try:
        checks = partsix.part6_claims(n, "all" if shape == "all" else (shape,))
    except TitshomError as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.BadParameter(str(exc))
    table = []
    for c in checks:
        row = {
            "claim": c["claim"],
            "shape": c["shape"],
            "n": c["n"],
            "eps": list(c["eps"]),
            "d": c["d"],
            "profile": {str(deg): str(h) for deg, h in sorted(c["profile"].items())},
            "ok": c["ok"],
        }
        if "badcase" in c:
            row["badcase"] = {
                "homology": str(c["badcase"]["homology"]),
                "class_generates": c["badcase"]["class_generates"],
            }
        table.append(row)
    payload = {
        "schema": reports.SCHEMA_VERSION,
        "n": n,
        "shape": shape,
        "claims": table,
        "all_pass": all(r["ok"] for r in table),
    }
    click.echo(json.dumps(payload, sort_keys=True))
    if report:
        Path(report).write_text(json.dumps(payload, sort_keys=True) + "\n")
    if not payload["all_pass"]:
        sys.exit(1)


@main.command()
@click.argument("descriptor")
@click.option("--mode", type=click.Choice(["field", "integral"]), default="field",
              show_default=True)
def bounds(descriptor, mode):
    """Homology vanishing bound for a product of irreducible root systems."""
    try:
        value = bounds_mod.vanishing_bound(descriptor, mode)
    except TitshomError as exc:
        raise click.ClickException(str(exc))
    click.echo(str(value))


@main.command()
@click.argument("name")
@click.option("--n", type=int, default=None)
@click.option("--q", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.option("--count", type=int, default=None)
@click.option("--shape", default=None)
@click.option("--workers", type=int, default=None, help="Parallel check workers.")
@click.option("--csv", type=click.Path(dir_okay=False), default=None,
              help="Write the flat CSV projection here.")
@report_option
@stable_option
@config_option
def suite(name, n, q, seed, budget, count, shape, workers, csv, report, stable_timings, config):
    """Run one registered check suite by name."""
    cfg = _read_config(config)
    if workers is None:
        workers = cfg.get("workers", 1) if isinstance(cfg.get("workers", 1), int) else 1
    params = _suite_params(cfg, n=n, q=q, seed=seed, budget=budget, count=count, shape=shape)
    try:
        rep = reports.run_suite(name, params, workers=workers)
    except UnknownSuite as exc:
        raise click.UsageError(str(exc))
    except TitshomError as exc:
        raise click.ClickException(str(exc))
    _finish(rep, report, csv, stable_timings)


if __name__ == "__main__":
    main()
