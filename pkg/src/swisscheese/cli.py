"""Command-line interface.

    swisscheese table --m 1 --n 2 --max-k 3 --max-l 2
    swisscheese verify arnold --n 2 --r 4
    swisscheese verify all --m 1 --n 2 --arity 3 --format json
    swisscheese bar 1 2 1 2 --bound 6
    swisscheese torsor synth 1 2 3
    swisscheese torsor check data.json

Exit codes: 0 pass, 1 verification failure, 2 usage or validation error.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import __version__

__all__ = ["main", "poincare_string", "table_cells"]

CACHE_ENV = "SWISSCHEESE_CACHE_DIR"
REPORT_SCHEMA = "swisscheese.report/1"
TABLE_SCHEMA = "swisscheese.table/1"
_ALGEBRA_SOURCES = ("algebra.py", "arnold.py", "perm.py", "escoperad.py")
_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class ValidationError(click.ClickException):
    exit_code = 2


def poincare_string(coefficients) -> str:
    """[2, 4] -> '2 + 4t', [1, 3, 2] -> '1 + 3t + 2t²'."""
    terms = []
    for d, c in enumerate(coefficients):
        if not c:
            continue
        if d == 0:
            terms.append(str(c))
            continue
        power = "t" if d == 1 else "t" + str(d).translate(_SUPERSCRIPT)
        terms.append(power if c == 1 else f"{c}{power}")
    return " + ".join(terms) or "0"


def algebra_version() -> str:
    h = hashlib.sha256(__version__.encode())
    here = Path(__file__).parent
    for name in _ALGEBRA_SOURCES:
        h.update((here / name).read_bytes())
    return h.hexdigest()[:16]


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _compute_cell(args: tuple[int, int, int, int]) -> list[int]:
    from .escoperad import EscContext, esc_hilbert

    m, n, k, l = args
    return esc_hilbert(EscContext(m, n, k, l))


def _cached_cell(cache_dir: Path | None, version: str, args) -> tuple[list[int] | None, Path | None]:
    if cache_dir is None:
        return None, None
    m, n, k, l = args
    path = cache_dir / f"esc-m{m}-n{n}-k{k}-l{l}-{version}.json"
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None, path
    if data.get("version") != version or [data.get(x) for x in "mnkl"] != list(args):
        return None, path
    return data["hilbert"], path


def table_cells(m: int, n: int, max_k: int, max_l: int, cache_dir: Path | None = None,
                jobs: int = 1) -> list[dict]:
    """One entry per (k, l) with k <= max_k, l <= max_l, k + l >= 1, in (k, l) order."""
    if not 1 <= m < n:
        raise ValueError(f"need n > m >= 1, got m={m}, n={n}")
    if max_k < 0 or max_l < 0 or max_k + max_l > 6:
        raise ValueError("resource guard: need max_k, max_l >= 0 and max_k + max_l <= 6")
    keys = [(m, n, k, l) for k in range(max_k + 1) for l in range(max_l + 1) if k + l]
    version = algebra_version()
    found, paths = {}, {}
    for key in keys:
        hit, path = _cached_cell(cache_dir, version, key)
        paths[key] = path
        if hit is not None:
            found[key] = hit
    todo = [key for key in keys if key not in found]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_compute_cell, todo))
    else:
        results = [_compute_cell(key) for key in todo]
    for key, hil in zip(todo, results):
        found[key] = hil
        if paths[key] is not None:
            m_, n_, k, l = key
            doc = {"m": m_, "n": n_, "k": k, "l": l, "version": version, "hilbert": hil}
            _atomic_write(paths[key], json.dumps(doc, sort_keys=True) + "\n")
    return [
        {"k": k, "l": l, "coefficients": found[(m, n, k, l)], "poincare": poincare_string(found[(m, n, k, l)])}
        for (_, _, k, l) in keys
    ]


# ----------------------------------------------------------------------------
# output helpers


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _table_text(m: int, n: int, cells: list[dict]) -> str:
    width = max((len(c["coefficients"]) for c in cells), default=1)
    heads = ["k", "l"] + [f"t^{d}" for d in range(width)] + ["Poincaré polynomial"]
    rows = [[str(c["k"]), str(c["l"])]
            + [str(c["coefficients"][d]) if d < len(c["coefficients"]) else "0" for d in range(width)]
            + [c["poincare"]] for c in cells]
    sizes = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(heads)]
    out = [f"H(ESC_{{{m},{n}}})(k,l)"]
    for row in [heads] + rows:
        cols = [s.rjust(w) for s, w in zip(row[:-1], sizes)] + [row[-1]]
        out.append("  ".join(cols).rstrip())
    return "\n".join(out) + "\n"


def _table_csv(cells: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "l", "degree", "dimension"])
    for c in cells:
        for d, v in enumerate(c["coefficients"]):
            w.writerow([c["k"], c["l"], d, v])
    return buf.getvalue()


def _checks_csv(reports: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check", "instances", "passed", "witness"])
    for rep in reports:
        for c in rep["checks"]:
            w.writerow([rep["suite"], c["name"], c["instances"], c["passed"], c["witness"] or ""])
    return buf.getvalue()


def _checks_text(reports: list[dict]) -> str:
    lines = []
    for rep in reports:
        params = ", ".join(f"{k}={v}" for k, v in sorted(rep["params"].items()))
        lines.append(f"[{rep['suite']}] {params}")
        for c in rep["checks"]:
            mark = "ok  " if c["passed"] else "FAIL"
            line = f"  {mark} {c['name']} ({c['instances']} instances)"
            if not c["passed"]:
                line += f": {c['witness']}"
            lines.append(line)
    return "\n".join(lines) + "\n"


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _check_mn(m: int, n: int) -> None:
    if not 1 <= m < n:
        raise ValidationError(f"need n > m >= 1, got m={m}, n={n}")


# ----------------------------------------------------------------------------
# commands

_FORMAT = click.Choice(["text", "json", "csv"])


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="swisscheese")
def main():
    """Exact cohomology of little-disks and extended Swiss-Cheese cooperads."""


@main.command()
@click.option("--m", "m", type=int, default=1, show_default=True, help="Dimension of the constrained plane.")
@click.option("--n", "n", type=int, default=2, show_default=True, help="Ambient dimension.")
@click.option("--max-k", type=int, default=3, show_default=True, help="Largest number of free points.")
@click.option("--max-l", type=int, default=2, show_default=True, help="Largest number of constrained points.")
@click.option("--format", "fmt", type=_FORMAT, default="text", show_default=True)
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), envvar=CACHE_ENV,
              help=f"Cell cache directory (also ${CACHE_ENV}); omitted means no caching.")
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the report.")
@click.option("--jobs", type=click.IntRange(1, 64), default=1, show_default=True)
def table(m, n, max_k, max_l, fmt, cache_dir, seed, jobs):
    """Poincaré polynomials of H(ESC_{m,n})(k,l)."""
    _check_mn(m, n)
    cells = _guard(table_cells, m, n, max_k, max_l, cache_dir, jobs)
    if fmt == "json":
        click.echo(_dump_json({
            "schema": TABLE_SCHEMA,
            "config": {"m": m, "n": n, "max_k": max_k, "max_l": max_l, "seed": seed},
            "algebra_version": algebra_version(),
            "cells": cells,
        }), nl=False)
    elif fmt == "csv":
        click.echo(_table_csv(cells), nl=False)
    else:
        click.echo(_table_text(m, n, cells), nl=False)


def _run_suite(name: str, m: int, n: int, arity: int, bound: int, seed: int):
    from . import suites

    if name == "arnold":
        return suites.arnold_suite(n, arity, seed)
    if name == "colored":
        _check_mn(m, n)
        return suites.colored_suite(m, n, arity, seed)
    if name == "bar":
        _check_mn(m, n)
        return suites.bar_suite(m, n, arity, bound)
    _check_mn(m, n)
    return suites.torsor_suite(m, n, arity)


@main.command()
@click.argument("suite", type=click.Choice(["arnold", "colored", "bar", "torsor", "all"]))
@click.option("--m", "m", type=int, default=1, show_default=True)
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--arity", "--r", "arity", type=int, default=3, show_default=True,
              help="Arity bound (total k + l for the colored, bar and torsor suites).")
@click.option("--bound", type=int, default=6, show_default=True, help="Internal degree bound for bar complexes.")
@click.option("--format", "fmt", type=_FORMAT, default="text", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mutate-sign", is_flag=True, hidden=True)
def verify(suite, m, n, arity, bound, fmt, seed, mutate_sign):
    """Run property suites; exit 1 if any check fails."""
    from . import arnold

    names = ["arnold", "colored", "bar", "torsor"] if suite == "all" else [suite]
    reports = []

    def run():
        for name in names:
            reports.append(_guard(_run_suite, name, m, n, arity, bound, seed))

    if mutate_sign:
        with arnold.sign_mutation():
            run()
    else:
        run()
    passed = all(r.passed for r in reports)
    payload = [r.to_json() for r in reports]
    if fmt == "json":
        click.echo(_dump_json({
            "schema": REPORT_SCHEMA,
            "command": "verify",
            "config": {"suite": suite, "m": m, "n": n, "arity": arity, "bound": bound, "seed": seed,
                       "mutate_sign": mutate_sign},
            "passed": passed,
            "suites": payload,
        }), nl=False)
    elif fmt == "csv":
        click.echo(_checks_csv(payload), nl=False)
    else:
        click.echo(_checks_text(payload) + ("PASS" if passed else "FAIL"))
    raise SystemExit(0 if passed else 1)


@main.command()
@click.argument("m", type=int)
@click.argument("n", type=int)
@click.argument("k", type=int)
@click.argument("l", type=int)
@click.option("--bound", type=int, default=6, show_default=True, help="Internal degree bound.")
@click.option("--fault", type=click.Choice(["collapse"]), default=None, help="Deliberate fault control.")
@click.option("--format", "fmt", type=_FORMAT, default="text", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the report.")
def bar(m, n, k, l, bound, fault, fmt, seed):
    """Tor of the two-sided bar complex for e_n*(k+l) <- e_n*(l) -> e_m*(l)."""
    from .barhomotopy import em_collapse_check

    _check_mn(m, n)
    cert = _guard(em_collapse_check, m, n, k, l, bound, fault)
    if fmt == "json":
        click.echo(_dump_json({"schema": REPORT_SCHEMA, "command": "bar", "config": {"seed": seed},
                               "certificate": cert.to_json()}), nl=False)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "internal_degree", "p", "dimension"])
        for q, v in enumerate(cert.tor0):
            w.writerow(["tor0", q, 0, v])
        for (q, p), v in sorted(cert.higher.items()):
            w.writerow(["higher", q, p, v])
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(f"bar complex for ESC_{{{m},{n}}}({k},{l}), internal degrees <= {bound}"
                   + (f", fault={fault}" if fault else ""))
        click.echo(f"Tor_0: {poincare_string(cert.tor0)}   (pushout: {poincare_string(cert.expected)})")
        if cert.higher:
            for (q, p), v in sorted(cert.higher.items()):
                click.echo(f"Tor_{p} in internal degree {q}: {v}")
        else:
            click.echo("higher Tor: 0")
        click.echo("PASS" if cert.passed else f"FAIL: {cert.witness}")
    raise SystemExit(0 if cert.passed else 1)


@main.group()
def torsor():
    """Swiss-Cheese-type checks on truncated two-colored dg operads."""


def _emit_torsor(report, fmt: str, config: dict) -> None:
    if fmt == "json":
        click.echo(_dump_json({"schema": REPORT_SCHEMA, "command": "torsor", "config": config,
                               "report": report.to_json()}), nl=False)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "quasi_iso", "failures"])
        for a in report.arities:
            w.writerow([a.r, a.quasi_iso, "; ".join(a.failures.values())])
        click.echo(buf.getvalue(), nl=False)
    else:
        click.echo(report.to_text(), nl=False)
    raise SystemExit(0 if report.passed else 1)


@torsor.command("check")
@click.argument("path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--arity", type=int, default=None, help="Check arities up to this bound (default: the data's truncation).")
@click.option("--format", "fmt", type=_FORMAT, default="text", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the report.")
def torsor_check(path, arity, fmt, seed):
    """Check a JSON data file."""
    from .exactlin import ChainMapError
    from .torsor import DataError, check_swiss_cheese_type, load

    try:
        data = load(path)
        report = check_swiss_cheese_type(data, arity)
    except (DataError, ChainMapError) as exc:
        raise ValidationError(f"{path}: {exc}") from None
    _emit_torsor(report, fmt, {"file": path.name, "arity": arity, "seed": seed})


@torsor.command("synth")
@click.argument("m", type=int)
@click.argument("n", type=int)
@click.argument("truncation", type=int)
@click.option("--fault", type=click.Choice(["role-swapped"]), default=None, help="Deliberate fault control.")
@click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Also write the synthesized data as JSON.")
@click.option("--format", "fmt", type=_FORMAT, default="text", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the report.")
def torsor_synth(m, n, truncation, fault, output, fmt, seed):
    """Build the cohomology model of ESC_{m,n} up to TRUNCATION and check it."""
    from .torsor import check_swiss_cheese_type, from_cohomology, role_swapped

    _check_mn(m, n)
    data = _guard(from_cohomology, m, n, truncation)
    if fault == "role-swapped":
        data = role_swapped(data)
    if output is not None:
        _atomic_write(output, data.dumps())
    report = check_swiss_cheese_type(data)
    _emit_torsor(report, fmt, {"m": m, "n": n, "truncation": truncation, "fault": fault, "seed": seed})


if __name__ == "__main__":
    main()
