"""Command line interface: ``stampforge <command>``.

Exit codes: 0 success / verified, 1 a semantic negative (not a basis, target
unmet, verification failed), 2 usage or I/O errors.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import re
import sys
import time
from pathlib import Path

import click

from . import bounds as bnd
from .constructions import (
    ConstructionError,
    interval_basis,
    jia_shen_basis,
    lift_basis,
    trivial_basis,
)
from .cyclic import cyclic_two_basis
from .records import BasisCache, BasisRecord, RecordError, load_elements, record_from_basis, write_record
from .solver import SearchConfig, counting_lower_exact, exact_min_basis, extremal_reach, oracle_min_basis
from .sumsets import CyclicBasis, DomainError, IntegerBasis, coverage

SWEEP_HEADER = [
    "h", "n", "method", "size", "normalized", "ratio_power", "trivial_upper",
    "new_upper_main_term", "counting_lower_exact", "elapsed_ms",
]
METHODS = ("trivial", "jia-shen", "exact")


def _dump(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True, indent=2))


def _g(x) -> str:
    return f"{x:.6g}"


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def parse_count(text: str) -> int:
    """'1000', '1e3' or '10**3' as an exact positive integer."""
    t = text.strip().lower()
    m = re.fullmatch(r"(\d+)(?:e(\d+))?", t) or re.fullmatch(r"(\d+)\*\*(\d+)", t)
    if not m:
        raise click.BadParameter(f"not an integer: {text!r}")
    base, exp = int(m.group(1)), m.group(2)
    if exp is None:
        return base
    return base * 10 ** int(exp) if "e" in t else base ** int(exp)


def parse_grid(text: str) -> list[int]:
    """Comma list of counts; 'a..b' expands to every power of ten from a to b."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = (parse_count(p) for p in part.split("..", 1))
            x = lo
            while x <= hi:
                out.append(x)
                x *= 10
        else:
            out.append(parse_count(part))
    if not out:
        raise click.BadParameter("empty grid")
    return sorted(set(out))


def _report_dict(rep, limit=100) -> dict:
    return {
        "n": rep.n,
        "h": rep.h,
        "is_basis": rep.is_basis,
        "uncovered": list(rep.uncovered[:limit]),
        "uncovered_count": len(rep.uncovered),
        "histogram": {str(k): v for k, v in rep.histogram().items()},
    }


def _quarantine(out: Path | None) -> Path:
    if out is None:
        return Path("quarantine") / "unverified.json"
    return out.with_name(out.stem + ".quarantine.json")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Build, verify and search additive bases of [1, n] and Z/bZ."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# construct / verify / decompose
# ---------------------------------------------------------------------------


def _build(method, n, h, seed, budget, moves, residues, b, k, m, t, g):
    """Returns (kind, basis, params, ledger); raises ConstructionError on failure."""
    if method == "trivial":
        return "trivial", trivial_basis(n, h), {}, {}
    if method == "jia-shen":
        js = jia_shen_basis(n, h, seed=seed, node_budget=budget, move_budget=moves)
        p = js.params
        params = {"u": p.u, "v": p.v, "t": p.t, "g": p.g, "b": p.b, "m": p.m, "seed": seed,
                  "budget": budget, "cyclic_residues": list(js.cyclic.basis.residues)}
        return "jia_shen", js.basis, params, js.ledger
    if residues is None or b is None or m is None or t is None:
        raise click.UsageError("--method lift needs --residues, --b, --m and --t")
    A = CyclicBasis(tuple(_ints(residues)), b, k)
    C = interval_basis(-k, m, g)
    lifted = lift_basis(A, C, m, t, g)
    params = {"b": b, "k": k, "m": m, "t": t, "g": g, "residues": list(A.residues), "top": list(C)}
    ledger = {"cyclic_size": len(A), "top_size": len(C), "size_bound": lifted.size_bound,
              "size": len(lifted.basis)}
    return "lift", lifted.basis, params, ledger


@main.command()
@click.option("--method", type=click.Choice(["trivial", "jia-shen", "lift"]), required=True)
@click.option("--n", "n", type=str, help="Upper end of [1, n] (trivial, jia-shen).")
@click.option("--h", "h", type=int, help="Order (trivial, jia-shen).")
@click.option("--seed", default=1, show_default=True)
@click.option("--budget", type=int, default=None, help="Node budget of the cyclic exhaustive search.")
@click.option("--moves", type=int, default=None, help="Move budget of the cyclic local search.")
@click.option("--residues", help="Lift: residues of the cyclic basis, comma separated.")
@click.option("--b", type=int, help="Lift: modulus.")
@click.option("--k", type=int, default=2, show_default=True, help="Lift: order of the cyclic basis.")
@click.option("--m", type=int, help="Lift: top multiplier, at most b - 1.")
@click.option("--t", type=int, help="Lift: number of cyclic levels.")
@click.option("--g", type=int, default=1, show_default=True, help="Lift: order of the top set.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write the record here.")
@click.option("--store", is_flag=True, help="Also offer the record to the cache.")
@click.option("--cache", "cache_file", type=click.Path(dir_okay=False), help="Cache file.")
def construct(method, n, h, seed, budget, moves, residues, b, k, m, t, g, out, store, cache_file):
    """Build a basis, verify it and emit a JSON basis record."""
    if method != "lift" and (n is None or h is None):
        raise click.UsageError(f"--method {method} needs --n and --h")
    n = parse_count(n) if n is not None else None
    try:
        kind, basis, params, ledger = _build(method, n, h, seed, budget, moves, residues, b, k, m, t, g)
    except ConstructionError as exc:
        rec = BasisRecord({"trivial": "trivial", "jia-shen": "jia_shen", "lift": "lift"}[method],
                          {"n": n, "h": h, "seed": seed}, list(exc.elements), h or 0, False)
        path = write_record(rec, _quarantine(out))
        click.echo(f"verification failed: {exc}; record quarantined at {path}", err=True)
        sys.exit(1)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    rec = record_from_basis(kind, basis, params, verified=True, size_ledger=ledger)
    if out is not None:
        write_record(rec, out)
    else:
        click.echo(rec.to_json(), nl=False)
    if store:
        BasisCache(cache_file).put(rec)


@main.command()
@click.argument("basis_path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--n", "n", type=str, help="Upper end of [1, n]; defaults to the record's.")
@click.option("--h", "h", type=int, help="Order; defaults to the record's.")
def verify(basis_path, n, h):
    """Check a record or integer list; print a coverage report."""
    try:
        elements, rec = load_elements(basis_path.read_text())
    except (OSError, RecordError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    n = parse_count(n) if n is not None else (rec.n if rec else None)
    h = h if h is not None else (rec.order if rec else None)
    if n is None or h is None:
        click.echo("error: --n and --h are required for a bare element list", err=True)
        sys.exit(2)
    try:
        rep = coverage(IntegerBasis(tuple(elements), n, h, canonical=False))
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    _dump(_report_dict(rep))
    sys.exit(0 if rep.is_basis else 1)


@main.command()
@click.option("--method", type=click.Choice(["jia-shen", "lift"]), default="lift", show_default=True)
@click.option("--s", "targets", required=True, help="Targets, comma separated.")
@click.option("--n", "n", type=str)
@click.option("--h", "h", type=int)
@click.option("--seed", default=1, show_default=True)
@click.option("--residues")
@click.option("--b", type=int)
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--m", type=int)
@click.option("--t", type=int)
@click.option("--g", type=int, default=1, show_default=True)
def decompose(method, targets, n, h, seed, residues, b, k, m, t, g):
    """Explicit representations of targets by a lifted basis."""
    try:
        if method == "jia-shen":
            if n is None or h is None:
                raise click.UsageError("--method jia-shen needs --n and --h")
            lifted = jia_shen_basis(parse_count(n), h, seed=seed).lifted
        else:
            if residues is None or b is None or m is None or t is None:
                raise click.UsageError("--method lift needs --residues, --b, --m and --t")
            A = CyclicBasis(tuple(_ints(residues)), b, k)
            lifted = lift_basis(A, interval_basis(-k, m, g), m, t, g)
        out = []
        for s in _ints(targets):
            cert = lifted.decompose(s)
            out.append({"target": s, "summands": list(cert.summands), "order_used": cert.order_used,
                        "valid": cert.check(lifted.basis)})
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    _dump({"order": lifted.basis.h, "reach": lifted.reach, "certificates": out})
    sys.exit(0 if all(c["valid"] for c in out) else 1)


# ---------------------------------------------------------------------------
# solve / reach / bounds / cyclic
# ---------------------------------------------------------------------------


@main.command()
@click.option("--n", "n", type=str, required=True)
@click.option("--h", "h", type=int, required=True)
@click.option("--mode", type=click.Choice(["exact", "oracle"]), default="exact", show_default=True)
@click.option("--budget", type=int, default=None, help="Node budget.")
@click.option("--force", is_flag=True, help="Ignore the size ceilings.")
@click.option("--no-cache", is_flag=True, help="Do not record the witness.")
@click.option("--cache", "cache_file", type=click.Path(dir_okay=False))
def solve(n, h, mode, budget, force, no_cache, cache_file):
    """Minimum size of an h-fold basis of [1, n]."""
    n = parse_count(n)
    try:
        if mode == "oracle":
            size, wit = oracle_min_basis(n, h, with_witness=True)
            _dump({"n": n, "h": h, "mode": mode, "optimum": size, "witness": list(wit)})
            return
        st = exact_min_basis(SearchConfig(n, h, node_budget=budget, enforce_ceiling=not force))
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    _dump({
        "n": n, "h": h, "mode": mode, "optimum": st.optimum_size if st.optimal else None,
        "best_size": st.optimum_size, "optimal": st.optimal, "lower_bound": st.lower_bound,
        "witness": list(st.witness.elements), "nodes": st.nodes_expanded,
        "prunes_by_bound": st.prunes_by_bound, "prunes_by_coverage": st.prunes_by_coverage,
    })
    if not no_cache:
        kind = "exact_witness" if st.optimal else "searched"
        rec = record_from_basis(kind, st.witness, {"budget": budget}, verified=True,
                                size_ledger={"optimal": st.optimal, "lower_bound": st.lower_bound})
        BasisCache(cache_file).put(rec)
    sys.exit(0 if st.optimal else 1)


@main.command()
@click.option("--k", "k", type=int, required=True)
@click.option("--h", "h", type=int, required=True)
@click.option("--force", is_flag=True, help="Ignore the size ceilings.")
def reach(k, h, force):
    """Largest n with an h-fold basis of [1, n] of size k."""
    try:
        r = extremal_reach(k, h, enforce_limits=not force)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    _dump({"k": k, "h": h, "n": r.n, "witness": list(r.witness.elements), "nodes": r.nodes})


@main.command()
@click.option("--h", "h", type=int, required=True)
@click.option("--n", "n", type=str, required=True)
@click.option("--eps", type=float, default=0.0, show_default=True)
def bounds(h, n, eps):
    """Every bound on F_h(n) as JSON."""
    try:
        rep = bnd.bound_report(h, parse_count(n), eps)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    _dump(rep.to_dict())


@main.command()
@click.option("--u", "u", type=int, required=True)
@click.option("--v", "v", type=int, required=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--budget", type=int, default=None, help="Node budget of the exhaustive search.")
@click.option("--moves", type=int, default=None, help="Move budget of the local search.")
def cyclic(u, v, seed, budget, moves):
    """Small 2-fold basis of Z/bZ, b = (3u^2+3u+1) v^2."""
    kwargs = {"seed": seed}
    if budget is not None:
        kwargs["node_budget"] = budget
    if moves is not None:
        kwargs["move_budget"] = moves
    try:
        r = cyclic_two_basis(u, v, **kwargs)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc
    _dump({
        "u": u, "v": v, "b": r.basis.modulus, "residues": list(r.basis.residues), "size": len(r.basis),
        "target": r.target, "target_met": r.target_met, "baseline_size": r.baseline_size,
        "optimum": r.optimum, "lower_bound": r.lower_bound, "nodes": r.nodes, "moves": r.moves,
        "seed": seed,
    })
    sys.exit(0 if r.target_met else 1)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _method_size(method, n, h, seed, budget=None, moves=None):
    if method == "trivial":
        return len(trivial_basis(n, h))
    if method == "jia-shen":
        return len(jia_shen_basis(n, h, seed=seed, node_budget=budget, move_budget=moves).basis)
    if method == "exact":
        st = exact_min_basis(SearchConfig(n, h))
        return st.optimum_size
    raise DomainError(f"unknown method {method}")  # pragma: no cover


def sweep_rows(hs, ns, methods, seed=1, timing=True, budget=None, moves=None):
    rows = []
    for h in sorted(hs):
        for n in sorted(ns):
            rep = bnd.bound_report(h, n) if h >= 2 else None
            for method in sorted(methods):
                row = {"h": h, "n": n, "method": method}
                row["trivial_upper"] = _g(rep.trivial_upper) if rep else ""
                row["new_upper_main_term"] = _g(rep.new_upper) if rep else ""
                row["counting_lower_exact"] = counting_lower_exact(n, h)
                t0 = time.perf_counter()
                try:
                    size = _method_size(method, n, h, seed, budget, moves)
                except (DomainError, ConstructionError) as exc:
                    row.update(size=f"error: {exc}", normalized="", ratio_power="")
                    row["elapsed_ms"] = ""
                    rows.append(row)
                    continue
                ms = (time.perf_counter() - t0) * 1000
                row["size"] = size
                row["normalized"] = _g(size / n ** (1 / h))
                row["ratio_power"] = _g(size**h / n)
                row["elapsed_ms"] = _g(ms) if timing else ""
                rows.append(row)
    rows.sort(key=lambda r: (r["h"], r["n"], r["method"]))
    return rows


@main.command()
@click.option("--h", "h_set", required=True, help="Orders, comma separated.")
@click.option("--n", "n_grid", required=True, help="Grid such as 1e3..1e6 or 100,1000.")
@click.option("--methods", default="trivial,jia-shen", show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), help="Output file.")
@click.option("--seed", default=1, show_default=True)
@click.option("--budget", type=int, default=None, help="jia-shen: node budget of the cyclic exhaustive search.")
@click.option("--moves", type=int, default=None, help="jia-shen: move budget of the cyclic local search.")
@click.option("--timing/--no-timing", default=True, show_default=True,
              help="Leave elapsed_ms empty for byte-identical reruns.")
def sweep(h_set, n_grid, methods, csv_path, seed, budget, moves, timing):
    """Sizes of each method over a grid of (h, n), as CSV."""
    hs = _ints(h_set)
    ns = parse_grid(n_grid)
    ms = [m.strip() for m in methods.split(",") if m.strip()]
    bad = [m for m in ms if m not in METHODS]
    if bad:
        raise click.BadParameter(f"unknown methods {bad}; choose from {list(METHODS)}")
    rows = sweep_rows(hs, ns, ms, seed=seed, timing=timing, budget=budget, moves=moves)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_HEADER, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if csv_path is not None:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(buf.getvalue())
    else:
        click.echo(buf.getvalue(), nl=False)
    failed = sum(isinstance(r["size"], str) for r in rows)
    if rows and failed == len(rows):
        sys.exit(1)


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


@main.group()
def cache():
    """Inspect and update the best-known-basis cache."""


@cache.command("get")
@click.option("--n", "n", type=str, required=True)
@click.option("--h", "h", type=int, required=True)
@click.option("--cache", "cache_file", type=click.Path(dir_okay=False))
def cache_get(n, h, cache_file):
    rec = BasisCache(cache_file).get(parse_count(n), h)
    if rec is None:
        click.echo("not found", err=True)
        sys.exit(1)
    click.echo(rec.to_json(), nl=False)


@cache.command("put")
@click.argument("record_path", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--cache", "cache_file", type=click.Path(dir_okay=False))
def cache_put(record_path, cache_file):
    try:
        rec = BasisRecord.from_json(record_path.read_text())
        stored = BasisCache(cache_file).put(rec)
    except (OSError, RecordError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo("stored" if stored else "kept existing (not smaller)")


@cache.command("list")
@click.option("--cache", "cache_file", type=click.Path(dir_okay=False))
def cache_list(cache_file):
    for key, rec in sorted(BasisCache(cache_file).entries().items()):
        click.echo(f"{key}\t{rec.kind}\tsize={rec.size}")


if __name__ == "__main__":  # pragma: no cover
    main()
