"""Command line front end.

Commands: tables, inequalities, member, verify, oracle-compare.  Output is
deterministic for a fixed argument vector: rerunning a command produces
byte-identical bytes on stdout.  Exit code 0 means success, 1 means a
mathematical verification failed, 2 means the invocation or an input file
was bad.
"""

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass

from . import eigencone
from .deformed_ring import render_table
from .eigencone import (generate_inequalities, inequality_to_obj, membership,
                        irredundancy_check, distinctness_check,
                        points_from_obj)
from .quantum_ring import build_structure_table
from .root_system import build_root_system
from .unitary_oracle import (numeric_membership, rep_for_root_system,
                             su2_reference_membership)
from .weyl import minimal_reps

FORMAT_VERSION = 1


class InputError(Exception):
    """Bad invocation or input file; mapped to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    type_label: str
    rank: int
    parabolic: int = None
    n: int = None
    point: str = None
    fmt: str = "text"
    seed: int = 0
    restarts: int = 200
    tol: float = 1e-8
    workers: int = None
    use_cache: bool = True


# --- structure-table disk cache ---------------------------------------------

def cache_dir():
    env = os.environ.get("MULTCONE_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "multcone")


def _cache_path(type_label, rank, ip):
    name = f"table-{type_label}{rank}-P{ip}-v{FORMAT_VERSION}.json"
    return os.path.join(cache_dir(), name)


def _table_payload(table):
    ctx = table.ctx
    idx = {el: i for i, el in enumerate(ctx.wp)}
    tau = []
    for iu, u in enumerate(ctx.wp):
        for iv, v in enumerate(ctx.wp):
            poly = table.tau[(u, v)]
            terms = sorted([idx[y], list(d), c] for (y, d), c in poly.items())
            tau.append([iu, iv, terms])
    rs = ctx.rs
    return {
        "version": FORMAT_VERSION,
        "type": rs.type_label, "rank": rs.rank,
        "parabolic": sorted(ctx.s_p)[0],
        "classes": [list(el.word) for el in ctx.wp],
        "tau": tau,
    }


def _table_from_payload(payload, rs, ip):
    if (payload.get("version") != FORMAT_VERSION
            or payload.get("type") != rs.type_label
            or payload.get("rank") != rs.rank
            or payload.get("parabolic") != ip):
        raise ValueError("stale cache entry")
    ctx = minimal_reps(rs, {ip})
    by_word = {el.word: el for el in ctx.wp}
    order = [by_word[tuple(w)] for w in payload["classes"]]
    tau = {}
    for iu, iv, terms in payload["tau"]:
        tau[(order[iu], order[iv])] = {
            (order[iy], tuple(d)): int(c) for iy, d, c in terms}
    return build_structure_table(ctx, preset_tau=tau)


def load_table(rs, ip, use_cache=True):
    """The structure table for the maximal parabolic dropping alpha_ip,
    going through the on-disk cache when enabled.  The cache is purely an
    optimization: a cache miss, a stale file, or --no-cache all produce
    the same table by direct construction."""
    key = (rs.type_label, rs.rank, int(ip))
    path = _cache_path(*key)
    if key in eigencone._TABLES:
        table = eigencone._TABLES[key]
        if use_cache and not os.path.exists(path):
            _store_table(path, table)
        return table
    if use_cache:
        try:
            with open(path) as fh:
                table = _table_from_payload(json.load(fh), rs, int(ip))
            return eigencone.register_table(table)
        except FileNotFoundError:
            pass
        except Exception:
            pass  # unreadable cache entries are rebuilt below
    table = eigencone.structure_table(rs, int(ip))
    if use_cache:
        _store_table(path, table)
    return table


def _store_table(path, table):
    try:
        os.makedirs(cache_dir(), exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(_table_payload(table), fh)
        os.replace(tmp, path)
    except OSError:
        pass


# --- shared helpers ---------------------------------------------------------

def _root_system(cfg):
    try:
        return build_root_system(cfg.type_label, cfg.rank)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _need(cfg, field, flag):
    val = getattr(cfg, field)
    if val is None:
        raise InputError(f"{cfg.command} requires {flag}")
    return val


def _read_points(cfg, rs):
    path = _need(cfg, "point", "--point")
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    try:
        return points_from_obj(rs, obj)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _prewarm(cfg, rs):
    # route every maximal parabolic through the disk cache before the
    # enumeration asks for it
    for ip in range(1, rs.rank + 1):
        load_table(rs, ip, cfg.use_cache)


def _emit(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- commands ---------------------------------------------------------------

def cmd_tables(cfg: RunConfig):
    rs = _root_system(cfg)
    ip = _need(cfg, "parabolic", "--parabolic")
    if not 1 <= ip <= rs.rank:
        raise InputError(f"no such node P{ip} for {rs.type_label}{rs.rank}")
    table = load_table(rs, ip, cfg.use_cache)
    _emit(render_table(table, cfg.fmt))
    return 0


def cmd_inequalities(cfg: RunConfig):
    rs = _root_system(cfg)
    n = _need(cfg, "n", "-n")
    _prewarm(cfg, rs)
    ineqs = generate_inequalities(rs, n)
    if cfg.fmt == "json":
        obj = {"type": rs.type_label, "rank": rs.rank, "n": n,
               "count": len(ineqs),
               "inequalities": [inequality_to_obj(rs, n, q) for q in ineqs]}
        _emit(json.dumps(obj, indent=2))
    else:
        lines = [f"{len(ineqs)} inequalities for {rs.type_label}{rs.rank}, n={n}"]
        lines += [str(q) for q in ineqs]
        _emit("\n".join(lines))
    return 0


def cmd_member(cfg: RunConfig):
    rs = _root_system(cfg)
    n = _need(cfg, "n", "-n")
    points = _read_points(cfg, rs)
    if len(points) != n:
        raise InputError(f"point file holds {len(points)} points, expected {n}")
    _prewarm(cfg, rs)
    ineqs = generate_inequalities(rs, n)
    try:
        verdict = membership(rs, n, points, ineqs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if cfg.fmt == "json":
        obj = {"status": verdict.status,
               "violated": [inequality_to_obj(rs, n, q) for q in verdict.violated],
               "tight": [inequality_to_obj(rs, n, q) for q in verdict.tight]}
        _emit(json.dumps(obj, indent=2))
    else:
        lines = [verdict.status]
        lines += [f"violated: {q}" for q in verdict.violated]
        lines += [f"tight: {q}" for q in verdict.tight]
        _emit("\n".join(lines))
    return 0


def cmd_verify(cfg: RunConfig):
    rs = _root_system(cfg)
    n = _need(cfg, "n", "-n")
    _prewarm(cfg, rs)
    ineqs = generate_inequalities(rs, n)
    report = irredundancy_check(rs, n, ineqs, workers=cfg.workers)
    distinct = distinctness_check(ineqs)
    good = sum(1 for c in report.certificates if c.certified)
    ok = report.all_certified and distinct.passed
    if cfg.fmt == "json":
        obj = {
            "irredundant": good, "total": len(ineqs),
            "duplicate_pairs": [list(p) for p in distinct.pairs],
            "all_certified": report.all_certified,
            "certificates": [
                {"inequality": inequality_to_obj(rs, n, c.inequality),
                 "certified": c.certified, "method": c.method,
                 "optimum": str(c.optimum)}
                for c in report.certificates],
        }
        _emit(json.dumps(obj, indent=2))
    else:
        lines = [f"{good}/{len(ineqs)} irredundant, "
                 f"{len(distinct.pairs)} duplicate pairs"]
        lines += [f"{c.inequality} :: {c.method}" for c in report.certificates]
        lines += [f"duplicate: #{i} ~ #{j}" for i, j in distinct.pairs]
        _emit("\n".join(lines))
    return 0 if ok else 1


def cmd_oracle_compare(cfg: RunConfig):
    rs = _root_system(cfg)
    n = _need(cfg, "n", "-n")
    try:
        rep = rep_for_root_system(rs)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    points = _read_points(cfg, rs)
    if not points or len(points) % n:
        raise InputError(
            f"point file holds {len(points)} points, not a multiple of n={n}")
    _prewarm(cfg, rs)
    ineqs = generate_inequalities(rs, n)
    tuples = [tuple(points[k:k + n]) for k in range(0, len(points), n)]

    rows, concordant, false_feasible = [], 0, 0
    for idx, tup in enumerate(tuples):
        try:
            exact = membership(rs, n, tup, ineqs).status
            verdict = numeric_membership(rep, tup, tol=cfg.tol,
                                         restarts=cfg.restarts,
                                         seed=cfg.seed + idx)
        except ValueError as exc:
            raise InputError(f"tuple {idx + 1}: {exc}") from exc
        row = {"exact": exact, "feasible": verdict.feasible,
               "residual": verdict.residual}
        if rep.label == "SU2":
            ts = [p.coords[0] / 2 for p in tup]
            row["reference"] = su2_reference_membership(ts)
        rows.append(row)
        if exact == "outside" and verdict.feasible:
            false_feasible += 1
        # the oracle is one-sided; on the boundary either answer is sound
        if exact == "boundary" or (exact == "inside") == verdict.feasible:
            concordant += 1

    if cfg.fmt == "json":
        obj = {"group": rep.label, "n": n, "total": len(rows),
               "concordant": concordant, "false_feasible": false_feasible,
               "rows": rows}
        _emit(json.dumps(obj, indent=2))
    else:
        lines = []
        for k, row in enumerate(rows):
            extra = ""
            if "reference" in row:
                extra = f" reference={'inside' if row['reference'] else 'outside'}"
            lines.append(
                f"#{k + 1}: exact={row['exact']} "
                f"numeric={'feasible' if row['feasible'] else 'no-witness'} "
                f"residual={row['residual']:.3e}{extra}")
        lines.append(f"{concordant}/{len(rows)} concordant, "
                     f"{false_feasible} false-feasible")
        _emit("\n".join(lines))
    return 1 if false_feasible else 0


_COMMANDS = {
    "tables": cmd_tables,
    "inequalities": cmd_inequalities,
    "member": cmd_member,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
}


# --- argument handling ------------------------------------------------------

def _parse_type(type_arg, rank_arg):
    if not type_arg:
        raise InputError("--type is required")
    m = re.fullmatch(r"([A-Ga-g])(\d+)?", type_arg.strip())
    if not m:
        raise InputError(f"malformed type {type_arg!r}; expected e.g. B2 or G2")
    letter = m.group(1).upper()
    implied = int(m.group(2)) if m.group(2) else None
    if implied is None and rank_arg is None:
        raise InputError(f"type {letter!r} needs --rank")
    if implied is not None and rank_arg is not None and implied != rank_arg:
        raise InputError(f"--rank {rank_arg} contradicts --type {type_arg}")
    return letter, implied if implied is not None else rank_arg


def build_parser():
    parser = argparse.ArgumentParser(
        prog="multcone",
        description="Deformed quantum multiplication tables and the "
                    "inequality system of the multiplicative eigenvalue "
                    "polytope.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--type", required=True,
                       help="root-system label, e.g. A2, B2, G2")
        p.add_argument("--rank", type=int,
                       help="rank, when the type label does not carry it")
        p.add_argument("--parabolic", type=int,
                       help="maximal-parabolic node index, 1-based")
        p.add_argument("-n", type=int, dest="n",
                       help="number of tensor factors")
        p.add_argument("--point", help="JSON file with alcove points")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=200)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--workers", type=int)
        p.add_argument("--no-cache", action="store_true")
    return parser


def config_from_args(args) -> RunConfig:
    letter, rank = _parse_type(args.type, args.rank)
    return RunConfig(command=args.command, type_label=letter, rank=rank,
                     parabolic=args.parabolic, n=args.n, point=args.point,
                     fmt=args.format, seed=args.seed, restarts=args.restarts,
                     tol=args.tol, workers=args.workers,
                     use_cache=not args.no_cache)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
