"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 size cap exceeded, 3 cache error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import homoclinic_lab as hl
from .group_core import IDENTITY
from .group_ring import CACHE_ENV, CacheError, grig_powers, power_collision_from_powers
from .lie_shift import (
    CapExceeded,
    RuleFileError,
    SearchCapExceeded,
    example_rule,
    format_rule,
    formula_count,
    listed_k0_count,
    parse_rule_text,
    periodic_zero_pairs,
    search_brackets,
    verify_axioms,
)
from .lie_shift.rules import required_window
from .rewrite_core import BasisModel, eliminate_bad, left_nest, parse_term
from .schreier_lab import build_graph, geodesic_count, segment_decomposition

EXIT_USAGE, EXIT_CAP, EXIT_CACHE, EXIT_VERIFY = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def int_range(text: str) -> list[int]:
    """'1-3', '1,2,5', '4' or '' (empty)."""
    out: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, sep, hi = part.partition("-")
        if sep and lo:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _emit(args, rows: list[dict], columns: Sequence[str], extra: dict | None = None) -> None:
    if args.format == "json":
        doc = {"rows": rows}
        if extra:
            doc.update(extra)
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        for r in rows:
            sys.stdout.write("\t".join(str(r[c]) for c in columns) + "\n")


# --------------------------------------------------------------------------

def cmd_periodic_count(args) -> int:
    rows = []
    failed = False
    for k in int_range(args.k):
        for n in int_range(args.n):
            if n < 1:
                raise UsageError("periods must be >= 1")
            brute = periodic_zero_pairs(example_rule(k), n, cap=args.cap, workers=args.workers)
            # for k = 0 the reference is the value listed for it, 24^n
            ref = formula_count(k, n) if k else listed_k0_count(n)
            match = brute == ref
            if not match and k:
                failed = True
            if not match and not k:
                print(f"note: k=0 n={n}: enumeration gives {brute}, listed value {ref}, "
                      f"general formula {formula_count(0, n)}", file=sys.stderr)
            rows.append({"k": k, "n": n, "brute": str(brute), "formula": str(ref),
                         "match": "yes" if match else "no"})
    _emit(args, rows, ("k", "n", "brute", "formula", "match"))
    return EXIT_VERIFY if failed else 0


def cmd_grig_powers(args) -> int:
    cache = args.cache or os.environ.get(CACHE_ENV)
    words = [w for w in args.words.split(",") if w]
    powers = grig_powers(words, args.q, args.i_max, cache)
    rows = [{"i": i, "support": len(p)} for i, p in enumerate(powers)]
    extra = None
    if args.collision:
        hit = power_collision_from_powers(powers)
        extra = {"collision": list(hit) if hit else None}
        print(f"collision up to {args.i_max}: {hit if hit else 'none'}", file=sys.stderr)
    _emit(args, rows, ("i", "support"), extra)
    return 0


def cmd_schreier(args) -> int:
    g = build_graph(args.n_vertices)
    gens = tuple(w for w in args.gens.split(",") if w)
    rep = geodesic_count(g, gens)
    segs, trailing = segment_decomposition(g)
    edges = [{"u": e.u, "v": e.v, "label": e.label} for e in g.edges]
    geo = [{"vertex": v, "distance": rep.distance[v], "count": str(rep.count[v]),
            "exact": "yes" if rep.is_exact(v) else "no"} for v in sorted(rep.distance)]
    seg_rows = [{"label": s.label, "start": s.start, "stop": s.stop} for s in segs]
    if args.format == "json":
        sys.stdout.write(json.dumps({"edges": edges, "geodesics": geo, "segments": seg_rows,
                                     "generators": list(gens), "trailing": trailing},
                                    sort_keys=True) + "\n")
        return 0
    out = sys.stdout
    out.write("# edges\n")
    out.write(g.edge_list())
    out.write(f"# geodesics {','.join(gens)}\n")
    for r in geo:
        out.write(f"{r['vertex']}\t{r['distance']}\t{r['count']}\t{r['exact']}\n")
    out.write("# segments\n")
    for r in seg_rows:
        out.write(f"{r['label']}\t{r['start']}\t{r['stop']}\n")
    return 0


def _read_rule(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_rule_text(fh.read())
    except OSError as exc:
        raise UsageError(str(exc)) from exc


def cmd_bracket_verify(args) -> int:
    rule = _read_rule(args.rule_file)
    window = args.window if args.window is not None else max(1, required_window(rule))
    rep = verify_axioms(rule, window)
    if args.format == "json":
        sys.stdout.write(json.dumps({"bilinear": rep.bilinear, "reflexive": rep.reflexive,
                                     "jacobi": rep.jacobi, "window": rep.window,
                                     "required_window": rep.required,
                                     "witnesses": {k: [str(x) for x in v] for k, v in rep.witnesses.items()}},
                                    sort_keys=True) + "\n")
    else:
        sys.stdout.write(rep.summary() + "\n")
        for name, wit in sorted(rep.witnesses.items()):
            sys.stdout.write(f"witness {name}: " + " | ".join(map(str, wit)) + "\n")
    if rep.window < rep.required:
        print(f"warning: window {rep.window} below the required {rep.required}", file=sys.stderr)
    return 0 if rep.ok else EXIT_VERIFY


def cmd_homoclinic(args) -> int:
    L, cap = args.level, args.max_level
    if L > cap:
        raise hl.LevelCapExceeded(f"level {L} above the cap {cap}")
    rows = []
    for n in range(L + 1):
        for j in range(1, L + 2):
            rows.append({"n": n, "window": hl.block_size(j), "dim": hl.window_dim(n, hl.block_size(j), cap)})
    laws = hl.dimension_laws(L, cap)
    inv = [hl.check_invariance(n, cap) for n in range(min(L, args.invariance_levels) + 1)]
    nnh = [hl.check_no_new_homoclinics(i, cap) for i in range(L)]
    ok = all(r.quadrupling and r.increment for r in laws) and all(r.ok for r in inv + nnh)
    extra = {"laws": [{"n": r.n, "quadrupling": r.quadrupling, "increment": r.increment} for r in laws],
             "invariance": [r.ok for r in inv], "no_new_homoclinics": [r.ok for r in nnh]}
    _emit(args, rows, ("n", "window", "dim"), extra)
    for r in laws:
        if not (r.quadrupling and r.increment):
            print(f"dimension law failure at n={r.n}: {r}", file=sys.stderr)
    for r in inv + nnh:
        for v in r.violations:
            print(f"level {r.level}: {v}", file=sys.stderr)
    return 0 if ok else EXIT_VERIFY


def cmd_rewrite(args) -> int:
    if args.term is not None:
        text = args.term
    else:
        try:
            with open(args.term_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    t = parse_term(text)
    q = args.q
    trace: list = []
    if args.rule_file:
        rule = _read_rule(args.rule_file)
        q = rule.q
        oracle = BasisModel(rule)
        flat = eliminate_bad(left_nest(t, q), oracle, model=oracle.model(), trace=trace)
    else:
        flat = left_nest(t, q)
    rows = [{"coeff": fb.coeff, "base": fb.base, "tail": ",".join(map(str, fb.tail))} for fb in flat]
    _emit(args, rows, ("coeff", "base", "tail"),
          {"measures": [list(m) if m else None for m in trace]} if args.rule_file else None)
    return 0


def cmd_search(args) -> int:
    tracks = int_range(args.target_tracks) if args.target_tracks else None
    pairs = None
    if args.pairs:
        pairs = [tuple(int(v) for v in p.split("-")) for p in args.pairs.split(",") if p]
    try:
        found = search_brackets(args.q, args.d, args.r, args.w, cap=args.cap, target_tracks=tracks,
                                pairs=pairs, workers=args.workers)
    except AssertionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VERIFY
    rows = [{"index": i, "rule": format_rule(r).strip().replace("\n", " | ")} for i, r in enumerate(found)]
    _emit(args, rows, ("index", "rule"), {"count": len(found)})
    print(f"{len(found)} brackets found, all re-verified", file=sys.stderr)
    return 0


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="liesubshift", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("periodic-count", help="commuting pairs of n-periodic points for []_k")
    s.add_argument("--k", default="1-3")
    s.add_argument("--n", default="1-3")
    s.add_argument("--cap", type=int, default=1 << 28)
    s.set_defaults(func=cmd_periodic_count)

    s = sub.add_parser("grig-powers", help="support sizes of powers in the Grigorchuk group ring")
    s.add_argument("i_max", type=int)
    s.add_argument("--words", default="ada,dad,c")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--cache")
    s.add_argument("--collision", action="store_true")
    s.set_defaults(func=cmd_grig_powers)

    s = sub.add_parser("schreier", help="Schreier graph on the orbit of 1^inf")
    s.add_argument("n_vertices", type=int)
    s.add_argument("--gens", default="a,b,c,d")
    s.set_defaults(func=cmd_schreier)

    s = sub.add_parser("bracket-verify", help="check the Lie axioms for a rule file")
    s.add_argument("rule_file")
    s.add_argument("--window", type=int)
    s.set_defaults(func=cmd_bracket_verify)

    s = sub.add_parser("homoclinic", help="window dimensions of the X_n spaces")
    s.add_argument("level", type=int)
    s.add_argument("--max-level", type=int, default=hl.DEFAULT_MAX_LEVEL)
    s.add_argument("--invariance-levels", type=int, default=2)
    s.set_defaults(func=cmd_homoclinic)

    s = sub.add_parser("rewrite", help="left-nest a Lie term")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("term_file", nargs="?")
    g.add_argument("--term")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--rule-file", help="also remove commuting steps using this bracket")
    s.set_defaults(func=cmd_rewrite)

    s = sub.add_parser("search", help="exhaustive search for Lie brackets")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--r", type=int, default=0)
    s.add_argument("--w", type=int, default=0)
    s.add_argument("--target-tracks")
    s.add_argument("--pairs", help="comma-separated s-t pairs, e.g. 1-2")
    s.add_argument("--cap", type=int, default=1 << 20)
    s.set_defaults(func=cmd_search)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (CapExceeded, SearchCapExceeded, hl.LevelCapExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except (UsageError, RuleFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
