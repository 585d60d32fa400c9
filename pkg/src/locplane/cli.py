"""Command line front end.

Each subcommand reads and writes files and drops a ``<out>.manifest.json``
next to its main output.  ``locplane replay MANIFEST`` re-runs the recorded
command line and reproduces the same bytes.

    locplane generate --d 8 --out g8.json
    locplane thin --in g8.json --mode rev --seed 1 --trials 50 --out t.json
    locplane verify --in t.json --checks fast,heavy --out w.json
    locplane pipeline --in g8.json --k 2 --target flat --seed 1 --trials 20 --out f.json
    locplane realize --in f.json --variant 2 --out f.coords.json
    locplane check-plane --in f.coords.json --k 5 --out p.json
    locplane stats --in g8.json --procedure lex --trials 1000 --seed 0 --out s.csv
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (best_report, check_lemma16, mean_report, stats_csv, stats_summary,
                     theorem15_report)
from .graph import B, enumerate_walks, first_difference, load_graph, save_graph, walk_coloring
from .hypercube import (RealizationError, build_middle_layer, coords_to_json, is_k_locally_plane,
                        min_cycle_length, place_in_disks, realize, realized_from_dict, to_dot,
                        unique_max_premise)
from .patterns import certify_k_flat, check_lemma11, find_pattern
from .thinning import LEX, REV, ColorExhaustionError, best_of_trials, lemma2_violations, thin

EXIT_CLEAN = 0
EXIT_FOUND = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _write(path, text: str):
    Path(path).write_text(text)


def _manifest(args, argv, inputs, outputs, verdict) -> None:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    data = {
        "command": args.command,
        "argv": list(argv),
        "params": params,
        "seed": params.get("seed"),
        "inputs": inputs,
        "outputs": outputs,
        "version": __version__,
        "verdict": verdict,
    }
    _write(f"{args.out}.manifest.json", json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")


# -- commands ------------------------------------------------------------------


def cmd_generate(args, argv):
    if args.d < 1:
        raise CliError("--d must be at least 1")
    mg = build_middle_layer(args.d)
    save_graph(mg.graph, args.out)
    outputs = [args.out]
    if args.dot:
        _write(args.dot, to_dot(mg.graph))
        outputs.append(args.dot)
    g = mg.graph
    _manifest(args, argv, [], outputs,
              {"vertices": g.n, "edges": g.num_edges, "a": len(g.side_a), "b": len(g.side_b)})
    return EXIT_CLEAN


_MODE_BOUND = {"lex": "thinning", "rev": "thinning", "heavy": "heavy"}
_MODE_L16 = {"lex": "b_slow", "rev": "c_fast", "heavy": "a_heavy"}


def cmd_thin(args, argv):
    g = load_graph(args.input)
    if args.mode in ("lex", "rev") and g.d < 2:
        raise CliError("lexicographic and reversed thinning need d >= 2")
    if args.audit and args.mode == "heavy":
        raise CliError("--audit is only available for lex/rev thinning")
    best, stats = best_of_trials(g, args.mode, args.trials, args.seed, workers=args.workers)
    save_graph(best, args.out)
    csv_path = args.csv or f"{args.out}.stats.csv"
    _write(csv_path, stats_csv(stats, _MODE_BOUND[args.mode]))
    outputs = [args.out, csv_path]
    verdict = {"kept_edges": best.num_edges, "mean": str(stats.mean),
               "upper_bound": check_lemma16(best, _MODE_L16[args.mode]).verdict}
    if args.audit:
        seed = stats.base_seed + max(range(stats.trials), key=lambda i: (stats.counts[i], -i))
        out = thin(g, LEX if args.mode == "lex" else REV, np.random.default_rng(seed), seed=seed)
        _write(args.audit, json.dumps(out.to_audit_dict(), separators=(",", ":")) + "\n")
        outputs.append(args.audit)
        verdict["audit_violations"] = len(lemma2_violations(out))
    _manifest(args, argv, [args.input], outputs, verdict)
    return EXIT_CLEAN


def verify_audit(g, dump: dict) -> list[str]:
    """Recompute eligibility and retention from an audit dump and check them."""
    t = dump["t"]
    b_side = dump["b_side"]
    labels = {int(v): s for v, s in dump["labels"].items()}
    problems = []
    rows = dump["edges"]
    elig = {}
    for r in rows:
        a, b = r["a"], r["b"]
        if g.color.get((a, b)) != r["color"]:
            problems.append(f"edge ({a},{b}) not in graph with color {r['color']}")
            continue
        y, x = (b, a) if b_side == B else (a, b)
        cls = r["class"]
        ok = cls == labels[y] and cls < labels[x] and first_difference(cls, labels[x]) == r["type"]
        if ok != r["eligible"]:
            problems.append(f"edge ({a},{b}) eligibility mismatch")
        elig[(a, b)] = (ok, r["type"])
    per_vertex_type = Counter()
    for (a, b), (ok, typ) in elig.items():
        if ok:
            per_vertex_type[(a, typ)] += 1
            per_vertex_type[(b, typ)] += 1
    for r in rows:
        a, b = r["a"], r["b"]
        ok, typ = elig.get((a, b), (False, None))
        keep = ok and per_vertex_type[(a, typ)] == 1 and per_vertex_type[(b, typ)] == 1
        if keep != r["kept"]:
            problems.append(f"edge ({a},{b}) retention mismatch")
    kept = [r for r in rows if r["kept"]]
    by_vertex: dict[int, list] = {}
    for r in kept:
        by_vertex.setdefault(r["a"], []).append(r)
        by_vertex.setdefault(r["b"], []).append(r)
    for v, items in by_vertex.items():
        types = [r["type"] for r in items]
        if len(set(types)) != len(types):
            problems.append(f"(a) vertex {v}")
        if g.side_of(v) == b_side:
            if len({r["class"] for r in items}) > 1:
                problems.append(f"(b) vertex {v}")
        else:
            for r1 in items:
                for r2 in items:
                    if r1 is not r2 and r1["type"] < r2["type"]:
                        if not (r1["class"] < r2["class"] and first_difference(r1["class"], r2["class"]) == r1["type"]):
                            problems.append(f"(c) vertex {v}")
    if t < 2:
        problems.append("t < 2")
    return problems


def cmd_verify_audit(args, argv):
    g = load_graph(args.input)
    dump = json.loads(Path(args.audit).read_text())
    problems = verify_audit(g, dump)
    _write(args.out, json.dumps(problems, indent=1) + "\n")
    _manifest(args, argv, [args.input, args.audit], [args.out], {"problems": len(problems)})
    return EXIT_CLEAN if not problems else EXIT_FOUND


_TARGET_PROC = {"fast": "fast", "slow-b": "slow", "flat": "flat"}


def cmd_pipeline(args, argv):
    g = load_graph(args.input)
    if args.k < 2:
        raise CliError("--k must be at least 2")
    try:
        best, stats = best_of_trials(g, _TARGET_PROC[args.target], args.trials, args.seed, k=args.k,
                                     side=B, workers=args.workers)
    except ColorExhaustionError as exc:
        raise CliError(str(exc)) from exc
    save_graph(best, args.out)
    verdict = {"kept_edges": best.num_edges, "mean": str(stats.mean), "max": stats.max}
    if args.target == "flat":
        rep = certify_k_flat(best, args.k, 2 * args.k + 2)
        verdict["k_flat"] = rep.passed
        verdict["k_flat_certified_length"] = rep.max_walk_length
        verdict["locally-plane-target"] = theorem15_report(best.n, args.k, best.num_edges).verdict
    _manifest(args, argv, [args.input], [args.out], verdict)
    return EXIT_CLEAN


def _parse_check(spec: str):
    parts = spec.strip().split(":")
    name = parts[0]
    try:
        nums = [int(p) if p not in ("A", "B") else p for p in parts[1:]]
    except ValueError:
        raise CliError(f"bad check {spec!r}") from None
    return name, nums


def run_check(g, spec: str):
    """Returns ``(clean, witness_dict_or_None, note)`` for one check spec."""
    name, nums = _parse_check(spec)
    if name in ("heavy", "fast", "slow"):
        w = find_pattern(g, name)
    elif name == "kfast":
        w = find_pattern(g, "k-fast", nums[0])
    elif name == "kslow":
        side = nums[1] if len(nums) > 1 else B
        w = find_pattern(g, "k-slow", nums[0], side)
    elif name == "kflat":
        k = nums[0]
        L = nums[1] if len(nums) > 1 else 2 * k + 4
        w = certify_k_flat(g, k, L).witness
    elif name in ("lemma11", "firstmax"):
        w = check_lemma11(g, nums[0])
    elif name == "girth":
        girth = min_cycle_length(g)
        if not nums:
            return True, None, {"girth": str(girth)}
        need = 4 * nums[0] + 2
        return girth >= need, None, {"girth": str(girth), "required": need}
    elif name == "uniquemax":
        k = nums[0]
        for m in range(1, 2 * k + 2):
            for walk in enumerate_walks(g, m):
                cols = walk_coloring(g, walk)
                if not unique_max_premise(cols):
                    return False, {"kind": "unique-max-violation", "k": k, "vertices": list(walk),
                                   "colors": list(cols)}, None
        return True, None, None
    else:
        raise CliError(f"unknown check {name!r}")
    return w is None, (w.to_dict() if w is not None else None), None


def cmd_verify(args, argv):
    g = load_graph(args.input)
    results = {}
    witnesses = []
    for spec in args.checks.split(","):
        if not spec.strip():
            continue
        clean, wit, note = run_check(g, spec)
        results[spec] = clean if note is None else {"clean": clean, **note}
        if wit is not None:
            witnesses.append({"check": spec, **wit})
    _write(args.out, json.dumps(witnesses, separators=(",", ":")) + "\n")
    ok = all((v if isinstance(v, bool) else v["clean"]) for v in results.values())
    _manifest(args, argv, [args.input], [args.out], {"clean": ok, "checks": results})
    return EXIT_CLEAN if ok else EXIT_FOUND


def _parse_disks(text: str):
    vals = [Fraction(v) for v in text.split(",")]
    if len(vals) != 6:
        raise CliError("--disks needs six rationals: ax,ay,ar,bx,by,br")
    return vals[:3], vals[3:]


def cmd_realize(args, argv):
    g = load_graph(args.input)
    eps = None
    if args.eps_num is not None or args.eps_den is not None:
        eps = Fraction(args.eps_num if args.eps_num is not None else 1, args.eps_den if args.eps_den is not None else 1)
    try:
        rg = realize(g, args.variant, eps)
        coords = None
        if args.disks:
            da, db = _parse_disks(args.disks)
            coords = place_in_disks(rg, da, db)
    except RealizationError as exc:
        raise CliError(str(exc)) from exc
    _write(args.out, coords_to_json(rg, coords))
    _manifest(args, argv, [args.input], [args.out], {"vertices": g.n, "edges": g.num_edges})
    return EXIT_CLEAN


def cmd_check_plane(args, argv):
    data = json.loads(Path(args.input).read_text())
    rg = realized_from_dict(data)
    path = is_k_locally_plane(rg, args.k)
    result = {"k": args.k, "locally_plane": path is None, "witness": list(path) if path else None}
    _write(args.out, json.dumps(result, separators=(",", ":")) + "\n")
    _manifest(args, argv, [args.input], [args.out], {"locally_plane": path is None})
    return EXIT_CLEAN if path is None else EXIT_FOUND


_PROC_BOUNDS = {"lex": ["thinning", "thinning-log"], "rev": ["thinning", "thinning-log"], "heavy": ["heavy"],
                "slow": ["recursive"], "fast": ["recursive"], "flat": []}


def cmd_stats(args, argv):
    if args.trials < 1:
        raise CliError("--trials must be at least 1")
    g = load_graph(args.input)
    try:
        best, stats = best_of_trials(g, args.procedure, args.trials, args.seed, k=args.k, workers=args.workers)
    except ColorExhaustionError as exc:
        raise CliError(str(exc)) from exc
    kinds = _PROC_BOUNDS[args.procedure]
    reports = []
    for kind in kinds:
        k = args.k if kind == "recursive" else None
        if kind in ("thinning", "heavy"):
            reports.append(mean_report(stats, kind, g.num_edges, k))
        else:
            reports.append(best_report(stats, kind, g.num_edges, k))
    _write(args.out, stats_csv(stats, kinds[0] if kinds else None))
    summary = args.summary or f"{args.out}.summary.json"
    _write(summary, stats_summary(stats, reports))
    _manifest(args, argv, [args.input], [args.out, summary],
              {r.bound_id: r.verdict for r in reports})
    return EXIT_CLEAN if all(r.verdict for r in reports) else EXIT_FOUND


def cmd_replay(args, argv):
    data = json.loads(Path(args.manifest).read_text())
    return main(data["argv"])


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locplane", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", help="write the middle-layer graph G_d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--dot", help="also write a DOT file")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("thin", help="best of several thinning trials")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--mode", choices=("lex", "rev", "heavy"), required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--csv")
    s.add_argument("--audit", help="write a per-edge audit of the selected trial")
    s.set_defaults(func=cmd_thin)

    s = sub.add_parser("verify-audit", help="recompute and check a thinning audit dump")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--audit", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_verify_audit)

    s = sub.add_parser("pipeline", help="recursive slow/fast avoidance or the k-flat pipeline")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--target", choices=("fast", "slow-b", "flat"), required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("verify", help="exhaustive pattern checks")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--checks", required=True,
                   help="comma list of heavy,fast,slow,kfast:K,kslow:K:SIDE,kflat:K:L,lemma11:K (alias firstmax:K),girth[:K],uniquemax:K")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("realize", help="exact plane coordinates")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--variant", type=int, choices=(1, 2), required=True)
    s.add_argument("--eps-num", type=int)
    s.add_argument("--eps-den", type=int)
    s.add_argument("--disks", help="ax,ay,ar,bx,by,br: map side A into disk a and B into disk b")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("check-plane", help="certify k-locally-planeness of realized coordinates")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_check_plane)

    s = sub.add_parser("stats", help="seeded trial statistics against the expectation bounds")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--procedure", choices=("lex", "rev", "heavy", "slow", "fast", "flat"), required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.add_argument("--summary")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    s.add_argument("manifest")
    s.set_defaults(func=cmd_replay, out=None)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except (CliError, ValueError, OSError) as exc:
        print(f"locplane {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
