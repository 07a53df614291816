"""Command-line entry point: ``listrecolor <command> ...``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import io as fio
from .discharging import attribute_violations, audit
from .generators import FAMILIES, GenerationError, generate
from .graph import Graph
from .oracle import StateCapExceeded, bfs_distance, kgood_reachable
from .pipeline import THEOREMS, ClassViolation, NoConfigurationFound, RecipeCapExceeded, reconfigure
from .recolor import ExtensionError, RecolorSequence, verify
from .structure import class_check_planar6, mad

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CLASS = 3
EXIT_VERIFY = 4
EXIT_NO_CONFIG = 5
EXIT_CAP = 6

log = logging.getLogger("listrecolor")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# loading


def _read(path: str | None, what: str) -> bytes:
    if path is None:
        raise CliError(EXIT_PARSE, f"no {what} file given")
    try:
        return fio.read_text(path)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {what} file {path}: {exc.strerror}") from None


def _path(args, name: str) -> str | None:
    explicit = getattr(args, name, None)
    if explicit:
        return explicit
    if getattr(args, "bundle", None):
        return str(Path(args.bundle) / fio.BUNDLE_FILES[name])
    return None


def load_graph(args) -> Graph:
    p = _path(args, "graph")
    return fio.parse_graph(_read(p, "graph"), p or "")


def load_instance(args) -> tuple[Graph, dict, dict, dict]:
    g = load_graph(args)
    parts = []
    for name, parser in (("lists", fio.parse_lists), ("alpha", fio.parse_coloring), ("beta", fio.parse_coloring)):
        p = _path(args, name)
        parts.append(parser(_read(p, name), p or ""))
    lists, alpha, beta = parts
    problems = fio.cross_validate(g, lists, alpha, beta)
    if problems:
        raise CliError(EXIT_PARSE, "inconsistent instance: " + "; ".join(problems))
    return g, lists, alpha, beta


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _counts_table(g: Graph, counts) -> str:
    rows = ["vertex,recolorings"] + [f"{v},{counts.get(v, 0)}" for v in sorted(g.vertices)]
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_check_class(args) -> int:
    g = load_graph(args)
    if args.theorem == "planar6":
        rep = class_check_planar6(g)
        for line in rep.lines():
            print(line)
        ok = rep.in_class
    else:
        value = mad(g) if g.vertices else Fraction(0)
        print(f"mad: {value}")
        ok = value < Fraction(5, 2)
    print(f"in class {args.theorem}: {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_CLASS


def cmd_reconfigure(args) -> int:
    g, lists, alpha, beta = load_instance(args)
    k = THEOREMS[args.theorem][1]
    try:
        seq, trace = reconfigure(args.theorem, g, lists, alpha, beta)
    except ClassViolation as exc:
        raise CliError(EXIT_CLASS, str(exc)) from None
    except NoConfigurationFound as exc:
        if args.artifact:
            d = Path(args.artifact)
            d.mkdir(parents=True, exist_ok=True)
            rem = exc.graph
            ids = {v: i for i, v in enumerate(sorted(rem.vertices))}
            rot = None if rem.rotation is None else {ids[v]: [ids[u] for u in rem.rotation[v]] for v in rem.vertices}
            relabelled = Graph.from_edges(ids.values(), [(ids[u], ids[v]) for u, v in rem.edges()], rot)
            (d / "remainder.txt").write_text("# vertex ids renumbered from " + " ".join(map(str, sorted(rem.vertices))) + "\n" + fio.serialize_graph(relabelled))
            if exc.audit is not None:
                (d / "audit.txt").write_text(exc.audit.report())
        raise CliError(EXIT_NO_CONFIG, str(exc)) from None
    except (RecipeCapExceeded, ExtensionError) as exc:
        raise CliError(EXIT_CAP, str(exc)) from None
    rep = verify(g, lists, seq, beta, k)
    _write(args.out, fio.serialize_sequence(seq))
    if args.counts:
        _write(args.counts, _counts_table(g, rep.counts))
    patterns = " ".join(f"{p}={c}" for p, c in sorted(trace.pattern_counts().items()))
    print(f"steps: {len(seq)}  max recolorings: {rep.max_count}  k: {k}", file=sys.stderr)
    print(f"configurations: {patterns}", file=sys.stderr)
    if not rep.ok:
        i, why = rep.violation
        raise CliError(EXIT_VERIFY, f"verification failed at step {i}: {why}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g, lists, alpha, beta = load_instance(args)
    p = args.seq
    k_file, steps = fio.parse_sequence(_read(p, "sequence"), p)
    k = args.k if args.k is not None else k_file
    seq = RecolorSequence(dict(alpha), steps, k)
    rep = verify(g, lists, seq, beta, k)
    if args.counts:
        _write(args.counts, _counts_table(g, rep.counts))
    if rep.ok:
        print(f"ok: {len(steps)} steps, max recolorings {rep.max_count}" + (f" <= {k}" if k is not None else ""))
        return EXIT_OK
    i, why = rep.violation
    print(f"FAIL at step {i}: {why}")
    return EXIT_VERIFY


def cmd_audit(args) -> int:
    g = load_graph(args)
    try:
        led = audit(g, args.rules)
    except ValueError as exc:
        raise CliError(EXIT_CLASS, str(exc)) from None
    text = led.report()
    if args.explain:
        theorem = "planar6" if args.rules == "planar" else "mad4"
        vr = attribute_violations(g, led, theorem)
        text += "attribution:\n" + "".join(f"  {line}\n" for line in vr.lines())
        text += f"unexplained violations: {len(vr.unexplained)}\n"
    _write(args.out, text)
    if args.csv:
        _write(args.csv, led.to_csv())
    return EXIT_OK


def cmd_oracle(args) -> int:
    g, lists, alpha, beta = load_instance(args)
    try:
        if args.mode == "dist":
            d = bfs_distance(g, lists, alpha, beta, args.max_states)
            print("distance: " + ("unreachable" if d is None else str(d)))
        else:
            if args.k is None:
                raise CliError(EXIT_PARSE, "--k is required for --mode kgood")
            ans = kgood_reachable(g, lists, alpha, beta, args.k, args.max_states)
            print(f"{args.k}-good: {ans.answer} (states {ans.states})")
            if ans.witness is not None and args.out:
                _write(args.out, fio.serialize_sequence(ans.witness))
    except StateCapExceeded as exc:
        print(f"unknown: {exc}")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        b = generate(args.family, args.n, args.seed, args.theorem)
    except GenerationError as exc:
        raise CliError(EXIT_CLASS, str(exc)) from None
    fio.write_bundle(args.out, b.graph, b.lists, b.alpha, b.beta, b.meta)
    print(f"{args.family} n={len(b.graph)} m={b.graph.num_edges()} -> {args.out}")
    return EXIT_OK


SUMMARY_FIELDS = ["family", "n", "seed", "theorem", "vertices", "edges", "in_class", "mad", "steps", "max_count", "verify", "wall_time"]


def run_instance(family: str, n: int, seed: int, theorem: str) -> dict:
    t0 = time.perf_counter()
    b = generate(family, n, seed, theorem)
    g = b.graph
    k = THEOREMS[theorem][1]
    row = {"family": family, "n": n, "seed": seed, "theorem": theorem, "vertices": len(g), "edges": g.num_edges()}
    row["in_class"] = "yes"
    row["mad"] = str(mad(g))
    try:
        seq, _ = reconfigure(theorem, g, b.lists, b.alpha, b.beta)
        rep = verify(g, b.lists, seq, b.beta, k)
        row.update(steps=len(seq), max_count=rep.max_count, verify="ok" if rep.ok else f"fail@{rep.violation[0]}")
    except NoConfigurationFound:
        row.update(steps="", max_count="", verify="no-config")
    except (RecipeCapExceeded, ExtensionError):
        row.update(steps="", max_count="", verify="cap")
    row["wall_time"] = f"{time.perf_counter() - t0:.3f}"
    return row


def cmd_corpus(args) -> int:
    families = args.families or [f for f in FAMILIES if (f in ("grid5", "vertexdisjoint4cycles")) == (args.theorem == "planar6") or f == "cycle"]
    rows = []
    for i in range(args.count):
        fam = families[i % len(families)]
        n = args.min_n + (i * 7) % (args.max_n - args.min_n + 1)
        rows.append(run_instance(fam, n, args.seed + i, args.theorem))
    fields = SUMMARY_FIELDS if args.timing else SUMMARY_FIELDS[:-1]
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        w = csv.DictWriter(out, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    failed = [r for r in rows if r["verify"] != "ok"]
    print(f"{len(rows) - len(failed)}/{len(rows)} instances verified", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser


def _instance_args(p: argparse.ArgumentParser, full: bool = True) -> None:
    p.add_argument("--bundle", help="directory holding graph.txt, lists.txt, alpha.txt, beta.txt")
    p.add_argument("--graph")
    if full:
        p.add_argument("--lists")
        p.add_argument("--alpha")
        p.add_argument("--beta")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="listrecolor", description="k-good list recoloring for sparse graphs")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-class", help="test membership in a graph class")
    _instance_args(p, full=False)
    p.add_argument("--theorem", choices=sorted(THEOREMS), required=True)
    p.set_defaults(func=cmd_check_class)

    p = sub.add_parser("reconfigure", help="build a recoloring sequence from alpha to beta")
    _instance_args(p)
    p.add_argument("--theorem", choices=sorted(THEOREMS), required=True)
    p.add_argument("--out", default="-", help="sequence file (default stdout)")
    p.add_argument("--counts", help="write per-vertex recoloring counts as CSV")
    p.add_argument("--artifact", help="directory for the remainder graph if no configuration is found")
    p.set_defaults(func=cmd_reconfigure)

    p = sub.add_parser("verify", help="replay a sequence and check it")
    _instance_args(p)
    p.add_argument("--seq", required=True)
    p.add_argument("--k", type=int, help="override the k from the sequence header")
    p.add_argument("--counts")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="run a discharging system and write the ledger")
    _instance_args(p, full=False)
    p.add_argument("--rules", choices=["planar", "sparse"], required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--csv", help="machine-readable ledger")
    p.add_argument("--explain", action="store_true", help="attribute violations to reducible configurations")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("oracle", help="brute-force distance or k-good reachability")
    _instance_args(p)
    p.add_argument("--mode", choices=["dist", "kgood"], required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--max-states", type=int, default=10**7)
    p.add_argument("--out", help="write the k-good witness sequence here")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate an instance bundle")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theorem", choices=sorted(THEOREMS))
    p.add_argument("--out", required=True, help="bundle directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("corpus", help="generate, reconfigure and verify many instances")
    p.add_argument("--theorem", choices=sorted(THEOREMS), required=True)
    p.add_argument("--families", nargs="*", choices=FAMILIES)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--min-n", type=int, default=5)
    p.add_argument("--max-n", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="add a wall_time column")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except fio.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
