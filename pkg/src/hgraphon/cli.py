"""``hgraphon`` command line: analyze, classify, sample, check, experiment."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence

from . import _accel
from .exactlp import format_rational
from .graphon import (
    ParseError,
    concentration_vector,
    format_graph,
    load_graph,
    load_graphon,
    sample,
)
from .hamdec import directed_version, extract_decomposition, rho
from .montecarlo import ExperimentConfig, format_csv, run_experiment, summarize
from .polytope import PointKind, Verdict, analyze, classify_point, edge_polytope
from .skeleton import format_adjacency, skeleton_of

EXIT_INPUT_ERROR = 2

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]


def _vec(v) -> str:
    return " ".join(format_rational(x) for x in v)


def _nodes(ids) -> str:
    return "{" + ",".join(f"u{i + 1}" for i in ids) + "}"


def _point_line(pc) -> list[str]:
    lines = [f"point class: {pc.kind.value}"]
    if pc.witness is not None:
        lines.append(f"margin: {format_rational(pc.margin)}")
        lines.append(f"witness lambda: {_vec(pc.witness)}")
    return lines


def analysis_report(a) -> str:
    out = [f"q: {a.skeleton.q}", f"x*: {_vec(a.x_star)}", "skeleton:", format_adjacency(a.skeleton)]
    out.append("components: " + " ".join(_nodes(c) for c in a.components))
    for c, odd in zip(a.components, a.component_odd):
        out.append(f"  {_nodes(c)} odd cycle: {'yes' if odd else 'no'}")
    if a.coloring is not None:
        out.append("2-coloring: " + " ".join(f"u{i + 1}={c}" for i, c in enumerate(a.coloring)))
    else:
        out.append("2-coloring: none (odd cycle among plain edges)")
    out.append(f"loops: {_nodes(a.skeleton.loops)}")
    if a.rank is not None:
        out.append(f"polytope rank: {a.rank}")
    else:
        out.append("polytope rank: n/a (disconnected skeleton)")
    if a.affine_dim is not None:
        out.append(f"generator affine dimension: {a.affine_dim}")
    out.extend(_point_line(a.point))
    for w in a.warnings:
        out.append(f"warning: {w}")
    odd = "odd cycle present" if a.odd_cycle else "no odd cycle"
    member = {
        PointKind.OUTSIDE: "x* not in X(S)",
        PointKind.BOUNDARY: "x* in X(S) (boundary)",
        PointKind.INTERIOR: "x* in X(S) (interior)",
    }[a.point.kind]
    outcome = {
        Verdict.FAILS_NO_ODD_CYCLE: "H-property fails",
        Verdict.FAILS_MEMBERSHIP: "H-property fails",
        Verdict.BOUNDARY_INDETERMINATE: "undecided (boundary)",
        Verdict.SATISFIES_SUFFICIENCY: "H-property holds (sufficient conditions met)",
    }[a.verdict]
    out.append(f"summary: {odd}; {member}; verdict: {outcome}")
    out.append(f"verdict: {a.verdict.name} ({a.verdict.reason})")
    return "\n".join(out) + "\n"


def cmd_analyze(args) -> int:
    W = load_graphon(args.file)
    a = analyze(W)
    sys.stdout.write(analysis_report(a))
    return a.verdict.exit_code


def cmd_classify(args) -> int:
    W = load_graphon(args.file)
    pc = classify_point(edge_polytope(skeleton_of(W)), concentration_vector(W))
    sys.stdout.write("\n".join(_point_line(pc)) + "\n")
    return 0


def cmd_sample(args) -> int:
    W = load_graphon(args.file)
    G = sample(W, args.n, args.seed)
    text = format_graph(G)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def cmd_check(args) -> int:
    G = load_graph(args.file)
    H = extract_decomposition(directed_version(G))
    if H is None:
        print("no")
        return 1
    print("yes")
    if args.witness:
        print(f"cycles: {len(H.cycles)}")
        for cyc in H.cycles:
            print(" ".join(str(v + 1) for v in cyc))
        if G.has_blocks:
            print("rho:")
            print(rho(H, G.blocks, G.q))
    return 0


def _parse_sizes(text: str) -> list[int]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise argparse.ArgumentTypeError("--sizes needs at least one value")
    try:
        sizes = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from None
    if any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def render_svg(rows, width: int = 640, height: int = 400) -> str:
    """Line chart of P_H against n (log x axis) with Wilson whiskers."""
    left, right, top, bottom = 60, 150, 20, 50
    pw, ph = width - left - right, height - top - bottom
    sizes = sorted({r.n for r in rows})
    lo, hi = math.log10(min(sizes)), math.log10(max(sizes))
    span = hi - lo or 1.0

    def X(n):
        return left + (math.log10(n) - lo) / span * pw if hi > lo else left + pw / 2

    def Y(p):
        return top + (1 - p) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for p in (0, 0.25, 0.5, 0.75, 1):
        out.append(f'<text x="{left - 8}" y="{Y(p) + 4:.1f}" font-size="11" text-anchor="end">{p:g}</text>')
    for n in sizes:
        out.append(f'<text x="{X(n):.1f}" y="{top + ph + 16}" font-size="11" text-anchor="middle">{n}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 12}" font-size="12" text-anchor="middle">n (log scale)</text>')
    out.append(f'<text x="16" y="{top + ph / 2}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2})">P_H</text>')
    names = list(dict.fromkeys(r.graphon for r in rows))
    for k, name in enumerate(names):
        color = _PALETTE[k % len(_PALETTE)]
        series = sorted((r for r in rows if r.graphon == name), key=lambda r: r.n)
        pts = " ".join(f"{X(r.n):.1f},{Y(r.p_hat):.1f}" for r in series)
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for r in series:
            x = X(r.n)
            out.append(f'<line x1="{x:.1f}" y1="{Y(r.ci_low):.1f}" x2="{x:.1f}" y2="{Y(r.ci_high):.1f}" stroke="{color}"/>')
            out.append(f'<circle cx="{x:.1f}" cy="{Y(r.p_hat):.1f}" r="3" fill="{color}"/>')
        ly = top + 14 + 18 * k
        out.append(f'<line x1="{left + pw + 12}" y1="{ly - 4}" x2="{left + pw + 32}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 38}" y="{ly}" font-size="11">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_experiment(args) -> int:
    graphons = [(Path(f).stem, load_graphon(f)) for f in args.files]
    cfg = ExperimentConfig(tuple(args.sizes), args.trials, args.seed, args.workers)
    rows = []
    for name, W in graphons:
        rows.extend(run_experiment(W, cfg, name))
    Path(args.csv).write_text(format_csv(rows, timing=args.timing), encoding="utf-8")
    if args.svg:
        Path(args.svg).write_text(render_svg(rows), encoding="utf-8")
    print(summarize(rows))
    total = sum(r.wall_time or 0.0 for r in rows)
    print(f"backend: {_accel.backend()}; wall time {total:.2f}s", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hgraphon", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="skeleton, polytope tests and verdict for a step-graphon")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="position of x* relative to X(S)")
    c.add_argument("file")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("sample", help="draw G_n ~ W and write it in hgraph v1 format")
    s.add_argument("file")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_sample)

    k = sub.add_parser("check", help="does the directed graph admit a Hamiltonian decomposition?")
    k.add_argument("file")
    k.add_argument("--witness", action="store_true", help="print the cycles and rho(H)")
    k.set_defaults(func=cmd_check)

    e = sub.add_parser("experiment", help="estimate P_H(n) for one or more graphons")
    e.add_argument("files", nargs="+")
    e.add_argument("--sizes", type=_parse_sizes, default=[10, 50, 100, 200])
    e.add_argument("--trials", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--csv", required=True)
    e.add_argument("--svg")
    e.add_argument("--workers", type=int, default=1, help="0 = all cores; HGRAPHON_WORKERS overrides")
    e.add_argument("--timing", action="store_true", help="record wall times in the CSV")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sample" and args.n < 1:
        parser.error("-n must be positive")
    if args.command == "experiment" and args.trials < 1:
        parser.error("--trials must be positive")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"hgraphon: {getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (OSError, ValueError) as exc:
        print(f"hgraphon: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
