"""Command-line front end.

Each subcommand only parses arguments, calls the library and formats the
result.  The resolved configuration is echoed to stderr before any output.
Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import experiments as ex
from .errors import NashphaseError
from .games import read_game, sample_game, write_game
from .graphs import (GnpParams, gen_complete, gen_empty, gen_gnp, gen_grid, gen_path,
                     expansion_violation, read_graph, write_graph)
from .pne import count_pne, exists_pne
from .stein import (eval_R, eval_S, medium_regime_bound, predict_low_connectivity,
                    stein_bounds_exact)
from .witnesses import exposure_search, find_witness, nonexistence_probability_bound, verify_certificate

GRAPH_FAMILIES = ("gnp", "complete", "empty", "path", "grid")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("NASHPHASE_THREADS", "1")))
    except ValueError:
        return 1


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_common(p: argparse.ArgumentParser, formats=("text", "json")) -> None:
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="write results to this file instead of stdout")


def _add_graph_source(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--graph", help="graph file (edge-list format)")
    p.add_argument("--family", choices=GRAPH_FAMILIES)
    p.add_argument("-n", type=int, help="vertex count")
    p.add_argument("-p", type=float, help="edge probability for gnp")
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--graph-seed", type=int, help="seed for gnp graphs (default: --seed)")


def _graph_from_args(args, parser):
    if args.graph:
        return read_graph(Path(args.graph).read_text())
    fam = args.family
    if fam is None:
        parser.error("give --graph FILE or --family")
    if fam == "grid":
        if not args.rows or not args.cols:
            parser.error("--family grid needs --rows and --cols")
        return gen_grid(args.rows, args.cols)
    if args.n is None:
        parser.error(f"--family {fam} needs -n")
    if fam == "gnp":
        if args.p is None:
            parser.error("--family gnp needs -p")
        seed = args.graph_seed if args.graph_seed is not None else args.seed
        return gen_gnp(GnpParams(args.n, args.p, seed))
    return {"complete": gen_complete, "empty": gen_empty, "path": gen_path}[fam](args.n)


def _game_from_args(args, parser):
    if getattr(args, "game", None):
        return read_game(Path(args.game).read_text())
    return sample_game(_graph_from_args(args, parser), args.seed)


def _echo_config(args) -> None:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print("# config: " + json.dumps(cfg, sort_keys=True, default=str), file=sys.stderr)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_obj(args, obj: dict, text: str) -> None:
    if args.format == "json":
        _emit(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        _emit(args, text)


# -- subcommands -----------------------------------------------------------------

def cmd_count(args, parser):
    game = _game_from_args(args, parser)
    res = count_pne(game)
    text = f"Z = {res.count}\n"
    if args.list and res.profiles is not None:
        text += "".join(f"{_profile_str(p, game.n)}\n" for p in res.profiles)
    _emit_obj(args, {"Z": res.count, "profiles": res.profiles, "work": res.work}, text)


def _profile_str(profile: int, n: int) -> str:
    """Strategies of players 1..n, left to right."""
    return "".join(str((profile >> k) & 1) for k in range(n))


def cmd_exists(args, parser):
    game = _game_from_args(args, parser)
    ok = exists_pne(game)
    text = "PNE exists (Z ≥ 1)\n" if ok else "no PNE (Z = 0)\n"
    _emit_obj(args, {"exists": ok}, text)


def _witness_out(args, game, rep):
    if rep is None:
        _emit_obj(args, {"witness": None}, "no witness found\n")
        return
    obj = {
        "witness": {
            "kind": rep.kind.value,
            "edge": list(rep.edge),
            "matcher": rep.orientation.matcher,
            "mismatcher": rep.orientation.mismatcher,
            "checked_rows": list(rep.checked_rows),
        }
    }
    _emit_obj(args, obj, rep.to_certificate(game))


def cmd_witness(args, parser):
    game = _game_from_args(args, parser)
    if args.verify:
        ok = verify_certificate(Path(args.verify).read_text(), game)
        _emit_obj(args, {"valid": ok}, "certificate valid\n" if ok else "certificate INVALID\n")
        if not ok:
            return 1
        return 0
    _witness_out(args, game, find_witness(game, args.degree_cap))


def cmd_expose(args, parser):
    game = _game_from_args(args, parser)
    _witness_out(args, game, exposure_search(game))


def cmd_stein(args, parser):
    g = _graph_from_args(args, parser)
    sb = stein_bounds_exact(g)
    obj = {"b1": sb.b1, "b2": sb.b2, "tv_bound": sb.tv_bound, "b0_size": sb.b0_size}
    text = (f"b1 = {sb.b1:.10g}\nb2 = {sb.b2:.10g}\n"
            f"2(b1+b2) = {sb.tv_bound:.10g}\n|B_0| = {sb.b0_size}\n")
    _emit_obj(args, obj, text)


def cmd_bounds(args, parser):
    obj: dict = {}
    lines = []
    if args.n is not None and args.p is not None:
        obj["S"] = eval_S(args.n, args.p)
        obj["R"] = eval_R(args.n, args.p)
        lines += [f"S(n,p) = {obj['S']:.10g}", f"R(n,p) = {obj['R']:.10g}"]
        if 0 < args.p < 1:
            obj["medium_bound"] = medium_regime_bound(args.n, args.p)
            lines.append(f"medium-regime bound = {obj['medium_bound']:.10g}")
    if args.c is not None:
        if args.n is None:
            parser.error("--c needs -n")
        obj["low_prediction"] = predict_low_connectivity(args.n, args.c)
        lines.append(f"low-connectivity prediction = {obj['low_prediction']:.10g}")
    if args.graph or args.family:
        g = _graph_from_args(args, parser)
        nb = nonexistence_probability_bound(g, args.degree_cap)
        obj["nonexistence"] = {
            "degree_cap": args.degree_cap,
            "disjoint_edges": nb.disjoint_edges,
            "bounded_edges": nb.bounded_edges,
            "matching_weight": nb.matching_weight,
            "disjoint_form": nb.disjoint_form,
            "count_form": nb.count_form,
            "weighted_form": nb.weighted_form,
        }
        lines += [
            f"d-bounded edges (d={args.degree_cap}) = {nb.bounded_edges}",
            f"vertex-disjoint d-bounded edges = {nb.disjoint_edges}",
            f"P(no PNE) >= {nb.disjoint_form:.10g} (disjoint edges)",
            f"P(no PNE) >= {nb.count_form:.10g} (edge count / 2d)",
            f"P(no PNE) >= {nb.weighted_form:.10g} (weighted matching, w = {nb.matching_weight:.10g})",
        ]
    if not obj:
        parser.error("bounds needs -n/-p, --c, or a graph source")
    _emit_obj(args, obj, "\n".join(lines) + "\n")


def cmd_expander(args, parser):
    g = _graph_from_args(args, parser)
    bad = expansion_violation(g, args.alpha, args.delta)
    obj = {"strong_expander": bad is None, "violating_subset": sorted(bad) if bad else None}
    text = f"strong ({args.alpha}, {args.delta})-expander: {'yes' if bad is None else 'no'}\n"
    if bad is not None:
        text += "violating subset: " + " ".join(map(str, sorted(bad))) + "\n"
    _emit_obj(args, obj, text)


def cmd_gen(args, parser):
    if args.what == "game":
        _emit(args, write_game(sample_game(_graph_from_args(args, parser), args.seed)))
    else:
        _emit(args, write_graph(_graph_from_args(args, parser)))


def cmd_sweep(args, parser):
    if args.preset:
        if args.family != "gnp":
            parser.error("--preset applies to --family gnp")
        if args.n is None:
            parser.error("--preset needs -n")
        if args.preset == "high":
            grid = ex.high_preset(args.n, args.eps)
        elif args.preset == "medium":
            grid = ex.medium_preset(args.n, args.beta)
        else:
            grid = ex.low_preset(args.n, args.c or [2, 8, 16])
    elif args.p_grid:
        grid = args.p_grid
    else:
        grid = [0.0]
        if args.family == "gnp":
            parser.error("sweep over gnp needs -p/--p-grid or --preset")
    family = args.family or "gnp"
    graph_text = Path(args.graph).read_text() if args.graph else None
    if graph_text is not None:
        family = "file"
    cfg = ex.SweepConfig(
        family=family,
        n=args.n or 0,
        p_grid=grid,
        trials=args.trials,
        master_seed=args.seed,
        count_mode=args.mode,
        component_cap=args.component_cap,
        rows=args.rows or 0,
        cols=args.cols or 0,
        graph_text=graph_text,
        confidence=args.confidence,
        preset=args.preset,
    )
    res = ex.run_sweep(cfg, threads=args.threads)
    if args.format == "json":
        _emit(args, res.to_json() + "\n")
    else:
        _emit(args, res.to_csv(timing=args.timing))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nashphase", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def game_cmd(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--game", help="game file; otherwise sample from a graph source")
        _add_graph_source(p)
        _add_common(p)
        p.set_defaults(func=func)
        return p

    p = game_cmd("count", cmd_count, "exact PNE count")
    p.add_argument("--list", action="store_true", help="also list the PNE profiles")
    game_cmd("exists", cmd_exists, "decide PNE existence")
    p = game_cmd("witness", cmd_witness, "search d-bounded edges for a non-existence certificate")
    p.add_argument("--degree-cap", type=int, default=2)
    p.add_argument("--verify", help="check a certificate file against the game instead")
    game_cmd("expose", cmd_expose, "run the vertex-exposure search")

    p = sub.add_parser("stein", help="exact b1, b2 and the TV bound for a graph")
    _add_graph_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_stein)

    p = sub.add_parser("bounds", help="analytic envelopes, predictions and witness bounds")
    _add_graph_source(p)
    _add_common(p)
    p.add_argument("--c", type=float, help="low-connectivity constant (p = c/n^2)")
    p.add_argument("--degree-cap", type=int, default=2)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("expander", help="exhaustive strong-expander test (n <= 24)")
    _add_graph_source(p)
    _add_common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=cmd_expander)

    p = sub.add_parser("gen", help="write a graph or game file")
    _add_graph_source(p)
    _add_common(p, formats=("text",))
    p.add_argument("--what", choices=("graph", "game"), default="graph")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="Monte Carlo sweep over a p grid")
    p.add_argument("--family", choices=GRAPH_FAMILIES, default="gnp")
    p.add_argument("--graph", help="fixed graph file (family 'file')")
    p.add_argument("-n", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("-p", "--p-grid", type=_float_list, dest="p_grid")
    p.add_argument("--preset", choices=("high", "medium", "low"))
    p.add_argument("--eps", type=float, default=1.0, help="high preset: p = (2+eps) log n / n")
    p.add_argument("--beta", type=float, default=0.5, help="medium preset: p = beta / n")
    p.add_argument("--c", type=_float_list, help="low preset constants, comma separated")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--mode", choices=ex.MODES, default="exists")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--component-cap", type=int, default=30)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--timing", action="store_true", help="fill the seconds column")
    _add_common(p, formats=("csv", "json"))
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _echo_config(args)
    try:
        rc = args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (NashphaseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
