"""Command-line front end.

Exit codes: 0 success, 2 invalid input or usage, 3 a requested
internal-consistency check failed. Randomized subcommands (sample, graphon
ascend, verify with a chain, scan with ascent) require an explicit --seed.
Range-valued parameters accept "lo:hi:count"; values starting with a minus
need the --flag=value spelling.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from ._kernels import BACKEND
from .errors import ConsistencyError, DomainError, ErgmphaseError
from .exact import exact_moments, finite_gap, psi_extrapolate
from .graphon import (
    I_graphon,
    T_graphon,
    ascend_objective,
    cut_norm_dist,
    delta_cut,
    read_graphon,
    t_graphon,
    write_graphon,
)
from .graphs import parse_motif
from .sampler import ChainConfig, make_annealing_ladder, run_chain
from .scan import ScanOptions, find_transition, scan_grid, verify_point
from .variational import compare_ansatz, solve_u_star

SCAN_CSV_HEADER = (
    "beta1,beta2,u_star,er_value,mp_value,p_star,winner,"
    "order_parameter_C,ascent_objective,finite_n_gap"
)
VARIATIONAL_CSV_HEADER = "beta1,beta2,u_star,unique,er_value,mp_value,p_star,winner,order_parameter_C"
TRANSITION_CSV_HEADER = "beta1,beta2_critical,bracket_width,method"
TRACE_CSV_HEADER = "sweep,t1,t2"


def _plain(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _emit_json(payload, out: str | None) -> None:
    _emit(json.dumps(_plain(payload), indent=2), out)


def _float_spec(text: str) -> list[float]:
    """A single float, or lo:hi:count for an inclusive linspace."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"bad range {text!r}: want lo:hi:count")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise DomainError(f"bad range {text!r}: want lo:hi:count") from None
        if count < 1:
            raise DomainError(f"range {text!r} needs count >= 1")
        return [float(x) for x in np.linspace(lo, hi, count)]
    try:
        return [float(text)]
    except ValueError:
        raise DomainError(f"bad number {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise DomainError(f"bad node-count list {text!r}") from None


def _csv(text_value) -> str:
    return "" if text_value is None else repr(float(text_value)) if isinstance(text_value, float) else str(text_value)


def _auto_annealing(beta2: float, burn_in: int, anneal_sweeps: int | None):
    """Ladder by request, or automatically once beta2 drops below -2;
    anneal_sweeps=0 disables."""
    if anneal_sweeps is None:
        if beta2 < -2.0:
            return make_annealing_ladder(beta2, burn_in)
        return None
    if anneal_sweeps == 0:
        return None
    return make_annealing_ladder(beta2, anneal_sweeps)


def _cmd_exact(args) -> int:
    motif = parse_motif(args.motif)
    p = (args.beta1, args.beta2)
    rows = []
    for n in _int_list(args.n):
        mom = exact_moments(n, motif, p, expensive=args.expensive, workers=args.workers)
        rows.append({
            "n": n,
            "psi": mom.psi,
            "mean_t1": mom.mean_t1,
            "mean_t2": mom.mean_t2,
            "var_t1": mom.var_t1,
            "var_t2": mom.var_t2,
            "finite_gap": finite_gap(n, motif, p, expensive=args.expensive, workers=args.workers),
        })
    payload = {
        "motif": motif.to_string(),
        "beta1": args.beta1,
        "beta2": args.beta2,
        "rows": rows,
    }
    if len(rows) >= 3:
        est = psi_extrapolate([(row["n"], row["psi"]) for row in rows])
        payload["extrapolation"] = {
            "estimate": est.estimate,
            "error_bound": est.error_bound,
        }
    _emit_json(payload, args.out)
    return 0


def _cmd_sample(args) -> int:
    motif = parse_motif(args.motif)
    cfg = ChainConfig(
        n=args.n,
        motif=motif,
        params=(args.beta1, args.beta2),
        samples=args.sweeps,
        burn_in=args.burn_in,
        thinning=args.thinning,
        seed=args.seed,
        annealing=_auto_annealing(args.beta2, args.burn_in, args.anneal_sweeps),
    )
    stats = run_chain(cfg, keep_trace=args.trace is not None)
    if args.trace is not None:
        lines = ["# ergmphase trace v1", TRACE_CSV_HEADER]
        for sweep, t1, t2 in stats.trace:
            lines.append(f"{int(sweep)},{float(t1)!r},{float(t2)!r}")
        _emit("\n".join(lines), args.trace)
    payload = {
        "motif": motif.to_string(),
        "n": args.n,
        "beta1": cfg.params.beta1,
        "beta2": cfg.params.beta2,
        "seed": args.seed,
        "sweeps": args.sweeps,
        "burn_in": args.burn_in,
        "thinning": args.thinning,
        "annealing": cfg.annealing,
        "backend": BACKEND,
        "mean_t1": stats.mean_t1,
        "mean_t2": stats.mean_t2,
        "se_t1": stats.se_t1,
        "se_t2": stats.se_t2,
        "acceptance_rate": stats.acceptance_rate,
        "n_records": stats.n_records,
        "final_edges": list(stats.final_graph.edges()),
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_variational(args) -> int:
    motif = parse_motif(args.motif)
    rows = []
    for b1 in _float_spec(args.beta1):
        for b2 in _float_spec(args.beta2):
            comp = compare_ansatz((b1, b2), motif)
            sol = solve_u_star((b1, b2), motif.k)
            rows.append({
                "beta1": b1,
                "beta2": b2,
                "u_star": sol.u_star,
                "unique": sol.unique,
                "er_value": comp.er_value,
                "mp_value": comp.mp_value,
                "p_star": comp.p_star,
                "winner": comp.winner,
                "order_parameter_C": comp.order_parameter_C,
            })
    if args.format == "csv":
        lines = ["# ergmphase variational v1", VARIATIONAL_CSV_HEADER]
        for r in rows:
            lines.append(",".join(_csv(r[c]) for c in VARIATIONAL_CSV_HEADER.split(",")))
        _emit("\n".join(lines), args.out)
    else:
        _emit_json({"motif": motif.to_string(), "rows": rows}, args.out)
    return 0


def _cmd_graphon(args) -> int:
    if args.graphon_cmd == "eval":
        motif = parse_motif(args.motif)
        h = read_graphon(args.file)
        p = (args.beta1, args.beta2)
        energy = T_graphon(h, motif, p)
        entropy = I_graphon(h)
        payload = {
            "file": args.file,
            "m": h.m,
            "t_edge": float(np.mean(h.values)),
            "t_motif": t_graphon(motif, h),
            "entropy": entropy,
            "energy": energy,
            "objective": energy - entropy,
        }
        _emit_json(payload, args.out)
        return 0
    if args.graphon_cmd == "dist":
        f = read_graphon(args.a)
        g = read_graphon(args.b)
        payload = {
            "a": args.a,
            "b": args.b,
            "cut_norm_dist": cut_norm_dist(f, g),
            "delta_cut": delta_cut(f, g),
        }
        _emit_json(payload, args.out)
        return 0
    h, objective = ascend_objective(
        parse_motif(args.motif),
        (args.beta1, args.beta2),
        args.blocks,
        restarts=args.restarts,
        seed=args.seed,
    )
    if args.write is not None:
        write_graphon(h, args.write)
    payload = {
        "m": h.m,
        "objective": objective,
        "values": h.values,
        "backend": BACKEND,
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_scan(args) -> int:
    motif = parse_motif(args.motif)
    b1s = _float_spec(args.beta1)
    b2s = _float_spec(args.beta2)
    if args.ascent_blocks is not None and args.seed is None:
        raise DomainError("--ascent-blocks needs an explicit --seed")
    opts = ScanOptions(
        n_exact=args.n_exact,
        ascent_blocks=args.ascent_blocks,
        ascent_restarts=args.restarts,
        seed=args.seed,
        workers=args.workers,
    )
    records = scan_grid(
        motif,
        (b1s[0], b1s[-1]),
        (b2s[0], b2s[-1]),
        (len(b1s), len(b2s)),
        opts,
    )
    if args.format == "csv":
        lines = ["# ergmphase scan v1", SCAN_CSV_HEADER]
        for rec in records:
            d = dataclasses.asdict(rec)
            lines.append(",".join(_csv(d[c]) for c in SCAN_CSV_HEADER.split(",")))
        _emit("\n".join(lines), args.out)
    else:
        _emit_json(
            {"motif": motif.to_string(), "records": [dataclasses.asdict(r) for r in records]},
            args.out,
        )
    return 0


def _cmd_transition(args) -> int:
    motif = parse_motif(args.motif)
    rows = [find_transition(motif, b1, tolerance=args.tol) for b1 in _float_spec(args.beta1)]
    if args.format == "csv":
        lines = ["# ergmphase transition v1", TRANSITION_CSV_HEADER]
        for est in rows:
            d = dataclasses.asdict(est)
            lines.append(",".join(_csv(d[c]) for c in TRANSITION_CSV_HEADER.split(",")))
        _emit("\n".join(lines), args.out)
    else:
        _emit_json(
            {"motif": motif.to_string(), "estimates": [dataclasses.asdict(r) for r in rows]},
            args.out,
        )
    return 0


def _cmd_verify(args) -> int:
    motif = parse_motif(args.motif)
    chain = None
    if args.n_mcmc is not None:
        if args.seed is None:
            raise DomainError("--n-mcmc needs an explicit --seed")
        chain = ChainConfig(
            n=args.n_mcmc,
            motif=motif,
            params=(args.beta1, args.beta2),
            samples=args.sweeps,
            burn_in=args.burn_in,
            thinning=args.thinning,
            seed=args.seed,
            annealing=_auto_annealing(args.beta2, args.burn_in, args.anneal_sweeps),
        )
    report = verify_point(
        motif,
        (args.beta1, args.beta2),
        n_exact=args.n_exact,
        chain=chain,
    )
    _emit_json(report, args.out)
    return 0 if report["all_passed"] else 3


def _add_point(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--motif", required=True,
                        help="edge list like 0-1,1-2,2-0, or an alias (edge, triangle, k4, c5)")
    parser.add_argument("--beta1", type=float, required=True)
    parser.add_argument("--beta2", type=float, required=True)


def _add_chain(parser: argparse.ArgumentParser, seed_required: bool) -> None:
    parser.add_argument("--sweeps", type=int, default=400, help="post-burn-in sweeps")
    parser.add_argument("--burn-in", type=int, default=200)
    parser.add_argument("--thinning", type=int, default=1)
    parser.add_argument("--seed", type=int, required=seed_required)
    parser.add_argument("--anneal-sweeps", type=int, default=None,
                        help="sweeps per annealing stage; 0 disables, default anneals when beta2 < -2")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergmphase",
        description="Two-parameter exponential random graph model: exact "
                    "enumeration, Glauber sampling, variational phase "
                    "diagram, and step-graphon diagnostics.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact psi and density moments by enumeration")
    _add_point(p)
    p.add_argument("--n", required=True,
                   help="node count, or comma list like 4,5,6,7 (3+ values add an extrapolation)")
    p.add_argument("--expensive", action="store_true", help="allow n=8 for the triangle motif")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("sample", help="Glauber chain estimates of the two densities")
    _add_point(p)
    p.add_argument("--n", type=int, required=True)
    _add_chain(p, seed_required=True)
    p.add_argument("--trace", help="write a per-record CSV of (sweep, t1, t2)")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("variational", help="disordered vs multipartite free energies")
    p.add_argument("--motif", required=True)
    p.add_argument("--beta1", required=True, help="float or lo:hi:count")
    p.add_argument("--beta2", required=True, help="float or lo:hi:count")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_variational)

    p = sub.add_parser("graphon", help="step-graphon evaluation, distances, and ascent")
    gsub = p.add_subparsers(dest="graphon_cmd", required=True)
    g = gsub.add_parser("eval", help="densities, entropy, and energy of a graphon file")
    _add_point(g)
    g.add_argument("--file", required=True)
    g.add_argument("--out")
    g.set_defaults(func=_cmd_graphon)
    g = gsub.add_parser("dist", help="cut norm and cut distance between two graphon files")
    g.add_argument("--a", required=True)
    g.add_argument("--b", required=True)
    g.add_argument("--out")
    g.set_defaults(func=_cmd_graphon)
    g = gsub.add_parser("ascend", help="projected gradient ascent over m-block graphons")
    _add_point(g)
    g.add_argument("--blocks", type=int, required=True)
    g.add_argument("--restarts", type=int, default=4)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--write", help="write the best graphon to this file")
    g.add_argument("--out")
    g.set_defaults(func=_cmd_graphon)

    p = sub.add_parser("scan", help="variational phase diagram over a parameter grid")
    p.add_argument("--motif", required=True)
    p.add_argument("--beta1", required=True, help="float or lo:hi:count")
    p.add_argument("--beta2", required=True, help="float or lo:hi:count")
    p.add_argument("--n-exact", type=int, default=None, help="add the finite-n gap column")
    p.add_argument("--ascent-blocks", type=int, default=None, help="add the block-ascent column")
    p.add_argument("--restarts", type=int, default=2, help="random ascent restarts per point")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("transition", help="critical beta2 where the branches cross")
    p.add_argument("--motif", required=True)
    p.add_argument("--beta1", required=True, help="float or lo:hi:count")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_transition)

    p = sub.add_parser("verify", help="cross-check one point; exits 3 on any failed check")
    _add_point(p)
    p.add_argument("--n-exact", type=int, default=None,
                   help="compare exact psi derivatives against the winning branch")
    p.add_argument("--n-mcmc", type=int, default=None,
                   help="run a chain of this size and check moments and structure")
    _add_chain(p, seed_required=False)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ErgmphaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
