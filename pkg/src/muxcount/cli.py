"""Single `mux` binary: sample / count / expect / variance / phi / delta /
region / slice / classify / core / extensions / simulate.

Every command reads motifs and graphs in the multiplex JSON file format
{"n": int, "layer1": [[u, v], ...], "layer2": [[u, v], ...]} (0-based,
u < v).  Outputs are machine-readable JSON (CSV where noted), written
atomically when --out is given.  Rational values are serialized as "p/q"
strings; each payload carries a "provenance" block marking fields as
exact, float, or monte_carlo (with reps and seed).

Seed precedence: --seed flag, then MUX_SEED, then the fixed default 0.
Worker precedence: --workers flag, then MUX_WORKERS, then 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import counting, region, sampler, stats, thresholds
from .errors import MuxError
from .multiplex import Multiplex, Submultiplex, validate
from .thresholds import ThetaPoint

DEFAULT_SEED = 0


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mux-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(out, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(payload: dict, out: str | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _load_motif(path: str) -> Multiplex:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise MuxError(f"cannot read multiplex file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MuxError(f"malformed JSON in {path}: {exc}") from exc
    return validate(raw)


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _add_theta_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--theta1", type=_frac, required=required)
    parser.add_argument("--theta2", type=_frac, required=required)
    parser.add_argument("--theta12", type=_frac, required=required)


def _add_prob_or_theta(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p1", type=float)
    parser.add_argument("--p2", type=float)
    parser.add_argument("--p12", type=float)
    _add_theta_args(parser, required=False)


def _theta_from_args(args) -> ThetaPoint:
    return ThetaPoint.of(args.theta1, args.theta2, args.theta12)


def _resolve_prob(args, n: int):
    have_p = [x is not None for x in (args.p1, args.p2, args.p12)]
    have_t = [x is not None for x in (args.theta1, args.theta2, args.theta12)]
    if any(have_p) and any(have_t):
        raise MuxError("give either a probability triple or an exponent triple, not both")
    if all(have_p):
        return sampler.as_prob_triple((args.p1, args.p2, args.p12)), None
    if all(have_t):
        theta = _theta_from_args(args)
        return sampler.from_theta(n, theta), theta
    raise MuxError("need --p1/--p2/--p12 or --theta1/--theta2/--theta12 (all three)")


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("MUX_SEED")
    return int(env) if env else DEFAULT_SEED


def _resolve_workers(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("MUX_WORKERS")
    return int(env) if env else 1


def _sub_payload(sub: Submultiplex) -> dict:
    return {"s1": [list(e) for e in sub.s1], "s2": [list(e) for e in sub.s2]}


def _core_payload(core_sub: Submultiplex) -> dict:
    payload = core_sub.canonical_multiplex().to_dict()
    payload["vertices"] = sorted(core_sub.vertices)
    return payload


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_sample(args) -> int:
    n = args.n
    prob, _ = _resolve_prob(args, n)
    seed = sampler.SeedSpec(_resolve_seed(args.seed), args.rep)
    graph = sampler.sample(n, prob, seed)
    payload = graph.to_dict()
    _emit_json(payload, args.out)
    return 0


def _cmd_count(args) -> int:
    motif = _load_motif(args.motif)
    graph = _load_motif(args.graph)
    result = counting.count_copies(motif, graph)
    payload = {
        "injections": result.injections,
        "aut_size": result.aut_size,
        "provenance": {"injections": "exact", "aut_size": "exact"},
    }
    if args.copies:
        payload["copies"] = result.copies
        payload["provenance"]["copies"] = "exact"
    _emit_json(payload, args.out)
    return 0


def _cmd_expect(args) -> int:
    motif = _load_motif(args.motif)
    prob, _ = _resolve_prob(args, args.n)
    mean_inj = stats.exact_mean_injections(motif, args.n, prob)
    mean_cop = stats.exact_mean_copies(motif, args.n, prob)
    _emit_json(
        {
            "mean_injections": mean_inj,
            "mean_copies": mean_cop,
            "n": args.n,
            "p": prob.as_tuple(),
            "provenance": {"mean_injections": "float", "mean_copies": "float"},
        },
        args.out,
    )
    return 0


def _cmd_variance(args) -> int:
    motif = _load_motif(args.motif)
    prob, _ = _resolve_prob(args, args.n)
    var = stats.exact_variance_injections(motif, args.n, prob)
    _emit_json(
        {
            "variance_injections": var,
            "n": args.n,
            "p": prob.as_tuple(),
            "provenance": {"variance_injections": "float"},
        },
        args.out,
    )
    return 0


def _cmd_phi(args) -> int:
    motif = _load_motif(args.motif)
    prob, _ = _resolve_prob(args, args.n)
    value, argmin = thresholds.phi(motif, args.n, prob)
    _emit_json(
        {
            "phi": value,
            "argmin_signature": list(argmin),
            "provenance": {"phi": "float", "argmin_signature": "exact"},
        },
        args.out,
    )
    return 0


def _cmd_delta(args) -> int:
    motif = _load_motif(args.motif)
    theta = _theta_from_args(args).require_feasible()
    value, argmins = thresholds.delta(motif, theta)
    label = thresholds.classify_balance(motif, theta)
    payload = {
        "delta": _frac_str(value),
        "extremal": [_sub_payload(s) for s in argmins] if value == 0 else [],
        "label": label.value,
        "core": _core_payload(thresholds.core(motif, theta)) if value == 0 else None,
        "provenance": {"delta": "exact", "extremal": "exact", "core": "exact"},
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_region(args) -> int:
    motif = _load_motif(args.motif)
    desc = region.polyhedron(motif)
    payload = {
        "constraints": [
            {
                "coeffs": [_frac_str(c) for c in con.coeffs],
                "rhs": _frac_str(con.rhs),
                "relation": con.relation.value,
                "kind": con.kind,
                "signature": list(con.signature) if con.signature else None,
                "tag": con.tag,
                "text": con.describe(),
            }
            for con in desc.constraints
        ],
        "vertices": [[_frac_str(x) for x in v] for v in desc.vertices],
        "rays": [[_frac_str(x) for x in r] for r in desc.rays],
        "facets": [
            {
                "constraint": f.constraint_index,
                "vertices": list(f.vertex_indices),
                "rays": list(f.ray_indices),
                "open": f.open,
            }
            for f in desc.facets
        ],
        "bounded": desc.bounded,
        "provenance": {"vertices": "exact", "rays": "exact"},
    }
    _emit_json(payload, args.out)
    return 0


def _cmd_slice(args) -> int:
    motif = _load_motif(args.motif)
    poly = region.slice2d(motif)
    if args.format == "json":
        payload = {
            "vertices": [[_frac_str(v[0]), _frac_str(v[1])] for v in poly.vertices],
            "included": list(poly.included),
            "segments": [
                {
                    "start": [_frac_str(s.start[0]), _frac_str(s.start[1])],
                    "end": [_frac_str(s.end[0]), _frac_str(s.end[1])] if s.end else None,
                    "ray": [_frac_str(s.ray[0]), _frac_str(s.ray[1])] if s.ray else None,
                    "signature": list(s.signature),
                }
                for s in poly.segments
            ],
            "provenance": {"vertices": "exact", "segments": "exact"},
        }
        _emit_json(payload, args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["theta", "theta12", "included"])
        for v, inc in zip(poly.vertices, poly.included):
            writer.writerow([_frac_str(v[0]), _frac_str(v[1]), int(inc)])
        _emit(buf.getvalue(), args.out)
    return 0


def _cmd_classify(args) -> int:
    motif = _load_motif(args.motif)
    theta = _theta_from_args(args)
    label = thresholds.classify_balance(motif, theta)
    _emit(label.value + "\n", args.out)
    return 0


def _cmd_core(args) -> int:
    motif = _load_motif(args.motif)
    theta = _theta_from_args(args)
    core_sub = thresholds.core(motif, theta)
    _emit_json(
        {"core": _core_payload(core_sub), "provenance": {"core": "exact"}},
        args.out,
    )
    return 0


def _cmd_extensions(args) -> int:
    motif = _load_motif(args.motif)
    graph = _load_motif(args.graph)
    theta = _theta_from_args(args)
    core_sub = thresholds.core(motif, theta)
    placement = [int(x) for x in args.at.split(",")]
    order = sorted(core_sub.vertices)
    if len(placement) != len(order):
        raise MuxError(
            f"--at lists {len(placement)} vertices, the core has {len(order)}"
        )
    relabel = dict(zip(order, placement))
    remap = lambda edges: [tuple(sorted((relabel[u], relabel[w]))) for u, w in edges]
    core_copy = Multiplex.from_edges(graph.n, remap(core_sub.s1), remap(core_sub.s2))
    count = counting.count_extensions(core_copy, motif, core_sub, graph)
    _emit_json(
        {
            "extensions": count,
            "core": _core_payload(core_sub),
            "placement": placement,
            "provenance": {"extensions": "exact"},
        },
        args.out,
    )
    return 0


def _cmd_simulate(args) -> int:
    motif = _load_motif(args.motif)
    theta = _theta_from_args(args)
    seed = _resolve_seed(args.seed)
    workers = _resolve_workers(args.workers)
    report = stats.limit_experiment(
        motif, theta, args.n, args.reps, seed, workers=workers
    )
    payload = report.to_dict()
    payload["provenance"] = {
        "samples": {"kind": "monte_carlo", "reps": args.reps, "seed": seed},
        "exact_mean_inj": "float",
        "exact_var_inj": "float",
        "distances": "monte_carlo",
    }
    _emit_json(payload, args.out)
    if args.samples_csv:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["rep", "injections", "copies"])
        for rep, (inj, cop) in enumerate(
            zip(report.samples_injections, report.samples_copies)
        ):
            writer.writerow([rep, inj, cop])
        _atomic_write(args.samples_csv, buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mux",
        description="Correlated two-layer multiplex thresholds, regions, counts, and limit experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw one correlated multiplex sample")
    p.add_argument("--n", type=int, required=True)
    _add_prob_or_theta(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rep", type=int, default=0, help="replication index within the seed stream")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("count", help="count injective homomorphisms motif -> graph")
    p.add_argument("--motif", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--copies", action="store_true", help="also report copies = injections/|Aut|")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("expect", help="exact expected count")
    p.add_argument("--motif", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_prob_or_theta(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_expect)

    p = sub.add_parser("variance", help="exact variance of the injection count")
    p.add_argument("--motif", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_prob_or_theta(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_variance)

    p = sub.add_parser("phi", help="rarest-submotif objective and its argmin signature")
    p.add_argument("--motif", required=True)
    p.add_argument("--n", type=int, required=True)
    _add_prob_or_theta(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_phi)

    p = sub.add_parser("delta", help="exact exponent minimum, extremal set, label, core")
    p.add_argument("--motif", required=True)
    _add_theta_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_delta)

    p = sub.add_parser("region", help="exact polyhedron of the satisfiability region")
    p.add_argument("--motif", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("slice", help="threshold polyline of the theta1=theta2 slice")
    p.add_argument("--motif", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_slice)

    p = sub.add_parser("classify", help="regime label at an exponent triple")
    p.add_argument("--motif", required=True)
    _add_theta_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("core", help="largest extremal submultiplex at a boundary point")
    p.add_argument("--motif", required=True)
    _add_theta_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_core)

    p = sub.add_parser("extensions", help="motif copies through a placed core copy")
    p.add_argument("--motif", required=True)
    p.add_argument("--graph", required=True)
    _add_theta_args(p)
    p.add_argument("--at", required=True, help="comma-separated graph vertices receiving the core")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_extensions)

    p = sub.add_parser("simulate", help="seeded limit experiment with regime dispatch")
    p.add_argument("--motif", required=True)
    _add_theta_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--samples-csv", default=None, help="CSV with header rep,injections,copies")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MuxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
