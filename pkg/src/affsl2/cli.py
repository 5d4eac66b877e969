"""Command-line front end.

Every subcommand wraps one library operation.  With ``--json`` the report is
a single line ``{"status": "ok", "result": ..., "trace": ...}`` with stable
field order; domain errors map to ``{"status": "error", "code": ...,
"message": ...}`` and exit code 1; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .errors import DomainError
from .modules import ModuleKind, make_context, support_census, weight_of
from .parsing import (
    format_element,
    format_uelement,
    parse_element,
    parse_generator,
    parse_uelement,
)
from .realization import CENTRAL, DEGREE, E, F, H, apply_generator
from .ring import Q, X, Y, add, monomial, scale, zero
from .structure import (
    ReductionTrace,
    canonical_generator,
    irreducibility_criterion,
    local_nilpotency_probe,
    primitive_vector,
    reduce_to_generator,
    reducibility_witness,
)
from .ualgebra import commutator_residual, theta


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _index_set(text: str):
    if not text:
        return frozenset()
    return frozenset(int(t) for t in text.split(","))


_KINDS = {k.value: k for k in ModuleKind}


def _add_context_args(p: argparse.ArgumentParser, default_module="verma"):
    p.add_argument("--module", choices=sorted(_KINDS), default=default_module)
    p.add_argument("--i", type=int, default=None, help="localized index")
    p.add_argument("--S", type=_index_set, default=frozenset(),
                   help="comma-separated positive y-indices, e.g. 1,3")
    p.add_argument("--z", type=_fraction, default=Q(0), help="twist, e.g. 1/3")
    p.add_argument("--J", type=_fraction, required=True)
    p.add_argument("--K", type=_fraction, required=True)
    p.add_argument("--D", type=_fraction, default=Q(0))


def _context(args):
    return make_context(_KINDS[args.module], i=args.i, s=args.S, z=args.z,
                        J=args.J, K=args.K, D=args.D)


def _trace_payload(trace: ReductionTrace):
    return [
        {"tag": s.tag, "u": format_uelement(s.u), "result": format_element(s.result)}
        for s in trace.steps
    ]


def _random_element(rng: random.Random, x_only: bool):
    out = zero()
    for _ in range(rng.randint(1, 3)):
        exps = {}
        for _ in range(rng.randint(0, 3)):
            if x_only or rng.random() < 0.6:
                v = X(rng.randint(-3, 3))
            else:
                v = Y(rng.randint(1, 3))
            exps[v] = exps.get(v, 0) + 1
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if coeff:
            out = add(out, monomial(exps, coeff))
    return out


def _run_act(args):
    ctx = _context(args)
    g = parse_generator(args.gen)
    v = parse_element(args.on)
    out = apply_generator(g, v, ctx)
    return format_element(out), None


def _run_weight(args):
    ctx = _context(args)
    v = parse_element(args.on)
    w = weight_of(v, ctx)
    if w is None:
        return "NOT_HOMOGENEOUS", None
    return {"h0": str(w.h0), "c": str(w.c), "d": str(w.d)}, None


def _run_census(args):
    ctx = _context(args)
    counts = support_census(ctx, args.depth)
    rows = [
        {"h0": str(w.h0), "c": str(w.c), "d": str(w.d), "count": n}
        for w, n in sorted(
            counts.items(), key=lambda kv: (kv[0].h0, kv[0].d), reverse=True
        )
    ]
    return {"depth": args.depth, "rows": rows}, None


def _run_theta(args):
    u = parse_uelement(args.u)
    return format_uelement(theta(args.z, u, args.i, max_depth=args.max_depth)), None


def _run_primitive(args):
    w = primitive_vector(args.i, args.S, _context_params(args))
    return {
        "vector": format_element(w.vector),
        "kind": w.kind,
        "certificate": w.certificate,
    }, None


def _context_params(args):
    from .modules import params

    return params(args.J, args.K, args.D)


def _run_reduce(args):
    ctx = _context(args)
    v = parse_element(args.on)
    trace = reduce_to_generator(v, ctx)
    result = {
        "final": format_element(trace.final),
        "scalar": str(trace.scalar),
        "generator": format_element(trace.generator),
    }
    return result, _trace_payload(trace)


def _run_witness(args):
    ctx = _context(args)
    w = reducibility_witness(ctx)
    return {
        "vector": format_element(w.vector),
        "kind": w.kind,
        "certificate": w.certificate,
    }, None


def _run_probe(args):
    ctx = _context(args)
    g = parse_generator(args.gen)
    v = parse_element(args.on)
    res = local_nilpotency_probe(g, v, ctx, args.max_iter)
    return {"outcome": res.outcome, "steps": res.steps}, None


def _run_criterion(args):
    ctx = _context(args)
    res = irreducibility_criterion(ctx)
    return {"verdict": res.verdict, "reason": res.reason}, None


def _run_bracket_check(args):
    ctx = make_context(_KINDS[args.module], J=args.J, K=args.K, D=args.D)
    x_only = ctx.uses_zero_charge_action
    rng = random.Random(args.seed)
    gens = [CENTRAL, DEGREE]
    for n in range(-args.range, args.range + 1):
        gens += [E(n), F(n), H(n)]
    violations = 0
    for _ in range(args.trials):
        a = rng.choice(gens)
        b = rng.choice(gens)
        v = _random_element(rng, x_only)
        if commutator_residual(a, b, v, ctx):
            violations += 1
    return {
        "violations": violations,
        "trials": args.trials,
        "range": args.range,
        "seed": args.seed,
    }, None


def _render_text(command: str, result, trace) -> str:
    if command == "bracket-check":
        v = result["violations"]
        return f"OK: {v} violations" if v == 0 else f"FAIL: {v} violations"
    if command == "census":
        lines = [
            f"h0={r['h0']} c={r['c']} d={r['d']} count={r['count']}"
            for r in result["rows"]
        ]
        return "\n".join(lines)
    if command == "reduce":
        lines = [f"{s['tag']}: {s['u']} -> {s['result']}" for s in trace or []]
        lines.append(f"final: {result['final']}")
        lines.append(f"scalar: {result['scalar']} * {result['generator']}")
        return "\n".join(lines)
    if isinstance(result, dict):
        return "\n".join(f"{k}: {v}" for k, v in result.items())
    return str(result)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="affsl2",
        description="Exact computations in free-field realizations of affine sl2.",
    )
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("act", help="apply a generator to an element")
    p.add_argument("--gen", required=True)
    p.add_argument("--on", required=True)
    _add_context_args(p)
    p.set_defaults(run=_run_act)

    p = sub.add_parser("weight", help="weight of a homogeneous element")
    p.add_argument("--on", required=True)
    _add_context_args(p)
    p.set_defaults(run=_run_weight)

    p = sub.add_parser("census", help="weight multiplicity census up to a depth")
    p.add_argument("--depth", type=int, required=True)
    _add_context_args(p)
    p.set_defaults(run=_run_census)

    p = sub.add_parser("theta", help="twisting series of an algebra word")
    p.add_argument("--z", type=_fraction, required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--max-depth", type=int, default=6)
    p.set_defaults(run=_run_theta)

    p = sub.add_parser("primitive", help="construct a primitive vector")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--S", type=_index_set, default=frozenset())
    p.add_argument("--J", type=_fraction, required=True)
    p.add_argument("--K", type=_fraction, required=True)
    p.add_argument("--D", type=_fraction, default=Q(0))
    p.set_defaults(run=_run_primitive)

    p = sub.add_parser("reduce", help="reduce an element to the canonical generator")
    p.add_argument("--on", required=True)
    _add_context_args(p, default_module="ms")
    p.set_defaults(run=_run_reduce)

    p = sub.add_parser("witness", help="reducibility witness for a context")
    _add_context_args(p)
    p.set_defaults(run=_run_witness)

    p = sub.add_parser("criterion", help="irreducibility criterion for a context")
    _add_context_args(p)
    p.set_defaults(run=_run_criterion)

    p = sub.add_parser("probe", help="local nilpotency probe")
    p.add_argument("--gen", required=True)
    p.add_argument("--on", required=True)
    p.add_argument("--max-iter", type=int, default=10)
    _add_context_args(p)
    p.set_defaults(run=_run_probe)

    p = sub.add_parser("bracket-check", help="randomized commutator fidelity check")
    p.add_argument("--range", type=int, default=3)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--module", choices=["verma", "polyx"], default="verma")
    p.add_argument("--J", type=_fraction, default=Q(0))
    p.add_argument("--K", type=_fraction, default=Q(1))
    p.add_argument("--D", type=_fraction, default=Q(0))
    p.set_defaults(run=_run_bracket_check)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        result, trace = args.run(args)
    except DomainError as exc:
        if args.json:
            print(json.dumps({"status": "error", "code": exc.code, "message": str(exc)}))
        else:
            print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return 1
    if args.json:
        payload = {"status": "ok", "result": result}
        if trace is not None:
            payload["trace"] = trace
        print(json.dumps(payload))
    else:
        print(_render_text(args.command, result, trace))
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
