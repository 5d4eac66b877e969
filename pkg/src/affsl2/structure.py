"""Degree statistics, closed-form constants, primitive vectors, and
constructive irreducibility certificates.

The reduction algorithms never rely on "a sufficiently large probe index
exists" blindly: a candidate index is tried, the expected effect (nonzero
image, strictly smaller degree) is verified on the spot, and the next
candidate is tried on failure.  Every successful step is recorded as a
replayable UElement, so a finished ReductionTrace is a certificate that can
be checked independently of the code that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Tuple

from .errors import (
    ContextMismatchError,
    HypothesisError,
    NotIntegralError,
    NotReducibleError,
    ReductionStuckError,
    ZeroVectorError,
)
from .modules import (
    ModuleContext,
    ModuleKind,
    Params,
    is_member,
    make_context,
    monomial_weight,
    project,
    weight_of,
)
from .realization import (
    CENTRAL,
    DEGREE,
    E,
    F,
    Gen,
    H,
    apply_generator,
    apply_script_E,
)
from .ring import (
    KIND_X,
    KIND_Y,
    Element,
    Monomial,
    Q,
    X,
    Y,
    add,
    all_indices,
    is_zero,
    mono_exp,
    mono_from_dict,
    monomial,
    one,
    qq,
    scale,
    scale_var,
    sub,
    var,
    x_support,
    y_support,
    zero,
)
from .ualgebra import (
    UElement,
    apply_uelement,
    conjugate_by_f_power,
    theta,
    u_add,
    u_gen,
    u_mul,
    u_one,
    u_pow,
    u_scalar,
    u_scale,
)

# ---------------------------------------------------------------------------
# degrees


@dataclass(frozen=True)
class DegreeReport:
    deg_x: int
    deg_x_plus: int
    deg_y: int
    deg_y_plus: int
    homogeneous_x: bool
    homogeneous_x_plus: bool


def _monomial_degrees(m: Monomial) -> Tuple[int, int, int, int]:
    dx = dxp = dy = dyp = 0
    for (kind, _), e in m:
        if kind == KIND_X:
            dx += e
            if e > 0:
                dxp += e
        else:
            dy += e
            if e > 0:
                dyp += e
    return dx, dxp, dy, dyp


def degrees(v: Element) -> DegreeReport:
    """Signed and positive-part x/y degrees, extended to sums by maxima."""
    if not v:
        raise ZeroVectorError("degrees of the zero vector are undefined")
    rows = [_monomial_degrees(m) for m in v]
    dx = max(r[0] for r in rows)
    dxp = max(r[1] for r in rows)
    dy = max(r[2] for r in rows)
    dyp = max(r[3] for r in rows)
    return DegreeReport(
        deg_x=dx,
        deg_x_plus=dxp,
        deg_y=dy,
        deg_y_plus=dyp,
        homogeneous_x=all(r[0] == dx for r in rows),
        homogeneous_x_plus=all(r[1] == dxp for r in rows),
    )


# ---------------------------------------------------------------------------
# closed-form constants


def h_diag_constant(s: int, exponent: int, K) -> Fraction:
    """Constant by which h_s rescales y_s on a monomial with the given
    y_s-exponent: 2*s*exponent*K (zero when the variable is absent)."""
    return 2 * s * exponent * qq(K)


def lowering_eigenvalue(alpha: int, p, i: int, pars: Params) -> Fraction:
    """-p (p + 1 - 2*alpha + J - i*K).

    Eigenvalue of the pure-dx_i part of e_{-i} on x_i^{-p} times a
    nonnegative x-content of degree alpha; p may be rational to cover
    twisted exponents.
    """
    p = qq(p)
    return -p * (p + 1 - 2 * alpha + pars.J - i * pars.K)


def probe_leading_constant(alpha: int, i: int, pars: Params) -> Fraction:
    """2 (2 - 2*alpha + J - iK)(3 - 2*alpha + J - iK), the coefficient of the
    leading term produced by the composite degree probe."""
    t = pars.J - i * pars.K
    return 2 * (2 - 2 * alpha + t) * (3 - 2 * alpha + t)


def probe_leading_constant_from_lowering(alpha: int, i: int, pars: Params) -> Fraction:
    """The same constant assembled from lowering eigenvalues; must agree with
    the factored form for all parameters."""
    a1 = lowering_eigenvalue(alpha, 1, i, pars)
    a2 = lowering_eigenvalue(alpha + 1, 2, i, pars)
    return a1 * a2 - 2 * a2 + 4


def script_e_chain_constant(n: int) -> int:
    """2^n * prod_{s=2}^{n+1} C(s, 2): the scalar produced by collapsing a
    product of n+1 x-variables with n applications of the raising operator."""
    out = 2 ** n
    for s in range(2, n + 2):
        out *= s * (s - 1) // 2
    return out


# ---------------------------------------------------------------------------
# witnesses and traces


@dataclass(frozen=True)
class Witness:
    vector: Element
    kind: str  # "primitive" | "submodule_generator"
    certificate: str


@dataclass(frozen=True)
class TraceStep:
    u: UElement
    tag: str
    result: Element


@dataclass(frozen=True)
class ReductionTrace:
    initial: Element
    steps: Tuple[TraceStep, ...]
    final: Element
    scalar: Fraction
    generator: Element


def replay_trace(trace: ReductionTrace, ctx: ModuleContext) -> bool:
    """Re-run every recorded UElement and compare against the snapshots."""
    cur = trace.initial
    for step in trace.steps:
        cur = apply_uelement(step.u, cur, ctx)
        if cur != step.result:
            return False
    if cur != trace.final:
        return False
    return cur == scale(trace.generator, trace.scalar)


# ---------------------------------------------------------------------------
# canonical generators


def canonical_generator(ctx: ModuleContext) -> Element:
    kind = ctx.kind
    if kind in (ModuleKind.VERMA, ModuleKind.ZERO_CHARGE_POLY, ModuleKind.TWISTED):
        return one()
    exps = {}
    if kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI):
        exps[X(ctx.i)] = -1
    if kind in (ModuleKind.QUOT_MS, ModuleKind.QUOT_MIS):
        for t in ctx.s:
            exps[Y(t)] = -1
    if kind is ModuleKind.LOC_FULL:
        raise ContextMismatchError("the full localized space has no canonical generator")
    return monomial(exps)


# ---------------------------------------------------------------------------
# primitive vectors


def primitive_vector(i: int, s, pars: Params) -> Witness:
    """A nonzero vector of the quotient module killed by e_{-i}.

    Exists exactly when J - iK is an integer.  The vector is assembled from
    a seed g_0 = x-product difference with equal index sums (all indices
    above i + max(S)), the raising-operator chain g_t, and the exponent
    shift that moves the sum into the quotient's basis.
    """
    s = frozenset(int(t) for t in s)
    q = pars.J - i * pars.K
    if q.denominator != 1:
        raise NotIntegralError(f"J - iK = {q} is not an integer")
    q = int(q)
    n_top = max(0, q - 2)
    m = i + max(s, default=0)

    idx_a = list(range(m + 1, m + n_top + 2)) + [m + n_top + 4]
    idx_b = list(range(m + 1, m + n_top + 1)) + [m + n_top + 2, m + n_top + 3]
    g0 = sub(
        monomial({X(a): 1 for a in idx_a}),
        monomial({X(b): 1 for b in idx_b}),
    )
    chain_check = g0
    for _ in range(n_top + 1):
        chain_check = apply_script_E(i, chain_check)
    if not is_zero(chain_check):
        raise AssertionError("seed polynomial is not killed by the raising chain")

    # g_t = E_i(g_{t-1}) / A_t with A_t = t (t - 2N - 3 + q), nonzero for t <= N
    gs = [g0]
    for t in range(1, n_top + 1):
        a_t = Q(t * (t - 2 * n_top - 3 + q))
        gs.append(scale(apply_script_E(i, gs[-1]), 1 / a_t))

    shift = 2 * n_top + 3 - q  # strictly larger than n_top, so exponents stay negative
    v = zero()
    for t, g in enumerate(gs):
        v = add(v, scale_var(X(i), g, t - shift))
    for t in sorted(s):
        v = scale_var(Y(t), v, -1)

    if pars.K != 0:
        ctx = make_context(ModuleKind.QUOT_MIS, i=i, s=s, pars=pars)
    else:
        if s:
            raise ContextMismatchError("K = 0 primitive vectors live in M_i; S must be empty")
        ctx = make_context(ModuleKind.QUOT_MI, i=i, pars=pars)
    if project(v, ctx) != v or is_zero(v):
        raise AssertionError("constructed vector left the quotient basis")
    if not is_zero(apply_generator(E(-i), v, ctx)):
        raise AssertionError("constructed vector is not primitive")
    return Witness(
        vector=v,
        kind="primitive",
        certificate=(
            f"e[{-i}] annihilates the vector in the {ctx.kind.value} quotient; "
            f"verified exactly (J - iK = {q}, chain length N = {n_top}, shift {shift})"
        ),
    )


# ---------------------------------------------------------------------------
# irreducibility criteria


class CriterionResult(NamedTuple):
    verdict: str  # "IRREDUCIBLE" | "REDUCIBLE"
    reason: str


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


def irreducibility_criterion(ctx: ModuleContext) -> CriterionResult:
    p = ctx.params
    kind = ctx.kind
    if kind is ModuleKind.VERMA:
        if p.K != 0:
            return CriterionResult("IRREDUCIBLE", f"K = {p.K} is nonzero")
        return CriterionResult(
            "REDUCIBLE", "K = 0: the positive-depth weight spaces generate a proper submodule"
        )
    if kind is ModuleKind.ZERO_CHARGE_POLY:
        if p.J != 0:
            return CriterionResult("IRREDUCIBLE", f"J = {p.J} is nonzero")
        return CriterionResult("REDUCIBLE", "J = 0: the positive-degree polynomials form a submodule")
    if kind is ModuleKind.LOC_FULL:
        return CriterionResult(
            "REDUCIBLE", "the unlocalized polynomial subspace is a proper submodule"
        )
    if kind is ModuleKind.QUOT_MS:
        if p.K != 0:
            return CriterionResult("IRREDUCIBLE", f"K = {p.K} is nonzero")
        return CriterionResult(
            "REDUCIBLE", "K = 0: adjoining one positive y-power generates a proper submodule"
        )
    if kind is ModuleKind.QUOT_MIS:
        if p.K == 0:
            return CriterionResult(
                "REDUCIBLE", "K = 0: adjoining one positive y-power generates a proper submodule"
            )
        t = p.J - ctx.i * p.K
        if _is_int(t):
            return CriterionResult("REDUCIBLE", f"J - iK = {t} is an integer: a primitive vector exists")
        return CriterionResult("IRREDUCIBLE", f"J - iK = {t} is not an integer")
    if kind is ModuleKind.QUOT_MI:
        if _is_int(p.J):
            return CriterionResult("REDUCIBLE", f"J = {p.J} is an integer: a primitive vector exists")
        return CriterionResult("IRREDUCIBLE", f"J = {p.J} is not an integer")
    if kind is ModuleKind.TWISTED:
        if _is_int(ctx.z):
            return CriterionResult(
                "REDUCIBLE",
                f"z = {ctx.z} is an integer: the twist is equivalent to the plain localization, "
                "which contains the polynomial module",
            )
        t = ctx.z - p.J + ctx.i * p.K
        if _is_int(t):
            return CriterionResult("REDUCIBLE", f"z - J + iK = {t} is an integer: a primitive vector exists")
        return CriterionResult("IRREDUCIBLE", f"z - J + iK = {t} is not an integer")
    raise ContextMismatchError(f"no criterion for context kind {kind!r}")


# ---------------------------------------------------------------------------
# reducibility witnesses


_PROBE_GENS = (
    [E(n) for n in range(-3, 4)]
    + [F(n) for n in range(-3, 4)]
    + [H(n) for n in range(-3, 4)]
    + [CENTRAL, DEGREE]
)


def _verify_cone(w: Element, ctx: ModuleContext, keeps, description: str) -> str:
    """Check that one application of every probe generator stays inside the
    monomial cone described by ``keeps``."""
    for g in _PROBE_GENS:
        img = apply_generator(g, w, ctx)
        for m in img:
            if not keeps(m):
                raise AssertionError(
                    f"witness cone violated by {g} at monomial {m}"
                )
    return f"{description}; one application of every generator with |n| <= 3 stays inside"


def reducibility_witness(ctx: ModuleContext) -> Witness:
    verdict = irreducibility_criterion(ctx)
    if verdict.verdict != "REDUCIBLE":
        raise NotReducibleError(verdict.reason)
    p = ctx.params
    kind = ctx.kind

    def min_dyp(m: Monomial) -> int:
        return sum(e for (k, _), e in m if k == KIND_Y and e > 0)

    if kind is ModuleKind.VERMA:
        w = var(Y(1))
        cert = _verify_cone(w, ctx, lambda m: min_dyp(m) >= 1,
                            "every monomial keeps positive y-degree when K = 0")
        return Witness(w, "submodule_generator", cert)
    if kind is ModuleKind.ZERO_CHARGE_POLY:
        w = var(X(0))
        deg = lambda m: sum(e for _, e in m)
        cert = _verify_cone(w, ctx, lambda m: deg(m) >= 1,
                            "every monomial keeps positive total degree when J = 0")
        return Witness(w, "submodule_generator", cert)
    if kind is ModuleKind.LOC_FULL:
        w = one()
        cert = _verify_cone(w, ctx, lambda m: all(e >= 0 for _, e in m),
                            "the polynomial subspace is invariant")
        return Witness(w, "submodule_generator", cert)
    if kind in (ModuleKind.QUOT_MS, ModuleKind.QUOT_MIS) and p.K == 0:
        j = 1
        while j in ctx.s:
            j += 1
        exps = {Y(j): 1}
        for t in ctx.s:
            exps[Y(t)] = -1
        if kind is ModuleKind.QUOT_MIS:
            exps[X(ctx.i)] = -1
        w = monomial(exps)
        cert = _verify_cone(w, ctx, lambda m: min_dyp(m) >= 1,
                            "K = 0: no generator lowers the positive y-degree")
        return Witness(w, "submodule_generator", cert)
    if kind is ModuleKind.QUOT_MIS:
        return primitive_vector(ctx.i, ctx.s, p)
    if kind is ModuleKind.QUOT_MI:
        return primitive_vector(ctx.i, (), p)
    if kind is ModuleKind.TWISTED:
        if _is_int(ctx.z):
            zint = int(ctx.z)
            w = monomial({X(ctx.i): -zint}) if zint else one()
            cert = _verify_cone(
                w, ctx,
                lambda m: mono_exp(m, X(ctx.i)) >= -zint,
                "integral twist: the shifted polynomial subspace is invariant",
            )
            return Witness(w, "submodule_generator", cert)
        n = ctx.z - p.J + ctx.i * p.K  # integer by the criterion
        w = monomial({X(ctx.i): 1 - int(n)})
        if not is_zero(apply_generator(E(-ctx.i), w, ctx)):
            raise AssertionError("twisted primitive candidate not annihilated")
        return Witness(
            w, "primitive",
            f"e[{-ctx.i}] annihilates the stored power x_i^(z + {1 - int(n)}) exactly",
        )
    raise NotReducibleError(f"no witness construction for {kind!r}")


# ---------------------------------------------------------------------------
# h0 components


def h0_components(v: Element, ctx: ModuleContext) -> List[Element]:
    """Decomposition into h0-eigencomponents, ordered by ascending x-degree."""
    if not v:
        raise ZeroVectorError("cannot decompose the zero vector")
    groups: dict[Fraction, Element] = {}
    for m, c in v.items():
        key = monomial_weight(m, ctx).h0
        groups.setdefault(key, {})[m] = c
    # larger x-degree = smaller h0 eigenvalue
    return [groups[k] for k in sorted(groups, reverse=True)]


def _h0_projector(v: Element, ctx: ModuleContext, target: Fraction) -> UElement:
    """Polynomial in h_0 acting as the projection onto the target eigenvalue."""
    eigen = sorted({monomial_weight(m, ctx).h0 for m in v})
    u = u_one()
    denom = Q(1)
    for lam in eigen:
        if lam == target:
            continue
        u = u_mul(u, u_add(u_gen(H(0)), u_scalar(-lam)))
        denom *= target - lam
    return u_scale(u, 1 / denom)


# ---------------------------------------------------------------------------
# local nilpotency probe


class ProbeResult(NamedTuple):
    outcome: str  # "NILPOTENT" | "SURVIVES"
    steps: int


def local_nilpotency_probe(g: Gen, v: Element, ctx: ModuleContext, max_iter: int) -> ProbeResult:
    """Least k <= max_iter with g^k v = 0 in the module, else SURVIVES."""
    if g[0] not in ("e", "f"):
        raise ContextMismatchError("the probe takes a real-root generator e[n] or f[n]")
    cur = v
    for k in range(1, max_iter + 1):
        cur = apply_generator(g, cur, ctx)
        if is_zero(cur):
            return ProbeResult("NILPOTENT", k)
    return ProbeResult("SURVIVES", max_iter)


# ---------------------------------------------------------------------------
# reduction to the generator


_PROBE_RETRIES = 10


class _Reducer:
    def __init__(self, v: Element, ctx: ModuleContext):
        self.ctx = ctx
        self.initial = v
        self.cur = v
        self.steps: List[TraceStep] = []

    def apply(self, u: UElement, tag: str) -> None:
        nxt = apply_uelement(u, self.cur, self.ctx)
        if is_zero(nxt):
            raise ReductionStuckError(f"step {tag} annihilated the vector")
        self.cur = nxt
        self.steps.append(TraceStep(u, tag, nxt))

    # -- shared sub-passes ---------------------------------------------------

    def project_h0(self) -> None:
        comps = h0_components(self.cur, self.ctx)
        if len(comps) == 1:
            return
        target = comps[0]  # smallest x-degree component
        lam = monomial_weight(next(iter(target)), self.ctx).h0
        self.apply(_h0_projector(self.cur, self.ctx, lam), "H0_PROJECT")

    def _deg_x(self) -> int:
        return degrees(self.cur).deg_x

    def _deg_xp(self) -> int:
        return degrees(self.cur).deg_x_plus

    def probe_bound(self, extra: Iterable[int] = ()) -> int:
        vals = [abs(t) for t in all_indices(self.cur)]
        vals += [abs(t) for t in extra]
        vals += [abs(t) for t in self.ctx.s]
        if self.ctx.i is not None:
            vals.append(abs(self.ctx.i))
        return max(vals, default=0)

    def lower_x_simple(self) -> None:
        """e_{-n} probes: strip off one x-degree per step (no localized x)."""
        while self._deg_x() > 0:
            base = 3 * self.probe_bound() + 3
            before = self._deg_x()
            for n in range(base, base + _PROBE_RETRIES):
                w = apply_uelement(u_gen(E(-n)), self.cur, self.ctx)
                if not is_zero(w) and degrees(w).deg_x < before:
                    self.apply(u_gen(E(-n)), "E_PROBE")
                    break
            else:
                raise ReductionStuckError(
                    f"no probe index lowered the x-degree from {before}"
                )

    def lower_x_zero_charge(self) -> None:
        """Same loop for the K = 0 polynomial module; support indices are
        legitimate fallback probes there."""
        while self._deg_x() > 0:
            before = self._deg_x()
            base = 3 * self.probe_bound() + 3
            candidates = list(range(base, base + _PROBE_RETRIES)) + x_support(self.cur)
            for n in candidates:
                w = apply_uelement(u_gen(E(-n)), self.cur, self.ctx)
                if not is_zero(w) and degrees(w).deg_x < before:
                    self.apply(u_gen(E(-n)), "E_PROBE")
                    break
            else:
                raise ReductionStuckError(
                    f"no probe index lowered the x-degree from {before}"
                )

    def normalize_xi(self) -> None:
        """Multiply by a power of f_i so the deepest x_i-layer sits at -1;
        shallower layers fall into the quotient ideal and vanish."""
        i = self.ctx.i
        e_min = min(mono_exp(m, X(i)) for m in self.cur)
        n = -1 - e_min
        if n > 0:
            self.apply(u_gen(F(i), power=n), "F_POWER")

    def y_raise_and_lower(self, correction: Optional[Fraction]) -> None:
        """Bring the mandatory y_S-exponents to -1, then clear the rest.

        ``correction`` is 2/(2 + J - iK) for localized quotients (the
        f e_{-i} counterterm that cancels the x_i-tail of h_{+-s}); None in
        the plain quotient where h_{+-s} already acts cleanly.
        """
        ctx = self.ctx
        i = ctx.i
        K = ctx.params.K

        def h_like(n: int) -> UElement:
            base = u_gen(H(n))
            if correction is None:
                return base
            return u_add(base, u_scale(u_mul(u_gen(F(i + abs(n)) if n > 0 else F(i - abs(n))),
                                             u_gen(E(-i))), correction))

        for t in sorted(ctx.s):
            while True:
                gamma = max(-mono_exp(m, Y(t)) for m in self.cur)
                if gamma <= 1:
                    break
                self.apply(h_like(-t), "U123" if correction is not None else "H_RAISE")
        while True:
            extra = [j for j in y_support(self.cur) if j not in ctx.s]
            if not extra:
                break
            j = extra[0]
            u = u_scale(h_like(j), Q(1, 2 * j) / K)
            self.apply(u, "U123" if correction is not None else "H_LOWER")

    def finish(self, generator: Element) -> ReductionTrace:
        if len(self.cur) != 1:
            raise ReductionStuckError("reduction did not end in a single monomial")
        (m, c), = self.cur.items()
        (gm, gc), = generator.items()
        if m != gm:
            raise ReductionStuckError("reduction ended at an unexpected monomial")
        return ReductionTrace(
            initial=self.initial,
            steps=tuple(self.steps),
            final=self.cur,
            scalar=c / gc,
            generator=generator,
        )


def _tilde_probe(n: int, alpha: int, i: int, pars: Params) -> UElement:
    """(e_{-i} f_i - A_{alpha,1})(e_{-i} f_i - A_{alpha+1,2}) e_{-n}."""
    ef = u_mul(u_gen(E(-i)), u_gen(F(i)))
    t1 = u_add(ef, u_scalar(-lowering_eigenvalue(alpha, 1, i, pars)))
    t2 = u_add(ef, u_scalar(-lowering_eigenvalue(alpha + 1, 2, i, pars)))
    return u_mul(u_mul(t1, t2), u_gen(E(-n)))


def reduce_to_generator(v: Element, ctx: ModuleContext) -> ReductionTrace:
    """Drive a nonzero element down to the canonical generator.

    Requires the context's irreducibility hypothesis; every step is recorded
    with its UElement and snapshot, so the trace replays exactly.
    """
    if is_zero(v):
        raise ZeroVectorError("cannot reduce the zero vector")
    if not is_member(v, ctx):
        raise ContextMismatchError("element does not belong to the context")
    verdict = irreducibility_criterion(ctx)
    if verdict.verdict != "IRREDUCIBLE":
        raise HypothesisError(verdict.reason)

    kind = ctx.kind
    red = _Reducer(v, ctx)
    red.initial = v
    gen = canonical_generator(ctx)

    if kind in (ModuleKind.VERMA, ModuleKind.QUOT_MS):
        red.project_h0()
        red.lower_x_simple()
        red.y_raise_and_lower(correction=None)
        return red.finish(gen)

    if kind is ModuleKind.ZERO_CHARGE_POLY:
        red.project_h0()
        red.lower_x_zero_charge()
        return red.finish(gen)

    if kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI):
        pars = ctx.params
        i = ctx.i
        while True:
            red.normalize_xi()
            red.project_h0()
            alpha = red._deg_xp()
            if alpha == 0:
                break
            support = [j for j in x_support(red.cur) if j != i]
            base = 3 * red.probe_bound() + 3
            candidates = list(range(base, base + _PROBE_RETRIES))
            if kind is ModuleKind.QUOT_MI:
                candidates += support
            for n in candidates:
                u = _tilde_probe(n, alpha, i, pars)
                w = apply_uelement(u, red.cur, ctx)
                if not is_zero(w) and degrees(w).deg_x_plus < alpha:
                    red.apply(u, "E_TILDE")
                    break
            else:
                raise ReductionStuckError(
                    f"no probe index lowered the positive x-degree from {alpha}"
                )
        if kind is ModuleKind.QUOT_MIS:
            corr = Q(2) / (2 + pars.J - i * pars.K)
            red.y_raise_and_lower(correction=corr)
        return red.finish(gen)

    if kind is ModuleKind.TWISTED:
        return _reduce_twisted(red, gen)

    raise ContextMismatchError(f"reduction is not defined for {kind!r}")


def _carrier_context(ctx: ModuleContext) -> ModuleContext:
    if ctx.params.K != 0:
        return make_context(ModuleKind.VERMA, pars=ctx.params)
    if ctx.params.J == 0:
        raise ReductionStuckError(
            "twisted reduction with K = 0 and J = 0 has no cyclic polynomial carrier"
        )
    return make_context(ModuleKind.ZERO_CHARGE_POLY, pars=ctx.params)


def _theta_depth(u: UElement) -> int:
    longest = max((sum(abs(p) for _, p in w.factors) for w in u), default=0)
    return 2 * longest + 4


def _reduce_twisted(red: _Reducer, gen: Element) -> ReductionTrace:
    """Reduce in a twisted module by lifting a polynomial-carrier reduction.

    With N the deepest stored x_i-exponent, x_i^{-N} v is a polynomial; its
    reduction steps u_j conjugate to f_i^N Theta_z(u_j) f_i^{-N}, which act
    on the twisted module and shadow the carrier computation step by step.
    """
    ctx = red.ctx
    i = ctx.i
    red.project_h0()
    n_shift = min(mono_exp(m, X(i)) for m in red.cur)
    carrier = scale_var(X(i), red.cur, -n_shift)
    carrier_ctx = _carrier_context(ctx)
    if not is_member(carrier, carrier_ctx):
        raise ReductionStuckError("twisted carrier left the polynomial module")
    inner = reduce_to_generator(carrier, carrier_ctx)
    for step in inner.steps:
        lifted = conjugate_by_f_power(
            theta(ctx.z, step.u, i, max_depth=_theta_depth(step.u)), i, n_shift
        )
        red.apply(lifted, step.tag)
        if red.cur != scale_var(X(i), step.result, n_shift):
            raise ReductionStuckError("twisted lift diverged from the carrier")
    if n_shift != 0:
        red.apply(u_gen(F(i), power=-n_shift), "F_POWER")
    return red.finish(gen)


# ---------------------------------------------------------------------------
# reaching monomials from the generator


def generate_from_generator(target: Monomial, ctx: ModuleContext) -> Tuple[UElement, Fraction]:
    """A UElement u with u(generator) = c * target, c nonzero; returns (u, c)."""
    t_el = {target: Q(1)}
    if not is_member(t_el, ctx):
        raise ContextMismatchError("target is not a basis monomial of the context")
    kind = ctx.kind
    pars = ctx.params
    i = ctx.i

    def f_block(skip_index: Optional[int] = None) -> UElement:
        out = u_one()
        for (vk, idx), e in sorted(target):
            if vk == KIND_X and e > 0 and idx != skip_index:
                out = u_mul(out, u_gen(F(idx), power=e))
        return out

    if kind in (ModuleKind.VERMA, ModuleKind.ZERO_CHARGE_POLY):
        u = f_block()
        if kind is ModuleKind.VERMA:
            for (vk, idx), e in sorted(target):
                if vk == KIND_Y:
                    u = u_mul(u, u_gen(H(-idx), power=e))
        c = _generated_scalar(u, t_el, ctx)
        return u, c

    if kind is ModuleKind.QUOT_MS:
        u = f_block()
        for (vk, idx), e in sorted(target):
            if vk != KIND_Y:
                continue
            if idx in ctx.s:
                if e < -1:
                    u = u_mul(u, u_gen(H(idx), power=-e - 1))
            else:
                u = u_mul(u, u_gen(H(-idx), power=e))
        c = _generated_scalar(u, t_el, ctx)
        return u, c

    if kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI):
        corr = Q(2) / (2 + pars.J - i * pars.K)
        u = f_block(skip_index=i)
        # deepen x_i from -1 to the target exponent, one exact step per level
        p_target = -mono_exp(target, X(i))
        for p in range(1, p_target):
            coeff = Q(-1) / (p * (p + 1 + pars.J - i * pars.K))
            u = u_mul(u, u_gen(E(-i), coeff=coeff))
        if kind is ModuleKind.QUOT_MIS:
            for (vk, idx), e in sorted(target):
                if vk != KIND_Y:
                    continue
                if idx in ctx.s:
                    for step in range(-e - 1):
                        gamma = step + 1
                        cs = h_diag_constant(idx, -gamma, pars.K)
                        word = u_add(
                            u_gen(H(idx)),
                            u_scale(u_mul(u_gen(F(i + idx)), u_gen(E(-i))), corr),
                        )
                        u = u_mul(u, u_scale(word, 1 / cs))
                else:
                    word = u_add(
                        u_gen(H(-idx)),
                        u_scale(u_mul(u_gen(F(i - idx)), u_gen(E(-i))), corr),
                    )
                    u = u_mul(u, u_pow(word, e))
        c = _generated_scalar(u, t_el, ctx)
        return u, c

    if kind is ModuleKind.TWISTED:
        ki = mono_exp(target, X(i))
        n_t = min(0, ki)
        exps = dict(target)
        if n_t:
            exps[X(i)] = ki - n_t
        carrier_target = mono_from_dict(exps)
        carrier_ctx = _carrier_context(ctx)
        u_carrier, _ = generate_from_generator(carrier_target, carrier_ctx)
        u = u_mul(
            u_gen(F(i), power=n_t) if n_t else u_one(),
            theta(ctx.z, u_carrier, i, max_depth=_theta_depth(u_carrier)),
        )
        c = _generated_scalar(u, t_el, ctx)
        return u, c

    raise ContextMismatchError(f"generation is not defined for {kind!r}")


def _generated_scalar(u: UElement, target_el: Element, ctx: ModuleContext) -> Fraction:
    got = apply_uelement(u, canonical_generator(ctx), ctx)
    (tm, tc), = target_el.items()
    if list(got) != [tm]:
        raise ReductionStuckError("generated element is not the requested monomial")
    return got[tm] / tc
