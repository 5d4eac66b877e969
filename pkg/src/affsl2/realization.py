"""Differential-operator actions of the sl2-hat generators on Elements.

The loop-generator basis is e_n, f_n, h_n (n any integer) together with the
central element c and the degree operator d.  On the polynomial carrier the
actions are, for central charge K and highest weight J:

  f_n  ->  x_n
  h_n  ->  -2 sum_m x_{m+n} d/dx_m  +  [n<0] y_{-n}  +  [n>0] 2nK d/dy_n  +  [n=0] J
  e_n  ->  - sum_{m,k} x_{k+m+n} d/dx_k d/dx_m  +  sum_{k>0} y_k d/dx_{-k-n}
           + 2K sum_{m>0} m d/dy_m d/dx_{m-n}  +  (Kn + J) d/dx_{-n}
  c    ->  K
  d    ->  D + sum_n n x_n d/dx_n - sum_m m y_m d/dy_m

The zero-central-charge variant (contexts with K = 0 and no y variables)
keeps only the x-parts:

  h_n  ->  -2 sum_m x_{m+n} d/dx_m  +  [n=0] J
  e_n  ->  - sum_{m,k} x_{k+m+n} d/dx_k d/dx_m  +  J d/dx_{-n}

The formal sums are evaluated support-locally: only derivatives in variables
actually present in the argument (plus the twisted variable x_i, whose
derivative never vanishes when the twist z is non-integral) can contribute,
so every action on a finitely supported element is a finite computation.
Diagonal second derivatives get their correct multiplicity because the
double sums run over ordered pairs of iterated single derivatives.

In a twisted context the stored exponent k of x_i means actual exponent
z + k, and every derivative in x_i carries the shift z.
"""

from __future__ import annotations

from typing import Tuple

from .errors import ContextMismatchError
from .modules import ModuleContext, ModuleKind, monomial_weight, project, is_member
from .ring import (
    KIND_X,
    Element,
    Q,
    X,
    Y,
    add,
    diff,
    from_terms,
    scale,
    scale_var,
    sub,
    x_support,
    y_support,
    zero,
)

Gen = Tuple[str, int]


def E(n: int) -> Gen:
    return ("e", n)


def F(n: int) -> Gen:
    return ("f", n)


def H(n: int) -> Gen:
    return ("h", n)


CENTRAL: Gen = ("c", 0)
DEGREE: Gen = ("d", 0)


def format_generator(g: Gen) -> str:
    kind, n = g
    return kind if kind in ("c", "d") else f"{kind}[{n}]"


def generator_weight_shift(g: Gen) -> Tuple[int, int]:
    """(h0-offset, d-offset) added to a weight by acting with g."""
    kind, n = g
    if kind == "e":
        return (2, n)
    if kind == "f":
        return (-2, n)
    if kind == "h":
        return (0, n)
    return (0, 0)


# ---------------------------------------------------------------------------
# shift-aware derivatives and candidate sets


def _d(ctx: ModuleContext, v, a: Element) -> Element:
    if ctx.kind is ModuleKind.TWISTED and v == (KIND_X, ctx.i):
        return diff(v, a, ctx.z)
    return diff(v, a)


def _x_candidates(ctx: ModuleContext, a: Element) -> list[int]:
    idx = set(x_support(a))
    if ctx.kind is ModuleKind.TWISTED:
        idx.add(ctx.i)
    return sorted(idx)


# ---------------------------------------------------------------------------
# raw actions (no projection)


def _act_f(n: int, v: Element) -> Element:
    return scale_var(X(n), v, 1)


def _act_h(n: int, v: Element, ctx: ModuleContext) -> Element:
    p = ctx.params
    out = zero()
    for m in _x_candidates(ctx, v):
        w = _d(ctx, X(m), v)
        if w:
            out = sub(out, scale(scale_var(X(m + n), w, 1), 2))
    if n == 0:
        out = add(out, scale(v, p.J))
    if not ctx.uses_zero_charge_action:
        if n < 0:
            out = add(out, scale_var(Y(-n), v, 1))
        elif n > 0:
            out = add(out, scale(diff(Y(n), v), 2 * n * p.K))
    return out


def _act_e(n: int, v: Element, ctx: ModuleContext) -> Element:
    p = ctx.params
    zc = ctx.uses_zero_charge_action
    out = zero()
    # - sum_{m,k} x_{k+m+n} d/dx_k d/dx_m, over ordered pairs
    for m in _x_candidates(ctx, v):
        wm = _d(ctx, X(m), v)
        if not wm:
            continue
        for k in _x_candidates(ctx, wm):
            wkm = _d(ctx, X(k), wm)
            if wkm:
                out = sub(out, scale_var(X(k + m + n), wkm, 1))
    if zc:
        out = add(out, scale(_d(ctx, X(-n), v), p.J))
        return out
    # sum_{k>0} y_k d/dx_{-k-n}
    for j in _x_candidates(ctx, v):
        k = -j - n
        if k >= 1:
            w = _d(ctx, X(j), v)
            if w:
                out = add(out, scale_var(Y(k), w, 1))
    # 2K sum_{m>0} m d/dy_m d/dx_{m-n}
    if p.K:
        for m in y_support(v):
            w = _d(ctx, X(m - n), v)
            if w:
                w = diff(Y(m), w)
                if w:
                    out = add(out, scale(w, 2 * m * p.K))
    # (Kn + J) d/dx_{-n}
    cst = p.K * n + p.J
    if cst:
        out = add(out, scale(_d(ctx, X(-n), v), cst))
    return out


def _act_d(v: Element, ctx: ModuleContext) -> Element:
    return from_terms((m, c * monomial_weight(m, ctx).d) for m, c in v.items())


def apply_generator(g: Gen, v: Element, ctx: ModuleContext) -> Element:
    """Action of a generator on a module element, projected back to ctx."""
    if not is_member(v, ctx):
        raise ContextMismatchError(
            f"element is not a member of the {ctx.kind.value} context"
        )
    kind, n = g
    if kind == "f":
        out = _act_f(n, v)
    elif kind == "h":
        out = _act_h(n, v, ctx)
    elif kind == "e":
        out = _act_e(n, v, ctx)
    elif kind == "c":
        out = scale(v, ctx.params.K)
    elif kind == "d":
        out = _act_d(v, ctx)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return project(out, ctx)


# ---------------------------------------------------------------------------
# the degree-raising auxiliary operator


def apply_script_E(i: int, v: Element) -> Element:
    """sum_{s1,s2 > i} x_{s1+s2-i} d/dx_{s1} d/dx_{s2} on an x-polynomial."""
    out = zero()
    for s2 in x_support(v):
        if s2 <= i:
            continue
        w2 = diff(X(s2), v)
        if not w2:
            continue
        for s1 in x_support(w2):
            if s1 <= i:
                continue
            w = diff(X(s1), w2)
            if w:
                out = add(out, scale_var(X(s1 + s2 - i), w, 1))
    return out


# ---------------------------------------------------------------------------
# the three-part split of e_{-i}

# e_{-i} = part0 + part1 + x_i * part2 where
#   part0 = -x_i dx_i dx_i - 2 (sum_{s != i} x_s dx_s) dx_i + (J - iK) dx_i
#   part1 = -sum_{s1,s2 != i, s1+s2 != 2i} x_{s1+s2-i} dx_{s1} dx_{s2}
#           + sum_{s>0} y_s dx_{i-s} + 2K sum_{t>0} t dy_t dx_{t+i}
#   part2 = -sum_{s != i} dx_{2i-s} dx_s
# part0 collects every term containing dx_i; the other parts never touch it.


def e_minus_i_part(i: int, part: int, v: Element, ctx: ModuleContext) -> Element:
    if ctx.i is None:
        raise ContextMismatchError("context has no localized index i")
    if not is_member(v, ctx):
        raise ContextMismatchError(
            f"element is not a member of the {ctx.kind.value} context"
        )
    p = ctx.params
    out = zero()
    if part == 0:
        w = _d(ctx, X(i), v)
        if w:
            wi = _d(ctx, X(i), w)
            if wi:
                out = sub(out, scale_var(X(i), wi, 1))
            for s in _x_candidates(ctx, w):
                if s == i:
                    continue
                ws = _d(ctx, X(s), w)
                if ws:
                    out = sub(out, scale(scale_var(X(s), ws, 1), 2))
            out = add(out, scale(w, p.J - i * p.K))
    elif part == 1:
        for s2 in _x_candidates(ctx, v):
            if s2 == i:
                continue
            w2 = _d(ctx, X(s2), v)
            if not w2:
                continue
            for s1 in _x_candidates(ctx, w2):
                if s1 == i or s1 + s2 == 2 * i:
                    continue
                w = _d(ctx, X(s1), w2)
                if w:
                    out = sub(out, scale_var(X(s1 + s2 - i), w, 1))
        if not ctx.uses_zero_charge_action:
            for j in _x_candidates(ctx, v):
                s = i - j
                if s >= 1:
                    w = _d(ctx, X(j), v)
                    if w:
                        out = add(out, scale_var(Y(s), w, 1))
            if p.K:
                for t in y_support(v):
                    w = _d(ctx, X(t + i), v)
                    if w:
                        w = diff(Y(t), w)
                        if w:
                            out = add(out, scale(w, 2 * t * p.K))
    elif part == 2:
        for s in _x_candidates(ctx, v):
            if s == i:
                continue
            w = _d(ctx, X(s), v)
            if not w:
                continue
            w = _d(ctx, X(2 * i - s), w)
            if w:
                out = sub(out, w)
    else:
        raise ValueError("part must be 0, 1, or 2")
    return project(out, ctx)
