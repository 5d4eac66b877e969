"""Module contexts: which sl2-hat module an element lives in.

The context zoo:

  VERMA             C[x, y], the defining polynomial module (all exponents >= 0).
  ZERO_CHARGE_POLY  C[x] with the zero-central-charge action (requires K = 0).
  LOC_FULL          C[x_i^{+-1}, y_S^{+-1}, rest], the localized ambient space.
  QUOT_MS           M_S: basis monomials have y_s-exponent <= -1 for s in S,
                    everything else >= 0.
  QUOT_MIS          M_{i,S}: additionally x_i-exponent <= -1.
  QUOT_MI           M_i (K = 0): x_i-exponent <= -1, no y variables, rest >= 0.
  TWISTED           x_i^z * C[x_i^{+-1}, rest-x, y]: the x_i exponent is stored
                    as an integer offset from the twist z.  With K = 0 the
                    carrier is x_i^z * C[x_i^{+-1}, rest-x] (no y) and the
                    zero-charge action applies.

Quotients are represented by their canonical bases; projection just drops
the monomials that fall into the defining ideal.  All scalars (J, K, D, z)
are exact rationals fixed at context construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Optional

from .errors import InvalidContextError, ZeroVectorError
from .ring import (
    KIND_X,
    KIND_Y,
    Element,
    Monomial,
    Q,
    X,
    mono_from_dict,
    qq,
)


class ModuleKind(Enum):
    VERMA = "verma"
    ZERO_CHARGE_POLY = "polyx"
    LOC_FULL = "loc"
    QUOT_MS = "ms"
    QUOT_MIS = "mis"
    QUOT_MI = "mi"
    TWISTED = "twisted"


@dataclass(frozen=True)
class Params:
    """Highest-weight data: J = lambda(h_0), K = lambda(c), D = lambda(d)."""

    J: Fraction
    K: Fraction
    D: Fraction = Q(0)


def params(J, K, D=0) -> Params:
    return Params(qq(J), qq(K), qq(D))


@dataclass(frozen=True)
class Weight:
    """Exact (h0, c, d) eigenvalue triple."""

    h0: Fraction
    c: Fraction
    d: Fraction


@dataclass(frozen=True)
class ModuleContext:
    kind: ModuleKind
    i: Optional[int]
    s: FrozenSet[int]
    z: Fraction
    params: Params

    @property
    def localized_index(self) -> Optional[int]:
        """Index i when powers of x_i are inverted in this context."""
        if self.kind in (
            ModuleKind.LOC_FULL,
            ModuleKind.QUOT_MIS,
            ModuleKind.QUOT_MI,
            ModuleKind.TWISTED,
        ):
            return self.i
        return None

    @property
    def twist(self) -> Fraction:
        return self.z if self.kind is ModuleKind.TWISTED else Q(0)

    @property
    def uses_zero_charge_action(self) -> bool:
        if self.kind in (ModuleKind.ZERO_CHARGE_POLY, ModuleKind.QUOT_MI):
            return True
        return self.kind is ModuleKind.TWISTED and self.params.K == 0


_NEEDS_I = (ModuleKind.LOC_FULL, ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI, ModuleKind.TWISTED)
_NO_S = (ModuleKind.ZERO_CHARGE_POLY, ModuleKind.QUOT_MI, ModuleKind.TWISTED)
_NEEDS_K0 = (ModuleKind.ZERO_CHARGE_POLY, ModuleKind.QUOT_MI)


def make_context(kind: ModuleKind, i=None, s=(), z=0, pars: Params = None,
                 *, J=None, K=None, D=0) -> ModuleContext:
    """Validated context.  Pass a Params object or the J/K/D keywords."""
    if pars is None:
        if J is None or K is None:
            raise InvalidContextError("parameters J and K are required")
        pars = params(J, K, D)
    s = frozenset(int(m) for m in s)
    z = qq(z)
    if any(m < 1 for m in s):
        raise InvalidContextError("S must contain positive integers")
    if kind in _NEEDS_I:
        if i is None:
            raise InvalidContextError(f"{kind.value} requires an index i")
        i = int(i)
    elif i is not None:
        raise InvalidContextError(f"{kind.value} does not take an index i")
    if kind in _NO_S and s:
        raise InvalidContextError(f"{kind.value} requires S to be empty")
    if kind is not ModuleKind.TWISTED and z != 0:
        raise InvalidContextError("z must be 0 outside twisted contexts")
    if kind in _NEEDS_K0 and pars.K != 0:
        raise InvalidContextError(
            f"{kind.value} uses the zero-central-charge action and needs K = 0"
        )
    return ModuleContext(kind, i, s, z, pars)


# ---------------------------------------------------------------------------
# membership and projection


def _monomial_ok(m: Monomial, ctx: ModuleContext) -> bool:
    kind = ctx.kind
    i = ctx.i
    s = ctx.s
    no_y = ctx.uses_zero_charge_action
    needs_neg_xi = kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI)
    free_xi = kind in (ModuleKind.LOC_FULL, ModuleKind.TWISTED) or needs_neg_xi
    free_ys = kind in (ModuleKind.LOC_FULL, ModuleKind.QUOT_MS, ModuleKind.QUOT_MIS)
    needs_neg_ys = kind in (ModuleKind.QUOT_MS, ModuleKind.QUOT_MIS)

    seen_s = set()
    xi_exp = 0
    for (vk, idx), e in m:
        if vk == KIND_Y:
            if no_y:
                return False
            if idx in s and free_ys:
                seen_s.add(idx)
                if needs_neg_ys and e > -1:
                    return False
            elif e < 0:
                return False
        else:
            if idx == i and free_xi:
                xi_exp = e
            elif e < 0:
                return False
    if needs_neg_xi and xi_exp > -1:
        return False
    if needs_neg_ys and seen_s != s:
        return False
    return True


def is_member(v: Element, ctx: ModuleContext) -> bool:
    """True iff every monomial satisfies the context's exponent constraints."""
    return all(_monomial_ok(m, ctx) for m in v)


def project(v: Element, ctx: ModuleContext) -> Element:
    """Quotient projection: drop the monomials violating the constraints.

    Linear and idempotent; the identity on members.
    """
    return {m: c for m, c in v.items() if _monomial_ok(m, ctx)}


# ---------------------------------------------------------------------------
# weights


def monomial_weight(m: Monomial, ctx: ModuleContext) -> Weight:
    p = ctx.params
    z = ctx.twist
    deg_x = 0
    d_off = Q(0)
    for (vk, idx), e in m:
        if vk == KIND_X:
            deg_x += e
            d_off += idx * e
        else:
            d_off -= idx * e
    h0 = -2 * (deg_x + z) + p.J
    d = p.D + d_off + (z * ctx.i if z else 0)
    return Weight(h0, p.K, d)


def weight_of(v: Element, ctx: ModuleContext) -> Optional[Weight]:
    """The common eigenvalue triple, or None if v is not homogeneous."""
    if not v:
        raise ZeroVectorError("the zero vector has no weight")
    it = iter(v)
    w = monomial_weight(next(it), ctx)
    for m in it:
        if monomial_weight(m, ctx) != w:
            return None
    return w


# ---------------------------------------------------------------------------
# support census


def _census_cost(idx: int) -> int:
    # weighted degree: one power of a variable costs max(1, |index|)
    return max(1, abs(idx))


def support_census(ctx: ModuleContext, max_depth: int) -> Dict[Weight, int]:
    """Count basis monomials per weight within the truncation.

    A monomial's size is the sum over its variables of |exponent| * max(1,
    |index|); monomials of size <= max_depth are enumerated.  For VERMA this
    makes the census at the weights (J, K, D - k) exact once max_depth >= k:
    the count is the number of partitions of k.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    kind = ctx.kind
    i = ctx.i
    no_y = ctx.uses_zero_charge_action

    # (variable, allowed exponent range) choices, mandatory ones first
    mandatory = []
    optional = []
    if kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI):
        mandatory.append(((KIND_X, i), "neg"))
    if kind in (ModuleKind.QUOT_MS, ModuleKind.QUOT_MIS):
        for m in sorted(ctx.s):
            mandatory.append(((KIND_Y, m), "neg"))
    for n in range(-max_depth, max_depth + 1):
        if kind in (ModuleKind.LOC_FULL, ModuleKind.TWISTED) and n == i:
            optional.append(((KIND_X, n), "any"))
        elif kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI) and n == i:
            continue  # already mandatory
        else:
            optional.append(((KIND_X, n), "pos"))
    if not no_y:
        for m in range(1, max_depth + 1):
            if kind in (ModuleKind.QUOT_MS, ModuleKind.QUOT_MIS) and m in ctx.s:
                continue  # already mandatory
            ys = "any" if kind is ModuleKind.LOC_FULL and m in ctx.s else "pos"
            optional.append(((KIND_Y, m), ys))

    variables = mandatory + optional
    counts: Dict[Weight, int] = {}

    def walk(idx: int, budget: int, exps: dict):
        if idx == len(variables):
            w = monomial_weight(mono_from_dict(exps), ctx)
            counts[w] = counts.get(w, 0) + 1
            return
        (v, mode) = variables[idx]
        cost = _census_cost(v[1])
        lo_mandatory = mode == "neg"
        # exponent 0 (variable absent) unless mandatory
        if not lo_mandatory:
            walk(idx + 1, budget, exps)
        emax = budget // cost
        if mode in ("pos",):
            rng = range(1, emax + 1)
        elif mode == "neg":
            rng = range(-1, -emax - 1, -1)
        else:  # any
            rng = [e for e in range(-emax, emax + 1) if e != 0]
        for e in rng:
            exps[v] = e
            walk(idx + 1, budget - abs(e) * cost, exps)
            del exps[v]

    walk(0, max_depth, {})
    return counts
