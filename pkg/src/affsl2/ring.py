"""Exact sparse Laurent-polynomial arithmetic in countably many variables.

Variables come in two families: x[n] for any integer n, and y[m] for m >= 1.
A variable is a pair (kind, index) with kind 0 for x and 1 for y, so the
natural tuple order (x before y, index ascending) is also the canonical
printing order.

A monomial is a sorted tuple of (variable, exponent) pairs with all
exponents nonzero; the empty tuple is the unit monomial.  Negative
exponents are allowed here -- which modules tolerate them is decided
elsewhere.  An element is a dict mapping monomials to nonzero Fraction
coefficients; the empty dict is zero.

  x[0]^-2 * x[1] * x[4]  ->  (((0, 0), -2), ((0, 1), 1), ((0, 4), 1))
  3/4 * x[0] + y[2]      ->  {(((0, 0), 1),): Fraction(3, 4),
                              (((1, 2), 1),): Fraction(1)}

All functions are pure: inputs are never mutated and results never share
mutable state with them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

Q = Fraction

KIND_X = 0
KIND_Y = 1

Var = Tuple[int, int]
Monomial = Tuple[Tuple[Var, int], ...]
Element = Dict[Monomial, Fraction]

UNIT_MONOMIAL: Monomial = ()


def X(n: int) -> Var:
    """The variable x[n], n any integer."""
    return (KIND_X, n)


def Y(m: int) -> Var:
    """The variable y[m]; the index must be a positive integer."""
    if m < 1:
        raise ValueError(f"y-index must be >= 1, got {m}")
    return (KIND_Y, m)


def qq(value) -> Fraction:
    """Coerce an int, string like '3/4', or Fraction to an exact Fraction."""
    return Fraction(value)


# ---------------------------------------------------------------------------
# monomials


def mono_from_dict(exponents: Dict[Var, int]) -> Monomial:
    """Canonical monomial from a variable -> exponent map (zeros dropped)."""
    return tuple(sorted((v, e) for v, e in exponents.items() if e != 0))


def mono_exp(m: Monomial, v: Var) -> int:
    for var, e in m:
        if var == v:
            return e
    return 0


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return mono_from_dict(d)


def mono_shift(m: Monomial, v: Var, k: int) -> Monomial:
    """Add k to the exponent of v in m."""
    if k == 0:
        return m
    d = dict(m)
    d[v] = d.get(v, 0) + k
    return mono_from_dict(d)


def mono_pow(m: Monomial, k: int) -> Monomial:
    return tuple((v, e * k) for v, e in m) if k != 0 else UNIT_MONOMIAL


# ---------------------------------------------------------------------------
# elements


def zero() -> Element:
    return {}


def const(c) -> Element:
    c = Q(c)
    return {UNIT_MONOMIAL: c} if c else {}


def one() -> Element:
    return const(1)


def var(v: Var) -> Element:
    return {((v, 1),): Q(1)}


def monomial(exponents: Dict[Var, int], coeff=1) -> Element:
    c = Q(coeff)
    return {mono_from_dict(exponents): c} if c else {}


def from_terms(terms: Iterable[Tuple[Monomial, Fraction]]) -> Element:
    out: Element = {}
    for m, c in terms:
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def is_zero(a: Element) -> bool:
    return not a


def add(a: Element, b: Element) -> Element:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            del out[m]
    return out


def neg(a: Element) -> Element:
    return {m: -c for m, c in a.items()}


def sub(a: Element, b: Element) -> Element:
    return add(a, neg(b))


def scale(a: Element, c) -> Element:
    c = Q(c)
    if not c:
        return {}
    return {m: c * v for m, v in a.items()}


def mul(a: Element, b: Element) -> Element:
    out: Element = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            s = out.get(m, 0) + ca * cb
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def power(a: Element, k: int) -> Element:
    """a**k.  Negative k requires a single invertible term."""
    if k == 0:
        return one()
    if k < 0:
        if len(a) != 1:
            raise ValueError("negative power of a non-monomial element")
        (m, c), = a.items()
        return {mono_pow(m, k): c ** k}
    out = a
    for _ in range(k - 1):
        out = mul(out, a)
    return out


def diff(v: Var, a: Element, shift: Fraction = Q(0)) -> Element:
    """Formal partial derivative in v.

    ``shift`` models a fractional offset of the stored exponent of v: a term
    with stored exponent e behaves like actual exponent e + shift, so it
    contributes a factor (e + shift) and the stored exponent drops by one.
    Terms with e + shift == 0 vanish.
    """
    out: Element = {}
    for m, c in a.items():
        e = mono_exp(m, v) + shift
        if e == 0:
            continue
        nm = mono_shift(m, v, -1)
        s = out.get(nm, 0) + c * e
        if s:
            out[nm] = s
        else:
            del out[nm]
    return out


def scale_var(v: Var, a: Element, k: int) -> Element:
    """Multiply by v**k: add k to the v-exponent of every term."""
    if k == 0:
        return dict(a)
    return {mono_shift(m, v, k): c for m, c in a.items()}


# ---------------------------------------------------------------------------
# support queries


def x_support(a: Element) -> list[int]:
    """Sorted x-indices occurring in any term."""
    seen = set()
    for m in a:
        for (kind, idx), _ in m:
            if kind == KIND_X:
                seen.add(idx)
    return sorted(seen)


def y_support(a: Element) -> list[int]:
    seen = set()
    for m in a:
        for (kind, idx), _ in m:
            if kind == KIND_Y:
                seen.add(idx)
    return sorted(seen)


def all_indices(a: Element) -> list[int]:
    out = set()
    for m in a:
        for (_, idx), _ in m:
            out.add(idx)
    return sorted(out)


def sorted_terms(a: Element) -> list[Tuple[Monomial, Fraction]]:
    """Terms in canonical order (monomials compared as tuples)."""
    return sorted(a.items())
