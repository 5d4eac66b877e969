"""Symbolic words in the enveloping algebra and its x_i-localization.

A UWord is a rational coefficient times an ordered product of generator
powers; a UElement is a formal sum of words.  Words are kept in the free
form (no rewriting modulo the algebra relations): equality of UElements is
only ever tested extensionally, by acting on module elements.

Negative powers are allowed for f-generators only, and only in a context
that inverts the matching variable.

The commutation relations use the invariant bilinear form normalized so
that (e, f) = 1 and (h, h) = 2:

  [a t^m, b t^n] = [a, b] t^{m+n} + delta_{m,-n} m (a, b) c
  [d, a t^m] = m a t^m,   c central.

This normalization is pinned by the realization itself: for example
[e_1, f_{-1}] acts on the highest weight vector by J + K.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple

from .errors import ContextMismatchError, NonNilpotentError
from .modules import ModuleContext, project
from .realization import CENTRAL, DEGREE, E, F, Gen, H, apply_generator
from .ring import Element, Q, X, add, is_zero, qq, scale, scale_var, sub, zero

Factor = Tuple[Gen, int]


@dataclass(frozen=True)
class UWord:
    coeff: Fraction
    factors: Tuple[Factor, ...]


UElement = Tuple[UWord, ...]


def _merge_factors(factors: Iterable[Factor]) -> Tuple[Factor, ...]:
    """Merge adjacent equal generators and drop zero powers."""
    stack: list[Factor] = []
    for g, p in factors:
        if p == 0:
            continue
        if stack and stack[-1][0] == g:
            q = stack[-1][1] + p
            stack.pop()
            if q:
                stack.append((g, q))
        else:
            stack.append((g, p))
    return tuple(stack)


def uword(coeff, factors=()) -> UWord:
    return UWord(qq(coeff), _merge_factors(factors))


def uelement(words: Iterable[UWord]) -> UElement:
    """Combine words with identical factor sequences; drop zeros."""
    acc: dict[Tuple[Factor, ...], Fraction] = {}
    for w in words:
        if w.coeff:
            acc[w.factors] = acc.get(w.factors, Q(0)) + w.coeff
    return tuple(
        UWord(c, f) for f, c in sorted(acc.items()) if c
    )


def u_zero() -> UElement:
    return ()


def u_scalar(c) -> UElement:
    return uelement([uword(c)])


def u_one() -> UElement:
    return u_scalar(1)


def u_gen(g: Gen, power: int = 1, coeff=1) -> UElement:
    return uelement([uword(coeff, ((g, power),))])


def u_is_zero(u: UElement) -> bool:
    return not u


def u_add(*us: UElement) -> UElement:
    return uelement(w for u in us for w in u)


def u_scale(u: UElement, c) -> UElement:
    c = qq(c)
    return uelement(UWord(w.coeff * c, w.factors) for w in u)


def u_mul(a: UElement, b: UElement) -> UElement:
    return uelement(
        uword(wa.coeff * wb.coeff, wa.factors + wb.factors) for wa in a for wb in b
    )


def u_pow(a: UElement, k: int) -> UElement:
    out = u_one()
    for _ in range(k):
        out = u_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# structure constants


def bracket(a: Gen, b: Gen) -> UElement:
    """The Lie bracket [a, b] as a UElement (loop part plus central term)."""
    ka, na = a
    kb, nb = b
    if ka == "c" or kb == "c":
        return u_zero()
    if ka == "d" and kb == "d":
        return u_zero()
    if ka == "d":
        return u_gen(b, coeff=nb) if nb else u_zero()
    if kb == "d":
        return u_gen(a, coeff=-na) if na else u_zero()
    if ka == kb == "e" or ka == kb == "f":
        return u_zero()
    if ka == "e" and kb == "f":
        out = [uword(1, ((H(na + nb), 1),))]
        if na == -nb and na != 0:
            out.append(uword(na, ((CENTRAL, 1),)))
        return uelement(out)
    if ka == "f" and kb == "e":
        return u_scale(bracket(b, a), -1)
    if ka == "h" and kb == "e":
        return u_gen(E(na + nb), coeff=2)
    if ka == "h" and kb == "f":
        return u_gen(F(na + nb), coeff=-2)
    if ka == "e" and kb == "h":
        return u_gen(E(na + nb), coeff=-2)
    if ka == "f" and kb == "h":
        return u_gen(F(na + nb), coeff=2)
    if ka == kb == "h":
        if na == -nb and na != 0:
            return u_gen(CENTRAL, coeff=2 * na)
        return u_zero()
    raise ValueError(f"unknown generator pair {a!r}, {b!r}")


def ad_f(i: int, u: UElement) -> UElement:
    """[f_i, u], extended to words by the Leibniz rule."""
    fi = F(i)
    out: list[UWord] = []
    for w in u:
        for pos, (g, p) in enumerate(w.factors):
            if g[0] in ("f", "c"):
                continue  # f_i commutes with all f-powers and with c
            if p < 0:
                raise ContextMismatchError(
                    "negative powers are only supported on f-generators"
                )
            br = bracket(fi, g)
            if not br:
                continue
            prefix = w.factors[:pos]
            suffix = w.factors[pos + 1:]
            for t in range(p):
                mid_l = prefix + ((g, t),)
                mid_r = ((g, p - 1 - t),) + suffix
                for bw in br:
                    out.append(
                        uword(w.coeff * bw.coeff, mid_l + bw.factors + mid_r)
                    )
    return uelement(out)


def binomial(z: Fraction, j: int) -> Fraction:
    """z (z-1) ... (z-j+1) / j! for rational z."""
    out = Q(1)
    for t in range(j):
        out = out * (z - t) / (t + 1)
    return out


def theta(z, u: UElement, i: int, max_depth: int = 6) -> UElement:
    """The twisting series sum_j binom(z, j) (ad f_i)^j(u) f_i^{-j}.

    The ad-chain of any legal word terminates; exceeding ``max_depth``
    iterations signals a malformed input.
    """
    z = qq(z)
    terms: list[UElement] = []
    cur = u
    j = 0
    while cur:
        if j > max_depth:
            raise NonNilpotentError(
                f"ad f_{i} chain did not terminate within {max_depth} steps"
            )
        cj = binomial(z, j)
        if cj:
            tail = ((F(i), -j),) if j else ()
            terms.append(
                uelement(uword(w.coeff * cj, w.factors + tail) for w in cur)
            )
        cur = ad_f(i, cur)
        j += 1
    return u_add(*terms)


def conjugate_by_f_power(u: UElement, i: int, n: int) -> UElement:
    """f_i^n * u * f_i^{-n} as a formal word transformation."""
    if n == 0:
        return u
    head = ((F(i), n),)
    tail = ((F(i), -n),)
    return uelement(uword(w.coeff, head + w.factors + tail) for w in u)


# ---------------------------------------------------------------------------
# action on module elements


def apply_uelement(u: UElement, v: Element, ctx: ModuleContext) -> Element:
    """Apply each word right-to-left and sum the results."""
    out = zero()
    for w in u:
        cur = v
        for g, p in reversed(w.factors):
            if is_zero(cur):
                break
            if p >= 1:
                for _ in range(p):
                    cur = apply_generator(g, cur, ctx)
                    if is_zero(cur):
                        break
            else:
                if g[0] == "f" and ctx.localized_index == g[1]:
                    cur = project(scale_var(X(g[1]), cur, p), ctx)
                elif g[0] == "c" and ctx.params.K != 0:
                    cur = scale(cur, ctx.params.K ** p)
                else:
                    raise ContextMismatchError(
                        f"negative power of {g} is not invertible in this context"
                    )
        if not is_zero(cur):
            out = add(out, scale(cur, w.coeff))
    return out


def commutator_residual(a: Gen, b: Gen, v: Element, ctx: ModuleContext) -> Element:
    """[a, b] acted two ways: operator commutator minus bracket image.

    Zero for every valid input; any nonzero value disproves the
    homomorphism property on that input.
    """
    ab = apply_generator(a, apply_generator(b, v, ctx), ctx)
    ba = apply_generator(b, apply_generator(a, v, ctx), ctx)
    lie = apply_uelement(bracket(a, b), v, ctx)
    return sub(sub(ab, ba), lie)
