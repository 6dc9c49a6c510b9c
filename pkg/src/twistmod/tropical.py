"""The tropical (min-plus) action of twisted polynomials on Gamma = Z u {inf}.

A polynomial q = sum t^i a_i acts on a valuation gamma through the lower
envelope of the lines gamma -> d^i*gamma + v(a_i).  Jump values are the
integers where at least two lines realize the minimum; away from them the
tropical action predicts v(x.q) exactly.  For separable q the Hensel pair
(h, hens) bounds the balls between which x -> x.q is a bijection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoefficientsNotIntegral, NotSeparable
from .series import INF
from .ore import TwistedPoly

Trop = int | float  # an integer or INF


def trop_act(gamma: Trop, q: TwistedPoly) -> Trop:
    """gamma . q = min_i { d^i gamma + v(a_i) }; INF absorbs everything."""
    if q.is_zero():
        return INF
    if gamma == INF:
        return INF
    d = q.field.d
    return min(d ** i * gamma + v for i, v in q.coeff_valuations())


def trop_threshold(q: TwistedPoly, delta: Trop) -> Trop:
    """Smallest gamma with gamma.q >= delta (the tropical inverse bound).

    For q = 0 any gamma works (returns -INF is never needed: we return delta
    itself as a harmless finite value).  delta = INF requires gamma = INF.
    """
    if delta == INF:
        return INF
    if q.is_zero():
        return delta
    d = q.field.d
    need = -INF
    for i, v in q.coeff_valuations():
        # d^i * gamma + v >= delta  <=>  gamma >= ceil((delta - v) / d^i)
        need = max(need, -((-(delta - v)) // d ** i))
    return int(need)


def jump_set(q: TwistedPoly) -> frozenset:
    """Integer points where the tropical minimum is attained at least twice."""
    if q.is_zero():
        raise ValueError("jump set of the zero polynomial")
    d = q.field.d
    lines = q.coeff_valuations()
    jumps = set()
    for a in range(len(lines)):
        i, vi = lines[a]
        for b in range(a + 1, len(lines)):
            j, vj = lines[b]
            num = vi - vj
            den = d ** j - d ** i
            if num % den:
                continue
            g = num // den
            if trop_act(g, q) == d ** i * g + vi:
                jumps.add(g)
    return frozenset(jumps)


def min_jump(q: TwistedPoly) -> Trop:
    js = jump_set(q)
    return min(js) if js else INF


def max_jump(q: TwistedPoly) -> Trop:
    js = jump_set(q)
    return max(js) if js else -INF


@dataclass(frozen=True)
class HenselData:
    """Hensel ball data for a separable polynomial.

    h and hens refer to the polynomial normalized by its minimal-valuation
    coefficient; ``shift`` records the valuation divided out (0 when the input
    already had integral coefficients with minimum 0).  ``unbounded`` marks the
    degree-0 degenerate case where every ball works; h and hens then carry the
    -window convention.
    """
    h: int
    hens: int
    shift: int
    unbounded: bool = False


def hensel_pair(q: TwistedPoly, normalize: bool = True) -> HenselData:
    """Minimal radii (h, hens) of the source/target Hensel balls of q.

    h = min { gamma : the a_0 line is the strict unique tropical minimum },
    hens = h + v(a_0).  Integral coefficients are required unless
    ``normalize`` divides q by its minimal-valuation coefficient first.
    """
    if not q.is_separable():
        raise NotSeparable()
    vals = dict(q.coeff_valuations())
    vmin = min(vals.values())
    shift = 0
    if vmin < 0:
        if not normalize:
            raise CoefficientsNotIntegral(
                f"coefficient valuation {vmin} < 0; pass normalize=True")
        shift = vmin
        vals = {i: v - vmin for i, v in vals.items()}
    d = q.field.d
    v0 = vals[0]
    higher = [(i, v) for i, v in vals.items() if i > 0]
    if not higher:
        w = q.field.window
        return HenselData(h=-w, hens=-w, shift=shift, unbounded=True)
    # gamma + v0 < d^i gamma + v_i  <=>  gamma > (v0 - v_i) / (d^i - 1)
    h = max((v0 - v) // (d ** i - 1) + 1 for i, v in higher)
    return HenselData(h=h, hens=h + v0, shift=shift)


def lambda_gamma_i(gamma: Trop, i: int, d: int) -> Trop:
    """lambda_i on Gamma: (gamma - i)/d on the matching residue, else 0."""
    if gamma == INF:
        return INF
    return (gamma - i) // d if (gamma - i) % d == 0 else 0


def lambda_gamma(gamma: Trop, d: int) -> Trop:
    """lambda on Gamma: sum_i lambda_i(gamma) = floor(gamma / d)."""
    if gamma == INF:
        return INF
    return gamma // d


def lambda_gamma_iter(gamma: Trop, d: int, s: int) -> Trop:
    """s-fold iterate lambda^s (floor division by d^s)."""
    if gamma == INF:
        return INF
    return gamma // d ** s


def lambda_threshold(delta: Trop, d: int, s: int) -> Trop:
    """Smallest gamma with lambda^s(gamma) >= delta."""
    if delta == INF:
        return INF
    return delta * d ** s


@dataclass(frozen=True)
class Ball:
    """A finite product of valuation predicates P_(gamma_1) x ... x P_(gamma_k)."""

    radii: tuple

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(self.radii))

    @classmethod
    def uniform(cls, radius: Trop, k: int) -> "Ball":
        return cls((radius,) * k)

    @property
    def arity(self) -> int:
        return len(self.radii)

    @property
    def proper(self) -> bool:
        return all(r != INF for r in self.radii)

    def contains(self, xs) -> bool:
        xs = tuple(xs)
        if len(xs) != self.arity:
            raise ValueError("arity mismatch")
        return all(x.in_ball(r) for x, r in zip(xs, self.radii))

    def __str__(self):
        return " x ".join(f"P({r})" if r != INF else "{0}" for r in self.radii)
