"""Terms in the module language enriched with the lambda coordinate functions.

Every such term over a t-decomposable module normalizes to
sum_i sum_w lambda_w(x_i) . r_iw with r_iw in R, where w is a finite tuple of
coordinate indices applied first-entry-first.  The class below keeps that
normal form directly and implements the closure operations needed by the
rewriting pipeline: addition, right scalar action, and application of a
lambda function to the whole term.

The lambda-of-action rewrite uses, for a constant a and the monomial t^m a:

    lambda_i(z . a)     = sum_j lambda_j(z) . c_ij(a)
    lambda_i(z . t^m a) = z . (t^(m-1) c_i0(a))          (m >= 1)

with c_ij(a) = lambda_(i-j)(a) for j <= i and lambda_(i-j+d)(a) * X for j > i,
the base-d carry decomposition of multiplication.
"""

from __future__ import annotations

from .series import FieldConfig, LaurentSeries
from .ore import TwistedPoly, act


def _carry_coeff(a: LaurentSeries, i: int, j: int) -> LaurentSeries:
    d = a.field.d
    if j <= i:
        return a.lam(i - j)
    return a.lam(i - j + d).shift(1)


class LambdaTerm:
    """Normal form sum over (variable, lambda-index-tuple) of right R-scalars."""

    __slots__ = ("field", "arity", "terms")

    def __init__(self, field: FieldConfig, arity: int, terms=None):
        self.field = field
        self.arity = arity
        clean = {}
        for key, r in (terms or {}).items():
            if not r.is_zero():
                var, w = key
                if not 0 <= var < arity:
                    raise ValueError(f"variable index {var} out of range")
                prev = clean.get((var, tuple(w)))
                clean[(var, tuple(w))] = prev + r if prev is not None else r
        self.terms = {k: r for k, r in clean.items() if not r.is_zero()}

    # -- constructors --

    @classmethod
    def variable(cls, field, arity, var, r=None):
        r = r if r is not None else TwistedPoly.one(field)
        return cls(field, arity, {(var, ()): r})

    @classmethod
    def zero(cls, field, arity):
        return cls(field, arity, {})

    # -- algebra --

    def _check(self, other):
        if self.field != other.field or self.arity != other.arity:
            raise ValueError("term context mismatch")

    def __add__(self, other: "LambdaTerm") -> "LambdaTerm":
        self._check(other)
        out = dict(self.terms)
        for key, r in other.terms.items():
            out[key] = out[key] + r if key in out else r
        return LambdaTerm(self.field, self.arity, out)

    def __neg__(self):
        return LambdaTerm(self.field, self.arity,
                          {k: -r for k, r in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def act(self, r: TwistedPoly) -> "LambdaTerm":
        """Right scalar action term . r."""
        if r.is_zero():
            return LambdaTerm.zero(self.field, self.arity)
        return LambdaTerm(self.field, self.arity,
                          {k: s * r for k, s in self.terms.items()})

    def lam(self, i: int) -> "LambdaTerm":
        """Apply lambda_i to the whole term, renormalizing."""
        field = self.field
        d = field.d
        out = {}

        def add(key, r):
            if key in out:
                out[key] = out[key] + r
            else:
                out[key] = r

        for (var, w), r in self.terms.items():
            for m, a in r.monomials():
                if m >= 1:
                    c = _carry_coeff(a, i, 0)
                    if not c.is_exact_zero():
                        add((var, w), TwistedPoly.t_pow(field, m - 1, c))
                else:
                    for j in range(d):
                        c = _carry_coeff(a, i, j)
                        if not c.is_exact_zero():
                            add((var, w + (j,)), TwistedPoly.constant(c))
        return LambdaTerm(field, self.arity, out)

    def lam_coord(self, w, level: int) -> "LambdaTerm":
        d = self.field.d
        out = self
        for _ in range(level):
            out = out.lam(w % d)
            w //= d
        return out

    # -- normalization level --

    def level(self) -> int:
        return max((len(w) for (_, w) in self.terms), default=0)

    def lift_to_level(self, s: int) -> "LambdaTerm":
        """Express every component with lambda tuples of length exactly s."""
        field = self.field
        d = field.d
        out = {}
        for (var, w), r in self.terms.items():
            gap = s - len(w)
            if gap < 0:
                raise ValueError("term already deeper than the target level")
            if gap == 0:
                key = (var, w)
                out[key] = out[key] + r if key in out else r
                continue
            for vint in range(d ** gap):
                digits = []
                v = vint
                for _ in range(gap):
                    digits.append(v % d)
                    v //= d
                mult = TwistedPoly.t_pow(field, gap, LaurentSeries.x_pow(field, vint))
                key = (var, w + tuple(digits))
                add = mult * r
                out[key] = out[key] + add if key in out else add
        return LambdaTerm(field, self.arity, out)

    # -- semantics --

    def evaluate(self, xs) -> LaurentSeries:
        xs = tuple(xs)
        if len(xs) != self.arity:
            raise ValueError("arity mismatch")
        out = LaurentSeries.zero(self.field)
        for (var, w), r in self.terms.items():
            z = xs[var]
            for i in w:
                z = z.lam(i)
            out = out + act(z, r)
        return out

    def is_identically_zero(self) -> bool:
        """Zero as a function on every t-decomposable module."""
        if not self.terms:
            return True
        s = self.level()
        lifted = self.lift_to_level(s)
        return all(r.is_zero() or all(c.known_zero() for c in r.coeffs)
                   for r in lifted.terms.values())

    def scalars(self):
        return tuple(self.terms.values())

    def max_level(self) -> int:
        return self.level()

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (var, w), r in sorted(self.terms.items(),
                                  key=lambda kv: (kv[0][0], len(kv[0][1]), kv[0][1])):
            head = f"x{var}" if self.arity > 1 else "x"
            for i in w:
                head = f"L{i}({head})"
            parts.append(f"{head}.({r})")
        return " + ".join(parts)

    def __repr__(self):
        return f"<lterm {self}>"
