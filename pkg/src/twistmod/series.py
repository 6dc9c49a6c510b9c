"""Exact arithmetic for F_d and truncated Laurent series over F_d, d = p^k.

A series is stored as ``(val, coeffs, prec)``: ``coeffs`` are the coefficients
of X^val .. X^(val+len(coeffs)-1), and the element is known exactly modulo
X^prec.  ``prec == INF`` marks an exact Laurent polynomial; in particular the
exact zero is the empty series with infinite precision.  A series whose known
coefficients are all zero but whose precision is finite is *not* the zero
element -- it has an undetermined valuation, and operations that need the
leading term raise InsufficientPrecision instead of guessing.

Coefficients are integers 0..d-1.  For k = 1 they are residues mod p; for
k > 1 they encode polynomials over F_p in base p, reduced modulo a fixed
irreducible polynomial.  Since c^d = c on F_d, the chosen Frobenius power
x -> x^d fixes every coefficient, so Frobenius on series is a pure exponent
remap n -> n*d.
"""

from __future__ import annotations

import math
from .errors import DivisionByZero, InsufficientPrecision, ParseError

INF = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- dense F_p[x] helpers used only to build the F_{p^k} tables ------------

def _poly_mul_mod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    # reduce modulo the monic polynomial `mod`
    k = len(mod) - 1
    for i in range(len(res) - 1, k - 1, -1):
        c = res[i]
        if c:
            for j in range(k + 1):
                res[i - k + j] = (res[i - k + j] - c * mod[j]) % p
    res = res[:k]
    while res and res[-1] == 0:
        res.pop()
    return res


def _find_irreducible(p: int, k: int):
    """Smallest monic irreducible of degree k over F_p (coefficients low-first)."""
    if k == 1:
        return [0, 1]
    for enc in range(p ** k):
        coeffs = [(enc // p ** i) % p for i in range(k)] + [1]
        if _poly_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")


def _poly_irreducible(f, p):
    # no roots, then trial division by monic polynomials of degree <= deg/2
    k = len(f) - 1
    for r in range(p):
        if sum(c * r ** i for i, c in enumerate(f)) % p == 0:
            return False
    for deg in range(2, k // 2 + 1):
        for enc in range(p ** deg):
            g = [(enc // p ** i) % p for i in range(deg)] + [1]
            if _poly_divides(g, f, p):
                return False
    return True


def _poly_divides(g, f, p):
    rem = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(rem) - 1 >= dg and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dg:
            break
        c = rem[-1] * inv_lead % p
        shift = len(rem) - 1 - dg
        for j in range(dg + 1):
            rem[shift + j] = (rem[shift + j] - c * g[j]) % p
    return not any(rem)


class FieldConfig:
    """Global context: the field F_d with d = p^k, plus working defaults.

    ``precision`` is the default number of coefficients carried by inexact
    results (e.g. inverses of exact polynomials); ``window`` is the default
    half-width of coefficient windows used by searches and by the degree-0
    Hensel-data convention.
    """

    def __init__(self, p: int, k: int = 1, precision: int = 64, window: int = 32,
                 prec_cap: int = None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if k < 1:
            raise ValueError("k must be >= 1")
        if precision < 16:
            raise ValueError("precision must be >= 16")
        self.p = p
        self.k = k
        self.d = p ** k
        self.precision = precision
        self.window = window
        # finite precisions are clamped here; exact values are never clamped.
        # Reporting less precision than derivable is sound and keeps Frobenius
        # powers (which scale precision by d^i) from blowing up storage.
        self.prec_cap = prec_cap if prec_cap is not None else max(4 * precision, 192)
        if k > 1:
            self.modulus = tuple(_find_irreducible(p, k))
            self._build_tables()

    def _build_tables(self):
        p, k, d = self.p, self.k, self.d
        mod = list(self.modulus)

        def dec(e):
            return [(e // p ** i) % p for i in range(k)]

        def enc(poly):
            return sum(c * p ** i for i, c in enumerate(poly[:k]))

        self._mul = [[0] * d for _ in range(d)]
        for a in range(d):
            pa = dec(a)
            for b in range(a, d):
                val = enc(_poly_mul_mod(pa, dec(b), mod, p) or [0])
                self._mul[a][b] = val
                self._mul[b][a] = val
        self._inv = [0] * d
        for a in range(1, d):
            for b in range(1, d):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    # -- element arithmetic (integers 0..d-1) --

    def f_add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p, k = self.p, self.k
        out = 0
        mult = 1
        for _ in range(k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def f_neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p, k = self.p, self.k
        out = 0
        mult = 1
        for _ in range(k):
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def f_sub(self, a: int, b: int) -> int:
        return self.f_add(a, self.f_neg(b))

    def f_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        return self._mul[a][b]

    def f_inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_d")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._inv[a]

    def f_from_int(self, n: int) -> int:
        return n % self.p if self.k == 1 else self._embed_int(n)

    def _embed_int(self, n: int) -> int:
        return n % self.p  # prime subfield embedding

    @property
    def generator(self) -> int:
        """The class of the defining root for k > 1 (encoding p)."""
        if self.k == 1:
            raise ValueError("no extension generator for k = 1")
        return self.p

    def f_pow(self, a: int, n: int) -> int:
        out = 1
        for _ in range(n):
            out = self.f_mul(out, a)
        return out

    def __repr__(self):
        return f"FieldConfig(p={self.p}, k={self.k})"

    def __eq__(self, other):
        return (isinstance(other, FieldConfig)
                and (self.p, self.k) == (other.p, other.k))

    def __hash__(self):
        return hash((self.p, self.k))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class LaurentSeries:
    """Truncated Laurent series over F_d with explicit precision tracking."""

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field: FieldConfig, val: int, coeffs, prec=INF):
        coeffs = list(coeffs)
        if prec != INF:
            prec = min(int(prec), field.prec_cap)
        # truncate anything at or above the precision bound
        if prec != INF and val + len(coeffs) > prec:
            coeffs = coeffs[:max(0, prec - val)]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            val += 1
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            val = 0
        self.field = field
        self.val = val
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # -- constructors --

    @classmethod
    def zero(cls, field: FieldConfig) -> "LaurentSeries":
        return cls(field, 0, (), INF)

    @classmethod
    def one(cls, field: FieldConfig) -> "LaurentSeries":
        return cls(field, 0, (1,), INF)

    @classmethod
    def x_pow(cls, field: FieldConfig, n: int, coeff: int = 1) -> "LaurentSeries":
        return cls(field, n, (coeff % field.d,), INF)

    @classmethod
    def from_dict(cls, field: FieldConfig, terms: dict, prec=INF) -> "LaurentSeries":
        if not terms:
            return cls(field, 0, (), prec)
        lo = min(terms)
        hi = max(terms)
        coeffs = [terms.get(n, 0) for n in range(lo, hi + 1)]
        return cls(field, lo, coeffs, prec)

    @classmethod
    def fuzzy_zero(cls, field: FieldConfig, prec: int) -> "LaurentSeries":
        """Zero modulo X^prec: all known coefficients vanish, tail unknown."""
        return cls(field, 0, (), prec)

    # -- structure queries --

    @property
    def exact(self) -> bool:
        return self.prec == INF

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.exact

    def known_zero(self) -> bool:
        """True when every stored coefficient vanishes (possibly only mod X^prec)."""
        return not self.coeffs

    def valuation(self):
        """Index of the first nonzero coefficient; INF for the exact zero."""
        if self.coeffs:
            return self.val
        if self.exact:
            return INF
        raise InsufficientPrecision(
            f"element is zero modulo X^{self.prec}; valuation undetermined")

    def val_lower_bound(self):
        """A sound lower bound for the valuation (INF only for exact zero)."""
        if self.coeffs:
            return self.val
        return INF if self.exact else self.prec

    def coeff(self, n: int) -> int:
        if self.prec != INF and n >= self.prec:
            raise InsufficientPrecision(f"coefficient of X^{n} beyond precision {self.prec}")
        if self.val <= n < self.val + len(self.coeffs):
            return self.coeffs[n - self.val]
        return 0

    def leading_coeff(self) -> int:
        v = self.valuation()
        if v == INF:
            raise DivisionByZero("leading coefficient of zero")
        return self.coeffs[0]

    def support(self):
        return tuple(self.val + i for i, c in enumerate(self.coeffs) if c)

    # -- arithmetic --

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("mixed field configurations")

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        F = self.field
        prec = min(self.prec, other.prec)
        terms = {}
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                if c:
                    n = s.val + i
                    terms[n] = F.f_add(terms.get(n, 0), c)
        return LaurentSeries.from_dict(F, terms, prec)

    def __neg__(self) -> "LaurentSeries":
        F = self.field
        return LaurentSeries(F, self.val, [F.f_neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        F = self.field
        prec = min(self.prec + other.val_lower_bound(),
                   other.prec + self.val_lower_bound())
        if not self.coeffs or not other.coeffs:
            if self.is_exact_zero() or other.is_exact_zero():
                return LaurentSeries.zero(F)
            return LaurentSeries(F, 0, (), prec)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.f_add(out[i + j], F.f_mul(a, b))
        return LaurentSeries(F, self.val + other.val, out, prec)

    def scale(self, c: int) -> "LaurentSeries":
        F = self.field
        c %= F.d
        if c == 0:
            return LaurentSeries.zero(F) if self.exact else LaurentSeries(F, 0, (), self.prec)
        return LaurentSeries(F, self.val, [F.f_mul(a, c) for a in self.coeffs], self.prec)

    def shift(self, n: int) -> "LaurentSeries":
        """Multiply by X^n."""
        return LaurentSeries(self.field, self.val + n, self.coeffs,
                             self.prec if self.prec == INF else self.prec + n)

    def inverse(self, prec_target=None) -> "LaurentSeries":
        """Multiplicative inverse, exact modulo X^(derived precision)."""
        F = self.field
        if self.is_exact_zero():
            raise DivisionByZero("inverse of exact zero")
        v = self.valuation()  # raises InsufficientPrecision on fuzzy zero
        # 1/b known modulo X^(prec - 2v); exact operands get the default budget
        if self.prec == INF:
            nterms = prec_target if prec_target is not None else F.precision
        else:
            nterms = self.prec - self.val
            if prec_target is not None:
                nterms = min(nterms, prec_target)
        if nterms <= 0:
            raise InsufficientPrecision("no known coefficients for inversion")
        lead_inv = F.f_inv(self.coeffs[0])
        # long division of 1 by the normalized unit part
        out = [0] * nterms
        rem = {0: 1}
        for n in range(nterms):
            c = F.f_mul(rem.get(n, 0), lead_inv)
            out[n] = c
            if c:
                for i, a in enumerate(self.coeffs):
                    if a:
                        rem[n + i] = F.f_sub(rem.get(n + i, 0), F.f_mul(c, a))
        res_prec = INF if (self.exact and len(self.coeffs) == 1) else nterms - self.val
        return LaurentSeries(F, -self.val, out, res_prec)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        inv = other.inverse()
        res = self * inv
        return res

    def frobenius(self, i: int = 1) -> "LaurentSeries":
        """a^(d^i): coefficients are fixed, exponents scale by d^i."""
        if i == 0:
            return self
        if i < 0:
            raise ValueError("negative Frobenius power")
        D = self.field.d ** i
        prec = self.prec if self.prec == INF else self.prec * D
        terms = {(self.val + j) * D: c for j, c in enumerate(self.coeffs) if c}
        return LaurentSeries.from_dict(self.field, terms, prec)

    def lam(self, i: int) -> "LaurentSeries":
        """Coordinate d-th root: picks exponents n = i (mod d), maps n -> (n-i)/d."""
        d = self.field.d
        if not 0 <= i < d:
            raise ValueError(f"lambda index {i} out of range")
        prec = self.prec if self.prec == INF else _ceil_div(self.prec - i, d)
        terms = {}
        for j, c in enumerate(self.coeffs):
            n = self.val + j
            if c and n % d == i % d:
                terms[(n - i) // d] = c
        return LaurentSeries.from_dict(self.field, terms, prec)

    def lam_coord(self, w, level: int = None) -> "LaurentSeries":
        """Iterated lambda coordinate; w is an int index or a tuple, first-applied first."""
        d = self.field.d
        if isinstance(w, int):
            if level is None:
                raise ValueError("integer index needs an explicit level")
            digits = []
            for _ in range(level):
                digits.append(w % d)
                w //= d
            w = tuple(digits)
        out = self
        for i in w:
            out = out.lam(i)
        return out

    def nth_root_map(self, n: int) -> "LaurentSeries":
        """Sum of level-n coordinates against the basis X^w: a = sum_w root(a)_w^(d^n) X^w."""
        d = self.field.d
        out = LaurentSeries.zero(self.field)
        for w in range(d ** n):
            out = out + self.lam_coord(w, n).shift(w)
        return out

    def dth_root(self, i: int = 1) -> "LaurentSeries":
        """Inverse Frobenius: defined when the known support lies in d^i * Z."""
        D = self.field.d ** i
        terms = {}
        for j, c in enumerate(self.coeffs):
            n = self.val + j
            if c:
                if n % D:
                    raise InsufficientPrecision(
                        f"support index {n} not divisible by d^{i}; no d^{i}-th root")
                terms[n // D] = c
        prec = self.prec if self.prec == INF else _ceil_div(self.prec, D)
        return LaurentSeries.from_dict(self.field, terms, prec)

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        return LaurentSeries(self.field, self.val, self.coeffs, prec)

    # -- comparisons --

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field == other.field and self.val == other.val
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.field, self.val, self.coeffs, self.prec))

    def _coeff_raw(self, n: int) -> int:
        if self.val <= n < self.val + len(self.coeffs):
            return self.coeffs[n - self.val]
        return 0

    def matches(self, other: "LaurentSeries") -> bool:
        """Agreement of all coefficients known to both sides."""
        self._check(other)
        prec = min(self.prec, other.prec)
        for n in set(self.support()) | set(other.support()):
            if n < prec and self._coeff_raw(n) != other._coeff_raw(n):
                return False
        return True

    def in_ball(self, gamma) -> bool:
        """Membership in P_gamma = {x : v(x) >= gamma}, sound at known precision."""
        if gamma == INF:
            return self.known_zero()
        if self.coeffs:
            return self.val >= gamma
        if self.exact:
            return True
        if self.prec >= gamma:
            return True
        raise InsufficientPrecision(
            f"cannot certify membership in P_{gamma} at precision {self.prec}")

    # -- text I/O --

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            n = self.val + j
            if n == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}X^{n}" if n != 1 else f"{head}X")
        body = " + ".join(parts) if parts else "0"
        if self.prec == INF:
            return body
        return f"{body} + O(X^{self.prec})"

    def __repr__(self):
        return f"<series {self}>"

    def to_json(self):
        return {"val": self.val, "coeffs": list(self.coeffs),
                "prec": None if self.prec == INF else self.prec}


# -- parsing ---------------------------------------------------------------

def _tokenize_series(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            tokens.append((ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append((text[i:j], i))
            i = j
        elif ch in ("X", "x", "g"):
            tokens.append((ch.replace("x", "X"), i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


def parse_series(field: FieldConfig, text: str) -> LaurentSeries:
    """Parse sums of c*X^n with integer coefficients (g^j powers for k > 1)."""
    tokens = _tokenize_series(text)
    if not tokens:
        raise ParseError("empty series literal")
    pos = 0
    terms = {}

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_exponent():
        nonlocal pos
        neg = False
        if peek() == "-":
            take()
            neg = True
        tok, at = take() if pos < len(tokens) else (None, len(text))
        if tok is None or not tok.isdigit():
            raise ParseError("expected integer exponent", at)
        return -int(tok) if neg else int(tok)

    sign = 1
    while pos < len(tokens):
        tok, at = take()
        if tok == "+":
            sign = 1
            continue
        if tok == "-":
            sign = -1
            continue
        coeff = 1
        exp = None
        # parse one term: [coeff *] [X [^ n]]
        while True:
            if tok.isdigit():
                coeff = field.f_mul(coeff, field.f_from_int(int(tok)))
            elif tok == "g":
                if field.k == 1:
                    raise ParseError("generator g needs k > 1", at)
                gpow = 1
                if peek() == "^":
                    take()
                    gpow = parse_exponent()
                    if gpow < 0:
                        raise ParseError("negative generator power", at)
                coeff = field.f_mul(coeff, field.f_pow(field.generator, gpow))
            elif tok == "X":
                exp = 1
                if peek() == "^":
                    take()
                    exp = parse_exponent()
            else:
                raise ParseError(f"unexpected token {tok!r}", at)
            if peek() == "*":
                take()
                tok, at = take() if pos < len(tokens) else (None, len(text))
                if tok is None:
                    raise ParseError("dangling '*'", at)
                continue
            break
        n = exp if exp is not None else 0
        c = coeff if sign == 1 else field.f_neg(coeff)
        terms[n] = field.f_add(terms.get(n, 0), c)
        sign = 1
    return LaurentSeries.from_dict(field, terms)
