"""The ring R of Frobenius-twisted polynomials over truncated Laurent series.

An element q = t^n a_n + ... + t a_1 + a_0 is stored low-degree-first as a
tuple of LaurentSeries.  Multiplication follows the commutation rule
a t = t a^phi (phi the d-power Frobenius), so that the action x.q =
sum_i x^(d^i) a_i on series satisfies x.(qr) = (x.q).r.  The ring is right
Euclidean; left division is deliberately not provided (R is not left Ore
when phi is not onto).
"""

from __future__ import annotations

from .errors import DivisionByZero, InsufficientPrecision, ParseError
from .series import INF, FieldConfig, LaurentSeries


class TwistedPoly:
    """q = sum_i t^i a_i with LaurentSeries coefficients, a_deg nonzero."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldConfig, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].known_zero() and coeffs[-1].exact:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    # -- constructors --

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (LaurentSeries.one(field),))

    @classmethod
    def t_pow(cls, field, n, coeff=None):
        c = coeff if coeff is not None else LaurentSeries.one(field)
        return cls(field, [LaurentSeries.zero(field)] * n + [c])

    @classmethod
    def constant(cls, a: LaurentSeries):
        return cls(a.field, (a,))

    @classmethod
    def from_x_power(cls, field, n):
        return cls.constant(LaurentSeries.x_pow(field, n))

    # -- structure --

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def known_zero(self) -> bool:
        """All coefficients vanish at their known precision (zero up to truncation)."""
        return all(c.known_zero() for c in self.coeffs)

    def is_separable(self) -> bool:
        return bool(self.coeffs) and not self.coeffs[0].known_zero()

    def coeff(self, i: int) -> LaurentSeries:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return LaurentSeries.zero(self.field)

    def lead(self) -> LaurentSeries:
        if not self.coeffs:
            raise DivisionByZero("leading coefficient of the zero polynomial")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.lead().matches(LaurentSeries.one(self.field)) \
            and self.lead().exact

    def monomials(self):
        return [(i, a) for i, a in enumerate(self.coeffs) if not a.known_zero()]

    # -- ring operations --

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("mixed field configurations")

    def __add__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return TwistedPoly(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return TwistedPoly(self.field, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TwistedPoly") -> "TwistedPoly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return TwistedPoly.zero(self.field)
        Z = LaurentSeries.zero(self.field)
        out = [Z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, b in enumerate(other.coeffs):
            if b.known_zero() and b.exact:
                continue
            for i, a in enumerate(self.coeffs):
                if a.known_zero() and a.exact:
                    continue
                out[i + j] = out[i + j] + a.frobenius(j) * b
        return TwistedPoly(self.field, out)

    def scale_right(self, c: LaurentSeries) -> "TwistedPoly":
        """q * c for a constant c: multiplies every coefficient on the right."""
        return TwistedPoly(self.field, [a * c for a in self.coeffs])

    def scale_left(self, c: LaurentSeries) -> "TwistedPoly":
        """c * q for a constant c: coefficient i picks up c^(d^i)."""
        return TwistedPoly(self.field, [c.frobenius(i) * a for i, a in enumerate(self.coeffs)])

    def t_shift(self, n: int) -> "TwistedPoly":
        """t^n * q: shifts degrees without twisting (coefficients unchanged)."""
        Z = LaurentSeries.zero(self.field)
        return TwistedPoly(self.field, [Z] * n + list(self.coeffs))

    def __pow__(self, n: int) -> "TwistedPoly":
        out = TwistedPoly.one(self.field)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TwistedPoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def matches(self, other: "TwistedPoly") -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self.coeff(i).matches(other.coeff(i)) for i in range(n))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            a = self.coeff(i)
            if a.known_zero() and a.exact:
                continue
            body = str(a)
            wrap = f"({body})" if (" " in body or a.val != 0 or len(a.coeffs) > 1) else body
            if i == 0:
                parts.append(wrap)
            elif i == 1:
                parts.append("t" if body == "1" else f"t*{wrap}")
            else:
                parts.append(f"t^{i}" if body == "1" else f"t^{i}*{wrap}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<rpoly {self}>"

    # -- valuations of coefficients (used by the tropical layer) --

    def coeff_valuations(self):
        """List of (i, v(a_i)) over the nonzero monomials; raises on fuzzy coefficients."""
        out = []
        for i, a in self.monomials():
            out.append((i, a.valuation()))
        return out


# -- action on series -------------------------------------------------------

def act(x: LaurentSeries, q: TwistedPoly) -> LaurentSeries:
    """x.q = sum_i x^(d^i) a_i, the additive-polynomial action."""
    out = LaurentSeries.zero(x.field)
    for i, a in enumerate(q.coeffs):
        if not (a.known_zero() and a.exact):
            out = out + x.frobenius(i) * a
    return out


def act_tuple(xs, Q) -> tuple:
    """(x_1..x_k).Q for an iterable of rows Q[i][j]: column j gets sum_i x_i.Q[i][j]."""
    xs = tuple(xs)
    k = len(xs)
    ncols = len(Q[0]) if k else 0
    field = xs[0].field
    out = []
    for j in range(ncols):
        s = LaurentSeries.zero(field)
        for i in range(k):
            s = s + act(xs[i], Q[i][j])
        out.append(s)
    return tuple(out)


# -- right Euclidean division ------------------------------------------------

def divmod_right(r: TwistedPoly, q: TwistedPoly):
    """Quotient and remainder with r = q*quot + rem, deg rem < deg q."""
    r._check(q)
    if q.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    field = r.field
    quot = TwistedPoly.zero(field)
    rem = r
    dq = q.degree
    lead_q = q.lead()
    while not rem.is_zero() and rem.degree >= dq:
        j = rem.degree - dq
        # top coefficient of q*(t^j c) is lead_q^(d^j) * c
        denom = lead_q.frobenius(j)
        try:
            c = rem.lead() * denom.inverse()
        except InsufficientPrecision:
            raise InsufficientPrecision(
                "cannot invert leading coefficient during division")
        term = TwistedPoly.t_pow(field, j, c)
        quot = quot + term
        new_rem = rem - q * term
        if not new_rem.is_zero() and new_rem.degree >= rem.degree:
            # the cancellation must be visible at current precision
            if new_rem.lead().known_zero():
                new_rem = TwistedPoly(field, new_rem.coeffs[:rem.degree])
            else:
                raise InsufficientPrecision("division failed to reduce degree")
        rem = new_rem
    return quot, rem


def gcd_lcm(q: TwistedPoly, r: TwistedPoly):
    """Monic right gcd and a least common multiple via the extended Euclid chain.

    gcd right-divides both inputs (zero remainder under divmod_right) and
    lcm = q*a = r*b for the final cofactor pair, with
    deg lcm = deg q + deg r - deg gcd.
    """
    q._check(r)
    if q.is_zero() or r.is_zero():
        raise DivisionByZero("gcd/lcm of zero")
    field = q.field
    one = TwistedPoly.one(field)
    zero = TwistedPoly.zero(field)
    # maintain r_i = q*s_i + r*t_i
    r0, s0, t0 = q, one, zero
    r1, s1, t1 = r, zero, one
    while not r1.is_zero():
        u, rem = divmod_right(r0, r1)
        r0, s0, t0, r1, s1, t1 = r1, s1, t1, rem, s0 - s1 * u, t0 - t1 * u
    g = r0
    # monic normalization
    lead_inv = g.lead().inverse()
    g = g.scale_right(lead_inv)
    lcm = q * s1
    alt = r * t1
    if not lcm.matches(-alt) and not lcm.matches(alt):
        raise InsufficientPrecision("lcm cofactor check failed at current precision")
    if not lcm.is_zero():
        lcm = lcm.scale_right(lcm.lead().inverse())
    return g, lcm


def right_divides(q: TwistedPoly, g: TwistedPoly) -> bool:
    """True when q = g*u exactly (remainder known zero)."""
    _, rem = divmod_right(q, g)
    return all(c.known_zero() for c in rem.coeffs)


# -- alpha-basis decomposition and the n-th root map -------------------------

def alpha_basis(field: FieldConfig, n: int):
    """The level-n valuation-independent basis (X^0, X^1, ..., X^(d^n - 1))."""
    return [LaurentSeries.x_pow(field, w) for w in range(field.d ** n)]


def alpha_decompose(q: TwistedPoly, n: int):
    """Components q_w with q = sum_w q_w X^w, indices w in 0..d^n-1.

    Coefficient-wise: a = sum_w c_w(a)^(d^n) X^w, so the component polynomials
    are q_w = sum_i t^i c_w(a_i)^(d^n).
    """
    field = q.field
    count = field.d ** n
    comps = []
    for w in range(count):
        coeffs = [a.lam_coord(w, n).frobenius(n) for a in q.coeffs]
        comps.append(TwistedPoly(field, coeffs))
    return comps


def nth_root_map(q: TwistedPoly, n: int) -> TwistedPoly:
    """The additive root map applied coefficient-wise: a -> sum_w c_w(a) X^w.

    Satisfies t^n q = sum_w nth_root_map(q_w, n) t^n X^w for the components
    q_w of alpha_decompose(q, n), and preserves addition.
    """
    return TwistedPoly(q.field, [a.nth_root_map(n) for a in q.coeffs])


# -- parsing -----------------------------------------------------------------

def parse_poly(field: FieldConfig, text: str) -> TwistedPoly:
    """Parse R-element syntax such as 't^2*(X+1) + t*X^-1 + 1'."""
    return _PolyParser(field, text).parse()


class _PolyParser:
    def __init__(self, field, text):
        self.field = field
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take_int(self):
        self.skip_ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def parse(self) -> TwistedPoly:
        out = self.parse_sum()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return out

    def parse_sum(self) -> TwistedPoly:
        out = self.parse_term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                out = out + self.parse_term()
            elif ch == "-":
                self.pos += 1
                out = out - self.parse_term()
            else:
                return out

    def parse_term(self) -> TwistedPoly:
        factors = [self.parse_factor()]
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.parse_factor())
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out

    def parse_factor(self) -> TwistedPoly:
        ch = self.peek()
        if ch is None:
            self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            inner = self.parse_sum()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "t":
            self.pos += 1
            n = 1
            if self.peek() == "^":
                self.pos += 1
                n = self.take_int()
                if n < 0:
                    self.error("negative t power")
            return TwistedPoly.t_pow(self.field, n)
        if ch in ("X", "x"):
            self.pos += 1
            n = 1
            if self.peek() == "^":
                self.pos += 1
                n = self.take_int()
            return TwistedPoly.from_x_power(self.field, n)
        if ch == "g":
            self.pos += 1
            n = 1
            if self.peek() == "^":
                self.pos += 1
                n = self.take_int()
                if n < 0:
                    self.error("negative generator power")
            c = self.field.f_pow(self.field.generator, n)
            return TwistedPoly.constant(LaurentSeries(self.field, 0, (c,)))
        if ch.isdigit():
            n = self.take_int()
            return TwistedPoly.constant(
                LaurentSeries(self.field, 0, (self.field.f_from_int(n),)))
        if ch == "-":
            self.pos += 1
            return -self.parse_factor()
        self.error(f"unexpected character {ch!r}")
