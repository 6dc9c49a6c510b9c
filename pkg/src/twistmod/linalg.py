"""Matrices over the twisted-polynomial ring R.

Provides triangulation by row permutations and invertible column operations,
the lower-triangular-separable normal form for equation systems (with
lambda-term right-hand sides), first-column valuation normalization (same
degree, leading-coefficient valuations distinct mod d^s, image preserved),
and comparison of the right-multiplier row modules via a Groebner-style
completion.  All transformations carry verifiable witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass


from .errors import InsufficientPrecision, SemilinearSolveFailure
from .gf import GFOps
from .series import INF, FieldConfig, LaurentSeries
from .ore import (TwistedPoly, act, alpha_decompose, divmod_right,
                  nth_root_map, parse_poly)


class RMatrix:
    """Immutable rectangular matrix over R."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldConfig, rows):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows:
            n = len(self.rows[0])
            if any(len(r) != n for r in self.rows):
                raise ValueError("ragged matrix")

    @classmethod
    def from_lists(cls, field, rows):
        return cls(field, rows)

    @classmethod
    def parse(cls, field, rows_of_text):
        return cls(field, [[parse_poly(field, s) for s in row] for row in rows_of_text])

    @classmethod
    def identity(cls, field, n):
        one = TwistedPoly.one(field)
        zero = TwistedPoly.zero(field)
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, field, perm):
        """Matrix P with P[i][perm[i]] = 1."""
        one = TwistedPoly.one(field)
        zero = TwistedPoly.zero(field)
        n = len(perm)
        return cls(field, [[one if perm[i] == j else zero for j in range(n)]
                           for i in range(n)])

    @classmethod
    def column(cls, field, entries):
        return cls(field, [[e] for e in entries])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def entry(self, i, j) -> TwistedPoly:
        return self.rows[i][j]

    def mm(self, other: "RMatrix") -> "RMatrix":
        m, n = self.shape
        n2, l = other.shape
        if n != n2:
            raise ValueError("shape mismatch")
        zero = TwistedPoly.zero(self.field)
        out = []
        for i in range(m):
            row = []
            for j in range(l):
                s = zero
                for k in range(n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if not (a.is_zero() or b.is_zero()):
                        s = s + a * b
                row.append(s)
            out.append(row)
        return RMatrix(self.field, out)

    def matches(self, other: "RMatrix") -> bool:
        if self.shape != other.shape:
            return False
        return all(a.matches(b) for ra, rb in zip(self.rows, other.rows)
                   for a, b in zip(ra, rb))

    def is_zero(self) -> bool:
        return all(q.known_zero() for row in self.rows for q in row)

    def is_lower_triangular(self) -> bool:
        m, n = self.shape
        return all(self.rows[i][j].known_zero()
                   for i in range(m) for j in range(n) if j > i)

    def lower_separable_split(self):
        """Largest k with columns >= k all zero; requires lower-triangularity."""
        m, n = self.shape
        k = n
        while k > 0 and all(self.rows[i][k - 1].known_zero() for i in range(m)):
            k -= 1
        return k

    def is_lower_triangular_separable(self) -> bool:
        if not self.is_lower_triangular():
            return False
        m, n = self.shape
        k = self.lower_separable_split()
        if k > m:
            return False
        return all(self.rows[j][j].is_separable() for j in range(k))

    def transpose_rows(self):
        return list(list(r) for r in self.rows)

    def act_left(self, xs):
        """(x_1..x_m).A as a tuple of series."""
        xs = tuple(xs)
        m, n = self.shape
        if len(xs) != m:
            raise ValueError("arity mismatch")
        out = []
        for j in range(n):
            s = LaurentSeries.zero(self.field)
            for i in range(m):
                if not self.rows[i][j].is_zero():
                    s = s + act(xs[i], self.rows[i][j])
            out.append(s)
        return tuple(out)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(q) for q in row) for row in self.rows) + "]"

    def __repr__(self):
        return f"<rmatrix {self.shape[0]}x{self.shape[1]}>"

    def to_json(self):
        return [[str(q) for q in row] for row in self.rows]


# -- triangulation -----------------------------------------------------------


@dataclass
class TriangulationResult:
    P: RMatrix
    Q: RMatrix
    Qinv: RMatrix
    T: RMatrix
    A: RMatrix

    def verify(self) -> bool:
        if not self.P.mm(self.A).mm(self.Q).matches(self.T):
            return False
        n = self.Q.shape[0]
        ident = RMatrix.identity(self.Q.field, n)
        return self.Q.mm(self.Qinv).matches(ident) and self.T.is_lower_triangular()


def _entry_key(q: TwistedPoly):
    """Pivot preference: degree, then leading-coefficient valuation."""
    lead = q.lead()
    v = lead.val_lower_bound()
    return (q.degree, v if v != INF else 0)


def triangulate(A: RMatrix) -> TriangulationResult:
    """P*A*Q lower triangular with P a row permutation and Q invertible.

    Pivots are chosen by minimal degree, ties by minimal leading-coefficient
    valuation, then position; column operations use right Euclidean division,
    so the pivot degree strictly descends and the loop terminates.
    """
    field = A.field
    m, n = A.shape
    M = [list(r) for r in A.rows]
    perm = list(range(m))
    Q = RMatrix.identity(field, n)
    Qinv = RMatrix.identity(field, n)
    zero = TwistedPoly.zero(field)

    def col_swap(a, b):
        nonlocal Q, Qinv
        if a == b:
            return
        for row in M:
            row[a], row[b] = row[b], row[a]
        sw = list(range(n))
        sw[a], sw[b] = sw[b], sw[a]
        E = RMatrix.permutation(field, sw)
        Q = Q.mm(E)
        Qinv = E.mm(Qinv)

    def col_op(dst, src, u: TwistedPoly):
        """C_dst += C_src * u."""
        nonlocal Q, Qinv
        if u.is_zero():
            return
        for row in M:
            if not row[src].is_zero():
                row[dst] = row[dst] + row[src] * u
        rows_e = [[TwistedPoly.one(field) if i == j else zero for j in range(n)]
                  for i in range(n)]
        rows_e[src][dst] = u
        E = RMatrix(field, rows_e)
        rows_ei = [list(r) for r in RMatrix.identity(field, n).rows]
        rows_ei[src][dst] = -u
        Einv = RMatrix(field, rows_ei)
        Q = Q.mm(E)
        Qinv = Einv.mm(Qinv)

    def row_swap(a, b):
        if a == b:
            return
        M[a], M[b] = M[b], M[a]
        perm[a], perm[b] = perm[b], perm[a]

    for k in range(min(m, n)):
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    q = M[i][j]
                    if q.known_zero():
                        continue
                    key = _entry_key(q) + (i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
            if best is None:
                T = RMatrix(field, M)
                P = RMatrix.permutation(field, perm)
                return TriangulationResult(P=P, Q=Q, Qinv=Qinv, T=T, A=A)
            _, bi, bj = best
            row_swap(k, bi)
            col_swap(k, bj)
            clear = True
            for j in range(k + 1, n):
                if M[k][j].known_zero():
                    continue
                quot, rem = divmod_right(M[k][j], M[k][k])
                col_op(j, k, -quot)
                if not M[k][j].known_zero():
                    clear = False
            if clear:
                break
    T = RMatrix(field, M)
    P = RMatrix.permutation(field, perm)
    return TriangulationResult(P=P, Q=Q, Qinv=Qinv, T=T, A=A)


# -- lower triangular separable normal form ----------------------------------


def _ord_t(q: TwistedPoly):
    """t-adic order: least i with a_i known nonzero (INF for zero)."""
    for i, a in enumerate(q.coeffs):
        if not a.known_zero():
            return i
    return INF


@dataclass
class LowerSeparableResult:
    """Equivalence of y.A = u with y.(P S) = w modulo the lambda axioms.

    S is lower triangular separable; ``w`` are the transformed right-hand
    terms aligned with S's columns, the trailing ones paired with zero
    columns (the positive quantifier-free constraints on u).  ``pivot_rows``
    lists the original row index carrying each diagonal pivot.
    """
    P: RMatrix
    S: RMatrix
    w: tuple
    pivot_rows: tuple
    n_pivots: int

    @property
    def zero_terms(self):
        return self.w[self.n_pivots:]

    def system_matrix(self) -> RMatrix:
        """P*S: the normal form indexed by the original variables."""
        return self.P.mm(self.S)


def lower_separable(A: RMatrix, u_terms) -> LowerSeparableResult:
    """Rewrite y.A = u into an equivalent y.(P S) = w with S lower tri separable.

    Columns whose entries all lie in tR are split through the level-e
    coordinate maps (each RHS term turns into its lambda coordinates), after
    which a Euclid pass at a row holding a separable entry settles one pivot;
    the gcd at that row stays separable because tR is a right ideal.
    """
    from .lterm import LambdaTerm  # deferred import: lterm does not depend on linalg

    field = A.field
    m, n = A.shape
    u_terms = list(u_terms)
    if len(u_terms) != n:
        raise ValueError("need one RHS term per column")
    cols = [([A.rows[i][j] for i in range(m)], u_terms[j]) for j in range(n)]
    settled = []   # (pivot_row, entries, term) in settlement order
    zeros = []     # (entries, term) with all entries zero
    settled_rows = set()

    def split_once(entries, term):
        e = min((_ord_t(q) for q in entries if not q.is_zero()), default=INF)
        if e == INF or e == 0:
            return None
        e = int(e)
        shifted = [TwistedPoly(field, q.coeffs[e:]) for q in entries]
        comps = [alpha_decompose(q, e) for q in shifted]
        out = []
        for w in range(field.d ** e):
            new_entries = [nth_root_map(comps[i][w], e) for i in range(m)]
            out.append((new_entries, term.lam_coord(w, e)))
        return out

    guard = 0
    while cols:
        guard += 1
        if guard > 10000:
            raise SemilinearSolveFailure("normal form did not stabilize")
        # 1. split t-divisible columns, drop zero columns
        progressed = True
        while progressed:
            progressed = False
            next_cols = []
            for entries, term in cols:
                if all(q.known_zero()
                       for q in entries):
                    zeros.append((entries, term))
                    progressed = True
                    continue
                split = split_once(entries, term)
                if split is None:
                    next_cols.append((entries, term))
                else:
                    next_cols.extend(split)
                    progressed = True
            cols = next_cols
        if not cols:
            break
        # 2. pick a pivot row: a separable entry in an unsettled row
        best = None
        for ci, (entries, term) in enumerate(cols):
            for i in range(m):
                if i in settled_rows:
                    continue
                q = entries[i]
                if not q.known_zero() and q.is_separable():
                    key = _entry_key(q) + (i, ci)
                    if best is None or key < best[0]:
                        best = (key, i, ci)
        if best is None:
            raise SemilinearSolveFailure(
                "no separable pivot available (unexpected after splitting)")
        _, prow, pci = best
        # 3. Euclid at the pivot row until a single column hits it
        while True:
            live = [ci for ci, (entries, _) in enumerate(cols)
                    if not entries[prow].known_zero()]
            if len(live) <= 1:
                break
            live.sort(key=lambda ci: _entry_key(cols[ci][0][prow]) + (ci,))
            c0 = live[0]
            base_entries, base_term = cols[c0]
            for ci in live[1:]:
                entries, term = cols[ci]
                quot, _ = divmod_right(entries[prow], base_entries[prow])
                new_entries = [entries[i] - base_entries[i] * quot for i in range(m)]
                cols[ci] = (new_entries, term - base_term.act(quot))
        live = [ci for ci, (entries, _) in enumerate(cols)
                if not entries[prow].known_zero()]
        pivot_ci = live[0]
        entries, term = cols.pop(pivot_ci)
        settled.append((prow, entries, term))
        settled_rows.add(prow)

    # assemble: settled pivot rows first (in settlement order), rest after
    order = [prow for prow, _, _ in settled]
    order += [i for i in range(m) if i not in settled_rows]
    pos = {orig: new for new, orig in enumerate(order)}
    ncols = len(settled) + len(zeros)
    zero_poly = TwistedPoly.zero(field)
    S_rows = [[zero_poly] * ncols for _ in range(m)]
    w_out = []
    for j, (prow, entries, term) in enumerate(settled):
        for i in range(m):
            S_rows[pos[i]][j] = entries[i]
        w_out.append(term)
    for j, (entries, term) in enumerate(zeros):
        w_out.append(term)
    S = RMatrix(field, S_rows)
    # P with P[i][j] = 1 iff original row i sits at S-position j
    perm = [pos[i] for i in range(m)]
    P = RMatrix.permutation(field, perm)
    return LowerSeparableResult(P=P, S=S, w=tuple(w_out),
                                pivot_rows=tuple(order[:len(settled)]),
                                n_pivots=len(settled))


# -- semilinear relation search ----------------------------------------------


def solve_semilinear(field: FieldConfig, cs, es, window=None):
    """Nontrivial a_i with sum_i a_i^(phi^e_i) c_i = 0, windowed polynomial a_i.

    The maps a -> a^(phi^e) c are F_d-linear on coefficients, so relations
    inside a support window reduce to a nullspace over F_d.  Supports are
    finite and the c_i must be exact, hence any returned relation is verified
    exactly; None only means "no relation within the window".  Returns
    (i0, {i: a_i}) with i0 the support index of maximal degree e_i (lowest
    index on ties), which is the row a degree-reducing combination replaces.
    """
    k = len(cs)
    if window is None:
        window = field.window
    for c in cs:
        if not c.exact:
            raise InsufficientPrecision("semilinear solve needs exact coefficients")
    if k < 2:
        return None
    gf = GFOps(field)
    lo, hi = -window, window
    slots = [(i, mexp) for i in range(k) for mexp in range(lo, hi)]
    out_idx = set()
    for i in range(k):
        D = field.d ** es[i]
        for mexp in (lo, hi - 1):
            for n in cs[i].support():
                out_idx.add(mexp * D + n)
    # fill the full integer range touched by any slot image
    out_lo = min(out_idx)
    out_hi = max(out_idx) + 1
    out_pos = {n: r for r, n in enumerate(range(out_lo, out_hi))}
    Amat = gf.zeros((out_hi - out_lo, len(slots)))
    for col, (i, mexp) in enumerate(slots):
        D = field.d ** es[i]
        for n in cs[i].support():
            Amat[out_pos[mexp * D + n], col] = cs[i].coeff(n)
    null = gf.nullspace(Amat)
    if null.shape[0] == 0:
        return None
    x = null[0]
    sol = {}
    for col, (i, mexp) in enumerate(slots):
        v = int(x[col])
        if v:
            cur = sol.get(i, LaurentSeries.zero(field))
            sol[i] = cur + LaurentSeries.x_pow(field, mexp, v)
    sol = {i: a for i, a in sol.items() if not a.is_exact_zero()}
    if not sol:
        return None
    # exact verification (sound even if the window was too small to be complete)
    total = LaurentSeries.zero(field)
    for i, a in sol.items():
        total = total + a.frobenius(es[i]) * cs[i]
    if not total.is_exact_zero():
        return None
    i0 = max(sol, key=lambda i: (es[i], -i))
    return i0, sol


# -- first-column valuation normalization ------------------------------------


@dataclass
class FirstColumnResult:
    """Normalized presentation of the row module with a clean first column.

    ``Qn`` has first-column entries of a common degree ``level`` whose leading
    coefficients carry distinct valuations inside {0, .., d^level - 1}; the
    generated submodule of M^n is unchanged.  ``ops`` is a replayable log of
    the invertible row transformations and row splittings applied.
    """
    Qn: RMatrix
    level: int
    lead_valuations: tuple
    ops: tuple


def normalize_first_column(Q: RMatrix, window=None, max_iter=400) -> FirstColumnResult:
    """Image-preserving rewrite making the first column valuation-independent.

    Pipeline per induction: (1) eliminate Frobenius-semilinear relations among
    the first-column leading coefficients (degree descent); (2) split rows
    through level-(e - e_i) coordinates so all first-column degrees agree;
    (3) separate leading valuations mod d^e by elementary field combinations,
    then shift each into {0, .., d^e - 1}.
    """
    field = Q.field
    m, n = Q.shape
    rows = [list(r) for r in Q.rows]
    ops = []

    def row_nonzero(row):
        return any(not q.known_zero()
                   for q in row)

    def entry_zero(q):
        return q.known_zero()

    rows = [r for r in rows if row_nonzero(r)]
    if not rows:
        raise ValueError("zero matrix has no first-column normal form")
    for r in rows:
        if entry_zero(r[0]):
            raise ValueError("first-column entry is zero after pruning; "
                             "normalization undefined for this presentation")

    def replace_or_drop(idx, new_row, op):
        ops.append(op)
        if not row_nonzero(new_row):
            del rows[idx]
        elif entry_zero(new_row[0]):
            raise SemilinearSolveFailure(
                "first-column entry vanished while the row survived; "
                "presentation outside the normalizable class")
        else:
            rows[idx] = new_row

    it = 0
    while True:
        it += 1
        if it > max_iter:
            raise SemilinearSolveFailure("first-column normalization did not terminate")
        es = [r[0].degree for r in rows]
        cs = [r[0].lead() for r in rows]
        # step 1: a semilinear relation among leading coefficients lets an
        # invertible combination reduce the degree at its top support row
        rel = solve_semilinear(field, cs, es, window=window)
        if rel is not None:
            i0, sol = rel
            e0 = es[i0]
            new_row = []
            for j in range(n):
                s = TwistedPoly.zero(field)
                for i, a in sol.items():
                    s = s + TwistedPoly.t_pow(field, e0 - es[i], a) * rows[i][j]
                new_row.append(s)
            replace_or_drop(i0, new_row,
                            ("combine", i0, {i: str(a) for i, a in sol.items()}))
            if not rows:
                raise ValueError("matrix collapsed to zero")
            continue
        # step 2: equalize first-column degrees by coordinate row splitting
        e = max(es)
        if any(ei < e for ei in es):
            new_rows = []
            for i, row in enumerate(rows):
                gap = e - es[i]
                if gap == 0:
                    new_rows.append(row)
                    continue
                for w in range(field.d ** gap):
                    mult = TwistedPoly.t_pow(field, gap, LaurentSeries.x_pow(field, w))
                    new_rows.append([mult * row[j] for j in range(n)])
            ops.append(("split", e))
            rows = new_rows
            continue
        # step 3: separate leading valuations mod d^e; by step 1 the leading
        # coefficients admit no relation, so eliminations strictly raise them
        D = field.d ** e
        vals = [r[0].lead().valuation() for r in rows]
        coll = None
        for i in range(len(rows)):
            for j in range(len(rows)):
                if i != j and (vals[j] - vals[i]) % D == 0 and vals[i] <= vals[j]:
                    coll = (i, j)
                    break
            if coll:
                break
        if coll:
            i, j = coll
            li = rows[i][0].lead()
            lj = rows[j][0].lead()
            mexp = (lj.valuation() - li.valuation()) // D
            mu = field.f_neg(field.f_mul(lj.leading_coeff(),
                                         field.f_inv(li.leading_coeff())))
            c = LaurentSeries.x_pow(field, mexp, mu)
            new_row = [rows[j][col] + rows[i][col].scale_left(c) for col in range(n)]
            replace_or_drop(j, new_row, ("eliminate", j, i, str(c)))
            continue
        # step 4: shift valuations into {0, .., d^e - 1} and normalize leads
        changed = False
        for i, row in enumerate(rows):
            lead = row[0].lead()
            v = lead.valuation()
            shift = v // D  # floor division keeps the residue in {0, .., D-1}
            if shift:
                c = LaurentSeries.x_pow(field, -shift)
                rows[i] = [q.scale_left(c) for q in row]
                ops.append(("shift", i, -shift))
                changed = True
                continue
            lc = lead.leading_coeff()
            if lc != 1:
                c = LaurentSeries(field, 0, (field.f_inv(lc),))
                rows[i] = [q.scale_left(c) for q in row]
                ops.append(("rescale", i, str(c)))
                changed = True
        if changed:
            continue
        break

    lead_vals = tuple(r[0].lead().valuation() for r in rows)
    level = rows[0][0].degree
    Qn = RMatrix(field, rows)
    return FirstColumnResult(Qn=Qn, level=level, lead_valuations=lead_vals,
                             ops=tuple(ops))


# -- right-multiplier row modules ---------------------------------------------


class RowModule:
    """The submodule sum_i g_i . R of R^n generated by row vectors g_i.

    Completion inter-reduces generators sharing a lead position (position of
    maximal degree, lowest index on ties); since coefficients form a field,
    the completed set with pairwise distinct lead positions is a Groebner
    basis for the position-over-term order, so membership is decided by
    reduction.
    """

    def __init__(self, field: FieldConfig, rows):
        self.field = field
        self.width = len(rows[0]) if rows else 0
        gens = [tuple(r) for r in rows if any(not q.known_zero() for q in r)]
        self.basis = self._complete(gens)

    @staticmethod
    def _lead(g):
        best = None
        for j, q in enumerate(g):
            if q.known_zero():
                continue
            if best is None or q.degree > best[1]:
                best = (j, q.degree)
        return best  # (position, degree) or None

    def _cancel(self, g, h):
        """One lead-cancellation of g by h (same lead position, deg g >= deg h)."""
        jg, mg = self._lead(g)
        jh, mh = self._lead(h)
        delta = mg - mh
        b = g[jg].lead() * h[jh].lead().frobenius(delta).inverse()
        u = TwistedPoly.t_pow(self.field, delta, b)
        return tuple(gq - hq * u for gq, hq in zip(g, h))

    def _complete(self, gens):
        basis = []
        work = list(gens)
        guard = 0
        while work:
            guard += 1
            if guard > 2000:
                raise SemilinearSolveFailure("row module completion did not stabilize")
            g = work.pop()
            lead = self._lead(g)
            if lead is None:
                continue
            clash = next((h for h in basis if self._lead(h)[0] == lead[0]), None)
            if clash is None:
                basis.append(g)
                continue
            if self._lead(clash)[1] <= lead[1]:
                work.append(self._cancel(g, clash))
            else:
                basis.remove(clash)
                basis.append(g)
                work.append(self._cancel(clash, g))
        return basis

    def reduce(self, z):
        z = tuple(z)
        guard = 0
        while True:
            guard += 1
            if guard > 5000:
                raise SemilinearSolveFailure("row module reduction did not stabilize")
            lead = self._lead(z)
            if lead is None:
                return z
            red = next((h for h in self.basis
                        if self._lead(h)[0] == lead[0]
                        and self._lead(h)[1] <= lead[1]), None)
            if red is None:
                return z
            z = self._cancel(z, red)

    def contains(self, z) -> bool:
        rem = self.reduce(z)
        return all(q.known_zero() for q in rem)

    def contains_module(self, other: "RowModule") -> bool:
        return all(self.contains(g) for g in other.basis)


def rowspace_equal(A: RMatrix, B: RMatrix) -> bool:
    """Equality of the right-multiplier row modules generated by A and B."""
    if A.shape[1] != B.shape[1]:
        raise ValueError("column count mismatch")
    MA = RowModule(A.field, [list(r) for r in A.rows])
    MB = RowModule(B.field, [list(r) for r in B.rows])
    return MA.contains_module(MB) and MB.contains_module(MA)
