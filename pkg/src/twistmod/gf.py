"""Dense linear algebra over F_d on numpy integer matrices.

Entries are the 0..d-1 integer encodings used by FieldConfig.  For k = 1 all
operations are plain modular arithmetic; for k > 1 they go through the
precomputed field tables (element-wise via fancy indexing), which is ample for
the small extension degrees this library targets.
"""

from __future__ import annotations

import numpy as np

from .series import FieldConfig


class GFOps:
    """Matrix operations over the field described by a FieldConfig."""

    def __init__(self, field: FieldConfig):
        self.field = field
        self.prime = field.k == 1
        self.p = field.p
        self.d = field.d
        if not self.prime:
            self._mul_table = np.array(field._mul, dtype=np.int64)
            self._inv_table = np.array(field._inv, dtype=np.int64)
            add = np.zeros((field.d, field.d), dtype=np.int64)
            neg = np.zeros(field.d, dtype=np.int64)
            for a in range(field.d):
                neg[a] = field.f_neg(a)
                for b in range(field.d):
                    add[a, b] = field.f_add(a, b)
            self._add_table = add
            self._neg_table = neg

    def array(self, data) -> np.ndarray:
        return np.array(data, dtype=np.int64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        return self._add_table[a, b]

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        return self._neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        return self._mul_table[a, b]

    def inv_el(self, a: int) -> int:
        return self.field.f_inv(int(a))

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.prime:
            return (A.astype(object) @ B.astype(object) % self.p).astype(np.int64) \
                if A.shape[1] * self.p * self.p > 2 ** 62 else (A @ B) % self.p
        out = self.zeros((A.shape[0], B.shape[1]))
        for l in range(A.shape[1]):
            out = self.add(out, self.mul(A[:, l][:, None], B[l, :][None, :]))
        return out

    def rref(self, A: np.ndarray):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        R = A.copy()
        m, n = R.shape
        pivots = []
        r = 0
        for c in range(n):
            if r >= m:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                R[[r, piv]] = R[[piv, r]]
            R[r] = self.mul(R[r], self.inv_el(R[r, c]))
            col = R[:, c].copy()
            col[r] = 0
            rows = np.nonzero(col)[0]
            if rows.size:
                R[rows] = self.sub(R[rows], self.mul(col[rows][:, None], R[r][None, :]))
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, A: np.ndarray) -> int:
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def nullspace(self, A: np.ndarray) -> np.ndarray:
        """Rows form a basis of {x : A x = 0}."""
        m, n = A.shape
        if n == 0:
            return self.zeros((0, 0))
        R, pivots = self.rref(A)
        pivset = set(pivots)
        free = [j for j in range(n) if j not in pivset]
        basis = self.zeros((len(free), n))
        for bi, f in enumerate(free):
            basis[bi, f] = 1
            for ri, c in enumerate(pivots):
                basis[bi, c] = self.neg(R[ri, f])
        return basis

    def solve(self, A: np.ndarray, b: np.ndarray):
        """One solution of A x = b, or None when inconsistent."""
        m, n = A.shape
        aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
        R, pivots = self.rref(aug)
        if n in pivots:
            return None
        x = self.zeros(n)
        for ri, c in enumerate(pivots):
            x[c] = R[ri, n]
        return x

    # -- subspaces given by row-span bases --

    def span_basis(self, M: np.ndarray) -> np.ndarray:
        """Canonical basis (nonzero rref rows) of the row span."""
        if M.size == 0:
            return self.zeros((0, M.shape[1] if M.ndim == 2 else 0))
        R, pivots = self.rref(M)
        return R[:len(pivots)]

    def span_contains(self, S: np.ndarray, v: np.ndarray) -> bool:
        if S.size == 0:
            return not np.any(v)
        return self.rank(np.vstack([S, v])) == self.rank(S)

    def span_dim(self, S: np.ndarray) -> int:
        return self.rank(S)

    def span_intersect(self, S1: np.ndarray, S2: np.ndarray) -> np.ndarray:
        """Basis of rowspan(S1) & rowspan(S2)."""
        S1 = self.span_basis(S1)
        S2 = self.span_basis(S2)
        if S1.size == 0 or S2.size == 0:
            n = S1.shape[1] if S1.ndim == 2 and S1.shape[1] else \
                (S2.shape[1] if S2.ndim == 2 else 0)
            return self.zeros((0, n))
        # u S1 + v S2 = 0  <=>  (S1^T | S2^T) (u; v) = 0; then w = u S1 spans the meet
        A = np.concatenate([S1.T, S2.T], axis=1)
        N = self.nullspace(A)
        if N.size == 0:
            return self.zeros((0, S1.shape[1]))
        U = N[:, : S1.shape[0]]
        W = self.matmul(U, S1)
        return self.span_basis(W)

    def span_equal(self, S1: np.ndarray, S2: np.ndarray) -> bool:
        r1 = self.rank(S1)
        r2 = self.rank(S2)
        if r1 != r2:
            return False
        if S1.size == 0 or S2.size == 0:
            return True
        return self.rank(np.vstack([S1, S2])) == r1
