"""Exact scalar and matrix arithmetic over the rationals and prime fields.

Scalars are plain ``Fraction`` values over the rationals and plain ``int``
residues in ``[0, p)`` over a prime field.  ``Mat`` wraps either a list of
``Fraction`` rows or a numpy ``float64`` array of residues; all prime-field
arithmetic is exact because every intermediate value is kept below 2**53
(delayed modular reduction).

All operations are pure and all values are immutable after construction.
Randomized searches take an explicit seed and are deterministic under it.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]

#: widest panel used by the blocked prime-field elimination
_PANEL = 128


class ShapeMismatchError(ValueError):
    """Operands have incompatible shapes (a usage error, not inconsistency)."""


class Field:
    """Ground field for exact computation: the rationals or F_p with p >= 5.

    ``char == 0`` means the rationals; otherwise ``char`` is the prime p.
    The toolkit computes over these fields as exact stand-ins for an
    algebraically closed field; closedness failures surface at the module
    level (endomorphism-ring analysis), never silently.
    """

    __slots__ = ("char",)

    def __init__(self, char: int = 0):
        if char != 0:
            if char < 5 or not _is_prime(char):
                raise ValueError(f"prime field characteristic must be a prime >= 5, got {char}")
        self.char = char

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    # -- scalar helpers ----------------------------------------------------

    def coerce(self, x) -> Scalar:
        """Coerce an int / Fraction / string like '2/3' into a field scalar."""
        if self.char:
            if isinstance(x, Fraction):
                if x.denominator % self.char == 0:
                    raise ZeroDivisionError(f"denominator divisible by {self.char}")
                return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
            return int(x) % self.char
        if isinstance(x, Fraction):
            return x
        return Fraction(x)

    @property
    def zero(self) -> Scalar:
        return 0 if self.char else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.char else Fraction(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.char if self.char else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.char if self.char else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return (a * b) % self.char if self.char else a * b

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.char if self.char else -a

    def inv(self, a: Scalar) -> Scalar:
        if self.char:
            a = a % self.char
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, self.char - 2, self.char)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def random_scalar(self, rng: random.Random) -> Scalar:
        """Uniform over F_p; small integers in [-9, 9] over the rationals."""
        if self.char:
            return rng.randrange(self.char)
        return Fraction(rng.randint(-9, 9))

    def random_nonzero(self, rng: random.Random) -> Scalar:
        while True:
            x = self.random_scalar(rng)
            if x != 0:
                return x

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self) -> int:
        return hash(("Field", self.char))

    def __repr__(self) -> str:
        return "Q" if self.char == 0 else f"F{self.char}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


QQ = Field.rationals()
F101 = Field.prime(101)


# ---------------------------------------------------------------------------
# prime-field kernels (numpy, delayed reduction)
# ---------------------------------------------------------------------------

def _echelon_fp(a: np.ndarray, p: int, panel: int = _PANEL):
    """Row echelon form mod p with unit pivots and zeros below each pivot.

    Each column panel is factored inside a contiguous buffer (cache friendly),
    then the trailing block is updated with one triangular pass plus one GEMM.
    Entries may exceed p mid-panel but stay exact in float64: growth per panel
    is bounded by ``panel * p**2`` which is far below 2**53.
    Returns ``(w, pivot_columns)`` with w fully reduced mod p.
    """
    w = np.array(a, dtype=np.float64)
    m, n = w.shape
    if m == 0 or n == 0:
        return w % p if w.size else w, []
    allpiv: list[int] = []
    row = 0
    ps = 0
    sub = 16
    while ps < n and row < m:
        pe = min(ps + panel, n)
        nb = pe - ps
        # factor the panel in a contiguous buffer
        pb = w[row:, ps:pe].copy()
        pb %= p
        ma = pb.shape[0]
        perm = np.arange(ma)
        pivcols: list[int] = []
        invs: list[float] = []
        r = 0
        # two-level blocking: rank-1 updates stay inside a narrow sub-panel,
        # the rest of the panel is updated with one small GEMM per sub-panel
        for ss in range(0, nb, sub):
            se = min(ss + sub, nb)
            r_sub = r
            sub_piv: list[int] = []
            sub_invs: list[float] = []
            for c in range(ss, se):
                if r >= ma:
                    break
                pb[r:, c] %= p
                col = pb[r:, c]
                nz = int(np.argmax(col != 0))
                if col[nz] == 0:
                    continue
                if nz:
                    i = r + nz
                    pb[[r, i]] = pb[[i, r]]
                    perm[[r, i]] = perm[[i, r]]
                inv = float(pow(int(pb[r, c]), p - 2, p))
                pb[r, c + 1:se] = (pb[r, c + 1:se] * inv) % p
                pb[r, c] = 1.0
                f = pb[r + 1:, c]
                f %= p
                if f.size and f.any():
                    pb[r + 1:, c + 1:se] -= f[:, None] * pb[r, c + 1:se][None, :]
                pivcols.append(c)
                sub_piv.append(c)
                invs.append(inv)
                sub_invs.append(inv)
                r += 1
            k_sub = len(sub_piv)
            if k_sub and se < nb:
                # triangular pass over the sub-panel pivot rows, then GEMM below
                t_sub = pb[r_sub:r, se:]
                for k in range(k_sub):
                    t_sub[k] = (t_sub[k] * sub_invs[k]) % p
                    if k + 1 < k_sub:
                        fk = pb[r_sub + k + 1:r, sub_piv[k]] % p
                        if fk.any():
                            t_sub[k + 1:] -= fk[:, None] * t_sub[k][None, :]
                t_sub %= p
                if r < ma:
                    l_sub = pb[r:, sub_piv] % p
                    if l_sub.any():
                        pb[r:, se:] -= l_sub @ t_sub
        k_piv = len(pivcols)
        if k_piv:
            if not np.array_equal(perm, np.arange(ma)):
                w[row:, pe:] = w[row:, pe:][perm]
            if pe < n:
                t_blk = w[row:row + k_piv, pe:]
                for k in range(k_piv):
                    t_blk[k] = (t_blk[k] * invs[k]) % p
                    if k + 1 < k_piv:
                        fk = pb[k + 1:k_piv, pivcols[k]] % p
                        if fk.any():
                            t_blk[k + 1:] -= fk[:, None] * t_blk[k][None, :]
                t_blk %= p
                if row + k_piv < m:
                    l_blk = pb[k_piv:, pivcols] % p
                    if l_blk.any():
                        w[row + k_piv:, pe:] -= l_blk @ t_blk
            # store the clean echelon panel (zeros below pivots)
            for k, c in enumerate(pivcols):
                pb[k + 1:, c] = 0.0
            pb[:k_piv] %= p
            pb[k_piv:] %= p
            w[row:, ps:pe] = pb
        else:
            w[row:, ps:pe] = pb % p
        allpiv.extend(ps + c for c in pivcols)
        row, ps = row + k_piv, pe
    w[row:, :] %= p
    return w, allpiv


def _kernel_fp(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right null space mod p, as columns of an (n, k) array."""
    m, n = a.shape
    w, piv = _echelon_fp(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    k = len(free)
    out = np.zeros((n, k))
    if k == 0:
        return out
    r = len(piv)
    # back substitution on the echelon form, vectorized over all free columns
    rhs = w[:r, free].copy()             # r x k
    sol = np.zeros((r, k))
    for i in range(r - 1, -1, -1):
        acc = rhs[i].copy()
        tail = w[i, piv[i + 1:r]]
        if tail.size and tail.any():
            acc -= tail @ sol[i + 1:r]
        sol[i] = acc % p
    for idx, c in enumerate(free):
        out[c, idx] = 1.0
    if r:
        out[piv[:r], :] = (-sol) % p
    return out


def _solve_fp(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """One particular solution of a x = b mod p, or None when inconsistent."""
    m, n = a.shape
    aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
    w, piv = _echelon_fp(aug, p)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n)
    r = len(piv)
    for i in range(r - 1, -1, -1):
        acc = w[i, n]
        tail = w[i, piv[i + 1:r]]
        if tail.size and tail.any():
            acc -= float(tail @ x[piv[i + 1:r]])
        x[piv[i]] = acc % p
    return x


def _solve_many_fp(a: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Solve a X = b columnwise with a single elimination; None when any
    column is inconsistent.  Free variables are set to zero."""
    m, n = a.shape
    k = b.shape[1]
    aug = np.concatenate([a, b], axis=1)
    w, piv = _echelon_fp(aug, p)
    if piv and piv[-1] >= n:
        return None
    x = np.zeros((n, k))
    r = len(piv)
    for i in range(r - 1, -1, -1):
        acc = w[i, n:].copy()
        tail = w[i, piv[i + 1:r]]
        if tail.size and tail.any():
            acc -= tail @ x[piv[i + 1:r], :]
        x[piv[i]] = acc % p
    # rows above pivots may still be inconsistent when rank < m: check residual
    resid = (a @ x - b) % p
    if resid.any():
        return None
    return x


# ---------------------------------------------------------------------------
# rational kernels (Fraction rows)
# ---------------------------------------------------------------------------

def _echelon_qq(rows: list[list[Fraction]]):
    """Reduced echelon over the rationals. Returns (rows, pivot columns)."""
    w = [list(r) for r in rows]
    m = len(w)
    n = len(w[0]) if m else 0
    piv: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        sel = next((i for i in range(r, m) if w[i][c] != 0), None)
        if sel is None:
            continue
        w[r], w[sel] = w[sel], w[r]
        inv = Fraction(1) / w[r][c]
        w[r] = [x * inv for x in w[r]]
        for i in range(m):
            if i != r and w[i][c] != 0:
                f = w[i][c]
                w[i] = [x - f * y for x, y in zip(w[i], w[r])]
        piv.append(c)
        r += 1
    return w, piv


# ---------------------------------------------------------------------------
# Mat
# ---------------------------------------------------------------------------

class Mat:
    """An immutable exact matrix over a :class:`Field`.

    Prime-field entries live in a float64 numpy array of residues in
    ``[0, p)``; rational entries in a tuple of ``Fraction`` row tuples.
    """

    __slots__ = ("field", "rows", "cols", "_arr", "_rows")

    def __init__(self, field: Field, rows: int, cols: int, data):
        self.field = field
        self.rows = rows
        self.cols = cols
        if field.char:
            arr = np.asarray(data, dtype=np.float64).reshape(rows, cols) % field.char
            arr.setflags(write=False)
            self._arr = arr
            self._rows = None
        else:
            self._arr = None
            self._rows = tuple(tuple(Fraction(x) for x in row) for row in data)
            if len(self._rows) != rows or any(len(r) != cols for r in self._rows):
                raise ShapeMismatchError("row data does not match declared shape")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence]) -> "Mat":
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise ShapeMismatchError("ragged rows")
        coerced = [[field.coerce(x) for x in row] for row in rows]
        return cls(field, m, n, coerced)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        if field.char:
            return cls(field, rows, cols, np.zeros((rows, cols)))
        return cls(field, rows, cols, [[Fraction(0)] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        if field.char:
            return cls(field, n, n, np.eye(n))
        return cls(field, n, n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, field: Field, entries: Sequence) -> "Mat":
        return cls.from_rows(field, [[x] for x in entries])

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, rng: random.Random) -> "Mat":
        data = [[field.random_scalar(rng) for _ in range(cols)] for _ in range(rows)]
        return cls(field, rows, cols, data if not field.char else
                   np.array(data, dtype=np.float64).reshape(rows, cols))

    # -- accessors ----------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        """Residue array view (prime fields only)."""
        if self._arr is None:
            raise ValueError("array view is only available over prime fields")
        return self._arr

    def entry(self, i: int, j: int) -> Scalar:
        if self._arr is not None:
            return int(self._arr[i, j])
        return self._rows[i][j]

    def row_list(self) -> list[list[Scalar]]:
        if self._arr is not None:
            return [[int(x) for x in row] for row in self._arr]
        return [list(r) for r in self._rows]

    def column_entries(self, j: int) -> list[Scalar]:
        return [self.entry(i, j) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        if self._arr is not None:
            return not self._arr.any()
        return all(x == 0 for row in self._rows for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat) or other.field != self.field or other.shape != self.shape:
            return False
        if self._arr is not None:
            return bool((self._arr == other._arr).all())
        return self._rows == other._rows

    def __hash__(self):
        if self._arr is not None:
            return hash((self.field, self.rows, self.cols, self._arr.tobytes()))
        return hash((self.field, self._rows))

    def __repr__(self) -> str:
        return f"Mat({self.field}, {self.rows}x{self.cols})"

    # -- arithmetic ----------------------------------------------------------

    def _require_same_field(self, other: "Mat"):
        if self.field != other.field:
            raise ShapeMismatchError("field mismatch")

    def __add__(self, other: "Mat") -> "Mat":
        self._require_same_field(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(f"add {self.shape} vs {other.shape}")
        if self._arr is not None:
            return Mat(self.field, self.rows, self.cols, self._arr + other._arr)
        return Mat(self.field, self.rows, self.cols,
                   [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scaled(self.field.coerce(-1))

    def __neg__(self) -> "Mat":
        return self.scaled(self.field.coerce(-1))

    def scaled(self, c) -> "Mat":
        c = self.field.coerce(c)
        if self._arr is not None:
            return Mat(self.field, self.rows, self.cols, self._arr * float(c))
        return Mat(self.field, self.rows, self.cols, [[c * x for x in row] for row in self._rows])

    def __matmul__(self, other: "Mat") -> "Mat":
        self._require_same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatchError(f"matmul {self.shape} @ {other.shape}")
        if self._arr is not None:
            return Mat(self.field, self.rows, other.cols, self._arr @ other._arr)
        out = [[Fraction(0)] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            ri = self._rows[i]
            for k in range(self.cols):
                a = ri[k]
                if a == 0:
                    continue
                rk = other._rows[k]
                oi = out[i]
                for j in range(other.cols):
                    if rk[j] != 0:
                        oi[j] += a * rk[j]
        return Mat(self.field, self.rows, other.cols, out)

    def transpose(self) -> "Mat":
        if self._arr is not None:
            return Mat(self.field, self.cols, self.rows, self._arr.T)
        return Mat(self.field, self.cols, self.rows,
                   [[self._rows[i][j] for i in range(self.rows)] for j in range(self.cols)])

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def trace(self) -> Scalar:
        if not self.is_square():
            raise ShapeMismatchError("trace of a non-square matrix")
        if self._arr is not None:
            return int(self._arr.trace()) % self.field.char
        total = Fraction(0)
        for i in range(self.rows):
            total += self._rows[i][i]
        return total

    def kron(self, other: "Mat") -> "Mat":
        self._require_same_field(other)
        if self._arr is not None:
            return Mat(self.field, self.rows * other.rows, self.cols * other.cols,
                       np.kron(self._arr, other._arr) % self.field.char)
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    a = self._rows[i][j]
                    row.extend(a * x for x in other._rows[k])
                out.append(row)
        return Mat(self.field, self.rows * other.rows, self.cols * other.cols, out)

    def hstack(self, other: "Mat") -> "Mat":
        self._require_same_field(other)
        if self.rows != other.rows:
            raise ShapeMismatchError("hstack row mismatch")
        if self._arr is not None:
            return Mat(self.field, self.rows, self.cols + other.cols,
                       np.concatenate([self._arr, other._arr], axis=1))
        return Mat(self.field, self.rows, self.cols + other.cols,
                   [list(r1) + list(r2) for r1, r2 in zip(self._rows, other._rows)])

    def vstack(self, other: "Mat") -> "Mat":
        self._require_same_field(other)
        if self.cols != other.cols:
            raise ShapeMismatchError("vstack col mismatch")
        if self._arr is not None:
            return Mat(self.field, self.rows + other.rows, self.cols,
                       np.concatenate([self._arr, other._arr], axis=0))
        return Mat(self.field, self.rows + other.rows, self.cols,
                   list(self._rows) + list(other._rows))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Mat":
        if self._arr is not None:
            return Mat(self.field, len(row_idx), len(col_idx),
                       self._arr[np.ix_(row_idx, col_idx)] if row_idx and col_idx
                       else np.zeros((len(row_idx), len(col_idx))))
        return Mat(self.field, len(row_idx), len(col_idx),
                   [[self._rows[i][j] for j in col_idx] for i in row_idx])

    # -- solving -------------------------------------------------------------

    def rank(self) -> int:
        if self._arr is not None:
            _, piv = _echelon_fp(self._arr, self.field.char)
            return len(piv)
        if self.rows == 0 or self.cols == 0:
            return 0
        _, piv = _echelon_qq(self.row_list())
        return len(piv)

    def kernel(self) -> "Mat":
        """Matrix whose columns form a basis of the right null space."""
        if self._arr is not None:
            ker = _kernel_fp(self._arr, self.field.char)
            return Mat(self.field, self.cols, ker.shape[1], ker)
        if self.rows == 0 or self.cols == 0:
            return Mat.identity(self.field, self.cols)
        w, piv = _echelon_qq(self.row_list())
        pivset = set(piv)
        free = [c for c in range(self.cols) if c not in pivset]
        cols = []
        for c in free:
            v = [Fraction(0)] * self.cols
            v[c] = Fraction(1)
            for r, pc in enumerate(piv):
                v[pc] = -w[r][c]
            cols.append(v)
        return Mat(self.field, self.cols, len(cols),
                   [[cols[j][i] for j in range(len(cols))] for i in range(self.cols)])

    def solve(self, b: "Mat"):
        """Particular solution of self @ x = b (b a column), or None."""
        if b.rows != self.rows or b.cols != 1:
            raise ShapeMismatchError(f"rhs shape {b.shape} does not match {self.rows} rows")
        self._require_same_field(b)
        if self._arr is not None:
            x = _solve_fp(self._arr, b._arr[:, 0], self.field.char)
            if x is None:
                return None
            return Mat(self.field, self.cols, 1, x.reshape(self.cols, 1))
        aug = [list(r) + [b._rows[i][0]] for i, r in enumerate(self._rows)]
        if self.rows == 0:
            return Mat.zeros(self.field, self.cols, 1)
        w, piv = _echelon_qq(aug)
        if piv and piv[-1] == self.cols:
            return None
        x = [Fraction(0)] * self.cols
        for r, pc in enumerate(piv):
            x[pc] = w[r][self.cols]
        return Mat(self.field, self.cols, 1, [[v] for v in x])

    def solve_matrix(self, b: "Mat"):
        """Particular solution X of self @ X = B, or None when inconsistent."""
        if b.rows != self.rows:
            raise ShapeMismatchError("solve_matrix row mismatch")
        if self._arr is not None:
            if b.cols == 0:
                return Mat.zeros(self.field, self.cols, 0)
            x = _solve_many_fp(self._arr, b._arr, self.field.char)
            if x is None:
                return None
            return Mat(self.field, self.cols, b.cols, x)
        cols = []
        for j in range(b.cols):
            x = self.solve(b.submatrix(range(b.rows), [j]))
            if x is None:
                return None
            cols.append(x)
        if not cols:
            return Mat.zeros(self.field, self.cols, 0)
        out = cols[0]
        for c in cols[1:]:
            out = out.hstack(c)
        return out

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> "Mat":
        if not self.is_square():
            raise ShapeMismatchError("inverse of a non-square matrix")
        n = self.rows
        if n == 0:
            return self
        if self._arr is not None:
            p = self.field.char
            aug = np.concatenate([self._arr, np.eye(n)], axis=1)
            w, piv = _echelon_fp(aug, p)
            if len(piv) < n or piv[n - 1] != n - 1:
                raise ZeroDivisionError("matrix is singular")
            # back-eliminate above pivots
            for i in range(n - 1, -1, -1):
                f = w[:i, i].copy()
                if f.any():
                    w[:i, n:] = (w[:i, n:] - f[:, None] * w[i, n:][None, :]) % p
            return Mat(self.field, n, n, w[:, n:])
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)]
               for i, r in enumerate(self._rows)]
        w, piv = _echelon_qq(aug)
        if len([c for c in piv if c < n]) < n:
            raise ZeroDivisionError("matrix is singular")
        return Mat(self.field, n, n, [row[n:] for row in w[:n]])


# ---------------------------------------------------------------------------
# nilpotent Jordan structure
# ---------------------------------------------------------------------------

def nilpotency_index(s: Mat) -> Optional[int]:
    """Least m with s**m = 0, or None when s is not nilpotent."""
    if not s.is_square():
        raise ShapeMismatchError("nilpotency is defined for square matrices")
    n = s.rows
    if n == 0 or s.is_zero():
        return 0 if n == 0 else 1
    power = s
    m = 1
    while m <= n:
        if power.is_zero():
            return m
        power = power @ s
        m += 1
    return None


def jordan_nilpotent(s: Mat) -> tuple[Mat, list[int]]:
    """Jordan basis of a nilpotent matrix.

    Returns ``(P, sizes)`` with ``s @ P == P @ J`` where J is block diagonal
    with nilpotent Jordan blocks of the given sizes (ones on the
    superdiagonal).  Each chain is stored as columns
    ``s^(a-1) v, ..., s v, v``.
    """
    n = s.rows
    if n == 0:
        return Mat.identity(s.field, 0), []
    field = s.field
    # kernel filtration
    kernels = []
    power = Mat.identity(field, n)
    while True:
        power = power @ s if kernels else s
        ker = power.kernel()
        kernels.append(ker)
        if ker.cols == n:
            break
        if len(kernels) > n:
            raise ValueError("matrix is not nilpotent")
    m = len(kernels)

    def independent_over(base_cols: list[Mat], cand: Mat) -> bool:
        if not base_cols:
            return not cand.is_zero()
        stacked = base_cols[0]
        for col in base_cols[1:]:
            stacked = stacked.hstack(col)
        r0 = stacked.rank()
        return stacked.hstack(cand).rank() > r0

    chains: list[list[Mat]] = []
    for i in range(m, 0, -1):
        ki = kernels[i - 1]
        base: list[Mat] = []
        if i >= 2:
            km1 = kernels[i - 2]
            base.extend(km1.submatrix(range(n), [j]) for j in range(km1.cols))
        carried = [chain[len(chain) - i] for chain in chains if len(chain) > i]
        base.extend(carried)
        target_dim = ki.cols
        for j in range(ki.cols):
            if len(base) >= target_dim:
                break
            cand = ki.submatrix(range(n), [j])
            if independent_over(base, cand):
                head = cand
                chain = [head]
                for _ in range(i - 1):
                    chain.append(s @ chain[-1])
                chains.append(chain)
                base.append(cand)
    chains.sort(key=len, reverse=True)
    cols: list[Mat] = []
    sizes: list[int] = []
    for chain in chains:
        sizes.append(len(chain))
        cols.extend(reversed(chain))
    basis = cols[0]
    for col in cols[1:]:
        basis = basis.hstack(col)
    if not basis.is_invertible():
        raise ValueError("Jordan basis construction failed")
    return basis, sizes


def _jordan_shift(field: Field, sizes: Sequence[int]) -> Mat:
    n = sum(sizes)
    rows = [[field.zero] * n for _ in range(n)]
    off = 0
    for a in sizes:
        for k in range(1, a):
            rows[off + k - 1][off + k] = field.one
        off += a
    return Mat(field, n, n, rows)


def nilpotent_hom_basis(s: Mat, s_target: Mat) -> list[Mat]:
    """Basis of ``{g : g @ s == s_target @ g}`` for nilpotent s, s_target.

    Uses the closed-form intertwiner bases between Jordan blocks: a map
    J_a -> J_b has min(a, b) independent shifted-diagonal intertwiners.
    """
    field = s.field
    p_src, sizes_src = jordan_nilpotent(s)
    p_tgt, sizes_tgt = jordan_nilpotent(s_target)
    p_src_inv = p_src.inverse()
    n_src = s.rows
    n_tgt = s_target.rows
    out: list[Mat] = []
    off_t = 0
    for b in sizes_tgt:
        off_s = 0
        for a in sizes_src:
            for sdx in range(1, min(a, b) + 1):
                rows = [[field.zero] * n_src for _ in range(n_tgt)]
                for k in range(max(1, a - sdx + 1), a + 1):
                    rows[off_t + sdx - a + k - 1][off_s + k - 1] = field.one
                h = Mat(field, n_tgt, n_src, rows)
                out.append(p_tgt @ h @ p_src_inv)
            off_s += a
        off_t += b
    return out


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------

def rank(m: Mat) -> int:
    """Rank by exact row reduction."""
    return m.rank()


def kernel_basis(m: Mat) -> list[Mat]:
    """Basis of the right null space as a list of column vectors."""
    ker = m.kernel()
    return [ker.submatrix(range(ker.rows), [j]) for j in range(ker.cols)]


def solve_linear(m: Mat, b: Mat):
    """Solve m x = b exactly.

    Returns ``(particular, kernel_basis)`` or ``None`` when inconsistent.
    A shape mismatch raises :class:`ShapeMismatchError` instead.
    """
    x = m.solve(b)
    if x is None:
        return None
    return x, kernel_basis(m)


def find_invertible_in_span(basis: Sequence[Mat], trials: int, seed) -> Optional[tuple[list, Mat]]:
    """Search the span of square matrices for an invertible combination.

    Deterministic under the seed.  Tries each basis element, then the sum,
    then seeded random combinations.  ``None`` after ``trials`` random draws
    is inconclusive, not a proof that no invertible element exists.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    basis = list(basis)
    if not basis:
        return None
    field = basis[0].field
    n = basis[0].rows
    for m in basis:
        if m.shape != (n, n) or m.field != field:
            raise ShapeMismatchError("span basis must be square matrices of equal size")
    if n == 0:
        return [field.zero] * len(basis), basis[0]

    def check(coeffs):
        combo = Mat.zeros(field, n, n)
        for c, m in zip(coeffs, basis):
            if c != 0:
                combo = combo + m.scaled(c)
        if combo.is_invertible():
            return [field.coerce(c) for c in coeffs], combo
        return None

    for i in range(len(basis)):
        got = check([field.one if j == i else field.zero for j in range(len(basis))])
        if got:
            return got
    if len(basis) > 1:
        got = check([field.one] * len(basis))
        if got:
            return got
    rng = random.Random(f"span:{seed}")
    for _ in range(trials):
        got = check([field.random_scalar(rng) for _ in basis])
        if got:
            return got
    return None
