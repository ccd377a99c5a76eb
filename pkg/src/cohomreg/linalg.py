"""Dense exact linear algebra over the prime field F_p.

Row-major byte storage, p < 256.  Pivoting is deterministic (first nonzero
entry in column order) so every basis produced downstream is reproducible
byte for byte.  Matrices are immutable after construction and all
operations are pure functions.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

_SMALL_PRIMES = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
    229, 233, 239, 241, 251,
}


def is_small_prime(p: int) -> bool:
    return p in _SMALL_PRIMES


class MatrixGFp:
    """Immutable dense matrix with entries in [0, p)."""

    __slots__ = ("prime", "rows", "cols", "entries")

    def __init__(self, prime: int, rows: int, cols: int, entries: Iterable[int]):
        if not is_small_prime(prime):
            raise ValueError(f"modulus {prime} is not a prime below 256")
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        data = bytes(entries)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        if any(e >= prime for e in data):
            raise ValueError(f"entry out of range for F_{prime}")
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixGFp is immutable")

    @classmethod
    def from_rows(cls, prime: int, rows: list[list[int]] | list[tuple[int, ...]],
                  cols: int | None = None) -> "MatrixGFp":
        n_rows = len(rows)
        if cols is None:
            if n_rows == 0:
                raise ValueError("cannot infer column count from zero rows")
            cols = len(rows[0])
        flat = bytearray()
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(x % prime for x in row)
        return cls(prime, n_rows, cols, flat)

    @classmethod
    def zero(cls, prime: int, rows: int, cols: int) -> "MatrixGFp":
        return cls(prime, rows, cols, bytes(rows * cols))

    @classmethod
    def identity(cls, prime: int, n: int) -> "MatrixGFp":
        flat = bytearray(n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls(prime, n, n, flat)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MatrixGFp) and self.prime == other.prime
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.prime, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"MatrixGFp(p={self.prime}, {self.rows}x{self.cols})"

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols:(i + 1) * self.cols])

    def row_list(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]


class Echelon(NamedTuple):
    matrix: MatrixGFp
    pivots: list[int]


def rref_in_place(prime: int, work: list[bytearray], cols: int) -> list[int]:
    """In-place reduced row echelon form; returns pivot columns."""
    pivots: list[int] = []
    pivot_row = 0
    n_rows = len(work)
    for col in range(cols):
        found = -1
        for r in range(pivot_row, n_rows):
            if work[r][col]:
                found = r
                break
        if found < 0:
            continue
        if found != pivot_row:
            work[pivot_row], work[found] = work[found], work[pivot_row]
        row = work[pivot_row]
        inv = pow(row[col], prime - 2, prime)
        if inv != 1:
            for j in range(col, cols):
                row[j] = row[j] * inv % prime
        for r in range(n_rows):
            if r == pivot_row:
                continue
            f = work[r][col]
            if f:
                target = work[r]
                for j in range(col, cols):
                    target[j] = (target[j] - f * row[j]) % prime
        pivots.append(col)
        pivot_row += 1
        if pivot_row == n_rows:
            break
    return pivots


def rref(m: MatrixGFp) -> Echelon:
    """Reduced row echelon form and pivot columns; preserves the row space."""
    work = [bytearray(m.row(i)) for i in range(m.rows)]
    pivots = rref_in_place(m.prime, work, m.cols)
    flat = bytearray()
    for row in work:
        flat.extend(row)
    return Echelon(MatrixGFp(m.prime, m.rows, m.cols, flat), pivots)


def rank(m: MatrixGFp) -> int:
    return len(rref(m).pivots)


def kernel_basis(m: MatrixGFp) -> list[tuple[int, ...]]:
    """Basis of the right null space; each vector v satisfies m @ v = 0.

    Vectors are emitted in ascending free-column order, normalised so the
    free coordinate equals 1.
    """
    p = m.prime
    echelon, pivots = rref(m)
    pivot_set = set(pivots)
    basis: list[tuple[int, ...]] = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [0] * m.cols
        v[free] = 1
        for r, c in enumerate(pivots):
            v[c] = (-echelon.entry(r, free)) % p
        basis.append(tuple(v))
    return basis


def mat_mul(a: MatrixGFp, b: MatrixGFp) -> MatrixGFp:
    if a.prime != b.prime:
        raise ValueError("prime mismatch")
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    p = a.prime
    n, k, mcols = a.rows, a.cols, b.cols
    flat = bytearray(n * mcols)
    brows = [b.row(i) for i in range(k)]
    for i in range(n):
        arow = a.row(i)
        acc = [0] * mcols
        for t in range(k):
            coeff = arow[t]
            if coeff:
                brow = brows[t]
                for j in range(mcols):
                    acc[j] += coeff * brow[j]
        base = i * mcols
        for j in range(mcols):
            flat[base + j] = acc[j] % p
    return MatrixGFp(p, n, mcols, flat)


def mat_vec(m: MatrixGFp, v: tuple[int, ...] | list[int]) -> tuple[int, ...]:
    if len(v) != m.cols:
        raise ValueError("vector length mismatch")
    p = m.prime
    out = []
    for i in range(m.rows):
        row = m.row(i)
        out.append(sum(r * x for r, x in zip(row, v)) % p)
    return tuple(out)


def mat_pow(m: MatrixGFp, k: int) -> MatrixGFp:
    if m.rows != m.cols:
        raise ValueError("power of a non-square matrix")
    result = MatrixGFp.identity(m.prime, m.rows)
    for _ in range(k):
        result = mat_mul(result, m)
    return result


def solve(m: MatrixGFp, rhs: tuple[int, ...] | list[int]) -> tuple[int, ...] | None:
    """One solution x of m @ x = rhs, or None if inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    if len(rhs) != m.rows:
        raise ValueError("rhs length mismatch")
    p = m.prime
    cols = m.cols
    work = [bytearray(m.row(i)) + bytes([rhs[i] % p]) for i in range(m.rows)]
    pivots = rref_in_place(p, work, cols + 1)
    if pivots and pivots[-1] == cols:
        return None
    x = [0] * cols
    for r, c in enumerate(pivots):
        x[c] = work[r][cols]
    return tuple(x)


class SpanBuilder:
    """Incrementally grown row space in reduced echelon form.

    Used where a span is assembled vector by vector and membership of the
    next vector must be decided immediately (minimal generator selection).
    """

    def __init__(self, prime: int, width: int):
        self.prime = prime
        self.width = width
        self.rows: list[bytearray] = []
        self.pivot_cols: list[int] = []

    def reduce(self, vec) -> bytearray:
        p = self.prime
        v = bytearray(x % p for x in vec)
        for row, c in zip(self.rows, self.pivot_cols):
            f = v[c]
            if f:
                for j in range(c, self.width):
                    v[j] = (v[j] - f * row[j]) % p
        return v

    def add(self, vec) -> bool:
        """Reduce vec against the span; grow the span if independent."""
        v = self.reduce(vec)
        lead = next((j for j in range(self.width) if v[j]), -1)
        if lead < 0:
            return False
        inv = pow(v[lead], self.prime - 2, self.prime)
        if inv != 1:
            for j in range(lead, self.width):
                v[j] = v[j] * inv % self.prime
        for row, c in zip(self.rows, self.pivot_cols):
            f = row[lead]
            if f:
                for j in range(lead, self.width):
                    row[j] = (row[j] - f * v[j]) % self.prime
        at = next((i for i, c in enumerate(self.pivot_cols) if c > lead),
                  len(self.pivot_cols))
        self.rows.insert(at, v)
        self.pivot_cols.insert(at, lead)
        return True

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    @property
    def dim(self) -> int:
        return len(self.rows)
