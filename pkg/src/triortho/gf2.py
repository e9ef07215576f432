"""GF(2) linear algebra on bit-packed vectors and matrices.

Vectors over GF(2) are stored as Python integers, one bit per coordinate,
with bit ``i`` holding coordinate ``i``.  The text form of a vector is a
string of ``0``/``1`` characters whose leftmost character is coordinate 0,
so ``BitVector.from_string("0110").value == 0b0110 == 6``.

All operations that combine two vectors are length checked.  Enumeration
helpers refuse spans larger than ``2**ENUMERATION_GUARD`` elements.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

__all__ = [
    "ENUMERATION_GUARD",
    "BitVector",
    "BitMatrix",
    "weight",
    "pointwise_product",
    "RrefResult",
    "rref",
    "orthogonal_complement",
    "span_contains",
    "enumerate_span",
    "parse_matrix",
    "format_matrix",
    "read_matrix",
    "write_matrix",
]

# Spans of rank above this are refused rather than enumerated.
ENUMERATION_GUARD = 25


class BitVector:
    """An immutable vector over GF(2) of fixed length ``n``.

    The integer ``value`` packs the coordinates, bit ``i`` = coordinate ``i``.
    Length is fixed at creation and every binary operation checks it.
    """

    __slots__ = ("value", "n")

    def __init__(self, value: int, n: int) -> None:
        if n < 0:
            raise ValueError(f"length must be nonnegative, got {n}")
        if value < 0 or value >> n:
            raise ValueError(f"value 0x{value:x} does not fit in {n} bits")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name: str, val: object) -> None:
        raise AttributeError("BitVector is immutable")

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """Parse a 0/1 string whose leftmost character is coordinate 0."""
        value = 0
        for i, ch in enumerate(text):
            if ch == "1":
                value |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid character {ch!r} in bit string")
        return cls(value, len(text))

    @classmethod
    def from_support(cls, support: Iterable[int], n: int) -> "BitVector":
        value = 0
        for i in support:
            if not 0 <= i < n:
                raise ValueError(f"support index {i} out of range for length {n}")
            value |= 1 << i
        return cls(value, n)

    def to_string(self) -> str:
        return "".join("1" if (self.value >> i) & 1 else "0" for i in range(self.n))

    @property
    def weight(self) -> int:
        """Hamming weight."""
        return self.value.bit_count()

    def bit(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ValueError(f"index {i} out of range for length {self.n}")
        return (self.value >> i) & 1

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.value >> i) & 1)

    def _check_length(self, other: "BitVector") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} != {other.n}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_length(other)
        return BitVector(self.value ^ other.value, self.n)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check_length(other)
        return BitVector(self.value & other.value, self.n)

    def dot(self, other: "BitVector") -> int:
        """Inner product over GF(2): parity of the overlap."""
        self._check_length(other)
        return (self.value & other.value).bit_count() & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.value == other.value and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.value, self.n))

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"BitVector({self.to_string()!r})"


class BitMatrix:
    """An immutable matrix over GF(2), stored as a tuple of BitVector rows."""

    __slots__ = ("rows", "n")

    def __init__(self, rows: Sequence[BitVector], n: Optional[int] = None) -> None:
        rows = tuple(rows)
        if n is None:
            if not rows:
                raise ValueError("column count required for an empty matrix")
            n = rows[0].n
        for r in rows:
            if r.n != n:
                raise ValueError(f"row length {r.n} does not match column count {n}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n", n)

    def __setattr__(self, name: str, val: object) -> None:
        raise AttributeError("BitMatrix is immutable")

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BitMatrix":
        return cls([BitVector.from_string(line) for line in lines])

    @classmethod
    def from_ints(cls, values: Iterable[int], n: int) -> "BitMatrix":
        return cls([BitVector(v, n) for v in values], n)

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def col_count(self) -> int:
        return self.n

    def row_values(self) -> list[int]:
        return [r.value for r in self.rows]

    @property
    def rank(self) -> int:
        return len(_rref_ints(self.row_values(), self.n)[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.rows, self.n))

    def __repr__(self) -> str:
        return f"BitMatrix({[r.to_string() for r in self.rows]!r})"


def weight(v: BitVector) -> int:
    """Hamming weight of ``v``."""
    return v.weight


def pointwise_product(u: BitVector, v: BitVector) -> BitVector:
    """Coordinatewise product, the AND of the two vectors."""
    return u & v


def _rref_ints(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form on raw integer rows.

    Returns (nonzero rows in pivot order, pivot columns).  Each returned row
    has a leading 1 in its pivot column and that column is cleared in every
    other row, so the output is a canonical basis of the row space.
    """
    work = list(rows)
    out: list[int] = []
    pivots: list[int] = []
    for col in range(n):
        mask = 1 << col
        pivot_row = None
        for idx, r in enumerate(work):
            if r & mask:
                pivot_row = work.pop(idx)
                break
        if pivot_row is None:
            continue
        out = [r ^ pivot_row if r & mask else r for r in out]
        work = [r ^ pivot_row if r & mask else r for r in work]
        out.append(pivot_row)
        pivots.append(col)
        if not any(work):
            break
    return out, pivots


@dataclass(frozen=True)
class RrefResult:
    matrix: BitMatrix
    rank: int
    pivot_columns: tuple[int, ...]


def rref(matrix: BitMatrix) -> RrefResult:
    """Reduced row echelon form with zero rows dropped.

    The result's rows are ordered by pivot column, each pivot column is zero
    in every other row, and the row space equals that of the input.  This is
    the canonical basis used throughout the package.
    """
    out, pivots = _rref_ints(matrix.row_values(), matrix.n)
    return RrefResult(BitMatrix.from_ints(out, matrix.n), len(out), tuple(pivots))


def orthogonal_complement(matrix: BitMatrix) -> BitMatrix:
    """Canonical basis of the space of vectors orthogonal to every row.

    The kernel of the matrix (as a bilinear form), returned in reduced row
    echelon form.  Its rank is ``n - rank(matrix)``.
    """
    n = matrix.n
    reduced, pivots = _rref_ints(matrix.row_values(), n)
    pivot_set = set(pivots)
    kernel: list[int] = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = 1 << free
        for row, p in zip(reduced, pivots):
            if (row >> free) & 1:
                v |= 1 << p
        kernel.append(v)
    canonical, _ = _rref_ints(kernel, n)
    return BitMatrix.from_ints(canonical, n)


def span_contains(matrix: BitMatrix, v: BitVector) -> bool:
    """Whether ``v`` lies in the row space of ``matrix``."""
    if v.n != matrix.n:
        raise ValueError(f"length mismatch: {v.n} != {matrix.n}")
    reduced, pivots = _rref_ints(matrix.row_values(), matrix.n)
    residue = v.value
    for row, p in zip(reduced, pivots):
        if (residue >> p) & 1:
            residue ^= row
    return residue == 0


def _enumerate_span_ints(basis: list[int], shift: int = 0) -> Iterator[int]:
    """Yield every element of shift + span(basis) exactly once, Gray ordered.

    ``basis`` must already be linearly independent.
    """
    current = shift
    yield current
    for i in range(1, 1 << len(basis)):
        current ^= basis[(i & -i).bit_length() - 1]
        yield current


def enumerate_span(matrix: BitMatrix, shift: Optional[BitVector] = None) -> Iterator[BitVector]:
    """Iterate over the coset ``shift + rowspace(matrix)``, each element once.

    Refuses spans of rank above ENUMERATION_GUARD.
    """
    reduced, _ = _rref_ints(matrix.row_values(), matrix.n)
    if len(reduced) > ENUMERATION_GUARD:
        raise ValueError(
            f"span of rank {len(reduced)} exceeds enumeration guard 2**{ENUMERATION_GUARD}"
        )
    start = 0
    if shift is not None:
        if shift.n != matrix.n:
            raise ValueError(f"length mismatch: {shift.n} != {matrix.n}")
        start = shift.value
    n = matrix.n
    for value in _enumerate_span_ints(reduced, start):
        yield BitVector(value, n)


def parse_matrix(text: str) -> BitMatrix:
    """Parse the matrix text format.

    One row per line as 0/1 characters, coordinate 0 leftmost.  Blank lines
    and lines starting with ``#`` are ignored.  All rows must have equal
    length.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append(line)
    if not lines:
        raise ValueError("no matrix rows found")
    return BitMatrix.from_strings(lines)


def format_matrix(matrix: BitMatrix, comments: Sequence[str] = ()) -> str:
    """Render a matrix in the text format, with optional leading comments."""
    out = [f"# {c}" for c in comments]
    out.extend(r.to_string() for r in matrix.rows)
    return "\n".join(out) + "\n"


def read_matrix(path: str | os.PathLike) -> BitMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read())


def write_matrix(path: str | os.PathLike, matrix: BitMatrix, comments: Sequence[str] = ()) -> None:
    """Write a matrix file atomically."""
    _atomic_write_text(path, format_matrix(matrix, comments))


def _atomic_write_text(path: str | os.PathLike, text: str) -> None:
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
