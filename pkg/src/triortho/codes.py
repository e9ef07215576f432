"""Triorthogonal matrices and the stabilizer codes built from them.

A binary matrix is orthogonal at level ``h`` when every product of ``j``
distinct rows, for ``2 <= j <= h``, has even weight.  Level 3 is the
triorthogonality condition.  Rows of odd weight become logical operators of
the derived code; rows of even weight become X stabilizers.  Z stabilizers
are a basis of the orthogonal complement of the whole matrix, and the
leftover directions of that complement pair up into gauge degrees of
freedom.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .gf2 import (
    ENUMERATION_GUARD,
    BitMatrix,
    BitVector,
    _enumerate_span_ints,
    _rref_ints,
    orthogonal_complement,
)

__all__ = [
    "check_orthogonality",
    "TriorthogonalMatrix",
    "builtin_15_1_3",
    "GaugePair",
    "TriorthogonalCode",
    "build_code",
    "distances",
    "search_triorthogonal",
]


def _check_orthogonality_ints(rows: list[int], level: int) -> Optional[tuple[int, ...]]:
    for j in range(2, level + 1):
        for combo in itertools.combinations(range(len(rows)), j):
            product = rows[combo[0]]
            for idx in combo[1:]:
                product &= rows[idx]
            if product.bit_count() & 1:
                return combo
    return None


def check_orthogonality(matrix: BitMatrix, level: int) -> Optional[tuple[int, ...]]:
    """Check all j-fold row products for 2 <= j <= level.

    Returns None when every product has even weight, otherwise the first
    violating tuple of row indices (smallest j first, lexicographic within).
    """
    if level < 2:
        raise ValueError(f"level must be at least 2, got {level}")
    return _check_orthogonality_ints(matrix.row_values(), level)


@dataclass(frozen=True)
class TriorthogonalMatrix:
    """A matrix verified orthogonal up to ``level``, rows split by parity.

    ``even_rows`` and ``odd_rows`` are row indices into ``matrix``.  Level 3
    is required for transversal CCZ; level 2 already yields a valid CSS
    code and suffices for transversal CZ.
    """

    matrix: BitMatrix
    even_rows: tuple[int, ...]
    odd_rows: tuple[int, ...]
    level: int

    @classmethod
    def from_matrix(cls, matrix: BitMatrix, level: Optional[int] = None) -> "TriorthogonalMatrix":
        """Verify a matrix and classify its rows.

        With ``level=None`` the highest passing level is probed, up to the
        row count (beyond which the conditions are vacuous).  An explicit
        level is verified exactly.  Raises ValueError on violation, naming
        the offending row tuple.
        """
        rows = matrix.row_values()
        if any(r == 0 for r in rows):
            raise ValueError("zero rows are not allowed")
        if level is None:
            probed = 1
            for h in range(2, max(matrix.row_count, 2) + 1):
                if _check_orthogonality_ints(rows, h) is not None:
                    break
                probed = h
            if probed < 2:
                violation = _check_orthogonality_ints(rows, 2)
                raise ValueError(f"rows {violation} have odd product weight at level 2")
            level = probed
        else:
            if level < 2:
                raise ValueError(f"level must be at least 2, got {level}")
            violation = _check_orthogonality_ints(rows, level)
            if violation is not None:
                raise ValueError(
                    f"rows {violation} have odd product weight at level {len(violation)}"
                )
        even = tuple(i for i, r in enumerate(rows) if r.bit_count() % 2 == 0)
        odd = tuple(i for i, r in enumerate(rows) if r.bit_count() % 2 == 1)
        return cls(matrix=matrix, even_rows=even, odd_rows=odd, level=level)

    @property
    def n(self) -> int:
        return self.matrix.n

    def even_matrix(self) -> BitMatrix:
        return BitMatrix([self.matrix.rows[i] for i in self.even_rows], self.matrix.n)

    def odd_vectors(self) -> tuple[BitVector, ...]:
        return tuple(self.matrix.rows[i] for i in self.odd_rows)


_BUILTIN_15_1_3_ROWS = (
    "000000011111111",
    "000111100001111",
    "011001100110011",
    "101010101010101",
    "111111111111111",
)


def builtin_15_1_3() -> TriorthogonalMatrix:
    """The 15-qubit, one-logical-qubit triorthogonal matrix.

    Four even rows of weight 8 and one odd row of weight 15.  The derived
    code has distance 3 and a transversal CCZ across three blocks.
    """
    return TriorthogonalMatrix.from_matrix(BitMatrix.from_strings(_BUILTIN_15_1_3_ROWS))


@dataclass(frozen=True)
class GaugePair:
    """An anticommuting X/Z pair acting only on gauge degrees of freedom."""

    x_part: BitVector
    z_part: BitVector


@dataclass
class TriorthogonalCode:
    """A CSS code with explicit logical and gauge structure.

    X stabilizers are the even rows as given.  Z stabilizers are a canonical
    basis of the orthogonal complement of the full matrix.  Each odd row
    serves as both the X and Z support of one logical qubit.  Gauge pairs
    are X/Z supports inside the complement that anticommute within a pair
    and commute with everything else.
    """

    source: TriorthogonalMatrix
    n: int
    k: int
    x_stabilizers: BitMatrix
    z_stabilizers: BitMatrix
    logical_x: tuple[BitVector, ...]
    logical_z: tuple[BitVector, ...]
    gauge_pairs: tuple[GaugePair, ...]
    g0_basis: BitMatrix
    d_x: Optional[int] = None
    d_z: Optional[int] = None
    _decoder: dict[int, int] = field(default_factory=dict, repr=False)

    def x_syndrome_of(self, pattern: int) -> int:
        """Syndrome of an X error pattern: bit j is the parity against
        X-stabilizer basis row j."""
        syndrome = 0
        for j, row in enumerate(self.g0_basis.row_values()):
            syndrome |= ((row & pattern).bit_count() & 1) << j
        return syndrome

    def decode_x(self, syndrome: int) -> Optional[BitVector]:
        """Minimum-weight X pattern with the given syndrome, or None when
        the lookup has no entry (weight beyond the enumerated radius)."""
        pattern = self._decoder.get(syndrome)
        if pattern is None:
            return None
        return BitVector(pattern, self.n)


def _invert_gf2(rows: list[int], size: int) -> Optional[list[int]]:
    """Invert a size x size binary matrix, rows as ints.  None if singular."""
    aug = [rows[i] | (1 << (size + i)) for i in range(size)]
    for col in range(size):
        mask = 1 << col
        pivot = None
        for idx in range(col, size):
            if aug[idx] & mask:
                pivot = idx
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for idx in range(size):
            if idx != col and aug[idx] & mask:
                aug[idx] ^= aug[col]
    return [r >> size for r in aug]


def _build_decoder(g0_rows: list[int], n: int) -> dict[int, int]:
    """Map each reachable syndrome to a minimum-weight X pattern.

    Patterns are enumerated by increasing weight, so the first pattern seen
    for a syndrome is minimum weight.  Enumeration stops once every
    syndrome of the full group is covered, or when the pattern count would
    exceed the enumeration guard.
    """
    target = 1 << len(g0_rows)
    table: dict[int, int] = {0: 0}
    budget = 1 << ENUMERATION_GUARD
    seen = 1
    for w in range(1, n + 1):
        if len(table) == target or seen >= budget:
            break
        for combo in itertools.combinations(range(n), w):
            seen += 1
            pattern = 0
            for i in combo:
                pattern |= 1 << i
            syndrome = 0
            for j, row in enumerate(g0_rows):
                syndrome |= ((row & pattern).bit_count() & 1) << j
            if syndrome not in table:
                table[syndrome] = pattern
                if len(table) == target:
                    break
            if seen >= budget:
                break
    return table


def build_code(source: TriorthogonalMatrix) -> TriorthogonalCode:
    """Derive the full code structure from a verified matrix.

    Raises ValueError when there are no odd rows (no logical qubits) or when
    the odd rows are dependent modulo the even-row span (duplicate
    logicals).
    """
    matrix = source.matrix
    n = matrix.n
    k = len(source.odd_rows)
    if k == 0:
        raise ValueError("matrix has no odd rows, so the code has no logical qubits")

    even = source.even_matrix()
    g0_reduced, g0_pivots = _rref_ints(even.row_values(), n)
    g0_basis = BitMatrix.from_ints(g0_reduced, n)

    full_rank = matrix.rank
    if full_rank != len(g0_reduced) + k:
        raise ValueError(
            "odd rows are dependent modulo the even rows; logical operators collide"
        )

    complement = orthogonal_complement(matrix)

    # Extend the even-row basis to a basis of the complement.  The new
    # directions represent the quotient carrying the gauge structure.
    echelon: list[tuple[int, int]] = []
    for row in g0_reduced:
        reduced = row
        for p, r in echelon:
            if (reduced >> p) & 1:
                reduced ^= r
        echelon.append(((reduced & -reduced).bit_length() - 1, reduced))
    quotient_reps: list[int] = []
    for row in complement.row_values():
        reduced = row
        for p, r in echelon:
            if (reduced >> p) & 1:
                reduced ^= r
        if reduced:
            echelon.append(((reduced & -reduced).bit_length() - 1, reduced))
            quotient_reps.append(row)
    g = len(quotient_reps)
    assert len(g0_reduced) + g == complement.row_count

    # The overlap-parity form is nondegenerate on the quotient, so the Gram
    # matrix of the representatives inverts; its inverse mixes the
    # representatives into a dual basis, giving pairwise symplectic pairs.
    gauge_pairs: tuple[GaugePair, ...] = ()
    if g:
        gram = []
        for i in range(g):
            row = 0
            for j in range(g):
                row |= ((quotient_reps[i] & quotient_reps[j]).bit_count() & 1) << j
            gram.append(row)
        inverse = _invert_gf2(gram, g)
        if inverse is None:
            raise ValueError("gauge pairing is degenerate; matrix is not self-consistent")
        x_parts = []
        for i in range(g):
            acc = 0
            for j in range(g):
                if (inverse[i] >> j) & 1:
                    acc ^= quotient_reps[j]
            x_parts.append(acc)
        for i in range(g):
            for j in range(g):
                pairing = (x_parts[i] & quotient_reps[j]).bit_count() & 1
                assert pairing == (1 if i == j else 0)
        gauge_pairs = tuple(
            GaugePair(x_part=BitVector(x, n), z_part=BitVector(z, n))
            for x, z in zip(x_parts, quotient_reps)
        )

    logicals = source.odd_vectors()
    for i, u in enumerate(logicals):
        for j, v in enumerate(logicals):
            expected = 1 if i == j else 0
            assert u.dot(v) == expected

    code = TriorthogonalCode(
        source=source,
        n=n,
        k=k,
        x_stabilizers=even,
        z_stabilizers=complement,
        logical_x=logicals,
        logical_z=logicals,
        gauge_pairs=gauge_pairs,
        g0_basis=g0_basis,
        _decoder=_build_decoder(g0_reduced, n),
    )
    return code


def distances(code: TriorthogonalCode) -> tuple[int, int]:
    """Exhaustive X and Z distances.

    d_x is the minimum weight over the matrix row space excluding the
    even-row span; d_z is the minimum weight over vectors orthogonal to all
    even rows but not to every odd row.  Both enumerations respect the
    guard.  Results are cached on the code.
    """
    if code.d_x is not None and code.d_z is not None:
        return code.d_x, code.d_z
    n = code.n
    g0 = code.g0_basis.row_values()
    odd = [v.value for v in code.logical_x]

    if len(g0) + len(odd) > ENUMERATION_GUARD:
        raise ValueError("row space too large to enumerate")
    d_x = n
    for shift in _enumerate_span_ints(odd):
        if shift == 0:
            continue
        for v in _enumerate_span_ints(g0, shift):
            w = v.bit_count()
            if w < d_x:
                d_x = w

    g0_perp = orthogonal_complement(code.g0_basis).row_values()
    if len(g0_perp) > ENUMERATION_GUARD:
        raise ValueError("stabilizer complement too large to enumerate")
    d_z = n
    for v in _enumerate_span_ints(g0_perp):
        if v == 0:
            continue
        if any((v & f).bit_count() & 1 for f in odd):
            w = v.bit_count()
            if w < d_z:
                d_z = w

    code.d_x, code.d_z = d_x, d_z
    return d_x, d_z


def _solve_affine(
    masks: list[int], rhs_bits: list[int], n: int
) -> Optional[tuple[int, list[int]]]:
    # Solve mask . r = rhs over GF(2); returns (particular, kernel basis)
    # or None when inconsistent.
    system = [(m, b) for m, b in zip(masks, rhs_bits)]
    echelon: list[tuple[int, int, int]] = []  # (pivot column, mask, rhs)
    for mask, rhs in system:
        for pivot, pmask, prhs in echelon:
            if (mask >> pivot) & 1:
                mask ^= pmask
                rhs ^= prhs
        if mask == 0:
            if rhs:
                return None
            continue
        echelon.append((mask.bit_length() - 1, mask, rhs))
    for i in range(len(echelon)):
        pivot, mask, rhs = echelon[i]
        for j in range(len(echelon)):
            if j != i and (echelon[j][1] >> pivot) & 1:
                echelon[j] = (echelon[j][0], echelon[j][1] ^ mask, echelon[j][2] ^ rhs)
    pivots = {pivot for pivot, _, _ in echelon}
    particular = 0
    for pivot, _, rhs in echelon:
        if rhs:
            particular |= 1 << pivot
    kernel = []
    for col in range(n):
        if col in pivots:
            continue
        vec = 1 << col
        for pivot, mask, _ in echelon:
            if (mask >> col) & 1:
                vec |= 1 << pivot
        kernel.append(vec)
    return particular, kernel


def search_triorthogonal(
    n: int,
    k: int,
    m_even: int,
    budget: int,
    seed: int,
) -> Optional[TriorthogonalMatrix]:
    """Seeded randomized search for a full-rank level-3 matrix with
    ``m_even`` even-weight and ``k`` odd-weight rows.

    Rows are grown one at a time.  Every pair and triple parity constraint
    on the next row is linear in it, so candidates are sampled uniformly
    from the affine solution space and kept when they extend the rank; a
    stalled or inconsistent partial matrix is thrown away and the search
    restarts.  The budget counts candidate rows drawn.  Deterministic for a
    given seed; returns None when the budget is exhausted.

    Profile guidance for distance-2 targets: the even rows must jointly
    touch every column, yet inclusion-exclusion mod 2 makes their union's
    size even whenever m_even <= 3, and with m_even <= 2 an odd row's own
    parity contradicts a covering union outright.  Full coverage therefore
    needs m_even >= 3 and, at m_even = 3, an even n.
    """
    if n < 1 or k < 0 or m_even < 0 or k + m_even < 1:
        raise ValueError("need a positive number of rows and columns")
    if n > 32:
        raise ValueError(f"search supports up to 32 columns, got {n}")
    rng = random.Random(seed)
    all_ones = (1 << n) - 1
    # Even rows first, then odd, matching the emitted row order.
    parities = [0] * m_even + [1] * k

    kept: list[int] = []
    stall = 0
    spent = 0
    while spent < budget:
        parity = parities[len(kept)]
        masks = [all_ones] + kept
        rhs = [parity] + [0] * len(kept)
        for a, b in itertools.combinations(kept, 2):
            masks.append(a & b)
            rhs.append(0)
        solved = _solve_affine(masks, rhs, n)
        extended = False
        if solved is not None:
            particular, kernel = solved
            while spent < budget:
                spent += 1
                r = particular
                if kernel:
                    pick = rng.getrandbits(len(kernel))
                    for i, vec in enumerate(kernel):
                        if (pick >> i) & 1:
                            r ^= vec
                reduced, _ = _rref_ints(kept + [r], n)
                if r and len(reduced) == len(kept) + 1:
                    kept.append(r)
                    extended = True
                    break
                stall += 1
                # A kernel of dimension d only holds 2^d candidates; give up
                # on the slot once repeats become likely.
                if not kernel or stall >= min(50, 2 ** len(kernel)):
                    break
        if not extended:
            kept = []
            stall = 0
            if solved is None:
                spent += 1
            continue
        stall = 0
        if len(kept) == m_even + k:
            if _check_orthogonality_ints(kept, 3) is not None:
                kept = []
                continue
            return TriorthogonalMatrix.from_matrix(BitMatrix.from_ints(kept, n), level=3)
    return None
