"""Orthogonality checking, code construction, distances, and search."""

import pytest

from triortho.codes import (
    TriorthogonalMatrix,
    build_code,
    builtin_15_1_3,
    check_orthogonality,
    distances,
    search_triorthogonal,
)
from triortho.gf2 import BitMatrix, BitVector, pointwise_product, span_contains, weight

from conftest import D2_ROWS, D2_SEARCH, SMALL8_ROWS, SMALL8_SEARCH, SMALL10_ROWS, SMALL10_SEARCH


def parity(u: BitVector, v: BitVector) -> int:
    return weight(pointwise_product(u, v)) % 2


class TestCheckOrthogonality:
    def test_builtin_passes_level_3(self, builtin_matrix):
        assert check_orthogonality(builtin_matrix.matrix, 3) is None

    def test_odd_pair_overlap_reports_first_tuple(self):
        mat = BitMatrix.from_strings(["110", "011"])
        assert check_orthogonality(mat, 2) == (0, 1)

    def test_single_row_passes_any_level(self):
        mat = BitMatrix.from_strings(["1110101"])
        for h in (2, 3, 4):
            assert check_orthogonality(mat, h) is None

    def test_pass_at_level_implies_lower_levels(self, builtin_matrix, d2_matrix):
        # The check covers every tuple size from 2 up to h, so a level-3
        # pass contains the level-2 pass.
        for mat in (builtin_matrix.matrix, d2_matrix.matrix):
            assert check_orthogonality(mat, 3) is None
            assert check_orthogonality(mat, 2) is None

    def test_level_below_two_rejected(self, builtin_matrix):
        with pytest.raises(ValueError):
            check_orthogonality(builtin_matrix.matrix, 1)


class TestBuiltinMatrix:
    def test_row_weights(self, builtin_matrix):
        weights = tuple(weight(r) for r in builtin_matrix.matrix.rows)
        assert weights == (8, 8, 8, 8, 15)

    def test_rank(self, builtin_matrix):
        assert builtin_matrix.matrix.rank == 5

    def test_row_classification(self, builtin_matrix):
        assert builtin_matrix.even_rows == (0, 1, 2, 3)
        assert builtin_matrix.odd_rows == (4,)

    def test_probed_level_is_three(self, builtin_matrix):
        assert builtin_matrix.level == 3

    def test_level_four_fails(self, builtin_matrix):
        # The four even rows overlap in a single coordinate.
        with pytest.raises(ValueError):
            TriorthogonalMatrix.from_matrix(builtin_matrix.matrix, level=4)


class TestFromMatrix:
    def test_rejects_zero_rows(self):
        with pytest.raises(ValueError):
            TriorthogonalMatrix.from_matrix(BitMatrix.from_strings(["000", "111"]))

    def test_rejects_level_violation(self):
        with pytest.raises(ValueError):
            TriorthogonalMatrix.from_matrix(BitMatrix.from_strings(["110", "011"]))

    def test_single_even_row_probes_level_two(self):
        m = TriorthogonalMatrix.from_matrix(BitMatrix.from_strings(["1111"]))
        assert m.level == 2
        assert m.even_rows == (0,) and m.odd_rows == ()


class TestBuildCode:
    def test_builtin_parameters(self, builtin_code):
        assert builtin_code.n == 15
        assert builtin_code.k == 1
        assert builtin_code.x_stabilizers.row_count == 4
        assert builtin_code.z_stabilizers.row_count == 10
        assert len(builtin_code.gauge_pairs) == 6
        assert builtin_code.g0_basis.rank == 4

    def test_builtin_qubit_bookkeeping(self, builtin_code):
        stabs = builtin_code.x_stabilizers.row_count + builtin_code.z_stabilizers.row_count
        assert stabs + builtin_code.k == 15

    def test_no_odd_rows_is_an_error(self):
        m = TriorthogonalMatrix.from_matrix(BitMatrix.from_strings(["1111"]))
        with pytest.raises(ValueError):
            build_code(m)

    def test_commutation_invariants(self, builtin_code, d2_code, small10_code, small8_code):
        for code in (builtin_code, d2_code, small10_code, small8_code):
            for x in code.x_stabilizers.rows:
                for z in code.z_stabilizers.rows:
                    assert parity(x, z) == 0
            for i, lx in enumerate(code.logical_x):
                for j, lz in enumerate(code.logical_z):
                    assert parity(lx, lz) == (1 if i == j else 0)
                for z in code.z_stabilizers.rows:
                    assert parity(lx, z) == 0
                for x in code.x_stabilizers.rows:
                    assert parity(code.logical_z[i], x) == 0

    def test_gauge_pair_symplectic_structure(self, builtin_code, d2_code):
        for code in (builtin_code, d2_code):
            pairs = code.gauge_pairs
            for i, a in enumerate(pairs):
                for j, b in enumerate(pairs):
                    assert parity(a.x_part, b.z_part) == (1 if i == j else 0)
                for lx in code.logical_x:
                    assert parity(lx, a.z_part) == 0
                    assert parity(a.x_part, lx) == 0
                for x in code.x_stabilizers.rows:
                    assert parity(x, a.z_part) == 0

    def test_g0_inside_complement(self, builtin_code, d2_code, small10_code):
        for code in (builtin_code, d2_code, small10_code):
            for g in code.g0_basis.rows:
                assert span_contains(code.z_stabilizers, g)

    def test_gauge_z_parts_complete_the_complement(self, builtin_code, d2_code):
        # g0 plus the gauge z parts together span the full complement.
        for code in (builtin_code, d2_code):
            combined = BitMatrix(
                list(code.g0_basis.rows) + [p.z_part for p in code.gauge_pairs],
                code.n,
            )
            assert combined.rank == code.z_stabilizers.rank
            for z in code.z_stabilizers.rows:
                assert span_contains(combined, z)

    def test_k2_search_hit_builds_cleanly(self):
        m = search_triorthogonal(n=12, k=2, m_even=2, budget=20000, seed=0)
        assert m is not None
        code = build_code(m)
        assert code.k == 2
        for i, lx in enumerate(code.logical_x):
            for j, lz in enumerate(code.logical_z):
                assert parity(lx, lz) == (1 if i == j else 0)


class TestDistances:
    def test_builtin_exact(self, builtin_code):
        d_x, d_z = distances(builtin_code)
        assert (d_x, d_z) == (7, 3)
        assert min(d_x, d_z) == 3
        assert d_z <= d_x

    def test_searched_codes_exact(self, d2_code, small10_code, small8_code):
        assert distances(d2_code) == (7, 2)
        assert distances(small10_code) == (3, 1)
        assert distances(small8_code) == (1, 1)

    def test_column_permutation_preserves_parameters(self, builtin_matrix):
        base = build_code(builtin_matrix)
        base_d = distances(base)
        perm = [14, 3, 7, 0, 11, 1, 9, 5, 13, 2, 8, 6, 12, 4, 10]
        permuted_rows = []
        for row in builtin_matrix.matrix.rows:
            permuted_rows.append(
                BitVector.from_support(
                    [perm[i] for i in row.support()], builtin_matrix.n
                )
            )
        shuffled = TriorthogonalMatrix.from_matrix(BitMatrix(permuted_rows, builtin_matrix.n))
        code = build_code(shuffled)
        assert (code.n, code.k) == (base.n, base.k)
        assert len(code.gauge_pairs) == len(base.gauge_pairs)
        assert distances(code) == base_d


class TestSearch:
    def test_reproduces_frozen_d2_fixture(self):
        m = search_triorthogonal(**D2_SEARCH)
        assert m is not None
        assert tuple(r.to_string() for r in m.matrix.rows) == D2_ROWS

    def test_reproduces_frozen_small_fixtures(self):
        m10 = search_triorthogonal(**SMALL10_SEARCH)
        assert tuple(r.to_string() for r in m10.matrix.rows) == SMALL10_ROWS
        m8 = search_triorthogonal(**SMALL8_SEARCH)
        assert tuple(r.to_string() for r in m8.matrix.rows) == SMALL8_ROWS

    def test_determinism(self):
        a = search_triorthogonal(n=14, k=2, m_even=2, budget=30000, seed=1)
        b = search_triorthogonal(n=14, k=2, m_even=2, budget=30000, seed=1)
        if a is None:
            assert b is None
        else:
            assert tuple(r.to_string() for r in a.matrix.rows) == tuple(
                r.to_string() for r in b.matrix.rows
            )

    def test_hit_satisfies_requested_profile(self, d2_matrix):
        m = search_triorthogonal(n=15, k=1, m_even=4, budget=30000, seed=0)
        assert m is not None
        assert check_orthogonality(m.matrix, 3) is None
        assert len(m.even_rows) == 4 and len(m.odd_rows) == 1
        assert m.matrix.rank == 5
        assert len(d2_matrix.even_rows) == 3 and len(d2_matrix.odd_rows) == 1

    def test_disjoint_odd_rows_profile(self):
        m = search_triorthogonal(n=3, k=3, m_even=0, budget=10000, seed=0)
        assert m is not None
        assert sorted(r.to_string() for r in m.matrix.rows) == ["001", "010", "100"]
        assert check_orthogonality(m.matrix, 3) is None

    def test_infeasible_profile_exhausts_budget(self):
        # Five independent rows cannot fit in four columns.
        assert search_triorthogonal(n=4, k=2, m_even=3, budget=300, seed=0) is None

    def test_zero_budget_finds_nothing(self):
        assert search_triorthogonal(n=14, k=1, m_even=3, budget=0, seed=0) is None

    def test_column_count_guard(self):
        with pytest.raises(ValueError):
            search_triorthogonal(n=33, k=1, m_even=3, budget=10, seed=0)

    def test_empty_profile_rejected(self):
        with pytest.raises(ValueError):
            search_triorthogonal(n=5, k=0, m_even=0, budget=10, seed=0)
