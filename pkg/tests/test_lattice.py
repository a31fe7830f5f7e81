"""Lattice construction, exact validation, renumbering, geometry."""

import numpy as np
import pytest

from combcluster import (LatticeError, NonBipartiteError, PhysAdjacency,
                         bicoloring, build_ring_supergraph,
                         build_torus_supergraph, check_orthogonal, coordinates,
                         expand, export_dot, export_super_triplets,
                         export_triplets, label_census,
                         renumber_permutation, renumber_to_block_hankel,
                         renumbered_diagonal_positions, torus_block_diagonals,
                         two_path_weight)
from combcluster.lattice import block_label


# ============================================================
# Torus supergraph
# ============================================================

def test_torus_m4_shorthand_segments():
    # u=3, v=5: [0^3 P1 0^5 P0 0^3 P3 0 / P2 / 0^3 P1 0^5 P0 0^3 -P3 0]
    from combcluster.lattice import torus_shorthand_entries
    entries = torus_shorthand_entries(4)
    assert len(entries) == 2 * 16 - 1 == 31
    labels = {}
    for k, e in enumerate(entries):
        if not e.is_zero:
            labels[k] = block_label(e)
    assert labels == {3: "P1", 9: "P0", 13: "P3", 15: "P2",
                      19: "P1", 25: "P0", 29: "-P3"}


@pytest.mark.parametrize("M", [4, 6, 8])
def test_torus_every_macronode_degree_four(M):
    S = build_torus_supergraph(M)
    assert S.n_macro == M * M
    degrees = [S.degree(i) for i in range(S.n_macro)]
    assert degrees == [4] * (M * M)
    assert S.n_superedges == 2 * M * M


def test_torus_label_census_one_of_each(torus6):
    census = label_census(torus6)
    for counts in census.values():
        assert counts == {"P0": 1, "P1": 1, "P2": 1, "P3": 1}


@pytest.mark.parametrize("M", [3, 5, 2, 0, -4])
def test_torus_rejects_bad_sizes(M):
    with pytest.raises(LatticeError):
        build_torus_supergraph(M)


def test_block_diagonal_positions_formula():
    for M in (4, 6, 8):
        ds = [d for d, _, _ in torus_block_diagonals(M)]
        N = M * M
        assert ds == [M - 1, N - M - 3, N - 3, N - 1,
                      N + M - 1, 2 * N - M - 3, 2 * N - 3]
        assert all(d % 2 == 1 for d in ds)  # odd diagonals: no self-loops


# ============================================================
# Expansion
# ============================================================

def test_expand_m4_entries_and_counts():
    A = expand(build_torus_supergraph(4))
    assert A.n == 64
    assert A.is_symmetric()
    assert not np.diag(A.quarters).any()
    values = set(np.unique(A.quarters))
    assert values == {-1, 0, 1}            # all nonzero entries are +-1/4
    assert A.nnz == 64 * 16                 # 2 M^2 superedges x 16 entries x 2
    assert A.nnz // 2 == 32 * 16            # unordered pairs = 32 M^2


def test_expand_empty_supergraph_is_zero():
    from combcluster import SuperAdjacency
    A = expand(SuperAdjacency(n_macro=3, block_side=2))
    assert A.n == 6
    assert not A.quarters.any()


def test_expand_row_norms_are_one(lattice6):
    # row squared-norm (sum of squares of quarters) must be exactly 16/16
    sq = (lattice6.quarters.astype(np.int64) ** 2).sum(axis=1)
    assert np.array_equal(sq, np.full(lattice6.n, 16))


# ============================================================
# Orthogonality
# ============================================================

@pytest.mark.parametrize("M", [4, 6, 8])
def test_lattice_exactly_orthogonal(M):
    A = expand(build_torus_supergraph(M))
    rep = check_orthogonal(A)
    assert rep.is_orthogonal
    assert rep.worst_deviation == 0
    assert rep.witness_pair is None
    assert not rep.has_self_loops
    # the full structural invariant at every size: symmetric, hollow,
    # entries in {0, +-1/4}, unit row norms
    assert A.is_symmetric()
    assert not np.diag(A.quarters).any()
    assert set(np.unique(A.quarters)) <= {-1, 0, 1}
    assert np.array_equal((A.quarters ** 2).sum(axis=1), np.full(A.n, 16))


def test_identity_adjacency_degenerate_but_orthogonal():
    rep = check_orthogonal(PhysAdjacency(4 * np.eye(3, dtype=np.int64)))
    assert rep.is_orthogonal
    assert rep.has_self_loops


def test_unweighted_four_cycle_not_orthogonal():
    cyc = np.zeros((4, 4), dtype=np.int64)
    for k in range(4):
        cyc[k, (k + 1) % 4] = cyc[(k + 1) % 4, k] = 4   # weight 1
    rep = check_orthogonal(PhysAdjacency(cyc))
    assert not rep.is_orthogonal
    assert rep.worst_deviation == 2    # opposite corners join via two 2-paths
    assert rep.witness_pair == (0, 0)  # first wrong entry: diagonal is 2 not 1


def test_check_orthogonal_requires_symmetry():
    bad = np.zeros((2, 2), dtype=np.int64)
    bad[0, 1] = 1
    with pytest.raises(LatticeError):
        check_orthogonal(PhysAdjacency(bad))


def test_two_path_weights(lattice6):
    # same-node two-paths sum to 1, distinct-node ones cancel to 0
    assert two_path_weight(lattice6, 0, 0) == 1
    assert two_path_weight(lattice6, 17, 17) == 1
    assert two_path_weight(lattice6, 0, 1) == 0
    assert two_path_weight(lattice6, 3, 40) == 0
    with pytest.raises(LatticeError):
        two_path_weight(lattice6, 0, lattice6.n)


def test_plain_torus_grid_has_single_term_two_paths():
    # the reason plain (scalar-weighted) toroidal grids cannot satisfy the
    # two-path cancellation: straight distance-2 pairs have exactly one
    # connecting 2-path, so the sum collapses to one nonzero term
    M = 6
    A = np.zeros((M * M, M * M), dtype=np.int64)
    for x in range(M):
        for y in range(M):
            i = x + M * y
            for j in (((x + 1) % M) + M * y, x + M * ((y + 1) % M)):
                A[i, j] = A[j, i] = 4      # unit weight
    grid = PhysAdjacency(A)
    i, k = 0, 2                            # two steps along a row
    terms = [l for l in range(M * M) if A[i, l] and A[l, k]]
    assert len(terms) == 1
    assert two_path_weight(grid, i, k) == 1
    assert not check_orthogonal(grid).is_orthogonal


# ============================================================
# Ring / crown
# ============================================================

def test_ring_expansion_is_orthogonal(crown8):
    assert crown8.n == 8
    rep = check_orthogonal(crown8)
    assert rep.is_orthogonal
    sq = (crown8.quarters ** 2).sum(axis=1)
    assert np.array_equal(sq, np.full(8, 16))   # 2 blocks x 2 entries x (1/4)


def test_ring_macronode_bipartition(ring4):
    for (i, j) in ring4.blocks:
        assert (i + j) % 2 == 1


def test_ring_odd_or_small_rejected():
    for bad in (5, 3, 2, 1):
        with pytest.raises(LatticeError):
            build_ring_supergraph(bad)


# ============================================================
# Bicoloring
# ============================================================

def test_lattice_bicoloring_is_macronode_parity(lattice6):
    colors = bicoloring(lattice6)
    expected = np.array([(i // 4) % 2 for i in range(lattice6.n)], dtype=np.int8)
    assert np.array_equal(colors.colors, expected)
    # every edge joins the two color classes
    rows, cols = np.nonzero(lattice6.quarters)
    assert np.all(colors.colors[rows] != colors.colors[cols])
    assert len(colors.nodes_of_color(0)) == len(colors.nodes_of_color(1)) == 72


def test_even_ring_alternating_coloring():
    n = 6
    A = np.zeros((n, n), dtype=np.int64)
    for k in range(n):
        A[k, (k + 1) % n] = A[(k + 1) % n, k] = 4
    colors = bicoloring(PhysAdjacency(A))
    assert np.array_equal(colors.colors, np.array([0, 1, 0, 1, 0, 1]))


def test_triangle_not_bipartite():
    A = 4 * (np.ones((3, 3), dtype=np.int64) - np.eye(3, dtype=np.int64))
    with pytest.raises(NonBipartiteError):
        bicoloring(PhysAdjacency(A))


# ============================================================
# Renumbering
# ============================================================

def test_renumber_round_trip_bit_exact(lattice6):
    result = renumber_to_block_hankel(lattice6, 6)
    assert np.array_equal(result.restore().quarters, lattice6.quarters)
    # permutation is a bijection
    assert sorted(result.permutation.tolist()) == list(range(lattice6.n))


def test_renumber_produces_block_hankel(lattice6):
    from combcluster import shorthand_of
    result = renumber_to_block_hankel(lattice6, 6)
    short = shorthand_of(result.renumbered, block_side=2)
    nonzero = short.nonzero_indices()
    assert len(nonzero) == 15
    assert nonzero == renumbered_diagonal_positions(6)
    assert nonzero == [5, 27, 33, 35, 41, 63, 69, 71,
                       77, 99, 105, 107, 113, 135, 141]


def test_renumber_blocks_are_signed_pi_halves(lattice6):
    from combcluster import shorthand_of
    result = renumber_to_block_hankel(lattice6, 6)
    short = shorthand_of(result.renumbered, block_side=2)
    pattern = []
    for d in short.nonzero_indices():
        b = short.entries[d]
        assert abs(b[0, 0]) == 1 and abs(b[0, 1]) == 1
        assert b[0, 0] == b[1, 1] and b[0, 1] == b[1, 0]
        kind = "+" if b[0, 0] == b[0, 1] else "-"
        sign = "+" if b[0, 0] > 0 else "-"
        pattern.append(sign + kind)
    # strict pi-/pi+ alternation; three negated blocks, two of them the
    # wrapped second halves of the twist diagonal and one the corner
    assert pattern == ["+-", "++", "+-", "++", "+-", "++", "--", "-+",
                       "+-", "++", "+-", "++", "+-", "++", "--"]


def test_renumber_block_row_structure(lattice6):
    # every outer (2x2) block row holds exactly 8 nonzero blocks, each
    # contributing squared row weight 1/8: total row norm stays exactly 1
    result = renumber_to_block_hankel(lattice6, 6)
    B = result.renumbered.quarters
    R = B.reshape(72, 2, 72, 2).swapaxes(1, 2)
    per_row = (R != 0).any(axis=(2, 3)).sum(axis=1)
    assert np.array_equal(per_row, np.full(72, 8))
    sq = (B.astype(np.int64) ** 2).sum(axis=1)
    assert np.array_equal(sq, np.full(144, 16))


def test_renumber_rejects_unsupported_m(lattice6):
    with pytest.raises(LatticeError):
        renumber_to_block_hankel(expand(build_torus_supergraph(4)), 4)
    with pytest.raises(LatticeError):
        renumber_to_block_hankel(lattice6, 8)   # size mismatch


def test_renumber_permutation_groups_tensor_factor():
    perm = renumber_permutation(6)
    N = 36
    for m in (0, 5, 17, 35):
        for x in (0, 1):
            for z in (0, 1):
                assert perm[2 * (m + N * x) + z] == 4 * m + 2 * x + z


# ============================================================
# Coordinates
# ============================================================

def test_coordinates_bijective():
    coords = coordinates(4)
    assert len(coords.to_xy) == 16
    assert len(coords.to_index) == 16
    assert all(coords.to_index[xy] == m for m, xy in coords.to_xy.items())


@pytest.mark.parametrize("M", [4, 6, 8])
def test_axis_cycles_cover_all_macronodes(M):
    coords = coordinates(M)
    for axis in ("x", "y"):
        cyc = coords.axis_cycles[axis]
        assert len(cyc) == M * M
        assert sorted(cyc) == list(range(M * M))


def test_coordinates_x_axis_neighbors_consecutive(torus6):
    # consecutive nodes along the x walk are joined by P2/P3 superedges
    coords = coordinates(6)
    cyc = coords.axis_cycles["x"]
    for k in range(35):
        blk = torus6.block(cyc[k], cyc[k + 1])
        assert blk is not None
        assert block_label(blk).lstrip("-") in ("P2", "P3")


def test_column_row_selectors():
    coords = coordinates(6)
    col = coords.column(0)
    row = coords.row(0)
    assert len(col) == 6 and len(row) == 6
    assert len(set(col) & set(row)) == 1    # they intersect in one macronode


# ============================================================
# Exports
# ============================================================

def test_export_triplets_header_and_exactness(crown8):
    text = export_triplets(crown8)
    lines = text.splitlines()
    assert lines[0] == "n=8 denom=4"
    assert len(lines) - 1 == crown8.nnz // 2
    i, j, w = lines[1].split()
    assert w.endswith("/4")


def test_export_dot_contains_edges(crown8):
    text = export_dot(crown8)
    assert text.startswith("graph adjacency {")
    assert text.count("--") == crown8.nnz // 2


def test_export_super_triplets(ring4, torus6):
    text = export_super_triplets(ring4)
    assert text.splitlines()[0] == "n=4 block_side=2"
    assert "pi+" in text and "pi-" in text
    text6 = export_super_triplets(torus6)
    assert "-P3" in text6 and "P2" in text6
