import random
from itertools import combinations
from fractions import Fraction
from math import gcd

import pytest

from conftest import complete_graph, criterion1_spaces, cycle_graph, path_graph
from hmag.chains import boundary_matrix, enumerate_generators
from hmag.errors import IncompleteComplex
from hmag.homology import (
    HomologyGroup,
    HomologySummary,
    fraction_free_rank,
    homology_at,
    magnitude_homology,
    snf,
)
from hmag.space import validate


def det(M):
    """Integer determinant by cofactor expansion (small matrices only)."""
    n = len(M)
    if n == 0:
        return 1
    return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1 :] for r in M[1:]]) for j in range(n) if M[0][j])


def minors_gcd(A, k):
    """gcd of all k x k minors: the product of the first k invariant factors."""
    g = 0
    for rows in combinations(range(len(A)), k):
        for cols in combinations(range(len(A[0])), k):
            g = gcd(g, det([[A[r][c] for c in cols] for r in rows]))
    return g


class TestSNF:
    def test_examples(self):
        assert snf([[2, 0], [0, 3]]).factors == (1, 6)
        assert snf([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).factors == (1, 1, 1)
        z = snf([[0, 0], [0, 0]])
        assert z.rank == 0 and z.factors == ()

    def test_torsion(self):
        r = snf([[2, 4], [6, 8]])
        assert r.factors == (2, 4) and r.torsion == (2, 4)

    def test_empty(self):
        assert snf([]).rank == 0

    def test_transforms_verified(self):
        rng = random.Random(3)
        for _ in range(60):
            m, n = rng.randint(1, 6), rng.randint(1, 6)
            A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            r = snf(A, want_transforms=True)
            assert abs(det(r.U)) == 1 and abs(det(r.V)) == 1

    def test_invariant_factors_match_minors(self):
        rng = random.Random(11)
        for _ in range(40):
            m, n = rng.randint(1, 4), rng.randint(1, 4)
            A = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
            f = snf(A).factors
            prod = 1
            for k in range(1, min(m, n) + 1):
                g = minors_gcd(A, k)
                if k <= len(f):
                    prod *= f[k - 1]
                    assert g == prod
                else:
                    assert g == 0

    def test_sparse_and_dense_agree(self):
        rng = random.Random(5)
        for _ in range(100):
            m, n = rng.randint(1, 8), rng.randint(1, 8)
            A = [[rng.choice([0, 0, 0, 1, -1, 2, 3]) for _ in range(n)] for _ in range(m)]
            assert snf(A).factors == snf(A, want_transforms=True).factors
            assert snf(A).rank == fraction_free_rank(A)


def _bareiss_homology_ranks(X, L):
    """Ranks of H_n from fraction-free ranks of dense boundary matrices."""
    b = enumerate_generators(X, L)
    rk = {}
    for n, ell in b.keys():
        if n >= 1:
            rk[(n, ell)] = fraction_free_rank(boundary_matrix(X, b, n, ell).to_dense())
    out = {}
    for n, ell in b.keys():
        if b.covers(n + 1, ell):
            out[(n, ell)] = b.count(n, ell) - rk.get((n, ell), 0) - rk.get((n + 1, ell), 0)
    return out


class TestHomology:
    def test_h0(self):
        for X in criterion1_spaces()[:8] + [cycle_graph(5)]:
            H = magnitude_homology(X, 2)
            assert H.rank(0, 0) == X.n
            assert all(H.rank(0, ell) == 0 for ell in H.gradings if ell > 0)

    def test_path(self, path3):
        H = magnitude_homology(path3, 2)
        assert H.rank(1, 1) == 4
        assert H.rank(0, 0) == 3

    def test_two_point(self, two_point):
        H = magnitude_homology(two_point, 4)
        assert H.table() == {(n, Fraction(n)): (2, ()) for n in range(5)}

    def test_single_point(self, single_point):
        assert magnitude_homology(single_point, 3).table() == {(0, 0): (1, ())}

    def test_matches_bareiss(self):
        for X in criterion1_spaces()[:10] + [cycle_graph(4), complete_graph(4)]:
            H = magnitude_homology(X, 2)
            for (n, ell), r in _bareiss_homology_ranks(X, 2).items():
                assert H.rank(n, ell) == r

    def test_euler_characteristics(self):
        for X in criterion1_spaces():
            H = magnitude_homology(X, 3)
            for ell in H.gradings:
                assert H.euler(ell) == H.chain_euler(ell)

    def test_homology_at(self, path3):
        b = enumerate_generators(path3, 2)
        assert homology_at(path3, b, {}, 1, 1) == (4, ())
        capped = enumerate_generators(path3, 2, max_degree=2)
        with pytest.raises(IncompleteComplex):
            homology_at(path3, capped, None, 2, 2)

    def test_skeletonizes(self):
        X = validate([[0, 0, 1], [0, 0, 1], [1, 1, 0]], ["a", "b", "c"])
        H = magnitude_homology(X, 2)
        assert H.labels == ("a", "c")
        assert H.table() == {(n, Fraction(n)): (2, ()) for n in range(3)}

    def test_cycle_c5(self):
        H = magnitude_homology(cycle_graph(5), 4)
        assert H.rank(2, 3) == 10
        assert H.rank(3, 4) == 30

    def test_max_degree(self, k3):
        H = magnitude_homology(k3, 3, max_degree=1)
        assert H.degrees == [0, 1]
        assert H.rank(1, 1) == 6


class TestSummary:
    def test_torsion_rendering(self):
        S = HomologySummary(("a",), Fraction(1), None)
        S.groups[(0, Fraction(0))] = HomologyGroup(1)
        S.groups[(1, Fraction(1))] = HomologyGroup(0, (2,))
        S.chain_ranks = {(0, Fraction(0)): 1, (1, Fraction(1)): 1}
        assert S.has_torsion()
        text = S.to_text()
        assert "TORSION FOUND" in text and "0+Z/2" in text
        assert S.to_json()["has_torsion"] is True

    def test_json(self, two_point):
        js = magnitude_homology(two_point, 1).to_json()
        assert js["groups"] == [
            {"degree": 0, "grading": "0", "rank": 2, "torsion": []},
            {"degree": 1, "grading": "1", "rank": 2, "torsion": []},
        ]

    def test_text(self, two_point):
        lines = magnitude_homology(two_point, 2).to_text().splitlines()
        assert lines[0].split() == ["n", "\\", "l", "0", "1", "2"]
        assert lines[3].split() == ["2", "0", "0", "2"]


def test_paths_have_no_torsion():
    for m in range(2, 6):
        assert not magnitude_homology(path_graph(m), 3).has_torsion()
