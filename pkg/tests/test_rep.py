import random

import pytest

from wildrank.exactlin import F101, QQ, Field, Mat
from wildrank.quiver import (BoundQuiver, Quiver, build_algebra_table,
                             kronecker_quiver, line_quiver, loop_quiver,
                             loop_square_zero, make_relation)
from wildrank.rep import (InconclusiveError, Representation, SamplingStarvation,
                          are_isomorphic, check_relations, decompose,
                          hom_space, in_sincere_subcategory, is_indecomposable,
                          sample_representation, support,
                          _matrix_minpoly, _poly_eval_matrix)


def kron_module(k2_bq, field, lam):
    return Representation.from_lists(k2_bq, field, {"1": 1, "2": 1},
                                     {"a": [[1]], "b": [[lam]]})


def rand_rep(bq, field, maxd, rng):
    dims = {v: rng.randint(0, maxd) for v in bq.quiver.vertices}
    mats = {a.name: Mat.random(field, dims[a.target], dims[a.source], rng)
            for a in bq.quiver.arrows}
    return Representation(bq, field, dims, mats, check=False)


def test_check_relations(dual_numbers_bq, f101):
    zero = Representation.zero(dual_numbers_bq, f101)
    assert all(ok for _, ok in check_relations(zero))
    j2 = Representation.from_lists(dual_numbers_bq, f101, {"v": 2},
                                   {"x": [[0, 0], [1, 0]]})
    assert all(ok for _, ok in check_relations(j2))
    with pytest.raises(ValueError):
        Representation.from_lists(dual_numbers_bq, f101, {"v": 2},
                                  {"x": [[1, 0], [0, 1]]})


def test_hom_examples(a2_bq, k2_bq, f101):
    s1 = Representation.simple(a2_bq, f101, "1")
    s2 = Representation.simple(a2_bq, f101, "2")
    assert hom_space(s1, s1).dim == 1
    assert hom_space(s1, s2).dim == 0
    m3, m5 = kron_module(k2_bq, f101, 3), kron_module(k2_bq, f101, 5)
    assert hom_space(m3, m3).dim == 1
    assert hom_space(m3, m5).dim == 0


def test_hom_fast_paths_agree(k3_bq, k2_bq, free_bq):
    rng = random.Random(42)
    for field in (F101, QQ):
        for bq in (k2_bq, k3_bq, free_bq, BoundQuiver(line_quiver(3), [], nilbound=3)):
            for _ in range(4):
                m = rand_rep(bq, field, 3, rng)
                n = rand_rep(bq, field, 3, rng)
                h_fast = hom_space(m, n, use_fast_paths=True)
                h_plain = hom_space(m, n, use_fast_paths=False)
                assert h_fast.dim == h_plain.dim
                for f in h_fast.basis:
                    for a in bq.quiver.arrows:
                        assert f[a.target] @ m.mats[a.name] == n.mats[a.name] @ f[a.source]


def test_hom_bilinear_over_direct_sums(k3_bq):
    rng = random.Random(7)
    for _ in range(5):
        m = rand_rep(k3_bq, F101, 2, rng)
        mp = rand_rep(k3_bq, F101, 2, rng)
        n = rand_rep(k3_bq, F101, 2, rng)
        lhs = hom_space(m.direct_sum(mp), n).dim
        assert lhs == hom_space(m, n).dim + hom_space(mp, n).dim


def test_matrix_minpoly():
    rng = random.Random(3)
    for field in (F101, QQ):
        for n in (1, 3, 5):
            t = Mat.random(field, n, n, rng)
            mp = _matrix_minpoly(field, t)
            assert mp[-1] == field.one
            assert _poly_eval_matrix(field, mp, t).is_zero()


def test_indecomposable_examples(a2_bq, k2_bq, f101):
    s1 = Representation.simple(a2_bq, f101, "1")
    assert is_indecomposable(s1, 0).verdict == "yes"
    v = is_indecomposable(s1.direct_sum(s1), 0)
    assert v.verdict == "no"
    e = v.witness
    for vt, blk in e.items():
        assert (blk @ blk) == blk
    assert is_indecomposable(kron_module(k2_bq, f101, 4), 0).verdict == "yes"
    zero = Representation.zero(a2_bq, f101)
    assert is_indecomposable(zero, 0).verdict == "no"


def test_indecomposable_field_extension_inconclusive(free_bq):
    # companion matrix of an irreducible quadratic over F101: x acts with no
    # eigenvalue, End contains a quadratic field extension
    f = Field.prime(5)
    comp = Representation(free_bq, f, {"v": 2},
                          {"x": Mat.from_rows(f, [[0, 2], [1, 0]]),   # t^2 - 2 irred mod 5
                           "y": Mat.zeros(f, 2, 2)}, check=False)
    v = is_indecomposable(comp, 0)
    assert v.verdict == "inconclusive"


def test_are_isomorphic_examples(a2_bq, k2_bq, f101):
    s1 = Representation.simple(a2_bq, f101, "1")
    s2 = Representation.simple(a2_bq, f101, "2")
    assert are_isomorphic(s1, s1, seed=0).verdict == "yes"
    assert are_isomorphic(s1, s2, seed=0).verdict == "no"
    m3, m5 = kron_module(k2_bq, f101, 3), kron_module(k2_bq, f101, 5)
    assert are_isomorphic(m3, m5, seed=0).verdict == "no"
    v = are_isomorphic(m3, m3, seed=0)
    assert v.verdict == "yes"
    for vt, blk in v.witness.items():
        assert blk.is_invertible()


def test_iso_equivalence_relation(k2_bq, f101):
    mods = [kron_module(k2_bq, f101, lam) for lam in (2, 3, 2)]
    mods.append(mods[0].direct_sum(mods[1]))
    mods.append(mods[2].direct_sum(mods[1]))
    verdicts = {}
    for i, m in enumerate(mods):
        for j, n in enumerate(mods):
            verdicts[(i, j)] = are_isomorphic(m, n, seed=f"{i}:{j}").verdict
    for i in range(len(mods)):
        assert verdicts[(i, i)] == "yes"
        for j in range(len(mods)):
            if "inconclusive" in (verdicts[(i, j)], verdicts[(j, i)]):
                continue
            assert verdicts[(i, j)] == verdicts[(j, i)]
            for k in range(len(mods)):
                if verdicts[(i, j)] == "yes" and verdicts[(j, k)] == "yes":
                    assert verdicts[(i, k)] == "yes"


def test_kronecker_count_matches_oracle_small_p(k2_bq):
    # over F_p the pairwise non-isomorphic one-parameter Kronecker modules
    # at (1,1) with first arrow the identity number exactly p
    for p in (5, 7):
        f = Field.prime(p)
        mods = [Representation.from_lists(k2_bq, f, {"1": 1, "2": 1},
                                          {"a": [[1]], "b": [[lam]]})
                for lam in range(p)]
        for i in range(p):
            for j in range(i + 1, p):
                assert are_isomorphic(mods[i], mods[j], seed=f"{i}:{j}").verdict == "no"
        # brute-force oracle: invertible scalar pairs (g1, g2) with
        # g2 * 1 = 1 * g1 and g2 * lam = mu * g1 force lam = mu
        for lam in range(p):
            for mu in range(p):
                exists = any((g2 * 1 - 1 * g1) % p == 0 and (g2 * lam - mu * g1) % p == 0
                             for g1 in range(1, p) for g2 in range(1, p))
                assert exists == (lam == mu)


def test_decompose_examples(a2_bq, k2_bq, f101):
    zero = Representation.zero(a2_bq, f101)
    assert list(decompose(zero, 0)) == []
    s1 = Representation.simple(a2_bq, f101, "1")
    s2 = Representation.simple(a2_bq, f101, "2")
    d = decompose(s1.direct_sum(s1).direct_sum(s2), 0)
    assert d.certified
    assert sorted((r.dim_vector(), mult) for r, mult in d) == [((0, 1), 1), ((1, 0), 2)]
    m3, m5 = kron_module(k2_bq, f101, 3), kron_module(k2_bq, f101, 5)
    d2 = decompose(m3.direct_sum(m5), 1)
    assert len(d2.summands) == 2 and d2.certified


def test_decompose_reconstructs(k3_bq, k2_bq, dual_numbers_bq):
    rng = random.Random(12)
    for bq in (k2_bq, k3_bq):
        for _ in range(4):
            m = rand_rep(bq, F101, 2, rng)
            d = decompose(m, 5)
            if not d.certified:
                continue
            total = None
            for r, mult in d:
                for _ in range(mult):
                    total = r if total is None else total.direct_sum(r)
            if total is None:
                total = Representation.zero(bq, F101)
            assert are_isomorphic(m, total, seed=3).verdict == "yes"


def test_support_and_sincere(a2_bq, dual_numbers_bq, f101):
    zero = Representation.zero(a2_bq, f101)
    assert support(zero) == set()
    s1 = Representation.simple(a2_bq, f101, "1")
    assert support(s1) == {"1"}
    p1 = Representation.from_lists(a2_bq, f101, {"1": 1, "2": 1}, {"a1": [[1]]})
    assert support(p1) == {"1", "2"}
    assert in_sincere_subcategory(zero, 0) is True
    assert in_sincere_subcategory(p1, 0) is True
    assert in_sincere_subcategory(s1.direct_sum(p1), 0) is False
    j2 = Representation.from_lists(dual_numbers_bq, f101, {"v": 2},
                                   {"x": [[0, 0], [1, 0]]})
    assert in_sincere_subcategory(j2, 0) is True


def test_no_invertible_composites_between_noniso_indecomposables(k2_bq, f101):
    from wildrank.exactlin import find_invertible_in_span
    m3, m5 = kron_module(k2_bq, f101, 3), kron_module(k2_bq, f101, 5)
    p1 = Representation.from_lists(k2_bq, f101, {"1": 1, "2": 2},
                                   {"a": [[1], [0]], "b": [[0], [1]]})
    fixtures = [m3, m5, p1]
    for m in fixtures:
        assert is_indecomposable(m, 0).verdict == "yes"
    for i, m in enumerate(fixtures):
        for j, n in enumerate(fixtures):
            if i == j:
                continue
            h_mn = hom_space(m, n)
            h_nm = hom_space(n, m)
            composites = []
            for f in h_mn.total_matrices():
                for g in h_nm.total_matrices():
                    composites.append(g @ f)
            nonzero = [c for c in composites if not c.is_zero()]
            if nonzero:
                assert find_invertible_in_span(nonzero, 32, seed=1) is None


def test_sampler_hereditary_and_power_zero(k2_bq, three_loop_bq, dual_numbers_bq):
    rng = random.Random(2)
    m = sample_representation(k2_bq, F101, {"1": 2, "2": 3}, rng)
    assert m.dim_vector() == (2, 3)
    for bq, dims in ((three_loop_bq, {"v": 3}), (dual_numbers_bq, {"v": 3})):
        for _ in range(5):
            m = sample_representation(bq, F101, dims, rng)
            assert all(ok for _, ok in check_relations(m))


def test_sampler_linear_solve_mode():
    # commuting pair of loops: xy - yx = 0 is linear in either loop
    q = loop_quiver(2)
    bq = BoundQuiver(q, [make_relation(q, [(1, ("x", "y")), (-1, ("y", "x"))])],
                     nilbound=4)
    rng = random.Random(8)
    for _ in range(5):
        m = sample_representation(bq, F101, {"v": 3}, rng, budget=50)
        assert all(ok for _, ok in check_relations(m))


def test_sampler_starvation():
    # x^2 = 0 plus a disjoint free loop is neither power-uniform nor linear;
    # rejection at dimension 3 over F101 should starve within a tiny budget
    q = loop_quiver(2)
    bq = BoundQuiver(q, [make_relation(q, [(1, ("x", "x"))]),
                         make_relation(q, [(1, ("x", "y"), ), (1, ("y", "x"))]),
                         make_relation(q, [(1, ("y", "y"), ), (-1, ("x", "x"))])],
                     nilbound=4)
    rng = random.Random(1)
    with pytest.raises(SamplingStarvation):
        for _ in range(3):
            sample_representation(bq, F101, {"v": 3}, rng, budget=3)
