import random

import pytest

from wildrank.exactlin import F101, QQ, Mat
from wildrank.quiver import (BoundQuiver, Path, build_algebra_table,
                             factor_quiver, loop_quiver, loop_square_zero,
                             make_relation)
from wildrank.rep import (Representation, are_isomorphic, hom_space,
                          in_sincere_subcategory, is_indecomposable)
from wildrank.wildness import (CertStep, DegreeCapError, FactorProvenance,
                               FreeAlgModule, FreeAlgebra, NCPoly,
                               WitnessBimodule, WitnessCertificate,
                               bound_via_factor, bound_via_morita, builtin_F,
                               builtin_G, certificate_for_bimodule,
                               compose_witness, eval_tensor,
                               eval_tensor_morphism, eval_tensor_with_frame,
                               free_carrier, sincere_witness_for_K3,
                               verify_witness)


def fam(field, x_rows, y_rows):
    return FreeAlgModule(Mat.from_rows(field, x_rows), Mat.from_rows(field, y_rows))


def test_ncpoly_arithmetic():
    x = NCPoly.letter(F101, "x")
    y = NCPoly.letter(F101, "y")
    p = x * y + y.scaled(3)
    assert not p.is_zero() and p.degree() == 2
    xy = p - y.scaled(3)
    m = xy.substitute(Mat.from_rows(F101, [[0, 1], [0, 0]]),
                      Mat.from_rows(F101, [[0, 0], [1, 0]]))
    assert m == Mat.from_rows(F101, [[1, 0], [0, 0]])
    with pytest.raises(DegreeCapError):
        NCPoly(F101, {tuple("x" * 9): 1})


def test_builtin_G_formula(k3_table):
    g = builtin_G(k3_table)
    assert g.rank == 2 and g.full and g.unital
    v = fam(F101, [[0]], [[0]])
    img = eval_tensor(g, v)
    assert img.dim_vector() == (1, 1)
    assert img.mats["a"].row_list() == [[1]]
    assert img.mats["b"].is_zero() and img.mats["c"].is_zero()
    j2 = fam(F101, [[0, 1], [0, 0]], [[0, 0], [0, 0]])
    img2 = eval_tensor(g, j2)
    assert img2.dim_vector() == (2, 2)
    assert img2.mats["a"] == Mat.identity(F101, 2)
    assert img2.mats["b"] == j2.x
    assert img2.mats["c"] == j2.y


def test_builtin_G_hom_preservation(k3_table):
    g = builtin_G(k3_table)
    rng = random.Random(17)
    for _ in range(6):
        v = FreeAlgModule.random(F101, 3, rng)
        w = FreeAlgModule.random(F101, 3, rng)
        lhs = hom_space(v.as_representation(), w.as_representation()).dim
        rhs = hom_space(eval_tensor(g, v), eval_tensor(g, w)).dim
        assert lhs == rhs


def test_builtin_F_structure(k3_bq, k3_table):
    f = builtin_F(k3_table)
    assert f.rank == 7 and f.full
    s1 = Representation.simple(k3_bq, F101, "1")
    img = eval_tensor(f, s1)
    assert isinstance(img, FreeAlgModule) and img.dim == 7
    # x is the nilpotent shift with x^7 = 0
    power = img.x
    for _ in range(5):
        power = power @ img.x
        assert not power.is_zero()
    assert (power @ img.x).is_zero()
    # y lower bidiagonal with one extra sub-subdiagonal entry (from the
    # vertex-1 projection); all arrow contributions vanish on a simple
    y = img.y.row_list()
    assert y[1][0] == 1 and y[2][0] == 1 and y[2][1] == 1
    assert all(y[i][j] == 0 for i in range(7) for j in range(7)
               if not (i == j + 1 or (i, j) == (2, 0)))
    zero = eval_tensor(f, Representation.zero(k3_bq, F101))
    assert zero.dim == 0


def test_builtin_F_dim_multiplier(k3_bq, k3_table):
    f = builtin_F(k3_table)
    rng = random.Random(23)
    for _ in range(5):
        d1, d2 = rng.randint(0, 3), rng.randint(0, 3)
        mats = {n: Mat.random(F101, d2, d1, rng) for n in ("a", "b", "c")}
        v = Representation(k3_bq, F101, {"1": d1, "2": d2}, mats, check=False)
        assert eval_tensor(f, v).dim == 7 * (d1 + d2)


def test_builtin_F_hom_preservation(k3_bq, k3_table):
    f = builtin_F(k3_table)
    rng = random.Random(29)
    mods = []
    for _ in range(4):
        d1, d2 = rng.randint(1, 2), rng.randint(1, 2)
        mats = {n: Mat.random(F101, d2, d1, rng) for n in ("a", "b", "c")}
        mods.append(Representation(k3_bq, F101, {"1": d1, "2": d2}, mats, check=False))
    for v in mods:
        for w in mods:
            lhs = hom_space(v, w).dim
            rhs = hom_space(eval_tensor(f, v).as_representation(),
                            eval_tensor(f, w).as_representation()).dim
            assert lhs == rhs


def test_sincere_witness_rank_and_images(k3_table):
    w = sincere_witness_for_K3(k3_table)
    assert w.rank == 28
    v = fam(F101, [[0]], [[0]])
    img = eval_tensor(w, v)
    assert img.dim_vector() == (14, 14)
    assert in_sincere_subcategory(img, 0)
    # the images of one-dimensional modules stay sincere
    img2 = eval_tensor(w, fam(F101, [[3]], [[7]]))
    assert img2.dim_vector() == (14, 14)
    assert in_sincere_subcategory(img2, 1)


def test_eval_tensor_rank_bookkeeping(k3_table):
    w = sincere_witness_for_K3(k3_table)
    rng = random.Random(31)
    v = FreeAlgModule.random(F101, 3, rng)
    assert eval_tensor(w, v).total_dim == 28 * v.dim


def test_eval_tensor_zero(k3_table):
    g = builtin_G(k3_table)
    img = eval_tensor(g, FreeAlgModule.zero(F101))
    assert img.total_dim == 0


def test_eval_tensor_additive(k3_table):
    g = builtin_G(k3_table)
    rng = random.Random(37)
    for _ in range(4):
        v = FreeAlgModule.random(F101, 2, rng)
        w = FreeAlgModule.random(F101, 2, rng)
        lhs = eval_tensor(g, v.direct_sum(w))
        rhs = eval_tensor(g, v).direct_sum(eval_tensor(g, w))
        assert are_isomorphic(lhs, rhs, seed=5).verdict == "yes"


def test_eval_tensor_functorial(k3_table):
    g = builtin_G(k3_table)
    rng = random.Random(41)
    for _ in range(4):
        v = FreeAlgModule.random(F101, 2, rng)
        w = FreeAlgModule.random(F101, 2, rng)
        homs = hom_space(v.as_representation(), w.as_representation())
        if not homs.basis:
            continue
        fmat = homs.basis[0]["v"]
        img_v, order_v = eval_tensor_with_frame(g, v)
        img_w, order_w = eval_tensor_with_frame(g, w)
        big = eval_tensor_morphism(g, fmat)
        # permute raw generator-major coordinates into the output frames
        rows = [order_w.index(k) if False else k for k in order_w]
        big_perm = big.submatrix(order_w, order_v)
        # split into vertex blocks and check intertwining exactly
        offs_w, offs_v = {}, {}
        off = 0
        for vtx in img_w.bound_quiver.quiver.vertices:
            offs_w[vtx] = off
            off += img_w.dims[vtx]
        off = 0
        for vtx in img_v.bound_quiver.quiver.vertices:
            offs_v[vtx] = off
            off += img_v.dims[vtx]
        blocks = {}
        for vtx in img_v.bound_quiver.quiver.vertices:
            rows_idx = list(range(offs_w[vtx], offs_w[vtx] + img_w.dims[vtx]))
            cols_idx = list(range(offs_v[vtx], offs_v[vtx] + img_v.dims[vtx]))
            blocks[vtx] = big_perm.submatrix(rows_idx, cols_idx)
        for a in img_v.bound_quiver.quiver.arrows:
            lhs = blocks[a.target] @ img_v.mats[a.name]
            rhs = img_w.mats[a.name] @ blocks[a.source]
            assert lhs == rhs


def test_compose_rank_law(k3_table):
    g = builtin_G(k3_table)
    f = builtin_F(k3_table)
    fg = compose_witness(f, g)
    assert fg.rank == 14
    gfg = compose_witness(g, fg)
    assert gfg.rank == 28
    with pytest.raises(Exception):
        compose_witness(g, g)      # middle algebras do not match


def test_verify_witness_passes(k3_table):
    g = builtin_G(k3_table)
    report = verify_witness(g, samples=12, max_dim=2, seed=99, check_sincere=0)
    assert report.valid
    assert report.indecomposability.failed == 0
    assert report.hom_dims.failed == 0


def test_verify_witness_catches_corruption(k3_table):
    g = builtin_G(k3_table)
    # zero the action of the third arrow: V -> (V, V; 1, x, 0) forgets y
    action = dict(g.action)
    zero = NCPoly.zero(F101)
    idx = k3_table.basis_index(Path("1", "2", ("c",)))
    action[idx] = [[zero, zero], [zero, zero]]
    bad = WitnessBimodule(k3_table, FreeAlgebra(F101), 2, action, full=False)
    report = verify_witness(bad, samples=14, max_dim=2, seed=7)
    assert not report.valid
    # an explicit colliding pair: same x, different y
    v1 = fam(F101, [[2]], [[3]])
    v2 = fam(F101, [[2]], [[4]])
    assert are_isomorphic(v1.as_representation(), v2.as_representation(),
                          seed=0).verdict == "no"
    assert are_isomorphic(eval_tensor(bad, v1), eval_tensor(bad, v2),
                          seed=0).verdict == "yes"


def test_verify_witness_deterministic(k3_table):
    g = builtin_G(k3_table)
    r1 = verify_witness(g, samples=8, max_dim=2, seed=5)
    r2 = verify_witness(g, samples=8, max_dim=2, seed=5)
    assert r1.to_text() == r2.to_text()


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def _base_cert(k3_bq, k3_table):
    w = sincere_witness_for_K3(k3_table)
    return certificate_for_bimodule(w, k3_bq, "three-arrow Kronecker algebra",
                                    seed=0, target_kind="sincere-subcategory")


def test_certificate_recompute(k3_bq, k3_table):
    cert = _base_cert(k3_bq, k3_table)
    assert cert.bound == 28 and cert.check_arithmetic()


def test_bound_via_factor_identity(k3_bq, k3_table):
    cert = _base_cert(k3_bq, k3_table)
    prov = FactorProvenance(k3_bq, tuple(k3_bq.quiver.vertices),
                            tuple(a.name for a in k3_bq.quiver.arrows))
    lifted = bound_via_factor(cert, prov, "the same algebra")
    assert lifted.bound == cert.bound
    assert lifted.steps[-1].rule == "factor-rule"
    assert lifted.check_arithmetic()


def test_bound_via_factor_inflation(three_loop_bq, f101):
    # bound for the three-loop radical-square-zero algebra inherited by the
    # four-loop one (declared factor), with the bimodule action revalidated
    from wildrank.quiver import loop_square_zero
    four = loop_square_zero(4)
    three = factor_quiver(four, ["v"], ["x", "y", "z"])
    table3 = build_algebra_table(three, f101)
    # explicit rank-1 bimodule over the 3-loop algebra: all loops act by zero
    ring_one = NCPoly.one(f101)
    ring_zero = NCPoly.zero(f101)
    action = {}
    for i, p in enumerate(table3.basis):
        action[i] = [[ring_one if not p.arrows else ring_zero]]
    w = WitnessBimodule(table3, FreeAlgebra(f101), 1, action)
    cert = certificate_for_bimodule(w, three, "three-loop radical-square-zero", seed=0)
    prov = FactorProvenance(four, ("v",), ("x", "y", "z"))
    lifted = bound_via_factor(cert, prov, "four-loop radical-square-zero", field=f101)
    assert lifted.bound == cert.bound == 1
    assert lifted.bimodule is not None
    assert lifted.bimodule.target.dimension == 5
    assert lifted.check_arithmetic()


def test_bound_via_factor_requires_provenance(k3_bq, k3_table, three_loop_bq):
    cert = _base_cert(k3_bq, k3_table)
    bad = FactorProvenance(three_loop_bq, ("v",), ("x",))
    with pytest.raises(ValueError):
        bound_via_factor(cert, bad)


def test_bound_via_morita(k3_bq, k3_table):
    cert = _base_cert(k3_bq, k3_table)
    up = bound_via_morita(cert, 5)       # dim kK3 = 5 (already basic)
    assert up.bound == 28 * 5
    up2 = bound_via_morita(cert, 20)
    assert up2.bound == 560 and up2.check_arithmetic()
    with pytest.raises(ValueError):
        bound_via_morita(cert, 4)        # below the basic dimension


def test_factor_chain_preserves_bound(k3_bq, k3_table):
    cert = _base_cert(k3_bq, k3_table)
    prov = FactorProvenance(k3_bq, tuple(k3_bq.quiver.vertices),
                            tuple(a.name for a in k3_bq.quiver.arrows))
    c1 = bound_via_factor(cert, prov)
    c2 = bound_via_factor(c1, prov)
    assert c2.bound == cert.bound and c2.check_arithmetic()


def test_eval_tensor_non_aligned_projections(k3_table):
    # conjugating every action matrix by a fixed invertible scalar matrix
    # leaves a valid witness whose idempotent actions are no longer 0/1
    # diagonals: evaluation must fall back to the column-space frame and
    # produce isomorphic images
    g = builtin_G(k3_table)
    u = [[NCPoly.one(F101), NCPoly.one(F101)],
         [NCPoly.one(F101), NCPoly.one(F101).scaled(2)]]
    u_inv_scalars = Mat.from_rows(F101, [[1, 1], [1, 2]]).inverse()
    u_inv = [[NCPoly.one(F101).scaled(u_inv_scalars.entry(i, j)) for j in range(2)]
             for i in range(2)]
    from wildrank.wildness import _em_mul, _Ring
    ring = _Ring(FreeAlgebra(F101))
    action = {i: _em_mul(_em_mul(u, g.action[i], ring), u_inv, ring)
              for i in g.action}
    twisted = WitnessBimodule(k3_table, FreeAlgebra(F101), 2, action, full=True)
    rng = random.Random(3)
    for _ in range(4):
        v = FreeAlgModule.random(F101, 2, rng)
        img_t = eval_tensor(twisted, v)
        img_g = eval_tensor(g, v)
        assert img_t.dim_vector() == img_g.dim_vector()
        assert are_isomorphic(img_t, img_g, seed=1).verdict == "yes"


def test_covering_certificate_inherits_to_parent(three_loop_bq, f101):
    # the three-loop bound transports to the four-loop algebra through the
    # declared factor, with the full rank-56 bimodule inflated and revalidated
    from wildrank.covering import CoveringSpec, covering_criterion
    from wildrank.quiver import loop_square_zero
    cov = CoveringSpec(three_loop_bq, 1,
                       {a.name: (1,) for a in three_loop_bq.quiver.arrows})
    cert = covering_criterion(cov, 2, field=f101, seed=0)
    assert cert.bound == 56
    four = loop_square_zero(4)
    prov = FactorProvenance(four, ("v",), ("x", "y", "z"))
    lifted = bound_via_factor(cert, prov, "four-loop radical-square-zero",
                              field=f101)
    assert lifted.bound == 56 and lifted.check_arithmetic()
    assert lifted.bimodule is not None
    assert lifted.bimodule.target.dimension == 5
    # the inflated witness still evaluates: the extra loop acts by zero
    v = fam(f101, [[3]], [[5]])
    img = eval_tensor(lifted.bimodule, v)
    assert img.total_dim == 28
    assert img.mats["w"].is_zero()
