import pytest

from wildrank.exactlin import F101
from wildrank.quiver import BoundQuiver, Quiver, loop_quiver, make_relation
from wildrank.rep import Representation, hom_space
from wildrank.modvariety import (RepVarietyPoint, arrow_coordinate_count,
                                 orbit_dimension, parameter_estimate,
                                 stratum_probe, tangent_dimension)


def test_point_validation(dual_numbers_bq, f101):
    good = Representation.from_lists(dual_numbers_bq, f101, {"v": 2},
                                     {"x": [[0, 0], [1, 0]]})
    RepVarietyPoint(dual_numbers_bq, good)
    with pytest.raises(ValueError):
        bad = Representation.from_lists(dual_numbers_bq, f101, {"v": 1},
                                        {"x": [[1]]}, )


def test_tangent_examples(k3_bq, dual_numbers_bq, f101):
    p = RepVarietyPoint(k3_bq, Representation.from_lists(
        k3_bq, f101, {"1": 1, "2": 1}, {"a": [[1]], "b": [[2]], "c": [[3]]}))
    assert tangent_dimension(p) == 3          # hereditary: full coordinate count
    zero2 = RepVarietyPoint(dual_numbers_bq, Representation.from_lists(
        dual_numbers_bq, f101, {"v": 2}, {"x": [[0, 0], [0, 0]]}))
    assert tangent_dimension(zero2) == 4      # Jacobian vanishes at the origin
    empty = RepVarietyPoint(k3_bq, Representation.zero(k3_bq, f101))
    assert tangent_dimension(empty) == 0


def test_orbit_examples(k3_bq, f101):
    one_vertex = BoundQuiver(Quiver(["v"], []), [], nilbound=1)
    simple = RepVarietyPoint(one_vertex, Representation.simple(one_vertex, f101, "v"))
    assert orbit_dimension(simple) == 0       # 1 - 1
    p = RepVarietyPoint(k3_bq, Representation.from_lists(
        k3_bq, f101, {"1": 1, "2": 1}, {"a": [[1]], "b": [[2]], "c": [[3]]}))
    assert orbit_dimension(p) == 1            # 2 - dim End = 2 - 1
    ss = Representation.simple(one_vertex, f101, "v")
    double = RepVarietyPoint(one_vertex, ss.direct_sum(ss))
    assert orbit_dimension(double) == 0       # 4 - 4


def test_orbit_plus_end_is_squares(k3_bq, dual_numbers_bq, f101):
    import random
    from wildrank.rep import sample_representation
    rng = random.Random(1)
    for bq in (k3_bq, dual_numbers_bq):
        for _ in range(4):
            dims = {v: rng.randint(0, 3) for v in bq.quiver.vertices}
            rep = sample_representation(bq, f101, dims, rng)
            p = RepVarietyPoint(bq, rep)
            squares = sum(d * d for d in rep.dims.values())
            assert orbit_dimension(p) + hom_space(rep, rep).dim == squares


def test_parameter_estimate_k3(k3_bq, f101):
    report = parameter_estimate(k3_bq, f101, 2, samples_per_d=8, seed=20260811)
    rec = report.record_for((1, 1))
    assert rec is not None and rec.estimate == 2
    assert rec.exact_local
    assert report.aggregate == 2


def test_parameter_estimate_one_vertex(f101):
    bq = BoundQuiver(Quiver(["v"], []), [], nilbound=1)
    for n in range(1, 5):
        report = parameter_estimate(bq, f101, n, samples_per_d=3, seed=1)
        assert report.aggregate == 0


def test_stratum_probe_k2(k2_bq, f101):
    probes = stratum_probe(k2_bq, f101, 3, samples_per_d=8, seed=20260811)
    for n, rep, line in probes:
        assert line.at_most_n is True
    # known value at n=2: the one-parameter family contributes exactly 1
    assert probes[1][1].aggregate == 1


def test_stratum_probe_dual_numbers(dual_numbers_bq, f101):
    probes = stratum_probe(dual_numbers_bq, f101, 3, samples_per_d=8, seed=3)
    for n, rep, line in probes:
        assert line.at_most_n is True
        assert not rep.hereditary


def test_reports_reproducible(k3_bq, f101):
    a = parameter_estimate(k3_bq, f101, 2, samples_per_d=6, seed=42)
    b = parameter_estimate(k3_bq, f101, 2, samples_per_d=6, seed=42)
    assert a.to_text() == b.to_text()


def test_records_reproducible_per_d(k3_bq, f101):
    # each record depends only on (seed, algebra, d): adding other strata
    # does not disturb it, and more samples never decrease the orbit
    a = parameter_estimate(k3_bq, f101, 2, samples_per_d=4, seed=9)
    b = parameter_estimate(k3_bq, f101, 2, samples_per_d=8, seed=9)
    for rec_a in a.records:
        rec_b = b.record_for(rec_a.dims)
        if rec_a.starved or rec_b.starved:
            continue
        assert rec_b.orbit >= rec_a.orbit
        assert rec_b.estimate <= rec_a.estimate


def test_starvation_reported(f101):
    # x^2 = 0 with an extra incommensurable relation defeats every sampler
    q = loop_quiver(2)
    bq = BoundQuiver(q, [make_relation(q, [(1, ("x", "x"))]),
                         make_relation(q, [(1, ("x", "y")), (1, ("y", "x"))]),
                         make_relation(q, [(1, ("y", "y")), (-1, ("x", "x"))])],
                     nilbound=4)
    report = parameter_estimate(bq, f101, 3, samples_per_d=2, seed=0)
    assert report.any_starved
    assert "STARVED" in report.to_text()
