import math
import random
import statistics

import pytest

from bouncespec.geometry import (LabeledPolygon, l_shape, normalize, rectangle, regular_polygon,
                                 rhombus, triangle_from_angles, unit_square)
from bouncespec.language import LanguageTable, enumerate_language
from bouncespec.reconstruction import (AngleEstimate, AngleSumError, MatchingFamily, OracleError,
                                       PolygonOracle, Record, WordListOracle, adjacency_pairs,
                                       detect_right_angle, estimate_angle, family_estimate,
                                       find_matching_family, reconstruct_triangle,
                                       verify_rational_angle)


def truth(P):
    L = P.labels
    return {frozenset((L[i], L[(i + 1) % len(L)])) for i in range(len(L))}


def rotations(seq):
    seq = tuple(seq)
    return {seq[i:] + seq[:i] for i in range(len(seq))}


# -- oracles ---------------------------------------------------------------------

def test_word_list_oracle_rejects_repeats():
    with pytest.raises(OracleError):
        WordListOracle(LanguageTable(("A", "B"), 2, frozenset({("A",), ("B",), ("A", "A")})))


def test_word_list_oracle_rejects_non_factor_closed():
    with pytest.raises(OracleError):
        WordListOracle(LanguageTable(("A", "B", "C"), 3,
                                     frozenset({("A",), ("B",), ("A", "B", "C")})))


def test_word_list_oracle_depth_limit():
    o = WordListOracle(enumerate_language(unit_square(), 3))
    assert o.contains(("A", "B", "C"))
    with pytest.raises(OracleError):
        o.contains(("A", "B", "C", "D"))


def test_oracle_is_deterministic():
    o = PolygonOracle(l_shape())
    w = ("A", "B", "E", "F")
    assert o.contains(w) == o.contains(w)
    assert o.list_extensions(("A",)) == o.list_extensions(("A",))


# -- adjacency ---------------------------------------------------------------------

def test_square_adjacency():
    r = adjacency_pairs(PolygonOracle(unit_square()), 6)
    assert r.pairs == truth(unit_square())
    assert r.cyclic_order == ["A", "B", "C", "D"]
    assert r.certified() == "certified to depth 6"


def test_pentagon_adjacency():
    P = LabeledPolygon([(0, 0), (2, 0.3), (2.4, 1.7), (0.7, 2.2), (-0.5, 1.0)])
    r = adjacency_pairs(PolygonOracle(P), 6)
    assert r.pairs == truth(P)
    assert len(r.cyclic_order) == 5


def test_l_shape_excludes_reflex_pair():
    r = adjacency_pairs(PolygonOracle(l_shape()), 6)
    assert r.pairs == truth(l_shape())
    # the pair sharing common prefixes across the reflex corner
    assert frozenset(("B", "E")) not in r.pairs


def test_chevron_adjacency_needs_depth_eight():
    # sharp corners next to the reflex vertex only show a clean two-letter
    # prefix set at depth 8
    P = LabeledPolygon([(0, 0), (2, 0.9), (4, 0), (2, 2.5)])
    assert adjacency_pairs(PolygonOracle(P), 8).pairs == truth(P)


def test_adjacency_from_stored_language():
    # no geometry at all: a stored word list gives the same answer
    T = enumerate_language(regular_polygon(5), 7)
    r = adjacency_pairs(WordListOracle(T), 6)
    assert r.pairs == truth(regular_polygon(5))


def test_adjacency_depth_validation():
    with pytest.raises(ValueError):
        adjacency_pairs(PolygonOracle(unit_square()), 1)


# -- right angles --------------------------------------------------------------------

@pytest.mark.parametrize("pair", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")])
def test_rectangle_corners_right(pair):
    assert detect_right_angle(PolygonOracle(rectangle(1.7, 1.0)), *pair, 8)


def test_rhombus_corner_not_right():
    # shallow nested chains exist near any corner; they run out quickly
    # when the corner is not square
    o = PolygonOracle(rhombus(math.pi / 3))
    assert detect_right_angle(o, "A", "B", 2)
    for d in (3, 4, 6):
        assert not detect_right_angle(o, "A", "B", d)


def test_obtuse_triangle_corner_not_right():
    o = PolygonOracle(triangle_from_angles(1.2, 0.9))
    assert not detect_right_angle(o, "C", "A", 6)
    assert not detect_right_angle(o, "C", "A", 8)


def test_square_corner_depth_one():
    assert detect_right_angle(PolygonOracle(unit_square()), "A", "B", 1)


def test_non_adjacent_pair_not_right():
    assert not detect_right_angle(PolygonOracle(l_shape()), "C", "D", 3)


# -- matching families ----------------------------------------------------------------

def test_reflex_family():
    fam = find_matching_family(PolygonOracle(l_shape()), "C", "D", 6)
    assert fam.closed and fam.size == 6 and fam.total_insertion == 4
    assert fam.check() == []
    assert tuple(len(s) for s in fam.insertions()) in rotations((0, 1, 1, 0, 1, 1))
    ok = [rotations(tuple(s.replace("A", x).replace("B", y) for s in ("", "B", "A", "", "B", "A")))
          for x, y in (("C", "D"), ("D", "C"))]
    assert tuple(fam.insertions()) in ok[0] | ok[1]


def test_five_twelfths_family():
    P = triangle_from_angles(math.pi / 4, 5 * math.pi / 12)
    fam = find_matching_family(PolygonOracle(P), "A", "B", 6)
    assert fam.closed and fam.check() == []
    assert fam.size == 10 and fam.total_insertion == 24
    assert tuple(len(s) for s in fam.insertions()) in rotations((2, 3, 2, 2, 3, 2, 3, 2, 2, 3))


def test_right_angle_family():
    fam = find_matching_family(PolygonOracle(rectangle(1.3, 1.0)), "A", "B", 6)
    assert fam.size == 2 and fam.total_insertion == 4
    assert family_estimate(fam).value == pytest.approx(math.pi / 2)


def _fam(insertions):
    recs = [Record(("X",), tuple(s), ("X",)) for s in insertions]
    k = max(len(s) for s in insertions)
    return MatchingFamily(("A", "B"), recs, True, 1, k)


def test_family_arithmetic():
    e = family_estimate(_fam(["AB", "BAB"]))
    assert (e.num_sequences, e.total_insertion) == (2, 5)
    assert e.value == pytest.approx(2 * math.pi / 5)
    e = family_estimate(_fam(["AB", "BAB", "ABA"]))
    assert e.value == pytest.approx(3 * math.pi / 8)
    ten = ["BA", "BAB", "AB", "AB", "ABA", "BA", "BAB", "AB", "AB", "ABA"]
    e = family_estimate(_fam(ten))
    assert e.total_insertion / e.num_sequences == pytest.approx(2.4)
    assert (e.p, e.q) == (5, 12)
    assert e.value == pytest.approx(5 * math.pi / 12)


def test_family_check_flags_bad_structure():
    bad = MatchingFamily(("A", "B"), [Record(("X",), ("A", "A"), ("Y",)),
                                      Record(("Z",), ("B",), ("X",))], True, 1, 2)
    v = bad.check()
    assert any("alternate" in s for s in v)
    assert any("does not match" in s for s in v)


# -- rational certification ------------------------------------------------------------

def test_verify_reflex():
    o = PolygonOracle(l_shape())
    assert verify_rational_angle(o, "C", "D", 3, 2, 6)
    assert not verify_rational_angle(o, "C", "D", 1, 1, 6)


@pytest.mark.parametrize("pair", [("A", "B"), ("B", "C"), ("C", "A")])
def test_verify_equilateral(pair):
    assert verify_rational_angle(PolygonOracle(regular_polygon(3)), *pair, 1, 3, 6)


def test_verify_wrong_fraction():
    o = PolygonOracle(triangle_from_angles(math.pi / 4, 5 * math.pi / 12))
    assert verify_rational_angle(o, "A", "B", 5, 12, 6)
    assert not verify_rational_angle(o, "A", "B", 2, 5, 6)


def test_verify_needs_coprime():
    with pytest.raises(ValueError):
        verify_rational_angle(PolygonOracle(unit_square()), "A", "B", 2, 4, 3)


# -- estimates ---------------------------------------------------------------------------

def test_exact_equilateral():
    e = estimate_angle(PolygonOracle(regular_polygon(3)), "A", "B", 6)
    assert e.kind == "exact_rational" and (e.p, e.q) == (1, 3)
    assert e.value == math.pi * 1 / 3
    assert "certified to depth 6" in e.describe()


def test_estimate_irrational_corner():
    theta = 1.3
    P = triangle_from_angles(theta, 0.9)
    e = estimate_angle(PolygonOracle(P), "C", "A", 6)
    assert e.kind == "estimate"
    assert e.value == pytest.approx(math.pi * e.num_sequences / e.total_insertion)
    # always inside the alternation bracket
    assert math.pi / 3 <= e.value <= math.pi / 2


@pytest.mark.parametrize("theta,shallow,deep", [(1.1, 6, 8), (1.0, 8, 10)])
def test_near_rational_certification_is_depth_limited(theta, shallow, deep):
    # a corner close to a small rational multiple of pi looks rational to a
    # shallow oracle; more depth exposes it
    o = PolygonOracle(triangle_from_angles(theta, 0.9))
    assert estimate_angle(o, "C", "A", shallow).kind == "exact_rational"
    e = estimate_angle(o, "C", "A", deep)
    assert e.kind == "estimate"
    assert abs(e.value - theta) < 0.025


def test_estimate_depth_validation():
    with pytest.raises(ValueError):
        estimate_angle(PolygonOracle(unit_square()), "A", "B", 0)


# -- triangles ----------------------------------------------------------------------------

def test_equilateral_triangle():
    r = reconstruct_triangle(PolygonOracle(regular_polygon(3)), 6)
    assert r.angles == pytest.approx((math.pi / 3,) * 3)
    ref = normalize(regular_polygon(3))
    for u, v in zip(r.polygon.vertices, ref.vertices):
        assert u == pytest.approx(v, abs=1e-9)


def test_thirty_sixty_ninety():
    # angle pi/2 between C and A, pi/3 between A and B
    P = triangle_from_angles(math.pi / 2, math.pi / 3)
    r = reconstruct_triangle(PolygonOracle(P), 6)
    assert r.angles == pytest.approx((math.pi / 2, math.pi / 3, math.pi / 6), abs=1e-12)
    for u, v in zip(r.polygon.vertices, normalize(P).vertices):
        assert u == pytest.approx(v, abs=1e-9)


def test_triangle_needs_three_labels():
    with pytest.raises(ValueError):
        reconstruct_triangle(PolygonOracle(unit_square()), 4)


def test_angle_sum_error_is_value_error():
    assert issubclass(AngleSumError, ValueError)
    e = AngleEstimate(("A", "B"), 1.0, "estimate", 1, 3, 2, 6, 4)
    assert "estimate 2/6*pi" in e.describe()


def test_estimates_refine_with_depth():
    # median error over corners of random triangles shrinks with depth
    rng = random.Random(5)
    errs = {4: [], 6: [], 8: []}
    for _ in range(5):
        while True:
            a, b = rng.uniform(0.4, 1.8), rng.uniform(0.4, 1.8)
            if math.pi - a - b > 0.4:
                break
        o = PolygonOracle(triangle_from_angles(a, b))
        for pair, true in [(("C", "A"), a), (("A", "B"), b), (("B", "C"), math.pi - a - b)]:
            for d in errs:
                errs[d].append(abs(estimate_angle(o, *pair, d).value - true))
    med = [statistics.median(errs[d]) for d in sorted(errs)]
    print("median errors", med)
    assert med[0] > med[1] > med[2]
