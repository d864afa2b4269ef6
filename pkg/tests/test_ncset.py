import pytest

from ncvx import ncset
from ncvx.errors import (
    EmptyInputError,
    FidelityError,
    NotNearlyConvexError,
    UnsupportedClosureError,
)
from ncvx.ncset import EXACT, NEAR_EQUAL, PuncturedPolyhedron
from ncvx.polyhedron import Polyhedron
from ncvx.rational import rat, vec


def punctured_interval():
    # [0, 2] minus the midpoint 1
    return PuncturedPolyhedron(
        Polyhedron.box([(0, 2)]), [Polyhedron.singleton([1])]
    )


def punctured_square():
    # [0,1]^2 minus the boundary point (1/2, 1)
    return PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (0, 1)]),
        [Polyhedron.singleton([rat(1, 2), 1])],
    )


def test_membership():
    omega = punctured_interval()
    assert not ncset.membership(omega, [1])
    assert ncset.membership(omega, [rat(1, 2)])
    square = PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]))
    assert ncset.membership(square, [1, 1])
    omega2 = punctured_square()
    assert not ncset.membership(omega2, [rat(1, 2), 1])


def test_membership_requires_exact():
    near = PuncturedPolyhedron(Polyhedron.box([(0, 1)]), fidelity=NEAR_EQUAL)
    with pytest.raises(FidelityError):
        ncset.membership(near, [0])


def test_closure():
    assert ncset.closure(punctured_interval()).set_equal(Polyhedron.box([(0, 2)]))
    assert ncset.closure(punctured_square()).set_equal(Polyhedron.box([(0, 1), (0, 1)]))
    p = Polyhedron.box([(0, 1)])
    assert ncset.closure(PuncturedPolyhedron(p)) is p
    full = PuncturedPolyhedron(
        Polyhedron.box([(0, 2)]), [Polyhedron.box([(0, 1)])]
    )
    with pytest.raises(UnsupportedClosureError):
        ncset.closure(full)


def test_check_nearly_convex_yes_boundary_point():
    # removing a boundary point of a 2-d graph keeps the set nearly convex
    graph = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (0, 2)]), [Polyhedron.singleton([1, 1])]
    )
    assert ncset.check_nearly_convex(graph).kind == "yes"


def test_check_nearly_convex_no_interior_point():
    verdict = ncset.check_nearly_convex(punctured_interval())
    assert verdict.kind == "no"
    assert verdict.witness == vec([1])


def test_check_nearly_convex_segment_counterexample():
    # carrier {0} x [-1,1] minus its relative-interior point (0,0)
    seg = PuncturedPolyhedron(
        Polyhedron.from_points([[0, -1], [0, 1]]), [Polyhedron.singleton([0, 0])]
    )
    verdict = ncset.check_nearly_convex(seg)
    assert verdict.kind == "no"
    assert verdict.witness == vec([0, 0])


def test_check_nearly_convex_unsupported_full_dim_piece():
    omega = PuncturedPolyhedron(
        Polyhedron.box([(0, 2)]), [Polyhedron.box([(0, 1)])]
    )
    assert ncset.check_nearly_convex(omega).kind == "unsupported"


def test_empty_set_is_vacuously_convex():
    omega = PuncturedPolyhedron(Polyhedron.empty(2))
    assert ncset.check_nearly_convex(omega).kind == "yes"


def test_ri_member():
    omega = punctured_square()
    assert ncset.ri_member(omega, [rat(1, 2), rat(1, 2)])
    assert not ncset.ri_member(omega, [rat(1, 2), 1])
    seg = PuncturedPolyhedron(
        Polyhedron.from_points([[0, 0], [1, 1]]), [Polyhedron.singleton([0, 0])]
    )
    assert ncset.ri_member(seg, [rat(1, 2), rat(1, 2)])
    with pytest.raises(NotNearlyConvexError):
        ncset.ri_member(punctured_interval(), [rat(1, 2)])


def test_near_equal_and_hull():
    omega = punctured_square()
    square = PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]))
    assert ncset.near_equal(omega, square)
    assert not ncset.near_equal(
        PuncturedPolyhedron(Polyhedron.box([(0, 1)])),
        PuncturedPolyhedron(Polyhedron.box([(0, 2)])),
    )
    hull = ncset.hull_near_equal(omega)
    assert hull.set_equal(Polyhedron.box([(0, 1), (0, 1)]))
    assert ncset.near_equal(omega, PuncturedPolyhedron(hull))
    box = Polyhedron.box([(0, 1), (0, 2)])
    omega2 = PuncturedPolyhedron(box, [Polyhedron.singleton([1, 1])])
    assert ncset.hull_near_equal(omega2).set_equal(box)


def test_product():
    left = PuncturedPolyhedron(
        Polyhedron.box([(0, 1)]), [Polyhedron.singleton([1])]
    )
    right = PuncturedPolyhedron(Polyhedron.box([(0, 1)]))
    prod = ncset.product(left, right)
    assert prod.carrier.set_equal(Polyhedron.box([(0, 1), (0, 1)]))
    assert len(prod.removed) == 1
    expected_piece = Polyhedron.from_points([[1, 0], [1, 1]])
    assert prod.removed[0].set_equal(expected_piece)
    assert prod.fidelity == EXACT
    assert ncset.check_nearly_convex(prod).kind == "yes"
    both = ncset.product(right, right)
    assert not both.removed


def test_intersect_counterexample_pair():
    left = PuncturedPolyhedron(
        Polyhedron.box([(-1, 0), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    right = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    inter, report = ncset.intersect(left, right)
    assert not report.holds
    assert inter.carrier.set_equal(Polyhedron.from_points([[0, -1], [0, 1]]))
    verdict = ncset.check_nearly_convex(inter)
    assert verdict.kind == "no"
    assert verdict.witness == vec([0, 0])


def test_intersect_qualified():
    a = PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]))
    b = PuncturedPolyhedron(Polyhedron.box([(rat(1, 2), 2), (rat(1, 2), 2)]))
    inter, report = ncset.intersect(a, b)
    assert report.holds
    assert inter.carrier.set_equal(
        Polyhedron.box([(rat(1, 2), 1), (rat(1, 2), 1)])
    )
    assert ncset.check_nearly_convex(inter).kind == "yes"
    again, _ = ncset.intersect(a, a)
    assert ncset.near_equal(again, a)


def test_linear_image_projection_drops_point_puncture():
    # [0,1] x [0,2] minus (1,1), projected to the first axis: the slab over
    # the puncture is a segment, so the image is exactly [0,1].
    omega = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (0, 2)]), [Polyhedron.singleton([1, 1])]
    )
    img = ncset.linear_image([[1, 0]], omega)
    assert img.fidelity == EXACT
    assert not img.removed
    assert img.carrier.set_equal(Polyhedron.box([(0, 1)]))


def test_linear_image_identity_keeps_punctures():
    omega = punctured_square()
    img = ncset.linear_image([[1, 0], [0, 1]], omega)
    assert img.fidelity == EXACT
    assert len(img.removed) == 1
    assert ncset.membership(img, [0, 0])
    assert not ncset.membership(img, [rat(1, 2), 1])


def test_linear_image_vertical_cylinder_piece_stays_exact():
    # carrier ({0} x [-1,1]) x [0,oo)^2 minus the whole slab over (0,0):
    # adding the last two coordinates keeps the puncture exactly, even
    # though the input set is not nearly convex.
    carrier = Polyhedron.from_hrep(
        [[0, 1, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
        [1, 1, 0, 0],
        [[1, 0, 0, 0]],
        [0],
    )
    piece = Polyhedron.from_hrep(
        [[0, 0, -1, 0], [0, 0, 0, -1]],
        [0, 0],
        [[1, 0, 0, 0], [0, 1, 0, 0]],
        [0, 0],
    )
    omega = PuncturedPolyhedron(carrier, [piece])
    assert ncset.check_nearly_convex(omega).kind == "no"
    img = ncset.linear_image([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]], omega)
    assert img.fidelity == EXACT
    assert len(img.removed) == 1
    assert not ncset.membership(img, [0, 0, 3])
    assert ncset.membership(img, [0, rat(1, 2), 3])
    assert ncset.check_nearly_convex(img).kind == "no"


def test_separation_of_counterexample_boxes():
    left = PuncturedPolyhedron(
        Polyhedron.box([(-1, 0), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    right = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    res = ncset.properly_separate(left, right)
    assert res.separable
    assert res.v[1] == 0 and res.v[0] > 0
    assert res.sup1 == 0 and res.inf2 == 0
    x_hat, y_hat = res.strict_pair
    from ncvx.rational import dot

    assert dot(res.v, x_hat) < dot(res.v, y_hat)
    assert ncset.membership(left, x_hat)
    assert ncset.membership(right, y_hat)


def test_separation_not_separable():
    sq = PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]))
    res = ncset.properly_separate(sq, sq)
    assert not res.separable
    assert sq.carrier.ri_contains(res.common_ri_point)


def test_separation_touching_intervals():
    a = PuncturedPolyhedron(Polyhedron.box([(0, 1)]))
    b = PuncturedPolyhedron(Polyhedron.box([(1, 2)]))
    res = ncset.properly_separate(a, b)
    assert res.separable
    assert res.v[0] > 0


def test_separation_empty_input():
    with pytest.raises(EmptyInputError):
        ncset.properly_separate(
            PuncturedPolyhedron(Polyhedron.empty(1)),
            PuncturedPolyhedron(Polyhedron.box([(0, 1)])),
        )


def test_find_member_avoids_punctures():
    omega = punctured_interval()
    x = ncset.find_member(omega)
    assert ncset.membership(omega, x)


def test_segment_property():
    # points on [a, b) stay in the relative interior when a does
    omega = punctured_square()
    a = omega.carrier.ri_point()
    for b in omega.carrier.vertices():
        for t in [rat(0), rat(1, 3), rat(9, 10)]:
            point = tuple(
                (1 - t) * ai + t * bi for ai, bi in zip(a, b)
            )
            assert ncset.ri_member(omega, point)


def test_sandwich_invariant():
    # verdict yes: relative-interior points are members and the closure is
    # the carrier, which together witness the sandwich around ri(carrier)
    omega = punctured_square()
    verdict = ncset.check_nearly_convex(omega)
    assert verdict.kind == "yes"
    x = omega.carrier.ri_point()
    assert ncset.membership(omega, x)
    assert verdict.core.satisfied_by(x)
    assert ncset.closure(omega).set_equal(omega.carrier)
