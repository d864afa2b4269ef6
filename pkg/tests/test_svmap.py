import pytest

from ncvx import ncset, svmap
from ncvx.errors import FidelityError
from ncvx.ncset import EXACT, PuncturedPolyhedron
from ncvx.polyhedron import Polyhedron
from ncvx.rational import rat, vec


def boundary_punctured_map():
    """Value [0,2] on [0,1), and [0,1) union (1,2] at x = 1."""
    graph = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (0, 2)]), [Polyhedron.singleton([1, 1])]
    )
    return svmap.SVMap(1, 1, graph)


def constant_punctured_square_map():
    """Constant mapping of the whole line onto the punctured unit square."""
    target = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (0, 1)]),
        [Polyhedron.singleton([rat(1, 2), 1])],
    )
    line = PuncturedPolyhedron(Polyhedron.whole_space(1))
    return svmap.SVMap(1, 2, ncset.product(line, target))


def test_graph_is_nearly_convex_but_boundary_value_is_not():
    f = boundary_punctured_map()
    assert f.nearly_convex()
    at_one = svmap.value(f, [1])
    verdict = ncset.check_nearly_convex(at_one)
    assert verdict.kind == "no"
    assert verdict.witness == vec([1])
    assert not ncset.membership(at_one, [1])
    assert ncset.membership(at_one, [rat(1, 2)])


def test_value_inside_domain_interior():
    f = boundary_punctured_map()
    at_half = svmap.value(f, [rat(1, 2)])
    assert ncset.check_nearly_convex(at_half).kind == "yes"
    assert at_half.carrier.set_equal(Polyhedron.box([(0, 2)]))
    assert not at_half.removed


def test_value_outside_domain_is_empty():
    f = boundary_punctured_map()
    outside = svmap.value(f, [5])
    assert outside.carrier.is_empty()


def test_constant_mapping_values_nearly_convex_never_convex():
    f = constant_punctured_square_map()
    assert f.nearly_convex()
    assert svmap.domain(f).carrier.set_equal(Polyhedron.whole_space(1))
    for x in [[-3], [0], [rat(7, 2)]]:
        val = svmap.value(f, x)
        assert ncset.check_nearly_convex(val).kind == "yes"
        assert not ncset.is_convex(val)


def test_domain_exact_fiber_rule():
    f = boundary_punctured_map()
    dom = svmap.domain(f)
    assert dom.fidelity == EXACT
    assert not dom.removed
    assert dom.carrier.set_equal(Polyhedron.box([(0, 1)]))
    rge = svmap.range_of(f)
    assert rge.carrier.set_equal(Polyhedron.box([(0, 2)]))


def test_inverse_is_involutive_and_slices():
    f = boundary_punctured_map()
    back = svmap.inverse(svmap.inverse(f))
    assert back.graph.carrier.set_equal(f.graph.carrier)
    assert len(back.graph.removed) == 1
    inv = svmap.inverse(f)
    at_one = svmap.value(inv, [1])
    assert at_one.carrier.set_equal(Polyhedron.box([(0, 1)]))
    assert not ncset.membership(at_one, [1])
    doubling = svmap.SVMap.from_linear([[2]])
    half = svmap.value(svmap.inverse(doubling), [1])
    assert half.carrier.set_equal(Polyhedron.singleton([rat(1, 2)]))


def test_ri_graph_member_agrees_with_carrier():
    f = boundary_punctured_map()
    cases = [
        ([rat(1, 2)], [1], True),
        ([1], [1], False),
        ([rat(1, 2)], [0], False),
        ([rat(1, 2)], [2], False),
    ]
    for x, y, expected in cases:
        assert svmap.ri_graph_member(f, x, y) is expected
        assert f.graph.carrier.ri_contains(vec(x) + vec(y)) is expected
    unit_square_graph = svmap.SVMap(
        1, 1, PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]))
    )
    assert svmap.ri_graph_member(unit_square_graph, [rat(1, 2)], [rat(1, 2)])


def test_value_requires_exact_graph():
    near = svmap.SVMap(
        1, 1, PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]), fidelity="near")
    )
    with pytest.raises(FidelityError):
        svmap.value(near, [0])


def indicator_graph(box):
    """Epigraphical mapping of the indicator of a punctured box."""
    from ncvx import ncfunc

    return ncfunc.epigraph_mapping(ncfunc.indicator(box))


def test_sum_counterexample_graph_verdict_no():
    left = PuncturedPolyhedron(
        Polyhedron.box([(-1, 0), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    right = PuncturedPolyhedron(
        Polyhedron.box([(0, 1), (-1, 1)]), [Polyhedron.singleton([0, 0])]
    )
    f1 = indicator_graph(left)
    f2 = indicator_graph(right)
    total, report = svmap.sum_maps(f1, f2)
    assert not report.holds
    verdict = ncset.check_nearly_convex(total.graph)
    assert verdict.kind == "no"
    # domain of the sum is the punctured segment
    dom_verdict = ncset.check_nearly_convex(
        ncset.intersect(left, right)[0]
    )
    assert dom_verdict.kind == "no"
    assert dom_verdict.witness == vec([0, 0])


def test_sum_of_indicator_like_graphs():
    seg = PuncturedPolyhedron(Polyhedron.box([(0, 1)]))
    zero_on_seg = svmap.SVMap(
        1, 1, ncset.product(seg, PuncturedPolyhedron(Polyhedron.singleton([0])))
    )
    total, report = svmap.sum_maps(zero_on_seg, zero_on_seg)
    assert report.holds
    assert total.nearly_convex()
    val = svmap.value(total, [rat(1, 2)])
    assert val.carrier.set_equal(Polyhedron.singleton([0]))


def test_sum_of_linear_maps_is_constant():
    ident = svmap.SVMap.from_linear([[1]], dom=Polyhedron.box([(0, 1)]))
    flip = svmap.SVMap(
        1,
        1,
        PuncturedPolyhedron(
            Polyhedron.from_hrep(
                [[1, 0], [-1, 0]], [1, 0], [[1, 1]], [1]
            )
        ),
    )  # y = 1 - x on [0, 1]
    total, report = svmap.sum_maps(ident, flip)
    assert report.holds
    val = svmap.value(total, [rat(1, 3)])
    assert val.carrier.set_equal(Polyhedron.singleton([1]))


def test_compose_identity():
    ident = svmap.SVMap.from_linear([[1]], dom=Polyhedron.box([(0, 1)]))
    comp, report = svmap.compose(ident, ident)
    assert report.holds
    assert comp.graph.carrier.set_equal(ident.graph.carrier)


def test_compose_epigraphical_of_identity():
    # F(x) = {x} on [0,1]; G(y) = [y, inf): composition is the epigraphical
    # mapping of the identity restricted to [0,1].
    f = svmap.SVMap.from_linear([[1]], dom=Polyhedron.box([(0, 1)]))
    g = svmap.SVMap(
        1, 1, PuncturedPolyhedron(Polyhedron.from_hrep([[1, -1]], [0]))
    )
    comp, report = svmap.compose(g, f)
    assert report.holds
    expected = Polyhedron.from_hrep(
        [[1, -1], [1, 0], [-1, 0]], [0, 1, 0]
    )
    assert comp.graph.carrier.set_equal(expected)


def test_compose_constant_source():
    theta = PuncturedPolyhedron(Polyhedron.box([(0, 1)]))
    const = svmap.SVMap.constant(theta)
    ident = svmap.SVMap.from_linear([[1]])
    comp, report = svmap.compose(ident, const)
    assert report.holds
    expected = Polyhedron.box([(0, 0), (0, 1)])
    assert comp.graph.carrier.set_equal(expected)


def test_intersection_mapping():
    up = svmap.SVMap(
        1, 1, PuncturedPolyhedron(Polyhedron.from_hrep([[1, -1]], [0]))
    )  # y >= x
    down = svmap.SVMap(
        1, 1, PuncturedPolyhedron(Polyhedron.from_hrep([[-1, -1]], [0]))
    )  # y >= -x
    inter, report = svmap.intersection_mapping([up, down])
    assert report.holds
    expected = Polyhedron.from_hrep([[1, -1], [-1, -1]], [0, 0])  # y >= |x|
    assert inter.graph.carrier.set_equal(expected)
    single, report_single = svmap.intersection_mapping([up])
    assert single.graph.carrier.set_equal(up.graph.carrier)
    assert report_single.holds


def test_intersection_mapping_disjoint_graphs():
    a = svmap.SVMap(1, 1, PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)])))
    b = svmap.SVMap(1, 1, PuncturedPolyhedron(Polyhedron.box([(3, 4), (3, 4)])))
    _, report = svmap.intersection_mapping([a, b])
    assert not report.holds


def test_image_and_preimage():
    ident = svmap.SVMap.from_linear([[1, 0], [0, 1]])
    square = PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 1)]))
    img, report = svmap.image(ident, square)
    assert report.holds
    assert img.carrier.set_equal(square.carrier)

    f = boundary_punctured_map()
    pre, report = svmap.preimage(f, PuncturedPolyhedron(Polyhedron.singleton([1])))
    # preimage of {1} is [0,1) whose near-equality class is [0,1]
    assert pre.carrier.set_equal(Polyhedron.box([(0, 1)]))
    assert report.holds

    proj = svmap.SVMap.from_linear([[1, 0]])
    img2, _ = svmap.image(proj, square)
    direct = ncset.linear_image([[1, 0]], square)
    assert img2.carrier.set_equal(direct.carrier)


def test_interior_formula_full_dimensional_graph():
    # full-dimensional graph: interior membership (relative interior with an
    # empty implicit system) equals the domain/value interior conjunction
    f = svmap.SVMap(1, 1, PuncturedPolyhedron(Polyhedron.box([(0, 1), (0, 2)])))
    assert f.graph.carrier.dim() == 2
    cases = [
        ([rat(1, 2)], [1], True),
        ([0], [1], False),
        ([rat(1, 2)], [0], False),
        ([rat(1, 2)], [2], False),
    ]
    for x, y, expected in cases:
        lhs = f.graph.carrier.ri_contains(vec(x) + vec(y))
        dom_int = svmap.domain(f).carrier.ri_contains(vec(x))
        val_int = dom_int and svmap.value(f, x).carrier.ri_contains(vec(y))
        assert lhs is expected
        assert (dom_int and val_int) is expected
