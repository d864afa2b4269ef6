from ncvx.rational import (
    dot,
    mat,
    mat_rank,
    parse_vec,
    primitive,
    primitive_signed,
    rat,
    rat_str,
    solve_linear,
    vec,
    vec_str,
)


def test_rat_parse_and_render():
    assert rat_str(rat("3/6")) == "1/2"
    assert rat_str(rat(7)) == "7"
    assert rat_str(rat(-4, 8)) == "-1/2"
    assert rat("5") == rat(5)
    assert parse_vec("1 -2/3 0") == vec([1, rat(-2, 3), 0])
    assert vec_str(vec([1, rat(1, 2)])) == "1 1/2"


def test_exact_arithmetic():
    assert rat(1, 3) + rat(1, 6) == rat(1, 2)
    assert dot(vec([rat(1, 3), 2]), vec([3, rat(1, 4)])) == rat(3, 2)


def test_primitive_scaling():
    assert primitive(vec([rat(1, 2), rat(3, 4)])) == vec([2, 3])
    assert primitive(vec([-2, -4])) == vec([-1, -2])
    assert primitive_signed(vec([-2, -4])) == vec([1, 2])
    assert primitive(vec([0, 0])) == vec([0, 0])


def test_solve_linear_underdetermined():
    res = solve_linear(mat([[1, 1]]), vec([1]))
    assert res.solution == vec([1, 0])
    assert res.rank == 1
    assert res.nullspace == (vec([-1, 1]),)


def test_solve_linear_overdetermined_consistent():
    res = solve_linear(mat([[1], [2]]), vec([1, 2]))
    assert res.solution == vec([1])
    assert res.nullspace == ()
    assert res.rank == 1


def test_solve_linear_inconsistent():
    res = solve_linear(mat([[1], [1]]), vec([0, 1]))
    assert res.solution is None
    assert res.rank == 1


def test_rank():
    assert mat_rank(mat([[1, 2], [2, 4], [0, 1]])) == 2
