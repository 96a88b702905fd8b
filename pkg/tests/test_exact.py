from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from akh.exact import (
    GAUSS_I,
    GAUSS_ONE,
    GAUSS_ZERO,
    ExactError,
    ExactMatrix,
    GaussScalar,
    ParamPoly,
    format_scalar,
    hermitian_signature,
    hstack,
    in_span,
    inverse,
    kernel,
    kernel_intersection,
    parse_scalar,
    rank,
    rref,
    solve,
    symmetric_signature,
    vstack,
)

rationals = st.fractions(min_value=-12, max_value=12, max_denominator=7)
scalars = st.builds(GaussScalar, rationals, rationals)


def gs(re, im=0):
    return GaussScalar(Fraction(re), Fraction(im))


# ---------------------------------------------------------------------------
# scalars


def test_scalar_basics():
    z = gs(Fraction(1, 2), Fraction(-3, 4))
    assert z + z == gs(1, Fraction(-3, 2))
    assert z - z == GAUSS_ZERO
    assert GAUSS_I * GAUSS_I == gs(-1)
    assert z.conj().conj() == z
    assert (z * z.conj()).is_real()
    assert z.norm_sq() == Fraction(1, 4) + Fraction(9, 16)
    assert bool(GAUSS_ZERO) is False
    assert bool(GAUSS_I) is True


def test_scalar_division_exact():
    a = gs(Fraction(2, 3), 5)
    b = gs(-7, Fraction(1, 2))
    assert (a / b) * b == a
    with pytest.raises(ZeroDivisionError):
        a / GAUSS_ZERO


@given(scalars, scalars, scalars)
@settings(max_examples=60, deadline=None)
def test_scalar_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert (a * b).conj() == a.conj() * b.conj()


@given(scalars)
@settings(max_examples=60, deadline=None)
def test_scalar_string_round_trip(z):
    assert parse_scalar(format_scalar(z)) == z


def test_scalar_parse_forms():
    assert parse_scalar("0") == GAUSS_ZERO
    assert parse_scalar("i") == GAUSS_I
    assert parse_scalar("-i") == -GAUSS_I
    assert parse_scalar("3i") == gs(0, 3)
    assert parse_scalar("1/2-3/4*i") == gs(Fraction(1, 2), Fraction(-3, 4))
    assert parse_scalar("-2/3") == gs(Fraction(-2, 3))
    with pytest.raises(ExactError):
        parse_scalar("one")


# ---------------------------------------------------------------------------
# matrices


def test_kernel_spec_examples():
    zero3 = ExactMatrix.zeros(3, 3)
    assert kernel(zero3) == [
        (GAUSS_ONE, GAUSS_ZERO, GAUSS_ZERO),
        (GAUSS_ZERO, GAUSS_ONE, GAUSS_ZERO),
        (GAUSS_ZERO, GAUSS_ZERO, GAUSS_ONE),
    ]
    m = ExactMatrix([[GAUSS_ONE, GAUSS_I], [GAUSS_ZERO, GAUSS_ZERO]])
    assert kernel(m) == [(-GAUSS_I, GAUSS_ONE)]


def test_signature_spec_example():
    d = ExactMatrix([[1, 0, 0], [0, -1, 0], [0, 0, 0]])
    assert symmetric_signature(d) == (1, 1, 1)


def test_solve_basics():
    m = ExactMatrix([[1, 2], [0, 1]])
    x = solve(m, [gs(5), gs(2)])
    assert x == (gs(1), gs(2))
    inconsistent = ExactMatrix([[1, 1], [1, 1]])
    assert solve(inconsistent, [gs(0), gs(1)]) is None


def test_inverse_and_rank():
    m = ExactMatrix([[1, 1], [0, 2]])
    assert inverse(m) @ m == ExactMatrix.identity(2)
    assert rank(m) == 2
    with pytest.raises(ExactError):
        inverse(ExactMatrix([[1, 1], [1, 1]]))


small_entries = st.builds(GaussScalar, st.integers(-4, 4), st.integers(-4, 4))


@st.composite
def small_matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    data = draw(
        st.lists(
            st.lists(small_entries, min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
    return ExactMatrix(data)


@given(small_matrices())
@settings(max_examples=50, deadline=None)
def test_kernel_vectors_annihilate(m):
    vecs = kernel(m)
    assert len(vecs) == m.cols - rank(m)
    for v in vecs:
        assert all(not x for x in m.apply(v))


@given(small_matrices())
@settings(max_examples=40, deadline=None)
def test_rref_idempotent_and_deterministic(m):
    r1, p1 = rref(m)
    r2, p2 = rref(r1)
    assert r1 == r2 and p1 == p2
    again, pivots_again = rref(m)
    assert again == r1 and pivots_again == p1


@given(small_matrices(), st.lists(small_entries, min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_solve_recovers_consistent_rhs(m, xs):
    x = (xs * m.cols)[: m.cols]
    b = m.apply(x)
    got = solve(m, b)
    assert got is not None
    assert m.apply(got) == tuple(b)


def test_kernel_intersection_is_stack_kernel():
    a = ExactMatrix([[1, 0, -1]])
    b = ExactMatrix([[0, 1, -1]])
    inter = kernel_intersection([a, b])
    assert inter == [(GAUSS_ONE, GAUSS_ONE, GAUSS_ONE)]
    assert inter == kernel(vstack([a, b]))


def test_in_span():
    basis = [(GAUSS_ONE, GAUSS_ZERO), (GAUSS_ZERO, GAUSS_I)]
    assert in_span(basis, (gs(3), gs(0, -2)))
    assert not in_span([(GAUSS_ONE, GAUSS_ZERO)], (GAUSS_ZERO, GAUSS_ONE))
    assert in_span([], (GAUSS_ZERO, GAUSS_ZERO))
    assert not in_span([], (GAUSS_ONE, GAUSS_ZERO))


unitriangular_entries = st.fractions(min_value=-3, max_value=3, max_denominator=2)


@st.composite
def invertible_matrices(draw, n=3):
    lo = [[GAUSS_ZERO] * n for _ in range(n)]
    up = [[GAUSS_ZERO] * n for _ in range(n)]
    for i in range(n):
        lo[i][i] = GAUSS_ONE
        up[i][i] = GAUSS_ONE
        for j in range(i):
            lo[i][j] = GaussScalar(draw(unitriangular_entries))
            up[j][i] = GaussScalar(draw(unitriangular_entries))
    return ExactMatrix(lo) @ ExactMatrix(up)


@st.composite
def symmetric_matrices(draw, n=3):
    vals = [[GAUSS_ZERO] * n for _ in range(n)]
    for i in range(n):
        vals[i][i] = GaussScalar(draw(unitriangular_entries))
        for j in range(i + 1, n):
            x = GaussScalar(draw(unitriangular_entries))
            vals[i][j] = x
            vals[j][i] = x
    return ExactMatrix(vals)


@given(symmetric_matrices(), invertible_matrices())
@settings(max_examples=40, deadline=None)
def test_signature_congruence_invariant(s, p):
    direct = symmetric_signature(s)
    transformed = symmetric_signature(p.transpose() @ s @ p)
    assert direct == transformed


def test_signature_rejects_bad_input():
    with pytest.raises(ExactError):
        symmetric_signature(ExactMatrix([[0, 1], [2, 0]]))
    with pytest.raises(ExactError):
        symmetric_signature(ExactMatrix([[GAUSS_I]]))
    with pytest.raises(ExactError):
        hermitian_signature(ExactMatrix([[GAUSS_I]]))


def test_hermitian_signature_positive_definite():
    # A^H A + I is positive definite for any A
    a = ExactMatrix([[GAUSS_I, gs(2)], [gs(1, 1), GAUSS_ZERO]])
    h = a.conj_transpose() @ a + ExactMatrix.identity(2)
    assert h == h.conj_transpose()
    assert hermitian_signature(h) == (2, 0, 0)


def test_hermitian_signature_zero_diagonal():
    # antidiagonal hermitian pair, zero diagonal: one plus, one minus
    h = ExactMatrix([[GAUSS_ZERO, GAUSS_I], [-GAUSS_I, GAUSS_ZERO]])
    assert hermitian_signature(h) == (1, 1, 0)
    s = ExactMatrix([[0, 1], [1, 0]])
    assert symmetric_signature(s) == (1, 1, 0)


def test_stack_shape_errors():
    with pytest.raises(ExactError):
        vstack([ExactMatrix([[1]]), ExactMatrix([[1, 2]])])
    with pytest.raises(ExactError):
        hstack([ExactMatrix([[1]]), ExactMatrix([[1], [2]])])


# ---------------------------------------------------------------------------
# parameter polynomials


NAMES = ("t1", "t2")


def var(n):
    return ParamPoly.variable(NAMES, n)


def test_parampoly_basics():
    t1, t2 = var("t1"), var("t2")
    p = (t1 + t2) * (t1 - t2)
    q = t1 * t1 - t2 * t2
    assert p == q
    assert not (p - q)
    assert p.evaluate({"t1": 3, "t2": 2}) == gs(5)
    assert ParamPoly.zero(NAMES).is_zero()
    assert (t1 * 0).is_zero()


def test_parampoly_scalar_mixing():
    t1 = var("t1")
    p = GAUSS_I * t1 + 1
    assert p.evaluate({"t1": 2, "t2": 0}) == gs(1, 2)
    assert (p.conj()).evaluate({"t1": 2, "t2": 0}) == gs(1, -2)
    with pytest.raises(ExactError):
        t1 + ParamPoly.variable(("other",), "other")


small_polys = st.builds(
    lambda c0, c1, c2, e: ParamPoly(
        NAMES, {(0, 0): c0, (1, 0): c1, (0, e): c2}
    ),
    small_entries,
    small_entries,
    small_entries,
    st.integers(1, 3),
)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=40, deadline=None)
def test_parampoly_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert p * (q * r) == (p * q) * r


@given(small_polys, small_polys, rationals, rationals)
@settings(max_examples=40, deadline=None)
def test_parampoly_evaluation_is_homomorphism(p, q, a, b):
    point = {"t1": a, "t2": b}
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
