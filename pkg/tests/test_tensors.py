import pytest

from stabledirac.poly import Chart, parse_poly
from stabledirac.tensors import (
    EndoField,
    KForm,
    KVector,
    TensorDegreeError,
    VectorField,
    coord_form,
    coord_vector,
    exterior_derivative,
    flat,
    gd_bracket,
    interior_product,
    lie_derivative,
    nijenhuis_tensor,
    schouten_bracket,
    schouten_concomitant,
    sharp,
    wedge,
)

import gen

C3 = Chart(("x", "y", "z"))
C2 = Chart(("x", "y"))


def v(ch, name):
    return coord_vector(ch, name)


def f(ch, name):
    return coord_form(ch, name)


def p(ch, text):
    return parse_poly(text, ch.coords)


def rotation(ch):
    return EndoField.from_images(ch, {"x": v(ch, "y"), "y": -v(ch, "x")})


def heisenberg_F():
    return EndoField.from_images(C3, {"x": v(C3, "y"), "y": -v(C3, "x") - v(C3, "z") * p(C3, "y")})


class TestExteriorDerivative:
    def test_examples(self):
        assert exterior_derivative(f(C3, "y") * p(C3, "x")) == f(C3, "x").wedge(f(C3, "y"))
        assert exterior_derivative(f(C3, "x").wedge(f(C3, "y"))).is_zero()
        xi = f(C3, "z") - f(C3, "x") * p(C3, "y")
        assert exterior_derivative(xi) == f(C3, "x").wedge(f(C3, "y"))

    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_d_squared(self, k):
        r = gen.rng(k)
        w = gen.form(C3, k, r)
        assert exterior_derivative(exterior_derivative(w)).is_zero()


class TestLieDerivative:
    def test_examples(self):
        assert lie_derivative(v(C3, "x"), f(C3, "y") * p(C3, "x")) == f(C3, "y")
        assert lie_derivative(v(C3, "z"), wedge(v(C3, "x"), v(C3, "y")) * p(C3, "y")).is_zero()

    def test_commutator_antisymmetry(self):
        r = gen.rng(1)
        X, Y = gen.vector(C3, r), gen.vector(C3, r)
        assert lie_derivative(X, Y) == -lie_derivative(Y, X)

    def test_cartan_formula(self):
        r = gen.rng(2)
        for k in (1, 2):
            X, w = gen.vector(C3, r), gen.form(C3, k, r)
            rhs = interior_product(X, exterior_derivative(w)) + exterior_derivative(interior_product(X, w))
            assert lie_derivative(X, w) == rhs


class TestInteriorProduct:
    def test_examples(self):
        assert interior_product(v(C3, "x"), f(C3, "x").wedge(f(C3, "y"))) == f(C3, "y")
        vol = f(C3, "x").wedge(f(C3, "y")).wedge(f(C3, "z"))
        assert interior_product(wedge(v(C3, "x"), v(C3, "y")), vol) == f(C3, "z")
        assert interior_product((v(C3, "x"), v(C3, "y")), vol) == f(C3, "z")

    def test_twice_is_zero(self):
        r = gen.rng(3)
        X, w = gen.vector(C3, r), gen.form(C3, 2, r)
        assert interior_product(X, interior_product(X, w)).is_zero()

    def test_pair_convention(self):
        r = gen.rng(4)
        X, Y, Z = (gen.vector(C3, r) for _ in range(3))
        phi = gen.form(C3, 3, r)
        assert interior_product((X, Y), phi)(Z) == phi(X, Y, Z)

    def test_degree_underflow(self):
        with pytest.raises((TensorDegreeError, ValueError)):
            interior_product(wedge(v(C3, "x"), v(C3, "y")), f(C3, "x"))


class TestSchouten:
    def test_constant_and_so3(self):
        assert schouten_bracket(wedge(v(C3, "x"), v(C3, "y")), wedge(v(C3, "x"), v(C3, "y"))).is_zero()
        W = (wedge(v(C3, "y"), v(C3, "z")) * p(C3, "x") + wedge(v(C3, "z"), v(C3, "x")) * p(C3, "y")
             + wedge(v(C3, "x"), v(C3, "y")) * p(C3, "z"))
        assert schouten_bracket(W, W).is_zero()

    def test_vector_bracket_is_lie_derivative(self):
        r = gen.rng(5)
        V, W = gen.vector(C3, r), gen.multivector(C3, 2, r)
        assert schouten_bracket(V, W) == lie_derivative(V, W)

    def test_gelfand_dorfman_identity(self):
        r = gen.rng(6)
        P = gen.multivector(C3, 2, r)
        PP = schouten_bracket(P, P)
        dx = [f(C3, c) for c in C3.base_coords]
        for a in dx:
            for b in dx:
                for c in dx:
                    rhs = c(sharp(P, gd_bracket(P, a, b)) - lie_derivative(sharp(P, a), sharp(P, b))) * 2
                    assert PP(a, b, c) == rhs


class TestSharpFlat:
    def test_sharp_convention(self):
        P = wedge(v(C2, "x"), v(C2, "y"))
        assert sharp(P, f(C2, "y")) == -v(C2, "x")
        assert sharp(P, f(C2, "x")) == v(C2, "y")
        assert sharp(KVector.zero(C2, 2), f(C2, "x")).is_zero()

    def test_flat(self):
        th = f(C3, "x").wedge(f(C3, "y"))
        assert flat(th, v(C3, "x")) == f(C3, "y")
        assert flat(th, v(C3, "z")).is_zero()
        r = gen.rng(7)
        th = gen.form(C3, 2, r)
        X, Y = gen.vector(C3, r), gen.vector(C3, r)
        assert flat(th, X)(Y) == -flat(th, Y)(X)


class TestNijenhuisAndConcomitant:
    def test_rotation_and_heisenberg(self):
        assert nijenhuis_tensor(rotation(C2), v(C2, "x"), v(C2, "y")).is_zero()
        assert nijenhuis_tensor(heisenberg_F(), v(C3, "x"), v(C3, "y")) == -v(C3, "z")

    def test_antisymmetric(self):
        r = gen.rng(8)
        A, X = gen.endo(C3, r), gen.vector(C3, r)
        assert nijenhuis_tensor(A, X, X).is_zero()

    def test_concomitant_examples(self):
        r = gen.rng(9)
        A = EndoField(C3, [[1, 2, 0], [0, 3, 1], [1, 0, 0]])
        assert schouten_concomitant(KVector.zero(C3, 2), A, gen.form(C3, 1, r), gen.vector(C3, r)).is_zero()
        P = gen.multivector(C3, 2, r)
        assert schouten_concomitant(P, EndoField.identity(C3), gen.form(C3, 1, r), gen.vector(C3, r)).is_zero()
        assert schouten_concomitant(wedge(v(C2, "x"), v(C2, "y")), rotation(C2), f(C2, "x"), v(C2, "x")).is_zero()

    def test_tensorial_in_vector_argument(self):
        r = gen.rng(10)
        A, P = gen.endo(C3, r), gen.multivector(C3, 2, r)
        X, Y, a = gen.vector(C3, r), gen.vector(C3, r), gen.form(C3, 1, r)
        g = gen.poly(C3, r)
        assert nijenhuis_tensor(A, X * g, Y) == nijenhuis_tensor(A, X, Y) * g
        assert schouten_concomitant(P, A, a, X * g) == schouten_concomitant(P, A, a, X) * g


class TestGelfandDorfmanBracket:
    def test_examples(self):
        P = wedge(v(C2, "x"), v(C2, "y"))
        assert gd_bracket(P, f(C2, "x"), f(C2, "y")).is_zero()
        r = gen.rng(11)
        P = gen.multivector(C3, 2, r)
        a, b = gen.form(C3, 1, r), gen.form(C3, 1, r)
        assert gd_bracket(P, a, a).is_zero()
        assert gd_bracket(P, a, b) == -gd_bracket(P, b, a)


def test_chart_mismatch():
    with pytest.raises(ValueError):
        v(C2, "x") + v(C3, "x")


def test_endomorphism_action_on_forms():
    A = rotation(C2)
    # (dx o A)(d/dy) = dx(-d/dx) = -1
    assert A.pull(f(C2, "x")) == -f(C2, "y")
    assert (A @ A) == -EndoField.identity(C2)
