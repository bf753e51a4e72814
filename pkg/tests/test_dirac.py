import random
from fractions import Fraction

import pytest

from stabledirac.bundle import StableSection, TwistData, WadeParams, metric_G, restrict_invariant
from stabledirac.dirac import (
    SubbundleFrame,
    _to_chart,
    check_dirac,
    check_dirac_jacobi,
    check_inf_automorphism,
    check_isotropy,
    check_rank,
    conformal_dirac_check,
    courant_tensor,
    extension_swap,
    graph_2form,
    graph_poisson,
    inf_conformal_automorphism_check,
    jacobi_prolongation_preconditions,
    lc_poisson_checks,
    presymplectic_pair,
    prolong_dirac,
    prolong_dirac_jacobi,
    prolongation_preconditions,
    span_equal,
    trivial_extensions,
    wade_presymplectic_check,
)
from stabledirac.poly import Chart
from stabledirac.report import PreconditionError, StructureError
from stabledirac.tensors import (
    KForm,
    KVector,
    VectorField,
    coord_form,
    coord_vector,
    exterior_derivative,
    schouten_bracket,
    wedge,
)

import gen

C2 = Chart(("x", "y"))
C3 = Chart(("x", "y", "z"))
C4 = Chart(("x", "y", "z", "w"))


def v(ch, name):
    return coord_vector(ch, name)


def bivector(ch, entries):
    return KVector.from_components(ch, 2, entries)


def so3():
    x, y, z = (C3.var(c) for c in "xyz")
    return bivector(C3, [(("y", "z"), x), (("z", "x"), y), (("x", "y"), z)])


def nonpoisson():
    return bivector(C3, [(("x", "y"), 1), (("y", "z"), C3.var("y"))])


def jacobi_pair():
    W = bivector(C3, [(("x", "y"), 1), (("y", "z"), -C3.var("y"))])
    return W, v(C3, "z")


def closed_graph(r, h=0, n=4):
    """Graph of random closed forms on ``n`` coordinates, independent of the last two."""
    base = Chart(("x", "y", "z", "w")[:n])
    low = Chart(base.coords[: n - 2])
    lift = lambda f: KForm.from_components(base, f.degree, [(k, c.to_vars(base.coords)) for k, c in f.coeffs.items()])
    sigma = exterior_derivative(KForm.one_form(base, [gen.poly(low, r).to_vars(base.coords) for _ in range(n)]))
    theta = [lift(gen.closed_form(low, 1, r)) for _ in range(h)]
    return base, graph_2form(sigma, theta)


def unimodular(n, chart, r):
    """Random upper unitriangular matrix times a random permutation, with Poly entries."""
    perm = list(range(n))
    r.shuffle(perm)
    rows = []
    for i in range(n):
        row = [chart.zero()] * n
        row[perm[i]] = chart.one()
        for j in range(i + 1, n):
            row[perm[j]] = gen.poly(chart, r, 1, 2)
        rows.append(row)
    return rows


class TestIsotropyRank:
    def test_graphs_isotropic(self):
        assert check_isotropy(graph_poisson(bivector(C2, [(("x", "y"), 1)]))).ok
        r = gen.rng(1)
        assert check_isotropy(graph_2form(gen.closed_form(C3, 2, r))).ok

    def test_non_isotropic(self):
        s = StableSection(C2, v(C2, "x"), alpha=coord_form(C2, "x"))
        rep = check_isotropy(SubbundleFrame(C2, [s, StableSection(C2, alpha=coord_form(C2, "y"))]))
        assert not rep.ok
        assert rep.get("isotropy").residual == C2.const(1)

    def test_rank(self):
        F = graph_poisson(so3())
        assert check_rank(F).ok
        repeated = SubbundleFrame(C3, [F[0], F[0], F[1]])
        rep = check_rank(repeated)
        assert not rep.ok and rep.get("rank").witness is not None

    def test_rank_degenerate_on_hypersurface(self):
        x = C2.var("x")
        F = SubbundleFrame(C2, [StableSection(C2, v(C2, "x") * x), StableSection(C2, v(C2, "y"))])
        assert check_rank(F, trials=5).ok

    def test_frame_size(self):
        with pytest.raises(StructureError):
            SubbundleFrame(C3, [StableSection(C3)])

    def test_courant_tensor_refuses_uncertified(self):
        s = StableSection(C2, v(C2, "x"), alpha=coord_form(C2, "x"))
        with pytest.raises(PreconditionError):
            courant_tensor(SubbundleFrame(C2, [s, StableSection(C2, alpha=coord_form(C2, "y"))]))


class TestGraphs:
    def test_poisson_generators(self):
        F = graph_poisson(bivector(C2, [(("x", "y"), 1)]))
        assert F[0] == StableSection(C2, v(C2, "y"), alpha=coord_form(C2, "x"))
        assert F[1] == StableSection(C2, -v(C2, "x"), alpha=coord_form(C2, "y"))

    def test_zero_bivector(self):
        F = graph_poisson(KVector.zero(C3, 2), [VectorField.zero(C3)])
        assert check_dirac(F).ok

    def test_so3_passes(self):
        assert check_dirac(graph_poisson(so3())).ok
        rot = -v(C3, "x") * C3.var("y") + v(C3, "y") * C3.var("x")
        assert check_dirac(graph_poisson(so3(), [rot])).ok

    def test_decomposable_bivector_passes(self):
        W = bivector(C3, [(("x", "y"), 1), (("x", "z"), C3.var("y"))])
        assert schouten_bracket(W, W).is_zero()
        assert check_dirac(graph_poisson(W)).ok

    def test_nonpoisson_fails(self):
        rep = check_dirac(graph_poisson(nonpoisson()))
        assert not schouten_bracket(nonpoisson(), nonpoisson()).is_zero()
        assert rep.failures()[0].key == "courant-tensor"

    def test_stable_direction_conditions(self):
        # L_V W != 0 or [V_1, V_2] != 0 break integrability
        assert not check_dirac(graph_poisson(so3(), [v(C3, "x")])).ok
        W = bivector(C3, [(("x", "y"), 1)])
        z = C3.var("z")
        assert check_dirac(graph_poisson(W, [v(C3, "z"), v(C3, "z") * 2])).ok
        assert not check_dirac(graph_poisson(W, [v(C3, "z"), v(C3, "x") * z])).ok

    def test_random_linear_bivectors(self):
        r = random.Random(2)
        for _ in range(10):
            W = gen.multivector(C3, 2, r, degree=1)
            poisson = schouten_bracket(W, W).is_zero()
            assert check_dirac(graph_poisson(W)).ok == poisson

    def test_two_form_graph(self):
        F = graph_2form(KForm.from_components(C2, 2, [(("x", "y"), 1)]))
        assert F[0] == StableSection(C2, v(C2, "x"), alpha=coord_form(C2, "y"))
        assert F[1] == StableSection(C2, v(C2, "y"), alpha=-coord_form(C2, "x"))
        assert check_dirac(F).ok
        assert check_dirac(graph_2form(KForm.zero(C3, 2))).ok

    def test_two_form_graph_closedness(self):
        r = gen.rng(3)
        theta = [gen.closed_form(C3, 1, r)]
        assert check_dirac(graph_2form(gen.closed_form(C3, 2, r), theta)).ok
        bad = KForm.from_components(C3, 2, [(("y", "z"), C3.var("x"))])
        assert not check_dirac(graph_2form(bad)).ok
        assert not check_dirac(graph_2form(KForm.zero(C3, 2), [coord_form(C3, "x") * C3.var("y")])).ok

    def test_twisted_two_form_graph(self):
        r = gen.rng(4)
        sigma, theta = gen.form(C3, 2, r), gen.form(C3, 1, r)
        F = graph_2form(sigma, [theta])
        ch = F.chart
        tw = TwistData(ch, -_to_chart(exterior_derivative(sigma), ch), (-_to_chart(exterior_derivative(theta), ch),))
        assert check_dirac(F, tw).ok
        assert not check_dirac(F).ok

    def test_poisson_graph_is_lifted_graph(self):
        """graph_poisson(W, V) is the graph of W + V_a ^ d/dt^a restricted to t = 0."""
        W, E = jacobi_pair()
        F = graph_poisson(W, [-E])
        big = F.chart.extended()
        Q = W.extend_to(big) - wedge(E.extend_to(big), v(big, "t1"))
        lifted = graph_poisson(Q)
        restricted = SubbundleFrame(F.chart, [restrict_invariant(s, F.chart) for s in lifted])
        assert span_equal(F, restricted)


class TestRecombination:
    @pytest.mark.parametrize("seed", range(3))
    def test_verdict_invariance(self, seed):
        r = gen.rng(seed)
        for F in (graph_poisson(so3()), graph_poisson(nonpoisson()), graph_2form(gen.form(C3, 2, r))):
            G = F.recombine(unimodular(len(F), F.chart, r))
            assert check_dirac(G).ok == check_dirac(F).ok
            assert span_equal(F, G)


class TestTrivialExtensions:
    @pytest.mark.parametrize("seed", range(3))
    def test_verdicts_coincide(self, seed):
        r = gen.rng(10 + seed)
        sigma = gen.closed_form(C3, 2, r) if seed % 2 else gen.form(C3, 2, r)
        F = graph_2form(sigma, [gen.closed_form(C3, 1, r)])
        L1, L2 = trivial_extensions(F, 2)
        verdict = check_dirac(F).ok
        assert check_dirac(L1).ok == verdict == check_dirac(L2).ok
        assert L1.chart.h == 3
        assert check_rank(L1).ok

    def test_swap(self):
        F = graph_poisson(so3())
        L1, L2 = trivial_extensions(F, 1)
        assert SubbundleFrame(L1.chart, [extension_swap(s, 0) for s in L1]) == L2
        r = gen.rng(20)
        for _ in range(5):
            a, b = gen.section(L1.chart, r), gen.section(L1.chart, r)
            assert metric_G(extension_swap(a, 0), extension_swap(b, 0)) == metric_G(a, b)

    def test_k_positive(self):
        with pytest.raises(ValueError):
            trivial_extensions(graph_poisson(so3()), 0)


class TestAutomorphisms:
    def test_translation(self):
        assert check_inf_automorphism(graph_poisson(bivector(C3, [(("x", "y"), 1)])), v(C3, "z")).ok

    def test_rotation_of_so3(self):
        rot = -v(C3, "x") * C3.var("y") + v(C3, "y") * C3.var("x")
        assert check_inf_automorphism(graph_poisson(so3()), rot).ok

    def test_scaling_fails(self):
        F = graph_poisson(bivector(C2, [(("x", "y"), 1)]))
        rep = check_inf_automorphism(F, v(C2, "x") * C2.var("x"))
        assert not rep.ok and rep.get("inf-automorphism").residual is not None


class TestProlongation:
    def test_spans_graph_with_stable_directions(self):
        rot = -v(C3, "x") * C3.var("y") + v(C3, "y") * C3.var("x")
        big = prolong_dirac(graph_poisson(so3()), [rot])
        assert check_dirac(big).ok
        assert span_equal(big, graph_poisson(so3(), [rot], big.chart))

    def test_identity(self):
        F = graph_poisson(so3())
        assert prolong_dirac(F, []) is F

    def test_planar(self):
        F = graph_poisson(bivector(C3, [(("x", "y"), 1)]))
        assert check_dirac(prolong_dirac(F, [v(C3, "z")])).ok

    @pytest.mark.parametrize("seed", range(4))
    def test_random_admissible(self, seed):
        r = gen.rng(30 + seed)
        base, F = closed_graph(r, h=seed % 2)
        z, w = v(base, "z"), v(base, "w")
        a, b = Fraction(r.randint(1, 3)), Fraction(r.randint(-3, 3))
        V = [z * a + w * b, w]
        assert prolongation_preconditions(F, V).ok
        assert check_dirac(prolong_dirac(F, V)).ok

    def test_refusals(self):
        F = graph_poisson(so3())
        with pytest.raises(PreconditionError):
            prolong_dirac(F, [v(C3, "x")])
        W = bivector(C3, [(("x", "y"), 1)])
        rep = prolongation_preconditions(graph_poisson(W), [v(C3, "z"), v(C3, "z") * C3.var("z")])
        assert not rep.verdict("commuting")

    def test_twisted(self):
        r = gen.rng(40)
        low = Chart(("x", "y", "z"))
        ch = Chart(("x", "y", "z", "w"), ("t1",))
        lift = lambda f: KForm.from_components(ch, f.degree, [(k, c.to_vars(ch.coords)) for k, c in f.coeffs.items()])
        sigma, theta = lift(gen.form(low, 2, r)), lift(gen.form(low, 1, r))
        F = graph_2form(sigma, [theta], ch)
        tw = TwistData(ch, -exterior_derivative(sigma), (-exterior_derivative(theta),))
        assert not tw.is_zero()
        assert check_dirac(F, tw).ok
        V = [v(ch, "w")]
        big = prolong_dirac(F, V, tw)
        assert check_dirac(big, tw.extended(big.chart)).ok
        rep = prolongation_preconditions(F, [v(ch, "x")], tw)
        assert not rep.ok


class TestJacobi:
    def test_jacobi_pair_graph(self):
        W, E = jacobi_pair()
        J = graph_poisson(W, [-E])
        assert check_dirac_jacobi(J, WadeParams((1,))).ok
        assert not check_dirac_jacobi(J, WadeParams((-1,))).ok
        assert lc_poisson_checks(W, E=E).ok

    def test_c_zero_is_dirac(self):
        r = gen.rng(50)
        for F in (graph_poisson(so3(), [VectorField.zero(C3)]), graph_2form(gen.form(C3, 2, r), [gen.form(C3, 1, r)])):
            assert check_dirac_jacobi(F, WadeParams((0,))).ok == check_dirac(F).ok

    def test_violated_condition(self):
        W, E = jacobi_pair()
        J = graph_poisson(W, [-E + v(C3, "x") * C3.var("y")])
        assert not check_dirac_jacobi(J, WadeParams((1,))).ok

    @pytest.mark.parametrize("fields", [["y"], ["x+yz", "z"]])
    def test_prolongation_matches_Q(self, fields):
        W, E = jacobi_pair()
        y = C3.var("y")
        table = {"y": v(C3, "y"), "x+yz": v(C3, "x") + v(C3, "z") * y, "z": v(C3, "z")}
        V = [table[f] for f in fields]
        params = WadeParams((1,))
        J = graph_poisson(W, [-E])
        assert jacobi_prolongation_preconditions(J, V, params).ok
        big = prolong_dirac_jacobi(J, V, params)
        assert check_dirac_jacobi(big, params.extended(len(V))).ok
        assert span_equal(big, graph_poisson(W, [-E, *V], big.chart))

    def test_prolongation_refused(self):
        W, E = jacobi_pair()
        with pytest.raises(PreconditionError):
            prolong_dirac_jacobi(graph_poisson(W, [-E]), [v(C3, "x")], WadeParams((1,)))


def conformal_poisson():
    w = C4.var("w")
    return bivector(C4, [(("x", "z"), 1), (("y", "w"), 1), (("z", "w"), w)])


class TestConformal:
    def test_constant_tau(self):
        for F in (graph_poisson(so3()), graph_poisson(nonpoisson())):
            assert conformal_dirac_check(F, C3.const(2)).ok == check_dirac(F).ok

    def test_conformal_poisson(self):
        P = conformal_poisson()
        f = C4.var("x") * 2
        assert not schouten_bracket(P, P).is_zero()
        assert lc_poisson_checks(P, f=f).ok
        assert conformal_dirac_check(graph_poisson(P), f * Fraction(1, 2)).ok
        assert not conformal_dirac_check(graph_poisson(P), -f * Fraction(1, 2)).ok

    def test_poisson_with_nonconstant_tau(self):
        W = bivector(C4, [(("x", "y"), 1), (("z", "w"), 1)])
        assert check_dirac(graph_poisson(W)).ok
        assert not conformal_dirac_check(graph_poisson(W), C4.var("x")).ok

    def test_lc_poisson(self):
        P = conformal_poisson()
        rep = lc_poisson_checks(P, phi=coord_form(C4, "x") * 2)
        assert rep.ok
        assert not lc_poisson_checks(P, phi=coord_form(C4, "x") * C4.var("y")).verdict("lc-closed")

    def test_lc_trivial_cases(self):
        r = gen.rng(60)
        P = gen.multivector(C2, 2, r)
        assert lc_poisson_checks(P, f=C2.zero()).ok
        assert lc_poisson_checks(KVector.zero(C3, 2), E=gen.vector(C3, r)).ok

    def test_inf_conformal(self):
        D = graph_poisson(bivector(C2, [(("x", "y"), 1)]))
        Z = v(C2, "x") * C2.var("x")
        assert inf_conformal_automorphism_check(D, Z, C2.const(-1)).ok
        assert not inf_conformal_automorphism_check(D, Z, C2.const(1)).ok
        assert inf_conformal_automorphism_check(graph_poisson(so3()), VectorField.zero(C3), C3.zero()).ok

    def test_inf_conformal_f0_matches_inf_automorphism(self):
        rot = -v(C3, "x") * C3.var("y") + v(C3, "y") * C3.var("x")
        for Z in (rot, v(C3, "x") * C3.var("x")):
            F = graph_poisson(so3())
            assert inf_conformal_automorphism_check(F, Z, C3.zero()).ok == check_inf_automorphism(F, Z).ok


class TestPresymplectic:
    def test_two_form_graph_table(self):
        r = gen.rng(70)
        sigma = gen.form(C3, 2, r)
        pair = presymplectic_pair(graph_2form(sigma))
        assert pair.report.ok
        for i in range(3):
            for j in range(3):
                # theta_D(X, Y) = beta(X) with beta = i(Y) sigma
                assert pair.table[i][j] == sigma(v(C3, j), v(C3, i))
                assert (pair.table[i][j] + pair.table[j][i]).is_zero()

    def test_poisson_graph_table(self):
        W = so3()
        pair = presymplectic_pair(graph_poisson(W))
        for i in range(3):
            for j in range(3):
                assert pair.table[i][j] == W(coord_form(C3, i), coord_form(C3, j))

    def test_wade_condition(self):
        sigma = KForm.from_components(C2, 2, [(("x", "y"), 1)])
        assert wade_presymplectic_check(graph_2form(sigma), C2.zero()).ok
        rep = wade_presymplectic_check(graph_poisson(so3()), C3.zero())
        assert rep.get("wade-presymplectic").note == "not checkable in this chart"
