"""Acceptance suite: one test per criterion, exact equality throughout.

Each test records its outcome; ``conftest.py`` prints one PASS/FAIL line per
criterion at the end of the session.
"""

import io
import json
import random
from fractions import Fraction

import pytest

from stabledirac.bundle import (
    TwistData,
    WadeParams,
    courant_bracket_h0,
    dL_omega_formula,
    jacobi_anomaly,
    lift_to_product,
    metric_G,
    restrict_invariant,
    stable_courant_bracket,
)
from stabledirac.cli import main
from stabledirac.corpus import FIXTURES
from stabledirac.dirac import (
    SubbundleFrame,
    _to_chart,
    check_dirac,
    check_dirac_jacobi,
    extension_swap,
    graph_2form,
    graph_poisson,
    jacobi_prolongation_preconditions,
    prolong_dirac,
    prolong_dirac_jacobi,
    prolongation_preconditions,
    span_equal,
    trivial_extensions,
)
from stabledirac.gcs import (
    b_transform,
    courant_nijenhuis_check,
    eigenvalue_guard,
    gacs_algebraic_check,
    gacs_normality_check,
    gcs_algebraic_check,
    gcs_integrability_check,
    lift_gacs_to_gcs,
    phi_square_check,
    projection_check,
    prolong_gcs_J0,
    supplementary_conditions_check,
    torus_bundle_builder,
)
from stabledirac.poly import Chart
from stabledirac.report import PreconditionError
from stabledirac.tensors import (
    KForm,
    exterior_derivative,
    gd_bracket,
    lie_derivative,
    schouten_bracket,
    sharp,
)

import gen
from test_dirac import bivector, closed_graph, jacobi_pair, nonpoisson, so3, unimodular, v
from test_gcs import (
    C4,
    anisotropic,
    curved_over_symplectic,
    f,
    heisenberg,
    p,
    symplectic_type,
    trivial_contact,
    z_dependent,
)

RESULTS = {}

C3 = Chart(("x", "y", "z"))


@pytest.fixture
def criterion(request):
    number = request.node.get_closest_marker("criterion").args[0]

    def record(ok):
        RESULTS[number] = (request.node.name, ok)
        print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {request.node.name}")
        return ok

    return record


def crit(n):
    return pytest.mark.criterion(n)


@crit(1)
def test_stable_bracket_matches_lifted_bracket(criterion):
    r = gen.rng(101)
    failures = 0
    for case in range(50):
        ch = gen.chart(r.randint(1, 3), 1 + case % 2)
        tw = gen.twist(ch, r)
        a, b = gen.section(ch, r), gen.section(ch, r)
        lifted = courant_bracket_h0(lift_to_product(a), lift_to_product(b), tw.lifted())
        failures += restrict_invariant(lifted, ch) != stable_courant_bracket(a, b, tw)
    assert criterion(failures == 0)


@crit(2)
def test_gelfand_dorfman_and_closed_form_identities(criterion):
    r = gen.rng(102)
    dx = [KForm.one_form(C3, [int(i == j) for j in range(3)]) for i in range(3)]
    ok = True
    for _ in range(20):
        P = gen.multivector(C3, 2, r)
        PP = schouten_bracket(P, P)
        phi = gen.closed_form(C3, 1, r)
        dphi = exterior_derivative(phi)
        LP = lie_derivative(sharp(P, phi), P)
        for a in dx:
            for b in dx:
                for c in dx:
                    gd = c(sharp(P, gd_bracket(P, a, b)) - lie_derivative(sharp(P, a), sharp(P, b))) * 2
                    ok &= PP(a, b, c) == gd
                ok &= PP(a, b, phi) == (dphi(sharp(P, a), sharp(P, b)) - LP(a, b)) * 2
    assert criterion(ok)


@crit(3)
def test_jacobi_anomaly(criterion):
    r = gen.rng(103)
    ok = True
    for _ in range(20):
        s = [gen.section(C3, r) for _ in range(3)]
        lhs, rhs = jacobi_anomaly(*s, gen.poly(C3, r))
        ok &= lhs == rhs
    assert criterion(ok)


@crit(4)
def test_dirac_graph_equivalences(criterion):
    ok = check_dirac(graph_poisson(so3())).ok
    ok &= not check_dirac(graph_poisson(nonpoisson())).ok
    r = random.Random(104)
    for _ in range(10):
        W = gen.multivector(C3, 2, r, degree=1)
        ok &= check_dirac(graph_poisson(W)).ok == schouten_bracket(W, W).is_zero()
    # stable directions pass iff W is Poisson and each V_a preserves it
    for _ in range(6):
        W = gen.multivector(C3, 2, r, degree=1)
        V = [gen.vector(C3, r, degree=1) if r.random() < 0.5 else v(C3, "z") * r.randint(1, 2)]
        direct = (schouten_bracket(W, W).is_zero() and lie_derivative(V[0], W).is_zero())
        ok &= check_dirac(graph_poisson(W, V)).ok == direct
    z = C3.var("z")
    W = bivector(C3, [(("x", "y"), 1)])
    pair_ok = [v(C3, "z"), v(C3, "z") * 2]
    pair_bad = [v(C3, "z"), v(C3, "x") * z]
    ok &= check_dirac(graph_poisson(W, pair_ok)).ok
    ok &= not check_dirac(graph_poisson(W, pair_bad)).ok
    rot = -v(C3, "x") * C3.var("y") + v(C3, "y") * C3.var("x")
    ok &= check_dirac(graph_poisson(so3(), [rot])).ok
    ok &= not check_dirac(graph_poisson(so3(), [v(C3, "x")])).ok
    assert criterion(ok)


@crit(5)
def test_prolongation_soundness(criterion):
    r = gen.rng(105)
    ok = True
    for case in range(10):
        base, F = closed_graph(r, h=case % 2)
        z, w = v(base, "z"), v(base, "w")
        V = [z * Fraction(r.randint(1, 3)) + w * Fraction(r.randint(-3, 3)), w]
        ok &= prolongation_preconditions(F, V).ok
        ok &= check_dirac(prolong_dirac(F, V)).ok
    low = Chart(("x", "y", "z"))
    ch = Chart(("x", "y", "z", "w"), ("t1",))
    lift = lambda f: KForm.from_components(ch, f.degree, [(k, c.to_vars(ch.coords)) for k, c in f.coeffs.items()])
    sigma, theta = lift(gen.form(low, 2, r)), lift(gen.form(low, 1, r))
    F = graph_2form(sigma, [theta], ch)
    tw = TwistData(ch, -exterior_derivative(sigma), (-exterior_derivative(theta),))
    ok &= not tw.is_zero() and check_dirac(F, tw).ok
    big = prolong_dirac(F, [v(ch, "w")], tw)
    ok &= check_dirac(big, tw.extended(big.chart)).ok
    ok &= not prolongation_preconditions(F, [v(ch, "x")], tw).ok
    try:
        prolong_dirac(F, [v(ch, "x")], tw)
        ok = False
    except PreconditionError:
        pass
    assert criterion(ok)


@crit(6)
def test_jacobi_prolongation_spans_prolonged_bivector(criterion):
    W, E = jacobi_pair()
    y = C3.var("y")
    params = WadeParams((1,))
    J = graph_poisson(W, [-E])
    ok = check_dirac_jacobi(J, params).ok
    for V in ([v(C3, "y")], [v(C3, "x") + v(C3, "z") * y, v(C3, "z")]):
        ok &= jacobi_prolongation_preconditions(J, V, params).ok
        big = prolong_dirac_jacobi(J, V, params)
        ok &= check_dirac_jacobi(big, params.extended(len(V))).ok
        ok &= span_equal(big, graph_poisson(W, [-E, *V], big.chart))
    assert criterion(ok)


@crit(7)
def test_normality_matches_lift_integrability(criterion):
    instances = [trivial_contact(), heisenberg(), torus_bundle_builder(symplectic_type(), [[1, 2]]),
                 z_dependent(), anisotropic(), curved_over_symplectic()]
    ok = True
    verdicts = []
    for g in instances:
        ok &= gacs_algebraic_check(g).ok
        normal = gacs_normality_check(g).ok
        L = lift_gacs_to_gcs(g)
        lifted = gcs_algebraic_check(L).ok and gcs_integrability_check(L).ok
        ok &= normal == lifted == courant_nijenhuis_check(L).ok
        if normal and eigenvalue_guard(g).ok:
            ok &= supplementary_conditions_check(g).ok
        verdicts.append(normal)
    ok &= set(verdicts) == {True, False}
    assert criterion(ok)


@crit(8)
def test_heisenberg_projection(criterion):
    rep, proj = projection_check(heisenberg(), ("z",))
    ok = rep.ok and proj is not None and rep.verdict("z-independence")
    ok &= proj.chart == Chart(("x", "y")) and gcs_integrability_check(proj).ok
    rep, proj = projection_check(z_dependent(), ("z",))
    ok &= proj is None and not rep.verdict("z-independence")
    assert criterion(ok)


@crit(9)
def test_J0_prolongation_preserves_verdicts(criterion):
    good = symplectic_type()
    bad = b_transform(symplectic_type(C4, [("x", "y"), ("p", "q")]), f(C4, "x").wedge(f(C4, "y")) * p(C4, "p"))
    ok = gcs_integrability_check(good).ok and not gcs_integrability_check(bad).ok
    for g in (good, bad):
        for k in (1, 2):
            out = prolong_gcs_J0(g, k)
            ok &= phi_square_check(out).ok
            ok &= gcs_algebraic_check(out).ok == gcs_algebraic_check(g).ok
            ok &= gcs_integrability_check(out).ok == gcs_integrability_check(g).ok
    assert criterion(ok)


@crit(10)
def test_trivial_extensions(criterion):
    r = gen.rng(110)
    ok = True
    verdicts = set()
    for case in range(5):
        sigma = gen.closed_form(C3, 2, r) if case % 2 else gen.form(C3, 2, r)
        F = graph_2form(sigma, [gen.closed_form(C3, 1, r)])
        F = F.recombine(unimodular(len(F), F.chart, r))
        L1, L2 = trivial_extensions(F, 1)
        verdict = check_dirac(F).ok
        ok &= check_dirac(L1).ok == verdict == check_dirac(L2).ok
        verdicts.add(verdict)
        h = F.chart.h
        ok &= SubbundleFrame(L1.chart, [extension_swap(s, h) for s in L1]) == L2
        for _ in range(3):
            a, b = gen.section(L1.chart, r), gen.section(L1.chart, r)
            ok &= metric_G(extension_swap(a, h), extension_swap(b, h)) == metric_G(a, b)
    ok &= verdicts == {True, False}
    assert criterion(ok)


@crit(11)
def test_dL_omega_formula(criterion):
    r = gen.rng(111)
    ok = True
    nonzero = 0
    for _ in range(10):
        beta, gamma = gen.form(C3, 2, r), gen.form(C3, 1, r)
        F = graph_2form(-beta, [-gamma])
        ch = F.chart
        tw = TwistData(ch, _to_chart(exterior_derivative(beta), ch), (_to_chart(exterior_derivative(gamma), ch),))
        ok &= check_dirac(F, tw).ok
        triple = []
        for _ in range(3):
            s = F[0] * ch.zero()
            for gen_s in F:
                s = s + gen_s * gen.poly(ch, r, 1, 2)
            triple.append(s)
        ok &= all(metric_G(a, b).is_zero() for a in triple for b in triple)
        lhs, rhs = dL_omega_formula(*triple, tw)
        ok &= lhs == rhs
        nonzero += not rhs.is_zero()
    ok &= nonzero > 0
    assert criterion(ok)


@crit(12)
def test_corpus_determinism(criterion):
    runs = []
    for _ in range(2):
        out, err = io.StringIO(), io.StringIO()
        code = main(["corpus", "run", "all", "--json", "--seed", "7"], out, err)
        runs.append((code, out.getvalue()))
    ok = runs[0] == runs[1] and runs[0][0] == 0
    data = json.loads(runs[0][1])
    by_name = {item["fixture"]: item for item in data}
    for fx in FIXTURES:
        item = by_name[fx.name]
        ok &= item["as_expected"]
        if not fx.expect_pass:
            failed = {c["name"] for rep in item["report"]["reports"] for c in rep["conditions"] if not c["passed"]}
            ok &= any(name.startswith(fx.designated) for name in failed)
    text = [io.StringIO(), io.StringIO()]
    for buf in text:
        main(["corpus", "run", "all"], buf, io.StringIO())
    ok &= text[0].getvalue() == text[1].getvalue()
    assert criterion(ok)
