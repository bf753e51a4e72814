"""Generalized complex structures in classical-tensor form and generalized
almost contact structures.

A generalized almost complex structure on ``TM + T*M`` is stored as the
triple ``(A, pi, sigma)`` of its block matrix
``Phi(X + a) = (AX + sharp_pi a) + (flat_sigma X - a o A)``.  A generalized
almost contact structure ``(P, theta, F, Z_a, xi^a)`` is the translation
invariant structure on ``M x R^h`` with ``A = F``,
``pi = P + Z_a ^ d/dt^a`` and ``sigma = theta + xi^a ^ dt^a``.

All pointwise identities are checked on coordinate fields and coordinate
1-forms, which suffices because every condition is tensorial once the
algebraic identities hold.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .bundle import StableSection, courant_bracket_h0
from .linalg import poly_det
from .poly import Chart, ChartMismatchError, Poly
from .report import (
    PreconditionError,
    StructureError,
    StructureReport,
    condition,
    sample_point,
)
from .tensors import (
    EndoField,
    KForm,
    KVector,
    VectorField,
    coord_form,
    coord_vector,
    exterior_derivative,
    flat,
    interior_product,
    lie_derivative,
    nijenhuis_tensor,
    schouten_bracket,
    schouten_concomitant,
    sharp,
    wedge,
)

__all__ = [
    "GcsData",
    "GacsData",
    "phi_matrix",
    "phi_apply",
    "phi_square_check",
    "b_transform",
    "beta_transform",
    "gcs_algebraic_check",
    "gcs_integrability_check",
    "courant_nijenhuis_check",
    "gacs_algebraic_check",
    "gacs_normality_check",
    "eigenvalue_guard",
    "supplementary_conditions_check",
    "lift_gacs_to_gcs",
    "prolong_gcs_J0",
    "adapted_frame",
    "projection_check",
    "ehresmann_invariance_check",
    "torus_conditions",
    "torus_bundle_builder",
    "adapted_gacs",
]

DEFAULT_TRIALS = 7


def _coerce(obj, chart: Chart):
    """Re-express a tensor over ``chart`` (same base coordinate names)."""
    if obj.chart == chart:
        return obj
    if isinstance(obj, VectorField):
        return VectorField(chart, [c.to_vars(chart.coords) for c in obj.comps])
    if isinstance(obj, EndoField):
        return EndoField(chart, [[c.to_vars(chart.coords) for c in r] for r in obj.matrix])
    return type(obj).from_components(chart, obj.degree, [(k, c.to_vars(chart.coords)) for k, c in obj.coeffs.items()])


@dataclass(frozen=True)
class GcsData:
    """``(A, pi, sigma)`` on a chart of index 0."""

    A: EndoField
    pi: KVector
    sigma: KForm

    def __post_init__(self):
        chart = self.A.chart
        if chart.h != 0:
            raise StructureError("generalized complex data live on a chart of index 0")
        if self.pi.chart != chart or self.sigma.chart != chart:
            raise ChartMismatchError("A, pi and sigma must share a chart")
        if self.pi.degree != 2 or self.sigma.degree != 2:
            raise StructureError("pi must be a bivector and sigma a 2-form")

    @property
    def chart(self) -> Chart:
        return self.A.chart


@dataclass(frozen=True)
class GacsData:
    """``(P, theta, F, Z_a, xi^a)`` on a chart of index 0, with ``h = len(Z) >= 1``."""

    P: KVector
    theta: KForm
    F: EndoField
    Z: tuple
    xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "Z", tuple(self.Z))
        object.__setattr__(self, "xi", tuple(self.xi))
        chart = self.F.chart
        if chart.h != 0:
            raise StructureError("generalized almost contact data live on a chart of index 0")
        if len(self.Z) != len(self.xi) or not self.Z:
            raise StructureError("need h >= 1 vector fields Z_a and as many 1-forms xi^a")
        for t in (self.P, self.theta, *self.Z, *self.xi):
            if t.chart != chart:
                raise ChartMismatchError("all gacs tensors must share a chart")
        if self.P.degree != 2 or self.theta.degree != 2 or any(x.degree != 1 for x in self.xi):
            raise StructureError("P is a bivector, theta a 2-form and xi^a are 1-forms")

    @property
    def chart(self) -> Chart:
        return self.F.chart

    @property
    def h(self) -> int:
        return len(self.Z)


def _vec_items(tag: str, V: VectorField):
    names = V.chart.base_coords
    return ((f"{tag}[{names[i]}]", c) for i, c in enumerate(V.comps))


def _form_items(tag: str, T):
    names = T.chart.base_coords
    for idx in itertools.combinations(range(T.chart.n), T.degree):
        yield f"{tag}[{','.join(names[i] for i in idx)}]", T.component(idx)


# -- Phi as a block matrix ----------------------------------------------------


def phi_apply(g: GcsData, s: StableSection) -> StableSection:
    """``Phi(X + a) = (AX + sharp_pi a) + (flat_sigma X - a o A)``."""
    return StableSection._raw(g.chart, g.A(s.X) + sharp(g.pi, s.alpha), (),
                              flat(g.sigma, s.X) - g.A.pull(s.alpha), ())


def phi_matrix(g: GcsData) -> list[list[Poly]]:
    """``2n x 2n`` matrix of ``Phi`` on the frame ``(d_1..d_n, dx^1..dx^n)``."""
    chart = g.chart
    cols = [phi_apply(g, s).components() for s in StableSection.basis(chart)]
    return [list(r) for r in zip(*cols)]


def phi_square_check(g: GcsData) -> StructureReport:
    """Independent check of ``Phi^2 = -Id`` by squaring the block matrix."""
    M = phi_matrix(g)
    m = len(M)
    rep = StructureReport("block matrix square")

    def items():
        for i in range(m):
            for j in range(m):
                s = sum((M[i][k] * M[k][j] for k in range(m)), g.chart.zero())
                yield f"[{i},{j}]", s + (1 if i == j else 0)

    rep.check("gcs-phi-square", items())
    return rep


def _from_phi(chart: Chart, phi) -> GcsData:
    """Read ``(A, pi, sigma)`` off a map on sections given as a callable."""
    n = chart.n
    frame = StableSection.basis(chart)
    imgX = [phi(frame[j]) for j in range(n)]
    imgA = [phi(frame[n + i]) for i in range(n)]
    A = EndoField(chart, [[imgX[j].X.comps[i] for j in range(n)] for i in range(n)])
    pi = KVector.from_components(chart, 2, [((i, k), imgA[i].X.comps[k])
                                            for i, k in itertools.combinations(range(n), 2)])
    sigma = KForm.from_components(chart, 2, [((j, k), imgX[j].alpha.component((k,)))
                                             for j, k in itertools.combinations(range(n), 2)])
    return GcsData(A, pi, sigma)


def b_transform(g: GcsData, B: KForm) -> GcsData:
    """Conjugate ``Phi`` by ``X + a -> X + a + i(X) B``; preserves integrability when ``dB = 0``."""
    chart = g.chart
    exp = lambda s, sgn: StableSection._raw(chart, s.X, (), s.alpha + interior_product(s.X, B) * chart.const(sgn), ())
    return _from_phi(chart, lambda s: exp(phi_apply(g, exp(s, -1)), 1))


def beta_transform(g: GcsData, beta: KVector) -> GcsData:
    """Conjugate ``Phi`` by ``X + a -> X + sharp_beta a + a``; preserves integrability when ``[beta, beta] = 0``."""
    chart = g.chart
    exp = lambda s, sgn: StableSection._raw(chart, s.X + sharp(beta, s.alpha) * chart.const(sgn), (), s.alpha, ())
    return _from_phi(chart, lambda s: exp(phi_apply(g, exp(s, -1)), 1))


# -- generalized complex checks ------------------------------------------------


def gcs_algebraic_check(g: GcsData) -> StructureReport:
    chart = g.chart
    n = chart.n
    rep = StructureReport("generalized almost complex")
    A, pi, sigma = g.A, g.pi, g.sigma

    def square():
        for j in range(n):
            e = coord_vector(chart, j)
            yield from _vec_items(f"d/d{chart.base_coords[j]}", A(A(e)) + e + sharp(pi, flat(sigma, e)))

    rep.check("gcs-square", square())
    dx = [coord_form(chart, i) for i in range(n)]
    e = [coord_vector(chart, i) for i in range(n)]
    rep.check("gcs-pi-compat", ((f"({i},{j})", pi(A.pull(dx[i]), dx[j]) - pi(dx[i], A.pull(dx[j])))
                                for i in range(n) for j in range(n)))
    rep.check("gcs-sigma-compat", ((f"({i},{j})", sigma(A(e[i]), e[j]) - sigma(e[i], A(e[j])))
                                   for i in range(n) for j in range(n)))
    return rep


def _sigma_A(sigma: KForm, A: EndoField) -> KForm:
    chart = sigma.chart
    e = [coord_vector(chart, i) for i in range(chart.n)]
    return KForm.from_components(chart, 2, [((i, j), sigma(A(e[i]), e[j]))
                                            for i, j in itertools.combinations(range(chart.n), 2)])


def _cyclic_d(dform: KForm, A: EndoField, e, i, j, k) -> Poly:
    return (dform(A(e[i]), e[j], e[k]) + dform(A(e[j]), e[k], e[i]) + dform(A(e[k]), e[i], e[j]))


def _integrability(rep: StructureReport, chart: Chart, A: EndoField, pi: KVector, sigma: KForm,
                   keys=("gcs-poisson", "gcs-concomitant", "gcs-nijenhuis", "gcs-sigma-A"), extra=None):
    n = chart.n
    names = chart.base_coords
    e = [coord_vector(chart, i) for i in range(n)]
    dx = [coord_form(chart, i) for i in range(n)]
    rep.check(keys[0], _form_items("[pi,pi]", schouten_bracket(pi, pi)))
    rep.check(keys[1], (item for i in range(n) for j in range(n)
                        for item in _vec_items(f"R(d{names[i]},d/d{names[j]})",
                                               schouten_concomitant(pi, A, dx[i], e[j]))))
    dsigma = exterior_derivative(sigma)

    def nij():
        for i, j in itertools.combinations(range(n), 2):
            lhs = nijenhuis_tensor(A, e[i], e[j])
            rhs = sharp(pi, interior_product((e[i], e[j]), dsigma))
            if extra is not None:
                rhs = rhs + extra(e[i], e[j])
            yield from _vec_items(f"N(d/d{names[i]},d/d{names[j]})", lhs - rhs)

    rep.check(keys[2], nij())
    dsA = exterior_derivative(_sigma_A(sigma, A))
    rep.check(keys[3], ((f"({names[i]},{names[j]},{names[k]})", dsA(e[i], e[j], e[k]) - _cyclic_d(dsigma, A, e, i, j, k))
                        for i, j, k in itertools.combinations(range(n), 3)))


def gcs_integrability_check(g: GcsData) -> StructureReport:
    """Conditions i)-iv); refuses unless the algebraic identities hold."""
    alg = gcs_algebraic_check(g)
    if not alg.ok:
        raise PreconditionError(alg)
    rep = StructureReport("generalized complex integrability")
    _integrability(rep, g.chart, g.A, g.pi, g.sigma)
    return rep


def courant_nijenhuis_check(g: GcsData) -> StructureReport:
    """Independent oracle: Courant-Nijenhuis torsion of ``Phi`` on the coordinate frame.

    ``N(a, b) = [Phi a, Phi b] - Phi[Phi a, b] - Phi[a, Phi b] - [a, b]``,
    tensorial when ``Phi^2 = -Id`` and ``Phi`` is G-skew.
    """
    chart = g.chart
    frame = StableSection.basis(chart)
    ph = lambda s: phi_apply(g, s)
    rep = StructureReport("Courant-Nijenhuis torsion")

    def items():
        for i, j in itertools.combinations(range(len(frame)), 2):
            a, b = frame[i], frame[j]
            N = (courant_bracket_h0(ph(a), ph(b)) - ph(courant_bracket_h0(ph(a), b))
                 - ph(courant_bracket_h0(a, ph(b))) - courant_bracket_h0(a, b))
            for k, c in enumerate(N.components()):
                yield f"(e{i + 1},e{j + 1})[{k}]", c

    rep.check("gcs-torsion", items())
    return rep


# -- generalized almost contact ------------------------------------------------


def gacs_algebraic_check(g: GacsData) -> StructureReport:
    chart = g.chart
    n, h = chart.n, g.h
    names = chart.base_coords
    P, theta, F = g.P, g.theta, g.F
    e = [coord_vector(chart, i) for i in range(n)]
    dx = [coord_form(chart, i) for i in range(n)]
    rep = StructureReport("generalized almost contact")
    rep.check("gacs-P-compat", ((f"({names[i]},{names[j]})", P(F.pull(dx[i]), dx[j]) - P(dx[i], F.pull(dx[j])))
                                for i in range(n) for j in range(n)))
    rep.check("gacs-theta-compat", ((f"({names[i]},{names[j]})", theta(F(e[i]), e[j]) - theta(e[i], F(e[j])))
                                    for i in range(n) for j in range(n)))
    rep.check("gacs-FZ", (it for a in range(h) for it in _vec_items(f"F(Z{a + 1})", F(g.Z[a]))))
    rep.check("gacs-xiF", (it for a in range(h) for it in _form_items(f"xi{a + 1}oF", F.pull(g.xi[a]))))
    rep.check("gacs-iZtheta", (it for a in range(h) for it in _form_items(f"i(Z{a + 1})theta", interior_product(g.Z[a], theta))))
    rep.check("gacs-ixiP", (it for a in range(h) for it in _vec_items(f"i(xi{a + 1})P", sharp(P, g.xi[a]))))
    rep.check("gacs-duality", ((f"xi{a + 1}(Z{b + 1})", g.xi[a](g.Z[b]) - (1 if a == b else 0))
                               for a in range(h) for b in range(h)))

    def square():
        for j in range(n):
            rhs = -e[j] - sharp(P, flat(theta, e[j]))
            for a in range(h):
                rhs = rhs + g.Z[a] * g.xi[a](e[j])
            yield from _vec_items(f"F^2(d/d{names[j]})", F(F(e[j])) - rhs)

    rep.check("gacs-square", square())
    return rep


def _guard_matrix(g: GacsData) -> list[list[Poly]]:
    chart = g.chart
    cols = []
    for j in range(chart.n):
        e = coord_vector(chart, j)
        cols.append((e + sharp(g.P, flat(g.theta, e))).comps)
    return [list(r) for r in zip(*cols)]


def eigenvalue_guard(g: GacsData, trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    """``det(Id + sharp_P o flat_theta) != 0`` at random points.

    Passing is a sampled certificate only: a determinant vanishing on a
    proper subset can be missed.  An identically zero determinant is
    reported as such.
    """
    rep = StructureReport("eigenvalue guard")
    det = poly_det(_guard_matrix(g))
    if det.is_zero():
        rep.add(condition("eigenvalue-guard", det, passed=False, note="determinant is identically zero"))
        return rep
    rng = random.Random(seed)
    for _ in range(trials):
        pt = sample_point(g.chart.coords, rng)
        if det.eval_at(pt) == 0:
            rep.add(condition("eigenvalue-guard", det, passed=False, witness=pt, note="determinant vanishes here"))
            return rep
    rep.add(condition("eigenvalue-guard", passed=True, note=f"det = {det.format()}"))
    return rep


def supplementary_conditions_check(g: GacsData) -> StructureReport:
    chart = g.chart
    n, h = chart.n, g.h
    names = chart.base_coords
    e = [coord_vector(chart, i) for i in range(n)]
    rep = StructureReport("supplementary conditions")
    rep.check("supp-LZxi", (it for a in range(h) for b in range(h)
                            for it in _form_items(f"L_Z{b + 1} xi{a + 1}", lie_derivative(g.Z[b], g.xi[a]))))
    rep.check("supp-LZF", ((f"L_Z{a + 1}F[{i},{j}]", c) for a in range(h)
                           for i, row in enumerate(lie_derivative(g.Z[a], g.F).matrix) for j, c in enumerate(row)))

    def lfxi():
        for a in range(h):
            for i, j in itertools.combinations(range(n), 2):
                lhs = lie_derivative(g.F(e[i]), g.xi[a])(e[j]) - lie_derivative(g.F(e[j]), g.xi[a])(e[i])
                yield f"xi{a + 1}({names[i]},{names[j]})", lhs

    rep.check("supp-LFxi", lfxi())
    return rep


def _normality_entries(rep: StructureReport, g: GacsData):
    chart = g.chart
    n, h = chart.n, g.h
    names = chart.base_coords
    e = [coord_vector(chart, i) for i in range(n)]
    dx = [coord_form(chart, i) for i in range(n)]
    P, theta, F = g.P, g.theta, g.F
    rep.check("normal-poisson", _form_items("[P,P]", schouten_bracket(P, P)))
    rep.check("normal-concomitant", (it for i in range(n) for j in range(n)
                                     for it in _vec_items(f"R(d{names[i]},d/d{names[j]})",
                                                          schouten_concomitant(P, F, dx[i], e[j]))))
    rep.check("normal-LZP", (it for a in range(h) for it in _form_items(f"L_Z{a + 1}P", lie_derivative(g.Z[a], P))))
    rep.check("normal-LZtheta", (it for a in range(h)
                                 for it in _form_items(f"L_Z{a + 1}theta", lie_derivative(g.Z[a], theta))))
    rep.check("normal-Lxi", (it for a in range(h) for i in range(n)
                             for it in _form_items(f"L_(P d{names[i]}) xi{a + 1}",
                                                   lie_derivative(sharp(P, dx[i]), g.xi[a]))))
    rep.check("normal-ZZ", (it for a in range(h) for b in range(a + 1, h)
                            for it in _vec_items(f"[Z{a + 1},Z{b + 1}]", lie_derivative(g.Z[a], g.Z[b]))))
    dxi = [exterior_derivative(x) for x in g.xi]

    def minus_dxi_Z(X, Y):
        out = VectorField.zero(chart)
        for a in range(h):
            out = out - g.Z[a] * dxi[a](X, Y)
        return out

    dtheta = exterior_derivative(theta)

    def nij():
        for i, j in itertools.combinations(range(n), 2):
            rhs = sharp(P, interior_product((e[i], e[j]), dtheta)) + minus_dxi_Z(e[i], e[j])
            yield from _vec_items(f"N(d/d{names[i]},d/d{names[j]})", nijenhuis_tensor(F, e[i], e[j]) - rhs)

    rep.check("normal-nijenhuis", nij())
    dthF = exterior_derivative(_sigma_A(theta, F))
    rep.check("normal-theta-F", ((f"({names[i]},{names[j]},{names[k]})",
                                  dthF(e[i], e[j], e[k]) - _cyclic_d(dtheta, F, e, i, j, k))
                                 for i, j, k in itertools.combinations(range(n), 3)))


def gacs_normality_check(g: GacsData, trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    """Normality conditions, plus the supplementary ones when the guard fails.

    Refuses unless the algebraic identities hold.  The short list of
    conditions characterizes normality only where ``-1`` is not an
    eigenvalue of ``sharp_P o flat_theta``; when the sampled guard fails,
    the supplementary conditions are appended as required entries, so the
    verdict always equals integrability of the lifted structure.
    """
    alg = gacs_algebraic_check(g)
    if not alg.ok:
        raise PreconditionError(alg)
    rep = StructureReport("normality")
    _normality_entries(rep, g)
    guard = eigenvalue_guard(g, trials, seed)
    if guard.ok:
        rep.notes.append("eigenvalue guard passed; supplementary conditions are implied")
    else:
        rep.notes.append("eigenvalue guard failed; supplementary conditions are required")
        rep.extend(supplementary_conditions_check(g))
    return rep


def lift_gacs_to_gcs(g: GacsData, names: Sequence[str] | None = None) -> GcsData:
    """Translation invariant ``(F, P + Z_a ^ d_t^a, theta + xi^a ^ dt^a)`` on ``M x R^h``."""
    chart = g.chart
    names = tuple(names) if names is not None else chart.fresh_names("t", g.h)
    big = Chart(chart.base_coords + names, ())
    A = g.F.extend_to(big)
    pi = g.P.extend_to(big)
    sigma = g.theta.extend_to(big)
    for a, t in enumerate(names):
        pi = pi + wedge(g.Z[a].extend_to(big), coord_vector(big, t))
        sigma = sigma + g.xi[a].extend_to(big).wedge(coord_form(big, t))
    return GcsData(A, pi, sigma)


def prolong_gcs_J0(g: GcsData, k: int, names: Sequence[tuple[str, str]] | None = None) -> GcsData:
    """Direct sum with the constant structure ``J0 e_p = f_p, J0 f_p = -e_p`` on ``R^2k``.

    ``A`` gets the ``J0`` block; ``pi`` and ``sigma`` are extended by zero.
    On forms ``-(. o J0)`` sends ``de_p -> df_p`` and ``df_p -> -de_p``, so
    ``Phi`` acts as ``J0`` on both new factors.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    chart = g.chart
    if names is None:
        es = chart.fresh_names("e", k)
        fs = Chart(chart.base_coords + es, ()).fresh_names("f", k)
        names = list(zip(es, fs))
    if len(names) != k:
        raise ValueError(f"need {k} coordinate pairs")
    big = Chart(chart.base_coords + tuple(c for pair in names for c in pair), ())
    A = g.A.extend_to(big)
    m = [list(r) for r in A.matrix]
    one = big.one()
    for ep, fp in names:
        i, j = big.index(ep), big.index(fp)
        m[j][i] = one       # J0 d_e = d_f
        m[i][j] = -one      # J0 d_f = -d_e
    return GcsData(EndoField(big, m), g.pi.extend_to(big), g.sigma.extend_to(big))


# -- adapted coordinates ---------------------------------------------------------


@dataclass(frozen=True)
class AdaptedFrame:
    y: tuple
    z: tuple
    Y: tuple          # horizontal frame Y_u
    xi_coeffs: tuple  # xi_coeffs[a][u]


def adapted_frame(g: GacsData, fiber: Sequence[str]) -> AdaptedFrame:
    """Validate ``Z_a = d/dz^a``, ``xi^a = dz^a + xi^a_u dy^u`` and build ``Y_u``."""
    chart = g.chart
    fiber = tuple(fiber)
    if len(fiber) != g.h:
        raise StructureError(f"need {g.h} fiber coordinates, got {len(fiber)}")
    for zname in fiber:
        if zname not in chart.base_coords:
            raise StructureError(f"fiber coordinate {zname!r} is not a chart coordinate")
    y = tuple(c for c in chart.base_coords if c not in fiber)
    for a, zname in enumerate(fiber):
        if g.Z[a] != coord_vector(chart, zname):
            raise StructureError(f"Z{a + 1} is not d/d{zname}")
        for b, zb in enumerate(fiber):
            want = 1 if a == b else 0
            if g.xi[a].component((chart.index(zb),)) != chart.const(want):
                raise StructureError(f"xi{a + 1} is not of the form d{zname} + xi_u dy^u (coefficient of d{zb})")
    coeffs = tuple(tuple(g.xi[a].component((chart.index(u),)) for u in y) for a in range(g.h))
    Y = []
    for ui, u in enumerate(y):
        v = coord_vector(chart, u)
        for a, zname in enumerate(fiber):
            v = v - coord_vector(chart, zname) * coeffs[a][ui]
        Y.append(v)
    return AdaptedFrame(y, fiber, tuple(Y), coeffs)


def projection_check(g: GacsData, fiber: Sequence[str], *, trials: int = DEFAULT_TRIALS, seed: int = 0):
    """Project a normal structure to the local leaf space with coordinates ``y``.

    Returns ``(report, projected GcsData or None)``.  The report lists the
    normality entries, z-independence of the frame coefficients
    ``P^{uv} = P(dy^u, dy^v)``, ``theta_uv = theta(Y_u, Y_v)``,
    ``F_u^v = dy^v(F Y_u)``, and the checks of the projected structure.
    """
    fr = adapted_frame(g, fiber)
    alg = gacs_algebraic_check(g)
    if not alg.ok:
        raise PreconditionError(alg)
    chart = g.chart
    rep = gacs_normality_check(g, trials, seed)
    rep.title = "projection"
    dy = {u: coord_form(chart, u) for u in fr.y}
    Fcoef = [[dy[v](g.F(Yu)) for v in fr.y] for Yu in fr.Y]
    Pcoef = {(u, v): g.P(dy[u], dy[v]) for u, v in itertools.combinations(fr.y, 2)}
    Tcoef = {(fr.y[i], fr.y[j]): g.theta(fr.Y[i], fr.Y[j]) for i, j in itertools.combinations(range(len(fr.y)), 2)}

    def items():
        for zname in fr.z:
            for ui, row in enumerate(Fcoef):
                for vi, c in enumerate(row):
                    yield f"d/d{zname} F_{fr.y[ui]}^{fr.y[vi]}", c.diff(zname)
            for (u, v), c in Pcoef.items():
                yield f"d/d{zname} P^{u}{v}", c.diff(zname)
            for (u, v), c in Tcoef.items():
                yield f"d/d{zname} theta_{u}{v}", c.diff(zname)

    zc = rep.check("z-independence", items())
    if not zc.passed:
        return rep, None
    base = Chart(fr.y, ())
    conv = lambda p: p.to_vars(base.coords)
    A = EndoField(base, [[conv(Fcoef[j][i]) for j in range(len(fr.y))] for i in range(len(fr.y))])
    pi = KVector.from_components(base, 2, [((u, v), conv(c)) for (u, v), c in Pcoef.items()])
    sigma = KForm.from_components(base, 2, [((u, v), conv(c)) for (u, v), c in Tcoef.items()])
    proj = GcsData(A, pi, sigma)
    palg = gcs_algebraic_check(proj)
    rep.extend(palg)
    if palg.ok:
        rep.extend(gcs_integrability_check(proj))
    return rep, proj


def ehresmann_invariance_check(g: GacsData, fiber: Sequence[str]) -> StructureReport:
    """``R(FY_u, FY_v) = R(Y_u, Y_v)`` for the curvature ``R(X,Y) = -pr_TZ[pr X, pr Y]``.

    Checked twice: through ``d xi^a`` (on horizontal vectors
    ``R = d xi^a(X, Y) Z_a``) and through brackets,
    ``xi^a([FY_u, FY_v] - [Y_u, Y_v]) = 0``.
    """
    fr = adapted_frame(g, fiber)
    rep = StructureReport("Ehresmann curvature")
    dxi = [exterior_derivative(x) for x in g.xi]
    FY = [g.F(Y) for Y in fr.Y]
    pairs = list(itertools.combinations(range(len(fr.y)), 2))
    lab = lambda a, u, v: f"xi{a + 1}({fr.y[u]},{fr.y[v]})"
    rep.check("ehresmann-invariance", ((lab(a, u, v), dxi[a](FY[u], FY[v]) - dxi[a](fr.Y[u], fr.Y[v]))
                                       for a in range(g.h) for u, v in pairs))
    rep.check("ehresmann-bracket", ((lab(a, u, v), g.xi[a](lie_derivative(FY[u], FY[v]) - lie_derivative(fr.Y[u], fr.Y[v])))
                                    for a in range(g.h) for u, v in pairs))
    return rep


# -- building from transverse data ----------------------------------------------


def adapted_gacs(chart: Chart, fiber: Sequence[str], xi_coeffs, F_table, P_table=None, theta_table=None) -> GacsData:
    """Assemble a gacs from frame coefficients in adapted coordinates.

    ``xi_coeffs[a][u]`` gives ``xi^a = dz^a + xi^a_u dy^u``;
    ``F_table[u][v]`` gives ``F(Y_u) = F_u^v Y_v`` (``F(Z_a) = 0``);
    ``P_table[u][v]`` and ``theta_table[u][v]`` (antisymmetric) give
    ``P = 1/2 P^{uv} Y_u ^ Y_v`` and ``theta = 1/2 theta_uv dy^u ^ dy^v``.
    Entries may be polynomials over any subset of the chart coordinates.
    """
    fiber = tuple(fiber)
    y = tuple(c for c in chart.base_coords if c not in fiber)
    conv = lambda p: p.to_vars(chart.coords) if isinstance(p, Poly) else chart.const(p)
    xi_coeffs = [[conv(c) for c in row] for row in xi_coeffs]
    Z = tuple(coord_vector(chart, zn) for zn in fiber)
    xi = []
    Y = []
    for a, zn in enumerate(fiber):
        f = coord_form(chart, zn)
        for ui, u in enumerate(y):
            f = f + coord_form(chart, u) * xi_coeffs[a][ui]
        xi.append(f)
    for ui, u in enumerate(y):
        v = coord_vector(chart, u)
        for a, zn in enumerate(fiber):
            v = v - Z[a] * xi_coeffs[a][ui]
        Y.append(v)
    images = {}
    for ui, u in enumerate(y):
        img = VectorField.zero(chart)
        for vi in range(len(y)):
            c = conv(F_table[ui][vi])
            if c:
                img = img + Y[vi] * c
        images[u] = img
    # F(d_y) = F(Y_u + xi_u^a Z_a) = F(Y_u); F(d_z) = 0
    F = EndoField.from_images(chart, images)
    P = KVector.zero(chart, 2)
    theta = KForm.zero(chart, 2)
    for ui, vi in itertools.combinations(range(len(y)), 2):
        if P_table is not None:
            c = conv(P_table[ui][vi])
            if c:
                P = P + wedge(Y[ui], Y[vi]) * c
        if theta_table is not None:
            c = conv(theta_table[ui][vi])
            if c:
                theta = theta + coord_form(chart, y[ui]).wedge(coord_form(chart, y[vi])) * c
    return GacsData(P, theta, F, Z, tuple(xi))


def torus_conditions(g: GacsData, fiber: Sequence[str]) -> StructureReport:
    """Curvature conditions a) ``i(sharp_P a) Xi = 0`` and b) ``Xi(FX, FY) = Xi(X, Y)``."""
    chart = g.chart
    adapted_frame(g, fiber)
    n = chart.n
    names = chart.base_coords
    e = [coord_vector(chart, i) for i in range(n)]
    Xi = [exterior_derivative(x) for x in g.xi]
    rep = StructureReport("torus bundle curvature")
    rep.check("torus-a", (it for a in range(g.h) for i in range(n)
                          for it in _form_items(f"Xi{a + 1}(P d{names[i]})",
                                                interior_product(sharp(g.P, coord_form(chart, i)), Xi[a]))))
    rep.check("torus-b", ((f"Xi{a + 1}({names[i]},{names[j]})", Xi[a](g.F(e[i]), g.F(e[j])) - Xi[a](e[i], e[j]))
                          for a in range(g.h) for i, j in itertools.combinations(range(n), 2)))
    return rep


def torus_bundle_builder(base: GcsData, xi_coeffs, fiber: Sequence[str] | None = None) -> GacsData:
    """Local chart of a torus bundle with connection over a generalized complex base.

    ``xi_coeffs[a][u]`` are the connection coefficients.  The base must pass
    the generalized complex checks and the curvature must satisfy a) and
    b); otherwise :class:`PreconditionError` carries the failing report.
    """
    rep = gcs_algebraic_check(base)
    if rep.ok:
        rep.extend(gcs_integrability_check(base))
    if not rep.ok:
        raise PreconditionError(rep)
    h = len(xi_coeffs)
    fiber = tuple(fiber) if fiber is not None else base.chart.fresh_names("z", h)
    chart = Chart(base.chart.base_coords + fiber, ())
    m = base.chart.n
    e = [coord_vector(base.chart, i) for i in range(m)]
    dx = [coord_form(base.chart, i) for i in range(m)]
    F_table = [[base.A.matrix[v][u] for v in range(m)] for u in range(m)]
    P_table = [[base.pi(dx[u], dx[v]) for v in range(m)] for u in range(m)]
    T_table = [[base.sigma(e[u], e[v]) for v in range(m)] for u in range(m)]
    g = adapted_gacs(chart, fiber, xi_coeffs, F_table, P_table, T_table)
    cond = torus_conditions(g, fiber)
    if not cond.ok:
        raise PreconditionError(cond)
    return g
