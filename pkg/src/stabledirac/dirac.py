"""Stable Dirac and Dirac-Jacobi structures given by generating frames.

A frame of ``n + h`` sections spans a candidate subbundle ``L``.  Once
isotropy holds exactly and the rank is full at random points, ``L`` is
maximal isotropic, so ``L = L^perp``: a section lies in ``L`` iff it is
G-orthogonal to every generator.  Closure under a bracket then reduces to
the vanishing of the scalar tensor ``G([s_i, s_j], s_k)``, and all
automorphism conditions reduce to orthogonality of Lie derivatives of the
generators.  Both reductions only need generators because the brackets
obey the Leibniz rule up to multiples of ``G(s_i, s_j)``, which vanish on
``L``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .bundle import (
    StableSection,
    TwistData,
    WadeParams,
    conformal_courant_bracket,
    d,
    metric_G,
    pairing_Omega,
    stable_courant_bracket,
    wade_bracket,
)
from .linalg import rational_rank
from .poly import Chart, ChartMismatchError, Poly
from .report import (
    Condition,
    PreconditionError,
    StructureError,
    StructureReport,
    condition,
    first_nonzero,
    sample_point,
)
from .tensors import (
    KForm,
    KVector,
    VectorField,
    coord_form,
    coord_vector,
    exterior_derivative,
    flat,
    interior_product,
    lie_derivative,
    schouten_bracket,
    sharp,
    wedge,
)

__all__ = [
    "SubbundleFrame",
    "check_isotropy",
    "check_rank",
    "courant_tensor",
    "check_dirac",
    "check_dirac_jacobi",
    "graph_poisson",
    "graph_2form",
    "trivial_extensions",
    "extension_swap",
    "lie_section",
    "check_inf_automorphism",
    "prolongation_preconditions",
    "prolong_dirac",
    "jacobi_prolongation_preconditions",
    "prolong_dirac_jacobi",
    "conformal_dirac_check",
    "PresymplecticPair",
    "presymplectic_pair",
    "wade_presymplectic_check",
    "lc_poisson_checks",
    "inf_conformal_automorphism_check",
    "span_equal",
]

DEFAULT_TRIALS = 7


class SubbundleFrame:
    """Ordered generators of a candidate rank ``n + h`` subbundle."""

    __slots__ = ("chart", "sections")

    def __init__(self, chart: Chart, sections: Sequence[StableSection]):
        sections = tuple(sections)
        for s in sections:
            if s.chart != chart:
                raise ChartMismatchError(f"section over {s.chart}, frame over {chart}")
        if len(sections) != chart.n + chart.h:
            raise StructureError(f"a frame needs n + h = {chart.n + chart.h} sections, got {len(sections)}")
        self.chart = chart
        self.sections = sections

    @property
    def declared_rank(self) -> int:
        return self.chart.n + self.chart.h

    def __len__(self):
        return len(self.sections)

    def __iter__(self) -> Iterator[StableSection]:
        return iter(self.sections)

    def __getitem__(self, i):
        return self.sections[i]

    def __eq__(self, other):
        return isinstance(other, SubbundleFrame) and self.chart == other.chart and self.sections == other.sections

    def __hash__(self):
        return hash(self.sections)

    def matrix_at(self, point) -> list[list[Fraction]]:
        """The ``2(n+h) x (n+h)`` coefficient matrix, one column per generator."""
        cols = [[p.eval_at(point) for p in s.components()] for s in self.sections]
        return [list(r) for r in zip(*cols)]

    def recombine(self, matrix: Sequence[Sequence[Poly]]) -> "SubbundleFrame":
        """New frame with generators ``sum_j matrix[i][j] * s_j``."""
        out = []
        for row in matrix:
            acc = StableSection.zero(self.chart)
            for c, s in zip(row, self.sections):
                if c:
                    acc = acc + s * c
            out.append(acc)
        return SubbundleFrame(self.chart, out)

    def __repr__(self):
        return f"SubbundleFrame({self.chart}, {len(self.sections)} sections)"


def _label(*idx: int) -> str:
    return "(" + ",".join(f"s{i + 1}" for i in idx) + ")"


def _orthogonal_items(frame: SubbundleFrame, section: StableSection, tag: str):
    for k, t in enumerate(frame):
        yield f"{tag} vs s{k + 1}", metric_G(section, t)


# -- isotropy and rank -------------------------------------------------------


def check_isotropy(F: SubbundleFrame) -> StructureReport:
    rep = StructureReport("isotropy")
    n = len(F)
    rep.check("isotropy", ((_label(i, j), metric_G(F[i], F[j])) for i in range(n) for j in range(i, n)))
    return rep


def check_rank(F: SubbundleFrame, trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    """Full column rank at ``trials`` random rational points.

    This is a probabilistic certificate: a frame degenerating on a proper
    algebraic subset passes with high probability.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rep = StructureReport("rank")
    rng = random.Random(seed)
    for _ in range(trials):
        pt = sample_point(F.chart.coords, rng)
        r = rational_rank(F.matrix_at(pt))
        if r < F.declared_rank:
            rep.add(condition("rank", passed=False, witness=pt, note=f"rank {r} < {F.declared_rank}"))
            return rep
    rep.add(condition("rank", passed=True, note=f"{trials} points"))
    return rep


def _certify(F: SubbundleFrame, trials: int, seed: int) -> StructureReport:
    rep = StructureReport("maximal isotropy")
    rep.extend(check_isotropy(F))
    rep.extend(check_rank(F, trials, seed))
    if not rep.ok:
        raise PreconditionError(rep)
    return rep


def _closure(F: SubbundleFrame, bracket: Callable, key: str) -> Condition:
    n = len(F)

    def items():
        for i in range(n):
            for j in range(i + 1, n):
                b = bracket(F[i], F[j])
                for k in range(n):
                    yield _label(i, j) + f";s{k + 1}", metric_G(b, F[k])

    where, res = first_nonzero(items())
    return condition(key, res, where)


def courant_tensor(F: SubbundleFrame, twist: TwistData | None = None, *,
                   trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    """``G([s_i, s_j], s_k) = 0`` for the stable Courant bracket; refuses uncertified frames."""
    rep = _certify(F, trials, seed)
    rep.title = "courant tensor"
    rep.add(_closure(F, lambda a, b: stable_courant_bracket(a, b, twist), "courant-tensor"))
    return rep


def _composite(title: str, F, trials, seed, key, bracket) -> StructureReport:
    rep = StructureReport(title)
    rep.extend(check_isotropy(F))
    rep.extend(check_rank(F, trials, seed))
    if rep.ok:
        rep.add(_closure(F, bracket, key))
    return rep


def check_dirac(F: SubbundleFrame, twist: TwistData | None = None, *,
                trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    """Isotropy, rank and Courant tensor; the tensor is skipped if isotropy fails."""
    return _composite("stable Dirac", F, trials, seed, "courant-tensor",
                      lambda a, b: stable_courant_bracket(a, b, twist))


def check_dirac_jacobi(F: SubbundleFrame, params: WadeParams, twist: TwistData | None = None, *,
                       trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    return _composite("stable Dirac-Jacobi", F, trials, seed, "wade-tensor",
                      lambda a, b: wade_bracket(a, b, params, twist))


# -- constructors -------------------------------------------------------------


def _unit(chart: Chart, a: int) -> list[Poly]:
    return [chart.one() if b == a else chart.zero() for b in range(chart.h)]


def graph_poisson(W: KVector, V: Sequence[VectorField] = (), chart: Chart | None = None) -> SubbundleFrame:
    """Frame ``(sharp_W dx^i, dx^i(V)) + (dx^i, 0)`` and ``(-V_a, 0) + (0, e_a)``.

    ``W`` and ``V`` live on the base chart; the result is over the chart
    with ``len(V)`` stable coordinates (``chart`` if given, else ``t1..``).
    """
    if W.degree != 2:
        raise ValueError("W must be a bivector")
    base = W.chart
    if chart is None:
        chart = base.with_stable(base.fresh_names("t", len(V)))
    if chart.h != len(V):
        raise StructureError(f"chart has index {chart.h} but {len(V)} vector fields were given")
    W = _to_chart(W, chart)
    V = [_to_chart(v, chart) for v in V]
    z = chart.zero()
    gens = []
    for i in range(chart.n):
        dx = coord_form(chart, i)
        gens.append(StableSection(chart, sharp(W, dx), [dx(v) for v in V], dx, [z] * chart.h))
    for a, v in enumerate(V):
        gens.append(StableSection(chart, -v, [z] * chart.h, None, _unit(chart, a)))
    return SubbundleFrame(chart, gens)


def graph_2form(sigma: KForm, theta: Sequence[KForm] = (), chart: Chart | None = None) -> SubbundleFrame:
    """Frame ``(d_i, 0) + (flat_sigma d_i, theta(d_i))`` and ``(0, e_a) + (-theta_a, 0)``."""
    if sigma.degree != 2:
        raise ValueError("sigma must be a 2-form")
    base = sigma.chart
    if chart is None:
        chart = base.with_stable(base.fresh_names("t", len(theta)))
    if chart.h != len(theta):
        raise StructureError(f"chart has index {chart.h} but {len(theta)} 1-forms were given")
    sigma = _to_chart(sigma, chart)
    theta = [_to_chart(t, chart) for t in theta]
    z = chart.zero()
    gens = []
    for i in range(chart.n):
        e = coord_vector(chart, i)
        gens.append(StableSection(chart, e, [z] * chart.h, flat(sigma, e), [t(e) for t in theta]))
    for a, t in enumerate(theta):
        gens.append(StableSection(chart, None, _unit(chart, a), -t, [z] * chart.h))
    return SubbundleFrame(chart, gens)


def _to_chart(obj, chart: Chart):
    """Re-express a base-chart tensor over a chart with the same base coordinates."""
    if obj.chart == chart:
        return obj
    if obj.chart.base_coords != chart.base_coords:
        raise ChartMismatchError(f"{obj.chart} and {chart} have different base coordinates")
    if isinstance(obj, VectorField):
        return VectorField(chart, [c.to_vars(chart.coords) for c in obj.comps])
    return type(obj).from_components(chart, obj.degree,
                                     [(k, c.to_vars(chart.coords)) for k, c in obj.coeffs.items()])


def _extended_chart(chart: Chart, k: int, names: Sequence[str] | None = None) -> Chart:
    names = tuple(names) if names is not None else chart.fresh_names("t", k, start=chart.h + 1)
    if len(names) != k:
        raise ValueError(f"need {k} new stable coordinate names")
    return chart.with_stable(names)


def trivial_extensions(F: SubbundleFrame, k: int, names: Sequence[str] | None = None):
    """``(L1, L2)``: add ``(0,0,e_p) + 0`` resp. ``0 + (0,0,e_p)`` for ``p = 1..k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    big = _extended_chart(F.chart, k, names)
    base = [s.embed(big) for s in F]
    z = big.zero()
    unit = lambda p: [z] * F.chart.h + [big.one() if q == p else z for q in range(k)]
    zeros = [z] * big.h
    L1 = base + [StableSection(big, None, unit(p), None, zeros) for p in range(k)]
    L2 = base + [StableSection(big, None, zeros, None, unit(p)) for p in range(k)]
    return SubbundleFrame(big, L1), SubbundleFrame(big, L2)


def extension_swap(s: StableSection, h: int) -> StableSection:
    """Metric-preserving swap of the last ``h' - h`` entries of ``u`` and ``v``."""
    if not 0 <= h <= s.chart.h:
        raise ValueError("h out of range")
    u = list(s.u[:h]) + list(s.v[h:])
    v = list(s.v[:h]) + list(s.u[h:])
    return StableSection(s.chart, s.X, u, s.alpha, v)


# -- automorphisms and prolongations ------------------------------------------


def lie_section(V: VectorField, s: StableSection) -> StableSection:
    """``(L_V X, V u) + (L_V alpha, V v)``."""
    return StableSection._raw(s.chart, lie_derivative(V, s.X), [V.apply(c) for c in s.u],
                              lie_derivative(V, s.alpha), [V.apply(c) for c in s.v])


def _preserves(F: SubbundleFrame, image: Callable[[StableSection], StableSection], key: str, tag: str) -> Condition:
    def items():
        for i, s in enumerate(F):
            yield from _orthogonal_items(F, image(s), f"{tag} s{i + 1}")

    where, res = first_nonzero(items())
    return condition(key, res, where)


def _inf_aut(F: SubbundleFrame, V: VectorField, tag: str = "L_V") -> Condition:
    V = _to_chart(V, F.chart)
    return _preserves(F, lambda s: lie_section(V, s), "inf-automorphism", tag)


def check_inf_automorphism(F: SubbundleFrame, V: VectorField, *, trials: int = DEFAULT_TRIALS,
                           seed: int = 0) -> StructureReport:
    rep = _certify(F, trials, seed)
    rep.title = "infinitesimal automorphism"
    rep.add(_inf_aut(F, V))
    return rep


def _commuting(V: Sequence[VectorField]) -> Condition:
    items = ((f"[V{p + 1},V{q + 1}]", c) for p in range(len(V)) for q in range(p + 1, len(V))
             for c in lie_derivative(V[p], V[q]).comps)
    where, res = first_nonzero(items)
    return condition("commuting", res, where)


def prolongation_preconditions(F: SubbundleFrame, V: Sequence[VectorField], twist: TwistData | None = None,
                               *, trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    rep = _certify(F, trials, seed)
    rep.title = "prolongation preconditions"
    V = [_to_chart(v, F.chart) for v in V]
    rep.add(_commuting(V))
    for p, v in enumerate(V):
        rep.add(_inf_aut(F, v, f"L_V{p + 1}"))
    if twist is not None and not twist.is_zero():
        rep.check("twist-annihilated-phi", ((f"V{p + 1}", c) for p, v in enumerate(V)
                                            for c in interior_product(v, twist.Phi).coeffs.values()))
        rep.check("twist-annihilated-psi", ((f"V{p + 1},Psi{a + 1}", c) for p, v in enumerate(V)
                                            for a, psi in enumerate(twist.Psi)
                                            for c in interior_product(v, psi).coeffs.values()))
    return rep


def _prolonged_frame(F: SubbundleFrame, V: Sequence[VectorField], names) -> SubbundleFrame:
    k = len(V)
    big = _extended_chart(F.chart, k, names)
    V = [_to_chart(v, F.chart) for v in V]
    z = big.zero()
    gens = [s.embed(big, w_vector=[s.alpha(v) for v in V]) for s in F]
    for p, v in enumerate(V):
        vb = _to_chart(v, big)
        w = [big.one() if q == p else z for q in range(k)]
        gens.append(StableSection(big, -vb, [z] * big.h, None, [z] * F.chart.h + w))
    return SubbundleFrame(big, gens)


def prolong_dirac(F: SubbundleFrame, V: Sequence[VectorField], twist: TwistData | None = None, *,
                  names: Sequence[str] | None = None, trials: int = DEFAULT_TRIALS,
                  seed: int = 0) -> SubbundleFrame:
    """Prolong by commuting infinitesimal automorphisms ``V_p`` to index ``h + k``.

    Generators become ``(X, u, alpha(V)) + (alpha, v, 0)`` together with
    ``(-V_p, 0, 0) + (0, 0, e_p)``.  Raises :class:`PreconditionError` when
    the hypotheses fail.
    """
    if not V:
        return F
    rep = prolongation_preconditions(F, V, twist, trials=trials, seed=seed)
    if not rep.ok:
        raise PreconditionError(rep)
    return _prolonged_frame(F, V, names)


def _jacobi_image(V: VectorField, c: Sequence[Fraction]) -> Callable[[StableSection], StableSection]:
    def image(s: StableSection) -> StableSection:
        cu = sum((x * ca for x, ca in zip(s.u, c)), s.chart.zero())
        av = s.alpha(V)
        return StableSection._raw(s.chart, lie_derivative(V, s.X) + V * cu, [V.apply(x) for x in s.u],
                                  lie_derivative(V, s.alpha), [V.apply(x) - av * ca for x, ca in zip(s.v, c)])
    return image


def jacobi_prolongation_preconditions(F: SubbundleFrame, V: Sequence[VectorField], params: WadeParams, *,
                                      trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    if len(params.c) != F.chart.h:
        raise StructureError(f"need {F.chart.h} coefficients c_a")
    rep = _certify(F, trials, seed)
    rep.title = "Dirac-Jacobi prolongation preconditions"
    V = [_to_chart(v, F.chart) for v in V]
    rep.add(_commuting(V))
    for p, v in enumerate(V):
        rep.add(_preserves(F, _jacobi_image(v, params.c), "jacobi-automorphism", f"V{p + 1}"))
    return rep


def prolong_dirac_jacobi(F: SubbundleFrame, V: Sequence[VectorField], params: WadeParams, *,
                         names: Sequence[str] | None = None, trials: int = DEFAULT_TRIALS,
                         seed: int = 0) -> SubbundleFrame:
    """Same frame shape as :func:`prolong_dirac`; use ``params.extended(k)`` on the result."""
    if not V:
        return F
    rep = jacobi_prolongation_preconditions(F, V, params, trials=trials, seed=seed)
    if not rep.ok:
        raise PreconditionError(rep)
    return _prolonged_frame(F, V, names)


# -- conformal variants (index 0) ----------------------------------------------


def _need_h0(F: SubbundleFrame):
    if F.chart.h != 0:
        raise StructureError("this check works on TM + T*M (index 0)")


def conformal_dirac_check(D: SubbundleFrame, tau: Poly, *, trials: int = DEFAULT_TRIALS,
                          seed: int = 0) -> StructureReport:
    """Closure of ``D`` under the conformal-Courant bracket of ``tau``."""
    _need_h0(D)
    rep = _certify(D, trials, seed)
    rep.title = "conformal Dirac"
    rep.add(_closure(D, lambda a, b: conformal_courant_bracket(a, b, tau), "conformal-tensor"))
    return rep


@dataclass(frozen=True)
class PresymplecticPair:
    """Projected generators ``X_i`` and ``theta_D(X_i, X_j) = Omega(s_i, s_j)``."""

    vectors: tuple
    table: tuple
    report: StructureReport


def presymplectic_pair(D: SubbundleFrame, *, trials: int = DEFAULT_TRIALS, seed: int = 0) -> PresymplecticPair:
    _need_h0(D)
    rep = _certify(D, trials, seed)
    rep.title = "presymplectic pair"
    n = len(D)
    table = tuple(tuple(pairing_Omega(D[i], D[j]) for j in range(n)) for i in range(n))
    rep.check("theta-consistency", (
        (f"{_label(i, j)}{tag}", table[i][j] - val)
        for i in range(n) for j in range(n)
        for tag, val in (("beta(X)", D[j].alpha(D[i].X)), ("-alpha(Y)", -D[i].alpha(D[j].X)))))
    return PresymplecticPair(tuple(s.X for s in D), table, rep)


def _coordinate_span(D: SubbundleFrame, trials: int, seed: int) -> list[int] | None:
    """Indices ``S`` with ``pr_TM D = span{d_i : i in S}``, or None if not of that form."""
    support = sorted({i for s in D for i, c in enumerate(s.X.comps) if c})
    rng = random.Random(seed)
    for _ in range(trials):
        pt = sample_point(D.chart.coords, rng)
        rows = [[s.X.comps[i].eval_at(pt) for s in D] for i in support]
        if rational_rank(rows) != len(support):
            return None
    return support


def wade_presymplectic_check(D: SubbundleFrame, tau: Poly, *, trials: int = DEFAULT_TRIALS,
                             seed: int = 0) -> StructureReport:
    """``d theta_D = -d tau ^ theta_D`` on the leaves, when they are coordinate-spanned.

    On generators, ``d theta_D(X1, X2, X3)`` expands through
    ``theta_D(Y, X3) = -alpha3(Y)``, which avoids inverting the frame.
    If ``pr_TM D`` is not spanned by coordinate fields the check reports
    "not checkable in this chart" as a failing entry.
    """
    _need_h0(D)
    rep = _certify(D, trials, seed)
    rep.title = "conformal presymplectic leaves"
    if _coordinate_span(D, trials, seed) is None:
        rep.add(condition("wade-presymplectic", passed=False, note="not checkable in this chart"))
        return rep
    n = len(D)

    def items():
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    total = D.chart.zero()
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        Xa = D[a].X
                        om = pairing_Omega(D[b], D[c])
                        total = total + Xa.apply(om) + D[c].alpha(lie_derivative(Xa, D[b].X)) + Xa.apply(tau) * om
                    yield _label(i, j, k), total

    rep.check("wade-presymplectic", items())
    return rep


def lc_poisson_checks(P: KVector, *, f: Poly | None = None, phi: KForm | None = None,
                      E: VectorField | None = None) -> StructureReport:
    """Conformal Poisson (``f``), locally conformal Poisson (``phi``) and Jacobi (``E``) verdicts."""
    if P.degree != 2:
        raise ValueError("P must be a bivector")
    rep = StructureReport("Poisson-type conditions")
    PP = schouten_bracket(P, P)
    chart = P.chart
    if f is None and phi is None and E is None:
        rep.check("poisson", _kv_items(PP))
    if f is not None:
        df = d(f, chart)
        rep.check("conformal-poisson", _kv_items(PP - wedge(sharp(P, df), P)))
    if phi is not None:
        rep.check("lc-closed", _kv_items(exterior_derivative(phi)))
        sp = sharp(P, phi)
        rep.check("lc-poisson", _kv_items(PP - wedge(sp, P)))
        rep.check("lc-implies-jacobi", _kv_items(lie_derivative(sp * Fraction(1, 2), P)))
    if E is not None:
        rep.check("jacobi-schouten", _kv_items(PP - wedge(E, P) * 2))
        rep.check("jacobi-invariance", _kv_items(lie_derivative(E, P)))
    return rep


def _kv_items(T):
    return ((str(tuple(T.chart.base_coords[i] for i in idx)), c) for idx, c in sorted(T.coeffs.items()))


def inf_conformal_automorphism_check(D: SubbundleFrame, Z: VectorField, f: Poly, *,
                                     trials: int = DEFAULT_TRIALS, seed: int = 0) -> StructureReport:
    """``([Z, X] - f X) + L_Z alpha`` stays in ``D`` for every generator."""
    _need_h0(D)
    rep = _certify(D, trials, seed)
    rep.title = "infinitesimal conformal automorphism"

    def image(s: StableSection) -> StableSection:
        return StableSection._raw(s.chart, lie_derivative(Z, s.X) - s.X * f, (), lie_derivative(Z, s.alpha), ())

    rep.add(_preserves(D, image, "inf-conformal-automorphism", "Z"))
    return rep


def span_equal(F1: SubbundleFrame, F2: SubbundleFrame, *, trials: int = DEFAULT_TRIALS, seed: int = 0) -> bool:
    """Two certified maximal isotropic frames span the same subbundle iff mutually G-orthogonal."""
    _certify(F1, trials, seed)
    _certify(F2, trials, seed)
    return all(metric_G(a, b).is_zero() for a in F1 for b in F2)
