"""Sections of the stable big tangent bundle and the brackets on them.

A section ``(X, u) + (alpha, v)`` pairs a vector field and a 1-form on M
with two R^h-valued functions.  Everything is translation invariant, so no
component may depend on the chart's stable coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .poly import Chart, ChartMismatchError, Poly
from .tensors import (
    KForm,
    VectorField,
    coord_form,
    coord_vector,
    exterior_derivative,
    interior_product,
    lie_derivative,
)

__all__ = [
    "StableSection",
    "TwistData",
    "WadeParams",
    "UnsupportedError",
    "metric_G",
    "pairing_Omega",
    "courant_bracket_h0",
    "stable_courant_bracket",
    "conformal_courant_bracket",
    "conformal_change",
    "wade_bracket",
    "partial_f",
    "check_leibniz_axiom",
    "jacobi_anomaly",
    "lift_to_product",
    "restrict_invariant",
    "dL_omega_formula",
    "d",
]


class UnsupportedError(ValueError):
    """The requested combination of inputs has no polynomial closed form."""


def d(f: Poly, chart: Chart) -> KForm:
    """Differential of a function, as a 1-form on ``chart``."""
    return KForm.one_form(chart, [f.diff_index(i) for i in range(chart.n)])


def _dot(u: Sequence[Poly], v: Sequence[Poly], zero: Poly) -> Poly:
    out = zero
    for a, b in zip(u, v):
        if a and b:
            out = out + a * b
    return out


class StableSection:
    """``(X, u) + (alpha, v)``; missing parts default to zero."""

    __slots__ = ("chart", "X", "u", "alpha", "v")

    def __init__(self, chart: Chart, X: VectorField | None = None, u: Sequence | None = None,
                 alpha: KForm | None = None, v: Sequence | None = None):
        z = chart.zero()
        X = VectorField.zero(chart) if X is None else X
        alpha = KForm.zero(chart, 1) if alpha is None else alpha
        u = tuple(z if c is None else (c if isinstance(c, Poly) else chart.const(c)) for c in (u or [None] * chart.h))
        v = tuple(z if c is None else (c if isinstance(c, Poly) else chart.const(c)) for c in (v or [None] * chart.h))
        if X.chart != chart or alpha.chart != chart:
            raise ChartMismatchError("section components live on another chart")
        if alpha.degree != 1:
            raise ValueError("alpha must be a 1-form")
        if len(u) != chart.h or len(v) != chart.h:
            raise ValueError(f"u and v need {chart.h} components")
        for p in (*X.comps, *alpha.coeffs.values(), *u, *v):
            if p.vars != chart.coords:
                raise ChartMismatchError("component over foreign variables")
            for t in chart.stable_coords:
                if p.depends_on(t):
                    raise ValueError(f"stable sections cannot depend on {t!r}")
        self.chart = chart
        self.X = X
        self.u = u
        self.alpha = alpha
        self.v = v

    @classmethod
    def _raw(cls, chart, X, u, alpha, v):
        s = cls.__new__(cls)
        s.chart, s.X, s.u, s.alpha, s.v = chart, X, tuple(u), alpha, tuple(v)
        return s

    @classmethod
    def zero(cls, chart: Chart) -> "StableSection":
        return cls(chart)

    @classmethod
    def basis(cls, chart: Chart) -> list["StableSection"]:
        """The constant frame ``d_i``, ``e_a``, ``dx^i``, ``e^a`` (length 2(n+h))."""
        z = chart.zero()
        out = []
        for i in range(chart.n):
            out.append(cls(chart, X=coord_vector(chart, i)))
        for a in range(chart.h):
            out.append(cls(chart, u=[chart.one() if b == a else z for b in range(chart.h)]))
        for i in range(chart.n):
            out.append(cls(chart, alpha=coord_form(chart, i)))
        for a in range(chart.h):
            out.append(cls(chart, v=[chart.one() if b == a else z for b in range(chart.h)]))
        return out

    def _check(self, other: "StableSection"):
        if self.chart != other.chart:
            raise ChartMismatchError(f"{self.chart} vs {other.chart}")

    def __add__(self, other: "StableSection"):
        self._check(other)
        return StableSection._raw(self.chart, self.X + other.X, [a + b for a, b in zip(self.u, other.u)],
                                  self.alpha + other.alpha, [a + b for a, b in zip(self.v, other.v)])

    def __neg__(self):
        return StableSection._raw(self.chart, -self.X, [-a for a in self.u], -self.alpha, [-a for a in self.v])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        return StableSection._raw(self.chart, self.X * f, [a * f for a in self.u], self.alpha * f,
                                  [a * f for a in self.v])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.alpha.is_zero() and not any(self.u) and not any(self.v)

    def __eq__(self, other):
        if not isinstance(other, StableSection):
            return NotImplemented
        return (self.chart == other.chart and self.X == other.X and self.u == other.u
                and self.alpha == other.alpha and self.v == other.v)

    def __hash__(self):
        return hash((self.X, self.u, self.alpha, self.v))

    def components(self) -> list[Poly]:
        """Flat coefficient list ``(X, u, alpha, v)`` of length 2(n+h)."""
        return [*self.X.comps, *self.u, *self.alpha.as_list(), *self.v]

    def embed(self, chart: Chart, *, w_vector: Sequence | None = None, w_form: Sequence | None = None) -> "StableSection":
        """View in a chart with extra stable coordinates, filling the new R^k slots."""
        k = chart.h - self.chart.h
        if chart.base_coords != self.chart.base_coords or chart.stable_coords[: self.chart.h] != self.chart.stable_coords:
            raise ChartMismatchError("target chart does not extend this one")
        z = chart.zero()
        conv = lambda p: p.to_vars(chart.coords)
        wv = [conv(p) if isinstance(p, Poly) else chart.const(p) for p in (w_vector or [z] * k)]
        wf = [conv(p) if isinstance(p, Poly) else chart.const(p) for p in (w_form or [z] * k)]
        if len(wv) != k or len(wf) != k:
            raise ValueError(f"need {k} extra components")
        X = VectorField(chart, [conv(c) for c in self.X.comps])
        alpha = KForm.one_form(chart, [conv(c) for c in self.alpha.as_list()])
        return StableSection(chart, X, [conv(c) for c in self.u] + wv, alpha, [conv(c) for c in self.v] + wf)

    def __repr__(self):
        return f"StableSection(X={self.X}, u={[str(c) for c in self.u]}, alpha={self.alpha}, v={[str(c) for c in self.v]})"


@dataclass(frozen=True)
class TwistData:
    """Closed 3-form ``Phi`` and closed 2-forms ``Psi^a`` on M."""

    chart: Chart
    Phi: KForm | None = None
    Psi: tuple = ()

    def __post_init__(self):
        phi = KForm.zero(self.chart, 3) if self.Phi is None else self.Phi
        psi = tuple(self.Psi) if self.Psi else tuple(KForm.zero(self.chart, 2) for _ in range(self.chart.h))
        if phi.degree != 3 or phi.chart != self.chart:
            raise ValueError("Phi must be a 3-form on the chart")
        if len(psi) != self.chart.h or any(p.degree != 2 or p.chart != self.chart for p in psi):
            raise ValueError(f"Psi must be {self.chart.h} 2-forms on the chart")
        if not exterior_derivative(phi).is_zero():
            raise ValueError("twist 3-form is not closed")
        for a, p in enumerate(psi):
            if not exterior_derivative(p).is_zero():
                raise ValueError(f"twist 2-form Psi^{a + 1} is not closed")
        object.__setattr__(self, "Phi", phi)
        object.__setattr__(self, "Psi", psi)

    @classmethod
    def zero(cls, chart: Chart) -> "TwistData":
        return cls(chart)

    def is_zero(self) -> bool:
        return self.Phi.is_zero() and all(p.is_zero() for p in self.Psi)

    def extended(self, chart: Chart) -> "TwistData":
        """Same twist on a chart with more stable coordinates (new Psi are zero)."""
        if chart.base_coords != self.chart.base_coords:
            raise ChartMismatchError("base coordinates differ")
        ext = lambda f: type(f).from_components(chart, f.degree, [(k, c.to_vars(chart.coords)) for k, c in f.coeffs.items()])
        extra = chart.h - self.chart.h
        return TwistData(chart, ext(self.Phi), tuple(ext(p) for p in self.Psi) + tuple(KForm.zero(chart, 2) for _ in range(extra)))

    def lifted(self) -> KForm:
        """``Phi + sum_a dt^a ^ Psi^a`` on ``M x R^h``."""
        big = self.chart.extended()
        out = self.Phi.extend_to(big)
        for t, psi in zip(self.chart.stable_coords, self.Psi):
            out = out + coord_form(big, t).wedge(psi.extend_to(big))
        return out


@dataclass(frozen=True)
class WadeParams:
    """``tau = sum_a c_a t^a``; ``lam`` stands for ``exp(-tau(0))``."""

    c: tuple = ()
    lam: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if not self.lam:
            raise ValueError("lam must be non-zero")

    def extended(self, k: int) -> "WadeParams":
        return WadeParams(self.c + (Fraction(0),) * k, self.lam)


# ---------------------------------------------------------------------------


def metric_G(s1: StableSection, s2: StableSection) -> Poly:
    """``1/2 (a2(X1) + a1(X2) + u1.v2 + u2.v1)``."""
    s1._check(s2)
    z = s1.chart.zero()
    total = s2.alpha(s1.X) + s1.alpha(s2.X) + _dot(s1.u, s2.v, z) + _dot(s2.u, s1.v, z)
    return total * Fraction(1, 2)


def pairing_Omega(s1: StableSection, s2: StableSection) -> Poly:
    """``1/2 (a2(X1) - a1(X2) + u1.v2 - u2.v1)``."""
    s1._check(s2)
    z = s1.chart.zero()
    total = s2.alpha(s1.X) - s1.alpha(s2.X) + _dot(s1.u, s2.v, z) - _dot(s2.u, s1.v, z)
    return total * Fraction(1, 2)


def _zero_twist(chart: Chart, twist: TwistData | None) -> TwistData:
    if twist is None:
        return TwistData.zero(chart)
    if twist.chart != chart:
        raise ChartMismatchError("twist lives on another chart")
    return twist


def stable_courant_bracket(s1: StableSection, s2: StableSection, twist: TwistData | None = None) -> StableSection:
    s1._check(s2)
    chart = s1.chart
    tw = _zero_twist(chart, twist)
    X1, X2, a1, a2 = s1.X, s2.X, s1.alpha, s2.alpha
    u1, u2, v1, v2 = s1.u, s2.u, s1.v, s2.v
    X = lie_derivative(X1, X2)
    u = [X1.apply(b) - X2.apply(a) for a, b in zip(u1, u2)]
    form = (lie_derivative(X1, a2) - lie_derivative(X2, a1)
            + d(a1(X2) - a2(X1), chart) * Fraction(1, 2))
    if not tw.Phi.is_zero():
        form = form + interior_product((X1, X2), tw.Phi)
    half = KForm.zero(chart, 1)
    for a in range(chart.h):
        psi = tw.Psi[a]
        if not psi.is_zero():
            form = form + interior_product(X2, psi) * u1[a] - interior_product(X1, psi) * u2[a]
        half = (half + d(v1[a], chart) * u2[a] + d(u1[a], chart) * v2[a]
                - d(v2[a], chart) * u1[a] - d(u2[a], chart) * v1[a])
    form = form + half * Fraction(1, 2)
    v = [X1.apply(b) - X2.apply(a) + tw.Psi[k](X1, X2) for k, (a, b) in enumerate(zip(v1, v2))]
    return StableSection._raw(chart, X, u, form, v)


def courant_bracket_h0(s1: StableSection, s2: StableSection, Phi: KForm | None = None) -> StableSection:
    """``[X,Y] + (L_X b - L_Y a - d Omega + i(X ^ Y) Phi)`` on ``TM + T*M``."""
    if s1.chart.h != 0:
        raise ValueError("courant_bracket_h0 needs h = 0; use stable_courant_bracket")
    s1._check(s2)
    chart = s1.chart
    X, Y, a, b = s1.X, s2.X, s1.alpha, s2.alpha
    form = (lie_derivative(X, b) - lie_derivative(Y, a)
            - d(pairing_Omega(s1, s2), chart))
    if Phi is not None and not Phi.is_zero():
        form = form + interior_product((X, Y), Phi)
    return StableSection._raw(chart, lie_derivative(X, Y), (), form, ())


def conformal_courant_bracket(s1: StableSection, s2: StableSection, tau: Poly,
                              Phi: KForm | None = None, lam=1) -> StableSection:
    """Courant bracket conjugated by ``X + a -> X + e^tau a``.

    Closed form: the bracket twisted by ``e^-tau Phi`` plus
    ``0 + ((X tau) b - (Y tau) a - Omega d tau)``.  ``lam`` stands for
    ``e^-tau`` and is only meaningful when ``tau`` is constant.
    """
    if s1.chart.h != 0:
        raise ValueError("conformal_courant_bracket needs h = 0")
    twisted = Phi is not None and not Phi.is_zero()
    if twisted and not tau.is_constant():
        raise UnsupportedError("a twisted conformal bracket needs constant tau")
    chart = s1.chart
    out = courant_bracket_h0(s1, s2, Phi * Fraction(lam) if twisted else None)
    extra = (s2.alpha * s1.X.apply(tau) - s1.alpha * s2.X.apply(tau)
             - d(tau, chart) * pairing_Omega(s1, s2))
    return StableSection._raw(chart, out.X, (), out.alpha + extra, ())


def conformal_change(s: StableSection, scale) -> StableSection:
    """``X + a -> X + scale * a``; ``scale`` stands for ``e^tau``, tau constant."""
    if s.chart.h != 0:
        raise ValueError("conformal_change needs h = 0")
    return StableSection._raw(s.chart, s.X, (), s.alpha * Fraction(scale), ())


def wade_bracket(s1: StableSection, s2: StableSection, params: WadeParams,
                 twist: TwistData | None = None) -> StableSection:
    """Stable bracket conformally changed by the linear ``tau = c.t``, taken at t = 0."""
    s1._check(s2)
    chart = s1.chart
    if len(params.c) != chart.h:
        raise ValueError(f"need {chart.h} coefficients c_a")
    tw = _zero_twist(chart, twist)
    lam = params.lam
    z = chart.zero()
    X1, X2, a1, a2 = s1.X, s2.X, s1.alpha, s2.alpha
    u1, u2, v1, v2 = s1.u, s2.u, s1.v, s2.v
    c = params.c
    cu1 = sum((u * ca for u, ca in zip(u1, c)), z)
    cu2 = sum((u * ca for u, ca in zip(u2, c)), z)
    X = lie_derivative(X1, X2)
    u = [X1.apply(b) - X2.apply(a) for a, b in zip(u1, u2)]
    form = (lie_derivative(X1, a2) - lie_derivative(X2, a1)
            + d(a1(X2) - a2(X1), chart) * Fraction(1, 2)
            + a2 * cu1 - a1 * cu2)
    if not tw.Phi.is_zero():
        form = form + interior_product((X1, X2), tw.Phi) * lam
    half = KForm.zero(chart, 1)
    for a in range(chart.h):
        psi = tw.Psi[a]
        if not psi.is_zero():
            form = form + (interior_product(X2, psi) * u1[a] - interior_product(X1, psi) * u2[a]) * lam
        half = (half + d(v1[a], chart) * u2[a] + d(u1[a], chart) * v2[a]
                - d(v2[a], chart) * u1[a] - d(u2[a], chart) * v1[a])
    form = form + half * Fraction(1, 2)
    scal = (a1(X2) - a2(X1) + _dot(u2, v1, z) - _dot(u1, v2, z)) * Fraction(1, 2)
    v = []
    for k in range(chart.h):
        v.append(X1.apply(v2[k]) - X2.apply(v1[k]) + tw.Psi[k](X1, X2) * lam
                 + scal * c[k] + v2[k] * cu1 - v1[k] * cu2)
    return StableSection._raw(chart, X, u, form, v)


def partial_f(f: Poly, chart: Chart) -> StableSection:
    """``(0, 0) + (df, 0)``."""
    return StableSection._raw(chart, VectorField.zero(chart), [chart.zero()] * chart.h,
                              d(f, chart), [chart.zero()] * chart.h)


def check_leibniz_axiom(s1: StableSection, s2: StableSection, f: Poly, tau: Poly,
                        Phi: KForm | None = None, lam=1) -> bool:
    """``[s1, f s2] = f [s1, s2] + (X1 f) s2 - G(s1, s2) df`` for the conformal bracket."""
    lhs = conformal_courant_bracket(s1, s2 * f, tau, Phi, lam)
    rhs = (conformal_courant_bracket(s1, s2, tau, Phi, lam) * f + s2 * s1.X.apply(f)
           - partial_f(f, s1.chart) * metric_G(s1, s2))
    return (lhs - rhs).is_zero()


def jacobi_anomaly(s1: StableSection, s2: StableSection, s3: StableSection, tau: Poly):
    """Both sides of the Jacobiator identity for the untwisted conformal bracket.

    Returns ``(lhs, rhs)`` with lhs the cyclic sum of double brackets and
    ``rhs = (1/3) d T + (1/3) T d tau``, ``T`` the cyclic sum of
    ``G([s_i, s_j], s_k)``.
    """
    chart = s1.chart
    br = lambda a, b: conformal_courant_bracket(a, b, tau)
    triples = ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2))
    lhs = StableSection.zero(chart)
    T = chart.zero()
    for a, b, c in triples:
        ab = br(a, b)
        lhs = lhs + br(ab, c)
        T = T + metric_G(ab, c)
    third = Fraction(1, 3)
    rhs = partial_f(T, chart) * third + partial_f(tau, chart) * (T * third)
    return lhs, rhs


def lift_to_product(s: StableSection) -> StableSection:
    """Translation-invariant section ``(X + u.d_t) + (alpha + v.dt)`` of ``M x R^h``."""
    big = s.chart.extended()
    X = s.X.extend_to(big)
    alpha = s.alpha.extend_to(big)
    for t, ua, va in zip(s.chart.stable_coords, s.u, s.v):
        X = X + coord_vector(big, t) * ua
        alpha = alpha + coord_form(big, t) * va
    return StableSection._raw(big, X, (), alpha, ())


def restrict_invariant(s: StableSection, chart: Chart) -> StableSection:
    """Inverse of :func:`lift_to_product`; rejects t-dependent input."""
    if s.chart != chart.extended():
        raise ChartMismatchError(f"{s.chart} is not the product chart of {chart}")
    for p in s.components():
        for t in chart.stable_coords:
            if p.depends_on(t):
                raise ValueError(f"section depends on {t!r}; it is not translation invariant")
    big = s.chart
    X = VectorField(chart, [s.X.comps[big.index(nm)] for nm in chart.base_coords])
    alpha = KForm.one_form(chart, [s.alpha.component((big.index(nm),)) for nm in chart.base_coords])
    u = [s.X.comps[big.index(t)] for t in chart.stable_coords]
    v = [s.alpha.component((big.index(t),)) for t in chart.stable_coords]
    return StableSection._raw(chart, X, u, alpha, v)


def dL_omega_formula(s1: StableSection, s2: StableSection, s3: StableSection,
                     twist: TwistData | None = None):
    """Lie algebroid differential of ``Omega`` on three sections, and its twist prediction.

    ``lhs = sum_cycl X1(Omega(s2, s3)) - sum_cycl Omega([s1, s2], s3)``;
    ``rhs = Phi(X1, X2, X3) + sum_cycl u1 . Psi(X2, X3)``, the lifted twist
    form evaluated on the anchors.  The two agree on Dirac structures.
    """
    chart = s1.chart
    tw = _zero_twist(chart, twist)
    triples = ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2))
    lhs = chart.zero()
    rhs = tw.Phi(s1.X, s2.X, s3.X)
    for a, b, c in triples:
        lhs = lhs + a.X.apply(pairing_Omega(b, c)) - pairing_Omega(stable_courant_bracket(a, b, tw), c)
        for k in range(chart.h):
            if a.u[k]:
                rhs = rhs + a.u[k] * tw.Psi[k](b.X, c.X)
    return lhs, rhs
