"""Coordinate tensor calculus on a chart with polynomial coefficients.

Conventions used throughout the package:

* ``KForm`` stores ``w = sum_{i1<..<ik} w_I dx^i1 ^ .. ^ dx^ik`` with the
  determinant evaluation ``(dx^1 ^ dx^2)(d1, d2) = 1``.
* ``KVector`` stores ``P = sum_{i<j} P^{ij} d_i ^ d_j`` and
  ``P(dx^i, dx^j) = P^{ij}``.
* ``sharp(P, a)`` is the vector with ``b(sharp_P a) = P(a, b)``.
* ``interior_product(X ^ Y, w)`` is the form ``Z -> w(X, Y, Z)``.
* The Schouten bracket of two bivectors is normalised so that
  ``[P,P](a,b,c) = 2 c(sharp_P {a,b}_P - [sharp_P a, sharp_P b])``; in
  coordinates ``[P,P]^{ijk} = -2 sum_cycl P^{il} d_l P^{jk}``.
* ``EndoField.matrix[i][j]`` is the ``i``-th component of ``A(d_j)``; on
  1-forms an endomorphism acts by composition ``a -> a o A``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence, Union

from .poly import Chart, ChartMismatchError, Poly

__all__ = [
    "VectorField",
    "KForm",
    "KVector",
    "EndoField",
    "exterior_derivative",
    "interior_product",
    "lie_derivative",
    "schouten_bracket",
    "sharp",
    "flat",
    "nijenhuis_tensor",
    "schouten_concomitant",
    "gd_bracket",
    "wedge",
    "coord_vector",
    "coord_form",
    "TensorDegreeError",
]


class TensorDegreeError(ValueError):
    """An operation was asked for tensor degrees it does not support."""


def _check_chart(a: Chart, b: Chart):
    if a != b:
        raise ChartMismatchError(f"{a} vs {b}")


def _as_poly(chart: Chart, f) -> Poly:
    if isinstance(f, Poly):
        return f
    return Poly.const(chart.coords, f)


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple (sign 0 on repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def _perm_sign(p: Sequence[int]) -> int:
    return _sort_sign(p)[0]


_PERMS: dict[int, list[tuple[tuple[int, ...], int]]] = {}


def _perms(k: int):
    if k not in _PERMS:
        _PERMS[k] = [(p, _perm_sign(p)) for p in permutations(range(k))]
    return _PERMS[k]


# ---------------------------------------------------------------------------


class VectorField:
    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Sequence):
        comps = tuple(_as_poly(chart, c) for c in comps)
        if len(comps) != chart.n:
            raise ValueError(f"expected {chart.n} components, got {len(comps)}")
        for c in comps:
            if c.vars != chart.coords:
                raise ChartMismatchError(f"component over {c.vars}, chart {chart}")
        self.chart = chart
        self.comps = comps

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        z = chart.zero()
        return cls(chart, [z] * chart.n)

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping[str, object]) -> "VectorField":
        out = [chart.zero()] * chart.n
        for name, c in comps.items():
            out[chart.index(name)] = _as_poly(chart, c)
        return cls(chart, out)

    def __add__(self, other: "VectorField"):
        _check_chart(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VectorField"):
        _check_chart(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.comps])

    def __mul__(self, f):
        return VectorField(self.chart, [a * f for a in self.comps])

    __rmul__ = __mul__

    def apply(self, f: Poly) -> Poly:
        """Directional derivative ``X(f)``."""
        out = self.chart.zero()
        for i, c in enumerate(self.comps):
            if c:
                out = out + c * f.diff_index(i)
        return out

    def is_zero(self) -> bool:
        return not any(self.comps)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def extend_to(self, chart: Chart) -> "VectorField":
        """Same field on a chart with more base coordinates (new components zero)."""
        out = [chart.zero()] * chart.n
        for name, c in zip(self.chart.base_coords, self.comps):
            out[chart.index(name)] = c.to_vars(chart.coords)
        return VectorField(chart, out)

    def restrict_to(self, chart: Chart) -> "VectorField":
        keep = set(chart.base_coords)
        for name, c in zip(self.chart.base_coords, self.comps):
            if name not in keep and c:
                raise ValueError(f"component along {name!r} is not zero")
        return VectorField(chart, [self.comps[self.chart.index(nm)].to_vars(chart.coords)
                                   for nm in chart.base_coords])

    def __repr__(self):
        parts = [f"({c})*d{n}" for n, c in zip(self.chart.base_coords, self.comps) if c]
        return "VectorField(" + (" + ".join(parts) or "0") + ")"


def coord_vector(chart: Chart, which: Union[int, str]) -> VectorField:
    i = chart.index(which) if isinstance(which, str) else which
    comps = [chart.zero()] * chart.n
    comps[i] = chart.one()
    return VectorField(chart, comps)


class _Alternating:
    """Shared storage for forms and multivectors: sorted index tuple -> Poly."""

    __slots__ = ("chart", "degree", "coeffs")
    _letter = "?"

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping[tuple[int, ...], Poly] | None = None):
        if degree < 0:
            raise ValueError("negative degree")
        self.chart = chart
        self.degree = degree
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            c = _as_poly(chart, c)
            if c.vars != chart.coords:
                raise ChartMismatchError(f"coefficient over {c.vars}, chart {chart}")
            if len(idx) != degree or list(idx) != sorted(set(idx)) or (idx and idx[-1] >= chart.n):
                raise ValueError(f"bad index tuple {idx} for degree {degree}")
            if c:
                clean[idx] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, chart, degree, coeffs):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._raw(chart, degree, {})

    @classmethod
    def from_components(cls, chart: Chart, degree: int, entries: Iterable):
        """Build from ``(index tuple, coefficient)`` pairs in any order.

        Index entries may be coordinate names or integers; unsorted tuples
        contribute with the sign of the sorting permutation and entries
        sharing a slot are summed.
        """
        acc: dict[tuple[int, ...], Poly] = {}
        for idx, c in entries:
            idx = tuple(chart.index(i) if isinstance(i, str) else i for i in idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} has wrong length for degree {degree}")
            sign, key = _sort_sign(idx)
            if not sign:
                continue
            c = _as_poly(chart, c)
            acc[key] = acc[key] + c * sign if key in acc else c * sign
        return cls(chart, degree, acc)

    @classmethod
    def from_dict(cls, chart: Chart, degree: int, entries: Mapping):
        return cls.from_components(chart, degree, entries.items())

    def component(self, idx: Sequence[int]) -> Poly:
        sign, key = _sort_sign(idx)
        if not sign:
            return self.chart.zero()
        c = self.coeffs.get(key)
        if c is None:
            return self.chart.zero()
        return c if sign > 0 else -c

    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        _check_chart(self.chart, other.chart)
        if other.degree != self.degree:
            raise TensorDegreeError("degree mismatch")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out[k] + c if k in out else c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return type(self)._raw(self.chart, self.degree, out)

    def __neg__(self):
        return type(self)._raw(self.chart, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        out = {}
        for k, c in self.coeffs.items():
            p = c * f
            if p:
                out[k] = p
        return type(self)._raw(self.chart, self.degree, out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.chart == other.chart and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def wedge(self, other):
        self_t, other_t = type(self), type(other)
        if self_t is not other_t:
            raise TypeError("wedge needs operands of the same kind")
        _check_chart(self.chart, other.chart)
        acc: dict[tuple[int, ...], Poly] = {}
        for i1, c1 in self.coeffs.items():
            for i2, c2 in other.coeffs.items():
                sign, key = _sort_sign(i1 + i2)
                if not sign:
                    continue
                p = c1 * c2
                if sign < 0:
                    p = -p
                acc[key] = acc[key] + p if key in acc else p
        return self_t._raw(self.chart, self.degree + other.degree, {k: c for k, c in acc.items() if c})

    def _evaluate(self, rows: Sequence[Sequence[Poly]]) -> Poly:
        # rows[m] are the components of the m-th argument
        k = self.degree
        if len(rows) != k:
            raise TensorDegreeError(f"expected {k} arguments, got {len(rows)}")
        total = self.chart.zero()
        for idx, c in self.coeffs.items():
            det = self.chart.zero()
            for perm, sign in _perms(k):
                term = c
                for m in range(k):
                    term = term * rows[m][idx[perm[m]]]
                    if not term:
                        break
                if term:
                    det = det + term if sign > 0 else det - term
            total = total + det
        return total

    def extend_to(self, chart: Chart):
        """Same tensor on a chart with more base coordinates."""
        pos = [chart.index(nm) for nm in self.chart.base_coords]
        entries = [(tuple(pos[i] for i in idx), c.to_vars(chart.coords)) for idx, c in self.coeffs.items()]
        return type(self).from_components(chart, self.degree, entries)

    def restrict_to(self, chart: Chart):
        keep = {nm: chart.index(nm) for nm in chart.base_coords}
        entries = []
        for idx, c in self.coeffs.items():
            names = [self.chart.base_coords[i] for i in idx]
            if any(nm not in keep for nm in names):
                raise ValueError(f"component {names} is not zero")
            entries.append((tuple(keep[nm] for nm in names), c.to_vars(chart.coords)))
        return type(self).from_components(chart, self.degree, entries)

    def __repr__(self):
        names = self.chart.base_coords
        parts = []
        for idx, c in sorted(self.coeffs.items()):
            basis = "^".join(f"{self._letter}{names[i]}" for i in idx) or "1"
            parts.append(f"({c})*{basis}")
        return f"{type(self).__name__}[{self.degree}](" + (" + ".join(parts) or "0") + ")"


class KForm(_Alternating):
    """Differential k-form with polynomial coefficients."""

    __slots__ = ()
    _letter = "d"

    def __call__(self, *vectors: VectorField) -> Poly:
        for v in vectors:
            _check_chart(self.chart, v.chart)
        return self._evaluate([v.comps for v in vectors])

    def pull(self, A: "EndoField") -> "KForm":
        """``a o A`` for a 1-form ``a``."""
        if self.degree != 1:
            raise TensorDegreeError("composition with an endomorphism needs a 1-form")
        return A.pull(self)

    @classmethod
    def one_form(cls, chart: Chart, comps: Sequence) -> "KForm":
        return cls.from_components(chart, 1, [((i,), c) for i, c in enumerate(comps)])

    def as_list(self) -> list[Poly]:
        if self.degree != 1:
            raise TensorDegreeError("as_list needs a 1-form")
        return [self.component((i,)) for i in range(self.chart.n)]


class KVector(_Alternating):
    """k-vector field with polynomial coefficients."""

    __slots__ = ()
    _letter = "D"

    def __call__(self, *forms: KForm) -> Poly:
        for f in forms:
            _check_chart(self.chart, f.chart)
            if f.degree != 1:
                raise TensorDegreeError("multivectors evaluate on 1-forms")
        return self._evaluate([f.as_list() for f in forms])

    @classmethod
    def from_vector(cls, X: VectorField) -> "KVector":
        return cls.from_components(X.chart, 1, [((i,), c) for i, c in enumerate(X.comps)])

    def as_vector(self) -> VectorField:
        if self.degree != 1:
            raise TensorDegreeError("as_vector needs a 1-vector")
        return VectorField(self.chart, [self.component((i,)) for i in range(self.chart.n)])


def coord_form(chart: Chart, which: Union[int, str]) -> KForm:
    i = chart.index(which) if isinstance(which, str) else which
    return KForm(chart, 1, {(i,): chart.one()})


def wedge(a, b):
    """Wedge of forms, or of multivectors (vector fields are promoted)."""
    if isinstance(a, VectorField):
        a = KVector.from_vector(a)
    if isinstance(b, VectorField):
        b = KVector.from_vector(b)
    return a.wedge(b)


class EndoField:
    """(1,1)-tensor; ``matrix[i][j]`` is the i-th component of ``A(d_j)``."""

    __slots__ = ("chart", "matrix")

    def __init__(self, chart: Chart, matrix: Sequence[Sequence]):
        rows = tuple(tuple(_as_poly(chart, c) for c in row) for row in matrix)
        if len(rows) != chart.n or any(len(r) != chart.n for r in rows):
            raise ValueError(f"endomorphism matrix must be {chart.n}x{chart.n}")
        for r in rows:
            for c in r:
                if c.vars != chart.coords:
                    raise ChartMismatchError(f"entry over {c.vars}, chart {chart}")
        self.chart = chart
        self.matrix = rows

    @classmethod
    def zero(cls, chart: Chart) -> "EndoField":
        z = chart.zero()
        return cls(chart, [[z] * chart.n for _ in range(chart.n)])

    @classmethod
    def identity(cls, chart: Chart) -> "EndoField":
        z, one = chart.zero(), chart.one()
        return cls(chart, [[one if i == j else z for j in range(chart.n)] for i in range(chart.n)])

    @classmethod
    def from_images(cls, chart: Chart, images: Mapping[str, VectorField]) -> "EndoField":
        """Build from ``{coordinate: A(d_coordinate)}``; missing columns are zero."""
        cols = [VectorField.zero(chart)] * chart.n
        for name, v in images.items():
            cols[chart.index(name)] = v
        return cls(chart, [[cols[j].comps[i] for j in range(chart.n)] for i in range(chart.n)])

    def column(self, j: int) -> VectorField:
        return VectorField(self.chart, [self.matrix[i][j] for i in range(self.chart.n)])

    def __call__(self, X: VectorField) -> VectorField:
        _check_chart(self.chart, X.chart)
        n = self.chart.n
        out = []
        for i in range(n):
            s = self.chart.zero()
            row = self.matrix[i]
            for j in range(n):
                if row[j] and X.comps[j]:
                    s = s + row[j] * X.comps[j]
            out.append(s)
        return VectorField(self.chart, out)

    def pull(self, alpha: KForm) -> KForm:
        """The 1-form ``alpha o A``."""
        _check_chart(self.chart, alpha.chart)
        a = alpha.as_list()
        n = self.chart.n
        comps = []
        for j in range(n):
            s = self.chart.zero()
            for i in range(n):
                if a[i] and self.matrix[i][j]:
                    s = s + a[i] * self.matrix[i][j]
            comps.append(s)
        return KForm.one_form(self.chart, comps)

    def __matmul__(self, other: "EndoField") -> "EndoField":
        _check_chart(self.chart, other.chart)
        n = self.chart.n
        out = []
        for i in range(n):
            row = []
            for k in range(n):
                s = self.chart.zero()
                for j in range(n):
                    if self.matrix[i][j] and other.matrix[j][k]:
                        s = s + self.matrix[i][j] * other.matrix[j][k]
                row.append(s)
            out.append(row)
        return EndoField(self.chart, out)

    def __add__(self, other):
        _check_chart(self.chart, other.chart)
        return EndoField(self.chart, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return EndoField(self.chart, [[-a for a in r] for r in self.matrix])

    def __mul__(self, f):
        return EndoField(self.chart, [[a * f for a in r] for r in self.matrix])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(c for r in self.matrix for c in r)

    def __eq__(self, other):
        if not isinstance(other, EndoField):
            return NotImplemented
        return self.chart == other.chart and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def extend_to(self, chart: Chart) -> "EndoField":
        """Same map on a bigger chart, acting by zero on the new directions."""
        pos = [chart.index(nm) for nm in self.chart.base_coords]
        z = chart.zero()
        m = [[z] * chart.n for _ in range(chart.n)]
        for i, pi in enumerate(pos):
            for j, pj in enumerate(pos):
                m[pi][pj] = self.matrix[i][j].to_vars(chart.coords)
        return EndoField(chart, m)

    def __repr__(self):
        return f"EndoField({[[str(c) for c in r] for r in self.matrix]})"


# ---------------------------------------------------------------------------
# differential operators


def exterior_derivative(omega: KForm) -> KForm:
    chart = omega.chart
    entries = []
    for idx, c in omega.coeffs.items():
        for j in range(chart.n):
            if j in idx:
                continue
            dc = c.diff_index(j)
            if dc:
                entries.append(((j,) + idx, dc))
    return KForm.from_components(chart, omega.degree + 1, entries)


def _contract_vector(X: VectorField, omega: KForm) -> KForm:
    if omega.degree < 1:
        raise TensorDegreeError("cannot contract a 0-form")
    entries = []
    for idx, c in omega.coeffs.items():
        # i(X)(c dx^I) = c * sum_l (-1)^l X^{I_l} dx^{I without I_l}
        for l, i in enumerate(idx):
            if X.comps[i]:
                term = c * X.comps[i]
                entries.append((idx[:l] + idx[l + 1:], term if l % 2 == 0 else -term))
    return KForm.from_components(omega.chart, omega.degree - 1, entries)


def interior_product(V, omega: KForm) -> KForm:
    """Contraction ``i(V) omega``.

    ``V`` may be a vector field, a pair ``(X, Y)`` standing for ``X ^ Y``,
    or a ``KVector``; for bivectors ``i(X ^ Y) omega = i(Y) i(X) omega``,
    i.e. the result is ``Z -> omega(X, Y, Z)``.
    """
    if isinstance(V, VectorField):
        _check_chart(V.chart, omega.chart)
        return _contract_vector(V, omega)
    if isinstance(V, tuple) and len(V) == 2:
        X, Y = V
        if omega.degree < 2:
            raise TensorDegreeError("degree underflow in interior product")
        return _contract_vector(Y, _contract_vector(X, omega))
    if isinstance(V, KVector):
        _check_chart(V.chart, omega.chart)
        p = V.degree
        if omega.degree < p:
            raise TensorDegreeError("degree underflow in interior product")
        out = KForm.zero(omega.chart, omega.degree - p)
        for idx, c in V.coeffs.items():
            cur = omega
            for i in idx:
                cur = _contract_vector(coord_vector(omega.chart, i), cur)
            out = out + cur * c
        return out
    raise TypeError(f"cannot contract with {type(V).__name__}")


def _lie_vector(X: VectorField, Y: VectorField) -> VectorField:
    _check_chart(X.chart, Y.chart)
    return VectorField(X.chart, [X.apply(b) - Y.apply(a) for a, b in zip(X.comps, Y.comps)])


def _lie_form(X: VectorField, omega: KForm) -> KForm:
    # (L_X w)_I = X(w_I) + sum_l sum_j (d_{I_l} X^j) w_{I[l->j]}
    chart = X.chart
    n = chart.n
    k = omega.degree
    dX = [[X.comps[j].diff_index(i) for j in range(n)] for i in range(n)]  # dX[i][j] = d_i X^j
    out = {}
    for idx in combinations(range(n), k):
        c = omega.coeffs.get(idx)
        s = X.apply(c) if c is not None else chart.zero()
        for l, i in enumerate(idx):
            for j in range(n):
                d = dX[i][j]
                if d:
                    w = omega.component(idx[:l] + (j,) + idx[l + 1:])
                    if w:
                        s = s + d * w
        if s:
            out[idx] = s
    return KForm._raw(chart, k, out)


def _lie_multivector(X: VectorField, P: KVector) -> KVector:
    # (L_X P)^I = X(P^I) - sum_l sum_j (d_j X^{I_l}) P^{I[l->j]}
    chart = X.chart
    n = chart.n
    k = P.degree
    dX = [[X.comps[i].diff_index(j) for j in range(n)] for i in range(n)]  # dX[i][j] = d_j X^i
    out = {}
    for idx in combinations(range(n), k):
        c = P.coeffs.get(idx)
        s = X.apply(c) if c is not None else chart.zero()
        for l, i in enumerate(idx):
            for j in range(n):
                d = dX[i][j]
                if d:
                    w = P.component(idx[:l] + (j,) + idx[l + 1:])
                    if w:
                        s = s - d * w
        if s:
            out[idx] = s
    return KVector._raw(chart, k, out)


def _lie_endo(X: VectorField, A: EndoField) -> EndoField:
    chart = X.chart
    n = chart.n
    dX = [[X.comps[i].diff_index(j) for j in range(n)] for i in range(n)]  # dX[i][j] = d_j X^i
    out = []
    for i in range(n):
        row = []
        for k in range(n):
            s = X.apply(A.matrix[i][k])
            for j in range(n):
                if A.matrix[j][k] and dX[i][j]:
                    s = s - A.matrix[j][k] * dX[i][j]
                if A.matrix[i][j] and dX[j][k]:
                    s = s + A.matrix[i][j] * dX[j][k]
            row.append(s)
        out.append(row)
    return EndoField(chart, out)


def lie_derivative(X: VectorField, T):
    """Lie derivative of a function, vector field, form, multivector or endomorphism."""
    if isinstance(T, Poly):
        return X.apply(T)
    _check_chart(X.chart, T.chart)
    if isinstance(T, VectorField):
        return _lie_vector(X, T)
    if isinstance(T, KForm):
        return _lie_form(X, T)
    if isinstance(T, KVector):
        return _lie_multivector(X, T)
    if isinstance(T, EndoField):
        return _lie_endo(X, T)
    raise TypeError(f"no Lie derivative for {type(T).__name__}")


def _schouten_bivectors(P: KVector, Q: KVector) -> KVector:
    chart = P.chart
    n = chart.n
    dP = {k: [c.diff_index(l) for l in range(n)] for k, c in P.coeffs.items()}
    dQ = {k: [c.diff_index(l) for l in range(n)] for k, c in Q.coeffs.items()}
    entries = []
    for (i, j, k) in combinations(range(n), 3):
        s = chart.zero()
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            sign_bc, key_bc = _sort_sign((b, c))
            for l in range(n):
                pal = P.component((a, l))
                qal = Q.component((a, l))
                if pal and key_bc in dQ:
                    d = dQ[key_bc][l]
                    if d:
                        s = s + pal * d * sign_bc
                if qal and key_bc in dP:
                    d = dP[key_bc][l]
                    if d:
                        s = s + qal * d * sign_bc
        if s:
            entries.append(((i, j, k), -s))
    return KVector.from_components(chart, 3, entries)


def schouten_bracket(P, Q):
    """Schouten-Nijenhuis bracket for degree pairs (1,1), (1,2), (2,1), (2,2).

    ``[X, W] = L_X W`` for a vector field ``X``; ``[W, X] = -[X, W]``.
    """
    if isinstance(P, VectorField):
        P = KVector.from_vector(P)
    if isinstance(Q, VectorField):
        Q = KVector.from_vector(Q)
    _check_chart(P.chart, Q.chart)
    dp, dq = P.degree, Q.degree
    if dp == 1 and dq == 1:
        return KVector.from_vector(_lie_vector(P.as_vector(), Q.as_vector()))
    if dp == 1 and dq == 2:
        return _lie_multivector(P.as_vector(), Q)
    if dp == 2 and dq == 1:
        return -_lie_multivector(Q.as_vector(), P)
    if dp == 2 and dq == 2:
        return _schouten_bivectors(P, Q)
    raise TensorDegreeError(f"Schouten bracket of degrees ({dp}, {dq}) is not supported")


def sharp(P: KVector, alpha: KForm) -> VectorField:
    """The vector ``sharp_P(alpha)`` with ``b(sharp_P alpha) = P(alpha, b)``."""
    _check_chart(P.chart, alpha.chart)
    if P.degree != 2 or alpha.degree != 1:
        raise TensorDegreeError("sharp needs a bivector and a 1-form")
    chart = P.chart
    n = chart.n
    a = alpha.as_list()
    comps = [chart.zero()] * n
    for (i, j), c in P.coeffs.items():
        # P^{ij}: contributes a_i P^{ij} to component j and a_j P^{ji} = -a_j P^{ij} to component i
        if a[i]:
            comps[j] = comps[j] + a[i] * c
        if a[j]:
            comps[i] = comps[i] - a[j] * c
    return VectorField(chart, comps)


def flat(theta: KForm, X: VectorField) -> KForm:
    """``flat_theta(X) = i(X) theta`` for a 2-form ``theta``."""
    if theta.degree != 2:
        raise TensorDegreeError("flat needs a 2-form")
    return interior_product(X, theta)


def nijenhuis_tensor(A: EndoField, X: VectorField, Y: VectorField) -> VectorField:
    """``[AX,AY] - A[X,AY] - A[AX,Y] + A^2[X,Y]``."""
    AX, AY = A(X), A(Y)
    return (_lie_vector(AX, AY) - A(_lie_vector(X, AY)) - A(_lie_vector(AX, Y))
            + A(A(_lie_vector(X, Y))))


def schouten_concomitant(pi: KVector, A: EndoField, alpha: KForm, X: VectorField) -> VectorField:
    """``sharp_pi(L_X(alpha o A) - L_{AX} alpha) - (L_{sharp_pi alpha} A)(X)``."""
    inner = _lie_form(X, A.pull(alpha)) - _lie_form(A(X), alpha)
    return sharp(pi, inner) - _lie_endo(sharp(pi, alpha), A)(X)


def gd_bracket(P: KVector, alpha: KForm, beta: KForm) -> KForm:
    """Bracket of 1-forms ``L_{sharp a} b - L_{sharp b} a - d(P(a, b))``."""
    return (_lie_form(sharp(P, alpha), beta) - _lie_form(sharp(P, beta), alpha)
            - exterior_derivative(KForm(P.chart, 0, {(): P(alpha, beta)})))
