"""Exact multivariate polynomials over named chart coordinates.

Coefficients are :class:`fractions.Fraction`; a polynomial is a map from
exponent tuples (aligned with a tuple of variable names) to non-zero
coefficients.  Every identity checked elsewhere in the package reduces to
"this polynomial has no terms".
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Chart",
    "ChartMismatchError",
    "Poly",
    "PolySyntaxError",
    "parse_poly",
    "random_poly",
]

Scalar = Union[int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


class ChartMismatchError(ValueError):
    """Operands live over different coordinate sets."""


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Chart:
    """Local coordinates ``x^1..x^n`` of M followed by ``t^1..t^h`` of R^h.

    Tensor fields are indexed by ``base_coords`` only.  Their coefficient
    polynomials are written over ``coords`` (base then stable), which lets
    the translation-invariant lift to ``M x R^h`` reuse them unchanged.
    """

    base_coords: tuple[str, ...]
    stable_coords: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "base_coords", tuple(self.base_coords))
        object.__setattr__(self, "stable_coords", tuple(self.stable_coords))
        names = self.base_coords + self.stable_coords
        if not self.base_coords:
            raise ValueError("a chart needs at least one base coordinate")
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid coordinate name {name!r}")
        seen = set()
        for name in names:
            if name in seen:
                raise ValueError(f"duplicate coordinate name {name!r}")
            seen.add(name)

    @property
    def coords(self) -> tuple[str, ...]:
        return self.base_coords + self.stable_coords

    @property
    def n(self) -> int:
        return len(self.base_coords)

    @property
    def h(self) -> int:
        return len(self.stable_coords)

    def index(self, name: str) -> int:
        """Position of a base coordinate."""
        try:
            return self.base_coords.index(name)
        except ValueError:
            raise ValueError(f"{name!r} is not a base coordinate of {self}") from None

    def extended(self) -> "Chart":
        """The chart of ``M x R^h``: stable coordinates become base ones."""
        return Chart(self.coords, ())

    def with_stable(self, names: Sequence[str]) -> "Chart":
        return Chart(self.base_coords, self.stable_coords + tuple(names))

    def fresh_names(self, prefix: str, k: int, start: int = 1) -> tuple[str, ...]:
        """``k`` names ``prefix<i>`` not already used by this chart."""
        taken = set(self.coords)
        out: list[str] = []
        i = start
        while len(out) < k:
            name = f"{prefix}{i}"
            if name not in taken:
                out.append(name)
            i += 1
        return tuple(out)

    def zero(self) -> "Poly":
        return Poly.zero(self.coords)

    def one(self) -> "Poly":
        return Poly.const(self.coords, 1)

    def var(self, name: str) -> "Poly":
        return Poly.var(self.coords, name)

    def const(self, c: Scalar) -> "Poly":
        return Poly.const(self.coords, c)

    def __str__(self):
        base = ",".join(self.base_coords)
        if self.stable_coords:
            return f"Chart({base}; {','.join(self.stable_coords)})"
        return f"Chart({base})"


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """Polynomial with rational coefficients over the variables ``vars``.

    Instances are immutable.  Arithmetic accepts ints and Fractions on
    either side.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple[int, ...], Scalar] | None = None):
        self.vars = tuple(vars)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            width = len(self.vars)
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != width:
                    raise ValueError("exponent length does not match variable count")
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponent")
                c = Fraction(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, vars: Sequence[str], c: Scalar) -> "Poly":
        vars = tuple(vars)
        c = Fraction(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise ValueError(f"unknown coordinate {name!r}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls._raw(vars, {exp: Fraction(1)})

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars is not self.vars and other.vars != self.vars:
                raise ChartMismatchError(f"variables {self.vars} vs {other.vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s += c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly._raw(self.vars, {})
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- predicates ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def depends_on(self, name: str) -> bool:
        i = self.vars.index(name)
        return any(e[i] for e in self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return not self.terms
            return self.terms == {(0,) * len(self.vars): c}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and evaluation -------------------------------------
    def diff(self, name: str) -> "Poly":
        try:
            i = self.vars.index(name)
        except ValueError:
            raise ValueError(f"unknown coordinate {name!r}") from None
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly._raw(self.vars, out)

    def diff_index(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                out[e[:i] + (k - 1,) + e[i + 1:]] = c * k
        return Poly._raw(self.vars, out)

    def eval_at(self, point) -> Fraction:
        """Value at a rational point (mapping name -> value, or a sequence)."""
        if isinstance(point, Mapping):
            try:
                vals = [Fraction(point[v]) for v in self.vars]
            except KeyError as exc:
                raise ValueError(f"point lacks coordinate {exc.args[0]!r}") from None
        else:
            vals = [Fraction(x) for x in point]
            if len(vals) != len(self.vars):
                raise ValueError("point has the wrong dimension")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def to_vars(self, vars: Sequence[str]) -> "Poly":
        """Re-express over another variable tuple, matching names.

        Raises if a variable that actually occurs is missing from ``vars``.
        """
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vars)}
        used = [i for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)]
        for i in used:
            if self.vars[i] not in pos:
                raise ChartMismatchError(f"polynomial depends on {self.vars[i]!r}, absent from {vars}")
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for i in used:
                ne[pos[self.vars[i]]] = e[i]
            out[tuple(ne)] = c
        return Poly._raw(vars, out)

    def substitute(self, name: str, value: Scalar) -> "Poly":
        """Set one variable to a rational constant."""
        i = self.vars.index(name)
        value = Fraction(value)
        out: dict = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            out[ne] = out.get(ne, 0) + c * value ** e[i]
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    # -- text ------------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                v if p == 1 else f"{v}^{p}" for v, p in zip(self.vars, e) if p
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if k == 0:
                pieces.append(("-" if sign == "-" else "") + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.vars})"

    def format(self, max_terms: int = 10) -> str:
        """Canonical text, truncated after ``max_terms`` terms."""
        if len(self.terms) <= max_terms:
            return str(self)
        head = Poly._raw(self.vars, dict(self.sorted_terms()[:max_terms]))
        return f"{head} …(+{len(self.terms) - max_terms} terms)"


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\S))")


def _tokenize(text: str):
    toks = []
    for m in _TOKEN_RE.finditer(text):
        if m.group(1):
            toks.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            toks.append(("op", m.group(3), m.start(3)))
    toks.append(("end", None, len(text)))
    return toks


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse ``3*x^2*y - 1/2*z`` style text over the given variables.

    Terms are joined by ``+``/``-``; a term is an optional rational
    coefficient followed by ``*``-joined factors ``name`` or ``name^k``.
    """
    vars = tuple(vars)
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None, expected=""):
        nonlocal i
        tok = toks[i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            raise PolySyntaxError(f"expected {expected or value or kind}", tok[2])
        i += 1
        return tok

    result = Poly.zero(vars)
    first = True
    while True:
        tok = peek()
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            take()
        elif not first:
            if tok[0] == "end":
                break
            raise PolySyntaxError("expected '+' or '-'", tok[2])
        if peek()[0] == "end":
            if first and sign == 1 and tok[0] == "end":
                raise PolySyntaxError("empty polynomial", tok[2])
            raise PolySyntaxError("expected a term", peek()[2])
        first = False
        coeff = Fraction(sign)
        term = Poly.const(vars, 1)
        need_factor = True
        while need_factor:
            tok = peek()
            if tok[0] == "int":
                take()
                num = tok[1]
                if peek()[0] == "op" and peek()[1] == "/":
                    take()
                    den = take("int", expected="denominator")[1]
                    if den == 0:
                        raise PolySyntaxError("zero denominator", tok[2])
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif tok[0] == "name":
                take()
                if tok[1] not in vars:
                    raise PolySyntaxError(f"unknown coordinate {tok[1]!r}", tok[2])
                power = 1
                if peek()[0] == "op" and peek()[1] == "^":
                    take()
                    power = take("int", expected="integer exponent")[1]
                term = term * Poly.var(vars, tok[1]) ** power
            else:
                raise PolySyntaxError("expected a number or coordinate", tok[2])
            if peek()[0] == "op" and peek()[1] == "*":
                take()
            else:
                need_factor = False
        result = result + term * coeff
        if peek()[0] == "end":
            break
    return result


# ---------------------------------------------------------------------------
# random test inputs

_COEFFS = (-3, -2, -1, 1, 2, 3)


def random_poly(chart: Chart | Sequence[str], max_degree: int, seed: int | random.Random,
                *, over: Iterable[str] | None = None, max_terms: int = 4) -> Poly:
    """Deterministic pseudo-random polynomial.

    At most ``max_terms`` terms, total degree at most ``max_degree``,
    coefficients drawn from {-3..3} without 0.  Monomials only use the
    variables in ``over`` (default: the chart's base coordinates, so the
    result never depends on stable coordinates).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if isinstance(chart, Chart):
        vars = chart.coords
        over = tuple(over) if over is not None else chart.base_coords
    else:
        vars = tuple(chart)
        over = tuple(over) if over is not None else vars
    idx = [vars.index(v) for v in over]
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = [0] * len(vars)
        if idx:
            for _ in range(rng.randint(0, max_degree)):
                exp[rng.choice(idx)] += 1
        e = tuple(exp)
        terms[e] = rng.choice(_COEFFS)  # a repeated monomial is redrawn, not summed
    return Poly(vars, terms)
