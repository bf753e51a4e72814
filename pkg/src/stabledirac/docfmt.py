"""Line-oriented structure documents.

A document is a sequence of ``[block]`` headers each followed by
``key = value`` lines; ``#`` starts a comment.  Blocks:

``[chart]``
    ``base = x, y, z`` and optionally ``stable = t1, t2``.
``[twist]`` (optional)
    ``Phi[x,y,z]`` and ``Psi<a>[x,y]`` components.
one structure block
    ``[dirac-frame]``: ``s<i>.X[x]``, ``s<i>.u[t1]``, ``s<i>.alpha[x]``, ``s<i>.v[t1]``;
    ``[poisson-graph]``: ``W[x,y]``, ``V<a>[x]``;
    ``[two-form-graph]``: ``sigma[x,y]``, ``theta<a>[x]``;
    ``[gcs]``: ``A[x,y]``, ``pi[x,y]``, ``sigma[x,y]``;
    ``[gacs]``: ``P[x,y]``, ``theta[x,y]``, ``F[x,y]``, ``Z<a>[x]``, ``xi<a>[x]``.
``[command]`` (optional)
    ``action = check | prolong | project | build-torus`` plus parameters
    ``c``, ``lambda``, ``k``, ``fiber``, ``seed``, ``trials``, ``V<p>[x]``
    (automorphisms) and ``xi<a>[x]`` (connection coefficients).

Endomorphism entries ``A[x,y]`` are the ``d/dx`` component of ``A(d/dy)``.
Alternating components may be written in any index order; they are stored
with indices in chart order.  Absent components are zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .bundle import StableSection, TwistData
from .gcs import GacsData, GcsData
from .poly import Chart, Poly, PolySyntaxError, parse_poly
from .tensors import EndoField, KForm, KVector, VectorField, coord_vector

__all__ = [
    "StructureDoc",
    "DocError",
    "DocSyntaxError",
    "DocSemanticError",
    "parse_document",
    "serialize_document",
    "STRUCTURE_KINDS",
    "ACTIONS",
]

STRUCTURE_KINDS = ("dirac-frame", "poisson-graph", "two-form-graph", "gcs", "gacs")
ACTIONS = ("check", "prolong", "project", "build-torus")
_BLOCKS = ("chart", "twist", "command") + STRUCTURE_KINDS
_SCALARS = ("action", "c", "lambda", "k", "fiber", "seed", "trials")

# block -> name -> (kind, degree, indexed family?)
_SCHEMA = {
    "twist": {"Phi": ("form", 3, False), "Psi": ("form", 2, True)},
    "poisson-graph": {"W": ("vector", 2, False), "V": ("vector", 1, True)},
    "two-form-graph": {"sigma": ("form", 2, False), "theta": ("form", 1, True)},
    "gcs": {"A": ("endo", 2, False), "pi": ("vector", 2, False), "sigma": ("form", 2, False)},
    "gacs": {"P": ("vector", 2, False), "theta": ("form", 2, False), "F": ("endo", 2, False),
             "Z": ("vector", 1, True), "xi": ("form", 1, True)},
    "command": {"V": ("vector", 1, True), "xi": ("form", 1, True)},
}
_SECTION_PARTS = {"X": ("vector", 1), "u": ("stable", 1), "alpha": ("form", 1), "v": ("stable", 1)}

_HEADER_RE = re.compile(r"\[([a-z-]+)\]\Z")
_KEY_RE = re.compile(r"([A-Za-z][A-Za-z]*?)(\d*)(?:\.([A-Za-z]+))?(?:\[([^\]]*)\])?\Z")


class DocError(ValueError):
    """Base class for document errors; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class DocSyntaxError(DocError):
    pass


class DocSemanticError(DocError):
    pass


@dataclass
class StructureDoc:
    """Parsed document.

    ``structure`` maps component names to tensors: for ``dirac-frame`` a
    ``sections`` tuple of :class:`StableSection`; for graphs the bivector or
    2-form plus a tuple family; for ``gcs``/``gacs`` the data object under
    ``data``.  ``command`` holds the action, scalar parameters, and tuple
    families ``V`` and ``xi``.
    """

    chart: Chart
    kind: str
    structure: dict
    twist: TwistData | None = None
    command: dict = field(default_factory=lambda: {"action": "check"})

    @property
    def action(self) -> str:
        return self.command.get("action", "check")

    def __eq__(self, other):
        if not isinstance(other, StructureDoc):
            return NotImplemented
        return (self.chart, self.kind, self.structure, self.twist, self.command) == (
            other.chart, other.kind, other.structure, other.twist, other.command)


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    col: int      # column of the key
    vcol: int     # column of the value


def _lines(text: str):
    """Yield ``(block, entries, line)`` groups."""
    blocks: list[tuple[str, list[_Entry], int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            m = _HEADER_RE.match(stripped)
            if not m:
                raise DocSyntaxError("malformed block header, expected [name]", ln, col)
            name = m.group(1)
            if name not in _BLOCKS:
                raise DocSemanticError(f"unknown block {name!r}; expected one of {', '.join(_BLOCKS)}", ln, col + 1)
            if any(b[0] == name for b in blocks):
                raise DocSemanticError(f"duplicate block [{name}]", ln, col)
            blocks.append((name, [], ln))
            continue
        if "=" not in stripped:
            raise DocSyntaxError("expected 'key = value'", ln, col)
        if not blocks:
            raise DocSyntaxError("entry before any block header", ln, col)
        key, value = body.split("=", 1)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        key, value = key.strip(), value.strip()
        if not key:
            raise DocSyntaxError("missing key", ln, col)
        if not value:
            raise DocSyntaxError("missing value", ln, vcol)
        blocks[-1][1].append(_Entry(key, value, ln, col, vcol))
    return blocks


def _names(e: _Entry) -> tuple[str, ...]:
    return tuple(s.strip() for s in e.value.split(",") if s.strip())


def _parse_chart(entries: list[_Entry], line: int) -> Chart:
    found = {}
    for e in entries:
        if e.key not in ("base", "stable"):
            raise DocSemanticError(f"unknown chart key {e.key!r}", e.line, e.col)
        if e.key in found:
            raise DocSemanticError(f"duplicate key {e.key!r}", e.line, e.col)
        found[e.key] = e
    if "base" not in found:
        raise DocSemanticError("chart needs 'base'", line, 1)
    base = _names(found["base"])
    stable = _names(found["stable"]) if "stable" in found else ()
    seen = set()
    for e in filter(None, (found["base"], found.get("stable"))):
        for m in re.finditer(r"[^,\s]+", e.value):
            if m.group() in seen:
                raise DocSemanticError(f"duplicate coordinate {m.group()!r}", e.line, e.vcol + m.start())
            seen.add(m.group())
    try:
        return Chart(base, stable)
    except ValueError as exc:
        raise DocSemanticError(str(exc), found["base"].line, found["base"].vcol) from None


def _poly(e: _Entry, chart: Chart) -> Poly:
    try:
        return parse_poly(e.value, chart.coords)
    except PolySyntaxError as exc:
        cls = DocSemanticError if "unknown coordinate" in str(exc) else DocSyntaxError
        raise cls(str(exc).rsplit(" (at", 1)[0], e.line, e.vcol + exc.position) from None


def _indices(e: _Entry, text: str | None, chart: Chart, stable: bool = False) -> tuple[str, ...]:
    if text is None:
        raise DocSyntaxError(f"{e.key!r} needs an index list like [x]", e.line, e.col)
    names = tuple(s.strip() for s in text.split(","))
    pool = chart.stable_coords if stable else chart.base_coords
    for nm in names:
        if nm not in pool:
            what = "stable" if stable else "base"
            raise DocSemanticError(f"unknown {what} coordinate {nm!r} in {e.key!r}", e.line, e.col)
    return names


def _build(chart: Chart, kind: str, degree: int, comps: list[tuple[tuple[str, ...], Poly]]):
    if kind == "vector" and degree == 1:
        vals = [chart.zero()] * chart.n
        for (nm,), p in comps:
            vals[chart.index(nm)] = vals[chart.index(nm)] + p
        return VectorField(chart, vals)
    if kind == "endo":
        m = [[chart.zero()] * chart.n for _ in range(chart.n)]
        for (i, j), p in comps:
            m[chart.index(i)][chart.index(j)] = p
        return EndoField(chart, m)
    cls = KForm if kind == "form" else KVector
    return cls.from_components(chart, degree, comps)


def _family(name: str, kind: str, degree: int, members: dict[int, list], count: int, chart: Chart, e_first) -> tuple:
    if members and (min(members) < 1 or max(members) > count):
        raise DocSemanticError(f"{name}<a> index out of range 1..{count}", e_first.line, e_first.col)
    return tuple(_build(chart, kind, degree, members.get(a, [])) for a in range(1, count + 1))


def _parse_tensors(block: str, entries: list[_Entry], chart: Chart, counts: dict[str, int | None]):
    """Parse the tensor entries of a block; returns ``(singles, families, scalars)``."""
    schema = _SCHEMA[block]
    singles: dict[str, list] = {}
    fams: dict[str, dict[int, list]] = {}
    first: dict[str, _Entry] = {}
    scalars: dict[str, _Entry] = {}
    seen: set = set()
    for e in entries:
        if block == "command" and e.key in _SCALARS:
            if e.key in scalars:
                raise DocSemanticError(f"duplicate key {e.key!r}", e.line, e.col)
            scalars[e.key] = e
            continue
        m = _KEY_RE.match(e.key)
        if not m or m.group(1) not in schema or m.group(3):
            raise DocSemanticError(f"unknown key {e.key!r} in [{block}]", e.line, e.col)
        name, num, _, idx = m.groups()
        kind, degree, indexed = schema[name]
        if indexed != bool(num):
            want = f"{name}<a>" if indexed else name
            raise DocSemanticError(f"expected {want}[...] in [{block}]", e.line, e.col)
        names = _indices(e, idx, chart)
        if len(names) != degree:
            raise DocSemanticError(f"{e.key!r} needs {degree} indices", e.line, e.col)
        slot = (name, int(num or 0), tuple(sorted(names, key=chart.index)) if kind != "endo" else names)
        if slot in seen:
            raise DocSemanticError(f"duplicate component {e.key!r}", e.line, e.col)
        seen.add(slot)
        first.setdefault(name, e)
        p = _poly(e, chart)
        if indexed:
            fams.setdefault(name, {}).setdefault(int(num), []).append((names, p))
        else:
            singles.setdefault(name, []).append((names, p))
    out = {}
    for name, (kind, degree, indexed) in schema.items():
        if not indexed:
            out[name] = _build(chart, kind, degree, singles.get(name, []))
            continue
        members = fams.get(name, {})
        count = counts.get(name)
        if count is None:
            count = max(members) if members else 0
        out[name] = _family(name, kind, degree, members, count, chart, first.get(name))
    return out, scalars


def _parse_sections(entries: list[_Entry], chart: Chart) -> tuple:
    data: dict[int, dict[str, list]] = {}
    seen = set()
    for e in entries:
        m = _KEY_RE.match(e.key)
        if not m or m.group(1) != "s" or not m.group(2) or m.group(3) not in _SECTION_PARTS:
            raise DocSemanticError(f"unknown key {e.key!r} in [dirac-frame]; expected s<i>.X|u|alpha|v[...]",
                                   e.line, e.col)
        _, num, part, idx = m.groups()
        names = _indices(e, idx, chart, stable=_SECTION_PARTS[part][0] == "stable")
        if len(names) != 1:
            raise DocSemanticError(f"{e.key!r} needs one index", e.line, e.col)
        slot = (int(num), part, names[0])
        if slot in seen:
            raise DocSemanticError(f"duplicate component {e.key!r}", e.line, e.col)
        seen.add(slot)
        data.setdefault(int(num), {}).setdefault(part, []).append((names[0], _poly(e, chart), e))
    want = chart.n + chart.h
    if sorted(data) != list(range(1, want + 1)):
        raise DocSemanticError(f"dirac-frame needs sections s1..s{want} (n + h = {want})")
    out = []
    for i in range(1, want + 1):
        parts = data[i]
        X = VectorField.zero(chart)
        alpha = KForm.zero(chart, 1)
        u = [chart.zero()] * chart.h
        v = [chart.zero()] * chart.h
        for nm, p, _ in parts.get("X", []):
            X = X + coord_vector(chart, nm) * p
        alpha = KForm.from_components(chart, 1, [((nm,), p) for nm, p, _ in parts.get("alpha", [])])
        for nm, p, _ in parts.get("u", []):
            u[chart.stable_coords.index(nm)] = p
        for nm, p, _ in parts.get("v", []):
            v[chart.stable_coords.index(nm)] = p
        try:
            out.append(StableSection(chart, X, u, alpha, v))
        except ValueError as exc:
            e = next(iter(parts.values()))[0][2]
            raise DocSemanticError(f"section s{i}: {exc}", e.line, e.col) from None
    return tuple(out)


def _fraction(e: _Entry, text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DocSyntaxError(f"expected a rational number, got {text.strip()!r}", e.line, e.vcol) from None


def _int(e: _Entry, lo: int) -> int:
    try:
        val = int(e.value)
    except ValueError:
        raise DocSyntaxError(f"expected an integer for {e.key!r}", e.line, e.vcol) from None
    if val < lo:
        raise DocSemanticError(f"{e.key!r} must be >= {lo}", e.line, e.vcol)
    return val


def parse_document(text: str) -> StructureDoc:
    """Parse a structure document; errors carry line and column."""
    blocks = _lines(text)
    byname = {b[0]: b for b in blocks}
    if "chart" not in byname:
        raise DocSemanticError("missing [chart] block", 1, 1)
    chart = _parse_chart(byname["chart"][1], byname["chart"][2])
    kinds = [b for b in blocks if b[0] in STRUCTURE_KINDS]
    if len(kinds) != 1:
        ln = kinds[1][2] if len(kinds) > 1 else 1
        raise DocSemanticError("document needs exactly one structure block "
                               f"({', '.join(STRUCTURE_KINDS)})", ln, 1)
    kind, entries, ln = kinds[0]
    if kind in ("gcs", "gacs") and chart.h:
        raise DocSemanticError(f"[{kind}] needs a chart without stable coordinates", ln, 1)

    twist = None
    if "twist" in byname:
        tw, _ = _parse_tensors("twist", byname["twist"][1], chart, {"Psi": chart.h})
        try:
            twist = TwistData(chart, tw["Phi"], tw["Psi"])
        except ValueError as exc:
            raise DocSemanticError(str(exc), byname["twist"][2], 1) from None

    try:
        if kind == "dirac-frame":
            structure = {"sections": _parse_sections(entries, chart)}
        elif kind == "poisson-graph":
            structure, _ = _parse_tensors(kind, entries, chart, {"V": chart.h})
        elif kind == "two-form-graph":
            structure, _ = _parse_tensors(kind, entries, chart, {"theta": chart.h})
        elif kind == "gcs":
            t, _ = _parse_tensors(kind, entries, chart, {})
            structure = {"data": GcsData(t["A"], t["pi"], t["sigma"])}
        else:
            t, _ = _parse_tensors(kind, entries, chart, {})
            if len(t["Z"]) != len(t["xi"]):
                h = max(len(t["Z"]), len(t["xi"]))
                t, _ = _parse_tensors(kind, entries, chart, {"Z": h, "xi": h})
            structure = {"data": GacsData(t["P"], t["theta"], t["F"], t["Z"], t["xi"])}
    except DocError:
        raise
    except ValueError as exc:
        raise DocSemanticError(f"[{kind}]: {exc}", ln, 1) from None

    command: dict[str, Any] = {"action": "check"}
    if "command" in byname:
        cmd_entries = byname["command"][1]
        t, scalars = _parse_tensors("command", cmd_entries, chart, {})
        if t["V"]:
            command["V"] = t["V"]
        if t["xi"]:
            command["xi"] = t["xi"]
        for key, e in scalars.items():
            if key == "action":
                if e.value not in ACTIONS:
                    raise DocSemanticError(f"unknown action {e.value!r}; expected one of {', '.join(ACTIONS)}",
                                           e.line, e.vcol)
                command["action"] = e.value
            elif key == "c":
                command["c"] = tuple(_fraction(e, s) for s in e.value.split(","))
            elif key == "lambda":
                lam = _fraction(e, e.value)
                if not lam:
                    raise DocSemanticError("lambda must be non-zero", e.line, e.vcol)
                command["lambda"] = lam
            elif key == "fiber":
                names = _names(e)
                for nm in names:
                    if not re.match(r"[A-Za-z][A-Za-z0-9]*\Z", nm):
                        raise DocSyntaxError(f"invalid coordinate name {nm!r} in fiber", e.line, e.vcol)
                command["fiber"] = names
            else:
                command[key] = _int(e, 1 if key in ("k", "trials") else 0)
        if "c" in command and len(command["c"]) != chart.h:
            e = scalars["c"]
            raise DocSemanticError(f"c needs {chart.h} entries (one per stable coordinate)", e.line, e.vcol)
    return StructureDoc(chart, kind, structure, twist, command)


# -- canonical serialization ---------------------------------------------------


def _alt_lines(name: str, T) -> list[str]:
    names = T.chart.base_coords
    return [f"{name}[{','.join(names[i] for i in idx)}] = {T.coeffs[idx]}" for idx in sorted(T.coeffs)]


def _vec_lines(name: str, V: VectorField) -> list[str]:
    return [f"{name}[{nm}] = {c}" for nm, c in zip(V.chart.base_coords, V.comps) if c]


def _form1_lines(name: str, a: KForm) -> list[str]:
    return [f"{name}[{nm}] = {c}" for nm, c in zip(a.chart.base_coords, a.as_list()) if c]


def _endo_lines(name: str, A: EndoField) -> list[str]:
    names = A.chart.base_coords
    return [f"{name}[{names[i]},{names[j]}] = {A.matrix[i][j]}"
            for i in range(A.chart.n) for j in range(A.chart.n) if A.matrix[i][j]]


def _tensor_lines(name: str, T) -> list[str]:
    if isinstance(T, VectorField):
        return _vec_lines(name, T)
    if isinstance(T, EndoField):
        return _endo_lines(name, T)
    if isinstance(T, KForm) and T.degree == 1:
        return _form1_lines(name, T)
    return _alt_lines(name, T)


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def serialize_document(doc: StructureDoc) -> str:
    """Canonical text; ``parse_document(serialize_document(d)) == d``."""
    chart = doc.chart
    out = ["[chart]", f"base = {', '.join(chart.base_coords)}"]
    if chart.h:
        out.append(f"stable = {', '.join(chart.stable_coords)}")
    if doc.twist is not None:
        out += ["", "[twist]"] + _alt_lines("Phi", doc.twist.Phi)
        for a, psi in enumerate(doc.twist.Psi, start=1):
            out += _alt_lines(f"Psi{a}", psi)
    out += ["", f"[{doc.kind}]"]
    st = doc.structure
    if doc.kind == "dirac-frame":
        for i, s in enumerate(st["sections"], start=1):
            out += _vec_lines(f"s{i}.X", s.X)
            out += [f"s{i}.u[{t}] = {c}" for t, c in zip(chart.stable_coords, s.u) if c]
            out += _form1_lines(f"s{i}.alpha", s.alpha)
            out += [f"s{i}.v[{t}] = {c}" for t, c in zip(chart.stable_coords, s.v) if c]
    elif doc.kind in ("poisson-graph", "two-form-graph"):
        for name, (_, _, indexed) in _SCHEMA[doc.kind].items():
            if indexed:
                for a, T in enumerate(st[name], start=1):
                    out += _tensor_lines(f"{name}{a}", T)
            else:
                out += _tensor_lines(name, st[name])
    else:
        data = st["data"]
        for name, (_, _, indexed) in _SCHEMA[doc.kind].items():
            value = getattr(data, name)
            if indexed:
                for a, T in enumerate(value, start=1):
                    out += _tensor_lines(f"{name}{a}", T)
            else:
                out += _tensor_lines(name, value)
    cmd = doc.command
    out += ["", "[command]", f"action = {cmd.get('action', 'check')}"]
    if "c" in cmd:
        out.append(f"c = {', '.join(_frac(x) for x in cmd['c'])}")
    if "lambda" in cmd:
        out.append(f"lambda = {_frac(cmd['lambda'])}")
    for key in ("k", "seed", "trials"):
        if key in cmd:
            out.append(f"{key} = {cmd[key]}")
    if "fiber" in cmd:
        out.append(f"fiber = {', '.join(cmd['fiber'])}")
    for name in ("V", "xi"):
        for a, T in enumerate(cmd.get(name, ()), start=1):
            out += _tensor_lines(f"{name}{a}", T)
    return "\n".join(out) + "\n"
