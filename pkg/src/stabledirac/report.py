"""Structured verdicts shared by every checker.

A :class:`StructureReport` is an ordered list of :class:`Condition` entries
whose overall verdict is their conjunction.  Each condition key has a fixed
reference string in :data:`REFERENCES`; checkers never invent their own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .poly import Poly

__all__ = [
    "REFERENCES",
    "Condition",
    "StructureReport",
    "StructureError",
    "PreconditionError",
    "condition",
    "first_nonzero",
]

MAX_TERMS = 10

# condition key -> reference string
REFERENCES: dict[str, str] = {
    # Dirac and Dirac-Jacobi
    "isotropy": "maximal isotropy: G(s_i, s_j) = 0",
    "rank": "maximal isotropy: frame rank n + h at sample points",
    "courant-tensor": "closure under the stable Courant bracket",
    "wade-tensor": "closure under the Wade bracket with linear tau",
    "conformal-tensor": "closure under the conformal-Courant bracket",
    "inf-automorphism": "infinitesimal automorphism: L_V preserves the frame",
    "inf-conformal-automorphism": "infinitesimal conformal automorphism: ([Z,X] - fX) + L_Z alpha stays in D",
    "commuting": "commuting infinitesimal automorphisms",
    "twist-annihilated-phi": "twisted prolongation: i(V_p) Phi = 0",
    "twist-annihilated-psi": "twisted prolongation: i(V_p) Psi = 0",
    "jacobi-automorphism": "Dirac-Jacobi prolongation: conformally corrected L_{V_p} preserves J",
    "theta-consistency": "presymplectic pair: theta_D(X, Y) = beta(X) = -alpha(Y)",
    "wade-presymplectic": "conformal-presymplectic leaves: d theta_D = -d tau ^ theta_D",
    "conformal-poisson": "conformal Poisson: [P,P] = (sharp_P df) ^ P",
    "lc-poisson": "locally conformal Poisson: [P,P] = (sharp_P phi) ^ P",
    "lc-closed": "locally conformal Poisson: d phi = 0",
    "lc-implies-jacobi": "locally conformal Poisson forces L_{sharp_P phi / 2} P = 0",
    "jacobi-schouten": "Jacobi pair: [P,P] = 2 E ^ P",
    "jacobi-invariance": "Jacobi pair: L_E P = 0",
    "poisson": "Poisson bivector: [P,P] = 0",
    # generalized complex, classical form
    "gcs-square": "Phi^2 = -Id: A^2 = -Id - sharp_pi o flat_sigma",
    "gcs-pi-compat": "Phi^2 = -Id: pi(alpha o A, beta) = pi(alpha, beta o A)",
    "gcs-sigma-compat": "Phi^2 = -Id: sigma(AX, Y) = sigma(X, AY)",
    "gcs-poisson": "integrability i): [pi, pi] = 0",
    "gcs-concomitant": "integrability ii): Schouten concomitant R_(pi,A) = 0",
    "gcs-nijenhuis": "integrability iii): N_A(X,Y) = sharp_pi(i(X ^ Y) d sigma)",
    "gcs-sigma-A": "integrability iv): d sigma_A = cyclic d sigma(A., ., .)",
    "gcs-phi-square": "block matrix of Phi squares to -Id",
    "gcs-torsion": "Courant-Nijenhuis torsion of Phi vanishes on a frame",
    # generalized almost contact
    "gacs-P-compat": "gacs algebra: P(alpha o F, beta) = P(alpha, beta o F)",
    "gacs-theta-compat": "gacs algebra: theta(FX, Y) = theta(X, FY)",
    "gacs-FZ": "gacs algebra: F(Z_a) = 0",
    "gacs-xiF": "gacs algebra: xi^a o F = 0",
    "gacs-iZtheta": "gacs algebra: i(Z_a) theta = 0",
    "gacs-ixiP": "gacs algebra: i(xi^a) P = 0",
    "gacs-duality": "gacs algebra: xi^a(Z_b) = delta^a_b",
    "gacs-square": "gacs algebra: F^2 = -Id - sharp_P o flat_theta + xi^a (x) Z_a",
    "normal-poisson": "normality: [P,P] = 0",
    "normal-concomitant": "normality: R_(P,F) = 0",
    "normal-LZP": "normality: L_{Z_a} P = 0",
    "normal-LZtheta": "normality: L_{Z_a} theta = 0",
    "normal-Lxi": "normality: L_{sharp_P alpha} xi^a = 0",
    "normal-ZZ": "normality: [Z_a, Z_b] = 0",
    "normal-nijenhuis": "normality: N_F(X,Y) = sharp_P(i(X ^ Y) d theta) - d xi^a(X,Y) Z_a",
    "normal-theta-F": "normality: d theta_F = cyclic d theta(F., ., .)",
    "eigenvalue-guard": "normality criterion hypothesis: -1 is not an eigenvalue of sharp_P o flat_theta",
    "supp-LZxi": "supplementary: L_{Z_b} xi^a = 0",
    "supp-LZF": "supplementary: L_{Z_a} F = 0",
    "supp-LFxi": "supplementary: (L_{F X} xi^a)(Y) = (L_{F Y} xi^a)(X)",
    "adapted-form": "adapted coordinates: Z_a = d/dz^a, xi^a = dz^a + xi^a_u dy^u",
    "z-independence": "projection: frame coefficients of P, theta, F are z-independent",
    "ehresmann-invariance": "Ehresmann curvature is F-invariant: R(FX, FY) = R(X, Y)",
    "ehresmann-bracket": "F-invariance via brackets: xi^a([FX,FY] - [X,Y]) = 0",
    "torus-a": "torus bundle condition a): i(sharp_P alpha) Xi = 0",
    "torus-b": "torus bundle condition b): Xi(FX, FY) = Xi(X, Y)",
    "precondition": "structural precondition",
}


class StructureError(ValueError):
    """Input does not have the structural shape an operation requires."""


@dataclass(frozen=True)
class Condition:
    """One verdict.  ``residual`` is the first nonzero defect, ``witness`` a failing point."""

    key: str
    passed: bool
    where: str = ""
    residual: Poly | None = None
    witness: tuple | None = None
    note: str = ""

    @property
    def ref(self) -> str:
        return REFERENCES[self.key]

    @property
    def name(self) -> str:
        return f"{self.key} {self.where}".rstrip()

    def detail(self) -> str:
        bits = []
        if self.residual is not None and not self.passed:
            bits.append(f"residual {self.residual.format(MAX_TERMS)}")
        if self.witness is not None:
            pts = ", ".join(f"{k}={v}" for k, v in self.witness)
            bits.append(f"at ({pts})")
        if self.note:
            bits.append(self.note)
        return "; ".join(bits)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ref": self.ref,
            "passed": self.passed,
            "residual": None if self.residual is None or self.passed else self.residual.format(MAX_TERMS),
            "witness": None if self.witness is None else {k: str(v) for k, v in self.witness},
            "note": self.note or None,
        }


def condition(key: str, residual: Poly | None = None, where: str = "", *, passed: bool | None = None,
              witness=None, note: str = "") -> Condition:
    """Build a condition; without ``passed`` the verdict is ``residual == 0``."""
    if key not in REFERENCES:
        raise KeyError(f"unregistered condition {key!r}")
    if passed is None:
        passed = residual is None or residual.is_zero()
    if witness is not None and not isinstance(witness, tuple):
        witness = tuple(witness.items())
    return Condition(key, passed, where, residual, witness, note)


def first_nonzero(items: Iterable[tuple[str, Poly]]) -> tuple[str, Poly | None]:
    """First ``(where, residual)`` with a nonzero residual, else ``("", None)``."""
    for where, p in items:
        if not p.is_zero():
            return where, p
    return "", None


@dataclass
class StructureReport:
    title: str
    conditions: list[Condition] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions)

    def add(self, c: Condition) -> "StructureReport":
        self.conditions.append(c)
        return self

    def extend(self, other: "StructureReport | Iterable[Condition]") -> "StructureReport":
        if isinstance(other, StructureReport):
            self.conditions.extend(other.conditions)
            self.notes.extend(other.notes)
        else:
            self.conditions.extend(other)
        return self

    def check(self, key: str, items: Iterable[tuple[str, Poly]], note: str = "") -> Condition:
        """Append one condition that passes iff every residual in ``items`` vanishes."""
        where, res = first_nonzero(items)
        c = condition(key, res, where, note=note)
        self.conditions.append(c)
        return c

    def failures(self) -> list[Condition]:
        return [c for c in self.conditions if not c.passed]

    def get(self, key: str) -> Condition:
        for c in self.conditions:
            if c.key == key:
                return c
        raise KeyError(key)

    def verdict(self, key: str) -> bool:
        """Conjunction over all entries with this key."""
        found = [c.passed for c in self.conditions if c.key == key]
        if not found:
            raise KeyError(key)
        return all(found)

    def render(self) -> str:
        lines = [f"== {self.title}: {'PASS' if self.ok else 'FAIL'}"]
        lines.extend(f"  note: {n}" for n in self.notes)
        for c in self.conditions:
            tag = "PASS" if c.passed else "FAIL"
            lines.append(f"  {tag}  {c.name}  [{c.ref}]")
            det = c.detail()
            if det:
                lines.append(f"        {det}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "notes": list(self.notes),
                "conditions": [c.to_dict() for c in self.conditions]}

    def __str__(self):
        return self.render()


class PreconditionError(Exception):
    """An operation refused to run; ``report`` lists the failed prerequisites."""

    def __init__(self, report: StructureReport):
        self.report = report
        names = ", ".join(c.name for c in report.failures()) or report.title
        super().__init__(f"precondition failed: {names}")


def sample_point(chart_coords, rng) -> dict[str, Fraction]:
    """Random rational point avoiding small integers, used for rank-type certificates."""
    return {c: Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for c in chart_coords}
