"""Dispatch a parsed structure document to the checkers and constructors."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .bundle import TwistData, WadeParams
from .dirac import (
    DEFAULT_TRIALS,
    SubbundleFrame,
    check_dirac,
    check_dirac_jacobi,
    graph_2form,
    graph_poisson,
    jacobi_prolongation_preconditions,
    prolong_dirac,
    prolong_dirac_jacobi,
    prolongation_preconditions,
)
from .docfmt import DocSemanticError, StructureDoc, serialize_document
from .gcs import (
    GacsData,
    GcsData,
    courant_nijenhuis_check,
    ehresmann_invariance_check,
    gacs_algebraic_check,
    gacs_normality_check,
    gcs_algebraic_check,
    gcs_integrability_check,
    lift_gacs_to_gcs,
    phi_square_check,
    projection_check,
    prolong_gcs_J0,
    torus_bundle_builder,
)
from .poly import Chart
from .report import PreconditionError, StructureError, StructureReport, condition
from .tensors import KVector, coord_vector, schouten_bracket, wedge

__all__ = ["RunResult", "run", "document_hash", "EXIT_PASS", "EXIT_FAIL", "EXIT_PARSE", "EXIT_REFUSED"]

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_REFUSED = 0, 1, 2, 3
_VERDICTS = {EXIT_PASS: "PASS", EXIT_FAIL: "FAIL", EXIT_REFUSED: "REFUSED"}


def document_hash(doc: StructureDoc) -> str:
    return hashlib.sha256(serialize_document(doc).encode()).hexdigest()


@dataclass
class RunResult:
    doc_hash: str
    action: str
    kind: str
    seed: int
    trials: int
    reports: list[StructureReport] = field(default_factory=list)
    refused: bool = False
    constructed: StructureDoc | None = None

    @property
    def exit_code(self) -> int:
        if self.refused:
            return EXIT_REFUSED
        return EXIT_PASS if all(r.ok for r in self.reports) else EXIT_FAIL

    @property
    def verdict(self) -> str:
        return _VERDICTS[self.exit_code]

    def render(self) -> str:
        lines = [f"document sha256:{self.doc_hash}",
                 f"action {self.action} on {self.kind}, seed {self.seed}, trials {self.trials}"]
        for r in self.reports:
            lines.append(r.render())
        if self.constructed is not None:
            lines.append("== constructed structure")
            lines += ["  " + ln if ln else "" for ln in serialize_document(self.constructed).splitlines()]
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "document": f"sha256:{self.doc_hash}",
            "action": self.action,
            "kind": self.kind,
            "seed": self.seed,
            "trials": self.trials,
            "reports": [r.to_dict() for r in self.reports],
            "constructed": None if self.constructed is None else serialize_document(self.constructed),
            "verdict": self.verdict,
            "exit_code": self.exit_code,
        }


def _frame(doc: StructureDoc) -> SubbundleFrame:
    st = doc.structure
    if doc.kind == "dirac-frame":
        return SubbundleFrame(doc.chart, st["sections"])
    if doc.kind == "poisson-graph":
        return graph_poisson(st["W"], st["V"], doc.chart)
    return graph_2form(st["sigma"], st["theta"], doc.chart)


def _params(doc: StructureDoc) -> WadeParams | None:
    if "c" not in doc.command:
        return None
    return WadeParams(doc.command["c"], doc.command.get("lambda", Fraction(1)))


def _schouten_cross_check(doc: StructureDoc) -> StructureReport:
    """``[Pi, Pi] = 0`` for ``Pi = W + V_a ^ d/dt^a`` on the product chart."""
    chart = doc.chart
    big = chart.extended()
    conv = lambda T: type(T).from_components(big, T.degree, [(k, c.to_vars(big.coords)) for k, c in T.coeffs.items()])
    Pi = conv(doc.structure["W"])
    for V, t in zip(doc.structure["V"], chart.stable_coords):
        Pi = Pi + wedge(V.extend_to(big), coord_vector(big, t))
    rep = StructureReport("Schouten cross-check on the product")
    S = schouten_bracket(Pi, Pi)
    names = big.base_coords
    rep.check("poisson", ((f"[Pi,Pi][{','.join(names[i] for i in idx)}]", c) for idx, c in sorted(S.coeffs.items())))
    return rep


def _check(doc: StructureDoc, res: RunResult):
    if doc.kind in ("dirac-frame", "poisson-graph", "two-form-graph"):
        F = _frame(doc)
        params = _params(doc)
        if params is None:
            res.reports.append(check_dirac(F, doc.twist, trials=res.trials, seed=res.seed))
            if doc.kind == "poisson-graph" and (doc.twist is None or doc.twist.is_zero()):
                res.reports.append(_schouten_cross_check(doc))
        else:
            res.reports.append(check_dirac_jacobi(F, params, doc.twist, trials=res.trials, seed=res.seed))
    elif doc.kind == "gcs":
        g = doc.structure["data"]
        res.reports.append(phi_square_check(g))
        alg = gcs_algebraic_check(g)
        res.reports.append(alg)
        if alg.ok:
            res.reports.append(gcs_integrability_check(g))
            res.reports.append(courant_nijenhuis_check(g))
    else:
        g = doc.structure["data"]
        alg = gacs_algebraic_check(g)
        res.reports.append(alg)
        if alg.ok:
            res.reports.append(gacs_normality_check(g, res.trials, res.seed))
            lift = lift_gacs_to_gcs(g)
            li = StructureReport("integrability of the translation invariant lift")
            li.extend(gcs_integrability_check(lift))
            res.reports.append(li)


def _frame_doc(F: SubbundleFrame, twist: TwistData | None, command: dict) -> StructureDoc:
    return StructureDoc(F.chart, "dirac-frame", {"sections": tuple(F)}, twist, command)


def _prolong(doc: StructureDoc, res: RunResult):
    if doc.kind == "gcs":
        k = doc.command.get("k", 1)
        g = doc.structure["data"]
        out = prolong_gcs_J0(g, k)
        for tag, gg in (("input", g), ("prolonged", out)):
            alg = gcs_algebraic_check(gg)
            alg.title = f"{tag}: {alg.title}"
            res.reports.append(alg)
            if alg.ok:
                integ = gcs_integrability_check(gg)
                integ.title = f"{tag}: {integ.title}"
                res.reports.append(integ)
        res.reports.append(phi_square_check(out))
        res.constructed = StructureDoc(out.chart, "gcs", {"data": out}, None, {"action": "check"})
        return
    if doc.kind == "gacs":
        raise DocSemanticError("prolong applies to Dirac frames, graphs, and gcs documents")
    V = doc.command.get("V", ())
    if not V:
        raise DocSemanticError("prolong needs automorphism fields V<p>[...] in [command]")
    F = _frame(doc)
    params = _params(doc)
    if params is None:
        pre = prolongation_preconditions(F, V, doc.twist, trials=res.trials, seed=res.seed)
    else:
        pre = jacobi_prolongation_preconditions(F, V, params, trials=res.trials, seed=res.seed)
    res.reports.append(pre)
    if not pre.ok:
        res.refused = True
        return
    if params is None:
        big = prolong_dirac(F, V, doc.twist, trials=res.trials, seed=res.seed)
        twist = None if doc.twist is None else doc.twist.extended(big.chart)
        res.reports.append(check_dirac(big, twist, trials=res.trials, seed=res.seed))
        command = {"action": "check"}
    else:
        big = prolong_dirac_jacobi(F, V, params, trials=res.trials, seed=res.seed)
        twist = None
        ext = params.extended(len(V))
        res.reports.append(check_dirac_jacobi(big, ext, trials=res.trials, seed=res.seed))
        command = {"action": "check", "c": ext.c}
        if ext.lam != 1:
            command["lambda"] = ext.lam
    res.constructed = _frame_doc(big, twist, command)


def _fiber(doc: StructureDoc, default_count: int) -> tuple[str, ...]:
    fiber = doc.command.get("fiber")
    if fiber is None:
        raise DocSemanticError(f"{doc.action} needs 'fiber = ...' in [command]")
    if len(fiber) != default_count:
        raise DocSemanticError(f"fiber needs {default_count} coordinate names")
    return fiber


def _project(doc: StructureDoc, res: RunResult):
    if doc.kind != "gacs":
        raise DocSemanticError("project applies to gacs documents")
    g: GacsData = doc.structure["data"]
    fiber = _fiber(doc, g.h)
    rep, proj = projection_check(g, fiber, trials=res.trials, seed=res.seed)
    res.reports.append(rep)
    res.reports.append(ehresmann_invariance_check(g, fiber))
    if proj is not None:
        res.constructed = StructureDoc(proj.chart, "gcs", {"data": proj}, None, {"action": "check"})


def _build_torus(doc: StructureDoc, res: RunResult):
    if doc.kind != "gcs":
        raise DocSemanticError("build-torus needs a gcs base document")
    xi = doc.command.get("xi", ())
    if not xi:
        raise DocSemanticError("build-torus needs connection coefficients xi<a>[...] in [command]")
    base: GcsData = doc.structure["data"]
    fiber = doc.command.get("fiber") or base.chart.fresh_names("z", len(xi))
    if len(fiber) != len(xi):
        raise DocSemanticError(f"fiber needs {len(xi)} coordinate names")
    clash = set(fiber) & set(base.chart.base_coords)
    if clash:
        raise DocSemanticError(f"fiber coordinate {sorted(clash)[0]!r} already names a base coordinate")
    table = [[a.component((u,)) for u in range(base.chart.n)] for a in xi]
    g = torus_bundle_builder(base, table, fiber)
    alg = gacs_algebraic_check(g)
    res.reports.append(alg)
    if alg.ok:
        res.reports.append(gacs_normality_check(g, res.trials, res.seed))
    res.constructed = StructureDoc(g.chart, "gacs", {"data": g}, None, {"action": "check"})


_ACTIONS = {"check": _check, "prolong": _prolong, "project": _project, "build-torus": _build_torus}


def run(doc: StructureDoc, *, seed: int | None = None, trials: int | None = None) -> RunResult:
    """Execute the document's command.

    Precondition refusals are recorded as failing entries and mark the
    result as refused; usage errors raise :class:`DocSemanticError`.
    """
    seed = doc.command.get("seed", 0) if seed is None else seed
    trials = doc.command.get("trials", DEFAULT_TRIALS) if trials is None else trials
    res = RunResult(document_hash(doc), doc.action, doc.kind, seed, trials)
    try:
        _ACTIONS[doc.action](doc, res)
    except PreconditionError as exc:
        res.reports.append(exc.report)
        res.refused = True
    except StructureError as exc:
        rep = StructureReport("structural precondition")
        key = "adapted-form" if doc.action in ("project",) else "precondition"
        rep.add(condition(key, passed=False, note=str(exc)))
        res.reports.append(rep)
        res.refused = True
    return res
