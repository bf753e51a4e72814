"""Shipped fixture documents and their expected outcomes."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .docfmt import StructureDoc, parse_document

__all__ = ["Fixture", "FIXTURES", "fixture_names", "get_fixture", "load_fixture_text", "load_fixture"]


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    expect_pass: bool
    designated: str | None = None  # condition key expected to fail

    @property
    def filename(self) -> str:
        return f"{self.name}.sdoc"


FIXTURES: tuple[Fixture, ...] = (
    Fixture("so3-poisson-graph", "graph of the so(3) bivector with a rotation as stable direction", True),
    Fixture("closed-two-form-graph", "graph of a closed 2-form with a closed 1-form", True),
    Fixture("jacobi-pair-graph", "Dirac-Jacobi graph of a Jacobi pair, tau = t1", True),
    Fixture("jacobi-pair-prolongation", "Jacobi-pair graph prolonged by two commuting fields", True),
    Fixture("so3-prolongation", "so(3) graph prolonged by a rotation", True),
    Fixture("almost-contact-trivial", "almost contact structure with P = 0, theta = 0", True),
    Fixture("heisenberg-contact", "normal contact structure on the Heisenberg group", True),
    Fixture("heisenberg-projection", "Heisenberg structure projected to the (x, y) plane", True),
    Fixture("torus-bundle-flat", "flat circle bundle over the symplectic-type plane", True),
    Fixture("torus-bundle-complex-curved", "curved circle bundle over the complex-type plane", True),
    Fixture("complex-type-prolongation", "complex-type plane prolonged by a J0 block", True),
    Fixture("broken-nonpoisson", "bivector with nonzero Schouten square", False, "courant-tensor"),
    Fixture("broken-heisenberg-flat-xi", "Heisenberg data with xi = dz", False, "gacs-square"),
    Fixture("broken-prolongation-noncommuting", "prolongation by non-commuting fields", False, "commuting"),
    Fixture("broken-torus-curvature", "curvature violating the Poisson-direction condition", False, "torus-a"),
    Fixture("broken-gcs-nonclosed", "symplectic type transformed by a non-closed B-field", False, "gcs-nijenhuis"),
)

_BY_NAME = {f.name: f for f in FIXTURES}


def fixture_names() -> list[str]:
    return [f.name for f in FIXTURES]


def get_fixture(name: str) -> Fixture:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; valid names: {', '.join(fixture_names())}") from None


def load_fixture_text(name: str) -> str:
    fx = get_fixture(name)
    return resources.files(__package__).joinpath("corpus", fx.filename).read_text(encoding="utf-8")


def load_fixture(name: str) -> StructureDoc:
    return parse_document(load_fixture_text(name))
