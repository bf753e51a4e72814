"""Deterministic random inputs shared by the test modules."""

import itertools
import random

from stabledirac.bundle import StableSection, TwistData
from stabledirac.poly import Chart, random_poly
from stabledirac.tensors import EndoField, KForm, KVector, VectorField, exterior_derivative


def rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def poly(chart, r, degree=2, max_terms=3):
    return random_poly(chart, degree, r, max_terms=max_terms)


def vector(chart, r, degree=2):
    return VectorField(chart, [poly(chart, r, degree) for _ in range(chart.n)])


def form(chart, k, r, degree=2):
    return KForm.from_components(chart, k, [(idx, poly(chart, r, degree))
                                            for idx in itertools.combinations(range(chart.n), k)])


def multivector(chart, k, r, degree=2):
    return KVector.from_components(chart, k, [(idx, poly(chart, r, degree))
                                              for idx in itertools.combinations(range(chart.n), k)])


def endo(chart, r, degree=1):
    return EndoField(chart, [[poly(chart, r, degree) for _ in range(chart.n)] for _ in range(chart.n)])


def closed_form(chart, k, r, degree=2):
    """``d`` of a random ``(k-1)``-form."""
    if k == 1:
        return exterior_derivative(KForm.from_components(chart, 0, [((), poly(chart, r, degree + 1))]))
    return exterior_derivative(form(chart, k - 1, r, degree))


def section(chart, r, degree=2):
    return StableSection(chart, vector(chart, r, degree), [poly(chart, r, degree) for _ in range(chart.h)],
                         form(chart, 1, r, degree), [poly(chart, r, degree) for _ in range(chart.h)])


def twist(chart, r, degree=2):
    return TwistData(chart, closed_form(chart, 3, r, degree), tuple(closed_form(chart, 2, r, degree)
                                                                    for _ in range(chart.h)))


def chart(n, h):
    base = ("x", "y", "z", "w")[:n]
    return Chart(base, tuple(f"t{a + 1}" for a in range(h)))
