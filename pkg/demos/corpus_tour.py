"""Run every bundled fixture through the verifier and summarize the verdicts.

Run with ``python demos/corpus_tour.py``.
"""

from stabledirac.corpus import FIXTURES, load_fixture
from stabledirac.runner import run

width = max(len(fx.name) for fx in FIXTURES)
for fx in FIXTURES:
    result = run(load_fixture(fx.name))
    failed = sorted({c.key for rep in result.reports for c in rep.failures()})
    detail = ", ".join(failed) if failed else "-"
    print(f"{fx.name:<{width}}  {result.verdict:<8} failed: {detail}")
