"""The fourteen acceptance criteria.

Each check prints one PASS/FAIL summary line with its runtime and fails if
the result is wrong or the runtime limit is exceeded.  Run with ``-s`` to see
the detail rows, or use ``homalg verify all``.
"""

import pytest

from homalg.verify import REGISTRY


@pytest.mark.parametrize("number", sorted(REGISTRY), ids=lambda n: f"criterion-{n:02d}")
def test_criterion(number):
    res = REGISTRY[number].run()
    print(res.summary())
    if not res.ok:
        print("\n".join(res.lines))
    assert res.passed, "\n".join(res.lines)
    assert res.in_time, f"took {res.seconds:.1f}s, limit {res.limit}s"
