"""The compiled scan kernels must agree with the pure-Python ones
exactly, therefore the whole grid here runs through both."""

import pytest

from k3fm import _pykernels, kernels
from k3fm.discforms import ns_form
from k3fm.intmath import distinct_primes

compiled = pytest.mark.skipif(
    not kernels.compiled_available(), reason="compiled kernels not built"
)


def _form_data(d, t):
    form = ns_form(d, t).form
    den = form.denominator()
    if form.rank == 0:
        n1, n2, q1, q2, b12 = 1, 1, 0, 0, 0
    elif form.rank == 1:
        n1, n2 = 1, form.orders[0]
        q1, b12 = 0, 0
        q2 = int(form.q_gen[0] * den) % (2 * den)
    else:
        n1, n2 = form.orders
        q1 = int(form.q_gen[0] * den) % (2 * den)
        q2 = int(form.q_gen[1] * den) % (2 * den)
        b12 = int(form.b_matrix[0][1] * den) % den
    return n1, n2, den, q1, q2, b12


GRID = [(d, t) for t in range(1, 15) for d in range(t)]


@compiled
def test_element_scan_equivalence():
    from k3fm import _ckernels

    for d, t in GRID:
        n1, n2, den, q1, q2, b12 = _form_data(d, t)
        for order in (1, t, max(1, t // 2)):
            pure = _pykernels.scan_isotropic_elements(n1, n2, q1, q2, b12, den, order)
            fast = _ckernels.scan_isotropic_elements(n1, n2, q1, q2, b12, den, order)
            assert list(pure) == list(fast), (d, t, order)


@compiled
def test_isometry_scan_equivalence():
    from k3fm import _ckernels

    for d, t in GRID:
        n1, n2, den, q1, q2, b12 = _form_data(d, t)
        primes1 = distinct_primes(n1)
        primes2 = tuple(p for p in distinct_primes(n2) if n1 % p)
        args = (n1, n2, den, q1, q2, b12, q1, q2, b12, primes1, primes2)
        pure = _pykernels.scan_isometries(*args, False)
        fast = _ckernels.scan_isometries(*args, False)
        assert list(pure) == list(fast), (d, t)
        pure_first = _pykernels.scan_isometries(*args, True)
        fast_first = _ckernels.scan_isometries(*args, True)
        assert list(pure_first) == list(fast_first), (d, t)


def test_dispatch_respects_env(monkeypatch):
    # fits in the compiled range: both paths must give identical output
    n1, n2, den, q1, q2, b12 = _form_data(2, 6)
    baseline = kernels.scan_isotropic_elements(n1, n2, q1, q2, b12, den, 6)
    monkeypatch.setenv("K3FM_PURE_PYTHON", "1")
    forced = kernels.scan_isotropic_elements(n1, n2, q1, q2, b12, den, 6)
    assert list(baseline) == list(forced)


def test_dispatch_large_values_fall_back():
    # beyond the int64-safe bound the dispatcher must choose pure Python
    big = 1 << 31
    assert kernels.scan_isotropic_elements(1, 1, 0, 0, 0, big, 1) == [(0, 0)]
