"""Compare the compiled scan kernels against their pure-Python twins.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 7 --t-max 96

Both implementations receive identical integerized form data and their
outputs are checked to agree before any timing is reported, so a broken
build shows up as an error rather than a suspicious speedup.
"""

import argparse
import time
from math import gcd

from k3fm import _pykernels, kernels
from k3fm.discforms import ns_form
from k3fm.intmath import distinct_primes


def form_data(d, t):
    form = ns_form(d, t).form
    den = form.denominator()
    if form.rank == 0:
        return 1, 1, den, 0, 0, 0
    if form.rank == 1:
        return 1, form.orders[0], den, 0, int(form.q_gen[0] * den) % (2 * den), 0
    n1, n2 = form.orders
    q1 = int(form.q_gen[0] * den) % (2 * den)
    q2 = int(form.q_gen[1] * den) % (2 * den)
    b12 = int(form.b_matrix[0][1] * den) % den
    return n1, n2, den, q1, q2, b12


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_case(label, pure_fn, fast_fn, repeat):
    assert list(pure_fn()) == list(fast_fn()), f"{label}: outputs differ"
    pure = best_of(pure_fn, repeat)
    fast = best_of(fast_fn, repeat)
    print(f"{label:<34} pure {pure * 1e3:9.3f} ms   "
          f"compiled {fast * 1e3:9.3f} ms   x{pure / fast:6.1f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timing repetitions, best is reported")
    parser.add_argument("--t-max", type=int, default=64,
                        help="largest fibre degree used in element scans")
    args = parser.parse_args()

    if not kernels.compiled_available():
        raise SystemExit("compiled kernels are not built; nothing to compare")
    from k3fm import _ckernels

    print("element scans (full isotropic enumeration at the given order)")
    t = 4
    while t <= args.t_max:
        d = t // 2  # gcd(d, t) > 1 keeps both canonical rays distinct
        n1, n2, den, q1, q2, b12 = form_data(d, t)
        ea = (n1, n2, q1, q2, b12, den, t)
        bench_case(
            f"  d={d} t={t} (|A|={n1 * n2})",
            lambda a=ea: _pykernels.scan_isotropic_elements(*a),
            lambda a=ea: _ckernels.scan_isotropic_elements(*a),
            args.repeat,
        )
        t *= 2

    print("isometry scans (full self-isometry group of the form)")
    for d, t in ((0, 8), (0, 12), (0, 16), (6, 18)):
        n1, n2, den, q1, q2, b12 = form_data(d, t)
        primes1 = list(distinct_primes(n1))
        primes2 = [p for p in distinct_primes(n2) if n1 % p]
        ia = (n1, n2, den, q1, q2, b12, q1, q2, b12, primes1, primes2, False)
        bench_case(
            f"  d={d} t={t} (|A|={n1 * n2}, m={gcd(d, t)})",
            lambda a=ia: _pykernels.scan_isometries(*a),
            lambda a=ia: _ckernels.scan_isometries(*a),
            args.repeat,
        )


if __name__ == "__main__":
    main()
