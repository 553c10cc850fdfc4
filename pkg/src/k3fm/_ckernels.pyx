# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the scan kernels in ``_pykernels``.

Same signatures, same iteration order, same results.  Everything runs in
C int64; the dispatcher in ``kernels`` only routes calls here when all
inputs are below 2**31, which keeps every intermediate product (always a
product of two reduced values) inside int64.
"""

from libc.stdint cimport int64_t


cdef inline int64_t c_gcd(int64_t a, int64_t b) nogil:
    cdef int64_t r
    while b:
        r = a % b
        a = b
        b = r
    return a


def scan_isotropic_elements(long long n1, long long n2, long long q1,
                            long long q2, long long b12, long long den,
                            long long order):
    cdef int64_t two_den = 2 * den
    cdef int64_t c1, c2, o1, o2, g, head, cross, val
    hits = []
    for c1 in range(n1):
        o1 = n1 // c_gcd(n1, c1)
        if order % o1:
            continue
        head = c1 * c1 % two_den * q1 % two_den
        cross = 2 * c1 % two_den * b12 % two_den
        for c2 in range(n2):
            o2 = n2 // c_gcd(n2, c2)
            if o1 * o2 != order * c_gcd(o1, o2):
                continue
            val = (head + c2 * c2 % two_den * q2 + cross * c2) % two_den
            if val == 0:
                hits.append((c1, c2))
    return hits


def scan_isometries(long long n1, long long n2, long long den, long long q1,
                    long long q2, long long b12, long long want_q1,
                    long long want_q2, long long want_b12, primes1, primes2,
                    bint first_only):
    cdef int64_t two_den = 2 * den
    cdef int64_t step = n2 // n1
    cdef int64_t b11 = q1 % den
    cdef int64_t b22 = q2 % den
    cdef int64_t a, b, c, d, qv, qx, pairing, partial_b, partial_a, ab, p
    cdef int ok
    cdef list p1 = list(primes1)
    cdef list p2 = list(primes2)
    hits = []
    for b in range(n1):
        partial_b = b * b % two_den * q1 % two_den
        for d in range(n2):
            qv = (partial_b + d * d % two_den * q2
                  + 2 * b % two_den * d % two_den * b12) % two_den
            if qv != want_q2:
                continue
            ok = 1
            for p in p2:
                if d % p == 0:
                    ok = 0
                    break
            if not ok:
                continue
            for a in range(n1):
                partial_a = a * a % two_den * q1 % two_den
                ab = a * b % den * b11 % den
                for c in range(0, n2, step):
                    qx = (partial_a + c * c % two_den * q2
                          + 2 * a % two_den * c % two_den * b12) % two_den
                    if qx != want_q1:
                        continue
                    pairing = (ab + (a * d + c * b) % den * b12
                               + c * d % den * b22) % den
                    if pairing != want_b12:
                        continue
                    ok = 1
                    for p in p1:
                        if (a * d - b * c) % p == 0:
                            ok = 0
                            break
                    if ok:
                        hits.append((a, c, b, d))
                        if first_only:
                            return hits
    return hits
