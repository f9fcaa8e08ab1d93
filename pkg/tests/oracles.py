"""Brute-force reference implementations.

Deliberately naive and independent of the package: no shared sieve, no
numpy, no reuse of package helpers.
"""

import math
from itertools import product


def is_prime_td(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factor_td(n):
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def phi_bruteforce(n):
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def least_prime_bruteforce(k, l):
    p = l
    while not is_prime_td(p):
        p += k
    return p


def p_max_bruteforce(k):
    """max over reduced l of the least prime = l mod k, class by class."""
    return max(least_prime_bruteforce(k, l) for l in range(1, k) if math.gcd(l, k) == 1)


def jacobsthal_bruteforce(m):
    """Largest gap between consecutive integers coprime to m, by gcd over [1, 2m+1]."""
    prev = None
    best = 0
    for n in range(1, 2 * m + 2):
        if math.gcd(n, m) == 1:
            if prev is not None:
                best = max(best, n - prev)
            prev = n
    return best


def omega_tuples(k, m):
    """All tuples in {1..phi(k)}^m with x_i != x_j whenever |p_i - p_j| < k."""
    ps = first_primes_td(m)
    phi = phi_bruteforce(k)
    close = [(i, j) for i in range(m) for j in range(i + 1, m) if ps[j] - ps[i] < k]
    for tup in product(range(1, phi + 1), repeat=m):
        if all(tup[i] != tup[j] for i, j in close):
            yield tup


def first_primes_td(m):
    out = []
    n = 2
    while len(out) < m:
        if is_prime_td(n):
            out.append(n)
        n += 1
    return out


def pis_bruteforce(k, m):
    ps = first_primes_td(m)
    return [sum(1 for j in range(t) if ps[t] - ps[j] < k) for t in range(m)]
