"""Small integer/prime helpers used across the package."""

import math


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_divisors(n: int) -> tuple[int, ...]:
    """Sorted primes dividing n (empty for n = 1)."""
    out = []
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return tuple(out)


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def pi_part(n: int, pi) -> int:
    """Largest divisor of n whose prime divisors all lie in pi."""
    out = 1
    for p in pi:
        out *= p_part(n, p)
    return out


def is_p_power(n: int, p: int) -> bool:
    """True iff n is a (possibly zeroth) power of the prime p."""
    while n % p == 0:
        n //= p
    return n == 1


def prime_power_base(q: int):
    """Return (p, k) with q = p**k, or None if q is not a prime power > 1."""
    if q < 2:
        return None
    for p in prime_divisors(q):
        k = round(math.log(q, p))
        for kk in (k - 1, k, k + 1):
            if kk >= 1 and p ** kk == q:
                return p, kk
        return None
    return None


def multiplicative_order(a: int, n: int) -> int:
    """Least k >= 1 with a**k = 1 mod n; a and n must be coprime."""
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    k = 1
    x = a % n
    while x != 1:
        x = (x * a) % n
        k += 1
    return k


# bound for the "q divides 2**p - 1 for some prime p" membership test
MERSENNE_EXPONENT_BOUND = 31
_MERSENNE_EXPONENTS = tuple(p for p in range(2, MERSENNE_EXPONENT_BOUND + 1) if is_prime(p))


def divides_mersenne(q: int) -> bool:
    """True iff q divides 2**p - 1 for some prime p <= MERSENNE_EXPONENT_BOUND."""
    if q % 2 == 0:
        return False
    return any(pow(2, p, q) == 1 for p in _MERSENNE_EXPONENTS)


def mersenne_bound_uncertain(q: int) -> bool:
    """True iff the exponent bound could matter for q: ord_q(2) is a prime above the bound."""
    if q % 2 == 0 or q < 3:
        return False
    d = multiplicative_order(2, q)
    return is_prime(d) and d > MERSENNE_EXPONENT_BOUND
