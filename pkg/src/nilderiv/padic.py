"""Base-p digit expansions and binomial coefficients modulo p.

Binomials are computed digitwise from a precomputed table of the small
values C(a, b) for 0 <= b <= a < p, never through big integers; the
digitwise product rule is the algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import OutOfRange


@dataclass(frozen=True)
class PDigits:
    """Digits of a nonnegative integer, least significant first.

    No trailing zeros are stored, except for the single-digit zero.
    """

    p: int
    digits: tuple[int, ...]

    def value(self) -> int:
        v = 0
        for d in reversed(self.digits):
            v = v * self.p + d
        return v

    def __len__(self) -> int:
        return len(self.digits)


def p_digits(i: int, p: int) -> PDigits:
    """Expand i >= 0 in base p."""
    if i < 0:
        raise OutOfRange("negative integers have no base-p expansion")
    if i == 0:
        return PDigits(p, (0,))
    digs = []
    while i:
        i, r = divmod(i, p)
        digs.append(r)
    return PDigits(p, tuple(digs))


def digits_fixed(i: int, p: int, length: int) -> tuple[int, ...]:
    """Base-p digits of i, zero-padded to exactly `length` digits."""
    digs = []
    for _ in range(length):
        i, r = divmod(i, p)
        digs.append(r)
    if i:
        raise OutOfRange(f"integer does not fit in {length} base-{p} digits")
    return tuple(digs)


@lru_cache(maxsize=None)
def _small_binomials(p: int) -> tuple[tuple[int, ...], ...]:
    # Pascal rows C(a, b) mod p for 0 <= b <= a < p.
    rows = [(1,)]
    for a in range(1, p):
        prev = rows[-1]
        row = [1]
        for b in range(1, a):
            row.append((prev[b - 1] + prev[b]) % p)
        row.append(1)
        rows.append(tuple(row))
    return tuple(rows)


def lucas_binom(i: int, j: int, p: int) -> int:
    """C(i, j) mod p, as the product of digitwise binomials.

    Vanishes exactly when some digit of j exceeds the matching digit
    of i; in particular it is 0 whenever i < j.
    """
    if i < 0 or j < 0:
        raise OutOfRange("binomial arguments must be nonnegative")
    if j > i:
        return 0
    table = _small_binomials(p)
    out = 1
    while i or j:
        i, a = divmod(i, p)
        j, b = divmod(j, p)
        if b > a:
            return 0
        out = out * table[a][b] % p
    return out


def factorial_unit(j: int, p: int) -> tuple[int, int]:
    """Return (j! mod p, inverse of j! mod p) for 0 <= j <= p-1.

    Beyond p-1 the factorial is divisible by p and has no inverse.
    """
    if not 0 <= j <= p - 1:
        raise OutOfRange(f"{j}! is not invertible modulo {p}")
    f = 1
    for t in range(2, j + 1):
        f = f * t % p
    return f, pow(f, -1, p)
