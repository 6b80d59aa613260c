"""Number-theoretic sweeps: deterministic primality and primes of the form s^2 + 4.

The sweep pre-sieves candidate values q = s^2 + 4 with small primes (only
primes == 1 mod 4 can divide such a q, splitting the odd s line into two
residue progressions each) and finishes survivors with a deterministic
strong-pseudoprime test, so counts are exact for q < 2^63.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRange

MAX_ARITH = 2**63

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
)

# Strong-pseudoprime witness sets, smallest verified set per bound.
# Verified complete for every n below the paired bound
# (https://miller-rabin.appspot.com/); the last row covers all n < 2^64.
_WITNESS_TIERS = (
    (341_531, (9345883071009581737,)),
    (1_050_535_501, (336781006125, 9639812373923155)),
    (350_269_456_337, (4230279247111683200, 14694767155120705706, 16641139526367750375)),
    (55_245_642_489_451, (2, 141889084524735, 1199124725622454117, 11096072698276303650)),
    (7_999_252_175_582_851, (2, 4130806001517, 149795463772692060, 186635894390467037, 3967304179347715805)),
    (585_226_005_592_931_977, (2, 123635709730000, 9233062284813009, 43835965440333360, 761179012939631437, 1263739024124850375)),
    (2**64, (2, 325, 9375, 28178, 450775, 9780504, 1795265022)),
)


def _is_spsp(n: int, s: int, d: int, a: int) -> bool:
    """Strong-pseudoprime check for witness a, with n - 1 = d * 2^s, d odd."""
    a %= n
    if a == 0:
        return True
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime_det(n: int) -> bool:
    """Deterministic primality verdict for 1 < n < 2^63."""
    if not 1 < n < MAX_ARITH:
        raise OutOfRange(f"primality test supports 1 < n < 2^63, got {n}")
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for bound, witnesses in _WITNESS_TIERS:
        if n < bound:
            return all(_is_spsp(n, s, d, a) for a in witnesses)
    return all(_is_spsp(n, s, d, a) for a in _WITNESS_TIERS[-1][1])


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division (desk-scale n only)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def square_gate(q: int) -> int | None:
    """The odd s with s^2 = q - 4, or None if q - 4 is not an odd square."""
    if q < 5:
        raise OutOfRange(f"square gate needs q >= 5, got {q}")
    s = math.isqrt(q - 4)
    if s * s == q - 4 and s % 2 == 1:
        return s
    return None


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n, exact (float seed, integer correction)."""
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k)))
    while r > 1 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def detect_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p^k and p prime, or None."""
    if q < 2:
        return None
    for k in range(q.bit_length() - 1, 1, -1):
        r = _iroot(q, k)
        if r**k == q and is_prime_det(r):
            return (r, k)
    if is_prime_det(q):
        return (q, 1)
    return None


@dataclass(frozen=True)
class PrimeHit:
    """One value q = s^2 + 4 that is a prime or a proper prime power."""

    s: int
    q: int
    p: int
    k: int

    @property
    def kind(self) -> str:
        return "prime" if self.k == 1 else f"prime_power({self.p},{self.k})"


@dataclass
class SweepReport:
    """Outcome of a prime sweep over q = s^2 + 4, odd s in [1, max_s]."""

    max_s: int
    count: int
    s_values: np.ndarray = field(repr=False)
    seconds: float

    def hits(self):
        for s in self.s_values:
            s = int(s)
            yield PrimeHit(s=s, q=s * s + 4, p=s * s + 4, k=1)

    def as_dict(self, with_seconds: bool = True) -> dict:
        d = {"N": self.max_s, "count": self.count}
        if with_seconds:
            d["seconds"] = round(self.seconds, 3)
        return d


def _sieve_bits(limit: int) -> bytearray:
    bs = bytearray([1]) * (limit + 1)
    bs[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if bs[i]:
            bs[i * i :: i] = b"\x00" * len(bs[i * i :: i])
    return bs


def _sweep_sieve_primes(bound: int) -> list[tuple[int, int, int, int | None]]:
    """Primes p == 1 mod 4 up to bound with the two roots of s^2 == -4 (mod p).

    Fourth component: the single s with s^2 + 4 == p (q equal to the sieve
    prime itself must survive the sieve), or None.
    """
    bs = _sieve_bits(bound)
    rows = []
    for p in range(5, bound + 1, 4):
        if not bs[p]:
            continue
        # sqrt(-1) mod p via a quadratic non-residue
        nr = 2
        while pow(nr, (p - 1) // 2, p) != p - 1:
            nr += 1
        i = pow(nr, (p - 1) // 4, p)
        r = (2 * i) % p
        exc = square_gate(p) if p >= 5 else None
        rows.append((p, r, p - r, exc))
    return rows


_SIEVE_BOUND = 32768
_SIEVE_ROWS: list[tuple[int, int, int, int | None]] | None = None


def _sieve_rows() -> list[tuple[int, int, int, int | None]]:
    global _SIEVE_ROWS
    if _SIEVE_ROWS is None:
        _SIEVE_ROWS = _sweep_sieve_primes(_SIEVE_BOUND)
    return _SIEVE_ROWS


def _sweep_block(bounds: tuple[int, int]) -> list[int]:
    """All s in [lo, hi), s odd, with s^2 + 4 prime. lo must be odd."""
    lo, hi = bounds
    n = (hi - lo + 1) // 2  # odd s: lo, lo+2, ...
    if n <= 0:
        return []
    mask = np.ones(n, dtype=bool)
    for p, r1, r2, exc in _sieve_rows():
        inv2 = (p + 1) // 2
        for r in (r1, r2):
            j0 = ((r - lo) * inv2) % p
            if j0 < n:
                mask[j0::p] = False
        if exc is not None and lo <= exc < hi:
            mask[(exc - lo) // 2] = True
    survivors = lo + 2 * np.flatnonzero(mask)
    return [int(s) for s in survivors if is_prime_det(int(s) * int(s) + 4)]


def sweep_s2_plus_4(max_s: int, jobs: int = 1, block: int = 1 << 19) -> SweepReport:
    """Count (and list) primes q = s^2 + 4 for odd s in [1, max_s].

    Partitioned into contiguous odd-s blocks; the merged hit stream is
    ordered by s regardless of jobs, so output is schedule-independent.
    """
    if max_s < 1:
        raise OutOfRange(f"sweep bound must be >= 1, got {max_s}")
    if max_s * max_s + 4 >= MAX_ARITH:
        raise OutOfRange(f"sweep bound {max_s} exceeds the 2^63 guard")
    start = time.perf_counter()
    blocks = [(lo, min(lo + block, max_s + 1)) for lo in range(1, max_s + 1, block)]
    if jobs > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_block, blocks))
    else:
        parts = [_sweep_block(b) for b in blocks]
    s_values = np.array([s for part in parts for s in part], dtype=np.int64)
    return SweepReport(
        max_s=max_s,
        count=len(s_values),
        s_values=s_values,
        seconds=time.perf_counter() - start,
    )


def prime_power_scan(max_s: int) -> list[PrimeHit]:
    """Values q = s^2 + 4 (odd s <= max_s) that are prime powers p^k, k > 1."""
    if max_s * max_s + 4 >= MAX_ARITH:
        raise OutOfRange(f"scan bound {max_s} exceeds the 2^63 guard")
    out = []
    for s in range(1, max_s + 1, 2):
        q = s * s + 4
        pk = detect_prime_power(q)
        if pk is not None and pk[1] > 1:
            out.append(PrimeHit(s=s, q=q, p=pk[0], k=pk[1]))
    return out
