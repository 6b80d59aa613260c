"""Exact arithmetic in GF(p) and GF(p^k), cyclotomic classes, additive characters.

Field elements are plain integer encodings in [0, q): the residue itself for
k = 1, the base-p digit string of the polynomial representative (constant
coefficient in the lowest digit) for extensions.  The canonical modulus for
GF(p^k) is the lexicographically smallest monic irreducible polynomial,
coefficients compared from the constant term up; the canonical primitive
element is the smallest encoding of multiplicative order q - 1.  Both choices
are deterministic, so encodings and reports reproduce across runs.

Arithmetic is supported for q < 2^63.  Operations that build q-sized tables
(discrete logs, traces, cyclotomic classes, character sums) are guarded by
``max_table_q()``; override the default of 10^6 with the environment variable
CYCLOTOME_MAX_Q.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arith import is_prime_det, prime_factors
from .errors import (
    BadIndex,
    CompositeP,
    NoField,
    TooLarge,
    ZeroIndex,
    ZeroInverse,
)

MAX_FIELD_Q = 2**63
DEFAULT_MAX_TABLE_Q = 10**6

# Phase sums accumulate at most q unit-modulus terms; they are evaluated by
# integer bincount over the p possible phases, so the float part is a dot
# product of at most p terms and stays far inside the 1e-9 * sqrt(q) budget.
SUM_ABS_TOL = 1e-9


def max_table_q() -> int:
    raw = os.environ.get("CYCLOTOME_MAX_Q")
    return int(raw) if raw else DEFAULT_MAX_TABLE_Q


def _poly_mul_mod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    """Schoolbook product of coefficient lists, reduced by a monic modulus."""
    k = len(modulus) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(k):
                out[i - k + j] = (out[i - k + j] - c * modulus[j]) % p
    out = out[:k]
    while len(out) < k:
        out.append(0)
    return out


def _poly_pow_mod(base: Sequence[int], e: int, modulus: Sequence[int], p: int) -> list[int]:
    k = len(modulus) - 1
    result = [1] + [0] * (k - 1)
    b = list(base)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, b, modulus, p)
        b = _poly_mul_mod(b, b, modulus, p)
        e >>= 1
    return result


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic degree-k polynomial over GF(p).

    Uses the standard criterion: x^(p^k) == x mod f, and x^(p^(k/r)) - x is
    coprime to f for every prime r dividing k.
    """
    k = len(poly) - 1
    x = [0, 1] + [0] * (k - 2) if k >= 2 else [0]
    xq = _poly_pow_mod(x, p**k, poly, p)
    if xq != x:
        return False
    for r in prime_factors(k):
        xd = _poly_pow_mod(x, p ** (k // r), poly, p)
        diff = [(a - b) % p for a, b in zip(xd, x)]
        if _poly_gcd_is_one(diff, poly, p):
            continue
        return False
    return True


def _poly_gcd_is_one(a: list[int], b: Sequence[int], p: int) -> bool:
    a = list(a)
    b = list(b)

    def deg(u):
        for i in range(len(u) - 1, -1, -1):
            if u[i]:
                return i
        return -1

    while True:
        da, db = deg(a), deg(b)
        if da < 0:
            return db == 0
        if db < 0:
            return da == 0
        if da < db:
            a, b = b, a
            da, db = db, da
        inv = pow(b[db], p - 2, p)
        shift = da - db
        c = a[da] * inv % p
        for i in range(db + 1):
            a[i + shift] = (a[i + shift] - c * b[i]) % p
    # unreachable


class FieldSpec:
    """A finite field GF(p^k) with its canonical modulus and primitive element.

    Instances are immutable in contract; internal tables are cached lazily.
    Exposes both scalar ops (add, mul, inv, ...) and the vectorized additive
    group protocol consumed by the tournament and design modules.
    """

    def __init__(self, p: int, k: int = 1):
        if k < 1:
            raise NoField(f"extension degree must be >= 1, got {k}")
        if p == 2:
            raise NoField("characteristic 2 is unsupported")
        if p < 3 or not is_prime_det(p):
            raise CompositeP(f"{p} is not an odd prime")
        q = p**k
        if q >= MAX_FIELD_Q:
            raise NoField(f"{p}^{k} exceeds the 2^63 arithmetic range")
        self.p = p
        self.k = k
        self.q = q
        m, ell = q - 1, 0
        while m % 2 == 0:
            m //= 2
            ell += 1
        self.ell = ell
        self.m = m
        self._pow_weights = tuple(p**i for i in range(k))
        self.modulus: tuple[int, ...] | None = None if k == 1 else self._find_modulus()
        self.g = self._find_primitive()
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._trace: np.ndarray | None = None
        self._digit_table: np.ndarray | None = None
        self._phases: np.ndarray | None = None

    # -- construction helpers -------------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        # itertools.product varies the last slot fastest, so tuples come out in
        # lexicographic order with the constant term as the most significant key.
        p, k = self.p, self.k
        for low in itertools.product(range(p), repeat=k):
            coeffs = list(low) + [1]
            if coeffs[0] and _is_irreducible(coeffs, p):
                return tuple(coeffs)
        raise NoField(f"no irreducible degree-{k} polynomial found over GF({p})")

    def _find_primitive(self) -> int:
        targets = [(self.q - 1) // r for r in prime_factors(self.q - 1)]
        for g in range(2, self.q):
            if all(self.pow(g, t) != 1 for t in targets):
                return g
        raise NoField(f"no primitive element in GF({self.q})")  # pragma: no cover

    def _decode(self, enc: int) -> list[int]:
        out = []
        for _ in range(self.k):
            enc, r = divmod(enc, self.p)
            out.append(r)
        return out

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(c * w for c, w in zip(coeffs, self._pow_weights))

    # -- scalar field operations ----------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        return self._encode([(a + b) % self.p for a, b in zip(self._decode(x), self._decode(y))])

    def neg(self, x: int) -> int:
        if self.k == 1:
            return (-x) % self.p
        return self._encode([(-a) % self.p for a in self._decode(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return x * y % self.p
        if x == 0 or y == 0:
            return 0
        if self._log is not None:
            return int(self._exp[(self._log[x] + self._log[y]) % (self.q - 1)])
        return self._encode(_poly_mul_mod(self._decode(x), self._decode(y), self.modulus, self.p))

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        if self.k == 1:
            return pow(x, self.p - 2, self.p)
        if self._log is not None:
            return int(self._exp[(-self._log[x]) % (self.q - 1)])
        return self._encode(_poly_pow_mod(self._decode(x), self.q - 2, self.modulus, self.p))

    def pow(self, x: int, e: int) -> int:
        """x^e with exponent reduced mod q - 1 for nonzero bases."""
        if x == 0:
            if e < 0:
                raise ZeroInverse("0 has no multiplicative inverse")
            return 0 if e else 1
        e %= self.q - 1
        if self.k == 1:
            return pow(x, e, self.p)
        return self._encode(_poly_pow_mod(self._decode(x), e, self.modulus, self.p))

    # -- tables ----------------------------------------------------------------

    def _guard_tables(self):
        limit = max_table_q()
        if self.q > limit:
            raise TooLarge(
                f"q = {self.q} exceeds the table guard {limit} (set CYCLOTOME_MAX_Q to raise it)"
            )

    def _ensure_tables(self):
        if self._log is not None:
            return
        self._guard_tables()
        q = self.q
        powers = [1]
        if self.k == 1:
            p, g = self.p, self.g
            x = 1
            for _ in range(q - 2):
                x = x * g % p
                powers.append(x)
            closes = x * g % p == 1
        else:
            x = 1
            for _ in range(q - 2):
                x = self.mul(x, self.g)
                powers.append(x)
            closes = self.mul(x, self.g) == 1
        if not closes or len(set(powers)) != q - 1:
            raise NoField(f"primitive element {self.g} failed the order check")
        exp = np.array(powers, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        self._exp = exp
        self._log = log

    @property
    def exp_table(self) -> np.ndarray:
        self._ensure_tables()
        return self._exp

    @property
    def log_table(self) -> np.ndarray:
        self._ensure_tables()
        return self._log

    def _digits(self, arr: np.ndarray) -> np.ndarray:
        """Base-p digit matrix, shape arr.shape + (k,)."""
        rest = np.asarray(arr, dtype=np.int64)
        out = np.empty(rest.shape + (self.k,), dtype=np.int64)
        for i in range(self.k):
            rest, out[..., i] = np.divmod(rest, self.p)
        return out

    def _encode_digits(self, digits: np.ndarray) -> np.ndarray:
        return digits @ np.array(self._pow_weights, dtype=np.int64)

    @property
    def trace_table(self) -> np.ndarray:
        """Absolute trace GF(p^k) -> GF(p) for every encoding (identity if k=1)."""
        if self._trace is None:
            if self.k == 1:
                self._guard_tables()
                self._trace = np.arange(self.q, dtype=np.int64)
            else:
                self._ensure_tables()
                qm1 = self.q - 1
                frob_exp = (np.arange(qm1, dtype=np.int64) * self.p) % qm1
                power = np.arange(self.q, dtype=np.int64)
                acc_digits = self._digits(power)
                for _ in range(self.k - 1):
                    nz = power != 0
                    power = power.copy()
                    power[nz] = self._exp[frob_exp[self._log[power[nz]]]]
                    acc_digits = (acc_digits + self._digits(power)) % self.p
                tr = self._encode_digits(acc_digits)
                if not (tr < self.p).all():
                    raise NoField("trace landed outside the prime subfield")  # pragma: no cover
                self._trace = tr
        return self._trace

    @property
    def phase_table(self) -> np.ndarray:
        """exp(2*pi*i*r/p) for r in [0, p)."""
        if self._phases is None:
            self._phases = np.exp(2j * np.pi * np.arange(self.p) / self.p)
        return self._phases

    # -- additive group protocol (shared with CyclicGroup) ----------------------

    @property
    def order(self) -> int:
        return self.q

    @property
    def label(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    def sub_vector(self, vs: np.ndarray, u: int) -> np.ndarray:
        """(v - u) in the additive group for every v in vs."""
        vs = np.asarray(vs, dtype=np.int64)
        if self.k == 1:
            return (vs - u) % self.p
        du = np.array(self._decode(u), dtype=np.int64)
        return self._encode_digits((self._digits(vs) - du) % self.p)

    def diff_matrix(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Pairwise additive differences x - y, shape (len(xs), len(ys))."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.k == 1:
            return (xs[:, None] - ys[None, :]) % self.p
        dx = self._digits(xs)[:, None, :]
        dy = self._digits(ys)[None, :, :]
        return self._encode_digits((dx - dy) % self.p)

    @property
    def char_mod(self) -> int:
        return self.p

    def char_indices(self, a: int, xs: np.ndarray) -> np.ndarray:
        """Tr(a*x) mod p for every x in xs; the phase index of psi_a(x)."""
        xs = np.asarray(xs, dtype=np.int64)
        if self.k == 1:
            return (a * xs) % self.p
        out = np.zeros(xs.shape, dtype=np.int64)
        if a == 0:
            return out
        self._ensure_tables()
        tr = self.trace_table
        nz = xs != 0
        prod = self._exp[(self._log[a] + self._log[xs[nz]]) % (self.q - 1)]
        out[nz] = tr[prod]
        return out

    # -- derived lookups ---------------------------------------------------------

    def quadratic_class(self, x: int) -> int:
        """0 if x is a nonzero square, 1 if a nonsquare."""
        if x == 0:
            raise ZeroIndex("0 has no quadratic class")
        if self.k == 1:
            return 0 if pow(x, (self.p - 1) // 2, self.p) == 1 else 1
        return int(self.log_table[x]) % 2

    def elements(self) -> range:
        return range(self.q)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "q": self.q,
            "modulus": list(self.modulus) if self.modulus else None,
            "g": self.g,
        }

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, k={self.k}, g={self.g})"


def make_field(p: int, k: int = 1) -> FieldSpec:
    """Construct GF(p^k) with canonical modulus and primitive element."""
    return FieldSpec(p, k)


@dataclass(frozen=True)
class CyclotomicTable:
    """Partition of the nonzero elements into e classes g^i * <g^e>."""

    field: FieldSpec
    e: int
    classes: tuple[frozenset[int], ...]
    class_of: np.ndarray  # class index per encoding, -1 at 0

    def class_index(self, x: int) -> int:
        if x == 0:
            raise ZeroIndex("0 belongs to no cyclotomic class")
        return int(self.class_of[x])

    def union(self, indices: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for i in indices:
            out |= self.classes[i % self.e]
        return frozenset(out)


def cyclotomic_classes(field: FieldSpec, e: int) -> CyclotomicTable:
    """Classes of index e: element g^t lands in class t mod e."""
    if e < 1 or (field.q - 1) % e != 0:
        raise BadIndex(f"{e} does not divide q - 1 = {field.q - 1}")
    log = field.log_table
    class_of = np.where(log >= 0, log % e, -1)
    classes = tuple(frozenset(int(v) for v in np.flatnonzero(class_of == i)) for i in range(e))
    return CyclotomicTable(field=field, e=e, classes=classes, class_of=class_of)


@dataclass(frozen=True)
class AdditiveCharacter:
    """psi_a(x) = exp(2*pi*i * Tr(a*x) / p)."""

    field: FieldSpec
    a: int

    def __call__(self, x: int) -> complex:
        idx = self.field.char_indices(self.a, np.array([x]))[0]
        return complex(self.field.phase_table[idx])

    def vector(self) -> np.ndarray:
        """Values on every field element, indexed by encoding."""
        xs = np.arange(self.field.q, dtype=np.int64)
        return self.field.phase_table[self.field.char_indices(self.a, xs)]


def _phase_sum(field: FieldSpec, indices: np.ndarray) -> complex:
    counts = np.bincount(indices, minlength=field.p)
    return complex(counts @ field.phase_table)


def character_sum(field: FieldSpec, a: int, members: Iterable[int]) -> complex:
    """Sum of psi_a over a subset of field encodings."""
    if isinstance(members, np.ndarray):
        arr = members.astype(np.int64, copy=False)
    else:
        arr = np.array(sorted(members) if isinstance(members, (set, frozenset)) else list(members), dtype=np.int64)
    if arr.size == 0:
        return 0.0 + 0.0j
    return _phase_sum(field, field.char_indices(a, arr))


def gauss_sum_quadratic(field: FieldSpec, a: int) -> complex:
    """Sum over all x in GF(q) of psi_a(x^2).

    For q == 1 (mod 4) with odd extension degree this equals +sqrt(q) when a
    is a nonzero square and -sqrt(q) when a is a nonsquare.
    """
    if a == 0:
        raise ZeroIndex("quadratic Gauss sum needs a nonzero index")
    if field.k == 1:
        xs = np.arange(field.q, dtype=np.int64)
        squares = (xs * xs) % field.p
    else:
        exp, log = field.exp_table, field.log_table
        xs = np.arange(1, field.q, dtype=np.int64)
        squares = np.concatenate(([0], exp[(2 * log[xs]) % (field.q - 1)]))
    return _phase_sum(field, field.char_indices(a, squares))
