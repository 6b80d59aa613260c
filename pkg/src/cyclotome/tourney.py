"""Tournament representation, Cayley digraph construction, and NDR certificates.

Arc convention, fixed package-wide: u -> v exactly when v - u lies in the
connection set, so the out-neighborhood of u is u + D.  Building with the
mirrored convention would produce the reverse tournament, which has the same
regularity certificates and the conjugate spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotSkew, SameVertex
from .field_core import FieldSpec, cyclotomic_classes

#: A common-out-neighbor count outside {(n-1)/4, (n-5)/4} disqualifies NDR.
_PAIR_BLOCK = 128


class CyclicGroup:
    """Additive group Z/nZ for odd n, with the same protocol as FieldSpec."""

    def __init__(self, n: int):
        if n < 3 or n % 2 == 0:
            raise NotSkew(f"cyclic group order must be odd and >= 3, got {n}")
        self.n = n

    @property
    def order(self) -> int:
        return self.n

    @property
    def label(self) -> str:
        return f"Z{self.n}"

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def neg(self, x: int) -> int:
        return (-x) % self.n

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.n

    def sub_vector(self, vs: np.ndarray, u: int) -> np.ndarray:
        return (np.asarray(vs, dtype=np.int64) - u) % self.n

    def diff_matrix(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        return (xs[:, None] - ys[None, :]) % self.n

    @property
    def char_mod(self) -> int:
        return self.n

    def char_indices(self, a: int, xs: np.ndarray) -> np.ndarray:
        return (a * np.asarray(xs, dtype=np.int64)) % self.n

    @property
    def phase_table(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.n) / self.n)

    def __repr__(self) -> str:
        return f"CyclicGroup({self.n})"


class Tournament:
    """An n-vertex orientation of K_n as a dense 0/1 adjacency matrix."""

    def __init__(self, adj: np.ndarray, label: str = ""):
        adj = np.ascontiguousarray(adj, dtype=np.uint8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = adj.shape[0]
        if not np.array_equal(adj + adj.T + np.eye(n, dtype=np.uint8), np.ones((n, n), dtype=np.uint8)):
            raise ValueError("not a tournament: need exactly one arc per pair and no loops")
        self.n = n
        self.adj = adj
        self.label = label
        self._row_bits: tuple[int, ...] | None = None
        self._out_degrees: np.ndarray | None = None

    @property
    def out_degrees(self) -> np.ndarray:
        if self._out_degrees is None:
            self._out_degrees = self.adj.sum(axis=1, dtype=np.int64)
        return self._out_degrees

    @property
    def row_bits(self) -> tuple[int, ...]:
        """Out-neighborhoods as machine integers (bit v set iff arc u -> v)."""
        if self._row_bits is None:
            packed = np.packbits(self.adj, axis=1, bitorder="little")
            self._row_bits = tuple(int.from_bytes(row.tobytes(), "little") for row in packed)
        return self._row_bits

    def reverse(self) -> "Tournament":
        return Tournament(self.adj.T.copy(), label=f"reverse({self.label})" if self.label else "")

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines.extend("".join("1" if b else "0" for b in row) for row in self.adj)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, label: str = "") -> "Tournament":
        lines = [ln for ln in text.strip().splitlines() if ln]
        n = int(lines[0])
        if len(lines) != n + 1:
            raise ValueError(f"expected {n} rows, got {len(lines) - 1}")
        adj = np.array([[int(c) for c in ln] for ln in lines[1:]], dtype=np.uint8)
        return cls(adj, label=label)

    def __repr__(self) -> str:
        return f"Tournament(n={self.n}, label={self.label!r})"


class ConnectionSet:
    """A skew subset D of a group: (D, -D) partitions the nonzero elements."""

    def __init__(self, group, members):
        n = group.order
        D = frozenset(int(x) for x in members)
        if 0 in D:
            raise NotSkew("connection set must not contain 0")
        if any(not 0 < x < n for x in D):
            raise NotSkew("connection set members must be group encodings in (0, n)")
        neg = frozenset(group.neg(x) for x in D)
        if D & neg or len(D | neg) != n - 1:
            raise NotSkew("(D, -D) does not partition the nonzero elements")
        self.group = group
        self.members = D

    @property
    def n(self) -> int:
        return self.group.order

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def negated(self) -> "ConnectionSet":
        return ConnectionSet(self.group, {self.group.neg(x) for x in self.members})

    def __repr__(self) -> str:
        return f"ConnectionSet({self.group!r}, |D|={len(self.members)})"


class DegreeProfile(NamedTuple):
    outdegrees: np.ndarray
    is_regular: bool
    is_near_regular: bool


@dataclass(frozen=True)
class PairProfile:
    """Histogram of common-out-neighbor counts over unordered vertex pairs."""

    n: int
    histogram: dict[int, int]

    @property
    def ordered_total(self) -> int:
        return 2 * sum(v * c for v, c in self.histogram.items())


@dataclass(frozen=True)
class NdrCertificate:
    """Outcome of both near-double-regularity characterizations.

    ``is_ndr_definitional`` checks that every vertex's in- and out-neighborhoods
    induce near-regular tournaments; ``is_ndr_pairwise`` checks that every
    common-out-neighbor count lies in {(n-1)/4, (n-5)/4}.  The two flags are
    computed independently and reported separately.  ``pair_histogram`` is the
    complete unordered-pair histogram when the pairwise scan runs to the end,
    and None when it aborts at the recorded witness.
    """

    n: int
    is_regular: bool
    is_ndr_definitional: bool
    is_ndr_pairwise: bool
    pair_histogram: dict[int, int] | None
    witness: tuple | None
    reason: str | None

    @property
    def is_ndr(self) -> bool:
        return self.is_ndr_definitional and self.is_ndr_pairwise

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "is_regular": self.is_regular,
            "is_ndr_definitional": self.is_ndr_definitional,
            "is_ndr_pairwise": self.is_ndr_pairwise,
            "pair_histogram": (
                {str(k): v for k, v in sorted(self.pair_histogram.items())}
                if self.pair_histogram is not None
                else None
            ),
            "witness": list(self.witness) if self.witness is not None else None,
            "reason": self.reason,
        }


def cayley_tournament(conn: ConnectionSet, label: str = "") -> Tournament:
    """Cayley tournament on the full group: arc u -> v iff v - u in D."""
    group, D = conn.group, conn.members
    n = group.order
    ind = np.zeros(n, dtype=np.uint8)
    ind[sorted(D)] = 1
    adj = np.empty((n, n), dtype=np.uint8)
    verts = np.arange(n, dtype=np.int64)
    for u in range(n):
        adj[u] = ind[group.sub_vector(verts, u)]
    if not label:
        shown = sorted(D)
        label = f"Cay({group.label}, {set(shown) if len(shown) <= 12 else f'|D|={len(shown)}'})"
    return Tournament(adj, label=label)


def cyclotomic_connection_set(field: FieldSpec) -> ConnectionSet:
    """D = union of the first 2^(ell-1) cyclotomic classes of index 2^ell."""
    e = 2**field.ell
    table = cyclotomic_classes(field, e)
    return ConnectionSet(field, table.union(range(e // 2)))


def cyclotomic_tournament(field: FieldSpec) -> Tournament:
    return cayley_tournament(cyclotomic_connection_set(field), label=f"CT_{field.q}")


def degree_profile(t: Tournament) -> DegreeProfile:
    """Out-degree sequence plus the regular / near-regular verdicts."""
    degs = t.out_degrees
    n = t.n
    if n % 2 == 1:
        regular = bool((degs == (n - 1) // 2).all())
        near = False
    else:
        regular = False
        near = bool(np.isin(degs, (n // 2, n // 2 - 1)).all())
    return DegreeProfile(degs, regular, near)


def common_out_neighbors(t: Tournament, u: int, v: int) -> int:
    """|{w : u -> w and v -> w}| by bitwise row intersection."""
    if u == v:
        raise SameVertex(f"need two distinct vertices, got {u} twice")
    rows = t.row_bits
    return (rows[u] & rows[v]).bit_count()


def _pair_count_blocks(t: Tournament):
    """Yield (start, block) where block[i, v] counts common out-neighbors."""
    A = t.adj.astype(np.float32)
    AT = np.ascontiguousarray(A.T)
    for i0 in range(0, t.n, _PAIR_BLOCK):
        block = A[i0 : i0 + _PAIR_BLOCK] @ AT
        yield i0, block.astype(np.int64)


def pair_profile(t: Tournament) -> PairProfile:
    """Full common-out-neighbor histogram over unordered pairs."""
    n = t.n
    ordered = np.zeros(n, dtype=np.int64)
    for i0, block in _pair_count_blocks(t):
        ordered += np.bincount(block.ravel(), minlength=n)
        diag = block[np.arange(block.shape[0]), np.arange(i0, i0 + block.shape[0])]
        ordered -= np.bincount(diag, minlength=n)
    hist = {int(v): int(c) // 2 for v, c in enumerate(ordered) if c}
    return PairProfile(n=n, histogram=hist)


def _induced_near_regular(adj: np.ndarray, idx: np.ndarray) -> int | None:
    """None if the induced subtournament is near-regular, else a bad vertex."""
    m = idx.size
    degs = adj[np.ix_(idx, idx)].sum(axis=1, dtype=np.int64)
    bad = np.flatnonzero(~np.isin(degs, (m // 2, m // 2 - 1)))
    return int(idx[bad[0]]) if bad.size else None


def ndr_check(t: Tournament) -> NdrCertificate:
    """Certify near-double-regularity via both characterizations.

    Sizes with n % 4 != 1 get an explanatory reason instead of an error so
    batch sweeps can record them uniformly.
    """
    n = t.n
    profile = degree_profile(t)
    base = dict(n=n, is_regular=profile.is_regular, pair_histogram=None, witness=None)
    if n % 4 != 1:
        return NdrCertificate(
            is_ndr_definitional=False,
            is_ndr_pairwise=False,
            reason=f"n = {n} is not 1 mod 4",
            **base,
        )
    if not profile.is_regular:
        return NdrCertificate(
            is_ndr_definitional=False,
            is_ndr_pairwise=False,
            reason="not regular",
            **base,
        )

    hi, lo = (n - 1) // 4, (n - 5) // 4

    pairwise_ok = True
    pair_witness = None
    ordered = np.zeros(n, dtype=np.int64)
    for i0, block in _pair_count_blocks(t):
        rows = np.arange(block.shape[0])
        block[rows, np.arange(i0, i0 + block.shape[0])] = lo  # mask the diagonal
        bad = ~np.isin(block, (lo, hi))
        if bad.any():
            u_off, v = np.argwhere(bad)[0]
            block[rows, np.arange(i0, i0 + block.shape[0])] = 0
            pairwise_ok = False
            pair_witness = (int(i0 + u_off), int(v), int(block[u_off, v]))
            break
        ordered += np.bincount(block.ravel(), minlength=n)
    histogram = None
    if pairwise_ok:
        ordered[lo] -= n  # remove the masked diagonal entries
        histogram = {int(v): int(c) // 2 for v, c in enumerate(ordered) if c}

    definitional_ok = True
    def_witness = None
    adj = t.adj
    for v in range(n):
        out_idx = np.flatnonzero(adj[v])
        in_idx = np.flatnonzero(adj[:, v])
        bad = _induced_near_regular(adj, out_idx)
        if bad is None:
            bad = _induced_near_regular(adj, in_idx)
        if bad is not None:
            definitional_ok = False
            def_witness = (v, bad)
            break

    base["witness"] = pair_witness if pair_witness is not None else def_witness
    base["pair_histogram"] = histogram
    return NdrCertificate(
        is_ndr_definitional=definitional_ok,
        is_ndr_pairwise=pairwise_ok,
        reason=None,
        **base,
    )
