"""Difference spectra, almost-difference-set certificates, and the NDR9 chain.

The difference spectrum of a candidate set D tallies, for every nonzero group
element a, how many ordered pairs (x, y) in D x D satisfy x - y = a.  D is an
(n, k, lambda) almost difference set when that tally takes the value lambda on
exactly (n-1)/2 nonzero elements and lambda + 1 on the rest.  ``low_set`` is
the set of elements attaining the smaller value.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .errors import NotAds, NotTwoValued, WrongSize, ZeroInD
from .field_core import FieldSpec, character_sum, cyclotomic_classes, make_field
from .tourney import ConnectionSet, CyclicGroup, cayley_tournament


@dataclass(frozen=True)
class DifferenceSpectrum:
    """Counts |{(x, y) in D x D : x - y = a}| for every group element a."""

    n: int
    members: tuple[int, ...]
    counts: np.ndarray = dc_field(repr=False)

    @cached_property
    def values(self) -> tuple[int, ...]:
        """Distinct counts over nonzero a, ascending."""
        return tuple(int(v) for v in np.unique(self.counts[1:]))

    @property
    def two_valued(self) -> bool:
        return len(self.values) == 2

    @property
    def lam(self) -> int | None:
        return self.values[0] if self.two_valued else None

    @cached_property
    def low_set(self) -> frozenset[int] | None:
        """Nonzero elements where the count attains the smaller value."""
        if not self.two_valued:
            return None
        lam = self.values[0]
        return frozenset(int(a) for a in np.flatnonzero(self.counts == lam) if a != 0)

    def count_of(self, a: int) -> int:
        return int(self.counts[a])

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "set": list(self.members),
            "values": list(self.values),
            "lambda": self.lam,
            "low_set": sorted(self.low_set) if self.low_set is not None else None,
        }


@dataclass(frozen=True)
class AdsCertificate:
    """Verdict of the (n, k, lambda) almost-difference-set test."""

    is_ads: bool
    n: int
    k: int
    lam: int
    split: tuple[int, int] | None
    classification: str
    spectrum: DifferenceSpectrum = dc_field(repr=False)

    def as_dict(self) -> dict:
        return {
            "is_ads": self.is_ads,
            "n": self.n,
            "k": self.k,
            "lambda": self.lam,
            "split": list(self.split) if self.split else None,
            "classification": self.classification,
        }


def difference_spectrum(group, members) -> DifferenceSpectrum:
    """Exact difference tally over all ordered pairs from the candidate set."""
    D = sorted(int(x) for x in members)
    if 0 in D:
        raise ZeroInD("candidate set must exclude the group identity")
    arr = np.array(D, dtype=np.int64)
    diffs = group.diff_matrix(arr, arr)
    counts = np.bincount(diffs.ravel(), minlength=group.order)
    return DifferenceSpectrum(n=group.order, members=tuple(D), counts=counts)


def classify_low_set(field: FieldSpec, spectrum: DifferenceSpectrum) -> str:
    """Compare the low set against the quadratic classes of the field.

    Returns "squares", "nonsquares", or "other".  The shortcut "1 is in the
    low set iff it equals the squares" is cross-checked against the full set
    comparison whenever the comparison lands on a quadratic class.
    """
    if not spectrum.two_valued:
        raise NotTwoValued(f"difference counts take values {spectrum.values}")
    squares = cyclotomic_classes(field, 2).classes[0]
    low = spectrum.low_set
    if low == squares:
        result = "squares"
    elif low == frozenset(range(1, field.q)) - squares:
        result = "nonsquares"
    else:
        return "other"
    shortcut = "squares" if 1 in low else "nonsquares"
    if shortcut != result:  # pragma: no cover
        raise AssertionError("low-set shortcut disagrees with full comparison")
    return result


def is_almost_difference_set(group, members, k: int, lam: int) -> AdsCertificate:
    """Certify that the candidate is an (n, k, lambda) almost difference set."""
    D = set(int(x) for x in members)
    if len(D) != k:
        raise WrongSize(f"|D| = {len(D)} but k = {k}")
    spec = difference_spectrum(group, D)
    n = group.order
    split = None
    ok = False
    if spec.two_valued and spec.values == (lam, lam + 1):
        split = (len(spec.low_set), n - 1 - len(spec.low_set))
        ok = split[0] == (n - 1) // 2
    if isinstance(group, FieldSpec) and spec.two_valued:
        classification = classify_low_set(group, spec)
    else:
        classification = "not_applicable"
    return AdsCertificate(
        is_ads=ok, n=n, k=k, lam=lam, split=split, classification=classification, spectrum=spec
    )


def verify_character_identity(field: FieldSpec, members, spectrum: DifferenceSpectrum | None = None) -> float:
    """Max deviation, over all nontrivial characters psi_a, of the identity

        |sum over D of psi_a|^2  =  (k - lambda - 1) - sum over low_set of psi_a.

    The candidate must be a certified almost difference set.
    """
    D = sorted(int(x) for x in members)
    if spectrum is None:
        spectrum = difference_spectrum(field, D)
    if not spectrum.two_valued:
        raise NotAds(f"difference counts take values {spectrum.values}, need exactly two")
    if len(spectrum.low_set) != (field.q - 1) // 2:
        raise NotAds("low set does not cover half the nonzero elements")
    k = len(D)
    lam = spectrum.lam
    low = sorted(spectrum.low_set)
    worst = 0.0
    for a in range(1, field.q):
        lhs = abs(character_sum(field, a, D)) ** 2
        rhs = (k - lam - 1) - character_sum(field, a, low)
        worst = max(worst, abs(lhs - rhs))
    return worst


@dataclass(frozen=True)
class SzekeresChain:
    """The quadratic-residue construction of the 9-vertex rotational NDR.

    Intersecting the squares of GF(19) with their shift by one and reading the
    result through the discrete log base 4 (the square of the primitive root)
    yields a (9, 4, 1) almost difference set of Z/9Z; multiplying by 4 mod 9
    carries it onto the classical connection set {1, 2, 3, 5}.
    """

    intersection_f19: frozenset[int]
    transported_z9: frozenset[int]
    multiplier: int
    image_z9: frozenset[int]
    ads: AdsCertificate
    isomorphism: tuple[int, ...]
    isomorphism_certified: bool

    def as_dict(self) -> dict:
        return {
            "f19_squares_shift_intersection": sorted(self.intersection_f19),
            "z9_set": sorted(self.transported_z9),
            "multiplier": self.multiplier,
            "mapped_set": sorted(self.image_z9),
            "ads": self.ads.as_dict(),
            "isomorphism": list(self.isomorphism),
            "isomorphism_certified": self.isomorphism_certified,
        }


def szekeres_ndr9() -> SzekeresChain:
    """Build the (9, 4, 1) almost difference set from GF(19) and certify it."""
    f19 = make_field(19)
    squares = cyclotomic_classes(f19, 2).classes[0]
    shifted = frozenset((x + 1) % 19 for x in squares)
    inter = squares & shifted

    # The squares form a cyclic group of order 9 generated by g^2 = 4; the
    # discrete log base 4 is the group isomorphism onto Z/9Z.
    log = f19.log_table
    transported = frozenset(int(log[x]) // 2 % 9 for x in inter)

    mult = 4
    image = frozenset(mult * x % 9 for x in transported)

    z9 = CyclicGroup(9)
    cert = is_almost_difference_set(z9, transported, 4, 1)

    t_trans = cayley_tournament(ConnectionSet(z9, transported))
    t_image = cayley_tournament(ConnectionSet(z9, image))
    perm = tuple(mult * x % 9 for x in range(9))
    perm_arr = np.array(perm)
    certified = bool(
        np.array_equal(t_image.adj[np.ix_(perm_arr, perm_arr)], t_trans.adj)
    )
    return SzekeresChain(
        intersection_f19=frozenset(int(x) for x in inter),
        transported_z9=transported,
        multiplier=mult,
        image_z9=image,
        ads=cert,
        isomorphism=perm,
        isomorphism_certified=certified,
    )
