"""Exact arithmetic over Z_q: difference sets, iterated sumsets, and a
budgeted search for generator sets whose differences cover all of Z_q while
every small sumset avoids zero.

A subset of Z_q is stored as a characteristic bit-vector packed into one
Python int, so difference sets and sumsets reduce to shift-and-or
convolutions: O(q^2 / wordsize) per sumset level.
"""

from __future__ import annotations

import concurrent.futures
import random
from dataclasses import dataclass, replace
from math import gcd, isqrt
from typing import Iterable, Union

__all__ = [
    "ResidueSet",
    "HaightCertificate",
    "SearchSpec",
    "SearchExhausted",
    "difference_set",
    "iterated_sumset",
    "is_complete_difference_set",
    "satisfies_haight",
    "shift_set",
    "search_haight_set",
]


@dataclass(frozen=True)
class ResidueSet:
    """Subset of Z_q; bit r of ``bits`` is set iff residue r is a member."""

    modulus: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if self.bits < 0 or self.bits >> self.modulus != 0:
            raise ValueError("bit-vector has members outside [0, modulus)")

    @classmethod
    def from_members(cls, modulus: int, members: Iterable[int]) -> "ResidueSet":
        bits = 0
        for r in members:
            if not 0 <= r < modulus:
                raise ValueError(f"residue {r} outside [0, {modulus})")
            bits |= 1 << r
        return cls(modulus, bits)

    def members(self) -> tuple[int, ...]:
        return tuple(r for r in range(self.modulus) if self.bits >> r & 1)

    def __contains__(self, r: object) -> bool:
        return isinstance(r, int) and 0 <= r < self.modulus and bool(self.bits >> r & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self):
        return iter(self.members())


@dataclass(frozen=True)
class HaightCertificate:
    """A set Y in Z_q with Y-Y = Z_q and 0 not in (s)Y for 1 <= s < kappa.

    ``verified`` is set only after both conditions have been re-checked from
    scratch on the stored member list.
    """

    modulus: int
    y: ResidueSet
    kappa: int
    verified: bool = False
    candidates_evaluated: int = 0


@dataclass(frozen=True)
class SearchSpec:
    """Parameters for :func:`search_haight_set`."""

    kappa: int
    q_min: int
    q_max: int
    budget: int = 1_000_000
    seed: int = 0
    mode: str = "exhaustive"

    def __post_init__(self) -> None:
        if self.kappa < 2:
            raise ValueError(f"kappa must be >= 2, got {self.kappa}")
        if not 1 <= self.q_min <= self.q_max:
            raise ValueError(f"need 1 <= q_min <= q_max, got [{self.q_min}, {self.q_max}]")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.mode not in ("exhaustive", "randomized"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class SearchExhausted:
    """No candidate passed within the budget; says nothing about existence."""

    candidates_evaluated: int


# ---------------------------------------------------------------------------
# Set operations
# ---------------------------------------------------------------------------


def _rot(bits: int, shift: int, q: int) -> int:
    """Rotate a q-bit vector left by ``shift``: residue r maps to r+shift mod q."""
    shift %= q
    if shift == 0:
        return bits
    mask = (1 << q) - 1
    return ((bits << shift) | (bits >> (q - shift))) & mask


def _diff_bits(bits: int, q: int) -> int:
    out = 0
    b = bits
    while b:
        r = (b & -b).bit_length() - 1
        out |= _rot(bits, q - r, q)
        b &= b - 1
    return out


def _sumset_step(acc: int, bits: int, q: int) -> int:
    out = 0
    b = bits
    while b:
        r = (b & -b).bit_length() - 1
        out |= _rot(acc, r, q)
        b &= b - 1
    return out


def difference_set(y: ResidueSet) -> ResidueSet:
    """Return { (a - b) mod q : a, b in Y }; empty for empty Y."""
    return ResidueSet(y.modulus, _diff_bits(y.bits, y.modulus))


def iterated_sumset(y: ResidueSet, s: int) -> ResidueSet:
    """Return (s)Y, all sums of s members with repetition, reduced mod q.

    Computed iteratively as (s)Y = (s-1)Y (+) Y. Rejects s = 0, which is
    undefined here.
    """
    if s < 1:
        raise ValueError(f"sumset order must be >= 1, got {s}")
    acc = y.bits
    for _ in range(s - 1):
        acc = _sumset_step(acc, y.bits, y.modulus)
    return ResidueSet(y.modulus, acc)


def is_complete_difference_set(y: ResidueSet) -> bool:
    """True iff Y - Y covers every residue of Z_q."""
    return _diff_bits(y.bits, y.modulus) == (1 << y.modulus) - 1


def satisfies_haight(y: ResidueSet, kappa: int) -> bool:
    """True iff Y - Y = Z_q and 0 is not in (s)Y for every 1 <= s <= kappa-1.

    The s = 1 level forces 0 not in Y itself.
    """
    if kappa < 2:
        raise ValueError(f"kappa must be >= 2, got {kappa}")
    return _passes(y.modulus, y.bits, kappa)


def shift_set(x: ResidueSet, y: int) -> ResidueSet:
    """Return { (a - y) mod q : a in X }; preserves the difference set exactly."""
    if not 0 <= y < x.modulus:
        raise ValueError(f"shift {y} outside [0, {x.modulus})")
    return ResidueSet(x.modulus, _rot(x.bits, x.modulus - y, x.modulus))


def _passes(q: int, bits: int, kappa: int) -> bool:
    if _diff_bits(bits, q) != (1 << q) - 1:
        return False
    acc = bits
    for _ in range(kappa - 1):
        if acc & 1:
            return False
        acc = _sumset_step(acc, bits, q)
    return True


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


def _units(q: int) -> list[int]:
    return [u for u in range(1, q) if gcd(u, q) == 1]


def _scale_bits(bits: int, u: int, q: int) -> int:
    out = 0
    b = bits
    while b:
        r = (b & -b).bit_length() - 1
        out |= 1 << (r * u % q)
        b &= b - 1
    return out


def _is_canonical(bits: int, q: int, units: list[int]) -> bool:
    # Unit scaling preserves both conditions, so only the least representative
    # of {uY : gcd(u, q) = 1} is evaluated. Shifting is not a symmetry here.
    for u in units[1:]:
        if _scale_bits(bits, u, q) < bits:
            return False
    return True


def _objective(q: int, bits: int, kappa: int) -> int:
    """Missing differences plus violated sumset levels; zero iff Y qualifies."""
    missing = q - _diff_bits(bits, q).bit_count()
    violated = 0
    acc = bits
    for _ in range(kappa - 1):
        if acc & 1:
            violated += 1
        acc = _sumset_step(acc, bits, q)
    return missing + violated


def _min_size(q: int) -> int:
    # Need |Y| * (|Y| - 1) + 1 >= q for the differences to have a chance.
    k = (1 + isqrt(4 * q - 3)) // 2
    while k * (k - 1) + 1 < q:
        k += 1
    return k


def _verified_certificate(q: int, bits: int, kappa: int, evaluated: int) -> HaightCertificate:
    fresh = ResidueSet.from_members(q, [r for r in range(q) if bits >> r & 1])
    if not satisfies_haight(fresh, kappa):
        raise AssertionError("search produced a candidate that fails re-verification")
    return HaightCertificate(q, fresh, kappa, verified=True, candidates_evaluated=evaluated)


def _search_exhaustive(spec: SearchSpec) -> Union[HaightCertificate, SearchExhausted]:
    evaluated = 0
    for q in range(max(spec.q_min, 2), spec.q_max + 1):
        units = _units(q)
        for bits in range(1, 1 << q):
            if not _is_canonical(bits, q, units):
                continue
            if evaluated >= spec.budget:
                return SearchExhausted(evaluated)
            evaluated += 1
            if _passes(q, bits, spec.kappa):
                return _verified_certificate(q, bits, spec.kappa, evaluated)
    return SearchExhausted(evaluated)


def _hill_climb(q: int, kappa: int, rng: random.Random, budget_left: int) -> tuple[int, int]:
    """One seeded steepest-descent restart over single-element swaps.

    Returns (bits or 0, evaluations spent). 0 residues are never used as
    members: they fail the s = 1 level outright.
    """
    spent = 0
    size = min(q - 1, _min_size(q) + rng.randrange(3))
    members = set(rng.sample(range(1, q), size))
    bits = 0
    for r in members:
        bits |= 1 << r
    if spent >= budget_left:
        return 0, spent
    spent += 1
    score = _objective(q, bits, kappa)
    while score > 0:
        best = None
        for a in sorted(members):
            for b in range(1, q):
                if b in members:
                    continue
                cand = bits ^ (1 << a) | (1 << b)
                if spent >= budget_left:
                    return 0, spent
                spent += 1
                cand_score = _objective(q, cand, kappa)
                if cand_score < score and (best is None or cand_score < best[0]):
                    best = (cand_score, a, b, cand)
        if best is None:
            return 0, spent  # local minimum
        score, a, b, bits = best
        members.remove(a)
        members.add(b)
    return bits, spent


def _search_randomized(spec: SearchSpec) -> Union[HaightCertificate, SearchExhausted]:
    qs = [q for q in range(max(spec.q_min, 2), spec.q_max + 1) if _min_size(q) <= q - 1]
    if not qs:
        return SearchExhausted(0)
    rngs = {q: random.Random((spec.seed + 1) * 0x9E3779B97F4A7C15 + q) for q in qs}
    evaluated = 0
    while evaluated < spec.budget:
        progressed = False
        for q in qs:
            left = spec.budget - evaluated
            if left <= 0:
                break
            bits, spent = _hill_climb(q, spec.kappa, rngs[q], left)
            evaluated += spent
            if spent:
                progressed = True
            if bits:
                return _verified_certificate(q, bits, spec.kappa, evaluated)
        if not progressed:
            break
    return SearchExhausted(evaluated)


def _search_one(spec: SearchSpec) -> Union[HaightCertificate, SearchExhausted]:
    if spec.mode == "exhaustive":
        return _search_exhaustive(spec)
    return _search_randomized(spec)


def search_haight_set(
    spec: SearchSpec, workers: int = 1
) -> Union[HaightCertificate, SearchExhausted]:
    """Search Z_q for q in [q_min, q_max] for a set certified by ``kappa``.

    Exhaustive mode enumerates subsets of each Z_q in increasing bit-vector
    order, pruning unit-scaling duplicates; randomized mode runs seeded
    steepest-descent restarts round-robin over the moduli. Every returned
    certificate has been re-checked from scratch. SearchExhausted means
    "not found within budget", never "does not exist". q = 1 is skipped:
    no subset of Z_1 can avoid zero and still have complete differences.

    With ``workers > 1`` the modulus range is split across processes with an
    even budget split; any verified certificate may be returned.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or spec.q_min == spec.q_max:
        return _search_one(spec)

    qs = list(range(max(spec.q_min, 2), spec.q_max + 1))
    if not qs:
        return SearchExhausted(0)
    share, extra = divmod(spec.budget, len(qs))
    subspecs = []
    for idx, q in enumerate(qs):
        sub_budget = share + (1 if idx < extra else 0)
        if sub_budget < 1:
            continue
        subspecs.append(replace(spec, q_min=q, q_max=q, budget=sub_budget))
    evaluated = 0
    pool = concurrent.futures.ProcessPoolExecutor(max_workers=workers)
    try:
        futures = [pool.submit(_search_one, sub) for sub in subspecs]
        for fut in concurrent.futures.as_completed(futures):
            result = fut.result()
            if isinstance(result, HaightCertificate):
                return result
            evaluated += result.candidates_evaluated
    finally:
        pool.shutdown(wait=False, cancel_futures=True)
    return SearchExhausted(evaluated)
