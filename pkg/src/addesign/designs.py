"""Block-design parameters and the verification suite.

A 2-(v,k,lambda) design is a collection of k-subsets (blocks) of a
v-point set covering every point pair exactly lambda times.  Blocks are
stored as sorted tuples of point indices; the collection keeps multiset
semantics so that simplicity (absence of repeated blocks) is something
to verify, never to presume.

The checks come in independent flavours on purpose: balance can be
established both by per-block pair accumulation (`pair_coverage`) and
by brute-force subset enumeration (`subset_coverage`), and the test
suite plays the two against each other.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .geometry import Geometry, is_prime

# Offending pairs/blocks are reported up to this cap; histograms stay exact.
REPORT_CAP = 100

# Brute-force t-subset enumeration refuses beyond these bounds instead of
# sampling: exactness over heuristics.
MAX_SUBSET_T = 3
MAX_SUBSET_COUNT = 10**7


@dataclass(frozen=True)
class ParameterSet:
    """Parameters of a 2-design plus the derived counts.

    ``r`` (blocks through a fixed point) and ``b`` (total block count)
    are filled in exactly when the divisibility conditions hold; the set
    is ``admissible`` iff both are integers, in which case
    r = lambda*(v-1)/(k-1) and b = lambda*v*(v-1)/(k*(k-1)).
    """

    v: int
    k: int
    lam: int
    t: int = 2
    r: int | None = None
    b: int | None = None
    admissible: bool = False
    failure: str | None = None


def check_divisibility(v: int, k: int, lam: int, t: int = 2) -> ParameterSet:
    """Test the divisibility conditions for a t-(v,k,lambda) design.

    Rejection is a normal outcome (the returned set is marked
    inadmissible and names the failing condition); nonsensical inputs
    raise ValueError.
    """
    if not (v >= k >= 2 and lam >= 1):
        raise ValueError(f"need v >= k >= 2 and lambda >= 1, got ({v},{k},{lam})")
    if not 2 <= t <= k:
        raise ValueError(f"need 2 <= t <= k, got t={t}")
    # lambda_i = lam * C(v-i, t-i) / C(k-i, t-i) must be an integer for
    # every level i; at t=2 these are exactly lambda, r and b.
    levels: dict[int, int] = {}
    failure = None
    for i in range(t - 1, -1, -1):
        num = lam * comb(v - i, t - i)
        den = comb(k - i, t - i)
        if num % den:
            names = {0: "block count b", 1: "replication r"}
            what = names.get(i, f"level-{i} count")
            failure = (
                f"{what} = lambda*C(v-{i},{t - i})/C(k-{i},{t - i})"
                f" = {num}/{den} is not an integer"
            )
            break
        levels[i] = num // den
    if failure is not None:
        return ParameterSet(v=v, k=k, lam=lam, t=t, failure=failure)
    return ParameterSet(
        v=v, k=k, lam=lam, t=t, r=levels[1], b=levels[0], admissible=True
    )


def _canonical_block(block, v: int) -> tuple[int, ...]:
    pts = tuple(sorted(block))
    if len(set(pts)) != len(pts):
        raise ValueError(f"block {pts} has repeated points")
    if pts and not (0 <= pts[0] and pts[-1] < v):
        raise ValueError(f"block {pts} has points outside [0, {v})")
    return pts


@dataclass
class Design:
    """A block collection with multiset semantics.

    ``lam`` is the claimed balance (None when unknown); verification
    operations check claims, construction does not.  ``geometry`` is
    present when the point set is all of Z_p^n, which unlocks the
    additive checks.
    """

    v: int
    k: int
    blocks: list[tuple[int, ...]]
    lam: int | None = None
    geometry: Geometry | None = None

    def __post_init__(self) -> None:
        if self.geometry is not None and self.geometry.size != self.v:
            raise ValueError(
                f"v={self.v} does not match geometry of size {self.geometry.size}"
            )
        self.blocks = [_canonical_block(b, self.v) for b in self.blocks]
        for b in self.blocks:
            if len(b) != self.k:
                raise ValueError(f"block {b} has size {len(b)}, expected k={self.k}")

    @property
    def b(self) -> int:
        return len(self.blocks)


@dataclass
class CoverageReport:
    """Outcome of a coverage count over all t-subsets of points.

    ``histogram`` maps a coverage count to the number of t-subsets
    attaining it and always totals C(v,t).  ``offending`` lists up to
    REPORT_CAP subsets whose count differs from the target lambda.
    """

    t: int
    lam: int | None
    total_subsets: int
    histogram: dict[int, int]
    offending: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    truncated: bool = False

    @property
    def balanced(self) -> bool:
        return self.lam is not None and self.histogram == {self.lam: self.total_subsets}


def _offenders(counts: dict, v: int, t: int, lam: int):
    """Scan t-subsets in lex order for coverage != lam, capped."""
    out = []
    truncated = False
    for sub in itertools.combinations(range(v), t):
        c = counts.get(sub, 0)
        if c != lam:
            if len(out) == REPORT_CAP:
                truncated = True
                break
            out.append((sub, c))
    return out, truncated


def pair_coverage(design: Design, lam: int | None = None) -> CoverageReport:
    """Count, for every unordered point pair, the blocks containing it.

    Accumulates per block over its C(k,2) internal pairs, so the cost is
    b*C(k,2) rather than C(v,2)*b.
    """
    if lam is None:
        lam = design.lam
    counts: Counter = Counter()
    for block in design.blocks:
        for pair in itertools.combinations(block, 2):
            counts[pair] += 1
    total = comb(design.v, 2)
    histogram = dict(Counter(counts.values()))
    uncovered = total - len(counts)
    if uncovered:
        histogram[0] = histogram.get(0, 0) + uncovered
    report = CoverageReport(t=2, lam=lam, total_subsets=total, histogram=histogram)
    if lam is not None and not report.balanced:
        report.offending, report.truncated = _offenders(counts, design.v, 2, lam)
    return report


def subset_coverage(design: Design, t: int, lam: int | None = None) -> CoverageReport:
    """Brute-force coverage count over all t-subsets of the point set.

    Deliberately independent of `pair_coverage`: every t-subset is
    tested against every block.  Refuses t > 3 or more than 10^7
    subsets rather than silently sampling.
    """
    if not 1 <= t <= design.k:
        raise ValueError(f"need 1 <= t <= k={design.k}, got t={t}")
    if t > MAX_SUBSET_T:
        raise ValueError(f"brute-force enumeration is limited to t <= {MAX_SUBSET_T}")
    total = comb(design.v, t)
    if total > MAX_SUBSET_COUNT:
        raise ValueError(
            f"C({design.v},{t}) = {total} exceeds the enumeration bound {MAX_SUBSET_COUNT}"
        )
    if lam is None:
        lam = design.lam
    blocksets = [frozenset(b) for b in design.blocks]
    counts: dict[tuple[int, ...], int] = {}
    histogram: Counter = Counter()
    for sub in itertools.combinations(range(design.v), t):
        subset = frozenset(sub)
        c = sum(1 for b in blocksets if subset <= b)
        histogram[c] += 1
        if c:
            counts[sub] = c
    report = CoverageReport(
        t=t, lam=lam, total_subsets=total, histogram=dict(histogram)
    )
    if lam is not None and not report.balanced:
        report.offending, report.truncated = _offenders(counts, design.v, t, lam)
    return report


def check_t_design(design: Design, t: int = 2, lam: int | None = None) -> CoverageReport:
    """Is every t-subset contained in exactly ``lam`` blocks?

    t=2 runs the fast pair path; t=3 falls back to brute-force subset
    enumeration.  The report's ``balanced`` flag is the verdict.
    """
    if t > design.k:
        raise ValueError(f"t={t} exceeds block size k={design.k}")
    if lam is None:
        lam = design.lam
    if lam is None:
        raise ValueError("no lambda to check against: pass lam or set design.lam")
    if t == 2:
        return pair_coverage(design, lam)
    return subset_coverage(design, t, lam)


@dataclass
class SimplicityReport:
    simple: bool
    repeated: list[tuple[tuple[int, ...], int]]  # (block, multiplicity)


def check_simple(design: Design) -> SimplicityReport:
    """True iff all blocks are pairwise distinct as sets."""
    multiplicity = Counter(design.blocks)
    repeated = sorted((b, m) for b, m in multiplicity.items() if m > 1)
    return SimplicityReport(simple=not repeated, repeated=repeated)


@dataclass
class ZeroSumReport:
    ok: bool
    offending: list[tuple[int, ...]]
    truncated: bool = False


def check_zero_sum(design: Design) -> ZeroSumReport:
    """Do the points of every block sum to the zero vector of Z_p^n?

    A design passing this check on all of V = Z_p^n is strictly
    additive.  Requires geometry.
    """
    geom = design.geometry
    if geom is None:
        raise ValueError("zero-sum check needs a design with geometry")
    offending = []
    truncated = False
    for block in design.blocks:
        digits = geom._digits[list(block)].sum(axis=0) % geom.p
        if digits.any():
            if len(offending) == REPORT_CAP:
                truncated = True
                break
            offending.append(block)
    return ZeroSumReport(ok=not offending, offending=offending, truncated=truncated)


@dataclass(frozen=True)
class TwoLineSplit:
    """A decomposition of a 2p-block into two parallel lines."""

    direction: int
    bases: tuple[int, int]
    lines: tuple[tuple[int, ...], tuple[int, ...]]


def split_two_parallel_lines(block, geometry: Geometry) -> TwoLineSplit | None:
    """Split a 2p-set into two distinct parallel lines, if possible.

    Returns the decomposition with the line containing the smallest
    point first, or None when no direction works.  Blocks of the wrong
    size are an input error.
    """
    pts = _canonical_block(block, geometry.size)
    if len(pts) != 2 * geometry.p:
        raise ValueError(
            f"two-line blocks have size 2p = {2 * geometry.p}, got {len(pts)}"
        )
    members = set(pts)
    a = pts[0]
    for b in pts[1:]:
        first = geometry.line_through_pair(a, b)
        if not members.issuperset(first.points):
            continue
        rest = tuple(q for q in pts if q not in first.points)
        second = geometry.line(rest[0], first.direction)
        if set(rest) == set(second.points):
            return TwoLineSplit(
                direction=first.direction,
                bases=(first.base, second.base),
                lines=(first.points, second.points),
            )
    return None


@dataclass
class StructureReport:
    ok: bool
    offending: list[tuple[int, ...]]
    truncated: bool = False


def check_two_parallel_line_structure(design: Design) -> StructureReport:
    """Does every block split as a union of two parallel lines?"""
    geom = design.geometry
    if geom is None:
        raise ValueError("structure check needs a design with geometry")
    offending = []
    truncated = False
    for block in design.blocks:
        if split_two_parallel_lines(block, geom) is None:
            if len(offending) == REPORT_CAP:
                truncated = True
                break
            offending.append(block)
    return StructureReport(ok=not offending, offending=offending, truncated=truncated)


def affine_plane_two_line_design(q: int) -> Design:
    """All unions of two distinct parallel lines of AG(2,q), q prime.

    The q+1 parallel classes contribute C(q,2) blocks each, giving
    (q+1)*C(q,2) blocks of size 2q that form a 2-(q^2, 2q, 2q-1) design.
    For q=2 every block is the whole plane, so the design exists but is
    not simple.
    """
    if not is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    geom = Geometry(q, 2)
    blocks = []
    for d in geom.direction_representatives():
        lines = geom.parallel_class(d)
        for first, second in itertools.combinations(lines, 2):
            blocks.append(tuple(sorted(first.points + second.points)))
    blocks.sort()
    return Design(v=q * q, k=2 * q, blocks=blocks, lam=2 * q - 1, geometry=geom)


def intersection_profile(design: Design) -> set[int]:
    """Set of |B & B'| over all unordered pairs of distinct blocks.

    Blocks equal as sets count once, so a non-simple design is profiled
    over its distinct block sets.
    """
    masks = set()
    for block in design.blocks:
        m = 0
        for q in block:
            m |= 1 << q
        masks.add(m)
    ordered = sorted(masks)
    return {
        (m1 & m2).bit_count()
        for m1, m2 in itertools.combinations(ordered, 2)
    }


def expected_lambda(v: int, k: int, b: int) -> int | None:
    """Balance forced by counting if the design with b blocks is balanced.

    Every block covers C(k,2) pairs, so b*C(k,2) = lambda*C(v,2); returns
    None when that lambda is not an integer (no balanced design fits).
    """
    lam = Fraction(b * k * (k - 1), v * (v - 1))
    return int(lam) if lam.denominator == 1 else None
