"""Translation-group machinery over Z_p^n.

The group acts on itself by translation, hence on blocks.  A base block
develops into the design whose blocks are its distinct translates; the
pair coverage of such a design is governed entirely by the block's
difference vector

    N_B(d) = #{(a, b) in B x B : b - a = d},   d != 0,

via the coverage law: the pair {u, u+d} lies in exactly
N_B(d) / |stab(B)| translates of B, independently of u.  This is what
lets the family search run on 80 difference counts instead of 3240
point pairs, and what the verification suite cross-checks by brute
force.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .designs import Design, expected_lambda, split_two_parallel_lines
from .geometry import Geometry


def make_base_block(geometry: Geometry, x: int, y: int) -> tuple[int, ...]:
    """The 2p-set {0, x, 2x, ...} union {y, x+y, 2x+y, ...}.

    ``x`` must be nonzero and ``y`` outside the subgroup spanned by x,
    so the two lines are distinct and parallel.
    """
    if x == 0:
        raise ValueError("x must be nonzero")
    first = geometry.line(0, x)
    if y in first.points:
        raise ValueError(f"y={y} lies in the line spanned by x={x}")
    second = geometry.line(y, x)
    return tuple(sorted(first.points + second.points))


def translation_stabilizer(geometry: Geometry, block) -> tuple[int, ...]:
    """All g with block + g = block, as a sorted point tuple.

    Any stabilizing g maps the first point somewhere inside the block,
    so only |block| candidates need testing.
    """
    pts = tuple(sorted(block))
    if not pts:
        raise ValueError("empty block has no well-defined stabilizer")
    members = set(pts)
    stab = []
    for b in pts:
        g = geometry.sub(b, pts[0])
        if all(geometry.add(q, g) in members for q in pts):
            stab.append(g)
    return tuple(sorted(stab))


def orbit(geometry: Geometry, block) -> list[tuple[int, ...]]:
    """All distinct translates of the block, sorted."""
    pts = tuple(sorted(block))
    seen = {geometry.translate(pts, g) for g in geometry.all_points()}
    return sorted(seen)


def canonical_rep(geometry: Geometry, block) -> tuple[int, ...]:
    """Lexicographically smallest translate, as a sorted index tuple.

    The minimum is attained by a translate containing 0 (a sorted tuple
    starting with 0 beats any other), so only the |block| translates
    block - b need comparing.  Idempotent and constant on orbits.
    """
    pts = tuple(sorted(block))
    if not pts:
        return pts
    return min(geometry.translate(pts, geometry.neg(b)) for b in pts)


def difference_vector(geometry: Geometry, block) -> dict[int, int]:
    """N_B(d) over nonzero d: counts of ordered in-block differences.

    Always satisfies sum_d N_B(d) = k(k-1) and N_B(d) = N_B(-d).
    """
    pts = tuple(sorted(block))
    diffs: Counter = Counter()
    for a, b in itertools.permutations(pts, 2):
        diffs[geometry.sub(b, a)] += 1
    return dict(diffs)


@dataclass(frozen=True)
class OrbitRep:
    """A canonical two-parallel-line base block with its orbit data.

    ``block`` is the canonical representative (the orbit's sort key),
    ``direction`` the canonicalized common line direction, ``sparse``
    the difference support as (d, N(d)) pairs and ``dense`` the full
    length-(p^n - 1) difference vector indexed by d-1.  The two views
    always agree; the search touches only the sparse one.
    """

    block: tuple[int, ...]
    direction: int
    stabilizer: tuple[int, ...]
    orbit_size: int
    sparse: tuple[tuple[int, int], ...]
    dense: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.sparse)


def orbit_rep(geometry: Geometry, block) -> OrbitRep:
    """Canonicalize a two-parallel-line block into its OrbitRep."""
    canon = canonical_rep(geometry, block)
    split = split_two_parallel_lines(canon, geometry)
    if split is None:
        raise ValueError(f"{canon} is not a union of two parallel lines")
    stab = translation_stabilizer(geometry, canon)
    diffs = difference_vector(geometry, canon)
    dense = tuple(diffs.get(d, 0) for d in range(1, geometry.size))
    sparse = tuple(sorted(diffs.items()))
    return OrbitRep(
        block=canon,
        direction=split.direction,
        stabilizer=stab,
        orbit_size=geometry.size // len(stab),
        sparse=sparse,
        dense=dense,
    )


@dataclass(frozen=True)
class Family:
    """An ordered duplicate-free collection of orbit representatives."""

    geometry: Geometry
    reps: tuple[OrbitRep, ...]

    def __post_init__(self) -> None:
        keys = [r.block for r in self.reps]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ValueError("family reps must be strictly increasing by canonical key")

    @property
    def size(self) -> int:
        return len(self.reps)


def family_from_blocks(geometry: Geometry, blocks) -> Family:
    """Build a Family from raw blocks, canonicalizing and sorting."""
    reps = sorted((orbit_rep(geometry, b) for b in blocks), key=lambda r: r.block)
    for a, b in zip(reps, reps[1:]):
        if a.block == b.block:
            raise ValueError(f"duplicate orbit {a.block} in family")
    return Family(geometry=geometry, reps=tuple(reps))


def develop(family: Family) -> Design:
    """Union of the G-orbits of all reps, kept as a multiset of blocks.

    Distinct orbits are disjoint, but simplicity is still something the
    caller verifies, not something this function asserts.  The claimed
    lambda is the one forced by counting, when integral.
    """
    geom = family.geometry
    sizes = {len(r.block) for r in family.reps}
    if len(sizes) > 1:
        raise ValueError(f"family mixes block sizes {sorted(sizes)}")
    blocks: list[tuple[int, ...]] = []
    for rep in family.reps:
        blocks.extend(orbit(geom, rep.block))
    k = sizes.pop() if sizes else 2 * geom.p
    lam = expected_lambda(geom.size, k, len(blocks)) if blocks else None
    return Design(v=geom.size, k=k, blocks=blocks, lam=lam, geometry=geom)


def enumerate_candidate_orbits(geometry: Geometry) -> list[OrbitRep]:
    """One OrbitRep per translation orbit of two-parallel-line blocks.

    Every orbit contains a translate whose first line is the subgroup
    <x> itself, so it suffices to pair <x> with each other line of its
    parallel class and canonicalize.  Sorted by canonical key.  Only
    p=3 blocks (6-sets) are supported.
    """
    if geometry.p != 3:
        raise ValueError(f"candidate enumeration supports p=3 only, got p={geometry.p}")
    reps: dict[tuple[int, ...], OrbitRep] = {}
    for d in geometry.direction_representatives():
        lines = geometry.parallel_class(d)
        base = lines[0].points  # the subgroup <d>: the class line through 0
        for other in lines[1:]:
            block = tuple(sorted(base + other.points))
            canon = canonical_rep(geometry, block)
            if canon not in reps:
                reps[canon] = orbit_rep(geometry, canon)
    return [reps[key] for key in sorted(reps)]


def pair_coverage_by_difference(family: Family) -> dict[int, int]:
    """Predicted coverage of any pair {u, u+d}, for each nonzero d.

    This is the coverage-law side: sum over reps of N_B(d)/|stab(B)|.
    The brute-force side lives in `designs.pair_coverage`; the two are
    never allowed to share code.
    """
    size = family.geometry.size
    coverage = dict.fromkeys(range(1, size), 0)
    for rep in family.reps:
        s = len(rep.stabilizer)
        for d, count in rep.sparse:
            if count % s:
                raise AssertionError(
                    f"N_B({d})={count} not divisible by stabilizer order {s}"
                )
            coverage[d] += count // s
    return coverage
