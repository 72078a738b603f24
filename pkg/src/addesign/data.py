"""Bundled base blocks of the reference simple 2-(81,6,2) design.

The sixteen 6-subsets of Z_3^4 below develop, under translation, into a
simple strictly additive 2-(81,6,2) design with 432 = 27*16 blocks.
Each is of the form {0, x, 2x} union {y, x+y, 2x+y}: the x-line first,
then the y-line.  The table is the reproduction target and therefore
ships as literal data guarded by a digest, independent of the search
that can rediscover such families.
"""

from __future__ import annotations

import hashlib

from .geometry import Geometry
from .orbits import Family, family_from_blocks

REFERENCE_BASE_BLOCKS: tuple[tuple[tuple[int, int, int, int], ...], ...] = (
    ((0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 2), (0, 1, 0, 0), (0, 1, 0, 1), (0, 1, 0, 2)),
    ((0, 0, 0, 0), (0, 0, 1, 1), (0, 0, 2, 2), (2, 1, 0, 0), (2, 1, 1, 1), (2, 1, 2, 2)),
    ((0, 0, 0, 0), (0, 1, 1, 1), (0, 2, 2, 2), (0, 0, 1, 0), (0, 1, 2, 1), (0, 2, 0, 2)),
    ((0, 0, 0, 0), (0, 1, 2, 0), (0, 2, 1, 0), (2, 0, 2, 1), (2, 1, 1, 1), (2, 2, 0, 1)),
    ((0, 0, 0, 0), (1, 0, 0, 0), (2, 0, 0, 0), (0, 2, 2, 1), (1, 2, 2, 1), (2, 2, 2, 1)),
    ((0, 0, 0, 0), (1, 0, 1, 0), (2, 0, 2, 0), (0, 1, 0, 0), (1, 1, 1, 0), (2, 1, 2, 0)),
    ((0, 0, 0, 0), (1, 0, 1, 1), (2, 0, 2, 2), (0, 0, 2, 0), (1, 0, 0, 1), (2, 0, 1, 2)),
    ((0, 0, 0, 0), (1, 0, 2, 0), (2, 0, 1, 0), (0, 2, 1, 1), (1, 2, 0, 1), (2, 2, 2, 1)),
    ((0, 0, 0, 0), (1, 0, 2, 2), (2, 0, 1, 1), (0, 1, 2, 1), (1, 1, 1, 0), (2, 1, 0, 2)),
    ((0, 0, 0, 0), (1, 1, 0, 0), (2, 2, 0, 0), (0, 2, 0, 1), (1, 0, 0, 1), (2, 1, 0, 1)),
    ((0, 0, 0, 0), (1, 1, 0, 1), (2, 2, 0, 2), (0, 2, 2, 0), (1, 0, 2, 1), (2, 1, 2, 2)),
    ((0, 0, 0, 0), (1, 1, 2, 0), (2, 2, 1, 0), (0, 0, 2, 1), (1, 1, 1, 1), (2, 2, 0, 1)),
    ((0, 0, 0, 0), (1, 1, 2, 1), (2, 2, 1, 2), (0, 2, 1, 1), (1, 0, 0, 2), (2, 1, 2, 0)),
    ((0, 0, 0, 0), (1, 1, 2, 2), (2, 2, 1, 1), (0, 2, 2, 0), (1, 0, 1, 2), (2, 1, 0, 1)),
    ((0, 0, 0, 0), (1, 2, 1, 2), (2, 1, 2, 1), (0, 0, 2, 1), (1, 2, 0, 0), (2, 1, 1, 2)),
    ((0, 0, 0, 0), (1, 2, 2, 0), (2, 1, 1, 0), (0, 2, 2, 1), (1, 1, 1, 1), (2, 0, 0, 1)),
)

# Digest of the flattened digit table; recomputed on every access so that
# silent data drift aborts loudly instead of corrupting downstream results.
REFERENCE_BLOCKS_SHA256 = (
    "155c9f0bcb0d00ddd97d1403d858e3568d0f2fe23e46e748a26f184ca9fca5e0"
)


def _digest(table) -> str:
    flat = ",".join(str(d) for block in table for pt in block for d in pt)
    return hashlib.sha256(flat.encode("ascii")).hexdigest()


def reference_base_blocks() -> tuple[tuple[tuple[int, int, int, int], ...], ...]:
    """The 16 base blocks, after an integrity self-check."""
    got = _digest(REFERENCE_BASE_BLOCKS)
    if got != REFERENCE_BLOCKS_SHA256:
        raise RuntimeError(
            f"embedded base-block table is corrupted: sha256 {got} != expected"
        )
    return REFERENCE_BASE_BLOCKS


def reference_geometry() -> Geometry:
    return Geometry(3, 4)


def reference_family(geometry: Geometry | None = None) -> Family:
    """The bundled family as canonical orbit representatives."""
    geom = geometry if geometry is not None else reference_geometry()
    blocks = [
        tuple(geom.encode(pt) for pt in block) for block in reference_base_blocks()
    ]
    return family_from_blocks(geom, blocks)
