"""Arithmetic and affine line geometry of the vector space Z_p^n, p prime.

Points are the p^n coordinate vectors with entries in [0, p), identified
throughout with their base-p index, most significant coordinate first:
(2,1,0,2) in Z_3^4 has index 2*27 + 1*9 + 0*3 + 2 = 65.  Lines are the
cosets of the 1-dimensional subspaces; every line has exactly p points,
and the lines of a fixed direction partition the point set into p^(n-1)
parallel classes.

A Geometry instance precomputes per-point digit vectors (tables of size
p^n; geometries too large for such tables are rejected) and is immutable
afterwards, so instances can be shared freely between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

# Dense per-point tables cap the supported size, not the index width.
_MAX_POINTS = 1 << 24


def is_prime(p: int) -> bool:
    """Deterministic trial division; fine for the small moduli used here."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Line:
    """A line of AG(n, p) in canonical form.

    ``direction`` is the canonical representative of the scalar class
    {d, 2d, ..., (p-1)d} (its member of smallest index), ``base`` the
    smallest point on the line, and ``points`` the sorted point tuple.
    Two lines are equal iff they are equal as point sets.
    """

    base: int
    direction: int
    points: tuple[int, ...]

    def __contains__(self, point: int) -> bool:
        return point in self.points


class Geometry:
    """The additive group Z_p^n with its point/line arithmetic."""

    def __init__(self, p: int, n: int):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if n < 1:
            raise ValueError(f"n must be a positive integer, got {n}")
        size = p**n
        if size > _MAX_POINTS:
            raise ValueError(f"p^n = {size} exceeds the dense-table limit {_MAX_POINTS}")
        self.p = p
        self.n = n
        self.size = size
        self.zero = 0
        # Row i holds the digits of point i; itertools.product in this
        # orientation enumerates indices 0, 1, 2, ... in order.
        self._digits = np.array(
            list(itertools.product(range(p), repeat=n)), dtype=np.int64
        )
        self._places = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self._neg = ((-self._digits) % p) @ self._places

    def __repr__(self) -> str:
        return f"Geometry(p={self.p}, n={self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Geometry) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    # -- point arithmetic ---------------------------------------------------

    def _check_point(self, a: int) -> None:
        if not 0 <= a < self.size:
            raise ValueError(f"point index {a} out of range [0, {self.size})")

    def encode(self, coords) -> int:
        """Index of the point with the given digit tuple."""
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        index = 0
        for c in coords:
            if not 0 <= c < self.p:
                raise ValueError(f"coordinate {c} out of range [0, {self.p})")
            index = index * self.p + c
        return index

    def decode(self, a: int) -> tuple[int, ...]:
        """Digit tuple of point ``a``, most significant coordinate first."""
        self._check_point(a)
        return tuple(int(d) for d in self._digits[a])

    def add(self, a: int, b: int) -> int:
        self._check_point(a)
        self._check_point(b)
        return int(((self._digits[a] + self._digits[b]) % self.p) @ self._places)

    def neg(self, a: int) -> int:
        self._check_point(a)
        return int(self._neg[a])

    def sub(self, a: int, b: int) -> int:
        self._check_point(a)
        self._check_point(b)
        return int(((self._digits[a] - self._digits[b]) % self.p) @ self._places)

    def scale(self, c: int, a: int) -> int:
        self._check_point(a)
        return int(((c % self.p) * self._digits[a] % self.p) @ self._places)

    def translate(self, points, g: int) -> tuple[int, ...]:
        """Sorted tuple of ``point + g`` over the given points."""
        self._check_point(g)
        idx = np.fromiter(points, dtype=np.int64)
        shifted = ((self._digits[idx] + self._digits[g]) % self.p) @ self._places
        shifted.sort()
        return tuple(int(x) for x in shifted)

    def point_str(self, a: int) -> str:
        """Comma-free digit string for p <= 9, bracketed tuple otherwise."""
        coords = self.decode(a)
        if self.p <= 9:
            return "".join(str(c) for c in coords)
        return "(" + ",".join(str(c) for c in coords) + ")"

    def all_points(self) -> range:
        return range(self.size)

    # -- lines and parallel classes ------------------------------------------

    def direction_rep(self, d: int) -> int:
        """Smallest-index member of the scalar class {d, 2d, ..., (p-1)d}."""
        self._check_point(d)
        if d == 0:
            raise ValueError("the zero point spans no direction")
        return min(self.scale(c, d) for c in range(1, self.p))

    def line(self, base: int, direction: int) -> Line:
        """The line {base + i*direction : 0 <= i < p}.

        The result depends only on the point set: replacing ``direction``
        by a nonzero scalar multiple, or ``base`` by any point of the
        line, yields an equal Line.
        """
        self._check_point(base)
        if direction == 0:
            raise ValueError("line direction must be nonzero")
        self._check_point(direction)
        steps = (
            self._digits[base] + np.arange(self.p)[:, None] * self._digits[direction]
        ) % self.p
        points = np.sort(steps @ self._places)
        pts = tuple(int(x) for x in points)
        return Line(base=pts[0], direction=self.direction_rep(direction), points=pts)

    def line_through_pair(self, a: int, b: int) -> Line:
        """The unique line through two distinct points."""
        if a == b:
            raise ValueError("two distinct points are needed to span a line")
        return self.line(a, self.sub(b, a))

    def direction_representatives(self) -> tuple[int, ...]:
        """One canonical direction per parallel class, ascending by index.

        There are exactly (p^n - 1)/(p - 1) classes; each nonzero point d
        belongs to the class of min{c*d : 1 <= c < p}.
        """
        seen = np.zeros(self.size, dtype=bool)
        reps = []
        for d in range(1, self.size):
            if seen[d]:
                continue
            reps.append(d)
            for c in range(1, self.p):
                seen[self.scale(c, d)] = True
        return tuple(reps)

    def parallel_class(self, direction: int) -> list[Line]:
        """All p^(n-1) lines of one direction, ascending by base point."""
        rep = self.direction_rep(direction)
        seen = np.zeros(self.size, dtype=bool)
        lines = []
        for a in range(self.size):
            if seen[a]:
                continue
            ln = self.line(a, rep)
            for q in ln.points:
                seen[q] = True
            lines.append(ln)
        return lines
