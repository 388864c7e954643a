"""Convex hulls of points in the complex plane and tolerant membership."""

from __future__ import annotations

from typing import Iterable

from .poly import ExactPoly
from .roots import DEFAULT_TOL, find_roots

HULL_TOL = 1e-9


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points: Iterable[complex]) -> list[complex]:
    """Hull vertices in counter-clockwise order (Andrew's monotone chain).

    Degenerate inputs return one point or the two ends of a segment.
    """
    pts = sorted(set(complex(p) for p in points), key=lambda z: (z.real, z.imag))
    if len(pts) <= 2:
        return pts
    lower: list[complex] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[complex] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def diameter(points: Iterable[complex]) -> float:
    pts = list(points)
    return max((abs(a - b) for a in pts for b in pts), default=0.0)


def _segment_distance(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(z - a)
    t = ((z - a).real * ab.real + (z - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def distance_to_hull(hull: list[complex], z: complex) -> float:
    """Euclidean distance from ``z`` to the hull; 0 inside."""
    if not hull:
        raise ValueError("empty hull")
    if len(hull) == 1:
        return abs(z - hull[0])
    if len(hull) == 2:
        return _segment_distance(z, hull[0], hull[1])
    edges = list(zip(hull, hull[1:] + hull[:1]))
    if all(_cross(a, b, z) >= 0 for a, b in edges):
        return 0.0
    return min(_segment_distance(z, a, b) for a, b in edges)


def in_hull(points: Iterable[complex], queries: Iterable[complex], tol: float = HULL_TOL) -> bool:
    """True iff every query lies in conv(points), to ``tol`` times the hull diameter.

    For a single-point hull the scale falls back to the point's magnitude (or 1).
    """
    pts = list(points)
    hull = convex_hull(pts)
    scale = diameter(hull)
    if scale == 0.0:
        scale = max(1.0, abs(hull[0]))
    return all(distance_to_hull(hull, q) <= tol * scale for q in queries)


def lucas_check(p: ExactPoly, tol: float = HULL_TOL, root_tol: float = DEFAULT_TOL) -> bool:
    """True iff every root of ``p'`` lies in the convex hull of the roots of ``p``."""
    if p.degree < 2:
        raise ValueError("lucas_check needs degree >= 2")
    roots = find_roots(p, root_tol).roots
    critical = find_roots(p.derivative(), root_tol).roots
    return in_hull(roots, critical, tol)
