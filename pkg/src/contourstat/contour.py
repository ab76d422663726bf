"""Planar contours, arclength parameterization, and randomized k-gon approximation.

Contours are closed polygonal curves stored as complex vertex sequences
(x + iy).  A contour is brought into canonical form by orienting it
counterclockwise and starting it at the vertex farthest from its center of
mass; the canonical curve is then approximated by a k-gon obtained by
evaluating it at uniformly random arclength fractions ("stopping times").
Using one common set of stopping times across a sample induces a vertex
correspondence between its members.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateContourError

__all__ = [
    "Contour",
    "ParamCurve",
    "StoppingTimes",
    "center_of_mass",
    "canonicalize",
    "polygon_length",
    "select_stopping_times",
    "evaluate",
    "max_edge_length",
    "relative_length_error",
    "build_correspondence",
    "union_of_times",
]


def _as_complex_vector(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D point sequence, got shape {arr.shape}")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out


def _closed_edges(points: np.ndarray) -> np.ndarray:
    """Edge vectors of the closed polygon, closing edge included."""
    return np.roll(points, -1) - points


def _closed_length(points: np.ndarray) -> float:
    # sequential reduction, bitwise-consistent with ParamCurve.cum_lengths
    return float(np.cumsum(np.abs(_closed_edges(points)))[-1])


def _signed_area(points: np.ndarray) -> float:
    """Shoelace area; positive for counterclockwise vertex order."""
    nxt = np.roll(points, -1)
    return float(0.5 * np.sum(np.imag(np.conj(points) * nxt)))


def _arc_centroid(points: np.ndarray) -> complex:
    """Centroid of the uniform (arclength) measure on the closed polygon.

    Edge-midpoint x edge-length quadrature, which is exact for polygons.
    """
    nxt = np.roll(points, -1)
    lengths = np.abs(nxt - points)
    total = lengths.sum()
    if not total > 0.0:
        raise DegenerateContourError("contour has zero total length")
    return complex(((points + nxt) * 0.5 * lengths).sum() / total)


@dataclass(frozen=True, eq=False)
class Contour:
    """Closed polygonal contour: ordered vertices, last joined implicitly to first.

    Requires at least 3 distinct vertices and no two equal consecutive
    vertices (the closing pair included).  Simplicity is *not* enforced at
    construction; call :meth:`is_simple` when needed.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = _as_complex_vector(self.points)
        if len(pts) < 3:
            raise DegenerateContourError(f"contour needs >= 3 points, got {len(pts)}")
        if np.any(_closed_edges(pts) == 0):
            raise DegenerateContourError("contour has two equal consecutive points")
        if len(np.unique(pts)) < 3:
            raise DegenerateContourError("contour has fewer than 3 distinct points")
        object.__setattr__(self, "points", _freeze(pts))

    def __len__(self) -> int:
        return len(self.points)

    def is_simple(self) -> bool:
        """O(m^2) check that no two non-adjacent edges intersect."""
        pts = self.points
        m = len(pts)
        for i in range(m):
            a0, a1 = pts[i], pts[(i + 1) % m]
            for j in range(i + 1, m):
                if j == i + 1 or (i == 0 and j == m - 1):
                    continue
                if _segments_intersect(a0, a1, pts[j], pts[(j + 1) % m]):
                    return False
        return True


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def _segments_intersect(p0, p1, q0, q1) -> bool:
    d1 = _cross(q0, q1, p0)
    d2 = _cross(q0, q1, p1)
    d3 = _cross(p0, p1, q0)
    d4 = _cross(p0, p1, q1)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    # collinear touches count as intersections
    for d, (s0, s1, p) in (
        (d1, (q0, q1, p0)),
        (d2, (q0, q1, p1)),
        (d3, (p0, p1, q0)),
        (d4, (p0, p1, q1)),
    ):
        if d == 0 and _on_segment(s0, s1, p):
            return True
    return False


def _on_segment(s0, s1, p) -> bool:
    return (
        min(s0.real, s1.real) <= p.real <= max(s0.real, s1.real)
        and min(s0.imag, s1.imag) <= p.imag <= max(s0.imag, s1.imag)
    )


@dataclass(frozen=True, eq=False)
class ParamCurve:
    """Closed polygon parameterized by arclength.

    ``cum_lengths`` holds the arclength at every vertex plus one final entry
    for the return to vertex 0, so ``cum_lengths[0] == 0`` and
    ``cum_lengths[-1] == total_length``.  Vertex order is counterclockwise
    and vertex 0 is the designated start point of the parameterization.
    """

    vertices: np.ndarray
    cum_lengths: np.ndarray
    total_length: float

    def __post_init__(self):
        verts = _as_complex_vector(self.vertices)
        cum = np.asarray(self.cum_lengths, dtype=np.float64)
        if len(cum) != len(verts) + 1:
            raise ValueError("cum_lengths must have one entry per vertex plus the closure")
        if cum[0] != 0.0:
            raise ValueError("cum_lengths must start at 0")
        if np.any(np.diff(cum) <= 0):
            raise ValueError("cum_lengths must be strictly increasing")
        if cum[-1] != self.total_length:
            raise ValueError("last cum_length must equal total_length")
        if _signed_area(verts) <= 0:
            raise ValueError("curve must be oriented counterclockwise")
        object.__setattr__(self, "vertices", _freeze(verts))
        object.__setattr__(self, "cum_lengths", _freeze(cum))
        object.__setattr__(self, "total_length", float(self.total_length))

    @classmethod
    def from_vertices(cls, points) -> "ParamCurve":
        """Parameterize an already counterclockwise polygon, keeping vertex 0 as start."""
        pts = points.points if isinstance(points, Contour) else _as_complex_vector(points)
        edges = np.abs(_closed_edges(pts))
        cum = np.concatenate(([0.0], np.cumsum(edges)))
        return cls(pts, cum, float(cum[-1]))

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class StoppingTimes:
    """Sorted arclength fractions in [0, 1) at which a curve is evaluated.

    The first time is pinned at exactly 0 so the canonical start point is
    always a vertex of the resulting k-gon.
    """

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        if t.ndim != 1 or len(t) == 0:
            raise ValueError("times must be a nonempty 1-D sequence")
        if t[0] != 0.0:
            raise ValueError("first stopping time must be exactly 0")
        if np.any(np.diff(t) <= 0):
            raise ValueError("stopping times must be strictly increasing")
        if t[-1] >= 1.0:
            raise ValueError("stopping times must lie in [0, 1)")
        object.__setattr__(self, "times", _freeze(t))

    @property
    def k(self) -> int:
        return len(self.times)

    def __len__(self) -> int:
        return len(self.times)


def center_of_mass(curve: ParamCurve) -> complex:
    """Arclength-weighted mean point of the curve (uniform measure on the polygon)."""
    return _arc_centroid(curve.vertices)


def canonicalize(contour: Contour | ParamCurve) -> ParamCurve:
    """Normalize orientation and start point, and parameterize by arclength.

    The vertex order is reversed if the signed (shoelace) area is negative,
    so travel is counterclockwise.  The start vertex is the one farthest from
    the arclength center of mass; among vertices whose distance is within
    1e-9 of the maximum (relative to the diameter) the tie is broken by the
    smallest counterclockwise angle from the positive real axis about the
    center.
    """
    pts = contour.vertices if isinstance(contour, ParamCurve) else contour.points
    pts = np.array(pts, copy=True)
    area = _signed_area(pts)
    if area == 0.0:
        raise DegenerateContourError("contour has zero signed area; orientation undefined")
    if area < 0.0:
        pts = pts[::-1].copy()
    center = _arc_centroid(pts)
    radii = np.abs(pts - center)
    rmax = float(radii.max())
    if not rmax > 0.0:
        raise DegenerateContourError("all contour points coincide with the center of mass")
    tol = 1e-9 * (2.0 * rmax)
    candidates = np.nonzero(radii >= rmax - tol)[0]
    angles = np.mod(np.angle(pts[candidates] - center), 2.0 * np.pi)
    start = int(candidates[np.argmin(angles)])
    rolled = np.roll(pts, -start)
    return ParamCurve.from_vertices(rolled)


def polygon_length(curve: ParamCurve) -> float:
    """Total length of the closed polygon, closing edge included."""
    return float(curve.total_length)


def select_stopping_times(k: int, rng: np.random.Generator) -> StoppingTimes:
    """Draw k sorted stopping times: a pinned 0 plus k-1 Uniform[0,1) draws."""
    if k < 3:
        raise ValueError(f"need k >= 3 stopping times, got {k}")
    while True:
        draws = rng.uniform(0.0, 1.0, size=k - 1)
        times = np.sort(np.concatenate(([0.0], draws)))
        # duplicate draws have probability ~k^2 * 2^-53; redraw rather than perturb
        if np.all(np.diff(times) > 0):
            return StoppingTimes(times)


def evaluate(curve: ParamCurve, times: StoppingTimes) -> Contour:
    """Evaluate the curve at arclength fractions, linearly interpolating edges.

    A fraction s maps to the point at arclength s * total_length.  Fractions
    that coincide with a vertex's own fraction return that vertex exactly, so
    evaluating at the vertex fractions reproduces the vertices bit for bit.
    """
    s = times.times
    fracs = curve.cum_lengths / curve.total_length  # fracs[0] = 0, fracs[-1] = 1
    verts = curve.vertices
    closed = np.concatenate((verts, verts[:1]))
    idx = np.searchsorted(fracs, s, side="left")
    out = np.empty(len(s), dtype=np.complex128)
    exact = fracs[idx] == s
    out[exact] = closed[idx[exact]]
    seg = ~exact
    j = idx[seg]  # s strictly inside (fracs[j-1], fracs[j])
    w = (s[seg] - fracs[j - 1]) / (fracs[j] - fracs[j - 1])
    out[seg] = closed[j - 1] + w * (closed[j] - closed[j - 1])
    return Contour(out)


def max_edge_length(kgon: Contour) -> float:
    """Longest edge of the closed polygon, closing edge included."""
    return float(np.abs(_closed_edges(kgon.points)).max())


def relative_length_error(reference_length: float, kgon: Contour) -> float:
    """(L_ref - L_kgon) / L_ref, the relative length deficit of the approximation."""
    if not reference_length > 0.0:
        raise ValueError("reference length must be positive")
    return (reference_length - _closed_length(kgon.points)) / reference_length


def union_of_times(times_list: Sequence[StoppingTimes]) -> StoppingTimes:
    """Sorted deduplicated union of several stopping-time sets."""
    if not times_list:
        raise ValueError("empty list of stopping times")
    merged = np.unique(np.concatenate([t.times for t in times_list]))
    return StoppingTimes(merged)


def build_correspondence(
    sample: Sequence[ParamCurve],
    strategy: str,
    k: int | Sequence[int],
    rng: np.random.Generator,
) -> StoppingTimes:
    """Choose the common evaluation times that put a sample in correspondence.

    ``shared-times`` draws one set of k fractions and applies it to every
    curve, so vertex j of one k-gon corresponds to vertex j of any other.
    ``union-of-times`` draws a set per curve (k may be a per-curve sequence)
    and returns their sorted union; evaluating every curve at all union times
    preserves the correspondence while letting curves be approximated at
    different resolutions.
    """
    if len(sample) == 0:
        raise ValueError("empty sample of curves")
    if strategy == "shared-times":
        if not isinstance(k, int):
            raise ValueError("shared-times needs a single integer k")
        return select_stopping_times(k, rng)
    if strategy == "union-of-times":
        ks = [k] * len(sample) if isinstance(k, int) else list(k)
        if len(ks) != len(sample):
            raise ValueError(f"need one k per curve, got {len(ks)} for {len(sample)} curves")
        return union_of_times([select_stopping_times(ki, rng) for ki in ks])
    raise ValueError(f"unknown correspondence strategy: {strategy!r}")
