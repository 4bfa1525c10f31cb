"""Exact arithmetic on the circle R/Z.

Angles are ``fractions.Fraction`` values normalized into [0, 1); the circle has
total measure 1.  The degree-d power map acts as t -> d*t (mod 1).  For a marked
angle alpha, its d preimages (the "star points") cut the circle into d closed
arcs, one per inverse branch.

Everything here is a pure function on immutable values, so concurrent use needs
no coordination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptySet, IllDefinedAtAlpha, IllDefinedAtOrbitPoint, NoPeriodicPoint

Angle = Fraction


def norm(t) -> Fraction:
    """Normalize a rational to its representative in [0, 1)."""
    return Fraction(t) % 1


def parse_angle(text: str) -> Fraction:
    """Parse "p/q" (or "p") into a normalized angle."""
    return norm(Fraction(text.strip()))


def fmt_angle(t: Fraction) -> str:
    return f"{t.numerator}/{t.denominator}" if t.denominator != 1 else str(t.numerator)


def circ_dist(a: Fraction, b: Fraction) -> Fraction:
    """Length of the shorter arc between two angles."""
    d = (a - b) % 1
    return min(d, 1 - d)


def cyclic_order(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Exact cyclic-order predicate.

    Returns +1 if walking counterclockwise from ``a`` meets ``b`` strictly
    before ``c``, -1 if strictly after, and 0 when any two of the angles
    coincide (ties are reported, never broken silently).
    """
    a, b, c = norm(a), norm(b), norm(c)
    if a == b or b == c or a == c:
        return 0
    return 1 if (b - a) % 1 < (c - a) % 1 else -1


def in_open_arc(x: Fraction, start: Fraction, end: Fraction) -> bool:
    """Is x strictly inside the counterclockwise arc from start to end?"""
    span = (end - start) % 1
    d = (x - start) % 1
    return 0 < d < span


@dataclass(frozen=True)
class Arc:
    """A closed arc traversed counterclockwise from ``start`` to ``end``.

    ``start == end`` with ``full=False`` denotes the degenerate one-point arc;
    the full circle is a distinct tagged value (``full=True``).
    """

    start: Fraction
    end: Fraction
    closed: bool = True
    full: bool = False

    @property
    def measure(self) -> Fraction:
        if self.full:
            return Fraction(1)
        return (self.end - self.start) % 1

    @property
    def midpoint(self) -> Fraction:
        return norm(self.start + self.measure / 2)

    def contains(self, x, strict: bool = False) -> bool:
        if self.full:
            return True
        x = norm(x)
        d = (x - self.start) % 1
        m = self.measure
        if strict:
            return 0 < d < m
        return d <= m  # d >= 0 always

    def to_json(self):
        return {"start": fmt_angle(self.start), "end": fmt_angle(self.end), "closed": self.closed}


def arc(start, end) -> Arc:
    return Arc(norm(start), norm(end))


FULL_CIRCLE = Arc(Fraction(0), Fraction(0), closed=True, full=True)


class ArcSet:
    """A finite union of disjoint closed arcs, kept in normalized cyclic order.

    Normalization sorts by start angle and merges arcs that overlap or touch
    at an endpoint, so equality of point sets is equality of representations.
    """

    __slots__ = ("arcs", "full")

    def __init__(self, arcs=(), full: bool = False, _normalized: bool = False):
        if full:
            self.full = True
            self.arcs = ()
            return
        self.full = False
        if _normalized:
            self.arcs = tuple(arcs)
            return
        merged = _normalize_arcs(arcs)
        if merged is None:
            self.full = True
            self.arcs = ()
        else:
            self.arcs = merged

    # -- basic queries ------------------------------------------------------

    @property
    def measure(self) -> Fraction:
        if self.full:
            return Fraction(1)
        return sum((a.measure for a in self.arcs), Fraction(0))

    def __bool__(self) -> bool:
        return self.full or bool(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def __eq__(self, other) -> bool:
        return isinstance(other, ArcSet) and self.full == other.full and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.full, self.arcs))

    def __repr__(self):
        if self.full:
            return "ArcSet(full)"
        return "ArcSet(" + " ".join(f"[{fmt_angle(a.start)},{fmt_angle(a.end)}]" for a in self.arcs) + ")"

    def contains(self, x, strict: bool = False) -> bool:
        if self.full:
            return True
        x = norm(x)
        return any(a.contains(x, strict=strict) for a in self.arcs)

    def endpoints(self):
        pts = []
        for a in self.arcs:
            pts.append(a.start)
            if a.end != a.start:
                pts.append(a.end)
        return pts

    def distance_to_point(self, x) -> Fraction:
        """Exact circle distance from x to this set (0 if contained)."""
        if self.full:
            return Fraction(0)
        x = norm(x)
        best = None
        for a in self.arcs:
            if a.contains(x):
                return Fraction(0)
            d = min(circ_dist(x, a.start), circ_dist(x, a.end))
            best = d if best is None else min(best, d)
        if best is None:
            raise EmptySet("distance to empty set")
        return best

    def distance_to(self, other: "ArcSet") -> Fraction:
        """Exact minimal circle distance between two arc unions."""
        if self.full or other.full:
            return Fraction(0)
        best = None
        for a in self.arcs:
            for b in other.arcs:
                d = _arc_distance(a, b)
                best = d if best is None else min(best, d)
                if best == 0:
                    return best
        if best is None:
            raise EmptySet("distance to empty set")
        return best

    # -- set algebra ---------------------------------------------------------

    def intersect(self, other: "ArcSet") -> "ArcSet":
        if self.full:
            return other
        if other.full:
            return self
        pieces = []
        for a in self.arcs:
            for b in other.arcs:
                pieces.extend(_arc_intersection(a, b))
        return ArcSet(pieces)

    def union(self, other: "ArcSet") -> "ArcSet":
        if self.full or other.full:
            return ArcSet(full=True)
        return ArcSet(self.arcs + other.arcs)

    # -- dynamics -----------------------------------------------------------

    def hop_preimage(self, d: int = 2) -> "ArcSet":
        """Exact preimage under t -> d*t: each arc yields d scaled copies."""
        if self.full:
            return ArcSet(full=True)
        pieces = []
        for a in self.arcs:
            m = a.measure / d
            for j in range(d):
                s = norm((a.start + j) / d)
                pieces.append(Arc(s, norm(s + m)))
        return ArcSet(pieces)

    def hop_image(self, d: int = 2) -> "ArcSet":
        """Exact image under t -> d*t; may be the full circle."""
        if self.full:
            return ArcSet(full=True)
        pieces = []
        for a in self.arcs:
            if a.measure * d >= 1:
                return ArcSet(full=True)
            pieces.append(Arc(norm(d * a.start), norm(d * a.end)))
        return ArcSet(pieces)


def _normalize_arcs(arcs):
    """Sort and merge closed arcs; return None when the union is the whole circle."""
    items = [a for a in arcs if isinstance(a, Arc)]
    if any(a.full for a in items):
        return None
    if not items:
        return ()
    # Work on the universal cover: each arc becomes [s, s+m] with s in [0,1).
    segs = sorted((norm(a.start), norm(a.start) + a.measure) for a in items)
    merged = []
    for s, e in segs:
        if merged and s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    # Wrap-around: last segment may reach past 1 into the first.
    if len(merged) > 1 and merged[-1][1] >= merged[0][0] + 1:
        merged[0][0] = merged[-1][0] - 1
        merged[0][1] = max(merged[0][1], merged[-1][1] - 1)
        merged.pop()
    if merged and merged[0][1] - merged[0][0] >= 1:
        return None
    out = []
    for s, e in merged:
        out.append(Arc(norm(s), norm(e)))
    out.sort(key=lambda a: a.start)
    return tuple(out)


def _arc_distance(a: Arc, b: Arc) -> Fraction:
    # Degenerate or not, the nearest point of a closed arc to another closed
    # arc is attained at an endpoint unless they intersect.
    if a.contains(b.start) or a.contains(b.end) or b.contains(a.start) or b.contains(a.end):
        return Fraction(0)
    return min(
        circ_dist(a.start, b.start),
        circ_dist(a.start, b.end),
        circ_dist(a.end, b.start),
        circ_dist(a.end, b.end),
    )


def _arc_intersection(a: Arc, b: Arc):
    """Intersection of two closed arcs as a list of closed arcs (0, 1, or 2 pieces)."""
    # Shift so that a starts at 0 on the cover: a = [0, ma].
    ma, mb = a.measure, b.measure
    s = (b.start - a.start) % 1
    pieces = []
    # b may be seen on the cover as [s, s+mb]; it can also poke into [0, ma]
    # after wrapping, i.e. as [s-1, s-1+mb].
    for lo in (s, s - 1):
        hi = lo + mb
        lo2, hi2 = max(lo, Fraction(0)), min(hi, ma)
        if lo2 <= hi2:
            pieces.append(Arc(norm(a.start + lo2), norm(a.start + hi2)))
    # Dedupe identical pieces (can happen for touching wraps).
    out = []
    for p in pieces:
        if p not in out:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# the power map and its inverse branches
# ---------------------------------------------------------------------------


def hop(t, d: int = 2) -> Fraction:
    """The degree-d power map on angles: t -> d*t (mod 1)."""
    return norm(Fraction(t) * d)


def hop_iter(t, n: int, d: int = 2) -> Fraction:
    t = norm(t)
    for _ in range(n):
        t = hop(t, d)
    return t


def orbit(t, d: int = 2):
    """Forward orbit of a rational angle: (preperiodic part, cycle part)."""
    t = norm(t)
    seen = {}
    seq = []
    while t not in seen:
        seen[t] = len(seq)
        seq.append(t)
        t = hop(t, d)
    k = seen[t]
    return seq[:k], seq[k:]


def star_points(alpha, d: int = 2):
    """The d preimages of alpha, counterclockwise starting from angle 0.

    star_points(alpha)[i-1] is the i-th star; the closed arc from star i to
    star i+1 is the domain of inverse branch i.
    """
    alpha = norm(alpha)
    return [norm((alpha + j) / d) for j in range(d)]


def branch_arc(alpha, i: int, d: int = 2) -> Arc:
    """Closed arc from star i to star i+1 (1-based branch index)."""
    stars = star_points(alpha, d)
    return Arc(stars[i - 1], stars[i % d])


def branch(alpha, i: int, t, d: int = 2) -> Fraction:
    """The preimage of t under the power map lying in the closed arc of branch i.

    Undefined exactly at t = alpha, where the two candidate preimages are the
    stars bounding the branch arc.
    """
    alpha, t = norm(alpha), norm(t)
    if t == alpha:
        raise IllDefinedAtAlpha(f"branch {i} undefined at the marked angle {fmt_angle(alpha)}")
    if not 1 <= i <= d:
        raise ValueError(f"branch index {i} out of range 1..{d}")
    # Lift t into (alpha, alpha+1); the branch-i preimage is (lift + i - 1)/d.
    lift = alpha + ((t - alpha) % 1)
    return norm((lift + i - 1) / d)


def apply_word(alpha, letters, t, d: int = 2) -> Fraction:
    """Compose inverse branches right to left: letters[0] is applied last.

    ``letters`` is a sequence of 1-based branch indices.  Raises
    IllDefinedAtOrbitPoint(step) when the input of the step-th applied branch
    equals the marked angle (step 1 applies the final letter).
    """
    t = norm(t)
    n = len(letters)
    for step, pos in enumerate(range(n - 1, -1, -1), start=1):
        i = letters[pos]
        if t == norm(alpha):
            raise IllDefinedAtOrbitPoint(step, t)
        t = branch(alpha, i, t, d)
    return t


def word_is_defined_at(alpha, letters, t, d: int = 2) -> bool:
    try:
        apply_word(alpha, letters, t, d)
        return True
    except IllDefinedAtOrbitPoint:
        return False


def fixed_points_of_word(alpha, letters, d: int = 2):
    """All angles t with word_map(t) = t, exactly.

    The word map is affine with slope d^-n on each arc between consecutive
    points of the forward orbit of alpha (the only possible discontinuities),
    so we solve t = (t + K)/d^n on every such arc and keep the solutions the
    map actually fixes.  This enumeration is complete: iterating from a seed
    need not terminate (denominators grow without cycling), but every fixed
    point lies on one of finitely many affinity arcs.
    """
    n = len(letters)
    if n == 0:
        raise ValueError("fixed points of the empty word are the whole circle")
    alpha = norm(alpha)
    # 0 is added so no affinity arc wraps through it: the affine constant is
    # computed from representatives in [0, 1) and would jump across the wrap.
    breaks = sorted({Fraction(0)} | {hop_iter(alpha, m, d) for m in range(n)})
    dn = d ** n
    candidates = set()
    for idx in range(len(breaks)):
        lo = breaks[idx]
        hi = breaks[(idx + 1) % len(breaks)]
        span = (hi - lo) % 1
        if span == 0:  # single breakpoint: the arc is the whole circle minus a point
            span = Fraction(1)
        mid = norm(lo + span / 2)
        try:
            val = apply_word(alpha, letters, mid, d)
        except IllDefinedAtOrbitPoint:
            continue
        K = val * dn - mid
        if K.denominator != 1:  # not affine across this sample: cannot happen
            continue
        candidates.add(norm(Fraction(int(K), dn - 1)))
    candidates.update(breaks)
    out = []
    for c in sorted(candidates):
        try:
            if apply_word(alpha, letters, c, d) == c:
                out.append(c)
        except IllDefinedAtOrbitPoint:
            pass
    return out


def fixed_point_of_word(alpha, letters, d: int = 2) -> Fraction:
    """The first (counterclockwise from 0) fixed point of the word map."""
    pts = fixed_points_of_word(alpha, letters, d)
    if not pts:
        raise NoPeriodicPoint(f"word map has no fixed point for letters {letters}")
    return pts[0]
