"""The circle lamination induced by a marked angle.

Two angles are glued when their itineraries agree digit by digit, a wildcard
digit (a star-point hit) matching anything.  Cylinder sets of words are the
basic saturated sets; they are *gluing links*: cyclic chains of disjoint
closed arcs whose consecutive endpoints are glued.  This module provides the
gluing test, equivalence classes, cylinder construction, the image/preimage
algebra of links, and the pullback chains with their encounter bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import circle, words
from .circle import Arc, ArcSet, fmt_angle, hop, hop_iter, norm
from .errors import (
    EmptySet,
    FullCircleInput,
    NotInSet,
    PeriodicAlpha,
)
from .words import STAR, EventuallyPeriodicWord, Word


# ---------------------------------------------------------------------------
# the gluing relation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a gluing test: yes, no with a witness digit, or unknown."""

    kind: str  # "yes" | "no" | "unknown"
    witness: int | None = None
    depth: int | None = None

    @property
    def is_yes(self) -> bool:
        return self.kind == "yes"

    def __repr__(self):
        if self.kind == "no":
            return f"Verdict(no, digit {self.witness})"
        if self.kind == "unknown":
            return f"Verdict(unknown, depth {self.depth})"
        return "Verdict(yes)"


YES = Verdict("yes")


def equivalent(alpha, x, y, d: int = 2, depth: int | None = None) -> Verdict:
    """Exact gluing test for rational angles.

    Walks the joint orbit of (x, y); rational pairs cycle, so the digitwise
    comparison terminates with an exact yes/no.  A depth cap, if given, may
    yield an inconclusive verdict instead.
    """
    a, b = norm(x), norm(y)
    seen = set()
    k = 0
    while (a, b) not in seen:
        seen.add((a, b))
        la = words.letter_of(alpha, a, d)
        lb = words.letter_of(alpha, b, d)
        if la != lb and STAR not in (la, lb):
            return Verdict("no", witness=k + 1)
        k += 1
        if depth is not None and k >= depth:
            return Verdict("unknown", depth=depth)
        a, b = hop(a, d), hop(b, d)
    return YES


def is_glued(alpha, x, y, d: int = 2) -> bool:
    return equivalent(alpha, x, y, d).is_yes


# ---------------------------------------------------------------------------
# gluing links
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GluingLink:
    """A finite union of disjoint closed arcs with consecutively glued endpoints.

    ``verified`` records whether the endpoint gluings were checked exactly
    (rational cycle detection); links assembled from trusted operations carry
    the flag of their source.
    """

    arcs: ArcSet
    verified: bool = True

    def __post_init__(self):
        if self.arcs.full:
            raise FullCircleInput("a gluing link is a proper subset of the circle")
        if not self.arcs:
            raise EmptySet("a gluing link has at least one arc")

    @classmethod
    def from_arcs(cls, alpha, arcs, d: int = 2, verify: bool = True) -> "GluingLink":
        aset = arcs if isinstance(arcs, ArcSet) else ArcSet(arcs)
        link = cls(aset, verified=verify)
        if verify:
            seq = aset.arcs
            for i, a in enumerate(seq):
                nxt = seq[(i + 1) % len(seq)]
                if not equivalent(alpha, a.end, nxt.start, d).is_yes:
                    raise ValueError(
                        f"endpoints not glued: {fmt_angle(a.end)} !~ {fmt_angle(nxt.start)}"
                    )
        return link

    @property
    def measure(self) -> Fraction:
        return self.arcs.measure

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def contains(self, x, strict: bool = False) -> bool:
        return self.arcs.contains(x, strict=strict)

    def to_json(self):
        return {"arcs": [a.to_json() for a in self.arcs.arcs], "verified": self.verified}

    def __repr__(self):
        return f"GluingLink({self.arcs!r})"


FULL = "full-circle"  # tagged result of link_image when the image wraps


def cylinder_set(alpha, w: Word, d: int = 2) -> ArcSet:
    """The set of angles whose itinerary matches w at every non-wildcard digit.

    Built back to front: the set for letter i constrains the (i-1)-th forward
    image to the closed branch arc of that letter.
    """
    alpha = norm(alpha)
    current = ArcSet(full=True)
    for i in range(len(w), 0, -1):
        current = current.hop_preimage(d)
        letter = w.at(i)
        if letter != STAR:
            current = current.intersect(ArcSet([circle.branch_arc(alpha, letter, d)]))
        if not current:
            raise EmptySet(f"cylinder constraints are incompatible for {w}")
    return current


def cylinder(alpha, w: Word, d: int = 2):
    """Cylinder of a word as a gluing link; the unconstrained word gives FULL."""
    aset = cylinder_set(alpha, w, d)
    if aset.full:
        return FULL
    return GluingLink(aset, verified=True)


def link_image(alpha, link: GluingLink, d: int = 2):
    """Image of a link under the power map: a link, or the FULL tag."""
    img = link.arcs.hop_image(d)
    if img.full:
        return FULL
    return GluingLink(img, verified=link.verified)


def link_preimage(alpha, link: GluingLink, d: int = 2):
    """Components of the full preimage of a link.

    When the marked angle is outside the link the preimage splits into d
    scaled copies, one per branch, each with the same arc count and 1/d the
    measure; when it is inside, everything merges through the star points
    into a single link of equal measure.
    """
    alpha = norm(alpha)
    pre = link.arcs.hop_preimage(d)
    if link.contains(alpha):
        return [GluingLink(pre, verified=link.verified)]
    groups: dict[int, list] = {}
    for a in pre.arcs:
        i = words.letter_of(alpha, a.midpoint, d)
        groups.setdefault(i, []).append(a)
    out = []
    for i in sorted(groups):
        out.append(GluingLink(ArcSet(groups[i]), verified=link.verified))
    return out


def component_of(links, x) -> GluingLink:
    """The component containing x; on a shared endpoint, prefer the component
    entered counterclockwise (the one with an arc starting at x)."""
    x = norm(x)
    holders = [l for l in links if l.contains(x)]
    if not holders:
        raise NotInSet(f"{fmt_angle(x)} lies in no component")
    if len(holders) == 1:
        return holders[0]
    for l in holders:
        if any(a.start == x for a in l.arcs.arcs):
            return l
    return holders[0]


# ---------------------------------------------------------------------------
# equivalence classes (exact, for rational inputs)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassResult:
    points: tuple
    status: str  # "exact" | "enclosure"
    enclosures: tuple = ()

    def as_link(self, alpha, d: int = 2) -> GluingLink:
        return GluingLink(ArcSet([Arc(p, p) for p in self.points]), verified=True)


def _tail_matchers(alpha, tail_word: Word, d: int):
    """All angles whose itinerary is exactly the periodic word tail_word^inf."""
    out = []
    for k in (1, 2, 3, 4):
        letters = tail_word.letters * k
        try:
            pts = circle.fixed_points_of_word(alpha, letters, d)
        except ValueError:
            continue
        for p in pts:
            if p not in out:
                w = words.itinerary(alpha, p, k * len(tail_word) + 1, d)
                if all(
                    w.at(i) == tail_word.at((i - 1) % len(tail_word) + 1)
                    for i in range(1, len(w))
                ):
                    out.append(p)
    return out


def equivalence_class(alpha, x, d: int = 2, depth: int = 64) -> ClassResult:
    """All angles glued to x, exactly.

    Candidates come from two sources: angles whose itinerary equals a letter
    variant of x's itinerary exactly (periodic-tail fixed points pulled back
    through the preperiod) and angles whose orbit hits a star while the
    remaining digits match.  Every candidate is checked with the exact gluing
    test, so the result is sound; completeness holds because any glued partner
    is of one of these two shapes.
    """
    alpha, x = norm(alpha), norm(x)
    pre_a, cyc_a = circle.orbit(alpha, d)
    if alpha in cyc_a:
        raise PeriodicAlpha("class extraction needs a non-periodic marked angle")

    iti = words.itinerary_word(alpha, x, d)
    star_pos = [i for i in range(1, len(iti.pre) + len(iti.period) + 1) if iti.at(i) == STAR]
    variants = []
    if star_pos:
        for letter in range(1, d + 1):
            pre = iti.pre
            per = iti.period
            repl_pre = Word(tuple(letter if l == STAR else l for l in pre.letters))
            repl_per = Word(tuple(letter if l == STAR else l for l in per.letters))
            variants.append(EventuallyPeriodicWord(repl_pre, repl_per))
    else:
        variants.append(iti)

    nu = words.kneading(alpha, d)
    nu_pre, nu_cyc = len(nu.pre), len(nu.period)
    candidates = {x}
    for w in variants:
        q, p = len(w.pre), len(w.period)
        # exact-itinerary partners: periodic-tail points pulled back along the preperiod
        for z in _tail_matchers(alpha, w.period, d):
            try:
                y = circle.apply_word(alpha, w.pre.letters, z, d)
            except IllDefinedAtOrbitPoint:
                continue
            candidates.add(y)
        # star partners: branch images of star points whose continuation matches;
        # beyond the cap, validity would repeat periodically and force an
        # infinite class, impossible for a non-periodic marked angle
        cap = q + p + nu_pre + nu_cyc + 2 * _lcm(p, nu_cyc)
        for j in range(1, cap + 1):
            head = w.prefix(j - 1)
            for s in circle.star_points(alpha, d):
                try:
                    y = circle.apply_word(alpha, head.letters, s, d)
                except IllDefinedAtOrbitPoint:
                    continue
                candidates.add(y)
    points = tuple(sorted(c for c in candidates if equivalent(alpha, x, c, d).is_yes))
    return ClassResult(points=points, status="exact")


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b) if a and b else max(a, b, 1)


# ---------------------------------------------------------------------------
# coverings and pullback chains
# ---------------------------------------------------------------------------


class ClassCovering:
    """Assigns to every angle its equivalence class as a degenerate link."""

    def __init__(self, alpha, d: int = 2):
        self.alpha = norm(alpha)
        self.d = d

    def assign(self, x) -> GluingLink:
        res = equivalence_class(self.alpha, x, self.d)
        return res.as_link(self.alpha, self.d)


@dataclass(frozen=True)
class EncounterTrace:
    """Which chain indices captured the marked angle during a pullback."""

    x: Fraction
    n: int
    hits: tuple

    @property
    def N(self) -> int:
        return len(self.hits)

    def to_json(self):
        return {"x": fmt_angle(self.x), "n": self.n, "hits": list(self.hits), "N": self.N}


def pullback_chain(covering, x, n: int, d: int = 2):
    """Pull the covering link of the n-th forward image back along the orbit of x.

    Returns the final component together with the encounter trace: hit index i
    records that the link pulled back (n - i) times around the i-th image
    contained the marked angle.
    """
    alpha = norm(covering.alpha)
    x = norm(x)
    link = covering.assign(hop_iter(x, n, d))
    hits = []
    for i in range(1, n + 1):
        target = hop_iter(x, n - i, d)
        if link.contains(alpha):
            hits.append(n - i + 1)
        comps = link_preimage(alpha, link, d)
        link = component_of(comps, target)
    return link, EncounterTrace(x=x, n=n, hits=tuple(sorted(hits)))


def encounter_number(covering, x, n: int, d: int = 2) -> int:
    return pullback_chain(covering, x, n, d)[1].N


def cce_sequence(covering, x, P, M: int, n_max: int, d: int = 2):
    """All n <= n_max with encounter number at most M, plus whether the
    increasing sequence stays below P * (its index)."""
    good = [n for n in range(1, n_max + 1) if encounter_number(covering, x, n, d) <= M]
    ok = all(n_j <= Fraction(P) * j for j, n_j in enumerate(good, start=1))
    return good, ok
