"""Symbolic machinery on itinerary words.

Letters are small integers: 1..d name the inverse branches (aliases L=1, R=2
for degree 2) and 0 is the wildcard letter (rendered ``*``) marking positions
where a point's forward image hits a star point.  All index arithmetic in this
module is 1-based to keep the combinatorial definitions readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import circle
from .errors import BudgetExceeded

STAR = 0
L = 1
R = 2

_CHAR = {0: "*", 1: "L", 2: "R"}
_LETTER = {"*": 0, "★": 0, "L": 1, "R": 2}


@dataclass(frozen=True)
class Word:
    """A finite word; supports 1-based access via at()/sub() and 0-based iteration."""

    letters: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "Word":
        try:
            return cls(tuple(_LETTER[ch] for ch in text.strip()))
        except KeyError as exc:
            raise ValueError(f"unknown letter {exc.args[0]!r}; expected L, R or *") from exc

    def at(self, i: int) -> int:
        if not 1 <= i <= len(self.letters):
            raise IndexError(f"position {i} outside word of length {len(self.letters)}")
        return self.letters[i - 1]

    def sub(self, a: int, b: int) -> "Word":
        """Subword on positions a..b inclusive (empty when a > b)."""
        if a > b:
            return Word()
        return Word(self.letters[a - 1 : b])

    def replace(self, i: int, letter: int) -> "Word":
        lst = list(self.letters)
        lst[i - 1] = letter
        return Word(tuple(lst))

    @property
    def star_free(self) -> bool:
        return STAR not in self.letters

    def __len__(self):
        return len(self.letters)

    def __getitem__(self, idx):
        return self.letters[idx]

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __str__(self):
        try:
            return "".join(_CHAR[l] for l in self.letters)
        except KeyError:
            return "".join(f"<{l}>" for l in self.letters)

    def __repr__(self):
        return f"Word({self})"


EMPTY = Word()


def word(text: str) -> Word:
    return Word.parse(text)


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """An infinite word ``pre . period period period ...`` in canonical form.

    Canonical means the period is primitive and the preperiod is minimal
    (no trailing preperiod letter can be rotated into the period).  Two
    representations of the same infinite word therefore compare equal.
    """

    pre: Word
    period: Word

    def __post_init__(self):
        if len(self.period) == 0:
            raise ValueError("period must be nonempty")
        pre, per = _canonicalize(self.pre, self.period)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> "EventuallyPeriodicWord":
        text = text.strip()
        if "(" in text:
            head, _, rest = text.partition("(")
            per = rest.rstrip(")")
        else:
            head, per = "", text
        return cls(Word.parse(head), Word.parse(per))

    def at(self, i: int) -> int:
        q = len(self.pre)
        if i <= q:
            return self.pre.at(i)
        return self.period.at((i - q - 1) % len(self.period) + 1)

    def prefix(self, n: int) -> Word:
        return Word(tuple(self.at(i) for i in range(1, n + 1)))

    @property
    def star_free(self) -> bool:
        return self.pre.star_free and self.period.star_free

    def __str__(self):
        return f"{self.pre}({self.period})"

    def __repr__(self):
        return f"EventuallyPeriodicWord({self})"


def _canonicalize(pre: Word, period: Word):
    # primitive period: smallest divisor-length block that tiles it
    p = len(period)
    for k in range(1, p + 1):
        if p % k == 0 and period.letters == period.letters[:k] * (p // k):
            period = Word(period.letters[:k])
            break
    # minimal preperiod: absorb trailing letters that match the period's tail
    pre_l, per_l = list(pre.letters), list(period.letters)
    while pre_l and pre_l[-1] == per_l[-1]:
        per_l = [per_l[-1]] + per_l[:-1]
        pre_l.pop()
    return Word(tuple(pre_l)), Word(tuple(per_l))


# ---------------------------------------------------------------------------
# itineraries
# ---------------------------------------------------------------------------


def letter_of(alpha, x, d: int = 2) -> int:
    """Which branch arc holds x: 1..d, or the wildcard 0 at a star point."""
    alpha, x = circle.norm(alpha), circle.norm(x)
    stars = circle.star_points(alpha, d)
    offset = (x - stars[0]) % 1
    i, rem = divmod(offset * d, 1)
    if rem == 0:
        return STAR
    return int(i) + 1


def itinerary(alpha, x, n: int, d: int = 2) -> Word:
    """First n letters of the itinerary of x under the degree-d power map."""
    out = []
    t = circle.norm(x)
    for _ in range(n):
        out.append(letter_of(alpha, t, d))
        t = circle.hop(t, d)
    return Word(tuple(out))


def kneading(alpha, d: int = 2) -> EventuallyPeriodicWord:
    """The itinerary of the marked angle itself, via exact orbit cycle detection."""
    pre, cyc = circle.orbit(alpha, d)
    pre_letters = tuple(letter_of(alpha, t, d) for t in pre)
    cyc_letters = tuple(letter_of(alpha, t, d) for t in cyc)
    return EventuallyPeriodicWord(Word(pre_letters), Word(cyc_letters))


def itinerary_word(alpha, x, d: int = 2) -> EventuallyPeriodicWord:
    """The full (eventually periodic) itinerary of a rational angle."""
    pre, cyc = circle.orbit(x, d)
    return EventuallyPeriodicWord(
        Word(tuple(letter_of(alpha, t, d) for t in pre)),
        Word(tuple(letter_of(alpha, t, d) for t in cyc)),
    )


def _nu_at(nu, i: int) -> int:
    """1-based letter lookup working for both finite and eventually periodic words."""
    if isinstance(nu, EventuallyPeriodicWord):
        return nu.at(i)
    if i > len(nu):
        raise IndexError(f"reference word too short: position {i} of {len(nu)} letters")
    return nu.at(i)


def _match(a: int, b: int) -> bool:
    return a == b or STAR in (a, b)


# ---------------------------------------------------------------------------
# duplicating intervals, rare sets, strong recurrence
# ---------------------------------------------------------------------------


def is_duplicating(g: Word, a: int, b: int, excused, nu) -> bool:
    """Does g[a..b] copy the start of nu, excusing mismatches at the given indices?

    The wildcard letter on either side matches anything.  The empty interval
    (a = b + 1) is duplicating by convention.
    """
    if a > b:
        return True
    if not (1 <= a and b <= len(g)):
        raise IndexError(f"interval [{a},{b}] outside word of length {len(g)}")
    for j in range(b - a + 1):
        if a + j in excused:
            continue
        if not _match(g.at(a + j), _nu_at(nu, 1 + j)):
            return False
    return True


def is_rare(indices, D: int) -> bool:
    """At most 3 members of the set in any window of D+1 consecutive integers."""
    pts = sorted(indices)
    return all(pts[k + 3] - pts[k] > D for k in range(len(pts) - 3))


def duplicating_digits(g: Word, D: int, rare, nu, allow_initial: bool = True) -> frozenset:
    """Indices of g covered by a rare-excused duplicating interval that either
    reaches the last letter or is longer than D.

    ``allow_initial=False`` discards intervals starting at position 1 (a word
    always copies itself, which would make every digit qualify whenever g is a
    prefix of nu); the non-initial notion is the one the recurrence detectors
    are built from.
    """
    n = len(g)
    out = set()
    a_min = 1 if allow_initial else 2
    for a in range(a_min, n + 1):
        # maximal b with [a, b] duplicating: constraints only accumulate
        b = a - 1
        while b < n and (a + (b + 1 - a) in rare or _match(g.at(b + 1), _nu_at(nu, b + 2 - a))):
            b += 1
        if b < a:
            continue
        if b == n:
            out.update(range(a, n + 1))
        elif b - a + 1 > D:
            out.update(range(a, b + 1))
        else:
            continue
    return frozenset(out)


@dataclass(frozen=True)
class RareSet:
    indices: frozenset
    D: int

    def __post_init__(self):
        if not is_rare(self.indices, self.D):
            raise ValueError(f"set is not {self.D}-rare: {sorted(self.indices)}")


@dataclass(frozen=True)
class SRCertificate:
    """A re-verifiable witness that one prefix is mostly covered by duplications."""

    D: int
    tau: Fraction
    n: int
    rare: frozenset
    duplicating_count: int
    allow_initial: bool = True

    def verify(self, nu) -> bool:
        if not (self.n > self.D and is_rare(self.rare, self.D)):
            return False
        g = nu.prefix(self.n) if isinstance(nu, EventuallyPeriodicWord) else nu.sub(1, self.n)
        digits = duplicating_digits(g, self.D, self.rare, nu, self.allow_initial)
        return len(digits) == self.duplicating_count and self.duplicating_count > self.tau * self.n


def _rare_subsets(n: int, D: int):
    """All D-rare subsets of [1, n] (exponential; callers cap n)."""
    sets = [frozenset()]
    for i in range(1, n + 1):
        new = []
        for s in sets:
            cand = s | {i}
            if is_rare(cand, D):
                new.append(cand)
        sets.extend(new)
    return sets


def sr_search(nu, D: int, tau, n_max: int, mode: str = "greedy",
              exhaustive_cap: int = 12, budget: int = 200000,
              allow_initial: bool = True):
    """Look for a certificate that a large fraction of some prefix duplicates.

    Returns a verified SRCertificate or None.  None is *inconclusive*: the
    search is sound but incomplete.  Exhaustive mode enumerates all rare sets
    for n <= exhaustive_cap; greedy mode places excused indices at alignment
    mismatches.  Raises BudgetExceeded when the work cap interrupts the scan.
    """
    if D < 1 or not 0 < Fraction(tau) < 1:
        raise ValueError("need D >= 1 and 0 < tau < 1")
    tau = Fraction(tau)
    work = 0
    for n in range(D + 1, n_max + 1):
        g = nu.prefix(n) if isinstance(nu, EventuallyPeriodicWord) else nu.sub(1, n)
        if len(g) < n:
            break
        if mode == "exhaustive" and n <= exhaustive_cap:
            candidates = _rare_subsets(n, D)
        else:
            candidates = [frozenset()] + _greedy_rare_sets(g, D, nu)
        for rare in candidates:
            work += 1
            if work > budget:
                raise BudgetExceeded("rare-set search budget exhausted",
                                     stats={"n_reached": n, "evaluations": work - 1})
            count = len(duplicating_digits(g, D, rare, nu, allow_initial))
            if count > tau * n:
                cert = SRCertificate(D, tau, n, rare, count, allow_initial)
                assert cert.verify(nu)
                return cert
    return None


def _greedy_rare_sets(g: Word, D: int, nu):
    """Rare sets built by excusing mismatch positions of each alignment of g with nu."""
    out = []
    n = len(g)
    for a in range(2, n + 1):
        exc = set()
        ok = True
        for j in range(n - a + 1):
            if not _match(g.at(a + j), _nu_at(nu, 1 + j)):
                cand = exc | {a + j}
                if is_rare(cand, D):
                    exc = cand
                else:
                    ok = False
                    break
        if ok and exc:
            out.append(frozenset(exc))
    return out


# ---------------------------------------------------------------------------
# weak pre-periodicity
# ---------------------------------------------------------------------------


def _progression_constant(nu: EventuallyPeriodicWord, m: int, k: int):
    """The single letter carried by positions m, m+k, m+2k, ... or None."""
    q, p = len(nu.pre), len(nu.period)
    steps = q // k + p + 1  # enough to visit every cycle residue the progression hits
    letters = {nu.at(m + k * j) for j in range(steps + 1)}
    return letters.pop() if len(letters) == 1 else None


def weak_preperiodicity(nu: EventuallyPeriodicWord):
    """Least (k, m) such that positions m, m+k, m+2k, ... all carry one letter.

    Every eventually periodic word has such a witness (k = period length and
    any offset inside the cycle works), so this always returns.
    """
    q, p = len(nu.pre), len(nu.period)
    for k in range(1, p + 1):
        for m in range(1, q + p + 1):
            letter = _progression_constant(nu, m, k)
            if letter is not None:
                return m, k, letter
    raise AssertionError("unreachable: the period itself always yields a witness")


def finite_wpp_scan(prefix: Word, m_max: int, k_max: int):
    """All (m, k, letter) progressions constant over the in-range positions.

    A progression with no position inside the prefix survives vacuously with
    letter None.  This is the finite falsifiable proxy used for symbolic input.
    """
    n = len(prefix)
    out = []
    for k in range(1, k_max + 1):
        for m in range(1, m_max + 1):
            letters = {prefix.at(i) for i in range(m, n + 1, k)}
            if len(letters) <= 1:
                out.append((m, k, letters.pop() if letters else None))
    return out


# ---------------------------------------------------------------------------
# legal words
# ---------------------------------------------------------------------------


def legal(g: Word, nu) -> Word:
    """Star out every position whose following suffix copies the start of nu.

    Scans from the second-to-last position down; the comparison uses the
    partially starred word, with the wildcard matching anything on either
    side.  The last letter is never starred.
    """
    u = list(g.letters)
    n = len(u)
    for k in range(n - 1, 0, -1):
        if all(
            _match(u[k + j], _nu_at(nu, 1 + j))
            for j in range(n - k)
        ):
            u[k - 1] = STAR
    return Word(tuple(u))


def truncation_holds(g: Word, t: Word, nu) -> bool:
    """Does legal(g + t) restrict to legal(g) on the first |g| letters?"""
    return legal(g + t, nu).sub(1, len(g)) == legal(g, nu)


def leading_run_length(nu: EventuallyPeriodicWord) -> int:
    """Length of the longest constant prefix of nu (infinite -> ValueError)."""
    first = nu.at(1)
    limit = len(nu.pre) + len(nu.period)
    k = 1
    while k <= limit and nu.at(k + 1) == first:
        k += 1
    if k > limit:
        raise ValueError("constant word: leading run is infinite")
    return k


def phi_graph(u: Word, nu) -> dict:
    """The star-run transfer map used to walk truncations of a doubled word.

    For i in 0..k (k = leading run length of nu, which must be < |u|), star
    out (uu) truncated to length 2|u| - i and record how many consecutive
    wildcards immediately precede position |u| + 1.
    """
    k = leading_run_length(nu)
    if not k < len(u):
        raise ValueError(f"need leading-run bound {k} < |u| = {len(u)}")
    uu = u + u
    out = {}
    for i in range(k + 1):
        v = legal(uu.sub(1, 2 * len(u) - i), nu)
        cnt = 0
        pos = len(u)
        while pos >= 1 and v.at(pos) == STAR:
            cnt += 1
            pos -= 1
        out[i] = cnt
    return out
