"""Sheet combinatorics of cyclic branched covers.

Model: the N-sheeted cover of the sphere branched over the two fixed points
of a loxodromic, with sheets labeled 0..N-1 in cyclic order and a marked
lift of the reference arc sitting between sheets 0 and 1.  A second arc is
described by its word of signed transverse crossings with the reference
loop; the lift walks one sheet per crossing, and it stays disjoint from the
marked lift exactly when the walk never steps across the marked boundary.

All computations here are exact integer combinatorics.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SchottkyPantsError


class UnbalancedWord(SchottkyPantsError):
    """Crossing word has nonzero total sum (arc does not close up)."""


def _check_word(word):
    word = tuple(int(s) for s in word)
    if any(s not in (-1, 1) for s in word):
        raise ValueError("crossings must be +-1")
    return word


def total_sum(word):
    return sum(word)


def intersection_measure(word):
    """Largest |sum| over contiguous crossing subsequences.

    The word must balance (total 0); for a balanced word every cyclic
    interval has the negated sum of its complement, so linear intervals
    already realize the cyclic maximum.
    """
    word = _check_word(word)
    if sum(word) != 0:
        raise UnbalancedWord(f"total crossing sum {sum(word)} != 0")
    prefix = [0]
    for s in word:
        prefix.append(prefix[-1] + s)
    # max interval |sum| = max over prefix differences
    return max(prefix) - min(prefix)


@dataclass(frozen=True)
class LiftOutcome:
    disjoint: bool
    collision_step: int | None = None  # 1-based crossing index
    closed: bool = True

    def __bool__(self):
        return self.disjoint


def simulate_lift(word, sheets, start_sheet):
    """Walk the lift through the sheets and test disjointness from the
    marked lift (the boundary between sheets 0 and 1).

    A +1 crossing moves up one sheet (crossing the boundary above), a -1
    crossing moves down; the walk collides when it steps across the marked
    boundary, i.e. steps up from sheet 0 or down from sheet 1 (mod N).
    """
    word = _check_word(word)
    n = int(sheets)
    if n < 1:
        raise ValueError("need at least one sheet")
    s = int(start_sheet) % n
    for i, step in enumerate(word, start=1):
        if step == 1 and s % n == 0:
            return LiftOutcome(False, i)
        if step == -1 and s % n == 1 % n:
            return LiftOutcome(False, i)
        s = (s + step) % n
    if sum(word) % n != 0:
        return LiftOutcome(False, None, closed=False)
    return LiftOutcome(True)


def separating_sheets_loops(word):
    """Sheet count N = 2n + 1 with disjoint lifts of the two loops, where n
    is the intersection measure; the walk from the middle sheet is verified.
    """
    n = intersection_measure(word)
    sheets = 2 * n + 1
    outcome = simulate_lift(word, sheets, n + 1)
    assert outcome.disjoint, "separation bound failed; walk model violated"
    return sheets


def minimal_disjoint_sheets(word, cap=None):
    """Brute-force smallest N admitting a disjoint lift from some start
    sheet (independent check that the 2n + 1 bound is never beaten upward).
    """
    word = _check_word(word)
    if sum(word) != 0:
        raise UnbalancedWord("word must balance")
    cap = cap or (2 * intersection_measure(word) + 1)
    for n in range(1, cap + 1):
        for start in range(n):
            if simulate_lift(word, n, start).disjoint:
                return n
    return None


# ---------------------------------------------------------------------------
# region separation


def region_walk(word, sheets, first_lift):
    """Lift labels hit by successive crossings, starting at the given lift.

    Crossing i of the arc hits lift label first_lift + (prefix_i - prefix_1);
    between consecutive crossings (cyclically) the arc occupies the sector
    min of the two labels.  Returns (labels, sectors); for a crossing-free
    word the arc occupies the single sector first_lift.
    """
    word = _check_word(word)
    if not word:
        return [], [int(first_lift)]
    prefix = []
    acc = 0
    for s in word:
        acc += s
        prefix.append(acc)
    labels = [int(first_lift) + (p - prefix[0]) for p in prefix]
    sectors = []
    k = len(labels)
    for i in range(k):
        nxt = labels[(i + 1) % k]
        sectors.append(min(labels[i], nxt))
    return labels, sectors


def region_separation_ok(word, sheets, first_lift):
    """Disjointness of the marked region from the companion region.

    The marked region occupies sector 0 (between lifts 0 and 1).  The
    companion arc must avoid lift 0, and the region to its right occupies
    the sectors one below the arc's sectors, so the arc's sectors must avoid
    both 0 and 1 (mod N).
    """
    n = int(sheets)
    labels, sectors = region_walk(word, n, first_lift)
    if any(l % n == 0 for l in labels):
        return False
    return all(s % n not in (0, 1) for s in sectors)


def separating_sheets_regions(word):
    """Sheet count N = 2n + 4 separating the bordered regions, verified by
    the sector simulation with the arc entering at lift n + 2.

    For a crossing-free word the returned N is 4, although 3 sheets already
    suffice in that case.
    """
    n = intersection_measure(word)
    sheets = 2 * n + 4
    assert region_separation_ok(word, sheets, n + 2), "separation bound failed"
    return sheets


def minimal_region_sheets(word, cap=None):
    """Brute-force smallest N passing the region simulation for some entry
    lift."""
    word = _check_word(word)
    if sum(word) != 0:
        raise UnbalancedWord("word must balance")
    cap = cap or (2 * intersection_measure(word) + 4)
    for n in range(1, cap + 1):
        for first in range(n):
            if region_separation_ok(word, n, first):
                return n
    return None


def twist_normalize(word):
    """Balance an arc word by appending uniform crossings: the unique twist
    order m with total(word) + m = 0, returning (m, balanced word)."""
    word = _check_word(word)
    m = -sum(word)
    sign = 1 if m > 0 else -1
    return m, word + tuple(sign for _ in range(abs(m)))


def all_balanced_words(max_length):
    """Every +-1 word of even length <= max_length with zero sum."""
    import itertools

    out = []
    for length in range(0, max_length + 1, 2):
        for combo in itertools.product((1, -1), repeat=length):
            if sum(combo) == 0:
                out.append(combo)
    return out
