"""Surface-group words, representation evaluation, and the prescribed
rewriting moves.

Words are freely reduced sequences of (letter, exponent) pairs over named
generators a1, b1, ..., ag, bg (plus any auxiliary letters a representation
defines).  Composition is written right to left: in the word "ba" the loop a
is traversed first, and evaluation multiplies matrices in the written order,
evaluate("ba") = theta(b) theta(a).
"""

from __future__ import annotations

import itertools

import numpy as np

from . import moebius as mb
from .errors import (
    ElementaryRepresentation,
    InconclusiveNonelementarity,
    RelatorViolated,
    UnknownGenerator,
    UnsupportedMove,
)
from .moebius import MoebiusMap, chordal_distance, classify, fixed_points


class GroupWord:
    """Freely reduced word: tuple of (letter, nonzero exponent) pairs."""

    __slots__ = ("syllables",)

    def __init__(self, syllables=()):
        self.syllables = _reduce(tuple((g, int(e)) for g, e in syllables))

    @classmethod
    def from_string(cls, text):
        """Parse "b1^-1 a1^-1 b1 a1" style notation ("" is the identity)."""
        syls = []
        for token in text.split():
            if "^" in token:
                letter, exp = token.split("^", 1)
                syls.append((letter, int(exp)))
            else:
                syls.append((token, 1))
        return cls(syls)

    @classmethod
    def letter(cls, name, exp=1):
        return cls(((name, exp),))

    def __mul__(self, other):
        return GroupWord(self.syllables + other.syllables)

    def inverse(self):
        return GroupWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def conjugated_by(self, w):
        """w * self * w^{-1}."""
        return w * self * w.inverse()

    def power(self, n):
        if n == 0:
            return GroupWord()
        base = self if n > 0 else self.inverse()
        out = GroupWord()
        for _ in range(abs(n)):
            out = out * base
        return out

    def is_trivial(self):
        return not self.syllables

    def length(self):
        return sum(abs(e) for _, e in self.syllables)

    def letters(self):
        return {g for g, _ in self.syllables}

    def __eq__(self, other):
        return self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __str__(self):
        return " ".join(
            g if e == 1 else f"{g}^{e}" for g, e in self.syllables
        )

    def __repr__(self):
        return f"GroupWord({str(self)!r})"


def _reduce(syllables):
    """Concatenate adjacent equal letters and drop zero exponents."""
    out = []
    for g, e in syllables:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            merged = out[-1][1] + e
            out.pop()
            if merged != 0:
                out.append((g, merged))
        else:
            out.append((g, e))
    # merging can create new adjacencies
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i][0] == out[i + 1][0]:
                merged = out[i][1] + out[i + 1][1]
                out[i : i + 2] = [(out[i][0], merged)] if merged else []
                changed = True
                break
    return tuple(out)


def free_reduce(word):
    return GroupWord(word.syllables)


def surface_relator(g):
    """prod_i bi^-1 ai^-1 bi ai, the defining relator of a genus-g group."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    syls = []
    for i in range(1, g + 1):
        syls += [(f"b{i}", -1), (f"a{i}", -1), (f"b{i}", 1), (f"a{i}", 1)]
    return GroupWord(syls)


def standard_generators(g):
    return [f"a{i}" for i in range(1, g + 1)] + [f"b{i}" for i in range(1, g + 1)]


def handle_letters(g):
    """[(a1, b1), ..., (ag, bg)]."""
    return [(f"a{i}", f"b{i}") for i in range(1, g + 1)]


class SurfaceRep:
    """Representation of a genus-g surface group by generator images."""

    def __init__(self, genus, images, eps=mb.EPS, check_relator=True):
        self.genus = int(genus)
        self.images = dict(images)
        self.eps = float(eps)
        for a, b in handle_letters(self.genus):
            if a not in self.images or b not in self.images:
                raise UnknownGenerator(f"missing image for {a} or {b}")
        if check_relator:
            rel = self.evaluate(surface_relator(self.genus))
            if not rel.is_identity(max(self.eps, 1e-7)):
                raise RelatorViolated(
                    f"relator image deviates from +-I by {rel.psl_distance(mb.identity()):.3g}"
                )

    def evaluate(self, word):
        """Matrix image; leftmost letter is the leftmost factor."""
        m = np.eye(2, dtype=complex)
        for g, e in word.syllables:
            if g not in self.images:
                raise UnknownGenerator(g)
            base = self.images[g]
            factor = base.m if e > 0 else base.inverse().m
            m = m @ np.linalg.matrix_power(factor, abs(e))
        return MoebiusMap(m)

    def generator_names(self):
        return standard_generators(self.genus)


def evaluate(rep, word):
    return rep.evaluate(word)


# ---------------------------------------------------------------------------
# loop records and the prescribed move catalog


class LoopRecord:
    """A word together with the construction moves that produced it.

    The simple flag is set only when every move in the provenance belongs to
    the certified catalog of simple-loop productions.
    """

    __slots__ = ("word", "provenance", "simple")

    def __init__(self, word, provenance=(), simple=True):
        self.word = word
        self.provenance = list(provenance)
        self.simple = simple

    def derived(self, word, move, simple=None):
        return LoopRecord(
            word,
            self.provenance + [move],
            self.simple if simple is None else simple,
        )

    def __repr__(self):
        return f"LoopRecord({self.word!r}, simple={self.simple})"


# move kinds understood by dehn_substitute
MOVE_POWER_APPEND = "power_append"        # pair (a, b) -> (a, b a^k)
MOVE_TWIST_PREFIX = "twist_prefix"        # pair (x, y) -> (d^n x, y)
MOVE_TWIST_CONJUGATE = "twist_conjugate"  # pair (x, y) -> (d^-n x d^n, y)
MOVE_CONJUGATE_PAIR = "conjugate_pair"    # pair (x, y) -> (c^m x c^-m, c^m y c^-m)

_MOVES = (
    MOVE_POWER_APPEND,
    MOVE_TWIST_PREFIX,
    MOVE_TWIST_CONJUGATE,
    MOVE_CONJUGATE_PAIR,
)


def dehn_substitute(pair, move, order, aux=None):
    """Apply one prescribed substitution to a pair of words.

    pair:  (first, second) GroupWords
    move:  one of the MOVE_* kinds above
    order: the integer twist order (0 leaves the pair unchanged)
    aux:   the twisting/conjugating word (required except for power_append,
           where it defaults to the first word of the pair)

    Only these textual substitutions are performed; no general mapping-class
    action is attempted.
    """
    if move not in _MOVES:
        raise UnsupportedMove(str(move))
    x, y = pair
    n = int(order)
    if n == 0:
        return (x, y)
    if move == MOVE_POWER_APPEND:
        base = aux if aux is not None else x
        return (x, y * base.power(n))
    if aux is None:
        raise UnsupportedMove(f"{move} requires the twisting word")
    d = aux
    if move == MOVE_TWIST_PREFIX:
        return (d.power(n) * x, y)
    if move == MOVE_TWIST_CONJUGATE:
        return (d.power(-n) * x * d.power(n), y)
    # conjugate_pair
    return (x.conjugated_by(d.power(n)), y.conjugated_by(d.power(n)))


def twist_conjugate_runs(word, d, n, inside_letters):
    """Conjugate every maximal run of letters from inside_letters by d^n.

    This is the textual action of a twist about a curve separating the
    inside letters' handles from the rest: runs of inside letters pick up
    d^n ... d^-n around them, other letters are untouched.
    """
    if n == 0:
        return GroupWord(word.syllables)
    dn = d.power(n)
    dninv = d.power(-n)
    out = GroupWord()
    run = GroupWord()
    for g, e in word.syllables:
        if g in inside_letters:
            run = run * GroupWord.letter(g, e)
        else:
            if not run.is_trivial():
                out = out * dn * run * dninv
                run = GroupWord()
            out = out * GroupWord.letter(g, e)
    if not run.is_trivial():
        out = out * dn * run * dninv
    return out


def homology_vector(word, genus):
    """Exponent sums over the standard generators (a1, b1, ..., ag, bg)."""
    idx = {}
    for i in range(1, genus + 1):
        idx[f"a{i}"] = 2 * (i - 1)
        idx[f"b{i}"] = 2 * (i - 1) + 1
    v = [0] * (2 * genus)
    for g, e in word.syllables:
        if g in idx:
            v[idx[g]] += e
    return tuple(v)


def homology_intersection(u, v):
    """Standard symplectic form: <a_i, b_i> = 1."""
    total = 0
    for i in range(0, len(u), 2):
        total += u[i] * v[i + 1] - u[i + 1] * v[i]
    return total


# ---------------------------------------------------------------------------
# nonelementarity


class NonelementarityResult:
    """Outcome of the nonelementarity scan."""

    def __init__(self, nonelementary, witness, certificate=None):
        self.nonelementary = nonelementary
        self.witness = witness          # pair of words when nonelementary
        self.certificate = certificate  # description of the invariant object

    def __bool__(self):
        return self.nonelementary


def _fixed_set(m, eps):
    try:
        return fixed_points(m, eps)
    except Exception:
        return ()


def _preserves_point(images, p, eps):
    return all(chordal_distance(m(p), p) < eps for m in images)


def _preserves_pair(images, p, q, eps):
    for m in images:
        mp, mq = m(p), m(q)
        same = chordal_distance(mp, p) < eps and chordal_distance(mq, q) < eps
        swapped = chordal_distance(mp, q) < eps and chordal_distance(mq, p) < eps
        if not (same or swapped):
            return False
    return True


def invariant_form(images, eps=1e-8):
    """Positive-definite Hermitian H with M H M* = H for all images, if any.

    Such a form is a fixed point of the group in hyperbolic 3-space (the
    unitary case); returns the form or None.
    """
    rows = []
    for m in images:
        # linear map H -> M H M* - H on the real coordinates (A, Re b, Im b, C)
        basis = [
            np.array([[1, 0], [0, 0]], dtype=complex),
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, 1j], [-1j, 0]], dtype=complex),
            np.array([[0, 0], [0, 1]], dtype=complex),
        ]
        cols = []
        for h in basis:
            out = m.m @ h @ np.conj(m.m.T) - h
            cols.append([out[0, 0].real, out[0, 1].real, out[0, 1].imag, out[1, 1].real])
        rows.extend(np.array(cols).T)
    mat = np.array(rows)
    _, svals, vh = np.linalg.svd(mat)
    if svals[-1] > eps * max(1.0, svals[0]):
        return None
    a, br, bi, c = vh[-1]
    h = np.array([[a, br + 1j * bi], [br - 1j * bi, c]])
    if h[0, 0].real < 0:
        h = -h
    det = h[0, 0].real * h[1, 1].real - abs(h[0, 1]) ** 2
    if h[0, 0].real > eps and det > eps:
        return h
    return None


def _word_candidates(names, max_length, budget):
    """Freely reduced words over the generator alphabet in BFS order."""
    alphabet = [(g, 1) for g in names] + [(g, -1) for g in names]
    frontier = [GroupWord.letter(g, e) for g, e in alphabet]
    seen = 0
    for w in frontier:
        yield w
    for _ in range(max_length - 1):
        new = []
        for w in frontier:
            for g, e in alphabet:
                ext = w * GroupWord.letter(g, e)
                if ext.length() > w.length():
                    new.append(ext)
                    seen += 1
                    if seen > budget:
                        return
        for w in new:
            yield w
        frontier = new


def is_nonelementary(rep, max_length=8, budget=200000):
    """Decide nonelementarity with an explicit witness or certificate.

    Nonelementary witness: two words with loxodromic images and no common
    fixed point.  Elementary certificates: a point or point pair on the
    sphere invariant under all generators, or (all-elliptic case) an
    invariant positive-definite Hermitian form, i.e. a fixed point in
    hyperbolic 3-space.  Raises InconclusiveNonelementarity when the scan
    bounds are hit first.
    """
    eps = max(rep.eps, 1e-8)
    names = rep.generator_names()
    gen_images = [rep.images[g] for g in names]
    nontrivial = [m for m in gen_images if not m.is_identity(eps)]
    if not nontrivial:
        return NonelementarityResult(False, None, "all generators trivial")

    # invariant point or pair: candidates are fixed points of generators and
    # of their pairwise products (a swapped pair is fixed by squares/products)
    candidates = []
    for m in nontrivial:
        candidates.extend(_fixed_set(m, eps))
    for m1, m2 in itertools.combinations_with_replacement(nontrivial, 2):
        prod = m1 @ m2
        if not prod.is_identity(eps):
            candidates.extend(_fixed_set(prod, eps))
    distinct = []
    for p in candidates:
        if all(chordal_distance(p, q) > 10 * eps for q in distinct):
            distinct.append(p)
    for p in distinct:
        if _preserves_point(gen_images, p, 10 * eps):
            return NonelementarityResult(False, None, ("invariant point", p))
    for p, q in itertools.combinations(distinct, 2):
        if _preserves_pair(gen_images, p, q, 10 * eps):
            return NonelementarityResult(False, None, ("invariant pair", (p, q)))

    # unitary case: all generators elliptic or identity
    classes = []
    for m in nontrivial:
        try:
            classes.append(classify(m, eps).tag)
        except Exception:
            classes.append(None)
    if all(c == mb.ELLIPTIC for c in classes):
        form = invariant_form(nontrivial)
        if form is not None:
            return NonelementarityResult(False, None, ("invariant form", form))

    # scan for two loxodromic words without a common fixed point
    loxo = []  # (word, fixed point pair)
    count = 0
    for w in _word_candidates(names, max_length, budget):
        count += 1
        if count > budget:
            break
        m = rep.evaluate(w)
        try:
            tag = classify(m, eps).tag
        except Exception:
            continue
        if tag != mb.LOXODROMIC:
            continue
        pts = fixed_points(m, eps)
        for w0, pts0 in loxo:
            if all(
                chordal_distance(p, q) > 100 * eps
                for p in pts
                for q in pts0
            ):
                return NonelementarityResult(True, (w0, w))
        if len(loxo) < 16:
            loxo.append((w, pts))
    raise InconclusiveNonelementarity(
        f"no witness or certificate after scanning {count} words "
        f"(length cap {max_length})"
    )


def require_nonelementary(rep, max_length=8):
    res = is_nonelementary(rep, max_length=max_length)
    if not res:
        raise ElementaryRepresentation(res.certificate)
    return res
