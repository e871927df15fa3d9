"""The decomposition pipeline: find a handle, cut the remaining handles,
build pants on boundary pairs, make the final cut, and assemble the
trivalent graph with one Schottky certificate per pants.

The driver keeps an explicit relation: a handle pair (a, b) and an ordered
list of blocks whose images multiply to +-I,

    comm(b, a) * block_1 * ... * block_m = +-I,

and every pipeline move is an exact free-group rewrite of this relation:

* prefix twist        (a, b) -> (a, a^k b)          [commutator unchanged]
* transposed twist    (a, b) -> (b^k a, b)          [commutator unchanged]
* quarter swap        (a, b) -> (b, a^-1)           [commutator conjugated]
* block swap          [P][Q] -> [Q][Q^-1 P Q]
* cut                 consumes a crossing-pair block, emits a boundary pair
* pants               consumes a boundary-pair block, emits a pants
* join                merges two pants boundary blocks into one pants
* root split          turns the final handle into the root pants

The residual of the relation is re-verified after every move, so the sign
collected when only the root comparison remains is the honest lifting
obstruction.  Exponents are searched smallest-first; the circle certificate
is the binding test for every pants.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import moebius as mb
from . import schottky as sk
from .errors import (
    AmbiguousClass,
    CertificationFailed,
    ElementaryRepresentation,
    SearchExhausted,
)
from .graph import Edge, TrivalentGraph
from .lemmas import INTERCHANGES, swaps_or_fixes
from .moebius import classify
from .words import (
    GroupWord,
    LoopRecord,
    handle_letters,
    require_nonelementary,
    surface_relator,
)
from . import elliptic as el

log = logging.getLogger("schottky_pants")

BASE_TRACE = 3.0


@dataclass
class Handle:
    a: LoopRecord
    b: LoopRecord

    def words(self):
        return (self.a.word, self.b.word)


@dataclass
class Block:
    """One factor of the tracked relation.

    kind "pair":  a crossing pair (u, v); factor = v^-1 u^-1 v u.
    kind "joint": a boundary pair or pants third; factor = u * v.
    """

    kind: str
    u: GroupWord
    v: GroupWord
    vertex: int | None = None      # pants vertex owning this boundary
    conjugator: GroupWord | None = None  # v = conj * u^-1 * conj^-1 for cut pairs

    def word(self):
        if self.kind == "pair":
            return self.v.inverse() * self.u.inverse() * self.v * self.u
        return self.u * self.v

    def conjugated(self, g):
        conj = None if self.conjugator is None else g * self.conjugator
        return Block(
            self.kind,
            g * self.u * g.inverse(),
            g * self.v * g.inverse(),
            self.vertex,
            conj,
        )


@dataclass
class PantsData:
    ident: int
    words: dict                     # slot -> GroupWord for "a", "b", "c"
    certificate: sk.SchottkyCertificate
    provenance: list = field(default_factory=list)


@dataclass
class Decomposition:
    rep: object
    pants: list
    graph: TrivalentGraph
    trace_ladder: list
    provenance: list
    root_handle: tuple
    edge_conjugators: dict = field(default_factory=dict)

    def lifts(self):
        return {
            p.ident: (self.rep.evaluate(p.words["a"]), self.rep.evaluate(p.words["b"]))
            for p in self.pants
        }

    def boundary_images(self):
        return {
            (p.ident, slot): self.rep.evaluate(word)
            for p in self.pants
            for slot, word in p.words.items()
        }


class Decomposer:
    """Single-use driver decomposing one representation."""

    MAX_ENTRY = 1e40
    SCHEDULE = (
        0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 8, -8, 10, -10,
        12, -12, 16, -16, 20, -20, 24, -24, 32, -32, 48, -48, 64, -64,
    )

    def __init__(self, rep, eps=None, max_exponent=10 ** 4, max_word_scan=8):
        self.rep = rep
        self.eps = eps if eps is not None else rep.eps
        self.cap = max_exponent
        self.scan_cap = max_word_scan
        self.genus = rep.genus
        self.provenance = []
        self.ladder = []
        self.ladder_max = BASE_TRACE
        self.handle = None
        self.blocks = []
        self.pants_list = []
        self.edges = []
        self.edge_conjugators = {}
        self._eid = 0

    # -- helpers ---------------------------------------------------------------

    def ev(self, word):
        return self.rep.evaluate(word)

    def ev_bounded(self, word):
        m = self.rep.evaluate(word)
        if not np.all(np.isfinite(m.m)) or np.max(np.abs(m.m)) > self.MAX_ENTRY:
            return None
        return m

    def note(self, msg):
        self.provenance.append(msg)
        log.debug("%s", msg)

    def _loxo(self, word):
        m = self.ev_bounded(word)
        if m is None:
            return False
        try:
            return classify(m, self.eps).tag == mb.LOXODROMIC
        except AmbiguousClass:
            return False

    def _no_common_fp(self, m1, m2):
        """Shared fixed point iff the commutator has trace 2 (scale-free)."""
        comm = ((m1 @ m2) @ m1.inverse()) @ m2.inverse()
        t = comm.trace()
        if not np.isfinite(t.real) or not np.isfinite(t.imag):
            return False
        return abs(t - 2.0) > 1e-9 * (1.0 + abs(t))

    def _push_ladder(self, label, trace_abs):
        self.ladder.append((label, float(trace_abs)))
        self.ladder_max = max(self.ladder_max, float(trace_abs))

    def _schedule(self, include_zero=True):
        for k in self.SCHEDULE:
            if k == 0 and not include_zero:
                continue
            yield k

    def _next_edge(self, end1, end2, kind, conjugator=None):
        e = Edge(self._eid, end1, end2, kind)
        self.edges.append(e)
        self.edge_conjugators[self._eid] = None if conjugator is None else str(conjugator)
        self._eid += 1

    # -- the tracked relation ----------------------------------------------------

    def relation_residual(self):
        """(deviation of the relation image from +-I, scale, sign)."""
        a_word, b_word = self.handle.words()
        word = b_word.inverse() * a_word.inverse() * b_word * a_word
        for blk in self.blocks:
            word = word * blk.word()
        m = np.eye(2, dtype=complex)
        scale = 1.0
        for g, e in word.syllables:
            base = self.rep.images[g]
            factor = base.m if e > 0 else base.inverse().m
            m = m @ np.linalg.matrix_power(factor, abs(e))
            mag = float(np.max(np.abs(m)))
            if not np.isfinite(mag):
                return np.inf, np.inf, 0
            scale = max(scale, mag)
        dev_plus = float(np.max(np.abs(m - np.eye(2))))
        dev_minus = float(np.max(np.abs(m + np.eye(2))))
        sign = 1 if dev_plus <= dev_minus else -1
        return min(dev_plus, dev_minus), scale, sign

    def check_relation(self, context):
        dev, scale, _ = self.relation_residual()
        if dev > 1e-6 * scale + 1e-8:
            raise SearchExhausted(
                context, f"tracked relation violated (dev {dev:.3g}, scale {scale:.3g})"
            )

    def swap_block_to_front(self, index):
        """Move blocks[index] to the front: [P][Q] -> [Q][Q^-1 P Q]."""
        while index > 0:
            q = self.blocks[index]
            p = self.blocks[index - 1]
            qw = q.word()
            self.blocks[index - 1] = q
            self.blocks[index] = p.conjugated(qw.inverse())
            index -= 1

    # -- stage 1: find a handle ---------------------------------------------------

    def find_handle(self):
        require_nonelementary(self.rep, max_length=self.scan_cap)
        # document the all-elliptic structure when present
        images = [
            self.rep.images[name]
            for i in range(1, self.genus + 1)
            for name in (f"a{i}", f"b{i}")
        ]
        nontrivial = [m for m in images if not m.is_identity(self.eps)]
        tags = set()
        for m in nontrivial:
            try:
                tags.add(classify(m, self.eps).tag)
            except AmbiguousClass:
                tags.add("ambiguous")
        if tags <= {mb.ELLIPTIC}:
            kind, _ = el.elliptic_family_trichotomy(nontrivial, max(self.eps, 1e-8))
            self.note(f"all generator images elliptic; axis structure: {kind}")
            if kind == el.COMMON_H_POINT:
                raise ElementaryRepresentation(("invariant form", None))

        for i0 in range(1, self.genus + 1):
            found = self._slope_search(i0)
            if found is None:
                continue
            a_word, b_word, moves = found
            self.note(f"handle in letters of handle {i0}: ({a_word}, {b_word})")
            handle = Handle(
                LoopRecord(a_word, moves), LoopRecord(b_word, moves)
            )
            blocks = []
            for j in list(range(i0 + 1, self.genus + 1)) + list(range(1, i0)):
                blocks.append(
                    Block("pair", GroupWord.letter(f"a{j}"), GroupWord.letter(f"b{j}"))
                )
            self.handle = handle
            self.blocks = blocks
            self.check_relation("handle configuration")
            return handle
        raise SearchExhausted(
            "handle search", "no single-handle slope carries a loxodromic image"
        )

    def _slope_search(self, i0, max_nodes=4000, max_length=16):
        """Breadth-first search of in-handle generating pairs via the exact
        moves (prefix twists and the quarter swap) for a loxodromic a-slot."""
        from collections import deque

        start = (GroupWord.letter(f"a{i0}"), GroupWord.letter(f"b{i0}"))
        queue = deque([(start, ["start"])])
        seen = set()
        while queue:
            (aw, bw), moves = queue.popleft()
            key = (str(aw), str(bw))
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_nodes:
                return None
            m = self.ev_bounded(aw)
            if m is not None:
                try:
                    if classify(m, self.eps).tag == mb.LOXODROMIC:
                        return aw, bw, moves
                except AmbiguousClass:
                    pass
            if aw.length() + bw.length() > max_length:
                continue
            for k in (1, -1, 2, -2):
                queue.append(((aw, aw.power(k) * bw), moves + [f"b<-a^{k}b"]))
                queue.append(((bw.power(k) * aw, bw), moves + [f"a<-b^{k}a"]))
            queue.append(((bw, aw.inverse()), moves + ["quarter swap"]))
        return None

    # -- stage 2: handle adjustment -------------------------------------------------

    def adjust_handle(self, context):
        """Exact moves until the b-image does not send one fixed point of the
        a-image to the other (and the pair is witnessed nonelementary)."""
        a_word, b_word = self.handle.words()
        alpha = self.ev(a_word)
        beta = self.ev(b_word)
        rel = swaps_or_fixes(beta, alpha, self.eps)
        if rel.kind != INTERCHANGES and not (rel.first_to_second or rel.second_to_first):
            return
        for q in self._schedule(include_zero=False):
            new_a = b_word.power(q) * a_word      # exact transposed twist
            m = self.ev_bounded(new_a)
            if m is None or classify(m, self.eps).tag != mb.LOXODROMIC:
                continue
            if abs(m.trace_sq() - beta.trace_sq()) < 1e-6 * (1 + abs(beta.trace_sq())):
                continue
            r2 = swaps_or_fixes(beta, m, self.eps)
            if r2.kind == INTERCHANGES or r2.first_to_second or r2.second_to_first:
                continue
            if not self._no_common_fp(m, beta):
                continue
            self.handle = Handle(
                self.handle.a.derived(new_a, f"adjust q={q}"), self.handle.b
            )
            self.note(f"{context}: handle adjusted with q={q}")
            self.check_relation(context)
            return
        raise SearchExhausted(context, "no exponent separates the swap")

    # -- stage 3: cut a crossing-pair block -------------------------------------------

    def cut_first_block(self, label):
        """Cut along the twisted crossing pair in blocks[0].

        Exact rewrite (relation-preserving, re-verified):
            b' = a^k b ; d = y b' ; a' = a (b' y)^n
            m1 = x d^n ; m2 = y^-1 m1^-1 y
            trailing blocks conjugated by d^-n.
        """
        self.adjust_handle(f"cut {label}")
        blk = self.blocks[0]
        assert blk.kind == "pair"
        x_word, y_word = blk.u, blk.v
        a_word, b_word = self.handle.words()
        ladder_floor = self.ladder_max + 0.5

        for k in self._schedule():
            bt = a_word.power(k) * b_word
            if not self._loxo(bt):
                continue
            d_word = y_word * bt
            delta = self.ev_bounded(d_word)
            if delta is None:
                continue
            try:
                if classify(delta, self.eps).tag != mb.LOXODROMIC:
                    continue
            except AmbiguousClass:
                continue
            for n in self._schedule(include_zero=False):
                new_a = a_word * (bt * y_word).power(n)
                na = self.ev_bounded(new_a)
                if na is None or not self._loxo(new_a):
                    continue
                m1_word = x_word * d_word.power(n)
                m1 = self.ev_bounded(m1_word)
                if m1 is None or not self._loxo(m1_word):
                    continue
                if abs(m1.trace()) <= ladder_floor:
                    continue
                gamma = self.ev_bounded(bt)
                if gamma is None or not self._loxo(bt):
                    continue
                if not self._no_common_fp(na, gamma):
                    continue
                m2_word = y_word.inverse() * m1_word.inverse() * y_word
                new_handle = Handle(
                    self.handle.a.derived(new_a, f"cut twist n={n}"),
                    self.handle.b.derived(bt, f"cut power k={k}"),
                )
                old_handle, old_blocks = self.handle, self.blocks
                conj = d_word.power(-n)
                self.handle = new_handle
                self.blocks = [
                    Block("joint", m2_word, m1_word, conjugator=y_word.inverse())
                ] + [b.conjugated(conj) for b in old_blocks[1:]]
                try:
                    self.check_relation(f"cut {label}")
                except SearchExhausted:
                    self.handle, self.blocks = old_handle, old_blocks
                    continue
                tr1 = abs(m1.trace())
                self._push_ladder(f"cut {label}", tr1)
                self.note(f"cut {label}: k={k}, n={n}, boundary |tr|={tr1:.4f}")
                return
        raise SearchExhausted(f"cut {label}", "no (k, n) in the schedule")

    # -- stage 4: pants on the first joint block ------------------------------------

    def pants_on_first_block(self, label, final_stage=False):
        """Pants on the boundary pair in blocks[0].

        Exact rewrite: b' = a^k b ; D = u b' ; a' = a b'^n;
        slots (a, b) = (D^-n u D^n, b'^-n v b'^n), third = their product.
        In the final single-block stage the pair may first be repositioned
        by powers of the handle boundary (an exact move there), and a block
        that already belongs to a pants is rewritten in place.
        """
        self.adjust_handle(f"pants {label}")
        blk = self.blocks[0]
        assert blk.kind == "joint"
        a_word, b_word = self.handle.words()
        ladder_floor = self.ladder_max + 0.5
        m_options = (0,)
        if final_stage and len(self.blocks) == 1:
            m_options = (0, 1, -1, 2, -2)

        for m_conj in m_options:
            u_word, v_word = blk.u, blk.v
            blk_conj = blk.conjugator
            if m_conj != 0:
                k_word = b_word.inverse() * a_word.inverse() * b_word * a_word
                g = k_word.power(m_conj)
                u_word = g * blk.u * g.inverse()
                v_word = g * blk.v * g.inverse()
                if blk_conj is not None:
                    blk_conj = g * blk_conj
            for k in self._schedule():
                bt = a_word.power(k) * b_word
                if not self._loxo(bt):
                    continue
                d_word = u_word * bt
                if not self._loxo(d_word):
                    continue
                for n in self._schedule(include_zero=(not final_stage)):
                    new_a = a_word * bt.power(n)
                    if not self._loxo(new_a):
                        continue
                    slot_a = d_word.power(-n) * u_word * d_word.power(n)
                    slot_b = bt.power(-n) * v_word * bt.power(n)
                    ia = self.ev_bounded(slot_a)
                    ib = self.ev_bounded(slot_b)
                    if ia is None or ib is None:
                        continue
                    third_word = slot_a * slot_b
                    third = self.ev_bounded(third_word)
                    if third is None or not self._loxo(third_word):
                        continue
                    if not final_stage and abs(third.trace()) <= ladder_floor:
                        continue
                    if not self._no_common_fp(ia, ib):
                        continue
                    try:
                        cert = sk.certify(ia, ib, self.eps)
                    except Exception:
                        continue
                    if not sk.verify(cert).ok:
                        continue
                    new_gamma = self.ev_bounded(bt)
                    na = self.ev_bounded(new_a)
                    if new_gamma is None or na is None:
                        continue
                    if not self._no_common_fp(na, new_gamma):
                        continue
                    if final_stage:
                        # the root pair must certify as well before accepting
                        root_a = bt.inverse()
                        root_b = new_a.inverse() * bt * new_a
                        ra = self.ev_bounded(root_a)
                        rb = self.ev_bounded(root_b)
                        if ra is None or rb is None:
                            continue
                        if not self._no_common_fp(ra, rb):
                            continue
                        try:
                            root_cert = sk.certify(ra, rb, self.eps)
                        except Exception:
                            continue
                        if not sk.verify(root_cert).ok:
                            continue
                    old_handle, old_blocks = self.handle, self.blocks
                    self.handle = Handle(
                        old_handle.a.derived(new_a, f"pants twist n={n}"),
                        old_handle.b.derived(bt, f"pants power k={k}"),
                    )
                    if blk.vertex is None:
                        ident = len(self.pants_list)
                    else:
                        ident = blk.vertex
                    new_conj = None
                    if blk_conj is not None:
                        new_conj = d_word.power(-n) * blk_conj * bt.power(n)
                    new_block = Block(
                        "joint", slot_a, slot_b, vertex=ident, conjugator=new_conj
                    )
                    trailing = [b.conjugated(bt.power(-n)) for b in old_blocks[1:]]
                    self.blocks = [new_block] + trailing
                    try:
                        self.check_relation(f"pants {label}")
                    except SearchExhausted:
                        self.blocks = [new_block] + [
                            b.conjugated(d_word.power(-n)) for b in old_blocks[1:]
                        ]
                        try:
                            self.check_relation(f"pants {label}")
                        except SearchExhausted:
                            self.handle, self.blocks = old_handle, old_blocks
                            continue
                    pants = PantsData(
                        ident=ident,
                        words={"a": slot_a, "b": slot_b, "c": third_word},
                        certificate=cert,
                        provenance=[f"{label}: k={k}, n={n}, m={m_conj}"],
                    )
                    if blk.vertex is None:
                        self.pants_list.append(pants)
                        self._next_edge((ident, "a"), (ident, "b"), "loop", new_conj)
                        self._push_ladder(
                            f"pants {label} third", abs(third.trace())
                        )
                    else:
                        pants.provenance = (
                            self.pants_list[ident].provenance + pants.provenance
                        )
                        self.pants_list[ident] = pants
                    self.note(
                        f"pants {label}: k={k}, n={n}, m={m_conj}, third |tr|="
                        f"{abs(third.trace()):.4g}, margin={cert.margin:.4f}"
                    )
                    return pants
        raise SearchExhausted(f"pants {label}", "no (k, n) certifies the pants")

    # -- stage 5: join two pants boundaries --------------------------------------------

    def join_first_blocks(self, label):
        """Merge blocks[0] and blocks[1] (pants boundaries from different
        vertices) into one pants; exact because the new third is literally
        the product of the two block words."""
        b1, b2 = self.blocks[0], self.blocks[1]
        t1_word, t2_word = b1.word(), b2.word()
        i1 = self.ev_bounded(t1_word)
        i2 = self.ev_bounded(t2_word)
        if i1 is None or i2 is None:
            raise SearchExhausted(f"join {label}", "boundary image overflow")
        if not self._no_common_fp(i1, i2):
            raise SearchExhausted(f"join {label}", "boundaries share a fixed point")
        try:
            cert = sk.certify(i1, i2, self.eps)
        except CertificationFailed as e:
            raise SearchExhausted(
                f"join {label}", f"certification failed (margin {e.best_margin:.3g})"
            )
        if not sk.verify(cert).ok:
            raise SearchExhausted(f"join {label}", "certificate failed verification")
        third_word = t1_word * t2_word
        third = self.ev_bounded(third_word)
        if third is None or not self._loxo(third_word):
            raise SearchExhausted(f"join {label}", "third boundary not loxodromic")
        if abs(third.trace()) <= self.ladder_max + 0.5:
            raise SearchExhausted(f"join {label}", "third boundary below the ladder")
        ident = len(self.pants_list)
        pants = PantsData(
            ident=ident,
            words={"a": t1_word, "b": t2_word, "c": third_word},
            certificate=cert,
            provenance=[f"{label}: join"],
        )
        self.pants_list.append(pants)
        self._next_edge((ident, "a"), (b1.vertex, "c"), "tree")
        self._next_edge((ident, "b"), (b2.vertex, "c"), "tree")
        self.blocks = [Block("joint", t1_word, t2_word, vertex=ident)] + self.blocks[2:]
        self.check_relation(f"join {label}")
        self._push_ladder(f"pants {label} third", abs(third.trace()))
        self.note(f"join {label}: third |tr|={abs(third.trace()):.4g}")
        return pants

    # -- stage 6: the root split ----------------------------------------------------

    def root_split(self):
        """Split the final handle into the root pants.

        comm(b, a) = (b^-1) * (a^-1 b a), so the root slots are
        (a, b, c) = (b^-1, a^-1 b a, comm) and the tracked relation reduces
        to comm * T = +-I against the last boundary block T, whose sign is
        the lifting obstruction.
        """
        a_word, b_word = self.handle.words()
        slot_a = b_word.inverse()
        slot_b = a_word.inverse() * b_word * a_word
        ia = self.ev_bounded(slot_a)
        ib = self.ev_bounded(slot_b)
        if ia is None or ib is None:
            raise SearchExhausted("root split", "root images overflow")
        if not self._no_common_fp(ia, ib):
            raise SearchExhausted("root split", "root generators share a fixed point")
        cert = sk.certify(ia, ib, self.eps)
        if not sk.verify(cert).ok:
            raise SearchExhausted("root split", "root certificate failed verification")
        ident = len(self.pants_list)
        c_word = slot_a * slot_b
        pants = PantsData(
            ident=ident,
            words={"a": slot_a, "b": slot_b, "c": c_word},
            certificate=cert,
            provenance=["root pants from the final handle"],
        )
        self.pants_list.append(pants)
        self._next_edge((ident, "a"), (ident, "b"), "loop", a_word.inverse())
        adjacent = self.blocks[0].vertex
        self._next_edge((ident, "c"), (adjacent, "c"), "tree")
        self.note("root split complete")
        return pants

    # -- orchestration ------------------------------------------------------------------

    def run(self):
        g = self.genus
        self.find_handle()

        # make the b-slot loxodromic too (handle property), exact move
        if not self._loxo(self.handle.b.word):
            a_word, b_word = self.handle.words()
            for k in self._schedule(include_zero=False):
                cand = a_word.power(k) * b_word
                if self._loxo(cand) and self._no_common_fp(
                    self.ev(cand), self.ev(a_word)
                ):
                    self.handle = Handle(
                        self.handle.a, self.handle.b.derived(cand, f"power k={k}")
                    )
                    self.note(f"handle b-slot boosted with k={k}")
                    break
            else:
                raise SearchExhausted("handle", "cannot boost b-slot to loxodromic")
        self.check_relation("handle")

        # cut every remaining crossing pair
        for step in range(g - 1):
            idx = next(i for i, b in enumerate(self.blocks) if b.kind == "pair")
            self.swap_block_to_front(idx)
            self.check_relation(f"swap before cut {step + 1}")
            self.cut_first_block(f"{step + 1}")

        # pants on each boundary pair, then join down to one block
        for step in range(g - 1):
            idx = next(
                i
                for i, b in enumerate(self.blocks)
                if b.kind == "joint" and b.vertex is None
            )
            self.swap_block_to_front(idx)
            self.check_relation(f"swap before pants {step + 1}")
            self.pants_on_first_block(f"pair {step + 1}")

        while len(self.blocks) > 1:
            self.join_first_blocks(f"{len(self.blocks)} blocks")

        # final repositioning pants move to make the root certifiable, then split
        try:
            self.root_split()
        except (SearchExhausted, CertificationFailed, Exception):
            self.pants_on_first_block("final reposition", final_stage=True)
            # the reposition replaced the adjacent pants' vertex: rewire is
            # unnecessary because it created a fresh vertex consuming the old
            # block; now split
            self.root_split()

        graph = TrivalentGraph(
            genus=g,
            vertices=[p.ident for p in self.pants_list],
            edges=self.edges,
            root=self.pants_list[-1].ident,
        )
        graph.validate()
        dec = Decomposition(
            rep=self.rep,
            pants=self.pants_list,
            graph=graph,
            trace_ladder=self.ladder,
            provenance=self.provenance,
            root_handle=tuple(str(w) for w in self.handle.words()),
            edge_conjugators=self.edge_conjugators,
        )
        self._verify_invariants(dec)
        return dec

    def _verify_invariants(self, dec):
        rel = self.rep.evaluate(surface_relator(self.genus))
        if not rel.is_identity(max(self.eps, 1e-6)):
            raise SearchExhausted("invariants", "input relator violated")
        thirds = [t for (lbl, t) in dec.trace_ladder if lbl.startswith("pants")]
        if any(t2 <= t1 for t1, t2 in zip(thirds, thirds[1:])):
            raise SearchExhausted("invariants", "trace ladder not increasing")
        for p in dec.pants:
            if not sk.verify(p.certificate).ok:
                raise SearchExhausted("invariants", f"pants {p.ident} certificate")
        #每 edge: paired slots carry inverse-conjugate elements (equal |tr|)
        imgs = dec.boundary_images()
        for e in dec.graph.edges:
            t1 = imgs[e.end1].trace()
            t2 = imgs[e.end2].trace()
            if abs(abs(t1) - abs(t2)) > 1e-5 * max(1.0, abs(t1)):
                raise SearchExhausted(
                    "invariants", f"edge {e.ident} trace mismatch ({t1:.4g} vs {t2:.4g})"
                )


def decompose(rep, eps=None, max_exponent=10 ** 4, max_word_scan=8):
    """Full pants decomposition with Schottky certificates."""
    return Decomposer(rep, eps, max_exponent, max_word_scan).run()
