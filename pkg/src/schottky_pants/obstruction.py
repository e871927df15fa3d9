"""The mod-2 machinery: twist arithmetic on pants, tree-walk compatibility
planning, the lifting obstruction computed from commutator products and from
trace-compatible lifts over the decomposition graph, the index-two cover
presentation, and the branch-point directive.

A pair of twist orders (p, q) about the two compressing loops of a pants
shifts its boundary projections by (p + q, -q, p) on slots (a, b, c); the
algebraic total (p + q) - (-q)... the effective sum 2p is even, so only the
parity of the total demand over the graph is an invariant, and it matches
the sign obstruction of lifting the holonomy to SL(2, C).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import moebius as mb
from .errors import MalformedGraph, ParityObstruction, RelatorViolated
from .graph import TrivalentGraph
from .moebius import MoebiusMap, normalize
from .words import GroupWord, handle_letters, surface_relator

log = logging.getLogger("schottky_pants")


# ---------------------------------------------------------------------------
# twist arithmetic


def pants_twist_effect(p, q):
    """Boundary shifts (da, db, dc) of twists of orders p about x and q
    about y: a -> d^(p+q) a, b -> d^-q b, c -> d^p c."""
    return (p + q, -q, p)


TWO_OTHER_PANTS = "two_other_pants"
SELF_PAIRED = "self_paired"
IDENTICAL_PAIR = "identical_pair"


@dataclass(frozen=True)
class TwistAssignment:
    p: int
    q: int
    residual: int | None = None       # induced shift on the third boundary
    partner: tuple | None = None      # (p1, q1) in the identical-pair mode


def solve_pants(m, n, mode):
    """Twist orders meeting the compatibility demands of one pants.

    two_other_pants: demands m on b and n on c; always solvable with
        p = n, q = -m; the third boundary picks up n - m.
    self_paired:     demand n on c and m between the paired (a, b); solvable
        iff m + n is even, with q = -(m + n)/2.
    identical_pair:  two mirrored pants with demands m and n crossing over;
        always solvable, e.g. q = -m, q1 = -n.
    """
    m = int(m)
    n = int(n)
    if mode == TWO_OTHER_PANTS:
        return TwistAssignment(p=n, q=-m, residual=n - m)
    if mode == SELF_PAIRED:
        if (m + n) % 2 != 0:
            raise ParityObstruction(m, n)
        return TwistAssignment(p=n, q=-(m + n) // 2)
    if mode == IDENTICAL_PAIR:
        return TwistAssignment(p=n, q=-m, partner=(n, -n))
    raise ValueError(f"unknown mode {mode!r}")


def _slot_shift(slot, p, q):
    da, db, dc = pants_twist_effect(p, q)
    return {"a": da, "b": db, "c": dc}[slot]


@dataclass
class CompatibilityPlan:
    feasible: bool
    assignment: dict            # vertex -> (p, q)
    parity: int                 # sum of requirements mod 2
    odd_edge: int | None = None # loop edge carrying the localized odd demand

    def __bool__(self):
        return self.feasible


def plan_compatibility(graph: TrivalentGraph, requirements):
    """Tree walk assigning twist orders per vertex for the edge demands.

    requirements: edge ident -> integer relative twist n(e).  An edge with
    ends (v1, s1), (v2, s2) is satisfied when
        shift(v1, s1) - shift(v2, s2) + n(e) = 0.
    Feasible iff the total demand is even; otherwise the report localizes
    the odd demand at the root loop.
    """
    graph.validate()
    req = {e.ident: int(requirements.get(e.ident, 0)) for e in graph.edges}
    parity = sum(req.values()) % 2
    order, parent = graph.walk_order()
    loop_at = {e.end1[0]: e for e in graph.loops()}

    assignment = {}
    shifts = {}  # (vertex, slot) -> settled shift

    def edge_demand(v, slot, e):
        """Required shift at (v, slot) given the other side is settled (or
        the other side is the same vertex's loop, handled separately)."""
        (v1, s1), (v2, s2) = e.end1, e.end2
        if (v, slot) == (v1, s1):
            other = shifts.get((v2, s2), 0)
            return other - req[e.ident]
        other = shifts.get((v1, s1), 0)
        return other + req[e.ident]

    slot_edge = {}
    for e in graph.edges:
        slot_edge[e.end1] = e
        slot_edge[e.end2] = e

    odd_edge = None
    for v in order:
        if v == graph.root:
            up = None
        else:
            up = parent[v][1]
        loop = loop_at.get(v)
        constrained = {}
        for slot in ("a", "b", "c"):
            e = slot_edge[(v, slot)]
            if loop is not None and e.ident == loop.ident:
                continue
            if up is not None and e.ident == up.ident:
                continue
            constrained[slot] = edge_demand(v, slot, e)

        if loop is not None:
            # loop pairs two slots of v: (p, q) must satisfy the loop demand
            (s1,), (s2,) = [loop.end1[1]], [loop.end2[1]]
            n_loop = req[loop.ident]
            if v != graph.root:
                # one free slot (the up edge): solve the loop alone
                # shift(s1) - shift(s2) + n = 0, one slot demand possibly set
                p, q = _solve_two(
                    loop_slots=(s1, s2), n_loop=n_loop, fixed=constrained
                )
                if p is None:
                    raise MalformedGraph("unsolvable interior loop demand")
            else:
                # root: the up slot does not exist; the tree slot is fixed
                p, q = _solve_two(
                    loop_slots=(s1, s2), n_loop=n_loop, fixed=constrained
                )
                if p is None:
                    odd_edge = loop.ident
                    return CompatibilityPlan(False, assignment, parity, odd_edge)
        else:
            # interior vertex: two constrained slots, one free (up)
            items = list(constrained.items())
            p, q = _solve_slots(items)
        assignment[v] = (p, q)
        for slot in ("a", "b", "c"):
            shifts[(v, slot)] = _slot_shift(slot, p, q)

    # final check of every edge
    for e in graph.edges:
        lhs = shifts[e.end1] - shifts[e.end2] + req[e.ident]
        if lhs != 0:
            raise MalformedGraph(f"edge {e.ident} unsatisfied after walk")
    return CompatibilityPlan(True, assignment, parity)


def _solve_slots(items):
    """(p, q) hitting prescribed shifts on the given (slot, value) pairs."""
    want = dict(items)
    if set(want) == {"b", "c"}:
        return want["c"], -want["b"]
    if set(want) == {"a", "b"}:
        return want["a"] + want["b"], -want["b"]
    if set(want) == {"a", "c"}:
        return want["c"], want["a"] - want["c"]
    if len(want) == 1:
        ((slot, val),) = want.items()
        if slot == "a":
            return val, 0
        if slot == "b":
            return 0, -val
        return val, 0
    if not want:
        return 0, 0
    raise MalformedGraph(f"cannot constrain slots {sorted(want)}")


def _solve_two(loop_slots, n_loop, fixed):
    """(p, q) satisfying the loop demand shift(s1) - shift(s2) + n = 0 and
    an optional fixed slot demand; (None, None) when parity blocks it."""
    s1, s2 = loop_slots

    def loop_value(p, q):
        return _slot_shift(s1, p, q) - _slot_shift(s2, p, q) + n_loop

    if not fixed:
        # a single twist clears the loop: solve with q = 0, else p = 0
        for free in ("p", "q"):
            roots = _roots(
                (lambda p: loop_value(p, 0)) if free == "p" else (lambda q: loop_value(0, q))
            )
            if roots:
                return (roots[0], 0) if free == "p" else (0, roots[0])
        return (0, 0) if n_loop == 0 else (None, None)

    ((slot, val),) = fixed.items()
    # parametrize the line shift(slot) = val and solve the loop demand on it
    if slot == "a":       # p + q = val
        roots = _roots(lambda q: loop_value(val - q, q))
        return (val - roots[0], roots[0]) if roots else (None, None)
    if slot == "b":       # q = -val
        roots = _roots(lambda p: loop_value(p, -val))
        return (roots[0], -val) if roots else (None, None)
    # slot == "c":        # p = val
    roots = _roots(lambda q: loop_value(val, q))
    return (val, roots[0]) if roots else (None, None)


def _roots(f):
    """Integer roots of an affine integer function, found from two samples."""
    f0 = f(0)
    f1 = f(1)
    slope = f1 - f0
    if slope == 0:
        return [0] if f0 == 0 else []
    if f0 % slope != 0:
        return []
    return [-f0 // slope]


# ---------------------------------------------------------------------------
# the sign of the commutator product


def w2(rep, eps=1e-6):
    """Lifting obstruction bit: the sign of prod_i B_i^-1 A_i^-1 B_i A_i for
    any determinant-1 lifts of the generator images (+I -> 0, -I -> 1)."""
    m = np.eye(2, dtype=complex)
    for a_name, b_name in handle_letters(rep.genus):
        a = rep.images[a_name].m
        b = rep.images[b_name].m
        m = m @ np.linalg.inv(b) @ np.linalg.inv(a) @ b @ a
    dev_plus = float(np.max(np.abs(m - np.eye(2))))
    dev_minus = float(np.max(np.abs(m + np.eye(2))))
    if min(dev_plus, dev_minus) > eps:
        raise RelatorViolated(
            f"commutator product is not +-I (deviation {min(dev_plus, dev_minus):.3g})"
        )
    return 0 if dev_plus <= dev_minus else 1


def w2_of_words(rep, handles, eps=1e-6):
    """Sign of the commutator product over explicit handle word pairs."""
    m = np.eye(2, dtype=complex)
    for a_word, b_word in handles:
        a = rep.evaluate(a_word).m
        b = rep.evaluate(b_word).m
        m = m @ np.linalg.inv(b) @ np.linalg.inv(a) @ b @ a
    dev_plus = float(np.max(np.abs(m - np.eye(2))))
    dev_minus = float(np.max(np.abs(m + np.eye(2))))
    if min(dev_plus, dev_minus) > eps:
        raise RelatorViolated(
            f"commutator product is not +-I (deviation {min(dev_plus, dev_minus):.3g})"
        )
    return 0 if dev_plus <= dev_minus else 1


# ---------------------------------------------------------------------------
# trace-compatible lifts over the decomposition graph


@dataclass
class LiftSystem:
    solvable: bool
    witness: dict | None        # (vertex, gen) -> sign in {+1, -1}
    parity: int                 # sum of edge sign-mismatch constants mod 2
    dropped_edges: list = field(default_factory=list)  # near-zero traces


def _slot_trace(lifts, vertex, slot):
    a, b = lifts[vertex]
    if slot == "a":
        return a.trace()
    if slot == "b":
        return b.trace()
    return (a @ b).trace()


def _slot_vars(vertex, slot):
    if slot == "a":
        return [(vertex, "a")]
    if slot == "b":
        return [(vertex, "b")]
    return [(vertex, "a"), (vertex, "b")]


def lift_constraints(graph: TrivalentGraph, lifts, eps=1e-6):
    """Solvability of trace-compatible sign choices for the vertex lifts.

    lifts: vertex -> (A, B) determinant-1 lifts of the designated
    generators; slot c carries A @ B.  Each edge demands that the traces of
    the two incident slot lifts agree after the sign choices; the system is
    solved over GF(2).  Edges whose slot traces are within eps of 0 are
    vacuous (both signs of a trace-zero lift agree) and are dropped with a
    log entry.
    """
    graph.validate()
    variables = []
    index = {}
    for v in graph.vertices:
        for gen in ("a", "b"):
            index[(v, gen)] = len(variables)
            variables.append((v, gen))

    rows = []
    rhs = []
    parity = 0
    dropped = []
    for e in graph.edges:
        t1 = _slot_trace(lifts, *e.end1)
        t2 = _slot_trace(lifts, *e.end2)
        if abs(t1) < eps or abs(t2) < eps:
            dropped.append(e.ident)
            log.info("edge %s dropped: trace within eps of 0", e.ident)
            continue
        if abs(t1 - t2) <= abs(t1 + t2):
            const = 0
            mismatch = abs(t1 - t2)
        else:
            const = 1
            mismatch = abs(t1 + t2)
        if mismatch > 1e-4 * max(1.0, abs(t1)):
            raise MalformedGraph(
                f"edge {e.ident}: paired slots have non-matching traces "
                f"({t1:.6g} vs {t2:.6g})"
            )
        parity = (parity + const) % 2
        row = 0
        for var in _slot_vars(*e.end1) + _slot_vars(*e.end2):
            row ^= 1 << index[var]
        rows.append(row)
        rhs.append(const)

    solvable, solution = _gf2_solve(rows, rhs, len(variables))
    witness = None
    if solvable:
        witness = {
            variables[i]: (-1 if (solution >> i) & 1 else 1)
            for i in range(len(variables))
        }
    return LiftSystem(solvable, witness, parity, dropped)


def _gf2_solve(rows, rhs, ncols):
    """Gaussian elimination over GF(2) on bitmask rows; returns
    (consistent, particular solution bitmask)."""
    rows = list(rows)
    rhs = list(rhs)
    pivots = []  # (col, row_index)
    for col in range(ncols):
        pivot = None
        for r in range(len(rows)):
            if (rows[r] >> col) & 1 and all(r != pr for _, pr in pivots):
                pivot = r
                break
        if pivot is None:
            continue
        for r in range(len(rows)):
            if r != pivot and (rows[r] >> col) & 1:
                rows[r] ^= rows[pivot]
                rhs[r] ^= rhs[pivot]
        pivots.append((col, pivot))
    solution = 0
    for col, r in pivots:
        if rhs[r]:
            solution |= 1 << col
    for r in range(len(rows)):
        if rows[r] == 0 and rhs[r] == 1:
            return False, 0
    return True, solution


# ---------------------------------------------------------------------------
# index-two cover and branch directive


@dataclass
class CoverPlan:
    genus_cover: int
    handles: list               # [(a-word, b-word), ...] standard basis
    generators: list            # flat word list generating the subgroup
    note: str

    def relator_words(self):
        out = GroupWord()
        for a_word, b_word in self.handles:
            out = out * (b_word.inverse() * a_word.inverse() * b_word * a_word)
        return out


def double_cover_plan(rep, handle=None):
    """Standard presentation of the index-two subgroup on which the
    representation always lifts.

    The subgroup is the kernel of the a1-exponent parity (the cover dual to
    the b1-curve), anchored at the first handle: genus 2g - 1 with handles
        (a1^2, b1), (a1^-1 ai a1, a1^-1 bi a1)_{i>=2}, (ai, bi)_{i>=2}.
    """
    g = rep.genus
    a1 = GroupWord.letter("a1")
    b1 = GroupWord.letter("b1")
    handles = [(a1 * a1, b1)]
    for i in range(2, g + 1):
        ai = GroupWord.letter(f"a{i}")
        bi = GroupWord.letter(f"b{i}")
        handles.append((a1.inverse() * ai * a1, a1.inverse() * bi * a1))
    for i in range(2, g + 1):
        handles.append((GroupWord.letter(f"a{i}"), GroupWord.letter(f"b{i}")))
    generators = [w for pair in handles for w in pair]
    return CoverPlan(
        genus_cover=2 * g - 1,
        handles=handles,
        generators=generators,
        note=(
            "index-two subgroup anchored at the first handle; the "
            "restriction of the representation lifts to SL(2, C)"
        ),
    )


@dataclass(frozen=True)
class BranchDirective:
    kind: str                   # "none" or "branch_point"
    pants: int | None = None
    boundary: str | None = None


def branch_directive(dec, w2_bit):
    """Directive for the final assembly: nothing when the representation
    lifts, otherwise one order-two branch point at the root pants on its
    a-boundary."""
    if w2_bit == 0:
        return BranchDirective("none")
    return BranchDirective("branch_point", pants=dec.graph.root, boundary="a")


@dataclass
class ObstructionReport:
    parity: int                 # n(T) from the lift-trace edge constants
    solvable: bool
    w2: int
    directive: BranchDirective
    dropped_edges: list = field(default_factory=list)

    def consistent(self):
        return self.parity == self.w2 == (0 if self.solvable else 1)


def build_report(rep, dec, eps=1e-6):
    """Full obstruction report for a decomposition: the commutator-product
    bit, the lift-trace system over the graph, and the branch directive."""
    bit = w2(rep)
    system = lift_constraints(dec.graph, dec.lifts(), eps)
    return ObstructionReport(
        parity=system.parity,
        solvable=system.solvable,
        w2=bit,
        directive=branch_directive(dec, bit),
        dropped_edges=system.dropped_edges,
    )
