"""Trivalent decomposition graphs of the pipeline shape.

Vertices are pants; each vertex exposes slots "a", "b", "c" (the two
designated generators and their product).  Edges pair slots; an edge with
both ends on one vertex is a loop.  The pipeline produces exactly g loops
at distinct vertices, and removing them leaves a spanning tree rooted at
the final-handle pants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MalformedGraph

SLOTS = ("a", "b", "c")


@dataclass(frozen=True)
class Edge:
    ident: int
    end1: tuple  # (vertex, slot)
    end2: tuple
    kind: str    # "tree" or "loop"

    def vertices(self):
        return (self.end1[0], self.end2[0])


@dataclass
class TrivalentGraph:
    genus: int
    vertices: list
    edges: list
    root: int

    def loops(self):
        return [e for e in self.edges if e.kind == "loop"]

    def tree_edges(self):
        return [e for e in self.edges if e.kind == "tree"]

    def validate(self):
        g = self.genus
        if len(self.vertices) != 2 * g - 2:
            raise MalformedGraph(
                f"expected {2 * g - 2} vertices, found {len(self.vertices)}"
            )
        if len(self.edges) != 3 * g - 3:
            raise MalformedGraph(f"expected {3 * g - 3} edges, found {len(self.edges)}")
        loops = self.loops()
        if len(loops) != g:
            raise MalformedGraph(f"expected {g} loops, found {len(loops)}")
        loop_vertices = [e.end1[0] for e in loops]
        if len(set(loop_vertices)) != g:
            raise MalformedGraph("loops must sit at distinct vertices")
        for e in loops:
            if e.end1[0] != e.end2[0]:
                raise MalformedGraph("loop edge must have both ends on one vertex")
        if self.root not in loop_vertices:
            raise MalformedGraph("root must carry a loop")
        # every slot used exactly once
        used = set()
        for e in self.edges:
            for end in (e.end1, e.end2):
                if end[1] not in SLOTS or end[0] not in self.vertices:
                    raise MalformedGraph(f"bad slot reference {end}")
                if end in used:
                    raise MalformedGraph(f"slot {end} used twice")
                used.add(end)
        if len(used) != 3 * len(self.vertices):
            raise MalformedGraph("unused slots remain")
        # the tree edges span the vertices
        adj = {v: [] for v in self.vertices}
        for e in self.tree_edges():
            v1, v2 = e.vertices()
            adj[v1].append((v2, e))
            adj[v2].append((v1, e))
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for w, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != set(self.vertices):
            raise MalformedGraph("tree edges do not span the graph")
        return True

    def tree_adjacency(self):
        adj = {v: [] for v in self.vertices}
        for e in self.tree_edges():
            v1, v2 = e.vertices()
            adj[v1].append((v2, e))
            adj[v2].append((v1, e))
        return adj

    def walk_order(self):
        """Vertices ordered leaves-first toward the root, with the tree
        edge each vertex uses toward the root ("up" edge)."""
        self.validate()
        adj = self.tree_adjacency()
        parent = {self.root: None}
        order = [self.root]
        stack = [self.root]
        while stack:
            v = stack.pop()
            for w, e in adj[v]:
                if w not in parent:
                    parent[w] = (v, e)
                    order.append(w)
                    stack.append(w)
        return list(reversed(order)), parent

    def extreme_vertices(self):
        return [e.end1[0] for e in self.loops()]
