"""Expressions, subexpressions, folding operators, the order on
SubExpr(s,w), special pairs, galleries, and the graph Sub(s,w).

A subexpression of the expression s = (s_1,...,s_m) is a bit sequence
gamma; its prefixes are gamma^{<i} = s_1^{g_1} ... s_{i-1}^{g_{i-1}} and its
prefix roots gamma^{->i} = gamma^{<i}(-e_{s_i}).  Two subexpressions with
the same target at Hamming distance two differ by a double fold f_{i,j},
applicable exactly when gamma^{->i} = +-gamma^{->j}; the positive
representative of that root is the color of the resulting edge.

All indices are 0-based in code.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import coxeter
from .coxeter import CoxeterSystem, Element

ENUMERATION_LIMIT = 24


class IndexOutOfRange(IndexError):
    pass


class NotApplicable(ValueError):
    pass


class DifferentTargets(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Expression:
    """A finite word in the generators of a Coxeter system."""

    system: CoxeterSystem
    letters: Tuple[int, ...]

    def __post_init__(self):
        for g in self.letters:
            if not 0 <= g < self.system.rank:
                raise IndexOutOfRange(f"letter {g} out of range")

    def __len__(self):
        return len(self.letters)


class Subexpression:
    """A bit mask on an expression with cached prefix elements and roots.

    prefix_ids[i] is the intern id of gamma^{<i+1} (prefix_ids[0] = identity),
    roots[i] the signed root id of gamma^{->i+1}.
    """

    __slots__ = ("expr", "bits", "prefix_ids", "roots", "mask")

    def __init__(self, expr: Expression, bits, prefix_ids=None, roots=None):
        self.expr = expr
        self.bits = tuple(int(b) for b in bits)
        if len(self.bits) != len(expr):
            raise ValueError("bit sequence length mismatch")
        if prefix_ids is None:
            sys_ = expr.system
            pids = [0]
            rids = []
            eid = 0
            for g, b in zip(expr.letters, self.bits):
                rids.append(sys_.arrow_root(eid, g))
                if b:
                    eid = sys_.multiply_gen(eid, g)
                pids.append(eid)
            prefix_ids, roots = tuple(pids), tuple(rids)
        self.prefix_ids = prefix_ids
        self.roots = roots
        self.mask = sum(b << i for i, b in enumerate(self.bits))

    # -- accessors ------------------------------------------------------------

    def target_id(self) -> int:
        return self.prefix_ids[-1]

    def target(self) -> Element:
        sys_ = self.expr.system
        return Element(sys_, sys_.elem_matrix(self.target_id()))

    def prefix(self, i: int) -> Element:
        """gamma^{<i+1} as an Element (i from 0 to m)."""
        sys_ = self.expr.system
        word = tuple(g for g, b in zip(self.expr.letters[:i], self.bits[:i]) if b)
        return Element(sys_, sys_.elem_matrix(self.prefix_ids[i]), word)

    def arrow_root(self, i: int) -> np.ndarray:
        """gamma^{->i+1} as a vector."""
        return self.expr.system.root_vec(self.roots[i])

    def arrow_root_from(self, i: int) -> np.ndarray:
        """The companion root gamma^{<i+2}(-e_{s_i}) read from the far side."""
        sys_ = self.expr.system
        return -sys_.elem_matrix(self.prefix_ids[i + 1])[:, self.expr.letters[i]]

    def __eq__(self, other):
        return self.expr is other.expr and self.bits == other.bits

    def __hash__(self):
        return hash((id(self.expr), self.bits))

    def __repr__(self):
        return "Subexpression(" + "".join(map(str, self.bits)) + ")"


def subexpr_from_mask(expr: Expression, mask: int) -> Subexpression:
    bits = [(mask >> i) & 1 for i in range(len(expr))]
    return Subexpression(expr, bits)


# -- spec operations ---------------------------------------------------------

def target(gamma: Subexpression) -> Element:
    return gamma.target()


def double_fold_applicable(gamma: Subexpression, i: int, j: int) -> bool:
    """f_{i,j} is applicable iff gamma^{->i} = +-gamma^{->j}."""
    m = len(gamma.expr)
    if not (0 <= i < j < m):
        raise IndexOutOfRange(f"bad fold pair ({i},{j})")
    return abs(gamma.roots[i]) == abs(gamma.roots[j])


def double_fold(gamma: Subexpression, i: int, j: int) -> Subexpression:
    """Flip bits i and j; the target is preserved."""
    if not double_fold_applicable(gamma, i, j):
        raise NotApplicable(f"f_{{{i},{j}}} is not applicable")
    bits = list(gamma.bits)
    bits[i] ^= 1
    bits[j] ^= 1
    return Subexpression(gamma.expr, bits)


def order_compare(delta: Subexpression, gamma: Subexpression) -> int:
    """-1 if delta < gamma, 0 if equal, +1 if delta > gamma.

    The order compares at the maximal differing position i: the greater
    subexpression is the one whose prefix root at i is positive.
    """
    if delta.expr is not gamma.expr and delta.expr != gamma.expr:
        raise DifferentTargets("subexpressions of different expressions")
    if delta.target_id() != gamma.target_id():
        raise DifferentTargets("subexpressions with different targets")
    if delta.bits == gamma.bits:
        return 0
    i = max(k for k in range(len(delta.bits)) if delta.bits[k] != gamma.bits[k])
    return 1 if delta.roots[i] > 0 else -1


def descend_step(gamma: Subexpression):
    """A fold pair (i,j) with f_{i,j} gamma < gamma, or None at the minimum.

    Chooses the maximal j with gamma^{->j} > 0 admitting a partner, then the
    maximal partner i < j with gamma^{->i} = +-gamma^{->j}.
    """
    rids = gamma.roots
    for j in range(len(rids) - 1, -1, -1):
        if rids[j] <= 0:
            continue
        for i in range(j - 1, -1, -1):
            if abs(rids[i]) == abs(rids[j]):
                return (i, j)
    return None


def special_pairs(gamma: Subexpression) -> List[Tuple[int, int, int]]:
    """All special pairs (i, j, color root id).

    (i,j) is special iff gamma^{->j} = -gamma^{->i} > 0, no k < i has
    gamma^{->k} = gamma^{->j}, and no i < k < j has gamma^{->k} = gamma^{->i}.
    """
    rids = gamma.roots
    out = []
    for j, rj in enumerate(rids):
        if rj <= 0:
            continue
        for i in range(j):
            if rids[i] != -rj:
                continue
            if any(rids[k] == rj for k in range(i)):
                continue
            if any(rids[k] == -rj for k in range(i + 1, j)):
                continue
            out.append((i, j, rj))
    return out


def is_special_pair(gamma: Subexpression, i: int, j: int) -> bool:
    rids = gamma.roots
    rj = rids[j]
    return (rj > 0 and rids[i] == -rj
            and not any(rids[k] == rj for k in range(i))
            and not any(rids[k] == -rj for k in range(i + 1, j)))


@dataclass
class Gallery:
    """The gallery of a subexpression: its chambers and crossed/folded walls."""

    chambers: List[Element]
    walls: List[np.ndarray]


def gallery_of(gamma: Subexpression) -> Gallery:
    sys_ = gamma.expr.system
    chambers = [gamma.prefix(i) for i in range(len(gamma.expr) + 1)]
    walls = [sys_.root_vec(abs(r)) for r in gamma.roots]
    return Gallery(chambers, walls)


# -- the graph Sub(s,w) ------------------------------------------------------

def subexpr_classes(expr: Expression) -> Dict[int, list]:
    """All subexpressions of expr grouped by target id.

    Returns {target eid: [(mask, prefix_ids, roots), ...]} using a DFS that
    shares prefix computations across the 2^m bit sequences.
    """
    sys_ = expr.system
    m = len(expr)
    classes: Dict[int, list] = {}
    pids = [0] * (m + 1)
    rids = [0] * m
    mask = [0]

    def walk(i, eid):
        if i == m:
            rec = (mask[0], tuple(pids), tuple(rids))
            classes.setdefault(eid, []).append(rec)
            return
        g = expr.letters[i]
        rids[i] = sys_.arrow_root(eid, g)
        pids[i + 1] = eid
        walk(i + 1, eid)
        eid2 = sys_.multiply_gen(eid, g)
        pids[i + 1] = eid2
        mask[0] |= 1 << i
        walk(i + 1, eid2)
        mask[0] &= ~(1 << i)

    walk(0, 0)
    return classes


@dataclass
class SubexprGraph:
    """The graph Sub(s,w): vertices sorted ascending, indexed edges."""

    expr: Expression
    target_eid: int
    vertices: List[Subexpression]
    edges: List[Tuple[int, int, int]]          # (a, b, color rid), a < b
    vertex_index: Dict[int, int] = field(default_factory=dict)   # mask -> idx
    edge_index: Dict[Tuple[int, int], int] = field(default_factory=dict)
    incident: List[List[int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.vertex_index:
            self.vertex_index = {v.mask: i for i, v in enumerate(self.vertices)}
        if not self.edge_index:
            self.edge_index = {(a, b): k for k, (a, b, _) in enumerate(self.edges)}
        if not self.incident:
            self.incident = [[] for _ in self.vertices]
            for k, (a, b, _) in enumerate(self.edges):
                self.incident[a].append(k)
                self.incident[b].append(k)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    def edge_id(self, a: int, b: int) -> int:
        return self.edge_index[(a, b) if a < b else (b, a)]

    def components(self) -> List[int]:
        """Component label per vertex (BFS)."""
        lab = [-1] * len(self.vertices)
        c = 0
        for s in range(len(self.vertices)):
            if lab[s] >= 0:
                continue
            lab[s] = c
            stack = [s]
            while stack:
                v = stack.pop()
                for k in self.incident[v]:
                    a, b, _ = self.edges[k]
                    u = b if a == v else a
                    if lab[u] < 0:
                        lab[u] = c
                        stack.append(u)
            c += 1
        return lab

    def n_components(self) -> int:
        lab = self.components()
        return (max(lab) + 1) if lab else 0

    def to_dot(self) -> str:
        sys_ = self.expr.system
        lines = ["graph sub {"]
        for i, v in enumerate(self.vertices):
            label = "".join(map(str, v.bits))
            lines.append(f'  v{i} [label="{label}"];')
        for a, b, rid in self.edges:
            vec = sys_.root_vec(abs(rid))
            label = ",".join(f"{round(float(c), 6):g}" for c in vec)
            lines.append(f'  v{a} -- v{b} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _graph_from_records(expr: Expression, eid: int, records) -> SubexprGraph:
    verts = [Subexpression(expr, [(mask >> i) & 1 for i in range(len(expr))],
                           pids, rids)
             for mask, pids, rids in records]
    verts.sort(key=functools.cmp_to_key(order_compare))
    vidx = {v.mask: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        groups: Dict[int, List[int]] = {}
        for pos, rid in enumerate(v.roots):
            groups.setdefault(abs(rid), []).append(pos)
        for color, poss in groups.items():
            if len(poss) < 2:
                continue
            for a in range(len(poss)):
                for b in range(a + 1, len(poss)):
                    other = v.mask ^ (1 << poss[a]) ^ (1 << poss[b])
                    j = vidx[other]
                    if i < j:
                        edges.append((i, j, color))
    edges.sort(key=lambda e: (e[0], e[1]))
    return SubexprGraph(expr, eid, verts, edges)


def build_graph(expr: Expression, w: Element) -> SubexprGraph:
    """The graph Sub(s, w)."""
    if len(expr) > ENUMERATION_LIMIT:
        raise TooLarge(f"expression length {len(expr)} exceeds the limit")
    classes = subexpr_classes(expr)
    eid = expr.system.element_id(w.matrix)
    records = classes.get(eid, [])
    return _graph_from_records(expr, eid, records)


def build_all_graphs(expr: Expression) -> List[SubexprGraph]:
    """One Sub(s,w) per realized target class, in deterministic order."""
    if len(expr) > ENUMERATION_LIMIT:
        raise TooLarge(f"expression length {len(expr)} exceeds the limit")
    classes = subexpr_classes(expr)
    return [_graph_from_records(expr, eid, recs)
            for eid, recs in sorted(classes.items())]


def is_connected(g: SubexprGraph) -> bool:
    return g.n_vertices <= 1 or g.n_components() == 1
