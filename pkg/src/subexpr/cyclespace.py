"""GF(2) cycle-space algebra on subexpression graphs: the triangle and
square generators, edge moving to special pairs, dihedral-cycle images,
constructive decomposition of even subgraphs, and spanning verification.

Edge sets are integer bitmasks over the host graph's edge index, so GF(2)
addition is ``^`` and rank computations are int-based Gaussian elimination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import dihedral
from .expressions import Subexpression, SubexprGraph, is_special_pair


class ConditionViolated(ValueError):
    """The root conditions of a generator kind fail at the given indices."""


class NotEven(ValueError):
    """The input edge set has a vertex of odd degree."""


class DecompositionError(RuntimeError):
    """An induction step of the constructive decomposition failed."""


# -- GF(2) linear algebra on int bitmasks ------------------------------------

class Gf2Basis:
    """Incremental row basis of integer bit-vectors over GF(2)."""

    def __init__(self):
        self.pivots: Dict[int, int] = {}          # pivot bit -> reduced vector

    def reduce(self, v: int) -> int:
        while v:
            b = v.bit_length() - 1
            if b not in self.pivots:
                break
            v ^= self.pivots[b]
        return v

    def add(self, v: int) -> bool:
        """Insert v; returns True if it was independent of the basis."""
        v = self.reduce(v)
        if v == 0:
            return False
        self.pivots[v.bit_length() - 1] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


def gf2_rank(vectors: Iterable[int]) -> int:
    basis = Gf2Basis()
    for v in vectors:
        basis.add(v)
    return basis.rank


# -- edge sets and generator cycles ------------------------------------------

@dataclass
class EdgeSet:
    """A set of edges of a host graph as a bitmask over its edge index."""

    graph: SubexprGraph
    bits: int = 0

    def __xor__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.graph, self.bits ^ other.bits)

    def degrees(self) -> List[int]:
        deg = [0] * self.graph.n_vertices
        b = self.bits
        k = 0
        while b:
            if b & 1:
                a, c, _ = self.graph.edges[k]
                deg[a] += 1
                deg[c] += 1
            b >>= 1
            k += 1
        return deg

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.degrees())


@dataclass(frozen=True)
class GeneratorCycle:
    """One generating cycle: a closed edge path with a strict maximal vertex."""

    kind: str                        # Tr1 Tr2 Tr3 Sq1 Sq2 Cyc1 Cyc2
    anchor_mask: int
    indices: Tuple[int, ...]
    vertex_masks: Tuple[int, ...]    # cycle order, anchor first
    edges: int                       # bitmask over the host graph edge index

    @property
    def length(self) -> int:
        return len(self.vertex_masks)

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "indices": list(self.indices),
                "vertices": [format(m, "b") for m in self.vertex_masks]}


def _cycle_from_masks(g: SubexprGraph, kind: str, indices, masks) -> GeneratorCycle:
    """Validate a closed mask path against the graph and package it."""
    try:
        vids = [g.vertex_index[m] for m in masks]
    except KeyError as exc:
        raise ConditionViolated(f"{kind}{tuple(indices)}: vertex {exc} missing")
    if len(set(vids)) != len(vids):
        raise ConditionViolated(f"{kind}{tuple(indices)}: repeated vertex")
    edges = 0
    for a, b in zip(vids, vids[1:] + vids[:1]):
        try:
            edges |= 1 << g.edge_id(a, b)
        except KeyError:
            raise ConditionViolated(f"{kind}{tuple(indices)}: missing edge")
    if max(vids) != vids[0]:
        raise ConditionViolated(f"{kind}{tuple(indices)}: anchor is not maximal")
    return GeneratorCycle(kind, masks[0], tuple(indices), tuple(masks), edges)


def make_triangle(g: SubexprGraph, gamma: Subexpression, kind: str,
                  i: int, j: int, k: int) -> GeneratorCycle:
    """Tr1/Tr2/Tr3 at the anchor gamma, per the defining root conditions."""
    r = gamma.roots
    if not (0 <= i < j < k < len(r)):
        raise ConditionViolated("indices must satisfy i < j < k")
    m = gamma.mask
    if kind in ("Tr1", "Tr3"):
        if not (r[j] == r[k] > 0 and abs(r[i]) == r[j]):
            raise ConditionViolated(f"{kind} root conditions fail")
        if kind == "Tr1":
            masks = [m, m ^ (1 << i) ^ (1 << j), m ^ (1 << i) ^ (1 << k)]
        else:
            masks = [m, m ^ (1 << i) ^ (1 << j), m ^ (1 << j) ^ (1 << k)]
    elif kind == "Tr2":
        if not (abs(r[i]) == abs(r[j]) == abs(r[k]) and r[k] > 0):
            raise ConditionViolated("Tr2 root conditions fail")
        masks = [m, m ^ (1 << j) ^ (1 << k), m ^ (1 << i) ^ (1 << k)]
    else:
        raise ConditionViolated(f"unknown triangle kind {kind}")
    return _cycle_from_masks(g, kind, (i, j, k), masks)


def make_square(g: SubexprGraph, gamma: Subexpression, kind: str,
                i: int, j: int, k: int, l: int) -> GeneratorCycle:
    """Sq1 (disjoint pairs (i,j),(k,l)) or Sq2 (nested (i,l) over (j,k))."""
    r = gamma.roots
    if not (0 <= i < j < k < l < len(r)):
        raise ConditionViolated("indices must satisfy i < j < k < l")
    m = gamma.mask
    if kind == "Sq1":
        if not (abs(r[i]) == abs(r[j]) and r[j] > 0
                and abs(r[k]) == abs(r[l]) and r[l] > 0):
            raise ConditionViolated("Sq1 root conditions fail")
        f1 = (1 << i) | (1 << j)
        f2 = (1 << k) | (1 << l)
    elif kind == "Sq2":
        if not (abs(r[i]) == abs(r[l]) and r[l] > 0
                and abs(r[j]) == abs(r[k]) and r[k] > 0):
            raise ConditionViolated("Sq2 root conditions fail")
        f1 = (1 << i) | (1 << l)
        f2 = (1 << j) | (1 << k)
    else:
        raise ConditionViolated(f"unknown square kind {kind}")
    masks = [m, m ^ f1, m ^ f1 ^ f2, m ^ f2]
    return _cycle_from_masks(g, kind, (i, j, k, l), masks)


def cycle_space_dim(g: SubexprGraph) -> int:
    """dim of the even-subgraph space: |E| - |V| + #components."""
    return g.n_edges - g.n_vertices + g.n_components()


def _edge_positions(g: SubexprGraph, eid: int) -> Tuple[int, int]:
    """The fold positions (p, q) of an edge, read from the mask difference."""
    a, b, _ = g.edges[eid]
    diff = g.vertices[a].mask ^ g.vertices[b].mask
    p = (diff & -diff).bit_length() - 1
    q = diff.bit_length() - 1
    return p, q


def move_edge(g: SubexprGraph, v: int, pq: Tuple[int, int]):
    """Move the edge {gamma, f_pq gamma} to a special pair at gamma.

    gamma = g.vertices[v] must be the greater endpoint.  Returns
    ((i, j), used): a special pair of the same color plus Tr2/Tr3/Sq1
    cycles anchored at gamma whose sum exchanges the edges; the recursion
    descends the lexicographic parameter (q, q - p).
    """
    gamma = g.vertices[v]
    rids = gamma.roots
    p, q = pq
    used: List[GeneratorCycle] = []
    while True:
        alpha = rids[q]
        if alpha <= 0:
            raise DecompositionError("anchor is not the greater endpoint")
        if rids[p] != -alpha:
            # case 1: the pair opens with +alpha
            r = max((r for r in range(p) if rids[r] == -alpha), default=None)
            if r is None:
                raise DecompositionError("no -alpha position before p (case 1)")
            used.append(make_triangle(g, gamma, "Tr3", r, p, q))
            p, q = r, p
            continue
        k2 = next((t for t in range(p) if rids[t] == alpha), None)
        if k2 is not None:
            # case 2: an earlier +alpha breaks the first-crossing condition
            r = max((r for r in range(k2) if rids[r] == -alpha), default=None)
            if r is None:
                raise DecompositionError("no -alpha position before k (case 2)")
            used.append(make_square(g, gamma, "Sq1", r, k2, p, q))
            p, q = r, k2
            continue
        k3 = next((t for t in range(p + 1, q) if rids[t] == -alpha), None)
        if k3 is not None:
            # case 3: a -alpha strictly inside the pair
            used.append(make_triangle(g, gamma, "Tr2", p, k3, q))
            p = k3
            continue
        return (p, q), used


def _resolve_special_pairs(g: SubexprGraph, v: int, pair1, pair2):
    """Cycles anchored at vertex v whose sum at v is the two special edges."""
    gamma = g.vertices[v]
    i, k = pair1
    j, l = pair2
    if (i, k) > (j, l):
        (i, k), (j, l) = (j, l), (i, k)
    if i == j:                                         # shared opening index
        return [make_triangle(g, gamma, "Tr1", i, min(k, l), max(k, l))]
    if k == l:                                         # shared closing index
        return [make_triangle(g, gamma, "Tr2", i, j, k)]
    if k < j:                                          # disjoint
        return [make_square(g, gamma, "Sq1", i, k, j, l)]
    if l < k:                                          # nested: (i,k) over (j,l)
        return [make_square(g, gamma, "Sq2", i, j, l, k)]
    # crossing: i < j < k < l -- the dihedral reduction
    return _resolve_crossing(g, v, (i, k), (j, l))


def _resolve_crossing(g: SubexprGraph, v: int, pair1, pair2):
    gamma = g.vertices[v]
    sys_ = g.expr.system
    i, k = pair1
    j, l = pair2
    mu = sys_.root_vec(abs(gamma.roots[i]))
    lam = sys_.root_vec(abs(gamma.roots[j]))
    ctx = dihedral.make_dihedral(sys_, lam, mu)
    if ctx.order_n == math.inf:
        raise DecompositionError("crossing special pairs in an infinite dihedral")
    pi, p, morph = dihedral.project_subexpression(gamma, ctx)
    pos = {r: z for z, r in enumerate(p)}
    try:
        ii, jj, kk, ll = pos[i], pos[j], pos[k], pos[l]
    except KeyError:
        raise DecompositionError("special index outside the projected word")
    small, _resid, _cfg = dihedral.reduce_special_vertex(pi, (ii, kk), (jj, ll))
    out = []
    for kind, x, y, masks in small:
        big = [morph.apply_mask(m) for m in masks]
        out.append(_cycle_from_masks(g, kind, (i, j, k, l, x, y), big))
    return out


def _as_bits(even) -> int:
    return even.bits if isinstance(even, EdgeSet) else int(even)


def decompose(g: SubexprGraph, even) -> List[GeneratorCycle]:
    """Write an even edge set as a GF(2) sum of generator cycles.

    Induction on the maximal incident vertex: move every residue edge
    there to a special pair, then cancel the special edges two at a time
    (single Tr/Sq for shared, disjoint or nested pairs; dihedral-cycle
    images for crossing pairs).
    """
    residue = _as_bits(even)
    deg = EdgeSet(g, residue).degrees()
    if any(d % 2 for d in deg):
        raise NotEven("input edge set has a vertex of odd degree")
    out: List[GeneratorCycle] = []

    def toggle(bits: int):
        nonlocal residue
        b = bits
        while b:
            low = b & -b
            eid = low.bit_length() - 1
            a, c, _ = g.edges[eid]
            d = 1 if not (residue >> eid & 1) else -1
            deg[a] += d
            deg[c] += d
            b ^= low
        residue ^= bits

    last_top: Optional[int] = None
    while residue:
        v = max(t for t, d in enumerate(deg) if d)
        if last_top is not None and v >= last_top:
            raise DecompositionError("maximal incident vertex did not decrease")
        last_top = v
        gamma = g.vertices[v]

        def residue_edges_at_v():
            found = []
            for eid in g.incident[v]:
                if residue >> eid & 1:
                    found.append((_edge_positions(g, eid), eid))
            found.sort()
            return found

        moved = True
        while moved:
            moved = False
            for pq, eid in residue_edges_at_v():
                if not is_special_pair(gamma, *pq):
                    _, used = move_edge(g, v, pq)
                    for c in used:
                        out.append(c)
                        toggle(c.edges)
                    moved = True
                    break

        specials = residue_edges_at_v()
        if len(specials) % 2:
            raise DecompositionError("odd number of special edges at the top")
        for (pq1, _), (pq2, _) in zip(specials[0::2], specials[1::2]):
            for c in _resolve_special_pairs(g, v, pq1, pq2):
                out.append(c)
                toggle(c.edges)
        if any(residue >> eid & 1 for eid in g.incident[v]):
            raise DecompositionError("top vertex still has residue edges")
    return out


# -- enumeration and spanning -------------------------------------------------

def scan_generators(g: SubexprGraph) -> List[GeneratorCycle]:
    """All Tr/Sq instances found by checking index tuples at every vertex."""
    found: Dict[int, GeneratorCycle] = {}

    def keep(c: GeneratorCycle):
        found.setdefault(c.edges, c)

    for gamma in g.vertices:
        r = gamma.roots
        m = len(r)
        for i in range(m):
            for j in range(i + 1, m):
                if abs(r[i]) != abs(r[j]):
                    continue
                for k in range(j + 1, m):
                    if abs(r[k]) != abs(r[j]):
                        continue
                    for kind in ("Tr1", "Tr2", "Tr3"):
                        try:
                            keep(make_triangle(g, gamma, kind, i, j, k))
                        except ConditionViolated:
                            pass
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)
                 if abs(r[i]) == abs(r[j]) and r[j] > 0]
        for a in range(len(pairs)):
            i, j = pairs[a]
            for b in range(len(pairs)):
                k, l = pairs[b]
                if j < k:
                    try:
                        keep(make_square(g, gamma, "Sq1", i, j, k, l))
                    except ConditionViolated:
                        pass
                if i < k and l < j:
                    try:
                        keep(make_square(g, gamma, "Sq2", i, k, l, j))
                    except ConditionViolated:
                        pass
    return sorted(found.values(),
                  key=lambda c: (c.length, c.kind, c.anchor_mask, c.indices))


def fundamental_cycles(g: SubexprGraph) -> List[int]:
    """Edge masks of the fundamental cycles of a BFS spanning forest."""
    path = [0] * g.n_vertices              # edge mask of the tree path to root
    seen = [False] * g.n_vertices
    tree = 0
    out = []
    for root in range(g.n_vertices):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop()
            for eid in g.incident[v]:
                a, b, _ = g.edges[eid]
                u = b if a == v else a
                if not seen[u]:
                    seen[u] = True
                    path[u] = path[v] ^ (1 << eid)
                    tree |= 1 << eid
                    queue.append(u)
    for eid, (a, b, _) in enumerate(g.edges):
        if not (tree >> eid & 1):
            out.append(path[a] ^ path[b] ^ (1 << eid))
    return out


def enumerate_generators(g: SubexprGraph) -> List[GeneratorCycle]:
    """A generating family of the cycle space: the Tr/Sq scan, completed by
    constructively decomposing every fundamental cycle not already in the
    scan's span (which supplies the dihedral Cyc images exactly where they
    are needed)."""
    found: Dict[int, GeneratorCycle] = {}
    basis = Gf2Basis()
    for c in scan_generators(g):
        found.setdefault(c.edges, c)
        basis.add(c.edges)
    for fc in fundamental_cycles(g):
        if basis.contains(fc):
            continue
        for c in decompose(g, fc):
            found.setdefault(c.edges, c)
            basis.add(c.edges)
    return sorted(found.values(),
                  key=lambda c: (c.length, c.kind, c.anchor_mask, c.indices))


def verify_span(g: SubexprGraph) -> dict:
    """Check that the enumerated generators span the cycle space."""
    gens = enumerate_generators(g)
    dim = cycle_space_dim(g)
    rank = gf2_rank(c.edges for c in gens)
    lengths = sorted({c.length for c in gens})
    return {"n_vertices": g.n_vertices, "n_edges": g.n_edges,
            "components": g.n_components(), "dim": dim,
            "n_generators": len(gens), "rank": rank,
            "lengths": lengths, "ok": rank == dim}


def min_length_basis(g: SubexprGraph,
                     gens: Optional[Sequence[GeneratorCycle]] = None):
    """A greedy minimum-length basis of the cycle space from the generators."""
    if gens is None:
        gens = enumerate_generators(g)
    basis = Gf2Basis()
    chosen = []
    for c in gens:                         # already sorted by length
        if basis.add(c.edges):
            chosen.append(c)
    return chosen


# -- certificates -------------------------------------------------------------

def certificate(g: SubexprGraph, cycles: Sequence[GeneratorCycle]) -> list:
    return [c.to_json() for c in cycles]


def check_certificate(g: SubexprGraph, cert: list, target_bits: int) -> bool:
    """Independent replay: re-sum the certified cycles from their vertex
    bit strings alone and compare with the target edge set."""
    total = 0
    for item in cert:
        masks = [int(s, 2) for s in item["vertices"]]
        try:
            vids = [g.vertex_index[m] for m in masks]
            for a, b in zip(vids, vids[1:] + vids[:1]):
                total ^= 1 << g.edge_id(a, b)
        except KeyError:
            return False
    return total == target_bits
