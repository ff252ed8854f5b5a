"""The four modification operations, application domains, and planarizers."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator

from .errors import InputError, ResourceLimitError
from .graphs import Graph, merge_groups, norm_edge, vertex_key
from .planarity import is_planar, kuratowski


class Operation(Enum):
    VR = "vr"  # vertex removal
    ER = "er"  # edge removal
    EC = "ec"  # edge contraction
    EA = "ea"  # edge addition

    @classmethod
    def parse(cls, text: str) -> "Operation":
        try:
            return cls(text.lower())
        except ValueError:
            raise InputError(f"unknown operation {text!r}; expected vr, er, ec or ea")


VERTEX_OPS = {Operation.VR}
EDGE_OPS = {Operation.ER, Operation.EC, Operation.EA}


@dataclass(frozen=True)
class ModificationSet:
    """An operation plus the set of vertices (vr) or vertex pairs (er/ec/ea)."""

    op: Operation
    elements: frozenset

    def __init__(self, op: Operation, elements: Iterable = ()):
        object.__setattr__(self, "op", op)
        if op in VERTEX_OPS:
            object.__setattr__(self, "elements", frozenset(elements))
        else:
            object.__setattr__(self, "elements",
                               frozenset(norm_edge(*e) for e in elements))

    def __len__(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list:
        if self.op in VERTEX_OPS:
            return sorted(self.elements, key=vertex_key)
        return sorted(self.elements, key=lambda e: (vertex_key(e[0]), vertex_key(e[1])))

    def to_json_obj(self) -> dict:
        if self.op in VERTEX_OPS:
            elems = self.sorted_elements()
        else:
            elems = [list(e) for e in self.sorted_elements()]
        return {"op": self.op.value, "elements": elems}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ModificationSet":
        op = Operation.parse(obj["op"])
        elems = obj["elements"]
        if op in VERTEX_OPS:
            return cls(op, elems)
        return cls(op, (tuple(e) for e in elems))


def application_domain(op: Operation, g: Graph, r_set: Iterable) -> frozenset:
    """Elements the operation may touch when restricted to the scope r_set."""
    r_set = frozenset(r_set)
    if not r_set <= g.vertices:
        raise InputError("scope contains unknown vertices")
    if op in VERTEX_OPS:
        return r_set
    pairs = frozenset(norm_edge(u, v) for u, v in combinations(sorted(r_set, key=vertex_key), 2))
    if op is Operation.EA:
        return pairs - g.edges
    return pairs & g.edges


def affected(s: ModificationSet) -> frozenset:
    """Vertices touched by the set: the set itself for vr, endpoints otherwise."""
    if s.op in VERTEX_OPS:
        return s.elements
    return frozenset(v for e in s.elements for v in e)


def apply(g: Graph, s: ModificationSet) -> Graph:
    """The graph after applying the whole set at once.

    Contraction merges every connected component of (A(S), S) into its least
    vertex id, so the result does not depend on any edge ordering.
    """
    bad = s.elements - application_domain(s.op, g, g.vertices)
    if bad:
        raise InputError(f"elements outside the application domain: {sorted(map(str, bad))}")
    if s.op is Operation.VR:
        return g.remove_vertices(s.elements)
    if s.op is Operation.ER:
        return g.remove_edges(s.elements)
    if s.op is Operation.EA:
        return g.add_edges(s.elements)
    contract_graph = Graph(affected(s), s.elements)
    return merge_groups(g, contract_graph.components())


def is_planarizer(g: Graph, s: ModificationSet) -> bool:
    return is_planar(apply(g, s))


def subsets_up_to(domain: Iterable, k: int, cap: int | None = None) -> Iterator[frozenset]:
    """All subsets of the domain of size 0..k, smallest first, in stable order."""
    domain = sorted(domain, key=lambda e: (vertex_key(e[0]), vertex_key(e[1]))
                    if isinstance(e, tuple) else vertex_key(e))
    count = 0
    for size in range(min(k, len(domain)) + 1):
        for combo in combinations(domain, size):
            count += 1
            if cap is not None and count > cap:
                raise ResourceLimitError(
                    f"subset enumeration exceeded cap {cap}; raise the cap to continue")
            yield frozenset(combo)


def minimal_planarizers(g: Graph, op: Operation, k: int,
                        cap: int | None = None) -> Iterator[ModificationSet]:
    """All inclusion-minimal op-planarizers of size <= k, by exhaustive
    enumeration with a minimality filter."""
    found: list = []
    for sub in subsets_up_to(application_domain(op, g, g.vertices), k, cap):
        if any(prev < sub for prev in found):
            continue  # a proper subset already planarizes
        s = ModificationSet(op, sub)
        if is_planarizer(g, s):
            found.append(sub)
            yield s


def is_planarization_irrelevant(g: Graph, op: Operation, k: int, q_set: Iterable,
                                cap: int | None = None) -> bool:
    """True iff every inclusion-minimal op-planarizer of size <= k affects no
    vertex of q_set. Oracle role: computed by exhaustive enumeration."""
    q_set = frozenset(q_set)
    return all(not (affected(s) & q_set) for s in minimal_planarizers(g, op, k, cap))


def find_vr_planarizer(g: Graph, k: int) -> ModificationSet | None:
    """Some vr-planarizer of size <= k, or None.

    Branches over all vertices of an extracted Kuratowski subgraph: any
    planarizer must hit every such subgraph, so the search is exhaustive with
    depth <= k.
    """
    if k < 0:
        raise InputError("budget must be non-negative")
    chosen = _branch_vr(g, k)
    if chosen is None:
        return None
    return ModificationSet(Operation.VR, chosen)


def _branch_vr(g: Graph, k: int) -> frozenset | None:
    witness = kuratowski(g)
    if witness is None:
        return frozenset()
    if k == 0:
        return None
    for v in sorted(witness.vertices, key=vertex_key):
        rest = _branch_vr(g.remove_vertices([v]), k - 1)
        if rest is not None:
            return rest | {v}
    return None
