"""Definitional re-derivation of wall combinatorics for the test suite.

Independent of the production code path: faces are traced geometrically on
the straight-line drawing given by the wall coordinates (production uses a
combinatorial embedding), and peeling follows the definitions literally.
"""

import math


def faces_geometric(adj: dict, pos: dict) -> list:
    """All face walks of the straight-line drawing, as vertex tuples."""

    def angle(a, b):
        return math.atan2(pos[b][1] - pos[a][1], pos[b][0] - pos[a][0])

    successor = {}
    for v, nbrs in adj.items():
        for u in nbrs:
            base = angle(v, u)
            best = None
            for w in nbrs:
                if w == u and len(nbrs) > 1:
                    continue
                turn = (angle(v, w) - base) % (2 * math.pi)
                if turn == 0.0:
                    turn = 2 * math.pi
                if best is None or turn < best[0]:
                    best = (turn, w)
            successor[(u, v)] = best[1]
    faces = []
    seen = set()
    for start in successor:
        if start in seen:
            continue
        walk = []
        edge = start
        while edge not in seen:
            seen.add(edge)
            walk.append(edge[1])
            edge = (edge[1], successor[edge])
        faces.append(tuple(walk))
    return faces


def _shoelace(face, pos) -> float:
    area = 0.0
    for a, b in zip(face, face[1:] + face[:1]):
        (x1, y1), (x2, y2) = pos[a], pos[b]
        area += x1 * y2 - x2 * y1
    return abs(area) / 2.0


def outer_cycle_geometric(adj: dict, pos: dict) -> tuple:
    """The boundary of the outer face: the face of largest drawn area."""
    faces = faces_geometric(adj, pos)
    best = max(faces, key=lambda f: _shoelace(f, pos))
    if len(best) != len(set(best)):
        raise AssertionError("outer walk revisited a vertex")
    return best


def _strip_degree_one(adj: dict) -> dict:
    adj = {v: set(ns) for v, ns in adj.items()}
    while True:
        bad = [v for v, ns in adj.items() if len(ns) <= 1]
        if not bad:
            return adj
        for v in bad:
            for u in adj[v]:
                adj[u].discard(v)
            del adj[v]


def _restrict(adj: dict, keep) -> dict:
    keep = set(keep)
    return {v: {u for u in ns if u in keep} for v, ns in adj.items() if v in keep}


def derive_layers(adj: dict, pos: dict, count: int) -> list:
    """Layers by the definition: perimeter, peel, clean degree-one, repeat."""
    layers = []
    cur = {v: set(ns) for v, ns in adj.items()}
    for _ in range(count):
        cyc = outer_cycle_geometric(cur, pos)
        layers.append(cyc)
        cur = _strip_degree_one(_restrict(cur, set(cur) - set(cyc)))
    return layers


def derive_central_subwall(adj: dict, pos: dict, height: int, q: int) -> set:
    """Vertex set of the central q-subwall: remove the first (height-q)/2
    layers and the occurring degree-one vertices."""
    cur = {v: set(ns) for v, ns in adj.items()}
    for _ in range((height - q) // 2):
        cyc = outer_cycle_geometric(cur, pos)
        cur = _strip_degree_one(_restrict(cur, set(cur) - set(cyc)))
    return set(cur)


def derive_wall_annulus(adj: dict, pos: dict, height: int, p: int, ell: int) -> set:
    """Vertex set of the (p, ell)-wall-annulus: the central (2p+1)-subwall
    minus the central (2(p-ell)+1)-subwall, minus degree-one debris."""
    hi = derive_central_subwall(adj, pos, height, 2 * p + 1)
    if ell == p:
        inner3 = derive_central_subwall(adj, pos, height, 3)
        sub3 = _restrict(adj, inner3)
        lo = inner3 - set(outer_cycle_geometric(sub3, pos))
    else:
        lo = derive_central_subwall(adj, pos, height, 2 * (p - ell) + 1)
    res = _strip_degree_one(_restrict(adj, hi - lo))
    return set(res)
