"""Wall signatures and characteristics: the data that makes two walls
interchangeable for the replacement argument, plus the parameter formulas
with their tower-of-exponentials growth.

The raw-comprehension evaluator in `sigoracle` is the authority for every
derived value here; this module's searches must agree with it entry for entry.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from itertools import combinations, product
from math import isqrt
from typing import Iterable

from .config import PipelineConfig
from .errors import InputError, ResourceLimitError
from .graphs import Graph, vertex_key
from .logic import GaifmanSentence, check_local, eval_gaifman
from .modification import (ModificationSet, Operation, affected,
                           application_domain, apply, subsets_up_to)
from .planarity import is_planar, planar_with_additions
from .walls import ExtendedCompass, Wall, extended_compass

EXACT_W_EXPONENT_LIMIT = 1 << 21  # bits; beyond this w is rendered, not computed


# -- parameters -----------------------------------------------------------------

@dataclass(frozen=True)
class Parameters:
    """Derived quantities of (k, phi): the replacement-side d, rho, w, q and
    the area-side family. Values too large to materialize are strings showing
    the exponent tower."""

    k: int
    m: int
    r: int
    ell: int
    d: int
    rho: int
    w: int | str
    q: int | str
    q_area: int | str
    r_area: int | str
    z_area: int | str
    ell_area: int
    b: int | str
    f1: int | str
    f2: int | str
    mode: str

    def describe(self) -> dict:
        out = {}
        for name in ("k", "m", "r", "ell", "d", "rho", "w", "q", "q_area",
                     "r_area", "z_area", "ell_area", "b", "f1", "f2", "mode"):
            val = getattr(self, name)
            out[name] = val if isinstance(val, (int, str)) else str(val)
        return out


def _exact_w(k: int, ell: int, rho: int) -> int | str:
    inner = (2 ** ell) * rho
    factor = (2 * k + 1) * (ell + 3)
    display = f"2^({rho}*{k + 1}*2^{inner})*{factor}"
    if inner > 64:
        return display
    exponent = rho * (k + 1) * (2 ** inner)
    if exponent > EXACT_W_EXPONENT_LIMIT:
        return display
    return (2 ** exponent) * factor


def _ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def area_family(k: int, q: int, c1: int, c2: int) -> dict:
    """The area-side parameter family for a concrete wall height q."""
    m = 3 * (2 * k + 1)
    r_area = 2 * (2 * m + q) + 1
    z_area = c1 * r_area + 2
    f2 = z_area - 2
    ell_area = 4 * _ceil_sqrt(k + 1) - 1
    # the side count of the block grid is rounded up to stay integral
    b = 2 * ell_area + _ceil_sqrt(ell_area ** 4 * k) * z_area
    f1 = max(c2 * b + k, c1 * q)
    return {"m": m, "r_area": r_area, "z_area": z_area, "f2": f2,
            "ell_area": ell_area, "b": b, "f1": f1}


def compute_parameters(k: int, phi: GaifmanSentence, mode: str = "configured",
                       cfg: PipelineConfig | None = None) -> Parameters:
    """Theoretical mode evaluates the defining formulas exactly (big integers
    or rendered towers); configured mode substitutes the desk-scale hats while
    keeping the formula for d unless d_hat is set."""
    cfg = cfg or PipelineConfig()
    if mode not in ("theoretical", "configured"):
        raise InputError("mode must be 'theoretical' or 'configured'")
    r = phi.max_r()
    ell = phi.total_ell()
    m = phi.m
    d_formula = 2 * (r + (ell + 1) * r + r)
    if mode == "theoretical":
        d = d_formula
        rho = (2 * k + 1) * d
        w = _exact_w(k, ell, rho)
        if isinstance(w, int):
            q = _ceil_of_scaled_sqrt(2 * rho + 1, w)
        else:
            q = f"ceil({2 * rho + 1}*sqrt({w}))"
    else:
        d = cfg.d_hat if cfg.d_hat is not None else d_formula
        rho = cfg.rho_hat if cfg.rho_hat is not None else (2 * k + 1) * d
        w = cfg.w_hat if cfg.w_hat is not None else _exact_w(k, ell, rho)
        if cfg.q_hat is not None:
            q = cfg.q_hat
        elif isinstance(w, int):
            q = _ceil_of_scaled_sqrt(2 * rho + 1, w)
        else:
            q = f"ceil({2 * rho + 1}*sqrt({w}))"
    if isinstance(q, int):
        fam = area_family(k, q, cfg.c1, cfg.c2)
        q_area = q
    else:
        mm = 3 * (2 * k + 1)
        q_area = q
        fam = {"m": mm, "r_area": f"2*(2*{mm}+Q)+1 with Q={q}",
               "z_area": f"{cfg.c1}*R+2 with R=r_area", "f2": f"{cfg.c1}*r_area",
               "ell_area": 4 * _ceil_sqrt(k + 1) - 1,
               "b": "2*ell_area+ceil(sqrt(ell_area^4*k))*z_area",
               "f1": f"max({cfg.c2}*b+{k}, {cfg.c1}*Q)"}
    return Parameters(k=k, m=m, r=r, ell=ell, d=d, rho=rho, w=w, q=q,
                      q_area=q_area, r_area=fam["r_area"], z_area=fam["z_area"],
                      ell_area=fam["ell_area"], b=fam["b"], f1=fam["f1"],
                      f2=fam["f2"], mode=mode)


def _ceil_of_scaled_sqrt(a: int, w: int) -> int:
    """ceil(a * sqrt(w)) for exact integers."""
    lo = isqrt(a * a * w)
    return lo if lo * lo == a * a * w else lo + 1


def z_range(params: Parameters, warn: bool = True) -> range:
    """The z indices [d, rho]; configured parameters may invert the bounds,
    in which case the range is clamped (theoretical mode never clamps)."""
    d, rho = params.d, params.rho
    if d > rho:
        if params.mode == "theoretical":
            raise InputError(f"empty z range [{d}, {rho}] in theoretical mode")
        if warn:
            warnings.warn(f"z range [{d}, {rho}] is empty; clamped to [{rho}, {rho}]",
                          stacklevel=2)
        return range(rho, rho + 1)
    return range(d, rho + 1)


# -- signature entries -------------------------------------------------------------

@dataclass(frozen=True)
class SigEntry:
    """(Y_1, ..., Y_m, t): which basic variables can be realized by scattered
    witnesses inside the t-th compass level."""

    ys: tuple  # tuple of frozensets of 1-based indices
    t: int

    def to_json_obj(self) -> list:
        return [[sorted(y) for y in self.ys], self.t]


def sig_canonical(entries: Iterable) -> list:
    return sorted((e.to_json_obj() for e in entries))


@dataclass(frozen=True)
class Characteristic:
    """The set of realizable (z, sig, s) rows for one extended compass."""

    entries: frozenset  # of (z, frozenset[SigEntry], s)

    def to_json_obj(self) -> list:
        rows = []
        for z, sig, s in self.entries:
            rows.append({"z": z, "s": s, "sig": sig_canonical(sig)})
        rows.sort(key=lambda row: (row["z"], row["s"], json.dumps(row["sig"])))
        return rows

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


def walls_equivalent(char1: Characteristic, char2: Characteristic) -> bool:
    return char1.entries == char2.entries


# -- shared semantics helpers (used by this module and by sigoracle) ----------------

def restrict_modset(s: ModificationSet, sub: Graph) -> ModificationSet:
    """Drop elements that do not lie entirely inside the subgraph."""
    kept = [e for e in s.sorted_elements()
            if (e in sub.vertices if s.op is Operation.VR
                else e[0] in sub.vertices and e[1] in sub.vertices)]
    return ModificationSet(s.op, kept)


def apply_within(sub: Graph, s: ModificationSet) -> Graph:
    return apply(sub, restrict_modset(s, sub))


def level_pair(ec: ExtendedCompass, t: int, r: int):
    """K^(t) and the pair (K^(t-r+1), P^(t-r+1)), indices clamped at 1."""
    kt = ec.level(t).graph
    low = ec.level(max(1, t - r + 1))
    return kt, low.graph, low.perimeter


# -- signature computation -----------------------------------------------------------

def compute_sig(ec: ExtendedCompass, r_set: Iterable, z: int, s: ModificationSet,
                phi: GaifmanSentence, params: Parameters) -> frozenset:
    """All (Y_1..Y_m, t) with t <= z realizable by scattered local witnesses
    in the modified compass tower; exhaustive search driven by check_local."""
    r_set = frozenset(r_set)
    rho = min(params.rho, ec.rho)
    if not 1 <= z <= ec.rho:
        raise InputError(f"z={z} outside the tower range [1, {ec.rho}]")
    anchor_idx = max(1, z - params.d + 1)
    anchor = ec.level(anchor_idx).graph.vertices & r_set
    if not affected(s) <= anchor:
        raise InputError("modification set affects vertices outside K^(z-d+1) ∩ R")
    r = params.r
    entries = set()
    for t in range(1, min(z, rho) + 1):
        kt, ktr, ptr = level_pair(ec, t, r)
        kt_mod = apply_within(kt, s)
        ktr_mod = apply_within(ktr, s)
        allowed = (ktr_mod.vertices - ptr) & r_set & kt_mod.vertices
        feasible = []
        for basic in phi.basics:
            feasible.append(_feasible_sizes(kt_mod, r_set, allowed, basic))
        for ys in product(*(_subsets_of_sizes(basic.ell, sizes)
                            for basic, sizes in zip(phi.basics, feasible))):
            entries.add(SigEntry(tuple(ys), t))
    return frozenset(entries)


def _subsets_of_sizes(ell: int, sizes: set) -> list:
    out = []
    universe = list(range(1, ell + 1))
    for size in sorted(sizes):
        out.extend(frozenset(c) for c in combinations(universe, size))
    return out


def _feasible_sizes(kt_mod: Graph, r_set: frozenset, allowed: frozenset, basic) -> set:
    """Witness-set sizes y for which an (y, r_h)-scattered set of psi_h
    vertices exists inside `allowed`; downward closed, so search from the top."""
    candidates = [v for v in sorted(allowed, key=vertex_key)
                  if check_local(kt_mod, r_set & kt_mod.vertices, v, basic.psi, basic.r)]
    dists = {}

    def far(u, v):
        if u not in dists:
            dists[u] = kt_mod.bfs_distances(u)
        return dists[u].get(v, float("inf")) > 2 * basic.r

    def scattered_of(size) -> bool:
        def grow(chosen, start):
            if len(chosen) == size:
                return True
            for i in range(start, len(candidates)):
                v = candidates[i]
                if all(far(u, v) for u in chosen):
                    if grow(chosen + [v], i + 1):
                        return True
            return False
        return grow([], 0)

    top = 0
    for y in range(basic.ell, 0, -1):
        if len(candidates) >= y and scattered_of(y):
            top = y
            break
    return set(range(0, top + 1))


def compute_char(g: Graph, w: Wall, r_set: Iterable, op: Operation, k: int,
                 phi: GaifmanSentence, params: Parameters,
                 cfg: PipelineConfig | None = None,
                 ec: ExtendedCompass | None = None) -> Characteristic:
    """All realizable (z, sig, s): some S inside the z-anchored region of the
    compass, of size exactly s, keeping the compass planar, with that sig."""
    cfg = cfg or PipelineConfig()
    r_set = frozenset(r_set)
    if ec is None:
        ec = extended_compass(g, w, min(params.rho, (w.height - 1) // 2))
    if len(ec.compass.vertices) > cfg.cap_compass:
        raise ResourceLimitError(
            f"compass has {len(ec.compass.vertices)} vertices, cap is {cfg.cap_compass}")
    compass_graph = ec.compass
    r_k = r_set & compass_graph.vertices
    entries = set()
    budget = cfg.cap_char_subsets
    for z in z_range(params):
        if z > ec.rho:
            continue
        anchor_idx = max(1, z - params.d + 1)
        anchor = ec.level(anchor_idx).graph.vertices & r_k
        domain = [e for e in sorted(application_domain(op, compass_graph, r_k),
                                    key=lambda e: (vertex_key(e[0]), vertex_key(e[1]))
                                    if isinstance(e, tuple) else vertex_key(e))
                  if (affected(ModificationSet(op, [e])) <= anchor)]
        for size in range(0, k + 1):
            for combo in combinations(domain, size):
                budget -= 1
                if budget < 0:
                    raise ResourceLimitError(
                        "characteristic enumeration exceeded cap-char-subsets")
                ms = ModificationSet(op, combo)
                if op is Operation.EA:
                    planar = planar_with_additions(compass_graph, ms.elements)
                else:
                    planar = is_planar(apply(compass_graph, ms))
                if not planar:
                    continue
                sig = compute_sig(ec, r_k, z, ms, phi, params)
                entries.add((z, sig, size))
    return Characteristic(frozenset(entries))


# -- triples -----------------------------------------------------------------------

def is_triple(g: Graph, r_set: Iterable, k: int, op: Operation,
              phi: GaifmanSentence, *, size_mode: str = "at_most",
              cap: int | None = None, want_witness: bool = False):
    """Does some S ⊆ op⟨G, R⟩ within the budget make G ⊠ S planar and a model
    of the annotated sentence? Exhaustive search."""
    r_set = frozenset(r_set)
    annotated = phi if phi.annotated else GaifmanSentence(phi.basics, phi.combination, True)
    domain = application_domain(op, g, r_set)
    witness = None
    found = False
    for sub in subsets_up_to(domain, k, cap):
        if size_mode == "exact" and len(sub) != k:
            continue
        ms = ModificationSet(op, sub)
        h = apply(g, ms)
        if not is_planar(h):
            continue
        if eval_gaifman(h, r_set & h.vertices, annotated):
            found = True
            witness = ms
            break
    return (found, witness) if want_witness else found
