"""Top-level algorithms: the brute-force oracle, the area finder, the
irrelevant-vertex finder, the instance reducer, and the full pipeline.

Desk-scale parameters void the theoretical guarantees, so the pipeline is
sound by checking: with cross_check on (the default), every reduction step is
committed only after an exhaustive oracle verification, and a failed check
raises instead of answering.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .config import PipelineConfig
from .errors import InputError, ResourceLimitError, SoundnessError
from .graphs import Graph, k5_star, vertex_key
from .logic import Formula, GaifmanSentence, check_fol, eval_gaifman
from .modification import (ModificationSet, Operation, application_domain,
                           apply, find_vr_planarizer,
                           is_planarization_irrelevant, subsets_up_to)
from .planarity import is_planar
from .signatures import (Parameters, compute_char, compute_parameters,
                         is_triple)
from .treewidth import TreeDecomposition, validate_decomposition, width_witness
from .walls import (Wall, analyze_wall, compass, disjoint_subwalls,
                    extended_compass, wall_candidates, _may_contain_wall)
from .signatures import area_family


# -- instances -------------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    graph: Graph
    k: int
    op: Operation
    phi: GaifmanSentence | Formula
    r_set: frozenset | None = None

    def __post_init__(self):
        if self.k < 0:
            raise InputError("budget k must be non-negative")
        if self.r_set is not None and not frozenset(self.r_set) <= self.graph.vertices:
            raise InputError("annotation set contains unknown vertices")

    def scope(self) -> frozenset:
        return frozenset(self.r_set) if self.r_set is not None else self.graph.vertices


# -- step outcomes -----------------------------------------------------------------

@dataclass(frozen=True)
class NoInstance:
    reason: str


@dataclass(frozen=True)
class ObligatoryVertex:
    vertex: object
    reason: str


@dataclass(frozen=True)
class WallArea:
    wall: Wall
    compass: Graph
    tw_witness: TreeDecomposition


@dataclass(frozen=True)
class IrrelevantRegion:
    region: frozenset
    vertex: object


@dataclass(frozen=True)
class BoundedTreewidth:
    decomposition: TreeDecomposition


# -- oracle ------------------------------------------------------------------------

def _models(h: Graph, r_here: frozenset, phi) -> bool:
    if isinstance(phi, GaifmanSentence):
        return eval_gaifman(h, r_here, phi)
    return check_fol(h, r_here, phi)


def solve_oracle(inst: Instance, cfg: PipelineConfig | None = None,
                 want_witness: bool = False):
    """Definitional semantics: exhaust modification sets within the budget,
    test planarity and the sentence on every modified graph."""
    cfg = cfg or PipelineConfig()
    scope = inst.scope()
    domain = application_domain(inst.op, inst.graph, scope)
    for sub in subsets_up_to(domain, inst.k, cfg.cap_oracle_subsets):
        if cfg.size_mode == "exact" and len(sub) != inst.k:
            continue
        ms = ModificationSet(inst.op, sub)
        h = apply(inst.graph, ms)
        if not is_planar(h):
            continue
        if _models(h, scope & h.vertices, inst.phi):
            return (True, ms) if want_witness else True
    return (False, None) if want_witness else False


# -- minor models -------------------------------------------------------------------

def find_minor_model(host: Graph, pattern: Graph, forced: dict | None = None,
                     node_budget: int = 100_000) -> dict | None:
    """A minor model of `pattern` in `host` (connected disjoint branch sets,
    host edge behind every pattern edge), grown by backtracking. `forced`
    seeds branch sets that may still grow. None means none found within the
    budget; the caller must not read absence as a proof."""
    if len(pattern.vertices) > len(host.vertices):
        return None
    porder = pattern.sorted_vertices()
    sets = {p: frozenset() for p in porder}
    if forced:
        for p, vs in forced.items():
            sets[p] = frozenset(vs)
    used = set().union(*sets.values())
    budget = [node_budget]

    def spend():
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("minor-model search exceeded its node budget")

    def edge_ok(pu, pv):
        return any(host.has_edge(a, b) for a in sets[pu] for b in sets[pv])

    def violation():
        for p in porder:
            if not sets[p]:
                return ("empty", p)
        for pu, pv in pattern.sorted_edges():
            if not edge_ok(pu, pv):
                return ("edge", (pu, pv))
        return None

    def attach_candidates(p):
        if not sets[p]:
            return [v for v in host.sorted_vertices() if v not in used]
        border = set()
        for a in sets[p]:
            border |= host.adj[a]
        return [v for v in sorted(border, key=vertex_key) if v not in used]

    def search() -> bool:
        spend()
        bad = violation()
        if bad is None:
            return True
        if bad[0] == "empty":
            p = bad[1]
            for v in attach_candidates(p):
                sets[p] = frozenset((v,))
                used.add(v)
                if search():
                    return True
                used.remove(v)
                sets[p] = frozenset()
            return False
        pu, pv = bad[1]
        for p in (pu, pv):
            for v in attach_candidates(p):
                sets[p] = sets[p] | {v}
                used.add(v)
                if search():
                    return True
                used.remove(v)
                sets[p] = sets[p] - {v}
        return False

    try:
        if search():
            return dict(sets)
    except ResourceLimitError:
        return None
    return None


def has_k5_star_minor(g: Graph, center, copies: int,
                      node_budget: int = 100_000) -> bool:
    """Does g contain a (K5, copies)-star minor with `center` in the central
    branch set? Absence within the budget is reported as False."""
    pattern, hub = k5_star(copies)
    pattern = Graph({f"p{v}" for v in pattern.vertices},
                    ((f"p{u}", f"p{v}") for u, v in pattern.edges))
    model = find_minor_model(g, pattern, forced={f"p{hub}": {center}},
                             node_budget=node_budget)
    return model is not None


# -- Find_Area ------------------------------------------------------------------------

def find_area(k: int, q: int, g: Graph, s: ModificationSet, op: Operation,
              cfg: PipelineConfig | None = None):
    """Trichotomy: an answer about obligatory structure, a q-wall whose compass
    is certified flat/irrelevant, or a bounded-width decomposition.

    The irrelevance bullet is verified by the planarizer-enumeration oracle
    rather than trusted.
    """
    cfg = cfg or PipelineConfig()
    if s.op is not Operation.VR:
        raise InputError("find_area expects a vertex-removal planarizer")
    fam = area_family(k, q, cfg.c1, cfg.c2)
    f1, f2 = fam["f1"], fam["f2"]
    if op is Operation.EA:
        if not is_planar(g):
            return NoInstance("edge additions cannot planarize a nonplanar graph")
        s = ModificationSet(Operation.VR, [])
    else:
        for u in s.sorted_elements():
            if has_k5_star_minor(g, u, k + 1, cfg.cap_wall_nodes):
                if op is Operation.VR:
                    return ObligatoryVertex(
                        u, f"central vertex of a (K5,{k + 1})-star minor")
                return NoInstance(
                    f"(K5,{k + 1})-star minor: {k} edge operations cannot "
                    f"clear {k + 1} K5 copies")
    removed = g.remove_vertices(s.elements)
    blocked = s.elements | {w for u in s.elements for w in g.adj[u]}
    outcome = _wall_branch(g, removed, blocked, q, op, k, f2, cfg)
    if outcome is not None:
        return outcome
    td = width_witness(g, f1, cfg.cap_exact_tw)
    if td is not None:
        return BoundedTreewidth(td)
    raise ResourceLimitError(
        f"no branch achievable: no certified q-wall and no width-{f1} witness")


def _wall_branch(g: Graph, flat: Graph, blocked: frozenset, q: int,
                 op: Operation, k: int, f2, cfg: PipelineConfig):
    if not _may_contain_wall(flat, q):
        return None
    if not is_planar(flat):
        return None

    tried = 0
    try:
        for wall in wall_candidates(flat, q, cfg.cap_wall_nodes):
            tried += 1
            comp = compass(g, wall)
            if not comp.vertices & blocked:
                witness = width_witness(comp, f2, cfg.cap_exact_tw)
                irrelevant = is_planarization_irrelevant(
                    g, op, k, comp.vertices, cfg.cap_oracle_subsets)
                if witness is not None and irrelevant:
                    return WallArea(wall, comp, witness)
            if tried >= 16:
                return None
    except ResourceLimitError:
        return None
    return None


# -- Find_Vertex ----------------------------------------------------------------------

def find_vertex(k: int, g: Graph, r_set: Iterable, wall: Wall, op: Operation,
                phi: GaifmanSentence, params: Parameters,
                cfg: PipelineConfig | None = None) -> IrrelevantRegion:
    """Pick equivalent disjoint subwalls inside the given wall and declare the
    chosen wall's inner compass irrelevant; with cross_check on, the produced
    (X, v) is committed only after an exhaustive triple-equivalence check."""
    cfg = cfg or PipelineConfig()
    r_set = frozenset(r_set)
    rho = params.rho
    if not isinstance(params.q, int):
        raise InputError("find_vertex needs concrete (configured) parameters")
    if params.r > rho:
        raise InputError(f"tower of height {rho} cannot host X = V(K^(r)) with r={params.r}")
    sub_height = 2 * rho + 1
    if wall.height < sub_height:
        raise ResourceLimitError(
            f"wall height {wall.height} cannot host ({sub_height})-subwalls; "
            f"lower rho_hat or supply a taller wall")
    subs = disjoint_subwalls(wall, sub_height)
    towers = []
    taken: set = set()
    for sub in subs:
        ec = extended_compass(g, sub, rho)
        if ec.compass.vertices & taken:
            continue
        taken |= ec.compass.vertices
        towers.append(ec)
    if len(towers) < 2:
        raise ResourceLimitError(
            f"only {len(towers)} disjoint subwall compasses; need at least 2")

    def finish(ec, region: frozenset) -> IrrelevantRegion:
        v = min(analyze_wall(ec.wall).center, key=vertex_key)
        assert v in region
        outcome = IrrelevantRegion(region, v)
        if cfg.cross_check:
            _verify_irrelevant_region(g, r_set, k, op, phi, outcome, cfg)
        return outcome

    if rho >= 2:  # the early exit unannotates V(K^(rho-1))
        for ec in towers:
            if not ec.compass.vertices & r_set:
                return finish(ec, frozenset(ec.level(rho - 1).graph.vertices))

    chars = []
    for ec in towers:
        chars.append(compute_char(g, ec.wall, r_set, op, k, phi, params, cfg, ec=ec))
    buckets: dict = {}
    for ec, char in zip(towers, chars):
        buckets.setdefault(char.canonical_json(), []).append(ec)
    big = [b for b in sorted(buckets) if len(buckets[b]) >= cfg.bucket_threshold]
    if not big:
        raise ResourceLimitError(
            f"no bucket of {cfg.bucket_threshold} equivalent subwalls among "
            f"{len(towers)}; desk-scale parameters cannot justify a replacement here")
    chosen = buckets[big[0]][0]
    return finish(chosen, frozenset(chosen.level(params.r).graph.vertices))


def _verify_irrelevant_region(g: Graph, r_set: frozenset, k: int, op: Operation,
                              phi: GaifmanSentence, outcome: IrrelevantRegion,
                              cfg: PipelineConfig):
    before = is_triple(g, r_set, k, op, phi, size_mode=cfg.size_mode,
                       cap=cfg.cap_oracle_subsets)
    after = is_triple(g.remove_vertices([outcome.vertex]), r_set - outcome.region,
                      k, op, phi, size_mode=cfg.size_mode, cap=cfg.cap_oracle_subsets)
    if before != after:
        raise SoundnessError(
            f"irrelevant-region cross-check failed: removing {outcome.vertex!r} "
            f"and unannotating {len(outcome.region)} vertices flips the answer")


def _verify_obligatory(g: Graph, k: int, u, cfg: PipelineConfig):
    domain = application_domain(Operation.VR, g, g.vertices)
    for sub in subsets_up_to(domain, k, cfg.cap_oracle_subsets):
        if u in sub:
            continue
        if is_planar(g.remove_vertices(sub)):
            raise SoundnessError(
                f"obligatory-vertex cross-check failed: {sorted(map(str, sub))} "
                f"planarizes without {u!r}")


def _verify_no_planarizer(g: Graph, k: int, op: Operation, cfg: PipelineConfig):
    domain = application_domain(op, g, g.vertices)
    for sub in subsets_up_to(domain, k, cfg.cap_oracle_subsets):
        if is_planar(apply(g, ModificationSet(op, sub))):
            raise SoundnessError(
                f"no-instance cross-check failed: {sorted(map(str, sub))} planarizes")


# -- Reduce_Instance ---------------------------------------------------------------

def reduce_instance(k: int, g: Graph, s: ModificationSet, r_set: Iterable,
                    op: Operation, phi: GaifmanSentence, params: Parameters,
                    cfg: PipelineConfig | None = None):
    """One reduction step: obligatory structure, an irrelevant region (via the
    area and vertex finders), or a bounded-width decomposition."""
    cfg = cfg or PipelineConfig()
    r_set = frozenset(r_set)
    if s.op is not Operation.VR or len(s) > k or not s.elements <= r_set:
        raise InputError("need a vertex-removal planarizer of size <= k inside R")
    if not is_planar(g.remove_vertices(s.elements)):
        raise InputError("the supplied set is not a vr-planarizer")
    if not isinstance(params.q, int):
        raise InputError("reduce_instance needs concrete (configured) parameters")
    outcome = find_area(k, params.q, g, s, op, cfg)
    if isinstance(outcome, ObligatoryVertex) and cfg.cross_check:
        _verify_obligatory(g, k, outcome.vertex, cfg)
    if isinstance(outcome, NoInstance) and op in (Operation.ER, Operation.EC) \
            and cfg.cross_check:
        _verify_no_planarizer(g, k, op, cfg)
    if isinstance(outcome, WallArea):
        try:
            region = find_vertex(k, g, r_set, outcome.wall, op, phi, params, cfg)
        except ResourceLimitError:
            # the trichotomy allows the decomposition branch instead
            fam = area_family(k, params.q, cfg.c1, cfg.c2)
            td = width_witness(g, fam["f1"], cfg.cap_exact_tw)
            if td is None:
                raise
            outcome = BoundedTreewidth(td)
        else:
            if not s.elements <= r_set - region.region:
                raise SoundnessError("planarizer is not preserved outside the region")
            return region
    if isinstance(outcome, BoundedTreewidth):
        assert validate_decomposition(g, outcome.decomposition)
    return outcome


# -- pipeline ------------------------------------------------------------------------

@dataclass
class TraceStep:
    step: int
    outcome: str
    detail: dict
    k: int
    n: int
    ms: float = 0.0

    def to_json_obj(self, timings: bool = False) -> dict:
        obj = {"step": self.step, "outcome": self.outcome, "detail": self.detail,
               "k": self.k, "n": self.n}
        if timings:
            obj["ms"] = round(self.ms, 3)
        return obj


@dataclass
class PipelineResult:
    answer: bool
    witness: ModificationSet | None
    trace: list = field(default_factory=list)
    cross_checked: bool = False

    def trace_json_obj(self, timings: bool = False) -> list:
        return [t.to_json_obj(timings) for t in self.trace]


def solve_pipeline(inst: Instance, cfg: PipelineConfig | None = None) -> PipelineResult:
    """The reduction loop: planarize, shrink via irrelevant regions or
    obligatory vertices, finish on a bounded-width remainder by direct search.

    With cross_check on, the final answer is also compared against the
    brute-force oracle whenever the caps allow.
    """
    cfg = cfg or PipelineConfig()
    if not isinstance(inst.phi, GaifmanSentence):
        raise InputError("the pipeline needs a Gaifman sentence; "
                         "plain formulas run under the oracle only")
    params = compute_parameters(inst.k, inst.phi, "configured", cfg)
    g = inst.graph
    r_set = inst.scope()
    k = inst.k
    op = inst.op
    trace: list = []
    result: PipelineResult | None = None

    def log(outcome: str, detail: dict, t0: float):
        trace.append(TraceStep(len(trace) + 1, outcome, detail, k,
                               len(g.vertices), (time.perf_counter() - t0) * 1000))

    t0 = time.perf_counter()
    if op is Operation.EA:
        s = ModificationSet(Operation.VR, [])
        if not is_planar(g):
            log("no-instance",
                {"reason": "edge additions cannot planarize a nonplanar graph"}, t0)
            result = PipelineResult(False, None, trace)
    else:
        s = find_vr_planarizer(g, k)
        if s is not None and not s.elements <= r_set:
            s = _planarizer_within(g, k, r_set)
        if s is None:
            log("no-planarizer", {"within": "R"}, t0)
            result = PipelineResult(False, None, trace)
    max_steps = max(len(g.vertices), 1)
    steps = 0
    while result is None:
        steps += 1
        if steps > max_steps:
            raise ResourceLimitError("reduction loop exceeded |V| steps")
        t0 = time.perf_counter()
        outcome = reduce_instance(k, g, s, r_set, op, inst.phi, params, cfg)
        if isinstance(outcome, NoInstance):
            log("no-instance", {"reason": outcome.reason}, t0)
            result = PipelineResult(False, None, trace)
        elif isinstance(outcome, ObligatoryVertex):
            log("obligatory-vertex", {"vertex": outcome.vertex,
                                      "reason": outcome.reason}, t0)
            g = g.remove_vertices([outcome.vertex])
            s = ModificationSet(Operation.VR, s.elements - {outcome.vertex})
            k -= 1
        elif isinstance(outcome, IrrelevantRegion):
            log("irrelevant-region", {"vertex": outcome.vertex,
                                      "|X|": len(outcome.region)}, t0)
            g = g.remove_vertices([outcome.vertex])
            r_set = (r_set - outcome.region) & g.vertices
        else:
            answer, witness = is_triple(g, r_set, k, op, inst.phi,
                                        size_mode=cfg.size_mode,
                                        cap=cfg.cap_oracle_subsets,
                                        want_witness=True)
            log("bounded-treewidth",
                {"width": outcome.decomposition.width(), "answer": answer}, t0)
            result = PipelineResult(answer, witness, trace)
    if cfg.cross_check:
        t0 = time.perf_counter()
        try:
            expect = solve_oracle(inst, cfg)
        except ResourceLimitError as exc:
            trace.append(TraceStep(len(trace) + 1, "cross-check-skipped",
                                   {"reason": str(exc)}, k, len(g.vertices)))
        else:
            if expect != result.answer:
                raise SoundnessError(
                    f"pipeline answered {result.answer}, oracle says {expect}")
            result.cross_checked = True
            trace.append(TraceStep(len(trace) + 1, "cross-check",
                                   {"agrees": True}, k, len(g.vertices),
                                   (time.perf_counter() - t0) * 1000))
    return result


def _planarizer_within(g: Graph, k: int, r_set: frozenset) -> ModificationSet | None:
    """Exhaustive fallback: a vr-planarizer of size <= k inside R."""
    for sub in subsets_up_to(sorted(r_set, key=vertex_key), k):
        if is_planar(g.remove_vertices(sub)):
            return ModificationSet(Operation.VR, sub)
    return None
