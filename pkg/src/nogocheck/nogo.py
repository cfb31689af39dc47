"""Theorem checkers: feasibility compilations, certificates, counterexamples.

The blocked/unblocked interferometer statistics are compiled into exact
linear feasibility programs over deterministic per-context outcome
assignments (any stochastic response table is a convex mixture of these,
with the mixing weights absorbed into the epistemic state).  Ontic
indifference enters as an admissibility filter on assignments; the
assumption that responses do not read the wavefunction is what licenses
tying the blocked run to the unblocked run at all.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import contexts as ctx
from . import interferometer as ifm
from . import lp
from .lp import (EQ, LE, ConstraintSystem, FeasibilityResult, LinearRow,
                 enumerate_feasible, solve, verify_farkas)
from .ontology import (AssumptionSet, EpistemicState, OntologicalModel,
                       ResponseTable)
from .qstate import (Effect, ProjectiveMeasurement, StateVector,
                     born_probabilities, inner_product, tensor)


class HypothesisRangeError(ValueError):
    """Theorem hypotheses need 0 < a2 <= 1/2 (the arm-0 weight not dominant)."""


class NonOrthogonalityError(ValueError):
    """The two-state argument needs non-orthogonal inputs."""


class InternalInconsistencyError(AssertionError):
    """Solver and brute-force oracle disagree; must never happen."""


@dataclass
class TheoremReport:
    theorem: str                       # "pbr" | "hroi" | "hroi2"
    parameters: dict
    status: str
    result: FeasibilityResult | None = None
    max_overlap: Fraction | None = None
    trace: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)


def _check_a2(a2) -> Fraction:
    a2 = Fraction(a2)
    if not 0 < a2 <= Fraction(1, 2):
        raise HypothesisRangeError(
            f"a2={a2} outside (0, 1/2]: arm-0 amplitude would dominate")
    return a2


# ---------------------------------------------------------------------------
# deterministic assignments for the preparation-stage argument

CHI_LABELS = ("0", "pi")


@dataclass(frozen=True)
class Assignment:
    """One deterministic outcome per configured context."""
    m1: str                 # Yes / No
    blocked: dict           # chi label -> beta in {2,3,4,stop}; forced stop on No
    unblocked: dict         # chi label -> port in {2,3,4}

    def var(self) -> str:
        bs = "".join(self.blocked[cl] for cl in CHI_LABELS)
        us = "".join(self.unblocked[cl] for cl in CHI_LABELS)
        return f"w[{self.m1}|{bs}|{us}]"


def _all_assignments() -> list:
    out = []
    for m1 in ctx.M1_OUTCOMES:
        betas = ctx.BETA_OUTCOMES if m1 == "Yes" else (ctx.STOP,)
        for b in itertools.product(betas, repeat=len(CHI_LABELS)):
            for u in itertools.product(ctx.PORT_OUTCOMES,
                                       repeat=len(CHI_LABELS)):
                out.append(Assignment(m1, dict(zip(CHI_LABELS, b)),
                                      dict(zip(CHI_LABELS, u))))
    return out


def _admissible(a: Assignment, roi: bool, psi_anomic: bool) -> bool:
    if a.m1 != "Yes":
        return True  # indifference constrains only the pass-the-blocker subset
    if roi:
        # phase in the empty arm cannot matter once the particle took arm 0
        first = a.blocked[CHI_LABELS[0]]
        if any(a.blocked[cl] != first for cl in CHI_LABELS[1:]):
            return False
        if psi_anomic:
            # responses cannot read the wavefunction, so the blocked and
            # unblocked devices must answer alike at every port
            for port in ctx.PORT_OUTCOMES:
                want = first == port
                if any((a.unblocked[cl] == port) != want for cl in CHI_LABELS):
                    return False
    return True


def compile_hroi2(a2, roi: bool = True, psi_anomic: bool = True
                  ) -> ConstraintSystem:
    """Feasibility program for the preparation-stage no-go argument.

    Variables are weights over admissible deterministic assignments for
    the contexts {M1, M1+M2[0], M1+M2[pi], M0+M2[0], M0+M2[pi]}; equality
    rows pin the quantum statistics of each context.  A single weight
    vector encodes both preparation independence and shared responses.
    """
    a2 = _check_a2(a2)
    cfg = ifm.CircuitConfig(a2)
    assignments = [a for a in _all_assignments()
                   if _admissible(a, roi, psi_anomic)]
    pruned = sum(1 for a in _all_assignments()
                 if not _admissible(a, roi, psi_anomic))
    variables = [a.var() for a in assignments]
    by_var = {a.var(): a for a in assignments}

    def row(pred, rhs, tag):
        coeffs = {a.var(): Fraction(1) for a in assignments if pred(a)}
        return LinearRow(coeffs, EQ, Fraction(rhs), tag)

    rows = [row(lambda a: True, 1, "normalization")]
    m1_stats = ifm.run_m1(cfg)
    for alpha in ctx.M1_OUTCOMES:
        rows.append(row(lambda a, al=alpha: a.m1 == al, m1_stats[alpha],
                        f"stats:{ctx.M1}:{alpha}"))
    for cl in CHI_LABELS:
        chi = ctx.chi_from_label(cl)
        joint_stats = ifm.run_m1_m2(cfg, chi)
        for outcome, p in joint_stats.items():
            alpha, beta = ctx.split_joint(outcome)
            rows.append(row(
                lambda a, al=alpha, be=beta, c=cl:
                    a.m1 == al and a.blocked[c] == be,
                p, f"stats:{ctx.m1_m2(cl)}:{outcome}"))
        port_stats = ifm.run_m0_m2(cfg, chi)
        for port, p in port_stats.items():
            rows.append(row(lambda a, po=port, c=cl: a.unblocked[c] == po,
                            p, f"stats:{ctx.m0_m2(cl)}:{port}"))
    return ConstraintSystem(
        variables, rows,
        meta={"a2": a2, "roi": roi, "psi_anomic": psi_anomic,
              "assignments": by_var, "pruned_assignments": pruned,
              "chi_labels": CHI_LABELS})


def witness_to_model(cs: ConstraintSystem, witness: dict) -> OntologicalModel:
    """Turn LP weights into a finite model over the support assignments."""
    support = {v: w for v, w in witness.items() if w != 0}
    by_var = cs.meta["assignments"]
    space = tuple(sorted(support))
    epistemic = EpistemicState(ctx.PSI_IN, {v: w for v, w in support.items()})
    tables = [ResponseTable(ctx.M1, {
        v: {by_var[v].m1: Fraction(1)} for v in space})]
    for cl in cs.meta["chi_labels"]:
        tables.append(ResponseTable(ctx.m1_m2(cl), {
            v: {ctx.joint(by_var[v].m1, by_var[v].blocked[cl]): Fraction(1)}
            for v in space}))
        tables.append(ResponseTable(ctx.m0_m2(cl), {
            v: {by_var[v].unblocked[cl]: Fraction(1)} for v in space}))
    return OntologicalModel((space or ("empty",)), (epistemic,),
                            tuple(tables), AssumptionSet(psi_anomic=True))


def psi_in_fragment(a2, chi_labels=CHI_LABELS) -> tuple:
    """The single-preparation slice of the fragment the program encodes."""
    return tuple(e for e in ifm.device_fragment(a2, chi_labels)
                 if e.preparation == ctx.PSI_IN)


def enumerate_oracle(cs: ConstraintSystem,
                     max_nodes: int = 200_000) -> FeasibilityResult:
    """Independent brute-force feasibility decision (see lp module)."""
    return enumerate_feasible(cs, max_nodes=max_nodes)


def check_hroi2(a2, relax: tuple = ()) -> TheoremReport:
    """Preparation-stage no-go: infeasible unless an assumption is relaxed."""
    a2 = _check_a2(a2)
    roi = "roi" not in relax
    psi_anomic = "psi_anomic" not in relax
    cs = compile_hroi2(a2, roi=roi, psi_anomic=psi_anomic)
    result = solve(cs)
    oracle = enumerate_oracle(cs)
    if result.status != oracle.status:
        raise InternalInconsistencyError(
            f"simplex says {result.status}, oracle says {oracle.status}")
    trace = [
        f"contexts: {ctx.M1}, blocked and unblocked runs at chi in {{0, pi}}",
        f"quantum statistics rows fixed from the device at a2={a2} "
        f"(zero rows: blocked joint (Yes,2) and (Yes,{ctx.STOP}); "
        f"unblocked port 4 at chi=0 and port 3 at chi=pi)",
        "sequential consistency: blocked joint outcomes marginalize to the "
        "first-stage Yes/No response per ontic state",
    ]
    if roi:
        trace.append(
            "indifference tie: blocked-run responses carry no phase index")
    if roi and psi_anomic:
        trace.append(
            "indifference + wavefunction-free responses tie the blocked "
            "joint ports to the unblocked ports at every phase")
        trace.append(
            "the unblocked zero rows then force every pass-the-blocker "
            "assignment to weight 0, while the Yes statistics row demands "
            f"total weight a2 = {a2} > 0")
        trace.append(
            "auxiliary conflict: the port-2 tie would force the blocked "
            "joint (Yes,2) response to 1 on the passing subset, against its "
            "zero statistics row")
    if result.status == lp.INFEASIBLE:
        verify_farkas(cs, result.certificate)
        trace.append("Farkas certificate re-verified by exact multiplication")
    else:
        trace.append("feasible: witness model attached "
                     f"(relaxed: {', '.join(relax) or 'none'})")
    report = TheoremReport(
        "hroi2", {"a2": a2, "relax": list(relax)}, result.status, result,
        trace=trace,
        notes={"port_convention": ifm.PORT_CONVENTION_NOTE,
               "roi_tie_direction": (
                   "blocked joint ports are tied to the *unblocked* run; "
                   "tying them to the blocked run itself would be vacuous"),
               "pruned_assignments": cs.meta["pruned_assignments"]})
    return report


# ---------------------------------------------------------------------------
# original two-preparation overlap bound

def compile_hroi_overlap(a2, roi: bool = True) -> ConstraintSystem:
    """Max common epistemic mass of the superposition and the single-arm
    preparation under shared deterministic responses.

    Assignments fix a port for the device at each phase; indifference
    restricts the single-arm support to phase-independent assignments.
    """
    a2 = _check_a2(a2)
    cfg = ifm.CircuitConfig(a2)
    assignments = list(itertools.product(ctx.PORT_OUTCOMES,
                                         repeat=len(CHI_LABELS)))
    tied = [s for s in assignments if len(set(s)) == 1]
    plus_vars = {s: f"p[{''.join(s)}]" for s in assignments}
    zero_support = tied if roi else assignments
    zero_vars = {s: f"q[{''.join(s)}]" for s in zero_support}
    common = [s for s in assignments if s in zero_vars]
    min_vars = {s: f"t[{''.join(s)}]" for s in common}

    rows = [
        LinearRow({v: Fraction(1) for v in plus_vars.values()}, EQ,
                  Fraction(1), "normalization:Psi+"),
        LinearRow({v: Fraction(1) for v in zero_vars.values()}, EQ,
                  Fraction(1), "normalization:Psi0"),
    ]
    for i, cl in enumerate(CHI_LABELS):
        chi = ctx.chi_from_label(cl)
        plus_stats = ifm.run_m0_m2(cfg, chi)
        zero_stats = ifm.run_psi0_full(cfg, chi)
        for port in ctx.PORT_OUTCOMES:
            rows.append(LinearRow(
                {plus_vars[s]: Fraction(1) for s in assignments
                 if s[i] == port},
                EQ, plus_stats[port], f"stats:Psi+:{ctx.m2(cl)}:{port}"))
            rows.append(LinearRow(
                {zero_vars[s]: Fraction(1) for s in zero_support
                 if s[i] == port},
                EQ, zero_stats[port], f"stats:Psi0:{ctx.m2(cl)}:{port}"))
    for s in common:
        rows.append(LinearRow(
            {min_vars[s]: Fraction(1), plus_vars[s]: Fraction(-1)}, LE,
            Fraction(0), f"overlap-bound:p:{''.join(s)}"))
        rows.append(LinearRow(
            {min_vars[s]: Fraction(1), zero_vars[s]: Fraction(-1)}, LE,
            Fraction(0), f"overlap-bound:q:{''.join(s)}"))
    variables = (list(plus_vars.values()) + list(zero_vars.values())
                 + list(min_vars.values()))
    objective = {v: Fraction(1) for v in min_vars.values()}
    return ConstraintSystem(variables, rows, objective=objective,
                            meta={"a2": a2, "roi": roi,
                                  "plus_vars": plus_vars,
                                  "zero_vars": zero_vars,
                                  "min_vars": min_vars})


def check_hroi_original(a2, roi: bool = True) -> TheoremReport:
    a2 = _check_a2(a2)
    cs = compile_hroi_overlap(a2, roi=roi)
    result = solve(cs)
    if result.status != lp.FEASIBLE:
        raise InternalInconsistencyError(
            f"overlap program should be feasible, got {result.status}")
    overlap = result.objective_value
    # independent re-read of the optimum from the witness itself
    witness_overlap = Fraction(0)
    for s, tv in cs.meta["min_vars"].items():
        p = result.witness[cs.meta["plus_vars"][s]]
        q = result.witness[cs.meta["zero_vars"][s]]
        witness_overlap += min(p, q)
    if witness_overlap != overlap:
        raise InternalInconsistencyError(
            f"witness overlap {witness_overlap} != optimum {overlap}")
    trace = [
        f"zero rows: unblocked port 4 at chi=0 and port 3 at chi=pi pin the "
        f"superposition support away from phase-independent ports",
        "single-arm statistics (1/2, 1/2 on ports 3/4) put all its mass on "
        "phase-independent assignments" if roi else
        "indifference removed: the single-arm support may read the phase",
        f"maximum common mass = {overlap} (dual bound verified exactly)",
    ]
    status = "overlap-zero" if overlap == 0 else "overlap-positive"
    return TheoremReport("hroi", {"a2": a2, "roi": roi}, status, result,
                         max_overlap=overlap, trace=trace,
                         notes={"port_convention": ifm.PORT_CONVENTION_NOTE})


# ---------------------------------------------------------------------------
# antidistinguishability argument for product preparations

QUBIT = ("0", "1")


def qubit(amp0, amp1) -> StateVector:
    return StateVector(QUBIT, (amp0, amp1))


def _amp_sqrt_half():
    from .amplitudes import Amplitude
    return Amplitude.from_sqrt(Fraction(1, 2))


def pbr_fixture() -> tuple:
    """|0>, |+> and the entangled four-outcome basis that jointly
    antidistinguishes their four product preparations.  The defining
    orthogonality conditions are verified at load, not trusted."""
    from .amplitudes import Amplitude
    one, zero = Amplitude.one(), Amplitude.zero()
    h = _amp_sqrt_half()
    half = Amplitude.from_fraction(Fraction(1, 2))
    psi1 = qubit(one, zero)
    psi2 = qubit(h, h)
    space = tuple(f"({x},{y})" for x in QUBIT for y in QUBIT)

    def vec(*amps):
        return StateVector(space, tuple(amps))

    effects = (
        ("xi1", vec(zero, h, h, zero)),
        ("xi2", vec(half, -half, half, half)),
        ("xi3", vec(half, half, -half, half)),
        ("xi4", vec(h, zero, zero, -h)),
    )
    m = ProjectiveMeasurement("antidistinguisher", tuple(
        Effect(name, (v,)) for name, v in effects))
    return psi1, psi2, m


def pbr_check(psi1: StateVector, psi2: StateVector,
              m: ProjectiveMeasurement) -> TheoremReport:
    """Derive the zero-overlap conclusion for two non-orthogonal states via
    an antidistinguishing measurement on two independent copies."""
    ip = inner_product(psi1, psi2)
    if ip.is_zero():
        raise NonOrthogonalityError(
            "states are orthogonal; the argument addresses the "
            "non-orthogonal case")
    preps = {}
    for n, pn in (("1", psi1), ("2", psi2)):
        for k, pk in (("1", psi1), ("2", psi2)):
            preps[f"{n}{k}"] = tensor(pn, pk)
    zero_map: dict = {}
    exact = all(p.exact for p in preps.values())
    for name, state in preps.items():
        probs = born_probabilities(state, m)
        zeros = [o for o, p in probs.items()
                 if (isinstance(p, Fraction) and p == 0)
                 or (not isinstance(p, Fraction) and abs(p) <= 1e-12)]
        zero_map[name] = zeros
    outcome_killers = {o: [n for n, zs in zero_map.items() if o in zs]
                       for o in m.outcomes}
    trace = [f"preparation {n}: zero-probability outcomes {zs}"
             for n, zs in zero_map.items()]
    if any(not zs for zs in zero_map.values()) or \
            any(not ks for ks in outcome_killers.values()):
        trace.append("some preparation or outcome has no zero condition: "
                     "the measurement does not antidistinguish")
        return TheoremReport("pbr", {"exact": exact}, "inconclusive",
                             trace=trace)
    trace += [
        "suppose a common ontic pair lies in the supports of both states on "
        "each copy; with factorizing product epistemics it lies in the "
        "support of all four product preparations",
        "wavefunction-free responses give that pair a single response row "
        "for the measurement",
    ] + [
        f"outcome {o}: probability 0 under preparation(s) "
        f"{', '.join(outcome_killers[o])}, so the shared response at {o} is 0"
        for o in m.outcomes
    ] + [
        "all outcome responses vanish, contradicting row normalization "
        "(outcomes must sum to 1): the supports cannot overlap",
    ]
    return TheoremReport("pbr", {"exact": exact,
                                 "overlap_inner_product": repr(ip)},
                         "contradiction", trace=trace)


# ---------------------------------------------------------------------------
# counterexample construction and vertex decomposition

def nomic_counterexample(a2, style: str = "point") -> OntologicalModel:
    """Wavefunction-indexed model reproducing the whole fragment.

    Responses are the Born tables of each preparation, so the model is
    trivially empirically adequate, overlaps maximally, and fails the
    shared-response (anomic) requirement on structural grounds.
    """
    a2 = Fraction(a2)
    fragment = ifm.device_fragment(a2)
    if style == "point":
        space = ("λ0",)
        weights = {ctx.PSI_IN: {"λ0": Fraction(1)},
                   ctx.PSI_PLUS: {"λ0": Fraction(1)},
                   ctx.PSI_ZERO: {"λ0": Fraction(1)}}
    elif style == "arm":
        space = ("arm0", "arm1")
        weights = {ctx.PSI_IN: {"arm0": a2, "arm1": 1 - a2},
                   ctx.PSI_PLUS: {"arm0": a2, "arm1": 1 - a2},
                   ctx.PSI_ZERO: {"arm0": Fraction(1)}}
    else:
        raise ValueError(f"unknown counterexample style {style!r}")
    epistemics = tuple(EpistemicState(p, w) for p, w in weights.items())
    responses = tuple(
        ResponseTable(entry.context,
                      {lam: dict(entry.distribution) for lam in space},
                      preparation=entry.preparation)
        for entry in fragment)
    return OntologicalModel(space, epistemics, responses,
                            AssumptionSet(psi_anomic=False))


def vertex_decompose(model: OntologicalModel) -> OntologicalModel:
    """Replace stochastic responses by deterministic ones on a refined space.

    Each ontic state splits into one copy per joint deterministic outcome
    assignment; the response probabilities move into the epistemic weights.
    Predicted statistics are unchanged exactly.  Requires shared
    (preparation-free) response tables.
    """
    if any(t.preparation is not None for t in model.responses):
        raise ValueError("vertex decomposition needs shared response tables")
    contexts = model.contexts()
    tables = {c: model.response(c) for c in contexts}
    outcome_sets = []
    for c in contexts:
        outcomes = set()
        for row in tables[c].entries.values():
            outcomes.update(row)
        outcome_sets.append(sorted(outcomes))

    new_space = []
    split: dict = {}
    for lam in model.space:
        split[lam] = []
        for combo in itertools.product(*outcome_sets):
            weight = Fraction(1)
            for c, outcome in zip(contexts, combo):
                weight *= tables[c].entries.get(lam, {}).get(
                    outcome, Fraction(0))
            if weight == 0:
                continue
            name = f"{lam}/" + ",".join(combo)
            new_space.append(name)
            split[lam].append((name, combo, weight))

    epistemics = tuple(
        EpistemicState(e.preparation, {
            name: w * weight
            for lam, w in e.weights.items()
            for name, _, weight in split[lam]})
        for e in model.epistemics)
    responses = tuple(
        ResponseTable(c, {
            name: {combo[i]: Fraction(1)}
            for lam in model.space
            for name, combo, _ in split[lam]})
        for i, c in enumerate(contexts))
    return OntologicalModel(tuple(new_space), epistemics, responses,
                            model.flags)
