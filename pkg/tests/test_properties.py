"""Randomized property suites: vertex decomposition round trips, solver
against brute-force oracle, unitarity of the built-in device operators."""
import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from nogocheck.interferometer import CircuitConfig, build_device
from nogocheck.lp import (EQ, FEASIBLE, GE, LE, ConstraintSystem, LinearRow,
                          enumerate_feasible, solve, verify_witness)
from nogocheck.nogo import vertex_decompose
from nogocheck.ontology import (AssumptionSet, EpistemicState,
                                OntologicalModel, ResponseTable,
                                predicted_statistics, validate_model)

fractions = st.fractions(min_value=0, max_value=1, max_denominator=8)


def _normalize(weights):
    total = sum(weights, Fraction(0))
    if total == 0:
        weights = [Fraction(1)] + [Fraction(0)] * (len(weights) - 1)
        total = Fraction(1)
    return [w / total for w in weights]


@st.composite
def stochastic_models(draw):
    n_lam = draw(st.integers(1, 3))
    n_prep = draw(st.integers(1, 2))
    n_ctx = draw(st.integers(1, 2))
    n_out = draw(st.integers(2, 3))
    space = tuple(f"l{i}" for i in range(n_lam))
    outcomes = [f"o{k}" for k in range(n_out)]
    epistemics = []
    for p in range(n_prep):
        raw = [draw(fractions) for _ in space]
        epistemics.append(EpistemicState(
            f"P{p}", dict(zip(space, _normalize(raw)))))
    responses = []
    for c in range(n_ctx):
        entries = {}
        for lam in space:
            raw = [draw(fractions) for _ in outcomes]
            entries[lam] = dict(zip(outcomes, _normalize(raw)))
        responses.append(ResponseTable(f"C{c}", entries))
    return OntologicalModel(space, tuple(epistemics), tuple(responses),
                            AssumptionSet(psi_anomic=True))


@settings(max_examples=200, deadline=None)
@given(stochastic_models())
def test_vertex_decomposition_round_trip(model):
    validate_model(model)
    flat = vertex_decompose(model)
    validate_model(flat)
    for prep in model.preparations():
        for context in model.contexts():
            before = predicted_statistics(model, prep, context)
            after = predicted_statistics(flat, prep, context)
            for o in set(before) | set(after):
                assert before.get(o, Fraction(0)) == after.get(o, Fraction(0))


@st.composite
def small_systems(draw):
    n_vars = draw(st.integers(1, 4))
    n_rows = draw(st.integers(1, 4))
    variables = [f"x{i}" for i in range(n_vars)]
    coeff = st.integers(-3, 3)
    rows = []
    for i in range(n_rows):
        coeffs = {v: Fraction(draw(coeff)) for v in variables}
        rel = draw(st.sampled_from((EQ, LE, GE)))
        rhs = Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 3)))
        rows.append(LinearRow(coeffs, rel, rhs, f"r{i}"))
    return ConstraintSystem(variables, rows)


@settings(max_examples=200, deadline=None)
@given(small_systems())
def test_solver_matches_oracle(cs):
    result = solve(cs)
    oracle = enumerate_feasible(cs)
    assert result.status == oracle.status
    if result.status == FEASIBLE:
        verify_witness(cs, result.witness)
        verify_witness(cs, oracle.witness)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value="1/20", max_value="1/2", max_denominator=20),
       st.integers(0, 23))
def test_device_operators_unitary(a2, k):
    cfg = CircuitConfig(a2)
    for op in build_device(cfg, k * math.pi / 12):
        assert op.is_unitary()


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=2 * math.pi,
                 allow_nan=False, allow_infinity=False))
def test_device_operators_unitary_float_phase(chi):
    cfg = CircuitConfig(Fraction(1, 3))
    for op in build_device(cfg, chi):
        assert op.is_unitary()
