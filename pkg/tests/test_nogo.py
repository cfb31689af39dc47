from fractions import Fraction

import pytest

from nogocheck import lp
from nogocheck.amplitudes import Amplitude
from nogocheck.interferometer import device_fragment
from nogocheck.nogo import (HypothesisRangeError, NonOrthogonalityError,
                            check_hroi2, check_hroi_original, compile_hroi2,
                            enumerate_oracle, nomic_counterexample,
                            pbr_check, pbr_fixture, psi_in_fragment, qubit,
                            vertex_decompose, witness_to_model)
from nogocheck.ontology import (lift_model, predicted_statistics, reproduces,
                                support_overlap, validate_model)
from nogocheck.qstate import born_probabilities, inner_product, tensor

A2 = Fraction(1, 3)


def test_hypothesis_range_guard():
    with pytest.raises(HypothesisRangeError):
        check_hroi2(Fraction(3, 5))
    with pytest.raises(HypothesisRangeError):
        check_hroi_original(Fraction(0))


def test_compiled_system_shape():
    cs = compile_hroi2(A2)
    assert len(cs.variables) == 12
    assert cs.meta["pruned_assignments"] == 141
    assert any(r.tag == "normalization" for r in cs.rows)
    relaxed = compile_hroi2(A2, psi_anomic=False)
    assert len(relaxed.variables) == 45
    free = compile_hroi2(A2, roi=False)
    assert len(free.variables) == 153


def test_full_argument_infeasible_with_certificate():
    report = check_hroi2(A2)
    assert report.status == lp.INFEASIBLE
    assert report.result.certificate is not None
    lp.verify_farkas(compile_hroi2(A2), report.result.certificate)
    assert any("Farkas" in line for line in report.trace)


def test_oracle_agrees():
    cs = compile_hroi2(A2)
    assert enumerate_oracle(cs).status == lp.INFEASIBLE


def test_relaxed_anomic_witness_reproduces_fragment():
    report = check_hroi2(A2, relax=("psi_anomic",))
    assert report.status == lp.FEASIBLE
    cs = compile_hroi2(A2, psi_anomic=False)
    model = witness_to_model(cs, report.result.witness)
    validate_model(model)
    ok, devs = reproduces(model, psi_in_fragment(A2))
    assert ok and all(d == 0 for d in devs.values())


def test_relaxed_roi_feasible():
    report = check_hroi2(A2, relax=("roi",))
    assert report.status == lp.FEASIBLE
    lp.verify_witness(compile_hroi2(A2, roi=False, psi_anomic=False),
                      report.result.witness)


def test_overlap_zero_under_indifference():
    report = check_hroi_original(A2)
    assert report.status == "overlap-zero"
    assert report.max_overlap == 0


def test_overlap_positive_without_indifference():
    """Without the phase-independence restriction the common mass can
    reach min(2 a^2, 1/2)."""
    for a2 in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
        report = check_hroi_original(a2, roi=False)
        assert report.status == "overlap-positive"
        assert report.max_overlap == min(2 * a2, Fraction(1, 2))


def test_pbr_fixture_orthonormal_and_antidistinguishing():
    psi1, psi2, m = pbr_fixture()
    assert inner_product(psi1, psi2).abs2() == Fraction(1, 2)
    vectors = [e.vectors[0] for e in m.effects]
    for i, u in enumerate(vectors):
        for j, v in enumerate(vectors):
            ip = inner_product(u, v)
            assert ip.abs2() == (Fraction(1) if i == j else Fraction(0))
    preps = [tensor(a, b) for a in (psi1, psi2) for b in (psi1, psi2)]
    for k, state in enumerate(preps):
        probs = born_probabilities(state, m)
        assert probs[f"xi{k + 1}"] == 0


def test_pbr_contradiction_trace():
    psi1, psi2, m = pbr_fixture()
    report = pbr_check(psi1, psi2, m)
    assert report.status == "contradiction"
    assert "normalization" in report.trace[-1]


def test_pbr_rejects_orthogonal_inputs():
    with pytest.raises(NonOrthogonalityError):
        pbr_check(qubit(Amplitude.one(), Amplitude.zero()),
                  qubit(Amplitude.zero(), Amplitude.one()),
                  pbr_fixture()[2])


def test_counterexample_styles():
    fragment = device_fragment(A2)
    point = nomic_counterexample(A2, style="point")
    assert reproduces(point, fragment)[0]
    assert support_overlap(point, "Psi+", "Psi0").overlap == 1
    arm = nomic_counterexample(A2, style="arm")
    assert reproduces(arm, fragment)[0]
    assert support_overlap(arm, "Psi+", "Psi0").overlap == A2
    with pytest.raises(ValueError):
        nomic_counterexample(A2, style="fancy")


def test_vertex_decompose_preserves_statistics():
    model = lift_model(nomic_counterexample(A2, style="arm"))
    flat = vertex_decompose(model)
    validate_model(flat)
    for prep in model.preparations():
        for context in model.contexts():
            a = predicted_statistics(model, prep, context)
            b = predicted_statistics(flat, prep, context)
            for o in set(a) | set(b):
                assert a.get(o, Fraction(0)) == b.get(o, Fraction(0))
    for table in flat.responses:
        for row in table.entries.values():
            assert list(row.values()) == [Fraction(1)]


def test_vertex_decompose_needs_shared_tables():
    with pytest.raises(ValueError):
        vertex_decompose(nomic_counterexample(A2, style="point"))


def test_hroi2_grid():
    for a2 in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
        assert check_hroi2(a2).status == lp.INFEASIBLE
