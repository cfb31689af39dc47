import math
from fractions import Fraction

import pytest

from nogocheck import contexts as ctx
from nogocheck.interferometer import (CircuitConfig, InvalidTransmissionError,
                                      build_device, device_fragment, prepare,
                                      psi_plus, run_m0_m2, run_m1, run_m1_m2,
                                      run_psi0_full)

A2 = Fraction(1, 3)
CFG = CircuitConfig(A2)


def test_config_validation():
    with pytest.raises(ValueError):
        CircuitConfig(Fraction(0))
    with pytest.raises(ValueError):
        CircuitConfig(Fraction(3, 2))
    with pytest.raises(InvalidTransmissionError):
        build_device(CircuitConfig(Fraction(3, 5)))


def test_device_ops_unitary():
    for op in build_device(CFG, math.pi / 3):
        assert op.is_unitary()


def test_preparation_states():
    state = psi_plus(CFG)
    assert state.amp("0").abs2() == A2
    assert state.amp("1").abs2() == 1 - A2
    blocked = prepare(CircuitConfig(A2, blocker=True))
    assert blocked.branch.norm2() == A2
    assert blocked.rest_weight == 1 - A2


def test_unblocked_distribution_closed_form():
    """P(3) = a^2 (1 + cos chi), P(4) = a^2 (1 - cos chi), P(2) = b^2 - a^2."""
    for a2 in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 3)):
        cfg = CircuitConfig(a2)
        for k in range(0, 13):
            chi = k * math.pi / 12
            cos = Fraction(math.cos(chi)).limit_denominator(10**9)
            probs = run_m0_m2(cfg, chi)
            assert float(probs["3"]) == pytest.approx(
                float(a2 * (1 + cos)), abs=1e-9)
            assert float(probs["4"]) == pytest.approx(
                float(a2 * (1 - cos)), abs=1e-9)
            assert probs["2"] == 1 - 2 * a2


def test_unblocked_exact_fixture_values():
    assert run_m0_m2(CFG, 0.0) == {
        "2": Fraction(1, 3), "3": Fraction(2, 3), "4": Fraction(0)}
    assert run_m0_m2(CFG, math.pi) == {
        "2": Fraction(1, 3), "3": Fraction(0), "4": Fraction(2, 3)}
    assert run_m0_m2(CFG, math.pi / 2) == {
        "2": Fraction(1, 3), "3": Fraction(1, 3), "4": Fraction(1, 3)}
    assert run_m0_m2(CFG, math.pi / 3) == {
        "2": Fraction(1, 3), "3": Fraction(1, 2), "4": Fraction(1, 6)}


def test_blocked_joint_table_phase_independent():
    want = {
        ctx.joint("Yes", "3"): Fraction(1, 6),
        ctx.joint("Yes", "4"): Fraction(1, 6),
        ctx.joint("Yes", "2"): Fraction(0),
        ctx.joint("Yes", ctx.STOP): Fraction(0),
        ctx.joint("No", ctx.STOP): Fraction(2, 3),
        ctx.joint("No", "2"): Fraction(0),
        ctx.joint("No", "3"): Fraction(0),
        ctx.joint("No", "4"): Fraction(0),
    }
    for chi in (0.0, math.pi, math.pi / 2):
        assert run_m1_m2(CFG, chi) == want


def test_first_stage_statistics():
    assert run_m1(CFG) == {"Yes": Fraction(1, 3), "No": Fraction(2, 3)}


def test_single_arm_state_is_phase_blind():
    for chi in (0.0, math.pi / 3, math.pi / 2, math.pi):
        assert run_psi0_full(CFG, chi) == {
            "2": Fraction(0), "3": Fraction(1, 2), "4": Fraction(1, 2)}


def test_float_backing_agrees_with_exact():
    for chi in (0.0, math.pi / 3, 1.234):
        exact = run_m0_m2(CFG, chi)
        approx = run_m0_m2(CFG, chi, exact=False)
        for port in ("2", "3", "4"):
            assert float(approx[port]) == pytest.approx(
                float(exact[port]), abs=1e-12)


def test_boundary_balanced_splitting():
    cfg = CircuitConfig(Fraction(1, 2))
    assert run_m0_m2(cfg, 0.0) == {
        "2": Fraction(0), "3": Fraction(1), "4": Fraction(0)}


def test_fragment_layout():
    fragment = device_fragment(A2)
    assert len(fragment) == 9
    preps = {e.preparation for e in fragment}
    assert preps == {ctx.PSI_IN, ctx.PSI_PLUS, ctx.PSI_ZERO}
    for e in fragment:
        total = sum(e.distribution.values(), Fraction(0))
        assert total == Fraction(1)
