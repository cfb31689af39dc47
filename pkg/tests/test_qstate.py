import math
from fractions import Fraction

import pytest

from nogocheck.amplitudes import Amplitude
from nogocheck.qstate import (Effect, MeasurementError, ProjectiveMeasurement,
                              SpaceMismatchError, StateVector, UnitaryOp,
                              apply, born_probabilities,
                              equal_up_to_global_phase, inner_product, tensor,
                              transform_measurement)

SPACE = ("0", "1")


def ket(label):
    return StateVector.basis(SPACE, label)


def plus():
    h = Amplitude.from_sqrt(Fraction(1, 2))
    return StateVector(SPACE, (h, h))


def hadamard():
    h = Amplitude.from_sqrt(Fraction(1, 2))
    return UnitaryOp(SPACE, ((h, h), (h, -h)))


def test_basis_and_norm():
    v = ket("0")
    assert v.amp("0") == Amplitude.one()
    assert v.amp("1").is_zero()
    assert v.norm2() == Fraction(1)
    assert plus().norm2() == Fraction(1)


def test_inner_product_conjugate_linear():
    v = ket("0")
    w = plus()
    ip = inner_product(v, w)
    assert ip.abs2() == Fraction(1, 2)
    e = Amplitude.exp_i(math.pi / 2)
    assert inner_product(v.scale(e), w) == ip * e.conjugate()


def test_space_mismatch_rejected():
    other = StateVector.basis(("a", "b"), "a")
    with pytest.raises(SpaceMismatchError):
        inner_product(ket("0"), other)


def test_tensor_labels_and_amplitudes():
    t = tensor(ket("0"), plus())
    assert t.space == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")
    assert t.amp("(0,0)").abs2() == Fraction(1, 2)
    assert t.amp("(1,0)").is_zero()
    assert t.norm2() == Fraction(1)


def test_unitary_algebra():
    h = hadamard()
    assert h.is_unitary()
    hh = h.compose(h)
    for label in SPACE:
        assert equal_up_to_global_phase(apply(hh, ket(label)), ket(label))
    v = apply(h, ket("0"))
    assert v.amp("0").abs2() == Fraction(1, 2)
    back = apply(h.adjoint(), v)
    assert equal_up_to_global_phase(back, ket("0"))


def test_nonunitary_detected():
    bad = UnitaryOp(SPACE, ((Amplitude.one(), Amplitude.one()),
                            (Amplitude.zero(), Amplitude.one())))
    assert not bad.is_unitary()


def test_measurement_partition_and_born():
    m = ProjectiveMeasurement.from_mode_partition(
        "computational", SPACE, {"zero": ("0",), "one": ("1",)})
    probs = born_probabilities(plus(), m)
    assert probs == {"zero": Fraction(1, 2), "one": Fraction(1, 2)}


def test_measurement_requires_full_basis():
    with pytest.raises(MeasurementError):
        ProjectiveMeasurement("partial", (Effect("zero", (ket("0"),)),))
    v = plus()
    with pytest.raises(MeasurementError):
        ProjectiveMeasurement("overlapping",
                              (Effect("a", (v,)), Effect("b", (v,))))


def test_transform_measurement_heisenberg():
    """Measuring after U equals measuring the transformed effects."""
    m = ProjectiveMeasurement.from_mode_partition(
        "computational", SPACE, {"zero": ("0",), "one": ("1",)})
    h = hadamard()
    direct = born_probabilities(apply(h, ket("0")), m)
    pulled = born_probabilities(ket("0"), transform_measurement(h, m))
    assert direct == pulled


def test_global_phase_equality():
    v = plus()
    w = v.scale(Amplitude.exp_i(5 * math.pi / 12))
    assert equal_up_to_global_phase(v, w)
    assert not equal_up_to_global_phase(v, ket("0"))
