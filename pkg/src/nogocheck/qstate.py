"""State vectors, unitaries and projective measurements over labeled modes.

All values are immutable; every operation is a pure function.  Amplitude
backing (exact or float) is decided per value, see :mod:`.amplitudes`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .amplitudes import Amplitude, prob_sum

FLOAT_TOL = 1e-12


class SpaceMismatchError(ValueError):
    """Two labeled spaces that were expected to coincide do not."""


class MeasurementError(ValueError):
    """A projective measurement fails orthonormality or completeness."""


@dataclass(frozen=True)
class StateVector:
    space: tuple[str, ...]
    amps: tuple[Amplitude, ...]

    def __post_init__(self):
        if len(self.space) != len(self.amps):
            raise ValueError("one amplitude per mode label required")
        if len(set(self.space)) != len(self.space):
            raise ValueError(f"duplicate mode labels in {self.space}")

    @classmethod
    def basis(cls, space: tuple[str, ...], label: str) -> "StateVector":
        amps = tuple(Amplitude.one() if m == label else Amplitude.zero()
                     for m in space)
        return cls(space, amps)

    @property
    def exact(self) -> bool:
        return all(a.exact for a in self.amps)

    def amp(self, label: str) -> Amplitude:
        return self.amps[self.space.index(label)]

    def norm2(self):
        return prob_sum(a.abs2() for a in self.amps)

    def scale(self, factor: Amplitude) -> "StateVector":
        return StateVector(self.space, tuple(factor * a for a in self.amps))

    def to_float(self) -> "StateVector":
        return StateVector(
            self.space,
            tuple(Amplitude.from_complex(a.to_complex()) for a in self.amps))


def _require_same_space(u: StateVector, v: StateVector) -> None:
    if u.space != v.space:
        raise SpaceMismatchError(f"spaces differ: {u.space} vs {v.space}")


def inner_product(u: StateVector, v: StateVector) -> Amplitude:
    """<u|v>, conjugate-linear in the first argument."""
    _require_same_space(u, v)
    acc = Amplitude.zero()
    for a, b in zip(u.amps, v.amps):
        acc = acc + a.conjugate() * b
    return acc


def tensor(u: StateVector, v: StateVector) -> StateVector:
    space = tuple(f"({x},{y})" for x in u.space for y in v.space)
    amps = tuple(a * b for a in u.amps for b in v.amps)
    return StateVector(space, amps)


@dataclass(frozen=True)
class UnitaryOp:
    space: tuple[str, ...]
    matrix: tuple[tuple[Amplitude, ...], ...]  # matrix[i][j] = <i|U|j>

    def __post_init__(self):
        n = len(self.space)
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ValueError("matrix shape must match the mode space")

    @classmethod
    def identity(cls, space: tuple[str, ...]) -> "UnitaryOp":
        n = len(space)
        return cls(space, tuple(
            tuple(Amplitude.one() if i == j else Amplitude.zero()
                  for j in range(n))
            for i in range(n)))

    def adjoint(self) -> "UnitaryOp":
        n = len(self.space)
        return UnitaryOp(self.space, tuple(
            tuple(self.matrix[j][i].conjugate() for j in range(n))
            for i in range(n)))

    def compose(self, other: "UnitaryOp") -> "UnitaryOp":
        """self @ other: apply ``other`` first."""
        if self.space != other.space:
            raise SpaceMismatchError("cannot compose over different spaces")
        n = len(self.space)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = Amplitude.zero()
                for k in range(n):
                    acc = acc + self.matrix[i][k] * other.matrix[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return UnitaryOp(self.space, tuple(rows))

    def is_unitary(self, tol: float = FLOAT_TOL) -> bool:
        prod = self.adjoint().compose(self)
        n = len(self.space)
        for i in range(n):
            for j in range(n):
                want = Amplitude.one() if i == j else Amplitude.zero()
                entry = prod.matrix[i][j]
                if entry.exact and want.exact:
                    if entry != want:
                        return False
                elif not entry.isclose(want, tol):
                    return False
        return True

    def to_float(self) -> "UnitaryOp":
        return UnitaryOp(self.space, tuple(
            tuple(Amplitude.from_complex(a.to_complex()) for a in row)
            for row in self.matrix))


def apply(u: UnitaryOp, v: StateVector) -> StateVector:
    if u.space != v.space:
        raise SpaceMismatchError(f"spaces differ: {u.space} vs {v.space}")
    n = len(v.space)
    amps = []
    for i in range(n):
        acc = Amplitude.zero()
        for j in range(n):
            acc = acc + u.matrix[i][j] * v.amps[j]
        amps.append(acc)
    return StateVector(v.space, tuple(amps))


@dataclass(frozen=True)
class Effect:
    outcome: str
    vectors: tuple[StateVector, ...]


@dataclass(frozen=True)
class ProjectiveMeasurement:
    context_name: str
    effects: tuple[Effect, ...]

    def __post_init__(self):
        vecs = [(e.outcome, v) for e in self.effects for v in e.vectors]
        if not vecs:
            raise MeasurementError("measurement has no effects")
        space = vecs[0][1].space
        n = len(space)
        if len(vecs) != n:
            raise MeasurementError(
                f"{self.context_name}: {len(vecs)} effect vectors cannot "
                f"resolve the identity on {n} modes")
        for _, v in vecs:
            if v.space != space:
                raise SpaceMismatchError("effect vectors on different spaces")
        # Orthonormality of the full effect basis implies completeness.
        for i, (_, vi) in enumerate(vecs):
            for j, (_, vj) in enumerate(vecs):
                ip = inner_product(vi, vj)
                want = Amplitude.one() if i == j else Amplitude.zero()
                if ip.exact and not ip == want:
                    raise MeasurementError(
                        f"{self.context_name}: effect basis not orthonormal")
                if not ip.exact and not ip.isclose(want, FLOAT_TOL):
                    raise MeasurementError(
                        f"{self.context_name}: effect basis not orthonormal")

    @classmethod
    def from_mode_partition(cls, name: str, space: tuple[str, ...],
                            partition: dict[str, tuple[str, ...]]
                            ) -> "ProjectiveMeasurement":
        covered = [m for modes in partition.values() for m in modes]
        if sorted(covered) != sorted(space):
            raise MeasurementError(
                f"{name}: partition {partition} does not cover {space}")
        effects = tuple(
            Effect(outcome, tuple(StateVector.basis(space, m) for m in modes))
            for outcome, modes in partition.items())
        return cls(name, effects)

    @property
    def space(self) -> tuple[str, ...]:
        return self.effects[0].vectors[0].space

    @property
    def outcomes(self) -> tuple[str, ...]:
        return tuple(e.outcome for e in self.effects)


def born_probabilities(v: StateVector, m: ProjectiveMeasurement) -> dict:
    """Outcome -> probability; sums to the squared norm of ``v``."""
    if v.space != m.space:
        raise SpaceMismatchError(f"spaces differ: {v.space} vs {m.space}")
    return {
        e.outcome: prob_sum(inner_product(vec, v).abs2() for vec in e.vectors)
        for e in m.effects
    }


def transform_measurement(u: UnitaryOp,
                          m: ProjectiveMeasurement) -> ProjectiveMeasurement:
    """Heisenberg-picture measurement: effects mapped through U-dagger."""
    ua = u.adjoint()
    return ProjectiveMeasurement(m.context_name, tuple(
        Effect(e.outcome, tuple(apply(ua, vec) for vec in e.vectors))
        for e in m.effects))


def equal_up_to_global_phase(u: StateVector, v: StateVector,
                             tol: float = FLOAT_TOL) -> bool:
    """u == c*v for some |c| = 1, tested without division."""
    _require_same_space(u, v)
    n2u, n2v = u.norm2(), v.norm2()
    if isinstance(n2u, Fraction) and isinstance(n2v, Fraction):
        if n2u != n2v:
            return False
    elif abs(float(n2u) - float(n2v)) > tol:
        return False
    # proportionality: u_j * v_i == u_i * v_j for a pivot index i
    pivot = max(range(len(v.amps)), key=lambda i: abs(v.amps[i].to_complex()))
    for j in range(len(v.amps)):
        lhs = u.amps[j] * v.amps[pivot]
        rhs = u.amps[pivot] * v.amps[j]
        if lhs.exact and rhs.exact:
            if lhs != rhs:
                return False
        elif not lhs.isclose(rhs, tol):
            return False
    return True
