"""The half Mach-Zehnder device: preparation, transformations, statistics.

Modes "0".."4": "0" and "1" are the two arms after the preparing splitter,
"2" is the loss port of the in-arm splitter, "3"/"4" are the exit ports of
the final 50/50 splitter.  Port convention: at chi = 0 the prepared
superposition exits through port 3; the swapped labeling is rejected as
inconsistent with the composed device amplitudes and flagged in reports.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import contexts as ctx
from .amplitudes import Amplitude
from .qstate import (ProjectiveMeasurement, StateVector, UnitaryOp, apply,
                     born_probabilities)

MODES = ("0", "1", "2", "3", "4")

PORT_CONVENTION_NOTE = (
    "port convention: chi=0 sends the prepared superposition to port 3; "
    "the swapped port labeling found in some derivations is inconsistent "
    "with the composed device amplitudes and is not used")


class InvalidTransmissionError(ValueError):
    """The in-arm splitter would need transmission amplitude > 1 (b < a)."""


@dataclass(frozen=True)
class CircuitConfig:
    """Device parameters.  ``a2`` is the squared amplitude of arm 0.

    The device itself requires b >= a (i.e. a2 <= 1/2, transmission
    T = a/b <= 1); preparation alone is defined for any a2 in (0, 1].
    """
    a2: Fraction
    chi: float = 0.0
    blocker: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a2", Fraction(self.a2))
        if not 0 < self.a2 <= 1:
            raise ValueError(f"a2 must be in (0, 1], got {self.a2}")

    @property
    def b2(self) -> Fraction:
        return 1 - self.a2

    def amp_a(self) -> Amplitude:
        return Amplitude.from_sqrt(self.a2)

    def amp_b(self) -> Amplitude:
        return Amplitude.from_sqrt(self.b2)


def _unitary_from_columns(columns: dict[str, dict[str, Amplitude]]) -> UnitaryOp:
    rows = []
    for i in MODES:
        row = []
        for j in MODES:
            col = columns.get(j)
            if col is None:
                row.append(Amplitude.one() if i == j else Amplitude.zero())
            else:
                row.append(col.get(i, Amplitude.zero()))
        rows.append(tuple(row))
    return UnitaryOp(MODES, tuple(rows))


def phase_plate(chi: float) -> UnitaryOp:
    """|1> -> e^{i chi} |1>."""
    return _unitary_from_columns({"1": {"1": Amplitude.exp_i(chi)}})


def bs1(cfg: CircuitConfig) -> UnitaryOp:
    """In-arm splitter on modes 1/2 with transmission T = a/b."""
    if cfg.a2 > Fraction(1, 2):
        raise InvalidTransmissionError(
            f"a2={cfg.a2} gives transmission T=a/b > 1")
    t2 = cfg.a2 / cfg.b2
    t = Amplitude.from_sqrt(t2)
    r = Amplitude.from_sqrt(1 - t2)
    # |1> -> T|1> - R|2>, |2> -> R|1> + T|2>  (minus sign from unitarity)
    return _unitary_from_columns({
        "1": {"1": t, "2": -r},
        "2": {"1": r, "2": t},
    })


def bs2() -> UnitaryOp:
    """Final 50/50 splitter: |0> -> (|3>+|4>)/sqrt(2), |1> -> (|3>-|4>)/sqrt(2)."""
    h = Amplitude.from_sqrt(Fraction(1, 2))
    return _unitary_from_columns({
        "0": {"3": h, "4": h},
        "1": {"3": h, "4": -h},
        "3": {"0": h, "1": h},
        "4": {"0": h, "1": -h},
    })


def build_device(cfg: CircuitConfig, chi: float | None = None) -> list[UnitaryOp]:
    """Ordered ops for the transform stage: phase plate, BS1, BS2."""
    chi = cfg.chi if chi is None else chi
    return [phase_plate(chi), bs1(cfg), bs2()]


def run_device(state: StateVector, cfg: CircuitConfig,
               chi: float | None = None) -> StateVector:
    for op in build_device(cfg, chi):
        state = apply(op, state)
    return state


@dataclass(frozen=True)
class Preparation:
    """Output of the preparation stage; ``branch`` is sub-normalized."""
    state: StateVector | None = None        # blocker absent: a|0> + b|1>
    branch: StateVector | None = None       # blocker present: a|0>
    rest_weight: Fraction = Fraction(0)     # squared norm of the removed rest


def psi_plus(cfg: CircuitConfig) -> StateVector:
    amps = {m: Amplitude.zero() for m in MODES}
    amps["0"] = cfg.amp_a()
    amps["1"] = cfg.amp_b()
    return StateVector(MODES, tuple(amps[m] for m in MODES))


def psi_zero() -> StateVector:
    return StateVector.basis(MODES, "0")


def prepare(cfg: CircuitConfig) -> Preparation:
    if not cfg.blocker:
        return Preparation(state=psi_plus(cfg))
    branch = psi_zero().scale(cfg.amp_a())
    return Preparation(branch=branch, rest_weight=cfg.b2)


_PORTS = ProjectiveMeasurement.from_mode_partition(
    "ports", MODES, {"2": ("2",), "3": ("3",), "4": ("4",), "01": ("0", "1")})


def _port_distribution(state: StateVector) -> dict:
    probs = born_probabilities(state, _PORTS)
    leftover = probs.pop("01")
    if isinstance(leftover, Fraction):
        assert leftover == 0
    else:
        assert abs(leftover) < 1e-12
    return probs


def run_m0_m2(cfg: CircuitConfig, chi: float | None = None,
              exact: bool = True) -> dict:
    """Unblocked run: distribution over exit ports 2/3/4."""
    state = psi_plus(cfg)
    if not exact:
        state = state.to_float()
        out = state
        for op in build_device(cfg, chi):
            out = apply(op.to_float(), out)
        return _port_distribution(out)
    return _port_distribution(run_device(state, cfg, chi))


def run_m1_m2(cfg: CircuitConfig, chi: float | None = None) -> dict:
    """Blocked run: joint distribution over (Yes/No, port or stop)."""
    prep = prepare(CircuitConfig(cfg.a2, cfg.chi, blocker=True))
    out = run_device(prep.branch, cfg, chi)
    ports = _port_distribution(out)  # sub-normalized, sums to a2
    dist = {ctx.joint("Yes", beta): ports[beta] for beta in ctx.PORT_OUTCOMES}
    dist[ctx.joint("Yes", ctx.STOP)] = Fraction(0)
    for beta in ctx.PORT_OUTCOMES:
        dist[ctx.joint("No", beta)] = Fraction(0)
    dist[ctx.joint("No", ctx.STOP)] = prep.rest_weight
    return dist


def run_m1(cfg: CircuitConfig) -> dict:
    return {"Yes": cfg.a2, "No": cfg.b2}


def run_psi0_full(cfg: CircuitConfig, chi: float | None = None,
                  exact: bool = True) -> dict:
    """|0> through the full device; (1/2, 1/2) on ports 3/4 for every chi."""
    state = psi_zero()
    if not exact:
        out = state.to_float()
        for op in build_device(cfg, chi):
            out = apply(op.to_float(), out)
        return _port_distribution(out)
    return _port_distribution(run_device(state, cfg, chi))


def device_fragment(a2, chi_labels: tuple[str, ...] = ("0", "pi")) -> tuple:
    """The prepare-transform-measure fragment driving the no-go checks."""
    cfg = CircuitConfig(Fraction(a2))
    entries = [ctx.FragmentEntry(ctx.PSI_IN, ctx.M1, run_m1(cfg))]
    for cl in chi_labels:
        chi = ctx.chi_from_label(cl)
        entries.append(ctx.FragmentEntry(
            ctx.PSI_IN, ctx.m1_m2(cl), run_m1_m2(cfg, chi)))
        entries.append(ctx.FragmentEntry(
            ctx.PSI_IN, ctx.m0_m2(cl), run_m0_m2(cfg, chi)))
        entries.append(ctx.FragmentEntry(
            ctx.PSI_PLUS, ctx.m2(cl), run_m0_m2(cfg, chi)))
        entries.append(ctx.FragmentEntry(
            ctx.PSI_ZERO, ctx.m2(cl), run_psi0_full(cfg, chi)))
    return tuple(entries)
