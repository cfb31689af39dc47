"""Shared naming scheme for preparations, experiment contexts and outcomes.

Context ids:
  "M1"            blocker stage alone (outcomes Yes/No)
  "M2[<chi>]"     interferometer stage on an already-prepared state
  "M0+M2[<chi>]"  unblocked preparation followed by the interferometer
  "M1+M2[<chi>]"  blocked preparation followed by the interferometer
                  (joint outcomes "<alpha>,<beta>")
Chi labels are canonical strings such as "0", "pi", "pi/2", "2pi/3".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

PSI_IN = "Psi_in"
PSI_PLUS = "Psi+"
PSI_ZERO = "Psi0"

M1 = "M1"
STOP = "∅"

M1_OUTCOMES = ("Yes", "No")
PORT_OUTCOMES = ("2", "3", "4")
BETA_OUTCOMES = ("2", "3", "4", STOP)


def joint(alpha: str, beta: str) -> str:
    return f"{alpha},{beta}"


def split_joint(outcome: str) -> tuple[str, str]:
    alpha, beta = outcome.split(",", 1)
    return alpha, beta


JOINT_OUTCOMES = tuple(joint(a, b) for a in M1_OUTCOMES for b in BETA_OUTCOMES)


def chi_label(chi: float) -> str:
    """Canonical label; multiples of pi/12 get a symbolic name."""
    k = chi / (math.pi / 12)
    kr = round(k)
    if abs(k - kr) < 1e-9:
        frac = Fraction(kr % 24, 12)
        if frac == 0:
            return "0"
        num = "" if frac.numerator == 1 else str(frac.numerator)
        den = "" if frac.denominator == 1 else f"/{frac.denominator}"
        return f"{num}pi{den}"
    return f"{chi:.9g}rad"


def chi_from_label(label: str) -> float:
    if label == "0":
        return 0.0
    if label.endswith("rad"):
        return float(label[:-3])
    head, _, den = label.partition("/")
    num = head[:-2]  # strip "pi"
    value = math.pi * (int(num) if num else 1)
    return value / int(den) if den else value


def m2(chi: str) -> str:
    return f"M2[{chi}]"


def m0_m2(chi: str) -> str:
    return f"M0+M2[{chi}]"


def m1_m2(chi: str) -> str:
    return f"M1+M2[{chi}]"


def context_chi(context: str) -> str | None:
    """The chi label inside a context id, or None for the bare M1."""
    if "[" not in context:
        return None
    return context[context.index("[") + 1:context.rindex("]")]


def outcome_labels(context: str) -> tuple[str, ...]:
    if context == M1:
        return M1_OUTCOMES
    if context.startswith("M1+M2["):
        return JOINT_OUTCOMES
    if context.startswith(("M0+M2[", "M2[")):
        return PORT_OUTCOMES
    raise ValueError(f"unknown context id {context!r}")


@dataclass(frozen=True)
class FragmentEntry:
    """One (preparation, context) cell of a prepare-transform-measure fragment."""
    preparation: str
    context: str
    distribution: dict  # outcome -> Fraction | float


Fragment = tuple  # tuple[FragmentEntry, ...]
