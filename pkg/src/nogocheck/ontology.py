"""Finite ontological models: epistemic states, response tables, checks.

A model is a finite ontic space, one probability distribution per
preparation, and per-context response tables.  Tables may carry a
preparation index; a model whose tables are all shared is structurally
wavefunction-independent ("anomic").  Everything is immutable and every
check is a pure function.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import contexts as ctx

Prob = object  # Fraction | float


class UnknownPreparationError(KeyError):
    pass


class UnknownContextError(KeyError):
    pass


class UndefinedConditionalError(ValueError):
    """Conditioning on an outcome of probability zero at this ontic state."""


class FragmentMismatchError(ValueError):
    """The model lacks the contexts a check needs."""


class ModelSchemaError(ValueError):
    """Malformed serialized model; message names the offending location."""


@dataclass(frozen=True)
class EpistemicState:
    preparation: str
    weights: dict  # ontic state -> Prob, nonnegative, sums to 1


@dataclass(frozen=True)
class ResponseTable:
    context: str
    entries: dict  # ontic state -> {outcome -> Prob}, rows sum to 1
    preparation: str | None = None  # present only in wavefunction-indexed models


@dataclass(frozen=True)
class AssumptionSet:
    psi_anomic: bool = True
    pip: bool = True
    pip_ps: bool = False
    roi: bool = False


@dataclass(frozen=True)
class OntologicalModel:
    space: tuple[str, ...]
    epistemics: tuple[EpistemicState, ...]
    responses: tuple[ResponseTable, ...]
    flags: AssumptionSet = AssumptionSet()

    def __post_init__(self):
        if not self.space or len(set(self.space)) != len(self.space):
            raise ValueError("ontic space must be nonempty with distinct states")
        if self.flags.psi_anomic and any(
                t.preparation is not None for t in self.responses):
            raise ValueError(
                "anomic flag set but a response table carries a preparation index")

    def epistemic(self, preparation: str) -> EpistemicState:
        for e in self.epistemics:
            if e.preparation == preparation:
                return e
        raise UnknownPreparationError(preparation)

    def preparations(self) -> tuple[str, ...]:
        return tuple(e.preparation for e in self.epistemics)

    def contexts(self) -> tuple[str, ...]:
        seen = []
        for t in self.responses:
            if t.context not in seen:
                seen.append(t.context)
        return tuple(seen)

    def response(self, context: str, preparation: str | None = None
                 ) -> ResponseTable:
        """Preparation-indexed table if one exists, else the shared table."""
        shared = None
        for t in self.responses:
            if t.context != context:
                continue
            if t.preparation is not None and t.preparation == preparation:
                return t
            if t.preparation is None:
                shared = t
        if shared is not None:
            return shared
        raise UnknownContextError(f"{context} (preparation {preparation})")

    def weight(self, preparation: str, lam: str):
        return self.epistemic(preparation).weights.get(lam, Fraction(0))


def _prob_eq(x, y, tol) -> bool:
    if isinstance(x, Fraction) and isinstance(y, Fraction) and tol == 0:
        return x == y
    return abs(float(x) - float(y)) <= float(tol)


def validate_model(model: OntologicalModel, tol=0) -> None:
    """Raise if weights or response rows are not normalized distributions."""
    for e in model.epistemics:
        if any(float(w) < 0 for w in e.weights.values()):
            raise ValueError(f"negative weight in epistemic {e.preparation}")
        total = sum(e.weights.values(), Fraction(0))
        if not _prob_eq(total, Fraction(1), tol):
            raise ValueError(f"epistemic {e.preparation} sums to {total}")
    for t in model.responses:
        for lam, row in t.entries.items():
            if any(float(p) < 0 for p in row.values()):
                raise ValueError(f"negative response in {t.context} at {lam}")
            total = sum(row.values(), Fraction(0))
            if not _prob_eq(total, Fraction(1), tol):
                raise ValueError(
                    f"response row {t.context}/{lam} sums to {total}")


def predicted_statistics(model: OntologicalModel, preparation: str,
                         context: str) -> dict:
    """sum_lambda P(outcome | context, lambda) * P_prep(lambda)."""
    epi = model.epistemic(preparation)
    table = model.response(context, preparation)
    dist: dict = {}
    for lam, w in epi.weights.items():
        if float(w) == 0:
            continue
        row = table.entries.get(lam)
        if row is None:
            raise UnknownContextError(
                f"{context}: no response row for ontic state {lam}")
        for outcome, p in row.items():
            prev = dist.get(outcome, Fraction(0))
            if isinstance(prev, Fraction) and isinstance(p, Fraction) \
                    and isinstance(w, Fraction):
                dist[outcome] = prev + p * w
            else:
                dist[outcome] = float(prev) + float(p) * float(w)
    return dist


def reproduces(model: OntologicalModel, fragment, tol=0):
    """Check the model against a fragment; returns (ok, per-entry deviations)."""
    report: dict = {}
    ok = True
    for entry in fragment:
        predicted = predicted_statistics(model, entry.preparation, entry.context)
        outcomes = set(predicted) | set(entry.distribution)
        dev = Fraction(0)
        for outcome in outcomes:
            p = predicted.get(outcome, Fraction(0))
            q = entry.distribution.get(outcome, Fraction(0))
            if isinstance(p, Fraction) and isinstance(q, Fraction) \
                    and isinstance(dev, Fraction):
                dev = max(dev, abs(p - q))
            else:
                dev = max(float(dev), abs(float(p) - float(q)))
        report[(entry.preparation, entry.context)] = dev
        if not _prob_eq(dev, Fraction(0), tol):
            ok = False
    return ok, report


@dataclass(frozen=True)
class OverlapResult:
    overlap: Prob     # total-variation common mass, sum_lambda min(P1, P2)
    disjoint: bool    # pointwise product zero everywhere (the "ontic" case)


def support_overlap(model: OntologicalModel, prep1: str, prep2: str
                    ) -> OverlapResult:
    w1 = model.epistemic(prep1).weights
    w2 = model.epistemic(prep2).weights
    overlap = Fraction(0)
    disjoint = True
    for lam in set(w1) | set(w2):
        p = w1.get(lam, Fraction(0))
        q = w2.get(lam, Fraction(0))
        if float(p) > 0 and float(q) > 0:
            disjoint = False
        m = p if float(p) <= float(q) else q
        if isinstance(overlap, Fraction) and isinstance(m, Fraction):
            overlap += m
        else:
            overlap = float(overlap) + float(m)
    return OverlapResult(overlap, disjoint)


def conditional_response(model: OntologicalModel, context2: str, context1: str,
                         beta: str, alpha: str, lam: str,
                         preparation: str | None = None):
    """P(beta | alpha, lambda) = P(beta, alpha | lambda) / P(alpha | lambda).

    ``context2`` is the joint sequential context, ``context1`` the first
    stage alone.
    """
    first = model.response(context1, preparation).entries.get(lam, {})
    p_alpha = first.get(alpha, Fraction(0))
    if float(p_alpha) == 0:
        raise UndefinedConditionalError(
            f"P({alpha}|{context1}, {lam}) = 0: conditional undefined "
            f"(ontic state outside the relevant subset)")
    jointrow = model.response(context2, preparation).entries.get(lam, {})
    p_joint = jointrow.get(ctx.joint(alpha, beta), Fraction(0))
    if isinstance(p_joint, Fraction) and isinstance(p_alpha, Fraction):
        return p_joint / p_alpha
    return float(p_joint) / float(p_alpha)


def lift_model(nomic: OntologicalModel) -> OntologicalModel:
    """Adjoin a wavefunction token to each ontic state.

    New ontic states are pairs (lambda, token) where the token ranges over
    the model's preparations.  Epistemic states become mutually disjoint;
    responses become shared (wavefunction-independent) by reading the
    token.  Statistics are preserved exactly.
    """
    preps = nomic.preparations()
    mu = lambda lam, prep: f"{lam}|{prep}"
    space = tuple(mu(lam, p) for lam in nomic.space for p in preps)
    epistemics = tuple(
        EpistemicState(e.preparation, {
            mu(lam, e.preparation): w for lam, w in e.weights.items()})
        for e in nomic.epistemics)
    responses = []
    for context in nomic.contexts():
        outcomes = _context_outcomes(nomic, context)
        entries = {}
        for lam in nomic.space:
            for prep in preps:
                row = _response_row(nomic, context, prep, lam)
                if row is None:
                    # Preparation never meets this context in the parent;
                    # the ontic state carries zero weight there, so any
                    # normalized row keeps the statistics unchanged.
                    row = {outcomes[0]: Fraction(1)}
                entries[mu(lam, prep)] = dict(row)
        responses.append(ResponseTable(context, entries))
    return OntologicalModel(space, epistemics, tuple(responses),
                            AssumptionSet(psi_anomic=True,
                                          pip=nomic.flags.pip,
                                          pip_ps=nomic.flags.pip_ps,
                                          roi=nomic.flags.roi))


def _response_row(model, context, preparation, lam):
    try:
        table = model.response(context, preparation)
    except UnknownContextError:
        return None
    if table.preparation is not None and table.preparation != preparation:
        return None
    return table.entries.get(lam)


def _context_outcomes(model, context):
    for t in model.responses:
        if t.context == context:
            for row in t.entries.values():
                return tuple(row)
    raise UnknownContextError(context)


@dataclass(frozen=True)
class ComplianceItem:
    assumption: str
    status: str              # "pass" | "fail" | "skipped"
    details: tuple = ()


@dataclass(frozen=True)
class ComplianceReport:
    items: tuple

    def item(self, assumption: str) -> ComplianceItem:
        for it in self.items:
            if it.assumption == assumption:
                return it
        raise KeyError(assumption)

    def passed(self, assumption: str) -> bool:
        return self.item(assumption).status == "pass"


def check_assumptions(model: OntologicalModel, which: AssumptionSet,
                      chi_labels: tuple[str, ...] = ("0", "pi"),
                      roi_preparation: str = ctx.PSI_IN) -> ComplianceReport:
    items = []
    if which.psi_anomic:
        indexed = [t for t in model.responses if t.preparation is not None]
        if indexed:
            items.append(ComplianceItem("psi_anomic", "fail", tuple(
                f"response table for {t.context} carries preparation index "
                f"{t.preparation}" for t in indexed)))
        else:
            items.append(ComplianceItem("psi_anomic", "pass"))
    if which.pip:
        # Epistemic states cannot carry a measurement index in this
        # representation, so the postulate holds structurally.
        items.append(ComplianceItem(
            "pip", "pass",
            ("epistemic states carry no measurement index (structural)",)))
    if which.pip_ps:
        items.append(_check_pip_ps(model))
    if which.roi:
        items.append(_check_roi(model, chi_labels, roi_preparation))
    return ComplianceReport(tuple(items))


def _check_pip_ps(model: OntologicalModel) -> ComplianceItem:
    """Factorization of product preparations "A⊗B" over paired ontic states.

    Product ontic states are labeled "x⊗y"; skipped when the model declares
    no product preparations.
    """
    details = []
    checked = False
    for e in model.epistemics:
        if "⊗" not in e.preparation:
            continue
        checked = True
        name_a, name_b = e.preparation.split("⊗", 1)
        try:
            wa = model.epistemic(name_a).weights
            wb = model.epistemic(name_b).weights
        except UnknownPreparationError as exc:
            details.append(f"{e.preparation}: missing marginal {exc}")
            continue
        for lam_a in wa:
            for lam_b in wb:
                joint = e.weights.get(f"{lam_a}⊗{lam_b}", Fraction(0))
                want = wa[lam_a] * wb[lam_b]
                if not _prob_eq(joint, want, 0):
                    details.append(
                        f"{e.preparation}: weight at {lam_a}⊗{lam_b} is "
                        f"{joint}, product of marginals is {want}")
    if not checked:
        return ComplianceItem("pip_ps", "skipped",
                              ("no product preparations declared",))
    status = "fail" if details else "pass"
    return ComplianceItem("pip_ps", status, tuple(details))


def _check_roi(model: OntologicalModel, chi_labels, preparation
               ) -> ComplianceItem:
    """Restricted ontic indifference on the blocked-path ontic subset.

    For every ontic state that can pass the blocker: the blocked-run
    responses must carry no phase index, and the blocked-run joint
    responses at ports 3 and 4 must equal the unblocked-run responses at
    the same ports, for every configured phase.
    """
    required = [ctx.M1]
    required += [ctx.m1_m2(cl) for cl in chi_labels]
    required += [ctx.m0_m2(cl) for cl in chi_labels]
    for context in required:
        try:
            model.response(context, preparation)
        except UnknownContextError:
            raise FragmentMismatchError(
                f"ROI check needs context {context!r}, absent from model")
    m1_entries = model.response(ctx.M1, preparation).entries
    details = []
    for lam in model.space:
        p_yes = m1_entries.get(lam, {}).get("Yes", Fraction(0))
        if float(p_yes) == 0:
            continue
        blocked_rows = {
            cl: model.response(ctx.m1_m2(cl), preparation).entries.get(lam, {})
            for cl in chi_labels}
        first = blocked_rows[chi_labels[0]]
        for cl in chi_labels[1:]:
            if blocked_rows[cl] != first:
                details.append(
                    f"{lam}: blocked responses differ between chi={chi_labels[0]} "
                    f"and chi={cl}")
        for cl in chi_labels:
            unblocked = model.response(
                ctx.m0_m2(cl), preparation).entries.get(lam, {})
            for port in ("3", "4"):
                b = first.get(ctx.joint("Yes", port), Fraction(0))
                u = unblocked.get(port, Fraction(0))
                if not _prob_eq(b, u, 0):
                    details.append(
                        f"{lam}: blocked joint (Yes,{port}) = {b} but "
                        f"unblocked port {port} at chi={cl} = {u}")
    status = "fail" if details else "pass"
    return ComplianceItem("roi", status, tuple(details))


# ---------------------------------------------------------------------------
# serialization

def _prob_to_json(p) -> str | float:
    if isinstance(p, Fraction):
        return f"{p.numerator}/{p.denominator}"
    return float(p)


def _prob_from_json(value, where: str):
    if isinstance(value, str):
        try:
            if "/" in value:
                num, den = value.split("/")
                return Fraction(int(num), int(den))
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelSchemaError(f"{where}: bad rational {value!r}") from exc
    if isinstance(value, (int, float)):
        return float(value)
    raise ModelSchemaError(f"{where}: expected probability, got {value!r}")


def model_to_json(model: OntologicalModel) -> dict:
    return {
        "ontic_states": list(model.space),
        "epistemics": {
            e.preparation: {lam: _prob_to_json(w)
                            for lam, w in sorted(e.weights.items())}
            for e in model.epistemics},
        "responses": [
            {"context": t.context,
             "preparation": t.preparation,
             "table": {lam: {o: _prob_to_json(p) for o, p in sorted(row.items())}
                       for lam, row in sorted(t.entries.items())}}
            for t in model.responses],
        "flags": {"psi_anomic": model.flags.psi_anomic,
                  "pip": model.flags.pip,
                  "pip_ps": model.flags.pip_ps,
                  "roi": model.flags.roi},
    }


def model_from_json(data: dict) -> OntologicalModel:
    if not isinstance(data, dict):
        raise ModelSchemaError("top level: expected an object")
    for key in ("ontic_states", "epistemics", "responses", "flags"):
        if key not in data:
            raise ModelSchemaError(f"top level: missing field {key!r}")
    space = tuple(data["ontic_states"])
    if not all(isinstance(s, str) for s in space):
        raise ModelSchemaError("ontic_states: all entries must be strings")
    epistemics = []
    for prep, weights in data["epistemics"].items():
        if not isinstance(weights, dict):
            raise ModelSchemaError(f"epistemics/{prep}: expected an object")
        parsed = {}
        for lam, w in weights.items():
            if lam not in space:
                raise ModelSchemaError(
                    f"epistemics/{prep}/{lam}: unknown ontic state")
            parsed[lam] = _prob_from_json(w, f"epistemics/{prep}/{lam}")
        epistemics.append(EpistemicState(prep, parsed))
    responses = []
    for i, tbl in enumerate(data["responses"]):
        where = f"responses[{i}]"
        if not isinstance(tbl, dict) or "context" not in tbl or "table" not in tbl:
            raise ModelSchemaError(f"{where}: expected context and table fields")
        entries = {}
        for lam, row in tbl["table"].items():
            if lam not in space:
                raise ModelSchemaError(f"{where}/table/{lam}: unknown ontic state")
            entries[lam] = {o: _prob_from_json(p, f"{where}/table/{lam}/{o}")
                            for o, p in row.items()}
        responses.append(ResponseTable(tbl["context"], entries,
                                       tbl.get("preparation")))
    flags = data["flags"]
    model = OntologicalModel(
        space, tuple(epistemics), tuple(responses),
        AssumptionSet(bool(flags.get("psi_anomic", True)),
                      bool(flags.get("pip", True)),
                      bool(flags.get("pip_ps", False)),
                      bool(flags.get("roi", False))))
    validate_model(model, tol=1e-9 if _has_floats(model) else 0)
    return model


def _has_floats(model: OntologicalModel) -> bool:
    for e in model.epistemics:
        if any(isinstance(w, float) for w in e.weights.values()):
            return True
    for t in model.responses:
        for row in t.entries.values():
            if any(isinstance(p, float) for p in row.values()):
                return True
    return False


def dump_model(model: OntologicalModel) -> str:
    return json.dumps(model_to_json(model), sort_keys=True, indent=2,
                      ensure_ascii=False)


def load_model(text: str) -> OntologicalModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSchemaError(f"invalid JSON: {exc}") from exc
    return model_from_json(data)
