"""Batch command line front end.

Subcommands: ``simulate`` (phase sweeps of the device), ``check``
(theorem runs with certificates), ``model`` (counterexample emission,
lifting, auditing).  All JSON output is deterministic: keys sorted,
exact rationals rendered as "p/q" strings.  Floats appear only in sweep
CSVs.

Exit codes: 0 for the expected result, 1 for usage or configuration
errors, 2 for an internal solver/oracle disagreement.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import contexts as ctx
from . import interferometer as ifm
from . import lp, nogo
from .nogo import (HypothesisRangeError, InternalInconsistencyError,
                   TheoremReport)
from .ontology import (AssumptionSet, ModelSchemaError, check_assumptions,
                       dump_model, load_model, reproduces, support_overlap,
                       validate_model)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2


class UsageError(ValueError):
    pass


def _parse_a2(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--a2: not a rational: {text!r}") from exc


def _parse_chi_list(text: str) -> list:
    """Comma separated phases, as labels ("pi/2") or plain radians."""
    items = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            chi = ctx.chi_from_label(token)
        except ValueError:
            try:
                chi = float(token)
            except ValueError as exc:
                raise UsageError(f"--chi: bad phase {token!r}") from exc
        items.append((ctx.chi_label(chi), chi))
    if not items:
        raise UsageError("--chi: empty phase list")
    return items


def _jsonify(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return repr(obj)


def _dump_json(data) -> str:
    return json.dumps(_jsonify(data), sort_keys=True, indent=2,
                      ensure_ascii=False)


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        print(text)
    else:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / filename).write_text(text + "\n", encoding="utf-8")


def _report_payload(report: TheoremReport) -> dict:
    payload = {
        "theorem": report.theorem,
        "parameters": report.parameters,
        "status": report.status,
        "trace": list(report.trace),
        "notes": report.notes,
    }
    if report.max_overlap is not None:
        payload["max_overlap"] = report.max_overlap
    r = report.result
    if r is not None:
        payload["solver"] = {"status": r.status, "method": r.method}
        if r.witness is not None:
            payload["solver"]["witness"] = {
                v: w for v, w in sorted(r.witness.items()) if w != 0}
        if r.certificate is not None:
            payload["solver"]["certificate"] = list(r.certificate)
        if r.objective_value is not None:
            payload["solver"]["objective_value"] = r.objective_value
        if r.dual is not None:
            payload["solver"]["dual"] = list(r.dual)
    return payload


# ---------------------------------------------------------------------------
# simulate

def cmd_simulate(args) -> int:
    a2 = _parse_a2(args.a2)
    chis = _parse_chi_list(args.chi)
    try:
        cfg = ifm.CircuitConfig(a2)
        sweep = []
        for label, chi in chis:
            ports = ifm.run_m0_m2(cfg, chi)
            joint = ifm.run_m1_m2(cfg, chi)
            sweep.append({"chi": label, "chi_radians": chi,
                          "ports": ports, "blocked_joint": joint})
    except (ValueError, ifm.InvalidTransmissionError) as exc:
        raise UsageError(str(exc)) from exc

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["chi", "P3", "P4", "P2"])
    for entry in sweep:
        writer.writerow([entry["chi_radians"]] + [
            float(entry["ports"][p]) for p in ("3", "4", "2")])
    csv_text = buf.getvalue().rstrip("\n")

    payload = {"a2": a2, "first_stage": ifm.run_m1(cfg), "sweep": sweep}
    json_text = _dump_json(payload)

    if args.out is not None:
        _emit(json_text, args.out, "simulate.json")
        _emit(csv_text, args.out, "simulate.csv")
    elif args.format == "csv":
        print(csv_text)
    else:
        print(json_text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check

def cmd_check(args) -> int:
    a2 = _parse_a2(args.a2)
    relax = tuple(args.relax or ())
    for name in relax:
        if name not in ("roi", "psi_anomic"):
            raise UsageError(f"--relax: unknown assumption {name!r}")
    if args.theorem == "pbr" and relax:
        raise UsageError("--relax does not apply to the pbr check")
    if args.theorem == "hroi" and "psi_anomic" in relax:
        raise UsageError("hroi admits relaxing roi only")
    try:
        if args.theorem == "pbr":
            psi1, psi2, meas = nogo.pbr_fixture()
            report = nogo.pbr_check(psi1, psi2, meas)
            expected = report.status == "contradiction"
        elif args.theorem == "hroi":
            report = nogo.check_hroi_original(a2, roi="roi" not in relax)
            expected = (report.status == "overlap-zero" if "roi" not in relax
                        else report.status == "overlap-positive")
        else:
            report = nogo.check_hroi2(a2, relax=relax)
            expected = (report.status == lp.INFEASIBLE if not relax
                        else report.status == lp.FEASIBLE)
    except (HypothesisRangeError, nogo.NonOrthogonalityError) as exc:
        raise UsageError(str(exc)) from exc

    _emit(_dump_json(_report_payload(report)), args.out, "report.json")
    if args.theorem == "hroi2" and relax and report.status == lp.FEASIBLE \
            and args.out is not None:
        cs = nogo.compile_hroi2(a2, roi="roi" not in relax,
                                psi_anomic="psi_anomic" not in relax)
        model = nogo.witness_to_model(cs, report.result.witness)
        _emit(dump_model(model), args.out, "witness_model.json")

    summary = f"{report.theorem}: {report.status}"
    if report.max_overlap is not None:
        summary += f" (max overlap {report.max_overlap})"
    if report.result is not None and report.result.certificate is not None:
        summary += " [certificate verified]"
    print(summary, file=sys.stderr)
    return EXIT_OK if expected else EXIT_USAGE


# ---------------------------------------------------------------------------
# model

def cmd_model(args) -> int:
    if args.action == "counterexample":
        a2 = _parse_a2(args.a2)
        try:
            model = nogo.nomic_counterexample(a2, style=args.style)
        except (ValueError, ifm.InvalidTransmissionError) as exc:
            raise UsageError(str(exc)) from exc
        _emit(dump_model(model), args.out, "counterexample.json")
        return EXIT_OK

    if args.model_file is None:
        raise UsageError(f"model {args.action} needs a model file argument")
    try:
        model = load_model(Path(args.model_file).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {args.model_file}: {exc}") from exc
    except ModelSchemaError as exc:
        raise UsageError(f"{args.model_file}: {exc}") from exc

    if args.action == "lift":
        from .ontology import lift_model
        _emit(dump_model(lift_model(model)), args.out, "lifted.json")
        return EXIT_OK

    # audit
    a2 = _parse_a2(args.a2)
    try:
        validate_model(model)
    except ValueError as exc:
        raise UsageError(f"{args.model_file}: {exc}") from exc
    fragment = ifm.device_fragment(a2)
    fragment = tuple(e for e in fragment
                     if e.preparation in model.preparations()
                     and e.context in model.contexts())
    ok, deviations = reproduces(model, fragment)
    compliance = check_assumptions(
        model, AssumptionSet(psi_anomic=True, pip=True, pip_ps=True,
                             roi=True))
    payload = {
        "reproduces": ok,
        "checked_entries": len(fragment),
        "max_deviation": max(deviations.values(), default=Fraction(0)),
        "assumptions": {item.assumption: {"status": item.status,
                                          "details": list(item.details)}
                        for item in compliance.items},
    }
    preps = model.preparations()
    if ctx.PSI_PLUS in preps and ctx.PSI_ZERO in preps:
        ov = support_overlap(model, ctx.PSI_PLUS, ctx.PSI_ZERO)
        payload["overlap"] = {"preparations": [ctx.PSI_PLUS, ctx.PSI_ZERO],
                              "common_mass": ov.overlap,
                              "disjoint_supports": ov.disjoint}
    _emit(_dump_json(payload), args.out, "audit.json")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nogocheck",
        description="Interferometric fragment simulation and no-go theorem "
                    "verification with exact certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--a2", default="1/3",
                       help="arm-0 weight as a rational p/q (default 1/3)")
        p.add_argument("--out", default=None,
                       help="output directory (default: stdout)")

    p_sim = sub.add_parser("simulate",
                           help="sweep the device over a list of phases")
    common(p_sim)
    p_sim.add_argument("--chi", default="0,pi",
                       help="comma separated phases, labels or radians")
    p_sim.add_argument("--format", choices=("json", "csv"), default="json",
                       help="stdout format when --out is not given")
    p_sim.set_defaults(func=cmd_simulate)

    p_chk = sub.add_parser("check", help="run a theorem check")
    p_chk.add_argument("theorem", choices=("pbr", "hroi", "hroi2"))
    common(p_chk)
    p_chk.add_argument("--relax", action="append", default=None,
                       metavar="ASSUMPTION",
                       help="drop an assumption (roi or psi_anomic); "
                            "repeatable")
    p_chk.set_defaults(func=cmd_check)

    p_mod = sub.add_parser("model", help="emit, lift or audit model files")
    p_mod.add_argument("action", choices=("counterexample", "lift", "audit"))
    p_mod.add_argument("model_file", nargs="?", default=None,
                       help="model JSON file (lift and audit)")
    common(p_mod)
    p_mod.add_argument("--style", choices=("point", "arm"), default="point",
                       help="counterexample ontic space layout")
    p_mod.set_defaults(func=cmd_model)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
