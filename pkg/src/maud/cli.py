"""Command-line driver: scripted assessment, beta fitting, evaluation,
two-mode comparison, and the HTTP service.

All commands are non-interactive (assessment answers come from a script
file); errors print a structured {code, message} object to stderr and exit
nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import assessment, documents, evaluation, service, uncertainty
from .errors import DocumentError, MaudError
from .rules import FactSet, load_knowledge_base


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(f"cannot read {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path!r} is not valid JSON: {exc}") from exc


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _render_table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    def fmt(row):
        return "  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def _ranking_rows(result: evaluation.EvaluationResult, kb) -> tuple[list, list]:
    header = list(kb.slot_ids) + [f"eu_{a}" for a in kb.attribute_ids] \
        + ["expected_utility", "rank"]
    rows = []
    for e in result.entries:
        row = [e.alternative.material(s) for s in kb.slot_ids]
        row += [f"{e.per_attribute[a]:.6f}" for a in kb.attribute_ids]
        row += [f"{e.expected_utility:.6f}", e.rank]
        rows.append(row)
    return header, rows


def render_ranking(result: evaluation.EvaluationResult, kb, fmt: str) -> str:
    if fmt == "document":
        return json.dumps(result.to_document(), indent=2) + "\n"
    if fmt == "csv":
        return evaluation.result_to_csv(result, kb)
    if fmt == "table":
        header, rows = _ranking_rows(result, kb)
        return _render_table(rows, header)
    raise DocumentError(f"unknown format {fmt!r}", field="format")


def cmd_assess(args) -> int:
    attributes = documents.attributes_from_document(_read_json(args.attributes))
    script = _read_json(args.answers)
    answers, ce_count = documents.answer_script_from_document(script)
    if args.ce_count is not None:
        ce_count = args.ce_count
    session, profile = assessment.run_answer_script(
        attributes, answers, ce_count=ce_count)
    doc = documents.profile_to_document(profile)
    digest = documents.profile_fingerprint(profile)
    payload = {
        "profile": doc,
        "fingerprint": digest,
        "session_log": documents.session_to_document(session),
    }
    _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    if args.out:
        print(f"profile written to {args.out} (fingerprint {digest})")
    return 0


def cmd_fit_beta(args) -> int:
    kwargs = {}
    if args.p is not None:
        kwargs["p"] = args.p
    if args.q is not None:
        kwargs["q"] = args.q
    if args.mode is not None:
        kwargs["mode"] = args.mode
    if args.mean is not None:
        kwargs["mean"] = args.mean
    spec = uncertainty.fit_beta(args.lower, args.upper, **kwargs)
    payload = {
        "beta": spec.to_document(),
        "mean": uncertainty.beta_mean(spec),
        "mode": None if spec.is_uniform else uncertainty.beta_mode(spec),
    }
    if args.format == "document":
        _write_output(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        b = payload["beta"]
        mode_text = "undefined (uniform)" if payload["mode"] is None \
            else f"{payload['mode']:.6g}"
        text = (f"beta on ({b['lower']:g}, {b['upper']:g}): "
                f"p = {b['p']:.6g}, q = {b['q']:.6g}\n"
                f"mean = {payload['mean']:.6g}\n"
                f"mode = {mode_text}\n")
        _write_output(text, args.out)
    return 0


def _load_eval_inputs(args):
    kb = load_knowledge_base(_read_json(args.kb))
    facts = FactSet.from_document(_read_json(args.facts))
    profile_doc = _read_json(args.profile)
    if isinstance(profile_doc, dict) and "profile" in profile_doc:
        profile_doc = profile_doc["profile"]
    profile = documents.profile_from_document(profile_doc)
    return kb, facts, profile


def cmd_evaluate(args) -> int:
    kb, facts, profile = _load_eval_inputs(args)
    result = evaluation.evaluate_design(kb, facts, profile)
    _write_output(render_ranking(result, kb, args.format), args.out)
    return 0


def cmd_compare(args) -> int:
    kb, facts, profile = _load_eval_inputs(args)
    report = evaluation.compare_modes(kb, facts, profile)
    if args.format == "document":
        _write_output(json.dumps(report.to_document(), indent=2) + "\n", args.out)
        return 0
    if args.format == "csv":
        _write_output(evaluation.result_to_csv(report.ranking, kb), args.out)
        return 0
    lines = []
    header = ["mode"] + list(kb.slot_ids) + ["expected_utility"]
    rows = []
    for outcome in (report.conventional, report.integrated):
        rows.append([outcome.mode]
                    + [outcome.pick.material(s) for s in kb.slot_ids]
                    + [f"{outcome.expected_utility:.6f}"])
    lines.append(_render_table(rows, header))
    agree = ", ".join(f"{slot}: {'same' if ok else 'DIFFERS'}"
                      for slot, ok in report.agreement.items())
    lines.append(f"slot agreement: {agree}\n")
    lines.append("ranking (integrated mode):\n")
    lines.append(render_ranking(report.ranking, kb, "table"))
    _write_output("".join(lines), args.out)
    return 0


def cmd_serve(args) -> int:
    service.serve_forever(args.addr, args.data_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maud",
        description="Expected multiattribute utility evaluation of design "
                    "alternatives under uncertainty.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assess", help="build a profile from a scripted answer file")
    p.add_argument("--attributes", required=True, help="attribute list JSON file")
    p.add_argument("--answers", required=True, help="answer script JSON file")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--ce-count", type=int, default=None,
                   help="certainty-equivalent questions per attribute (1-3)")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("fit-beta", help="solve a beta shape from a mean or mode")
    p.add_argument("--lower", type=float, required=True)
    p.add_argument("--upper", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, help="known first shape parameter")
    group.add_argument("--q", type=float, help="known second shape parameter")
    group2 = p.add_mutually_exclusive_group(required=True)
    group2.add_argument("--mode", type=float, help="target most-likely value")
    group2.add_argument("--mean", type=float, help="target mean")
    p.add_argument("--format", choices=["table", "document"], default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit_beta)

    for name, fn, hlp in [("evaluate", cmd_evaluate, "rank feasible alternatives"),
                          ("compare", cmd_compare,
                           "conventional vs integrated mode on the same inputs")]:
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--kb", required=True, help="knowledge base JSON file")
        p.add_argument("--facts", required=True, help="design inputs JSON file")
        p.add_argument("--profile", required=True, help="profile JSON file")
        p.add_argument("--format", choices=["table", "document", "csv"],
                       default="table")
        p.add_argument("--out")
        p.set_defaults(func=fn)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--addr", default=os.environ.get("MAUD_ADDR",
                                                    service.DEFAULT_ADDR))
    p.add_argument("--data-dir", default=os.environ.get("MAUD_DATA_DIR",
                                                        service.DEFAULT_DATA_DIR))
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MaudError as exc:
        sys.stderr.write(json.dumps({"error": exc.to_document()}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
