"""Command-line driver: single-submission repair and batch corpus mode.

Exit codes: 0 the submission is already correct, 1 a fix was produced,
2 no fix within the cost cap (or budget exhausted), 3 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .eml import DuplicateRuleId, IllFormedModel, parse_eml
from .feedback import build_report, render_feedback
from .inputs import UnknownTypeSuffix, parse_signature
from .interp import Bounds
from .lexer import SourceError
from .parser import parse_imp
from .rewrite import rewrite
from .search import (
    BudgetExceeded,
    ReferenceFault,
    ReferenceOracle,
    SearchBudget,
    cegis_min,
    next_alternate,
)
from .tilde import dump

EXIT_CORRECT = 0
EXIT_FIXED = 1
EXIT_NO_FIX = 2
EXIT_ERROR = 3

_EXIT_BY_VERDICT = {"correct": EXIT_CORRECT, "fixed": EXIT_FIXED, "no-fix": EXIT_NO_FIX, "budget": EXIT_NO_FIX}


@dataclass
class RunConfig:
    ref: str
    model: str
    student: str | None = None
    corpus: str | None = None
    int_bits: int = 4
    max_list: int = 4
    fuel: int = 100_000
    max_cost: int = 5
    alternates: int = 0
    level: int = 4
    format: str = "text"
    jobs: int = 1
    budget_candidates: int = 10_000_000
    budget_seconds: float | None = None
    callees: str = "student"
    dump_tilde: bool = False
    timing: bool = False


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="autofix",
        description="Minimal-correction feedback for mini-language submissions.",
    )
    p.add_argument("--ref", required=True, help="reference implementation (.imp)")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--student", help="one student submission (.imp)")
    target.add_argument("--corpus", help="directory of student submissions")
    p.add_argument("--model", required=True, help="error model (.eml)")
    p.add_argument("--int-bits", type=int, default=4, help="integer width in bits")
    p.add_argument("--max-list", type=int, default=4, help="maximum input list length")
    p.add_argument("--fuel", type=int, default=100_000, help="evaluation step budget per run")
    p.add_argument("--max-cost", type=int, default=5, help="cost cap for fixes")
    p.add_argument("--alternates", type=int, default=0, help="extra distinct fixes to report")
    p.add_argument("--level", type=int, default=4, choices=(1, 2, 3, 4), help="feedback detail level")
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for corpus mode")
    p.add_argument("--budget-candidates", type=int, default=10_000_000,
                   help="candidate-evaluation ceiling per submission")
    p.add_argument("--budget-seconds", type=float, default=None,
                   help="wall-clock ceiling per submission (off by default)")
    p.add_argument("--callees", default="student", choices=("student", "reference"),
                   help="whose helper functions candidate programs call")
    p.add_argument("--dump-tilde", action="store_true",
                   help="print the rewritten choice structure and exit")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock timing in reports (non-reproducible)")
    return p


def config_from_args(argv) -> RunConfig:
    args = make_parser().parse_args(argv)
    return RunConfig(
        ref=args.ref,
        model=args.model,
        student=args.student,
        corpus=args.corpus,
        int_bits=args.int_bits,
        max_list=args.max_list,
        fuel=args.fuel,
        max_cost=args.max_cost,
        alternates=args.alternates,
        level=args.level,
        format=args.format,
        jobs=args.jobs,
        budget_candidates=args.budget_candidates,
        budget_seconds=args.budget_seconds,
        callees=args.callees,
        dump_tilde=args.dump_tilde,
        timing=args.timing,
    )


def _load(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _bounds(cfg: RunConfig) -> Bounds:
    return Bounds(int_bits=cfg.int_bits, max_list_len=cfg.max_list, fuel=cfg.fuel)


def _callee_map(cfg: RunConfig, reference):
    if cfg.callees == "reference":
        return {f.name: f for f in reference.functions}
    return None


def repair_one(student_source: str, reference, model, oracle, cfg: RunConfig):
    """Parse, rewrite and search one submission.  Returns (report, tilde)."""
    student = parse_imp(student_source)
    sig = parse_signature(student.entry_func())
    want = oracle.signature
    # parameter names may differ; base name, argument types and result must match
    if (sig.base, [t for _, t in sig.params], sig.ret) != (
        want.base,
        [t for _, t in want.params],
        want.ret,
    ):
        raise SourceError(
            f"signature {sig.base}({', '.join(t for _, t in sig.params)}) -> {sig.ret}"
            " does not match the reference",
            student.entry_func().span.line,
            1,
        )
    tilde = rewrite(student, model)
    budget = SearchBudget(cfg.budget_candidates, cfg.budget_seconds)
    callees = _callee_map(cfg, reference)
    started = time.monotonic()
    result = cegis_min(tilde, oracle, cfg.max_cost, budget, callees=callees)
    alternates = []
    priors = [result] if result.status == "fixed" else []
    for _ in range(cfg.alternates):
        if not priors:
            break
        nxt = next_alternate(priors, tilde, oracle, cfg.max_cost, budget, callees=callees)
        if nxt.status != "fixed":
            break
        alternates.append(nxt)
        priors.append(nxt)
    millis = int((time.monotonic() - started) * 1000) if cfg.timing else None
    report = build_report(tilde, result, alternates, millis)
    return report, tilde


def run_single(cfg: RunConfig) -> int:
    try:
        ref = parse_imp(_load(cfg.ref))
        model = parse_eml(_load(cfg.model))
        student_source = _load(cfg.student)
        oracle = ReferenceOracle(ref, _bounds(cfg))
        if cfg.dump_tilde:
            student = parse_imp(student_source)
            sys.stdout.write(dump(rewrite(student, model)))
            return EXIT_CORRECT
        report, _ = repair_one(student_source, ref, model, oracle, cfg)
    except (OSError, SourceError, DuplicateRuleId, IllFormedModel,
            UnknownTypeSuffix, ReferenceFault, BudgetExceeded) as err:
        print(f"autofix: {err}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(render_feedback(report, cfg.level, cfg.format))
    return _EXIT_BY_VERDICT[report.verdict]


# -- corpus mode -------------------------------------------------------------

_WORKER_CTX = {}


def _init_worker(ref_source, model_source, cfg):
    ref = parse_imp(ref_source)
    _WORKER_CTX["cfg"] = cfg
    _WORKER_CTX["ref"] = ref
    _WORKER_CTX["model"] = parse_eml(model_source)
    _WORKER_CTX["oracle"] = ReferenceOracle(ref, _bounds(cfg))


def _corpus_entry(path: str) -> dict:
    cfg = _WORKER_CTX["cfg"]
    name = os.path.basename(path)
    started = time.monotonic()
    try:
        source = _load(path)
        report, _ = repair_one(
            source, _WORKER_CTX["ref"], _WORKER_CTX["model"], _WORKER_CTX["oracle"], cfg
        )
    except (OSError, SourceError, UnknownTypeSuffix) as err:
        return {"name": name, "verdict": "parse-error", "error": str(err),
                "seconds": time.monotonic() - started}
    entry = {
        "name": name,
        "verdict": report.verdict,
        "cost": report.cost,
        "corrections": [
            {"line": c.line, "orig": c.orig_stmt, "sub": c.sub_expr,
             "new": c.new_expr, "rule": c.rule_id, "message": c.message}
            for c in report.corrections
        ],
        "stats": report.stats,
        "seconds": time.monotonic() - started,
    }
    return entry


def run_corpus(cfg: RunConfig) -> int:
    try:
        ref_source = _load(cfg.ref)
        model_source = _load(cfg.model)
        parse_imp(ref_source)
        parse_eml(model_source)
        ReferenceOracle(parse_imp(ref_source), _bounds(cfg))
        paths = sorted(
            os.path.join(cfg.corpus, n)
            for n in os.listdir(cfg.corpus)
            if n.endswith(".imp")
        )
    except (OSError, SourceError, DuplicateRuleId, IllFormedModel,
            UnknownTypeSuffix, ReferenceFault) as err:
        print(f"autofix: {err}", file=sys.stderr)
        return EXIT_ERROR

    if cfg.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(
            max_workers=cfg.jobs,
            initializer=_init_worker,
            initargs=(ref_source, model_source, cfg),
        ) as pool:
            entries = list(pool.map(_corpus_entry, paths))
    else:
        _init_worker(ref_source, model_source, cfg)
        entries = [_corpus_entry(p) for p in paths]

    entries.sort(key=lambda e: e["name"])
    timings = [e.pop("seconds") for e in entries]
    total = len(entries)
    correct = sum(1 for e in entries if e["verdict"] == "correct")
    fixed = sum(1 for e in entries if e["verdict"] == "fixed")
    parse_error = sum(1 for e in entries if e["verdict"] == "parse-error")
    incorrect = total - correct - parse_error
    summary = {
        "total": total,
        "correct": correct,
        "fixed": fixed,
        "no_fix": incorrect - fixed,
        "parse_error": parse_error,
        "fixed_pct": round(100.0 * fixed / incorrect, 1) if incorrect else 0.0,
    }
    if cfg.timing and timings:
        summary["avg_s"] = round(statistics.mean(timings), 3)
        summary["median_s"] = round(statistics.median(timings), 3)
    if not cfg.timing:
        for e in entries:
            e.get("stats", {}).pop("millis", None)

    if cfg.format == "json":
        sys.stdout.write(json.dumps({"files": entries, "summary": summary},
                                    indent=2, sort_keys=True) + "\n")
    else:
        for e in entries:
            line = f"{e['name']}: {e['verdict']}"
            if e["verdict"] == "fixed":
                line += f" (cost {e['cost']})"
            sys.stdout.write(line + "\n")
        sys.stdout.write(
            "summary: total={total} correct={correct} fixed={fixed} "
            "no_fix={no_fix} parse_error={parse_error} fixed_pct={fixed_pct}\n".format(**summary)
        )
        if "avg_s" in summary:
            sys.stdout.write(
                f"timing: avg_s={summary['avg_s']} median_s={summary['median_s']}\n"
            )
    return EXIT_CORRECT


def main(argv=None) -> int:
    os.environ.get("AUTOFIX_SEED")  # reserved; the search is deterministic
    try:
        cfg = config_from_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else 0
    if cfg.corpus:
        return run_corpus(cfg)
    return run_single(cfg)


if __name__ == "__main__":
    sys.exit(main())
