"""Command-line front end.

Commands::

    wfm FILE        well-founded fixpoint and its model verdict
    models FILE     every stable fixpoint, classified
    check FILE      verdict for one partition (--partition "a,b;a,b,c")
    compare FILE    least stable fixpoints of phi and psi side by side
    props FILE      property checks on a KB, or on a JSON operator table

Exit status is 0 on success and 1 on a negative verdict (a rejection, or a
failed property). Invalid input exits with 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .aft import (
    ScopeTooLargeError,
    TabulatedOperator,
    check_approximator,
    enumerate_interval_stable_fixpoints,
    enumerate_stable_fixpoints,
    is_contracting,
    is_prudent,
    is_strong_for,
    stable_revision,
    well_founded_fixpoint,
)
from .approximators import MknfApproximator, Variant, precision_compare
from .kb import GroundingError, KnowledgeBase, alternating_sequences
from .lattice import DEFAULT_SEED, EXHAUSTIVE_CAP, AtomUniverse, LatticeError, Pair, leq_p, lt_p
from .semantics import (
    ORACLE_CAP,
    CapExceededError,
    Kind,
    ModelReport,
    accepted_partitions,
    classify,
    extract_models,
    oracle_models,
    wfm,
)
from .syntax import KBSyntaxError, load_kb


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    command: str
    path: Path
    operator: Variant = Variant.PSI
    output: str = "text"
    seed: int = DEFAULT_SEED
    enumeration_cap: int = EXHAUSTIVE_CAP
    oracle_cap: int = ORACLE_CAP
    jobs: int = 1
    partition: str | None = None


def _positive_int(text: str) -> int:
    value = int(text, 0)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be unsigned, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mknf-aft", description="Hybrid MKNF reasoning by approximation fixpoint theory.")
    parser.add_argument("command", choices=["wfm", "models", "check", "compare", "props"])
    parser.add_argument("path", type=Path)
    parser.add_argument("--operator", choices=["phi", "psi"], default="psi")
    parser.add_argument("--output", choices=["text", "json"], default="text")
    parser.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    parser.add_argument("--enumeration-cap", type=_positive_int, default=EXHAUSTIVE_CAP)
    parser.add_argument("--oracle-cap", type=_positive_int, default=ORACLE_CAP)
    parser.add_argument("--jobs", type=_positive_int, default=1)
    parser.add_argument("--partition", help='two comma lists "T;P" of atoms, e.g. "a,b;a,b,c"')
    return parser


def parse_config(argv: list[str]) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        path=ns.path,
        operator=Variant(ns.operator),
        output=ns.output,
        seed=ns.seed,
        enumeration_cap=ns.enumeration_cap,
        oracle_cap=ns.oracle_cap,
        jobs=ns.jobs,
        partition=ns.partition,
    )


# -- rendering ---------------------------------------------------------------------


def _set(names: list[str]) -> str:
    return "{" + ",".join(names) + "}"


def _pair_text(kb: KnowledgeBase, p: Pair) -> str:
    return f"T={_set(kb.decode(p.first))} P={_set(kb.decode(p.second))}"


def _status(report: ModelReport) -> str:
    return f"{report.kind} ({report.reason})" if report.reason else str(report.kind)


def _emit(cfg: CliConfig, payload: dict, lines: list[str]) -> None:
    if cfg.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print("\n".join(lines))


def _header(cfg: CliConfig, operator: str) -> tuple[dict, list[str]]:
    return {"kb": str(cfg.path), "operator": operator}, [f"kb: {cfg.path}", f"operator: {operator}"]


# -- commands ------------------------------------------------------------------------


def cmd_wfm(cfg: CliConfig, kb: KnowledgeBase) -> int:
    report = wfm(kb, cfg.operator)
    payload, lines = _header(cfg, cfg.operator.value)
    payload["partitions"] = [report.to_dict(kb)]
    payload["well_founded"] = report.to_dict(kb) if report.accepted else None
    lines += [f"partition: {_pair_text(kb, report.partition)}", f"status: {_status(report)}"]
    if not report.accepted:
        lines.append("the iterative method does not yield a well-founded model; see `models`")
    _emit(cfg, payload, lines)
    return 0 if report.accepted else 1


def cmd_models(cfg: CliConfig, kb: KnowledgeBase) -> int:
    reports = extract_models(kb, cfg.operator, cap=cfg.enumeration_cap, jobs=cfg.jobs)
    wf = next((r for r in reports if r.kind is Kind.WELL_FOUNDED), None)
    payload, lines = _header(cfg, cfg.operator.value)
    payload["partitions"] = [r.to_dict(kb) for r in reports]
    payload["well_founded"] = wf.to_dict(kb) if wf else None
    lines.append(f"stable fixpoints: {len(reports)}, accepted: {len(accepted_partitions(reports))}")
    lines += [f"  {_pair_text(kb, r.partition)}  {_status(r)}" for r in reports]
    lines.append(f"well-founded: {_pair_text(kb, wf.partition) if wf else 'none'}")
    _emit(cfg, payload, lines)
    return 0 if accepted_partitions(reports) else 1


def parse_partition(text: str, kb: KnowledgeBase) -> Pair:
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError(f'--partition expects "T;P", got {text!r}')
    try:
        return Pair(*(kb.encode(n for n in part.split(",") if n.strip()) for part in parts))
    except (ValueError, LatticeError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_check(cfg: CliConfig, kb: KnowledgeBase) -> int:
    if cfg.partition is None:
        raise UsageError("check needs --partition")
    part = parse_partition(cfg.partition, kb)
    A = MknfApproximator(kb, cfg.operator)
    report = classify(A, part)
    if report.accepted:
        fixpoints = [f.pair for f in enumerate_stable_fixpoints(A, cap=cfg.enumeration_cap)]
        accepted = [q for q in fixpoints if classify(A, q, stable=True).accepted]
        if all(leq_p(part, q) for q in accepted):
            report = ModelReport(part, Kind.WELL_FOUNDED, None, report.theta, report.variant)
    payload, lines = _header(cfg, cfg.operator.value)
    payload["partitions"] = [report.to_dict(kb)]
    payload["well_founded"] = report.to_dict(kb) if report.kind is Kind.WELL_FOUNDED else None
    lines += [
        f"partition: {_pair_text(kb, part)}",
        f"theta: {_set(kb.decode(report.theta))}",
        f"status: {_status(report)}",
    ]
    _emit(cfg, payload, lines)
    return 0 if report.accepted else 1


def _relation(p: Pair, q: Pair) -> str:
    if p == q:
        return "equal"
    if lt_p(p, q):
        return "strictly-below"
    if lt_p(q, p):
        return "strictly-above"
    return "incomparable"


def cmd_compare(cfg: CliConfig, kb: KnowledgeBase) -> int:
    reports = {v: wfm(kb, v) for v in (Variant.PHI, Variant.PSI)}
    relation = _relation(reports[Variant.PHI].partition, reports[Variant.PSI].partition)
    precision = precision_compare(kb, None if kb.size <= 10 else 1000, cfg.seed)
    wf = next((r for r in (reports[Variant.PSI], reports[Variant.PHI]) if r.accepted), None)
    payload, lines = _header(cfg, "phi,psi")
    payload["partitions"] = [reports[v].to_dict(kb) | {"operator": v.value} for v in reports]
    payload["well_founded"] = wf.to_dict(kb) if wf else None
    payload["relation"] = relation
    payload["precision_counterexamples"] = len(precision.counterexamples)
    for v, r in reports.items():
        lines.append(f"{v.value} least stable fixpoint: {_pair_text(kb, r.partition)}  {_status(r)}")
    lines.append(f"phi vs psi: {relation}")
    lines.append(
        f"phi <=p psi pointwise: {'yes' if precision.ok else 'NO'} "
        f"({precision.checked} pairs, {precision.differing} where psi is strictly more precise)"
    )
    _emit(cfg, payload, lines)
    return 0


def _kb_properties(cfg: CliConfig, kb: KnowledgeBase) -> dict[str, bool]:
    checks: dict[str, bool] = {}
    exhaustive = kb.size <= cfg.enumeration_cap
    wf_phi = None
    for v in (Variant.PHI, Variant.PSI):
        A = MknfApproximator(kb, v)
        diag = check_approximator(A, None if kb.size <= 5 else 2000, cfg.seed)
        checks[f"{v.value}: approximator"] = diag.ok
        wf = well_founded_fixpoint(A)
        if v is Variant.PHI:
            wf_phi = wf
        if not exhaustive:
            continue
        fixpoints = [f.pair for f in enumerate_stable_fixpoints(A, cap=cfg.enumeration_cap, jobs=cfg.jobs)]
        checks[f"{v.value}: well-founded below all stable fixpoints"] = all(leq_p(wf, q) for q in fixpoints)
        checks[f"{v.value}: strong at consistent stable fixpoints"] = all(
            is_strong_for(A, q)
            for q in enumerate_interval_stable_fixpoints(A, cap=cfg.enumeration_cap)
            if kb.satisfiable(q.first)
        )
        checks[f"{v.value}: revision increasing on prudent pairs"] = all(
            leq_p(p, stable_revision(A, p))
            for p in A.pairs()
            if p.consistent and is_contracting(A, p) and is_prudent(A, p)
        ) if kb.size <= 5 else True
    checks["phi <=p psi"] = precision_compare(kb, None if kb.size <= 10 else 1000, cfg.seed).ok
    ps, ns = alternating_sequences(kb)
    checks["alternating sequences reach the phi well-founded fixpoint"] = Pair(ps[-1], ns[-1]) == wf_phi
    if exhaustive and kb.size <= cfg.oracle_cap:
        oracle = set(oracle_models(kb, cap=cfg.oracle_cap))
        for v in (Variant.PHI, Variant.PSI):
            found = set(accepted_partitions(extract_models(kb, v, cap=cfg.enumeration_cap)))
            checks[f"{v.value}: models agree with the definition oracle"] = found == oracle
    return checks


def load_operator_tables(path: Path) -> tuple[AtomUniverse, dict[str, TabulatedOperator]]:
    """Operators over a tiny powerset lattice, written as identity plus overrides.

    ``{"atoms": ["x"], "operators": {"A": {"overrides": [[[[], ["x"]], [["x"], ["x"]]]]}}}``
    maps the pair ``(∅, {x})`` to ``({x}, {x})`` and every other pair to itself.
    A ``"constant"`` entry instead maps every pair to one value.
    """
    data = json.loads(path.read_text())
    universe = AtomUniverse(tuple(data["atoms"]))
    size = len(universe)

    def pair(raw) -> tuple[int, int]:
        return universe.encode(raw[0]), universe.encode(raw[1])

    ops = {}
    for name, entry in data["operators"].items():
        if "constant" in entry:
            ops[name] = TabulatedOperator.constant(size, pair(entry["constant"]), name=name)
        else:
            overrides = {pair(k): pair(v) for k, v in entry.get("overrides", [])}
            ops[name] = TabulatedOperator.from_overrides(size, overrides, name=name)
    return universe, ops


def _operator_properties(path: Path) -> tuple[dict[str, bool], list[str]]:
    universe, ops = load_operator_tables(path)
    checks: dict[str, bool] = {}
    lines = []

    def show(p: Pair) -> str:
        return "(" + ",".join(_set(universe.sorted_names(x)) for x in p) + ")"

    for name, A in ops.items():
        checks[f"{name}: approximator"] = check_approximator(A).ok
        consistent = [p for p in A.pairs() if p.consistent]
        for p in consistent:
            lines.append(
                f"{name} {show(p)}: contracting={is_contracting(A, p)} prudent={is_prudent(A, p)}"
            )
        stable = [f.pair for f in enumerate_stable_fixpoints(A)]
        lines.append(f"{name} stable fixpoints: {', '.join(show(p) for p in stable) or 'none'}")
        for p in enumerate_interval_stable_fixpoints(A):
            lines.append(f"{name} strong for {show(p)}: {is_strong_for(A, p)}")
    return checks, lines


def cmd_props(cfg: CliConfig) -> int:
    payload, lines = _header(cfg, "phi,psi")
    if cfg.path.suffix == ".json":
        checks, details = _operator_properties(cfg.path)
        lines += details
        payload["details"] = details
    else:
        checks = _kb_properties(cfg, load_kb(cfg.path))
    payload["checks"] = checks
    lines += [f"{'ok  ' if ok else 'FAIL'} {name}" for name, ok in checks.items()]
    _emit(cfg, payload, lines)
    return 0 if all(checks.values()) else 1


COMMANDS: dict[str, Callable[[CliConfig, KnowledgeBase], int]] = {
    "wfm": cmd_wfm,
    "models": cmd_models,
    "check": cmd_check,
    "compare": cmd_compare,
}


def run(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if cfg.command == "props":
            return cmd_props(cfg)
        kb = load_kb(cfg.path)
        if kb.size > cfg.enumeration_cap and cfg.command in ("models", "check"):
            raise CapExceededError(f"|KA(K)| = {kb.size} exceeds the enumeration cap {cfg.enumeration_cap}")
        return COMMANDS[cfg.command](cfg, kb)
    except (OSError, KBSyntaxError, GroundingError, UsageError, CapExceededError,
            ScopeTooLargeError, LatticeError, json.JSONDecodeError, KeyError) as exc:
        print(f"mknf-aft: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
