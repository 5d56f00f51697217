"""Command line: ``walg verify`` runs a suite, ``walg dump`` prints operator blocks."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Callable

from .report import CheckResult, report_json, report_text

SUITES = ("heisenberg", "residue", "vertex", "current", "verma")
OPERATORS = ("P", "H", "Wtop", "Phi", "A")
VERMA_SKIP = "rank>1 requires external structure table"


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    rank: int
    max_degree: int
    max_mode: int
    fmt: str = "text"
    out: str | None = None
    timings: bool = False

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.rank < 1 or self.max_degree < 0 or self.max_mode < 1:
            raise ValueError("need rank >= 1, max-degree >= 0, max-mode >= 1")


def _jobs(cfg: SuiteConfig) -> list[Callable[[], list[CheckResult]]]:
    """Independent units of work; each returns its checks in a fixed order."""
    r, n_deg, m = cfg.rank, cfg.max_degree, cfg.max_mode
    if cfg.suite == "heisenberg":
        from .fock import heisenberg_suite

        return [lambda: heisenberg_suite(r, m, n_deg)]
    if cfg.suite == "residue":
        from .residue import residue_suite

        return [lambda: residue_suite(r, m)]
    if cfg.suite == "vertex":
        from .vertex import vertex_suite

        return [lambda: vertex_suite(r, m, n_deg)]
    if cfg.suite == "current":
        from .current import current_heis_suite
        from .vertex import current_vertex_suite

        return [lambda: current_heis_suite(r, m, n_deg), lambda: current_vertex_suite(r, (-m, m), n_deg)]
    if r > 1:
        return [lambda: [CheckResult("verma", {"r": r}, False, note=VERMA_SKIP, skipped=True)]]
    from .verma import verma_suite

    return [lambda: verma_suite(n_deg, m)]


def run_suite(cfg: SuiteConfig) -> tuple[list[CheckResult], int]:
    checks: list[CheckResult] = []
    for job in _jobs(cfg):
        start = time.perf_counter()
        batch = job()
        elapsed = int((time.perf_counter() - start) * 1000)
        # wall time is opt-in so that reports stay byte-identical across runs
        for c in batch:
            c.millis = elapsed // max(len(batch), 1) if cfg.timings else 0
        checks.extend(batch)
    status = 0 if all(c.passed or c.skipped for c in checks) else 1
    return checks, status


def render(cfg: SuiteConfig, checks: list[CheckResult]) -> str:
    render_fn = report_json if cfg.fmt == "json" else report_text
    return render_fn(cfg.suite, cfg.rank, cfg.max_degree, cfg.max_mode, checks)


# dump


def _operator(name: str, index: int, rank: int, max_degree: int):
    from .current import W
    from .fock import FockModule, H, P
    from .vertex import build_A, closed_form_vertex

    if name == "P":
        if index == 0:
            raise ValueError("P_0 is not a generator")
        return P(index), FockModule(rank)
    if name == "H":
        return H(index), FockModule(rank)
    if name == "Wtop":
        return W(index), FockModule(rank)
    phi = closed_form_vertex(rank, max_degree + 1)
    if name == "Phi":
        return phi, phi.domain
    return build_A(phi), phi.domain


def dump_blocks(name: str, index: int, rank: int, max_degree: int) -> dict:
    from .fock import FockVector, partitions_of

    if name not in OPERATORS:
        raise ValueError(f"unknown operator {name!r}")
    if rank < 1 or max_degree < 0:
        raise ValueError("need rank >= 1 and max-degree >= 0")
    op, domain = _operator(name, index, rank, max_degree)
    blocks = []
    for d in range(max_degree + 1):
        cols = partitions_of(d)
        images = [op.apply(FockVector.basis(domain, lam), max_degree) for lam in cols]
        for d2 in range(max_degree + 1):
            rows = partitions_of(d2)
            entries = [[img.coefficient(mu).to_text() for img in images] for mu in rows]
            if all(e == "0/1" for row in entries for e in row):
                continue
            blocks.append(
                {
                    "from": d,
                    "to": d2,
                    "columns": [list(lam) for lam in cols],
                    "rows": [list(mu) for mu in rows],
                    "entries": entries,
                }
            )
    return {"operator": name, "index": index, "rank": rank, "maxDegree": max_degree, "blocks": blocks}


def dump_text(doc: dict) -> str:
    lines = [f"{doc['operator']} index={doc['index']} rank={doc['rank']} maxDegree={doc['maxDegree']}"]
    for b in doc["blocks"]:
        lines.append(f"block {b['from']} -> {b['to']}")
        for mu, row in zip(b["rows"], b["entries"]):
            lines.append(f"  {mu}: " + "  ".join(row))
    return "\n".join(lines) + "\n"


# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walg", description="Exact checks for the W-algebra/vertex operator engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--rank", type=int, default=1)
    v.add_argument("--max-degree", type=int, default=4)
    v.add_argument("--max-mode", type=int, default=2)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out")
    v.add_argument("--timings", action="store_true", help="record wall time (reports are no longer reproducible)")

    d = sub.add_parser("dump", help="print exact graded blocks of an operator")
    d.add_argument("--operator", required=True, choices=OPERATORS)
    d.add_argument("--index", type=int, default=0)
    d.add_argument("--rank", type=int, default=1)
    d.add_argument("--max-degree", type=int, default=2)
    d.add_argument("--format", choices=("text", "json"), default="json")
    d.add_argument("--out")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        try:
            cfg = SuiteConfig(args.suite, args.rank, args.max_degree, args.max_mode, args.format, args.out, args.timings)
        except ValueError as exc:
            parser.error(str(exc))
        checks, status = run_suite(cfg)
        _emit(render(cfg, checks), cfg.out)
        return status
    try:
        doc = dump_blocks(args.operator, args.index, args.rank, args.max_degree)
    except ValueError as exc:
        print(f"walg dump: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(doc, indent=2) + "\n" if args.format == "json" else dump_text(doc)
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
