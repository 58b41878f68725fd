"""Suite runner: configuration, property records, JSON reports.

Every property draws from an independent sub-stream derived by hashing
(seed, suite, property), so both the suite selection and any future
parallel execution leave results unchanged.  A report is a plain dict;
two runs with the same configuration produce identical reports except
for the timestamp field.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .algebra import Algebra

DEFAULT_SUITES = (
    "wstar",
    "lattice",
    "groupoid",
    "bundle",
    "algebroid",
    "unitary",
    "atiyah",
    "derivations",
    "grassmann",
)


@dataclass(frozen=True)
class SuiteConfig:
    dim: int = 6
    rank: int = 2
    seed: int = 12345
    samples: int = 200
    tol_rank: float = 1e-9
    tol_eq: float = 1e-8
    tol_fd: float = 1e-4
    tol_bracket: float = 1e-6
    tol_jacobi: float = 1e-5
    fd_step: float = 1e-5
    suites: tuple = DEFAULT_SUITES

    def __post_init__(self):
        if not 1 <= self.rank <= self.dim:
            raise ValueError("rank must satisfy 1 <= rank <= dim")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        for name in ("tol_rank", "tol_eq", "tol_fd", "tol_bracket", "tol_jacobi", "fd_step"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        unknown = set(self.suites) - set(DEFAULT_SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")

    def algebra(self) -> Algebra:
        return Algebra(self.dim, tol_rank=self.tol_rank, tol_eq=self.tol_eq)


@dataclass
class PropertyResult:
    name: str
    law: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    error: str = ""


def run_suites(cfg: SuiteConfig) -> dict:
    """Execute the selected suites and assemble the report dict."""
    from .suites import SUITES

    suites_out = []
    all_passed = True
    for name in cfg.suites:
        build = SUITES[name]
        results = build(cfg)
        all_passed = all_passed and all(r.passed for r in results)
        suites_out.append({"suite": name, "properties": [asdict(r) for r in results]})
    config_echo = asdict(cfg)
    config_echo["suites"] = list(config_echo["suites"])
    return {
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        "config": config_echo,
        "suites": suites_out,
        "passed": all_passed,
    }


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def write_report(report: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
        fh.write("\n")


def strip_timestamp(report: dict) -> dict:
    out = dict(report)
    out.pop("timestamp", None)
    return out
