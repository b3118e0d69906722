"""Deterministic report structures shared by the CLI commands.

Field order is fixed, rationals are printed exactly and identical inputs
(including the seed) produce byte-identical serialized reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

SCHEMA = "kappastar-report/1"

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_USAGE = 2


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[str] = None

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class Report:
    command: List[str]
    product: Optional[str] = None
    dimension: Optional[int] = None
    series: Optional[List[Tuple[int, str]]] = None
    checks: List[Check] = field(default_factory=list)
    seed: Optional[int] = None
    version: str = "0.1.0"

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_MATH_FAILURE

    def to_dict(self):
        out = {
            "schema": SCHEMA,
            "command": self.command,
            "product": self.product,
            "dimension": self.dimension,
            "seed": self.seed,
            "series": [[order, text] for order, text in self.series] if self.series is not None else None,
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "version": self.version,
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"$ {' '.join(self.command)}"]
        if self.product is not None:
            lines.append(f"product: {self.product}" +
                         (f"  (d = {self.dimension})" if self.dimension is not None else ""))
        elif self.dimension is not None:
            lines.append(f"dimension: {self.dimension}")
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        if self.series is not None:
            if not self.series:
                lines.append("result: 0")
            else:
                lines.append("result:")
                for order, text in self.series:
                    prefix = "" if order == 0 else ("theta * " if order == 1 else f"theta^{order} * ")
                    lines.append(f"  [{order}] {prefix}({text})" if order else f"  [0] {text}")
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            line = f"{status}  {check.name}"
            if check.witness and not check.passed:
                line += f"  [{check.witness}]"
            lines.append(line)
        if self.checks:
            lines.append("all checks passed" if self.passed else "some checks FAILED")
        return "\n".join(lines)
