"""Per-item metric reports with mean / median / std aggregates, as JSON or CSV."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__

TOOL = "sharpgan-kit"


@dataclass
class Report:
    command: str
    metrics: list[str]
    config_hash: str
    config: dict
    rows: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add_row(self, name: str, values: dict) -> None:
        self.rows.append({"filename": name, **{m: values.get(m) for m in self.metrics}})

    def skip(self, name: str, reason: str) -> None:
        self.skipped.append({"filename": name, "reason": reason})
        self.warnings.append(f"{name}: {reason}")

    def aggregate(self) -> dict[str, dict[str, float | None]]:
        """Mean, median and population std per metric over rows with a value."""
        out = {"mean": {}, "median": {}, "std": {}}
        for m in self.metrics:
            vals = np.array(
                [r[m] for r in self.rows if r[m] is not None and not math.isnan(r[m])], dtype=np.float64
            )
            if vals.size == 0:
                for k in out:
                    out[k][m] = None
                continue
            out["mean"][m] = float(np.mean(vals))
            out["median"][m] = float(np.median(vals))
            out["std"][m] = float(np.std(vals))
        return out

    def to_dict(self) -> dict:
        return {
            "tool": TOOL,
            "version": __version__,
            "command": self.command,
            "config_hash": self.config_hash,
            "config": self.config,
            "metrics": list(self.metrics),
            "rows": self.rows,
            "aggregate": self.aggregate(),
            "skipped": self.skipped,
            "warnings": self.warnings,
            "warning_count": len(self.warnings),
        }

    def to_json(self) -> str:
        # NaN is not valid JSON; missing values are written as null
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# tool={TOOL} version={__version__} command={self.command}\n")
        buf.write(f"# config_hash={self.config_hash}\n")
        for s in self.skipped:
            buf.write(f"# skipped {s['filename']}: {s['reason']}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["filename", *self.metrics])
        for r in self.rows:
            w.writerow([r["filename"], *(_fmt(r[m]) for m in self.metrics)])
        for name, vals in self.aggregate().items():
            w.writerow([f"__{name}__", *(_fmt(vals[m]) for m in self.metrics)])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))
