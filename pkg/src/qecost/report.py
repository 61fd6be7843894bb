"""Rendering of estimates and sweeps: reference-table text, CSV and JSON."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

from .analysis import METRICS, SweepRow, crossovers
from .model import GateKind, ResourceEstimate

NS_PER_SECOND = 1e9
NS_PER_HOUR = 3600 * NS_PER_SECOND
NS_PER_DAY = 24 * NS_PER_HOUR
NS_PER_YEAR = 365.25 * NS_PER_DAY

ROW_LABELS = (
    "Execution time",
    "No. qubits",
    "No. gates",
    "Dominant gate",
    None,  # "Code distance" or "Code concatenations"
    "Logical gate error",
    "Logical gate time",
    "No. qubits per logical",
    "No. gates per logical",
)

SWEEP_COLUMNS = (
    "p",
    "bs_feasible", "bs_level", "bs_avg_time_ns", "bs_qubits_per_logical",
    "bs_gates_per_logical", "bs_logical_error",
    "sc_feasible", "sc_distance", "sc_avg_time_ns", "sc_qubits_per_logical",
    "sc_gates_per_logical", "sc_logical_error",
)

ESTIMATE_COLUMNS = (
    "algorithm", "technology", "code", "execution_time_ns", "total_physical_qubits",
    "total_physical_gates", "dominant_gate", "code_parameter", "logical_gate_error",
    "logical_gate_time_ns", "qubits_per_logical", "gates_per_logical",
)


def sig3(x: float) -> str:
    """Three significant figures: ``49``, ``210``, ``4.57e7``."""
    if x == 0:
        return "0"
    if float(x).is_integer() and abs(x) < 1000:
        return str(int(x))
    # Decimal on the shortest repr so 3225 rounds half-up to 3.23e3.
    d = Decimal(repr(float(x)))
    exp = d.adjusted()
    mantissa = d.scaleb(-exp).quantize(Decimal("0.01"), ROUND_HALF_UP)
    if abs(mantissa) >= 10:
        mantissa, exp = (mantissa / 10).quantize(Decimal("0.01"), ROUND_HALF_UP), exp + 1
    return f"{mantissa}e{exp}"


def format_duration(ns: float) -> str:
    """Auto-scaled human duration; years are Julian (365.25 days)."""
    for limit, unit, scale in (
        (1e3, "ns", 1.0),
        (1e6, "µs", 1e3),
        (1e9, "ms", 1e6),
        (NS_PER_HOUR, "s", NS_PER_SECOND),
        (NS_PER_DAY, "hours", NS_PER_HOUR),
        (NS_PER_YEAR, "days", NS_PER_DAY),
    ):
        if ns < limit:
            return f"{ns / scale:.3g} {unit}"
    return f"{ns / NS_PER_YEAR:.3g} years"


def parameter_label(code: str) -> str:
    return "Code concatenations" if code == "bacon-shor" else "Code distance"


@dataclass(frozen=True)
class ReportDocument:
    algorithm: str
    technology: str
    code: str
    options: Mapping[str, object] = field(default_factory=dict)
    estimate: ResourceEstimate | None = None
    footnotes: Sequence[str] = ()

    @property
    def feasible(self) -> bool:
        return self.estimate is not None

    def rows(self) -> list[tuple[str, str]]:
        labels = [label or parameter_label(self.code) for label in ROW_LABELS]
        e = self.estimate
        if e is None:
            return [(label, "N/A") for label in labels]
        values = [
            format_duration(e.execution_time_ns),
            sig3(e.total_physical_qubits),
            sig3(e.total_physical_gates),
            str(e.dominant_gate),
            str(e.code_parameter),
            sig3(e.logical_gate_error),
            f"{sig3(e.logical_gate_time_ns)} ns",
            sig3(e.qubits_per_logical),
            sig3(e.gates_per_logical),
        ]
        return list(zip(labels, values))

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "technology": self.technology,
            "code": self.code,
            "options": dict(self.options),
            "feasible": self.feasible,
            "estimate": self.estimate.to_dict() if self.estimate else None,
            "footnotes": list(self.footnotes),
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ReportDocument":
        est = doc.get("estimate")
        return cls(
            algorithm=doc["algorithm"],
            technology=doc["technology"],
            code=doc["code"],
            options=doc.get("options", {}),
            estimate=ResourceEstimate.from_dict(est) if est else None,
            footnotes=tuple(doc.get("footnotes", ())),
        )


def render_table(doc: ReportDocument) -> str:
    opts = ", ".join(f"{k}={v}" for k, v in doc.options.items())
    lines = [
        f"Algorithm:  {doc.algorithm}",
        f"Technology: {doc.technology}",
        f"Code:       {doc.code}",
    ]
    if opts:
        lines.append(f"Options:    {opts}")
    lines.append("")
    rows = doc.rows()
    width = max(len(label) for label, _ in rows)
    lines.extend(f"{label.ljust(width)}  {value}" for label, value in rows)
    for i, note in enumerate(doc.footnotes, 1):
        if i == 1:
            lines.append("")
        lines.append(f"[{i}] {note}")
    return "\n".join(lines) + "\n"


def render_json(doc: ReportDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, sort_keys=False) + "\n"


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_estimate_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ESTIMATE_COLUMNS)
    if doc.estimate is None:
        writer.writerow([doc.algorithm, doc.technology, doc.code] + [""] * (len(ESTIMATE_COLUMNS) - 3))
    else:
        d = doc.estimate.to_dict()
        writer.writerow([_csv_value(d[c]) for c in ESTIMATE_COLUMNS])
    return buf.getvalue()


def sweep_records(rows: Sequence[SweepRow]) -> list[list[str]]:
    out = []
    for r in rows:
        rec = [_csv_value(r.p)]
        for m in (r.bacon_shor, r.surface):
            rec.append(_csv_value(m.feasible))
            if m.feasible:
                rec.extend(_csv_value(v) for v in (m.code_parameter, m.avg_logical_time_ns,
                                                    m.qubits_per_logical, m.gates_per_logical,
                                                    m.logical_error))
            else:
                rec.extend([""] * 5)
        out.append(rec)
    return out


def crossover_lines(rows: Sequence[SweepRow]) -> list[str]:
    lines = []
    for metric, result in crossovers(rows, METRICS).items():
        if isinstance(result, str):
            text = result
        elif result is None:
            text = "none"
        else:
            text = f"[{result[0]!r}, {result[1]!r}]"
        lines.append(f"crossover {metric}: {text}")
    return lines


def render_sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    writer.writerows(sweep_records(rows))
    for line in crossover_lines(rows):
        buf.write(f"# {line}\n")
    return buf.getvalue()


def render_sweep_json(rows: Sequence[SweepRow]) -> str:
    summary = {}
    for metric, result in crossovers(rows, METRICS).items():
        summary[metric] = list(result) if isinstance(result, tuple) else result
    return json.dumps({"rows": [r.to_dict() for r in rows], "crossover": summary}, indent=2) + "\n"


def render_fractions(pairs: Sequence[tuple[GateKind, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("gate", "fraction"))
    for kind, frac in pairs:
        writer.writerow((str(kind), f"{frac:.6f}"))
    return buf.getvalue()


def parse_sweep_csv(text: str) -> list[dict[str, str]]:
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(body))


def is_close_sig(value: float, reference: float, figures: int) -> bool:
    """``value`` agrees with ``reference`` to ``figures`` significant figures (half-unit rule)."""
    if reference == 0:
        return value == 0
    return abs(value - reference) <= 0.5 * 10 ** (1 - figures) * abs(reference) * (1 + 1e-12)


__all__ = [
    "ReportDocument", "render_table", "render_json", "render_estimate_csv", "render_sweep_csv",
    "render_sweep_json", "render_fractions", "format_duration", "sig3", "SWEEP_COLUMNS",
    "ESTIMATE_COLUMNS", "parse_sweep_csv", "is_close_sig", "crossover_lines", "NS_PER_YEAR",
    "NS_PER_DAY", "NS_PER_HOUR",
]
