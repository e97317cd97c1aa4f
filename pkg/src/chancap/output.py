"""Machine-readable export: CSV and JSON writers for sweeps, sequences, sims.

All writers are pure string builders so output files are byte-deterministic
for a fixed (config, seed, version).  CSV floats carry 17 significant digits,
enough for exact float64 round-trips.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from .capacity import CapacityCurvePoint, SequenceItem

QUANTUM_HEADER = "x,lambda,p,one_way,two_way,lower_bound,upper_bound"
FIG6_HEADER = "x,lambda,p,one_way,two_way"
SIM_HEADER = "kind,lambda,p,uses,seed,estimate,std_error,target,leakage"
SEQ_HEADER = "n,x_n,q_lb,q_ub,q_two_way"


def fmt(x: Optional[float]) -> str:
    """17-significant-digit decimal rendering; empty for missing values."""
    if x is None:
        return ""
    return f"{float(x):.17g}"


def _point_fields(pt: CapacityCurvePoint, with_bounds: bool) -> list:
    fields = [pt.x, pt.lam, pt.p, pt.one_way, pt.two_way]
    if with_bounds:
        fields += [pt.lower_bound, pt.upper_bound]
    return fields


def sweep_csv(points: Sequence[CapacityCurvePoint], scenario: str) -> str:
    with_bounds = scenario != "fig6"
    header = QUANTUM_HEADER if with_bounds else FIG6_HEADER
    lines = [header]
    for pt in points:
        lines.append(",".join(fmt(v) for v in _point_fields(pt, with_bounds)))
    return "\n".join(lines) + "\n"


def sweep_json(points: Sequence[CapacityCurvePoint], scenario: str, meta: dict) -> str:
    with_bounds = scenario != "fig6"
    keys = (QUANTUM_HEADER if with_bounds else FIG6_HEADER).split(",")
    rows = [
        dict(zip(keys, _point_fields(pt, with_bounds)))
        for pt in points
    ]
    return json.dumps({"meta": meta, "rows": rows}, indent=2, sort_keys=True) + "\n"


def seq_csv(items: Sequence[SequenceItem], meta: dict) -> str:
    lines = [f"# {k} = {v}" for k, v in sorted(meta.items())]
    lines.append(SEQ_HEADER)
    for it in items:
        lines.append(
            ",".join([str(it.n)] + [fmt(v) for v in (it.x_n, it.q_lb, it.q_ub, it.q_two_way)])
        )
    return "\n".join(lines) + "\n"


def seq_json(items: Sequence[SequenceItem], meta: dict) -> str:
    rows = [
        {"n": it.n, "x_n": it.x_n, "q_lb": it.q_lb, "q_ub": it.q_ub, "q_two_way": it.q_two_way}
        for it in items
    ]
    return json.dumps({"meta": meta, "rows": rows}, indent=2, sort_keys=True) + "\n"


def simulate_csv(rows: Sequence[dict]) -> str:
    lines = [SIM_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r["kind"],
                    fmt(r["lambda"]),
                    fmt(r["p"]),
                    str(r["uses"]),
                    str(r["seed"]),
                    fmt(r["estimate"]),
                    fmt(r["std_error"]),
                    fmt(r["target"]),
                    fmt(r.get("leakage")),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def simulate_json(rows: Sequence[dict], meta: dict) -> str:
    return json.dumps({"meta": meta, "rows": list(rows)}, indent=2, sort_keys=True) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[list[Optional[float]]]]:
    """Parse a CSV written by this module: (header, rows of floats/None)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        row: list[Optional[float]] = []
        for cell in ln.split(","):
            row.append(float(cell) if cell else None)
        rows.append(row)
    return header, rows


def gnuplot_script(csv_name: str, scenario: str) -> str:
    """Generic plotting companion referencing the CSV columns by position."""
    with_bounds = scenario not in ("fig6", "seq")
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 'x'",
        "set ylabel 'rate (bits/use)'",
    ]
    if scenario == "seq":
        lines.append("set logscale x")
        lines.append(
            f"plot '{csv_name}' using 2:3 with points, '' using 2:4 with points, "
            "'' using 2:5 with points"
        )
    elif with_bounds:
        lines.append(
            f"plot '{csv_name}' using 1:4 with lines, '' using 1:5 with lines, "
            "'' using 1:6 with lines, '' using 1:7 with lines"
        )
    else:
        lines.append(f"plot '{csv_name}' using 1:4 with lines, '' using 1:5 with lines")
    return "\n".join(lines) + "\n"
