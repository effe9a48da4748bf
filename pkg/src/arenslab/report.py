"""Rendering reports as canonical JSON or as text."""
from __future__ import annotations

import json


def to_json_text(report: dict) -> str:
    # sort_keys plus fixed separators keep the output byte-stable
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _short(value, limit=100):
    text = json.dumps(value, sort_keys=True, separators=(",", ":"))
    return text if len(text) <= limit else text[: limit - 3] + "..."


def to_text(report: dict) -> str:
    lines = [f"scenario {report['scenario']}  seed {report['seed']}  samples {report['samples']}"]
    for rec in report["checks"]:
        mark = "ok " if rec["ok"] else "BAD"
        line = f"[{mark}] #{rec['index']:<2} {rec['label']:<34} {rec['status']:<17} cases={rec['cases']}"
        if rec["expect"] != "pass":
            line += f"  (expected {rec['expect']})"
        if "seconds" in rec:
            line += f"  {rec['seconds']}s"
        lines.append(line)
        if rec["witness"] is not None:
            lines.append(f"      witness: {_short(rec['witness'])}")
        values = rec["detail"].get("values") if isinstance(rec["detail"], dict) else None
        if values:
            for label, v in sorted(values.items()):
                lines.append(f"      AR^{label} = {_short(v)}")
    c = report["counts"]
    lines.append(
        f"{c['ok']}/{c['total']} checks as expected "
        f"(pass {c['pass']}, fail {c['fail']}, not-representable {c['not-representable']}, error {c['error']})"
        f"  => {report['status'].upper()}"
    )
    return "\n".join(lines) + "\n"
