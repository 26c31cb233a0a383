"""Machine-readable report documents for the command line surface.

Reports are deterministic: the same configuration (including seed) renders
byte-identical output. Every report embeds the convention actually used and
the seed, which is enough to reproduce it. The JSON layout is pinned by the
shipped schema file ``data/report.schema.json``; its version must be bumped
on any field change.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from importlib import resources

from .states import PhaseConvention

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation parameters echoed into every report."""

    d: int
    convention: PhaseConvention
    selection: str  # how the convention was chosen: auto, explicit or default
    seed: int | None = None
    shots: int | None = None
    fmt: str = "json"
    output: str | None = None

    def as_dict(self) -> dict:
        # The output path is deliberately not echoed: report content depends
        # only on the scientific configuration, so identical configurations
        # render byte-identical reports wherever they are written.
        return {
            "d": self.d,
            "convention": {
                "bell_sign": self.convention.bell_sign,
                "decomp_sign": self.convention.decomp_sign,
                "selection": self.selection,
            },
            "seed": self.seed,
            "shots": self.shots,
            "format": self.fmt,
        }


def check(name: str, passed: bool, detail: str = "") -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def build_report(command: str, config: RunConfig, payload: dict, checks: list[dict]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config.as_dict(),
        "payload": payload,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def render_csv(report: dict, fieldnames: list[str], rows: list[dict]) -> str:
    """CSV rendering: '# key=value' metadata lines, then header and rows."""
    buf = io.StringIO()
    config = report["config"]
    conv = config["convention"]
    meta = [
        ("schema_version", report["schema_version"]),
        ("command", report["command"]),
        ("d", config["d"]),
        ("convention", _sign_label(conv["bell_sign"]) + _sign_label(conv["decomp_sign"])),
        ("seed", config["seed"]),
        ("shots", config["shots"]),
        ("passed", str(report["passed"]).lower()),
    ]
    for key, value in meta:
        if value is not None:
            buf.write(f"# {key}={value}\n")
    buf.write(",".join(fieldnames) + "\n")
    for row in rows:
        buf.write(",".join(_csv_cell(row[f]) for f in fieldnames) + "\n")
    return buf.getvalue()


def _sign_label(sign: int) -> str:
    return "+" if sign == 1 else "-"


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def schema_text() -> str:
    """The shipped report schema, verbatim."""
    return resources.files("hdbsm.data").joinpath("report.schema.json").read_text()


def resolve_output_path(output: str | None) -> str | None:
    """Resolve a report path against the HDBSM_OUTPUT_DIR environment default."""
    if output is None:
        return None
    base = os.environ.get("HDBSM_OUTPUT_DIR", "")
    if base and not os.path.isabs(output):
        return os.path.join(base, output)
    return output


def write_report(text: str, output: str | None) -> None:
    """Write report text to the resolved path, or stdout when no path is set."""
    path = resolve_output_path(output)
    if path is None:
        print(text, end="")
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)
