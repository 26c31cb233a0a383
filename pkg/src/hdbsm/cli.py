"""Command line surface: decompose, verify, simulate and classify.

Exit codes: 0 success, 1 invariant or equivalence failure, 2 usage error.
Reports go to stdout or, with ``-o``, to a file; relative paths resolve
against the ``HDBSM_OUTPUT_DIR`` environment variable when it is set.

State files are plain text: a ``d=<n>`` header line, then one amplitude per
line as ``re im`` in flat basis order of the (d, d, d, d) composite basis
(factor 0 most significant, factor order B system, B auxiliary, A system,
A auxiliary).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import audit as audit_mod
from . import classifier as cl
from . import decomposition as dec
from . import optics
from .core import State
from .report import RunConfig, build_report, check, render_csv, render_json, write_report
from .states import (
    ALL_CONVENTIONS,
    BellIndex,
    LITERAL_CONVENTION,
    PhaseConvention,
    REFERENCE_CONVENTION,
)

MAX_SEED = 2**64 - 1

CONVENTION_CHOICES = ("auto", "literal", "reference", "++", "+-", "-+", "--")


class UsageError(Exception):
    """Invalid arguments or inputs; maps to exit code 2."""


def _resolve_convention(d: int, label: str | None) -> tuple[PhaseConvention, str]:
    if label is None:
        if d == 2:
            return LITERAL_CONVENTION, "default"
        label = "auto"
    if label == "auto":
        if d == 2:
            raise UsageError(
                "convention 'auto' is undefined at d=2 (all sign conventions "
                "coincide); omit the flag or pick one explicitly"
            )
        return dec.find_convention(d).preferred, "auto"
    if label == "literal":
        return LITERAL_CONVENTION, "explicit"
    if label == "reference":
        return REFERENCE_CONVENTION, "explicit"
    try:
        return PhaseConvention.from_label(label), "explicit"
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _check_bell_args(d: int, i: int, j: int) -> None:
    if not (0 <= i < d and 0 <= j < d):
        raise UsageError(f"bell indices ({i}, {j}) out of range for d={d}")


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= MAX_SEED:
        raise UsageError(f"seed must fit in 64 bits, got {seed}")


# ---------------------------------------------------------------------------
# payload serialization helpers
# ---------------------------------------------------------------------------


def _bell_dict(bell: BellIndex) -> dict:
    return {"i": bell.i, "j": bell.j}


def _decomposition_rows(table: dec.DecompositionTable) -> list[dict]:
    phase_ints = table.phase_ints()
    rows = []
    for key in sorted(table.entries):
        k, m, kp, mp = key
        coeff = table.entries[key]
        rows.append(
            {
                "k": k,
                "m": m,
                "k_prime": kp,
                "m_prime": mp,
                "re": coeff.real,
                "im": coeff.imag,
                "magnitude": abs(coeff),
                "phase_r": phase_ints[key],
            }
        )
    return rows


def _coincidence_rows(table: cl.CoincidenceTable, record: cl.ShotRecord | None) -> list[dict]:
    rows = []
    d = table.d
    for k in range(d):
        for m in range(d):
            for kp in range(d):
                for mp in range(d):
                    prob = float(table.probs[k, m, kp, mp])
                    count = int(record.counts[k, m, kp, mp]) if record is not None else 0
                    if prob <= 1e-12 and count == 0:
                        continue
                    row = {"k": k, "m": m, "k_prime": kp, "m_prime": mp, "probability": prob}
                    if record is not None:
                        row["count"] = count
                    rows.append(row)
    return rows


def _classification_dict(result: cl.Classification) -> dict:
    return {
        "argmax": _bell_dict(result.bell),
        "confidence": result.confidence,
        "tie": result.tie,
        "tied_with": [_bell_dict(b) for b in result.tied_with],
        "class_masses": [
            {"i": bell.i, "j": bell.j, "mass": mass}
            for bell, mass in sorted(result.class_masses.items())
        ],
    }


def _law_dict(law: dec.IndexLaw) -> dict:
    return {"s": law.s, "t": law.t, "m_law_holds": law.m_law_holds}


def _audit_dict(table_audit: audit_mod.TableAudit) -> dict:
    rows = []
    for row in table_audit.rows:
        rows.append(
            {
                "bell": _bell_dict(row.bell),
                "printed": [list(t) for t in row.printed],
                "matches": [list(t) for t in row.matches],
                "mismatches": [
                    {"printed": list(printed), "computed": list(computed)}
                    for printed, computed in row.mismatches
                ],
                "duplicates": [list(t) for t in row.duplicates],
                "missing": [list(t) for t in row.missing],
                "repeated_bob": [list(t) for t in row.repeated_bob],
                "repeated_alice": [list(t) for t in row.repeated_alice],
            }
        )
    return {
        "source": table_audit.source,
        "convention": table_audit.convention.label(),
        "total_matches": table_audit.total_matches,
        "total_mismatches": table_audit.total_mismatches,
        "clean": table_audit.clean,
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# state file format
# ---------------------------------------------------------------------------


def parse_state_file(text: str) -> State:
    """Parse the documented state file format into a (d, d, d, d) state.

    Raises:
        UsageError: malformed header, malformed amplitude line, wrong
            amplitude count, or norm off by more than 1e-6.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("d="):
        raise UsageError("state file must start with a 'd=<n>' header line")
    try:
        d = int(lines[0][2:])
    except ValueError as exc:
        raise UsageError(f"bad dimension header {lines[0]!r}") from exc
    if not 2 <= d <= 6:
        raise UsageError(f"dimension {d} outside the supported range 2..6")
    expected = d**4
    body = lines[1:]
    if len(body) != expected:
        raise UsageError(f"expected {expected} amplitude lines for d={d}, got {len(body)}")
    amps = np.empty(expected, dtype=np.complex128)
    for idx, line in enumerate(body):
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"amplitude line {idx + 2} must be 're im', got {line!r}")
        try:
            amps[idx] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise UsageError(f"bad amplitude on line {idx + 2}: {line!r}") from exc
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > 1e-6:
        raise UsageError(
            f"state is not normalized: norm {norm:.9f} deviates from 1 "
            f"by {abs(norm - 1.0):.3e} (tolerance 1e-6)"
        )
    return State((d, d, d, d), amps)


def format_state_file(state: State) -> str:
    """Render a (d, d, d, d) state in the documented file format."""
    lines = [f"d={state.radices[0]}"]
    for amp in state.amps:
        lines.append(f"{float(amp.real)!r} {float(amp.imag)!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_decompose(args) -> int:
    _check_bell_args(args.d, args.i, args.j)
    convention, selection = _resolve_convention(args.d, args.convention)
    config = RunConfig(args.d, convention, selection, fmt=args.format, output=args.output)
    table = dec.decompose(args.d, args.i, args.j, convention)

    d = args.d
    checks = [
        check(
            "support_size",
            len(table.entries) == d * d,
            f"{len(table.entries)} of {d * d} expected nonzero coefficients",
        ),
        check(
            "magnitudes_uniform",
            all(abs(abs(c) - 1 / d) <= 1e-9 for c in table.entries.values()),
            f"all coefficient magnitudes within 1e-9 of 1/{d}",
        ),
        check(
            "total_weight",
            abs(table.squared_weight() - 1.0) <= 1e-9,
            f"squared weight {table.squared_weight():.12f}",
        ),
        check(
            "aux_shift_law",
            all(mp == (m + args.j) % d for (_, m, _, mp) in table.entries),
            "m' = (m + j) mod d on every support tuple",
        ),
    ]
    payload = {"bell": _bell_dict(table.bell), "entries": _decomposition_rows(table)}
    report = build_report("decompose", config, payload, checks)
    if args.format == "csv":
        fields = ["k", "m", "k_prime", "m_prime", "re", "im", "magnitude", "phase_r"]
        text = render_csv(report, fields, payload["entries"])
    else:
        text = render_json(report)
    write_report(text, args.output)
    return 0 if report["passed"] else 1


def _cmd_verify(args) -> int:
    d = args.d
    convention, selection = _resolve_convention(d, args.convention)
    config = RunConfig(d, convention, selection, fmt=args.format, output=args.output)
    checks = []
    payload: dict = {}

    laws: dict[str, dec.IndexLaw] = {}
    law_fit_ok = True
    law_fit_detail = "affine index law fitted under every sign convention"
    try:
        for conv in ALL_CONVENTIONS:
            laws[conv.label()] = dec.fit_index_law(dec.decompose_all(d, conv))
    except dec.NoAffineLawError as exc:
        law_fit_ok = False
        law_fit_detail = str(exc)
    checks.append(check("index_law_affine", law_fit_ok, law_fit_detail))
    payload["index_laws"] = {label: _law_dict(law) for label, law in laws.items()}

    if law_fit_ok:
        checks.append(
            check(
                "aux_shift_law",
                all(law.m_law_holds for law in laws.values()),
                "m' = (m + j) mod d under every convention",
            )
        )

    reference = dec.reference_index_law(d)
    if d == 2:
        match_ok = law_fit_ok and all(
            (law.s, law.t) == (reference.s, reference.t) for law in laws.values()
        )
        checks.append(
            check(
                "reference_law",
                match_ok,
                "fitted law k' = (k + i) mod 2, m' = (m + j) mod 2",
            )
        )
        payload["matching_conventions"] = sorted(laws)
        payload["preferred_convention"] = convention.label()
    else:
        try:
            search = dec.find_convention(d)
            payload["matching_conventions"] = [c.label() for c in search.matching]
            payload["preferred_convention"] = search.preferred.label()
            checks.append(
                check(
                    "reference_law",
                    True,
                    f"s = t = {d - 1} under convention(s) "
                    + ", ".join(c.label() for c in search.matching),
                )
            )
        except dec.NoMatchingConventionError as exc:
            payload["matching_conventions"] = []
            payload["preferred_convention"] = convention.label()
            checks.append(check("reference_law", False, str(exc)))

    phase_ok = True
    phase_detail = "every coefficient phase is an exact d-th root of unity"
    phase_payload: dict = {}
    try:
        phase_law = dec.fit_phase_law(dec.decompose_all(d, convention))
        phase_payload = {
            "convention": convention.label(),
            "closed_form": list(phase_law.closed_form) if phase_law.closed_form else None,
            "entries": [
                {"k": k, "m": m, "i": i, "j": j, "r": r}
                for (k, m, i, j), r in sorted(phase_law.table.items())
            ],
        }
    except dec.PhaseNotRootOfUnityError as exc:
        phase_ok = False
        phase_detail = str(exc)
    checks.append(check("phase_root_of_unity", phase_ok, phase_detail))
    payload["phase_law"] = phase_payload

    decoding_ok = True
    decoding_detail = f"all {d**4} outcome pairs partition into {d * d} classes of {d * d}"
    try:
        decoding = cl.build_decoding_table(d, convention)
        sizes = {
            len(decoding.class_members(BellIndex(i, j))) for i in range(d) for j in range(d)
        }
        if sizes != {d * d}:
            decoding_ok = False
            decoding_detail = f"unexpected class sizes {sorted(sizes)}"
        elif law_fit_ok:
            from_law = cl.decoding_table_from_law(laws[convention.label()])
            if not (
                np.array_equal(decoding.bell_i, from_law.bell_i)
                and np.array_equal(decoding.bell_j, from_law.bell_j)
            ):
                decoding_ok = False
                decoding_detail = "decoding from supports disagrees with decoding from the law"
    except cl.CollisionError as exc:
        decoding_ok = False
        decoding_detail = str(exc)
    checks.append(check("decoding_partition", decoding_ok, decoding_detail))

    audits = []
    if d in (3, 4):
        if selection == "explicit":
            audit_conventions = [convention]
        else:
            audit_conventions = [LITERAL_CONVENTION]
            if convention != LITERAL_CONVENTION:
                audit_conventions.append(convention)
        for conv in audit_conventions:
            audits.append(_audit_dict(audit_mod.audit_reference_table(d, conv)))
    payload["audits"] = audits

    report = build_report("verify", config, payload, checks)
    if args.format == "csv":
        raise UsageError("verify reports are structured; only --format json is supported")
    write_report(render_json(report), args.output)
    return 0 if report["passed"] else 1


def _cmd_simulate(args) -> int:
    _check_bell_args(args.d, args.i, args.j)
    _check_seed(args.seed)
    if args.shots < 0:
        raise UsageError(f"shots must be >= 0, got {args.shots}")
    convention, selection = _resolve_convention(args.d, args.convention)
    config = RunConfig(
        args.d, convention, selection,
        seed=args.seed, shots=args.shots, fmt=args.format, output=args.output,
    )
    result = optics.run_experiment(args.d, args.i, args.j, args.shots, args.seed, convention)
    decoding = cl.build_decoding_table(args.d, convention)
    classification = cl.classify_table(result.probabilities, decoding)

    checks = [
        check(
            "pipeline_equivalence",
            result.equivalent,
            f"max |optics - abstract| = {result.equivalence_gap:.3e} (tolerance 1e-9)",
        ),
        check(
            "probabilities_total",
            abs(result.probabilities.total() - 1.0) <= 1e-9,
            f"total probability {result.probabilities.total():.12f}",
        ),
        check(
            "classification_correct",
            classification.bell == BellIndex(args.i, args.j) and not classification.tie,
            f"argmax class ({classification.bell.i}, {classification.bell.j})",
        ),
    ]
    if result.record is not None:
        decoded = {decoding.lookup(pair) for pair in result.record.nonzero()}
        checks.append(
            check(
                "outcomes_decode_to_input",
                decoded == {BellIndex(args.i, args.j)},
                f"{result.record.shots} outcomes over {len(result.record.nonzero())} pairs",
            )
        )

    payload = {
        "bell": _bell_dict(result.bell),
        "equivalence_gap": result.equivalence_gap,
        "classification": _classification_dict(classification),
        "table": _coincidence_rows(result.probabilities, result.record),
    }
    report = build_report("simulate", config, payload, checks)
    if args.format == "csv":
        fields = ["k", "m", "k_prime", "m_prime", "probability"]
        if result.record is not None:
            fields.append("count")
        text = render_csv(report, fields, payload["table"])
    else:
        text = render_json(report)
    write_report(text, args.output)
    return 0 if report["passed"] else 1


def _cmd_classify(args) -> int:
    if not 0.0 <= args.noise <= 1.0:
        raise UsageError(f"noise weight must be in [0, 1], got {args.noise}")
    try:
        with open(args.state_file) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read state file: {exc}") from exc
    state = parse_state_file(text)
    d = state.radices[0]
    convention, selection = _resolve_convention(d, args.convention)
    config = RunConfig(d, convention, selection, fmt=args.format, output=args.output)

    table = cl.coincidence_probabilities(state, convention)
    if args.noise > 0.0:
        table = cl.mix_with_white_noise(table, args.noise)
    decoding = cl.build_decoding_table(d, convention)
    classification = cl.classify_table(table, decoding)

    checks = [
        check(
            "probabilities_total",
            abs(table.total() - 1.0) <= 1e-9,
            f"total probability {table.total():.12f}",
        ),
    ]
    payload = {
        "state_file": args.state_file,
        "noise": args.noise,
        "classification": _classification_dict(classification),
    }
    report = build_report("classify", config, payload, checks)
    if args.format == "csv":
        text = render_csv(
            report, ["i", "j", "mass"], payload["classification"]["class_masses"]
        )
    else:
        text = render_json(report)
    write_report(text, args.output)
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, with_d: bool = True) -> None:
    if with_d:
        sub.add_argument(
            "-d", type=int, required=True, choices=(2, 3, 4, 5, 6),
            help="dimension of the system and auxiliary degrees of freedom",
        )
    sub.add_argument(
        "--convention", choices=CONVENTION_CHOICES, default=None,
        help="phase convention: bell/decomposition exponent signs "
        "(e.g. '-+'; use --convention=-+), 'literal' (++), 'reference' (-+), "
        "or 'auto' to pick the convention matching the reference law "
        "(default: auto for d >= 3, literal for d = 2)",
    )
    sub.add_argument(
        "--format", choices=("json", "csv"), default="json", help="report format",
    )
    sub.add_argument(
        "-o", "--output", default=None,
        help="report file path (default stdout); relative paths resolve "
        "against HDBSM_OUTPUT_DIR when set",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdbsm",
        description="High-dimensional Bell state measurement: decomposition "
        "tables, law verification, optics simulation and classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="expand one hyperentangled state")
    _add_common(p)
    p.add_argument("-i", type=int, required=True, help="bell phase index")
    p.add_argument("-j", type=int, required=True, help="bell shift index")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("verify", help="fit the index and phase laws and audit the reference tables")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="run the optics pipeline end to end")
    _add_common(p)
    p.add_argument("-i", type=int, required=True, help="bell phase index")
    p.add_argument("-j", type=int, required=True, help="bell shift index")
    p.add_argument("--shots", type=int, default=0, help="samples to draw (0: theory only)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (64-bit)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("classify", help="classify a state from a file")
    _add_common(p, with_d=False)
    p.add_argument("state_file", help="state file ('d=<n>' header, then 're im' lines)")
    p.add_argument(
        "--noise", type=float, default=0.0,
        help="white-noise weight q in [0, 1] admixed at the probability "
        "level: (1-q) * state + q * uniform",
    )
    p.set_defaults(func=_cmd_classify)

    return parser


_STRUCTURAL_ERRORS = (
    dec.NoAffineLawError,
    dec.NoMatchingConventionError,
    dec.PhaseNotRootOfUnityError,
    cl.CollisionError,
)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _STRUCTURAL_ERRORS as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
