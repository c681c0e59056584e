"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 invalid exponent vector,
3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

import mpmath

from . import bounds, closedform, qseries
from .cyclofield import CycNumber, embed_complex, root_of_unity
from .unitvec import ExponentVector, VectorFormatError, load_vector, search_valid

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2, 3

COMMANDS = ("validate", "compute", "oracle", "compare", "bounds", "search", "leading")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_IO):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    vector_path: str
    nmax: int = 200
    precision_bits: int = 128
    fmt: str = "json"
    out: str | None = None
    level_p: int | None = None
    level_f: int | None = None
    bound: int = 60
    allow_invalid: bool = False
    perturb_oracle: tuple[int, int] | None = None


def _perturb_target(text: str) -> tuple[int, int]:
    # "N" or "N:j": add 1 to coefficient j (default 0) of the oracle's c(N)
    n, _, j = text.partition(":")
    try:
        return int(n), int(j or 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N:j, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modunits",
        description="Product exponents of modular units of prime-power level.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the Kubert-Lang congruences",
        "compute": "c(n) from the closed formula",
        "oracle": "c(n) from the truncated q-series",
        "compare": "closed formula vs q-series oracle, exact",
        "bounds": "growth-bound chain for n <= nmax",
        "search": "valid vectors supported on the file's points",
        "leading": "leading exponents alpha (in q) and beta (in q_ell)",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--vector", required=True, metavar="PATH", help="exponent-vector JSON file")
        p.add_argument("--level-p", type=int, help="expected p (checked against the file)")
        p.add_argument("--level-f", type=int, help="expected f (checked against the file)")
        p.add_argument("--nmax", type=int, default=200)
        p.add_argument("--precision-bits", type=int, default=128)
        p.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        p.add_argument(
            "--allow-invalid",
            action="store_true",
            help="compute even if the vector fails the congruences",
        )
        if name == "search":
            p.add_argument("--bound", type=int, default=60, help="max |m_a| (<= 120)")
        if name == "compare":
            # fault-injection hook for the test harness
            p.add_argument("--perturb-oracle", type=_perturb_target, help=argparse.SUPPRESS)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        vector_path=args.vector,
        nmax=args.nmax,
        precision_bits=args.precision_bits,
        fmt=args.fmt,
        out=args.out,
        level_p=args.level_p,
        level_f=args.level_f,
        bound=getattr(args, "bound", 60),
        allow_invalid=args.allow_invalid,
        perturb_oracle=getattr(args, "perturb_oracle", None),
    )


# -- serialization -------------------------------------------------------------


def value_json(n: int, x: CycNumber, precision_bits: int) -> dict:
    z = embed_complex(x, precision_bits)
    return {
        "n": n,
        "coeffs": x.to_json(),
        "approx": {"re": float(z.real), "im": float(z.imag)},
    }


def value_from_json(level, row: dict) -> tuple[int, CycNumber]:
    return row["n"], CycNumber.from_json(level, row["coeffs"])


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _dump_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x) -> str:
    return mpmath.nstr(x, 25, min_fixed=-30, max_fixed=30)


# -- commands --------------------------------------------------------------------


def _load(cfg: RunConfig) -> ExponentVector:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            v = load_vector(cfg.vector_path)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    except OSError as exc:
        raise CliError(f"cannot read {cfg.vector_path}: {exc.strerror or exc}") from None
    except VectorFormatError as exc:
        raise CliError(f"{cfg.vector_path}: {exc}") from None
    if cfg.level_p is not None and cfg.level_p != v.level.p:
        raise CliError(f"--level-p {cfg.level_p} disagrees with file level p={v.level.p}")
    if cfg.level_f is not None and cfg.level_f != v.level.f:
        raise CliError(f"--level-f {cfg.level_f} disagrees with file level f={v.level.f}")
    if cfg.nmax < 1:
        raise CliError("--nmax must be >= 1")
    if cfg.precision_bits < 64:
        raise CliError("--precision-bits must be >= 64")
    return v


def _require_valid(cfg: RunConfig, v: ExponentVector) -> None:
    if not v.valid and not cfg.allow_invalid:
        raise CliError(f"not a modular unit: {json.dumps(v.report.to_json())}", EXIT_INVALID)


def cmd_validate(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    rep = v.report
    if cfg.fmt == "csv":
        text = _dump_csv(list(rep.to_json()), [list(rep.to_json().values())])
    else:
        text = _dump_json(rep.to_json())
    return (EXIT_OK if rep.valid else EXIT_INVALID), text


def _values_output(cfg, v, values: Sequence[CycNumber], method: str) -> str:
    rows = [value_json(n, x, cfg.precision_bits) for n, x in enumerate(values, start=1)]
    if cfg.fmt == "csv":
        return _dump_csv(
            ["n", "coeffs", "re", "im"],
            [[r["n"], " ".join(r["coeffs"]), repr(r["approx"]["re"]), repr(r["approx"]["im"])] for r in rows],
        )
    return _dump_json(
        {"level": v.level.to_json(), "method": method, "nmax": cfg.nmax, "values": rows}
    )


def cmd_compute(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    _require_valid(cfg, v)
    values = [closedform.c(v, n) for n in range(1, cfg.nmax + 1)]
    return EXIT_OK, _values_output(cfg, v, values, "closed-form")


def cmd_oracle(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    _require_valid(cfg, v)
    values = qseries.oracle_c(v, cfg.nmax, require_valid=False)
    return EXIT_OK, _values_output(cfg, v, values, "oracle")


def cmd_compare(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    _require_valid(cfg, v)
    closed = [closedform.c(v, n) for n in range(1, cfg.nmax + 1)]
    oracle = qseries.oracle_c(v, cfg.nmax, require_valid=False)
    if cfg.perturb_oracle is not None:
        n, j = cfg.perturb_oracle
        if not 1 <= n <= cfg.nmax or not 0 <= j < v.level.phi:
            raise CliError(f"perturbation target {n}:{j} out of range")
        oracle[n - 1] = oracle[n - 1] + root_of_unity(v.level, j)
    rows, mismatches = [], []
    for n, (a, b) in enumerate(zip(closed, oracle), start=1):
        eq = a == b
        rows.append({"n": n, "equal": eq})
        if not eq:
            mismatches.append({"n": n, "closed_form": a.to_json(), "oracle": b.to_json()})
    all_equal = not mismatches
    if cfg.fmt == "csv":
        text = _dump_csv(["n", "equal"], [[r["n"], r["equal"]] for r in rows])
        for m in mismatches:
            print(f"mismatch at n={m['n']}: closed={m['closed_form']} oracle={m['oracle']}", file=sys.stderr)
    else:
        text = _dump_json(
            {
                "level": v.level.to_json(),
                "nmax": cfg.nmax,
                "equal": all_equal,
                "rows": rows,
                "mismatches": mismatches,
            }
        )
    return (EXIT_OK if all_equal else EXIT_MISMATCH), text


def cmd_bounds(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    _require_valid(cfg, v)
    if cfg.nmax >= bounds.ENVELOPE_START:
        scan = bounds.envelope_scan(v, cfg.nmax, cfg.precision_bits)
        reports = scan.reports
        summary = {
            "violations": scan.violations,
            "chain_failures": scan.chain_failures,
            "max_ratio": _num(scan.max_ratio),
            "argmax": scan.argmax,
        }
    else:
        reports = [bounds.bound_chain(v, n, cfg.precision_bits) for n in range(1, cfg.nmax + 1)]
        summary = {
            "violations": [],
            "chain_failures": [r.n for r in reports if not r.chain_ok],
            "max_ratio": None,
            "argmax": None,
        }
    code = EXIT_MISMATCH if summary["chain_failures"] else EXIT_OK
    if cfg.fmt == "csv":
        rows = [
            [r.n, _num(r.abs_c), _num(r.b1), r.b2, "" if r.b3 is None else _num(r.b3), r.chain_ok]
            for r in reports
        ]
        return code, _dump_csv(["n", "|c(n)|", "b1", "b2", "b3", "chain_ok"], rows)
    rows = [
        {
            "n": r.n,
            "abs_c": _num(r.abs_c),
            "b1": _num(r.b1),
            "b2": r.b2,
            "b3": None if r.b3 is None else _num(r.b3),
            "chain_ok": r.chain_ok,
        }
        for r in reports
    ]
    return code, _dump_json({"level": v.level.to_json(), "nmax": cfg.nmax, "reports": rows, "summary": summary})


def cmd_search(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    support = list(v.entries)
    try:
        found = search_valid(v.level, support, cfg.bound)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if cfg.fmt == "csv":
        rows = [[i, a.r, a.s, m] for i, w in enumerate(found) for a, m in w.entries.items()]
        return EXIT_OK, _dump_csv(["index", "r", "s", "m"], rows)
    return EXIT_OK, _dump_json(
        {
            "level": v.level.to_json(),
            "bound": cfg.bound,
            "support": [a.to_json() for a in support],
            "vectors": [w.to_json() for w in found],
        }
    )


def cmd_leading(cfg: RunConfig) -> tuple[int, str]:
    v = _load(cfg)
    alpha, beta = closedform.leading_order(v)
    if cfg.fmt == "csv":
        return EXIT_OK, _dump_csv(["alpha", "beta"], [[str(alpha), str(beta)]])
    return EXIT_OK, _dump_json({"alpha": str(alpha), "beta": str(beta)})


DISPATCH = {
    "validate": cmd_validate,
    "compute": cmd_compute,
    "oracle": cmd_oracle,
    "compare": cmd_compare,
    "bounds": cmd_bounds,
    "search": cmd_search,
    "leading": cmd_leading,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        code, text = DISPATCH[cfg.command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
