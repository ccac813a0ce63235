"""Command-line interface.

Subcommands:
  compute  per-dimension closed-form QFIM entries, eigenvalues, variance
           bounds, and an attainability flag
  figure   CSV data for the three summary curves (input vs scaled bound vs
           cloned output; UQCM vs PQCM diagonals; total variances)
  verify   run the built-in verification suite and emit a JSON report

Exit codes: 0 success, 1 runtime/numerical failure, 2 usage error,
3 verification failure.

Options may also be supplied through a key=value config file (--config);
explicit flags win over file values.  CSV output uses a header row, 12
significant digits, and LF line endings, so fixed inputs give byte-identical
files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .channels import eta_pqcm, eta_uqcm
from .crb import attainability_closed, total_variance_bound
from .qfim import (
    CLOSED_FORM_DMAX,
    qfim_pqcm_entries,
    qfim_pure_entries,
    qfim_shrink_entries,
    qfim_uqcm_entries,
    spectral_output,
)
from .states import PhaseVector, basis_derivatives
from .verify import DEFAULT_SEED, CheckResult, run_verification

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3

# largest dimension for which the attainability matrix is evaluated densely;
# beyond it the flag reports the analytic zero result for this state family
DENSE_DMAX = 64

ATTAINABILITY_TOL = 1e-10

MACHINES = ("pure", "uqcm", "pqcm", "shrink")


class UsageError(Exception):
    pass


@dataclass
class SweepConfig:
    machine: str
    eta: float | None = None
    d_min: int = 2
    d_max: int = 20
    phases: list[float] | None = None
    seed: int = DEFAULT_SEED
    fd_step: float = 1e-5
    out: str | None = None
    fmt: str = "csv"
    tolerances: dict[str, float] = field(default_factory=dict)

    def validate(self) -> None:
        if self.machine not in MACHINES:
            raise UsageError(f"--machine must be one of {', '.join(MACHINES)}")
        if self.machine == "shrink":
            if self.eta is None:
                raise UsageError("machine=shrink requires --eta in (0, 1]")
            if not 0.0 < self.eta <= 1.0:
                raise UsageError(f"--eta must lie in (0, 1], got {self.eta}")
        elif self.eta is not None:
            raise UsageError("--eta is only meaningful with machine=shrink")
        if not 2 <= self.d_min <= self.d_max:
            raise UsageError("--dmin/--dmax must satisfy 2 <= dmin <= dmax")
        if self.d_max > CLOSED_FORM_DMAX:
            raise UsageError(f"--dmax must not exceed {CLOSED_FORM_DMAX}")
        if self.fmt not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.phases is not None:
            if self.d_min != self.d_max:
                raise UsageError("--phases requires dmin == dmax")
            if len(self.phases) != self.d_min - 1:
                raise UsageError(
                    f"--phases needs exactly {self.d_min - 1} values for d={self.d_min}"
                )

    def eta_for(self, d: int) -> float:
        if self.machine == "pure":
            return 1.0
        if self.machine == "uqcm":
            return eta_uqcm(d)
        if self.machine == "pqcm":
            return eta_pqcm(d)
        return float(self.eta)

    def entries_for(self, d: int) -> tuple[float, float]:
        if self.machine == "pure":
            return qfim_pure_entries(d)
        if self.machine == "uqcm":
            return qfim_uqcm_entries(d)
        if self.machine == "pqcm":
            return qfim_pqcm_entries(d)
        return qfim_shrink_entries(d, self.eta)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _csv_text(header: list[str], rows: list[list], comments: list[str] | None = None) -> str:
    lines = list(comments or [])
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _attainable(d: int, eta: float, p: PhaseVector) -> bool:
    if d > DENSE_DMAX:
        return True  # entries vanish identically for the equatorial family
    a = attainability_closed(spectral_output(p, eta), basis_derivatives(p))
    return bool(np.abs(a).max() <= ATTAINABILITY_TOL)


def cmd_compute(cfg: SweepConfig) -> int:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    header = [
        "d", "eta", "f_diag", "f_offdiag",
        "lambda1", "lambda2", "total_variance_min", "attainable",
    ]
    rows = []
    for d in range(cfg.d_min, cfg.d_max + 1):
        eta = cfg.eta_for(d)
        fdiag, foff = cfg.entries_for(d)
        lam1 = fdiag + (d - 2) * foff
        lam2 = fdiag - foff if d > 2 else float("nan")
        if d <= DENSE_DMAX:
            var_min = total_variance_bound(d, eta).total_variance_min
        else:
            var_min = (d - 1) * (2.0 + (d - 2) * eta) / (2.0 * eta**2)
        if cfg.phases is not None:
            flag = _attainable(d, eta, PhaseVector(d, np.asarray(cfg.phases)))
        elif d <= DENSE_DMAX:
            flag = _attainable(d, eta, PhaseVector.random(d, rng))
        else:
            flag = True  # entries vanish identically for the equatorial family
        rows.append([d, eta, fdiag, foff, lam1, lam2, var_min, flag])

    if cfg.fmt == "json":
        def jsonable(v):
            if isinstance(v, float) and np.isnan(v):
                return None  # keep the output strict JSON
            return v

        payload = {
            "seed": None if cfg.phases is not None else cfg.seed,
            "rows": [{k: jsonable(v) for k, v in zip(header, row)} for row in rows],
        }
        text = json.dumps(payload, indent=2, default=float) + "\n"
    else:
        comments = (
            [f"# phases={','.join(_fmt(v) for v in cfg.phases)}"]
            if cfg.phases is not None
            else [f"# seed={cfg.seed}"]
        )
        text = _csv_text(header, rows, comments)
    _emit(text, cfg.out)
    return EXIT_OK


def cmd_figure(which: int, d_max: int, out: str | None) -> int:
    if which not in (1, 2, 3):
        raise UsageError("figure selector must be 1, 2, or 3")
    if d_max < 3:
        raise UsageError("--dmax must be at least 3 for figure data")
    dims = range(2, d_max + 1)
    if which == 1:
        header = ["d", "f_in_diag", "scaled_bound", "f_out_diag"]
        rows = [
            [d, qfim_pure_entries(d)[0], eta_uqcm(d) * qfim_pure_entries(d)[0], qfim_uqcm_entries(d)[0]]
            for d in dims
        ]
    elif which == 2:
        header = ["d", "f_uqcm_diag", "f_pqcm_diag"]
        rows = [[d, qfim_uqcm_entries(d)[0], qfim_pqcm_entries(d)[0]] for d in dims]
    else:
        header = ["d", "e_in", "e_uqcm", "e_pqcm"]
        rows = [
            [
                d,
                total_variance_bound(d, 1.0).total_variance_min,
                total_variance_bound(d, eta_uqcm(d)).total_variance_min,
                total_variance_bound(d, eta_pqcm(d)).total_variance_min,
            ]
            for d in dims
        ]
    _emit(_csv_text(header, rows), out)
    return EXIT_OK


def cmd_verify(cfg: SweepConfig, mutate: bool = False) -> int:
    if cfg.d_max < 2:
        raise UsageError("--dmax must be at least 2")
    if cfg.fd_step <= 0:
        raise UsageError("--fd-step must be positive")

    def progress(res: CheckResult) -> None:
        mark = "pass" if res.passed else "FAIL"
        print(
            f"[{mark}] {res.name}: max_error={res.max_error:.3e} tolerance={res.tolerance:.1e}",
            file=sys.stderr,
        )

    results = run_verification(
        dmax_full=cfg.d_max, seed=cfg.seed, fd_step=cfg.fd_step, mutate=mutate, progress=progress
    )
    if cfg.tolerances:
        results = [
            CheckResult(r.name, r.max_error, cfg.tolerances.get(r.name, r.tolerance))
            for r in results
        ]
    report = [r.as_dict() for r in results]
    _emit(json.dumps(report, indent=2) + "\n", cfg.out)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed", file=sys.stderr)
    return EXIT_OK if n_fail == 0 else EXIT_VERIFY


def _parse_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            values[key.strip().lower().replace("-", "_")] = val.strip()
    return values


def _resolve(args_value, file_values: dict[str, str], key: str, cast, default):
    if args_value is not None:
        return args_value
    if key in file_values:
        raw = file_values[key]
        try:
            return cast(raw)
        except ValueError as exc:
            raise UsageError(f"config value {key}={raw!r}: {exc}") from exc
    return default


def _parse_phases(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"--phases expects comma-separated numbers: {exc}") from exc


def _tolerance_overrides(file_values: dict[str, str]) -> dict[str, float]:
    out = {}
    for key, raw in file_values.items():
        if key.startswith("tol_"):
            out[key[4:]] = float(raw)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseclone",
        description="Multi-phase quantum Fisher information for cloned equatorial qudits.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="closed-form QFIM sweep over dimensions")
    pc.add_argument("--machine", choices=MACHINES)
    pc.add_argument("--eta", type=float)
    pc.add_argument("--dmin", type=int)
    pc.add_argument("--dmax", type=int)
    pc.add_argument("--phases", type=str, help="comma-separated phases (requires dmin==dmax)")
    pc.add_argument("--seed", type=int)
    pc.add_argument("--out", type=str)
    pc.add_argument("--format", dest="fmt", choices=("csv", "json"))
    pc.add_argument("--config", type=str)

    pf = sub.add_parser("figure", help="CSV data for one of the three summary figures")
    pf.add_argument("which", type=int, choices=(1, 2, 3))
    pf.add_argument("--dmax", type=int)
    pf.add_argument("--out", type=str)
    pf.add_argument("--config", type=str)

    pv = sub.add_parser("verify", help="run the verification suite, emit a JSON report")
    pv.add_argument("--dmax", type=int, help="cap for full-unitary checks (default 8)")
    pv.add_argument("--seed", type=int)
    pv.add_argument("--fd-step", dest="fd_step", type=float)
    pv.add_argument("--out", type=str)
    pv.add_argument("--config", type=str)
    pv.add_argument(
        "--mutate",
        action="store_true",
        help="inject a deliberate shrinking-factor error (self-test; must fail)",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        file_values = _parse_config_file(args.config) if getattr(args, "config", None) else {}

        if args.command == "compute":
            phases_raw = _resolve(args.phases, file_values, "phases", str, None)
            cfg = SweepConfig(
                machine=_resolve(args.machine, file_values, "machine", str, None) or "",
                eta=_resolve(args.eta, file_values, "eta", float, None),
                d_min=_resolve(args.dmin, file_values, "dmin", int, 2),
                d_max=_resolve(args.dmax, file_values, "dmax", int, 20),
                phases=_parse_phases(phases_raw) if phases_raw is not None else None,
                seed=_resolve(args.seed, file_values, "seed", int, DEFAULT_SEED),
                out=_resolve(args.out, file_values, "out", str, None),
                fmt=_resolve(args.fmt, file_values, "format", str, "csv"),
            )
            if not cfg.machine:
                raise UsageError("--machine is required (pure, uqcm, pqcm, or shrink)")
            return cmd_compute(cfg)

        if args.command == "figure":
            return cmd_figure(
                args.which,
                _resolve(args.dmax, file_values, "dmax", int, 20),
                _resolve(args.out, file_values, "out", str, None),
            )

        cfg = SweepConfig(
            machine="pure",
            d_max=_resolve(args.dmax, file_values, "dmax", int, 8),
            seed=_resolve(args.seed, file_values, "seed", int, DEFAULT_SEED),
            fd_step=_resolve(args.fd_step, file_values, "fd_step", float, 1e-5),
            out=_resolve(args.out, file_values, "out", str, None),
            tolerances=_tolerance_overrides(file_values),
        )
        return cmd_verify(cfg, mutate=args.mutate)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code 1
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
