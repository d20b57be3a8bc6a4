"""Command-line front end: predict, verify, spectrum, bridge and transfer.

Exit codes: 0 success, 1 a check failed, 2 invalid arguments (nothing is
written in that case). JSON output carries a schema tag, keeps a fixed key
order and writes floats in shortest round-trip form; complex numbers are
written as [re, im].
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from math import pi

import numpy as np

from . import bridge, spectral
from .link_rep import sector_dimension
from .selection_rules import predicted_spectrum
from .transfer import MAX_TRANSFER_SITES, double_row_matrix, inversion_scalar
from .xx_chain import MAX_SPIN_SITES

SCHEMA = "tl-polymer/1"
DEFAULT_TRANSFER_U = (0.1, 0.3, 0.7)
INVERSION_TOL = 1e-10
BRIDGE_TOL = 1e-12
MAX_PREDICT_SITES = 40


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    d: int | None = None
    n_max: int | None = None
    u: float | None = None
    q: complex = 1j
    tol: float = spectral.DEFAULT_TOL
    out: str | None = None
    fmt: str = "json"


def _number(x):
    """JSON-ready scalar: real floats stay floats, complex becomes [re, im]."""
    if isinstance(x, (complex, np.complexfloating)):
        return [_number(float(x.real)), _number(float(x.imag))]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return 0.0 if x == 0 else x


def _spectral_value(v: complex, threshold: float):
    return _number(v.real) if abs(v.imag) <= threshold else _number(complex(v))


def _parse_q(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--q expects 're,im', got {text!r}") from exc
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"--q expects 're,im', got {text!r}")
    q = complex(parts[0], parts[1])
    if q == 0:
        raise argparse.ArgumentTypeError("q must be nonzero")
    return q


def _merge(flag, positional, name: str):
    if flag is not None and positional is not None and flag != positional:
        raise UsageError(f"conflicting values for {name}: {positional} and {flag}")
    return flag if flag is not None else positional


def _require_sector(n, d) -> None:
    if n is None or d is None:
        raise UsageError("both N and d are required")
    if n < 1 or d < 0 or d > n or (n - d) % 2:
        raise UsageError(f"no sector with N={n}, d={d}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tlpolymer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, positional=("n", "d")):
        for name in positional:
            p.add_argument(f"pos_{name}", nargs="?", type=int, metavar=name.upper() if name == "n" else name)
        p.add_argument("--n", type=int, dest="n")
        if "d" in positional:
            p.add_argument("--d", type=int, dest="d")
        p.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
        p.add_argument("--out", default=None)

    p = sub.add_parser("predict", help="predicted spectrum of H_N on sector d")
    common(p)

    p = sub.add_parser("verify", help="compare predicted and observed spectra for all N <= n_max")
    p.add_argument("pos_n_max", nargs="?", type=int, metavar="N_MAX")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--tol", type=float, default=spectral.DEFAULT_TOL)
    p.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    p.add_argument("--out", default=None)

    p = sub.add_parser("spectrum", help="clustered spectrum of H_N, or of D_N(u) with --u")
    common(p)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--tol", type=float, default=spectral.DEFAULT_TOL)

    p = sub.add_parser("bridge", help="certificates for the link-to-spin map")
    common(p)
    p.add_argument("--q", type=_parse_q, default=1j)

    p = sub.add_parser("transfer", help="inversion-identity check for D_N(u)")
    common(p, positional=("n",))
    p.add_argument("--u", type=float, default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, fmt=args.fmt, out=args.out)
    if args.command == "verify":
        cfg.n_max = _merge(args.n_max, args.pos_n_max, "N_max")
        if cfg.n_max is None:
            raise UsageError("N_max is required")
        if not 2 <= cfg.n_max <= spectral.MAX_SUITE_SITES:
            raise UsageError(f"N_max must lie in 2..{spectral.MAX_SUITE_SITES}")
    else:
        cfg.n = _merge(args.n, args.pos_n, "N")
        if args.command == "transfer":
            if cfg.n is None:
                raise UsageError("N is required")
            if not 1 <= cfg.n <= MAX_TRANSFER_SITES:
                raise UsageError(f"N must lie in 1..{MAX_TRANSFER_SITES}")
        else:
            cfg.d = _merge(args.d, args.pos_d, "d")
            _require_sector(cfg.n, cfg.d)
    if hasattr(args, "tol"):
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        cfg.tol = args.tol
    if hasattr(args, "u"):
        cfg.u = args.u
    if hasattr(args, "q"):
        cfg.q = args.q
    if cfg.command == "predict" and cfg.n > MAX_PREDICT_SITES:
        raise UsageError(f"N must be at most {MAX_PREDICT_SITES}")
    if cfg.command == "spectrum":
        limit = MAX_TRANSFER_SITES if cfg.u is not None else spectral.MAX_SUITE_SITES
        if cfg.n > limit:
            raise UsageError(f"N must be at most {limit}")
    if cfg.command == "bridge" and cfg.n > MAX_SPIN_SITES:
        raise UsageError(f"N must be at most {MAX_SPIN_SITES}")
    return cfg


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def cmd_predict(cfg: RunConfig) -> tuple[dict, tuple[list[str], list[list]], int]:
    entries = []
    for label, mult in predicted_spectrum(cfg.n, cfg.d).items():
        entries.append(
            {
                "label": {
                    "K_plus": sorted(label.k_plus),
                    "K_minus": sorted(label.k_minus),
                    "delta": label.delta,
                    "m": label.m,
                },
                "value": _number(label.value),
                "multiplicity": mult,
            }
        )
    doc = {"schema": SCHEMA, "command": "predict", "N": cfg.n, "d": cfg.d, "entries": entries}
    rows = [
        [
            " ".join(map(str, e["label"]["K_plus"])),
            " ".join(map(str, e["label"]["K_minus"])),
            e["label"]["delta"],
            e["label"]["m"],
            e["value"],
            e["multiplicity"],
        ]
        for e in entries
    ]
    return doc, (["K_plus", "K_minus", "delta", "m", "value", "multiplicity"], rows), 0


def _report_dict(rep: spectral.VerificationReport) -> dict:
    values = np.array([v for v, _ in rep.observed.entries])
    threshold = spectral.cluster_threshold(values, rep.observed.tolerance)
    return {
        "N": rep.n_sites,
        "d": rep.defects,
        "status": rep.status,
        "dimension": sector_dimension(rep.n_sites, rep.defects),
        "observed": [
            {"value": _spectral_value(v, threshold), "multiplicity": m} for v, m in rep.observed.entries
        ],
        "failures": [
            {
                "value": None if np.isnan(f.value) else _number(f.value),
                "predicted": f.predicted,
                "observed": f.observed,
                "diagnostic": "split cluster" if f.observed < f.predicted else "unmatched cluster",
            }
            for f in rep.failures
        ],
    }


def cmd_verify(cfg: RunConfig):
    result = spectral.run_suite(cfg.n_max, cfg.tol)
    doc = {
        "schema": SCHEMA,
        "command": "verify",
        "n_max": cfg.n_max,
        "tol": _number(cfg.tol),
        "summary": result.summary(),
        "sectors": [_report_dict(r) for r in result.reports],
        "errors": [{"N": n, "d": d, "message": msg} for n, d, msg in result.errors],
    }
    rows = [
        [r.n_sites, r.defects, r.status, len(r.observed.entries), len(r.failures)] for r in result.reports
    ]
    rows += [[n, d, "error", 0, 0] for n, d, _ in result.errors]
    return doc, (["N", "d", "status", "clusters", "failures"], rows), 0 if result.passed else 1


def cmd_spectrum(cfg: RunConfig):
    if cfg.u is not None:
        from .transfer import double_row_sector

        block = double_row_sector(cfg.n, cfg.u, cfg.d)
        operator = "transfer"
    elif cfg.n == 1:
        block = np.zeros((1, 1))
        operator = "hamiltonian"
    else:
        from .link_rep import rho_sector_block
        from .transfer import hamiltonian_element

        block = rho_sector_block(hamiltonian_element(cfg.n), cfg.n, cfg.d)
        operator = "hamiltonian"
    spectrum = spectral.clustered_spectrum(block, cfg.tol)
    values = np.array([v for v, _ in spectrum.entries])
    threshold = spectral.cluster_threshold(values, cfg.tol)
    entries = [{"value": _spectral_value(v, threshold), "multiplicity": m} for v, m in spectrum.entries]
    doc = {
        "schema": SCHEMA,
        "command": "spectrum",
        "operator": operator,
        "N": cfg.n,
        "d": cfg.d,
        "u": None if cfg.u is None else _number(cfg.u),
        "tol": _number(cfg.tol),
        "entries": entries,
    }
    rows = [[e["value"], e["multiplicity"]] for e in entries]
    return doc, (["value", "multiplicity"], rows), 0


def cmd_bridge(cfg: RunConfig):
    n, d, q = cfg.n, cfg.d, cfg.q
    n_bub = (n - d) // 2
    w = bridge.w_of_q(q)
    inter = bridge.intertwine_residual(n, d, q)
    s_plus, s_plus2 = bridge.kernel_residuals(n, d, q)
    p_tilde = bridge.injectivity_matrix(n, d, q)
    triangular = bridge.is_lower_triangular(p_tilde, BRIDGE_TOL)
    diagonal = bool(np.allclose(np.diag(p_tilde), w**n_bub, atol=BRIDGE_TOL, rtol=0))
    at_i = abs(q - 1j) < 1e-14
    rank, target = bridge.completion_rank(n, d, q) if at_i else (None, None)
    checks = [inter < BRIDGE_TOL, s_plus < BRIDGE_TOL, triangular, diagonal]
    if s_plus2 is not None:
        checks.append(s_plus2 < BRIDGE_TOL)
    if rank is not None:
        checks.append(rank == target)
    ok = all(checks)
    doc = {
        "schema": SCHEMA,
        "command": "bridge",
        "N": n,
        "d": d,
        "q": _number(complex(q)),
        "w": _number(complex(w)),
        "intertwine_residual": _number(inter),
        "s_plus_residual": _number(s_plus),
        "s_plus2_residual": None if s_plus2 is None else _number(s_plus2),
        "triangular": triangular,
        "diagonal_is_w_power": diagonal,
        "completion_rank": rank,
        "sector_dimension": target,
        "pass": ok,
    }
    rows = [[k, json.dumps(v)] for k, v in doc.items() if k not in ("schema", "command")]
    return doc, (["key", "value"], rows), 0 if ok else 1


def inversion_residual(n: int, u: float) -> float:
    """Infinity norm of rho(D_N(u)) rho(D_N(u + pi/2)) - s(u) I."""
    prod = double_row_matrix(n, u) @ double_row_matrix(n, u + pi / 2)
    diff = prod - inversion_scalar(n, u) * np.eye(prod.shape[0])
    return float(np.linalg.norm(diff, np.inf))


def cmd_transfer(cfg: RunConfig):
    us = DEFAULT_TRANSFER_U if cfg.u is None else (cfg.u,)
    checks = []
    for u in us:
        res = inversion_residual(cfg.n, u)
        checks.append(
            {
                "u": _number(u),
                "scalar": _number(inversion_scalar(cfg.n, u)),
                "residual": _number(res),
                "pass": res < INVERSION_TOL,
            }
        )
    ok = all(c["pass"] for c in checks)
    doc = {"schema": SCHEMA, "command": "transfer", "N": cfg.n, "checks": checks, "pass": ok}
    rows = [[c["u"], c["scalar"], c["residual"], c["pass"]] for c in checks]
    return doc, (["u", "scalar", "residual", "pass"], rows), 0 if ok else 1


COMMANDS = {
    "predict": cmd_predict,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "bridge": cmd_bridge,
    "transfer": cmd_transfer,
}


def render(doc: dict, table: tuple[list[str], list[list]], fmt: str) -> str:
    if fmt == "csv":
        return _csv_text(*table)
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
    except UsageError as exc:
        print(f"tlpolymer {args.command}: error: {exc}", file=sys.stderr)
        return 2
    doc, table, code = COMMANDS[cfg.command](cfg)
    text = render(doc, table, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
