"""Command-line harness: single solves, published-table runs and property suites.

Examples
--------
    transmission-bie solve --geometry kite --formulation sk15 --omega 8 --eps2 2 --n 64
    transmission-bie table 3 --max-omega 32 --out table3.csv
    transmission-bie properties --suite calderon --out props.jsonl
"""

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from .formulations import FORMULATIONS, TransmissionConfig
from .geometry import CURVES
from .gmres import ConvergenceError
from .operators import WavenumberError
from .postprocess import DEFAULT_DIRECTION_COUNT, MIN_DIRECTION_COUNT
from .properties import SUITES, run_properties
from .published import COLUMNS, TABLE_DIRECTIONS, TABLES, table_rows
from .solver import solve

CONFIG_FIELDS = {f.name for f in fields(TransmissionConfig)}
ITERATION_SLACK = 0.2
ITERATION_MIN_SLACK = 3
ERROR_FACTOR = 10.0
ERROR_FLOOR = 1e-6


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _add_physics(p):
    p.add_argument("--config", type=Path, help="JSON file with configuration fields; flags override it")
    p.add_argument("--geometry", choices=sorted(CURVES))
    p.add_argument("--formulation", choices=FORMULATIONS)
    p.add_argument("--omega", type=float)
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--polarization", choices=("E", "H"))
    p.add_argument("--nu", type=float, help="contrast; 1 selects E, eps1/eps2 selects H polarization")
    p.add_argument("--kappa1", type=_complex, help="regularizing wavenumber, e.g. 12+4j")
    p.add_argument("--n", type=int, help="half node count (2n nodes, 4n unknowns)")
    p.add_argument("--unknowns", type=int, help="total unknowns, a multiple of 4 (sets n)")
    p.add_argument("--tol", type=float)
    p.add_argument("--direction", type=float, nargs=2, metavar=("D1", "D2"), help="unit incidence direction")


def _load_config_file(path):
    if path is None:
        return {}
    data = json.loads(Path(path).read_text())
    unknown = set(data) - CONFIG_FIELDS
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    if isinstance(data.get("kappa1"), str):
        data["kappa1"] = _complex(data["kappa1"])
    if data.get("direction") is not None:
        data["direction"] = tuple(data["direction"])
    return data


def resolve_config(args):
    """Merge a config file with command-line flags (flags win)."""
    values = _load_config_file(getattr(args, "config", None))
    for name in CONFIG_FIELDS:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = tuple(v) if name == "direction" else v
    if getattr(args, "unknowns", None) is not None:
        if args.unknowns % 4:
            raise ValueError("--unknowns must be a multiple of 4")
        if args.n is not None and args.n != args.unknowns // 4:
            raise ValueError("--n and --unknowns disagree")
        values["n"] = args.unknowns // 4
    nu = getattr(args, "nu", None)
    if nu is not None:
        eps1, eps2 = values.get("eps1", 1.0), values.get("eps2", 2.0)
        matches = [p for p, v in (("E", 1.0), ("H", eps1 / eps2)) if np.isclose(nu, v, rtol=1e-12)]
        if not matches:
            raise ValueError(f"--nu {nu} is neither 1 nor eps1/eps2 = {eps1 / eps2:g}")
        pol = values.get("polarization")
        if pol is None:
            values["polarization"] = matches[0]
        elif pol not in matches:
            raise ValueError(f"--nu {nu} contradicts polarization {pol}")
    return TransmissionConfig(**values)


def config_to_json(config):
    d = asdict(config)
    d["kappa1"] = None if config.kappa1 is None else str(complex(config.kappa1))
    d["direction"] = [float(v) for v in config.incident_direction]
    d["nu"] = config.nu
    d["unknowns"] = config.unknowns
    return d


def _cmd_solve(args):
    config = resolve_config(args)
    try:
        report = solve(config, directions=args.directions, with_reference=not args.no_reference, maxiter=args.maxiter)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for j, r in enumerate(exc.report.residuals):
            print(f"  iteration {j:4d}  residual {r:.3e}", file=sys.stderr)
        return 2
    summary = report.summary()
    for key, value in summary.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        print(f"{key:>16}: {value}")
    if args.out is not None:
        report.far_field.to_csv(args.out)
        print(f"{'far field':>16}: {args.out}")
    return 0


def _row_config(row, formulation):
    return TransmissionConfig(
        geometry=row.geometry,
        omega=float(row.omega),
        eps1=row.eps1,
        eps2=float(row.eps2),
        polarization=row.polarization,
        formulation=formulation,
        n=row.n,
        tol=row.tol,
        direction=TABLE_DIRECTIONS[row.geometry],
    )


def compare(observed_iters, observed_err, published):
    """Pass flag for one cell: iterations within max(3, 20%), error within 10x (or 1e-6)."""
    iters, err = published
    ok = abs(observed_iters - iters) <= max(ITERATION_MIN_SLACK, ITERATION_SLACK * iters)
    if err is not None and observed_err is not None:
        ok = ok and observed_err <= max(ERROR_FACTOR * err, ERROR_FLOOR)
    return bool(ok)


def table_header(table):
    cols = ["table", "row", "geometry", "omega", "eps1", "eps2", "polarization", "unknowns", "tol"]
    names = (("sk14",) if table in (6, 7) else ()) + COLUMNS
    for f in names:
        cols += [f"{f}_iters", f"{f}_err", f"{f}_pub_iters", f"{f}_pub_err", f"{f}_pass", f"{f}_status"]
    return cols, names


def run_table(table, max_omega=None, directions=DEFAULT_DIRECTION_COUNT, formulations=None, log=None):
    """Run every published row of ``table`` and return ``(header, rows, configs)``.

    A formulation that fails on a row is recorded with its status and the
    run continues.
    """
    cols, names = table_header(table)
    if formulations is not None:
        names = tuple(f for f in names if f in formulations)
    out_rows, configs = [], []
    for index, row in enumerate(table_rows(table, max_omega)):
        record = dict.fromkeys(cols, "")
        record.update(
            table=table, row=index, geometry=row.geometry, omega=row.omega, eps1=row.eps1,
            eps2=row.eps2, polarization=row.polarization, unknowns=row.unknowns, tol=row.tol,
        )
        for f in names:
            config = _row_config(row, f)
            configs.append(config)
            pub = row.values[f]
            record[f"{f}_pub_iters"], record[f"{f}_pub_err"] = pub[0], "" if pub[1] is None else pub[1]
            t0 = time.perf_counter()
            try:
                report = solve(config, directions=directions, with_reference=pub[1] is not None)
            except (ConvergenceError, MemoryError, np.linalg.LinAlgError) as exc:
                record[f"{f}_status"] = f"failed: {exc}"
                record[f"{f}_pass"] = False
                continue
            record[f"{f}_iters"] = report.iterations
            record[f"{f}_err"] = "" if report.error is None else f"{report.error:.3e}"
            record[f"{f}_pass"] = compare(report.iterations, report.error, pub)
            record[f"{f}_status"] = "ok"
            if log is not None:
                err = "-" if report.error is None else f"{report.error:.2e}"
                print(
                    f"table {table} row {index} {row.geometry} omega={row.omega:g} {f}: "
                    f"{report.iterations} its (published {pub[0]}), err {err}, {time.perf_counter() - t0:.1f}s",
                    file=log,
                )
        out_rows.append(record)
    return cols, out_rows, configs


def write_table_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=header)
        w.writeheader()
        for r in rows:
            w.writerow(r)


def _cmd_table(args):
    out = args.out or Path(f"table{args.table}.csv")
    header, rows, configs = run_table(args.table, args.max_omega, args.directions, args.formulations, log=sys.stderr)
    write_table_csv(out, header, rows)
    archive = {
        "table": args.table,
        "max_omega": args.max_omega,
        "directions": args.directions,
        "runs": [dict(config_to_json(c), kappa1_resolved=str(c.regularizer_wavenumber)) for c in configs],
    }
    out.with_suffix(".json").write_text(json.dumps(archive, indent=2))
    failed = [
        (r["row"], c[: -len("_status")])
        for r in rows
        for c in header
        if c.endswith("_status") and r[c] not in ("ok", "")
    ]
    mismatched = [
        (r["row"], c[: -len("_pass")]) for r in rows for c in header if c.endswith("_pass") and r[c] is False
    ]
    print(f"wrote {out} ({len(rows)} rows); resolved configs in {out.with_suffix('.json')}")
    for row, f in mismatched:
        print(f"row {row} {f}: outside published tolerance")
    for row, f in failed:
        print(f"row {row} {f}: run failed", file=sys.stderr)
    return 1 if failed else 0


def _cmd_properties(args):
    try:
        kappa = complex(args.kappa1) if args.kappa1 is not None else 2 + 1j
        results = run_properties(args.suite, perturb_diagonal=args.perturb_diagonal, kappa=kappa)
    except WavenumberError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fh = open(args.out, "w") if args.out else sys.stdout
    try:
        for r in results:
            fh.write(json.dumps(r.as_dict()) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAIL {r.module}: {r.quantity} observed {r.observed:.3e}, required {r.required}", file=sys.stderr)
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="transmission-bie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one configuration and report iterations and far-field error")
    _add_physics(p)
    p.add_argument("--directions", type=int, default=DEFAULT_DIRECTION_COUNT, help="far-field sample count")
    p.add_argument("--out", type=Path, help="far-field CSV path")
    p.add_argument("--maxiter", type=int)
    p.add_argument("--no-reference", action="store_true", help="skip the reference far field")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("table", help="rerun a published table and compare")
    p.add_argument("table", type=int, choices=sorted(TABLES))
    p.add_argument("--max-omega", type=float, help="skip rows above this frequency")
    p.add_argument("--formulations", nargs="+", choices=("sk14",) + COLUMNS)
    p.add_argument("--directions", type=int, default=DEFAULT_DIRECTION_COUNT)
    p.add_argument("--out", type=Path, help="CSV path (default tableN.csv); configs go to the .json sibling")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("properties", help="run the automated property suites (JSON lines)")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), help="repeatable; default all")
    p.add_argument("--kappa1", type=_complex, help="wavenumber for the positivity suite (default 2+1j)")
    p.add_argument("--perturb-diagonal", type=float, default=0.0, help="fault injection for the Calderon checks")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_properties)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "directions", DEFAULT_DIRECTION_COUNT) < MIN_DIRECTION_COUNT:
        parser.error(f"--directions must be at least {MIN_DIRECTION_COUNT}")
    try:
        return args.func(args)
    except (ValueError, WavenumberError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
