"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line with the observed
values. Known gaps are documented in the decisions ledger and are left to
fail rather than loosened.
"""

import time

import numpy as np
import pytest

from transmission_bie.formulations import TransmissionConfig, assemble_formulation
from transmission_bie.geometry import CURVES, get_curve, sample
from transmission_bie.gmres import gmres_solve
from transmission_bie.operators import operator_difference_decay, symbol_n, symbol_s
from transmission_bie.postprocess import far_field, relative_far_field_difference
from transmission_bie.properties import calderon_residual, circle_spectrum_error, quadratic_forms
from transmission_bie.published import COLUMNS, TABLE_DIRECTIONS, table_rows
from transmission_bie.quadrature import mode_numbers
from transmission_bie.solver import matvec_seconds, solve


@pytest.fixture
def report(capsys):
    def emit(number, passed, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if passed else 'FAIL'} | {detail}")
        return passed

    return emit


def _config(row, formulation):
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


def test_criterion_1_circle_table1(report):
    row = table_rows(1)[1]
    assert row.geometry == "circle" and row.unknowns == 128
    t0 = time.perf_counter()
    runs = {f: solve(_config(row, f)) for f in COLUMNS}
    elapsed = time.perf_counter() - t0
    iters_ok = all(abs(runs[f].iterations - row.values[f][0]) <= 3 for f in COLUMNS)
    err_ok = all(runs[f].error <= 1e-6 for f in COLUMNS)
    detail = ", ".join(f"{f} {runs[f].iterations} (pub {row.values[f][0]}) err {runs[f].error:.1e}" for f in COLUMNS)
    ok = report(1, iters_ok and err_ok and elapsed <= 10, f"{detail}; {elapsed:.1f}s")
    assert ok


def test_criterion_2_circle_convergence(report):
    coarse, fine = table_rows(1)[0], table_rows(1)[1]
    lines, ok = [], True
    for f in COLUMNS:
        e64 = solve(_config(coarse, f)).error
        e128 = solve(_config(fine, f)).error
        good = 1e-3 <= e64 <= 1e-1 and e128 <= 1e-6 and e64 / e128 >= 1e4
        ok &= good
        lines.append(f"{f} {e64:.1e}->{e128:.1e}")
    assert report(2, ok, ", ".join(lines))


def test_criterion_3_kite_cavity_table1(report):
    rows = [r for r in table_rows(1) if r.geometry != "circle" and r.unknowns == 256]
    ok, lines = True, []
    for row in rows:
        for f in COLUMNS:
            run = solve(_config(row, f))
            pub = row.values[f][0]
            good = abs(run.iterations - pub) <= 0.2 * pub and run.error <= 1e-6
            ok &= good
            lines.append(f"{row.geometry} {f} {run.iterations}/{pub} err {run.error:.1e}")
    assert report(3, ok, "; ".join(lines))


def test_criterion_4_iteration_ordering(report):
    ok, lines = True, []
    for table in (3, 4, 5, 6, 7):
        for row in table_rows(table, max_omega=32):
            its = {f: solve(_config(row, f), with_reference=False).iterations for f in ("sk15", "fk16", "skr-lp")}
            pub = {f: row.values[f][0] for f in its}
            if pub["skr-lp"] < pub["sk15"]:
                ok &= its["skr-lp"] < its["sk15"]
            if pub["sk15"] <= pub["fk16"]:
                ok &= its["sk15"] <= its["fk16"]
            if row.geometry in ("kite", "cavity") and row.omega == 32 and row.eps2 == 4:
                ratio = its["skr-lp"] / its["sk15"]
                ok &= ratio <= 0.7
                lines.append(f"T{table} w{row.omega:g} LP/SK15 {ratio:.2f}")
            lines.append(f"T{table} w{row.omega:g} {its['skr-lp']}<{its['sk15']}<={its['fk16']}")
    assert report(4, ok, "; ".join(lines))


def test_criterion_5_high_contrast(report):
    row = table_rows(6)[0]
    assert row.omega == 8 and row.eps2 == 16 and row.polarization == "H"
    fk = solve(_config(row, "fk16"), with_reference=False).iterations
    lp = solve(_config(row, "skr-lp"), with_reference=False).iterations
    assert report(5, fk >= 2.5 * lp, f"FK16 {fk} vs SKR_LP {lp}, ratio {fk / lp:.2f}")


def test_criterion_6_spectral_oracle(report):
    errs = {k: circle_spectrum_error("S", k, n=64) for k in (1.0, 2 + 1j)}
    assert report(6, max(errs.values()) <= 1e-10, ", ".join(f"k={k}: {e:.1e}" for k, e in errs.items()))


def test_criterion_7_calderon(report):
    # Resolved modes |m| <= n/2; both Calderon pairings S N = D^2 - I/4 and N S = (D*)^2 - I/4
    ok, lines = True, []
    for g in ("circle", "kite"):
        for pairing in ("SN", "NS"):
            r1 = calderon_residual(sample(get_curve(g), 64), 2.0, pairing)
            r2 = calderon_residual(sample(get_curve(g), 128), 2.0, pairing)
            ok &= r1 <= 1e-8 and (r2 <= r1 / 100 or r2 <= 1e-13)
            lines.append(f"{g} {pairing} {r1:.1e}->{r2:.1e}")
    assert report(7, ok, "; ".join(lines))


@pytest.mark.xfail(strict=True, reason="S N + I/4 - (D*)^2 is not an operator identity off the circle")
def test_criterion_7_literal_expression(report):
    r = {g: calderon_residual(sample(get_curve(g), 64), 2.0, "literal") for g in ("circle", "kite")}
    ok = max(r.values()) <= 1e-8
    report("7 (literal S N + I/4 - (D*)^2)", ok, ", ".join(f"{g} {v:.1e}" for g, v in r.items()))
    assert ok


def test_criterion_8_positivity(report):
    worst = np.inf
    for g in CURVES:
        for vals in quadratic_forms(sample(get_curve(g), 64), 2 + 1j, samples=100).values():
            worst = min(worst, vals.min())
    m = mode_numbers(4096)
    sym = min(symbol_n(m, 2 + 1j).imag.min(), symbol_s(m, 2 + 1j).imag.min())
    assert report(8, worst > 0 and sym > 0, f"min quadratic form {worst:.2e}, min symbol Im {sym:.2e}")


def test_criterion_9_smoothing_slopes(report):
    ok, lines = True, []
    for g in CURVES:
        nodes = sample(get_curve(g), 128)
        s1 = operator_difference_decay("S-sigma", 2 + 1j, None, nodes)
        s2 = operator_difference_decay("S", 2.0, 3 + 1j, nodes)
        s3 = operator_difference_decay("N", 2.0, 3 + 1j, nodes)
        ok &= s1 <= -2.7 and s2 <= -2.7 and s3 <= -0.7
        lines.append(f"{g} {s1:.2f}/{s2:.2f}/{s3:.2f}")
    assert report(9, ok, "S-sigma/S/N slopes " + "; ".join(lines))


def test_criterion_10_formulation_consistency(report):
    tol = 1e-8
    cfg = TransmissionConfig(geometry="kite", omega=8, eps2=2, n=128, tol=tol)
    fields = {}
    for f in ("sk14", "sk15", "fk16", "skr-lp", "skr-ps"):
        system = assemble_formulation(cfg.with_(formulation=f))
        fields[f] = far_field(system, gmres_solve(system.matvec, system.rhs, tol))
    names = list(fields)
    spread = max(
        relative_far_field_difference(fields[a], fields[b]) for i, a in enumerate(names) for b in names[i + 1 :]
    )
    assert report(10, spread <= 10 * tol, f"max pairwise relative spread {spread:.1e} (limit {10 * tol:.0e})")


def test_criterion_11_cost_ratio(report):
    cfg = TransmissionConfig(geometry="kite", omega=8, eps2=2, n=256)
    assert cfg.unknowns == 1024
    sk, lp, ps = matvec_seconds([cfg.with_(formulation=f) for f in ("sk15", "skr-lp", "skr-ps")])
    ok = lp / sk <= 1.5 and ps / sk <= 1.2
    assert report(11, ok, f"SKR_LP/SK15 {lp / sk:.2f}, SKR_PS/SK15 {ps / sk:.2f}")
