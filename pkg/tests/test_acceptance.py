"""Acceptance gate: the twelve headline results, one verdict line each.

Each test prints a single PASS/FAIL line (run pytest with -s or read the
captured output) and then asserts, so the suite shows exactly which headline
claims hold.  Tolerances are absolute on energy unless noted.
"""

import math

import numpy as np
import pytest

from coulomb2e import cli, matel3, matel4, oracle, solve
from coulomb2e.model import hminus_spec, threshold_for, UNNATURAL
from coulomb2e.solve import MinimizerConfig

CFG = MinimizerConfig(restarts=2, max_iter=1500)
LIGHT = MinimizerConfig(restarts=1, max_iter=600)
SCAN4 = MinimizerConfig(restarts=1, max_iter=250, f_tol=1e-9, x_tol=1e-6)


def _verdict(num, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_closed_form_estimates():
    checks = [
        (matel3.perturbative_e(2.0), -2.75, 1e-12),
        (matel3.energy_effective_charge(2.0)[0], -(27.0 / 16.0) ** 2, 1e-9),
        (matel3.energy_effective_charge(2.0)[0], -2.84766, 5e-6),
        (matel3.perturbative_e(1.0), -0.375, 1e-12),
        (matel3.energy_effective_charge(1.0)[0], -0.47266, 5e-6),
    ]
    ok = all(abs(got - ref) <= tol for got, ref, tol in checks)
    _verdict(1, ok, "perturbative/effective-charge closed forms "
             f"Z=2: {checks[0][0]:.5f}, {checks[1][0]:.5f}; "
             f"Z=1: {checks[3][0]:.5f}, {checks[4][0]:.5f}")


def test_criterion_02_two_exponential_hminus():
    rows, (b0, e0) = solve.scan_frozen(1.0)
    e, (a, b), _ = solve.optimize_chandrasekhar(1.0, CFG)
    n, t, v = matel3.chandrasekhar_ntv(a, b, 1.0, +1)
    lam = -v / (2.0 * t)
    sa, sb = sorted((lam * a, lam * b), reverse=True)
    # the eigenvalue-based scale search must agree with the closed virial form
    blk = matel3.natural_matblock([(b, a, 0.0)], hminus_spec(z=1.0))
    e_eig, _ = solve.scaled_lowest(blk)
    ok = (abs(b0 - 0.279) <= 0.003 and abs(e0 + 0.5126) <= 5e-4
          and abs(e + 0.5133) <= 5e-4
          and abs(sa - 1.04) <= 0.01 and abs(sb - 0.28) <= 0.01
          and abs(e_eig - e) <= 1e-6)
    _verdict(2, ok, f"frozen min ({b0:.4f}, {e0:.5f}); "
             f"full min {e:.6f} at ({sa:.3f}, {sb:.3f}); "
             f"eig-vs-virial gap {abs(e_eig - e):.1e}")


def test_criterion_03_table1_correlated_column():
    refs = cli._TABLE1
    ok = True
    worst = 0.0
    for z, s, _efac, ecorr, a_ref, b_ref in refs:
        e, (a, b), _ = cli._t1_corr(z, s, CFG)
        worst = max(worst, abs(e - ecorr))
        ok &= abs(e - ecorr) <= 5e-4
        ok &= abs(a - a_ref) <= 0.02 and abs(b - b_ref) <= 0.02
    _verdict(3, ok, f"nine (Z,S) correlated energies, worst |dev| {worst:.1e}"
             " (ranges within 0.02)")


def test_criterion_04_table1_factorized_triplet():
    # printed values correspond to the unrestricted two-range (1s)(2s)
    # optimum (the equal-range restriction lands ~0.03 higher; see the
    # decisions ledger)
    refs = [(2.0, -2.1666), (3.0, -5.1026), (4.0, -9.2892), (8.0, -38.537)]
    ok = True
    worst = 0.0
    for z, ref in refs:
        e, _, _ = solve.optimize_shellmodel(z, CFG)
        worst = max(worst, abs(e - ref))
        ok &= abs(e - ref) <= 5e-4
    _verdict(4, ok, f"factorized triplet energies, worst |dev| {worst:.1e}")


def test_criterion_05_table2_rows():
    cfg = MinimizerConfig(restarts=2, max_iter=1200)
    exact = {"H-": -0.52775, "He": -2.90372, "He*": -2.14597,
             "He_ortho": -2.17523}
    single = [
        ("a=b c>0", "H-", -0.50790), ("a=b c>0", "He", -2.88962),
        ("a!=b c>0", "H-", -0.52387), ("a!=b c>0", "He", -2.89953),
        ("a!=b c>0", "He_ortho", -2.16153),
    ]
    ok = True
    for label, col, ref in single:
        got = cli._table2_value(label, col, 1.0 if col == "H-" else 2.0, cfg)
        ok &= abs(got - ref) <= 5e-4
    multi = [
        ("N=2", {"H-": -0.52496, "He": -2.90185, "He*": -2.14461,
                 "He_ortho": -2.17512}),
        ("N=3", {"H-": -0.52767, "He": -2.90328, "He*": -2.14538,
                 "He_ortho": -2.17521}),
    ]
    for label, refs in multi:
        for col, ref in refs.items():
            got = cli._table2_value(label, col, 1.0 if col == "H-" else 2.0, cfg)
            ok &= got <= ref + 1e-3
            ok &= got >= exact[col] - 1e-9  # variational bound
    _verdict(5, ok, "Table II single-term rows within 5e-4; "
             "N=2/N=3 reach printed values and stay above the exact row")


def test_criterion_06_minmax():
    e_mm, _, _ = solve.optimize_minmax(1.0, CFG)
    e_ch, _, _ = solve.optimize_chandrasekhar(1.0, CFG)
    ok = abs(e_mm + 0.506) <= 1e-3 and e_mm > e_ch
    _verdict(6, ok, f"min-max optimum {e_mm:.5f} (above two-range {e_ch:.5f})")


def test_criterion_07_critical_charges():
    zc_p = solve.scan_charge("perturbative", CFG, z_lo=1.1, z_hi=1.4)
    zc_e = solve.scan_charge("effective", CFG, z_lo=0.9, z_hi=1.2)
    zc_c = solve.scan_charge("chandrasekhar", CFG, z_lo=0.85, z_hi=1.2)
    e_zexp = oracle.zexp_partial(2.0, 4)[0]
    ok_p = abs(zc_p - 1.25) <= 1e-3
    ok_e = abs(zc_e - 1.067) <= 2e-3
    ok_c = abs(zc_c - 0.949) <= 2e-3  # measured ~0.954: known defect, red
    ok_z = abs(e_zexp + 2.9035) <= 1e-4
    _verdict(7, ok_p and ok_e and ok_c and ok_z,
             f"Zc perturbative {zc_p:.4f}, effective {zc_e:.4f}, "
             f"two-range {zc_c:.4f} (target 0.949 +- 0.002), "
             f"1/Z order-4 {e_zexp:.5f}")


def test_criterion_08_mass_scaling():
    e_inf, _, _ = solve.optimize_chandrasekhar(1.0, CFG)
    recs = solve.scan_mass3([1.0, 10.0, 1836.0], CFG)
    ok = True
    for r in recs:
        want = r["mu"] * e_inf
        ok &= abs(r["energy"] - want) / abs(want) <= 1e-6
        ok &= abs(r["he_expectation"]) < 1e-10
    _verdict(8, ok, "finite-mass energies scale with mu to 1e-6 rel; "
             f"recoil cross term <= {max(abs(r['he_expectation']) for r in recs):.1e}")


def test_criterion_09_unnatural_parity():
    spec = hminus_spec(z=1.0, sector=UNNATURAL)
    r1 = solve.optimize_ion(spec, 1, LIGHT)
    r3 = solve.optimize_ion(spec, 3, LIGHT)
    ps_spec = hminus_spec(z=1.0, mass_ratio=1.0, sector=UNNATURAL)
    ps_vals = [solve.optimize_ion(ps_spec, n, LIGHT).energy for n in (1, 2)]
    ok_single = r1.energy > -0.125
    ok_multi = -0.1253 - 1e-3 <= r3.energy < -0.125
    ok_ps = all(e >= -0.0625 for e in ps_vals)
    _verdict(9, ok_single and ok_multi and ok_ps,
             f"1+ H-: single {r1.energy:.7f} (unbound), "
             f"3-term {r3.energy:.7f} (bound, in window); "
             f"1+ Ps-: best {min(ps_vals):.7f} never undercuts -0.0625")


def test_criterion_10_ps2():
    e, beta = solve.optimize_ps2()
    ok_e = abs(e + 0.5042) <= 5e-4
    # closed one-parameter forms vs the general assembler
    from coulomb2e.model import ps2_spec
    spec = ps2_spec()
    ok_match = True
    for bb in (0.3, beta):
        a, b = 0.5 * (1 + bb), 0.5 * (1 - bb)
        blk = matel4.assemble4([[(1.0, (a, b, b, a)), (1.0, (b, a, a, b))]],
                               spec)
        n, t, v = matel4.ho_ntv(bb)
        c0 = blk.n_mat[0, 0] / n
        ok_match &= abs(blk.t_mat[0, 0] - c0 * t) <= 1e-10 * abs(c0 * t)
        ok_match &= abs(blk.v_mat[0, 0] + c0 * v) <= 1e-10 * abs(c0 * v)
    n0, t0, v0 = matel4.ho_ntv(0.0)
    e0 = -v0 * v0 / (4.0 * t0 * n0)
    ok_limit = abs(e0 + 2888.0 / 6237.0) <= 1e-8
    _verdict(10, ok_e and ok_match and ok_limit,
             f"Ps2 minimum {e:.6f} at beta={beta:.4f}; assembler match; "
             f"beta=0 limit {e0:.10f} = -2888/6237")


def test_criterion_11_four_body_breaking():
    cc = solve.scan_mass4([1.0, 2.0, 10.0, 100.0], "cc-break", SCAN4)
    margins = [r["margin"] for r in cc]
    ok_cc = all(r["stable"] for r in cc) and all(
        m2 >= m1 - 1e-9 for m1, m2 in zip(margins, margins[1:]))
    ident = solve.scan_mass4([1.0, 1.5, 2.0, 2.2], "identity-break", SCAN4)
    ok_id = ident[0]["stable"] and any(not r["stable"] for r in ident)
    lost = next((r["ratio"] for r in ident if not r["stable"]), None)
    _verdict(11, ok_cc and ok_id,
             f"cc-break margins {['%.5f' % m for m in margins]} non-decreasing; "
             f"identity-break loses stability at ratio {lost}")


def test_criterion_12_oracle_manifest():
    rows = oracle.run_manifest()
    ok_m = bool(rows) and all(r["passed"] for r in rows)
    # generating functions vs finite differences, total order <= 3
    al, be, ga = 1.3, 0.8, 0.4
    h = 1e-3
    fd = (matel3.f3(al + h, be, ga) - 2 * matel3.f3(al, be, ga)
          + matel3.f3(al - h, be, ga)) / h**2
    ok_g3 = abs(matel3.g3((2, 0, 0), al, be, ga) - fd) <= 1e-5 * abs(fd)
    a4 = (1.1, 0.9, 0.8, 1.2)
    h4 = 1e-4
    fd4 = (matel4.f4(a4[0] + h4, *a4[1:]) - matel4.f4(a4[0] - h4, *a4[1:])) \
        / (2 * h4)
    ok_g4 = abs(matel4.g4((1, 0, 0, 0, 0), *a4) + fd4) <= 1e-5 * abs(fd4)
    n_pass = sum(r["passed"] for r in rows)
    _verdict(12, ok_m and ok_g3 and ok_g4,
             f"oracle manifest {n_pass}/{len(rows)} cases; "
             "g3/g4 match finite differences at 1e-5")
