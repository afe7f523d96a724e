"""End-to-end acceptance criteria; each test records one PASS/FAIL line in the terminal summary."""
from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import record
from quatrestrict.classical import classical_dims
from quatrestrict.cli import main
from quatrestrict.decomposition import ComputeStore, Decomposition, OrderLadder, verify_theorems, weighted_rows
from quatrestrict.epsilon import dichotomy_check, twist_ratio, tunnell_multiplicity, twist_checks, wd_representations
from quatrestrict.linalg import mat_mul, nullspace, restrict
from quatrestrict.local_division.classify import records_of_conductor
from quatrestrict.local_quadratic import LocalFieldDesc
from quatrestrict.quaternion import brandt_matrix, maximal_order, right_ideal_classes
from quatrestrict.quaternion.brandt import eisenstein_basis

ODD_CASES = [(3, 3), (3, 5), (5, 3), (5, 5), (7, 3), (11, 3), (13, 3)]
EVEN_CASES = [(3, 2), (3, 4), (5, 2)]


def test_criterion_1_odd_conductor_table():
    start = time.perf_counter()
    checked, bad = 0, []
    for p, c in ODD_CASES:
        for rec in records_of_conductor(p, c):
            if rec.degree == 1:
                continue
            for e in ("K", "L", "M"):
                checked += 1
                if rec.invariants[e] != rec.predicted[e]:
                    bad.append((p, c, rec.index, e))
    elapsed = time.perf_counter() - start
    ok = not bad and checked > 0 and elapsed <= 600
    record("1", ok, f"{checked} (rep, E) cells, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad[:10]


def _even_rows():
    for p, c in EVEN_CASES:
        for rec in records_of_conductor(p, c):
            if rec.degree > 1:
                yield p, c, rec


def test_criterion_2_even_conductor_ramified_columns():
    bad, checked = [], 0
    for p, c, rec in _even_rows():
        for e in ("K", "L"):
            expected = 2 if rec.minimal else 0
            checked += 1
            if rec.invariants[e] != expected:
                bad.append((p, c, rec.index, e))
        if not rec.minimal:
            checked += 1
            if rec.invariants["M"] != 0:
                bad.append((p, c, rec.index, "M"))
    record("2a", not bad, f"K/L columns and non-minimal rows: {checked} cells, {len(bad)} mismatches")
    assert not bad


@pytest.mark.xfail(strict=True, reason="minimal even-conductor reps have no o_M^x-invariants (see decisions ledger)")
def test_criterion_2_even_conductor_unramified_column():
    rows = [(p, c, rec) for p, c, rec in _even_rows() if rec.minimal]
    bad = [(p, c, rec.index, rec.invariants["M"]) for p, c, rec in rows if rec.invariants["M"] != 1]
    observed = sorted({v for *_, v in bad})
    record("2b", not bad, f"M column of minimal rows: expected 1, {len(bad)}/{len(rows)} differ (observed {observed})")
    assert not bad


def test_criterion_3_epsilon_engine():
    twists = [r for p in (3, 5) for r in twist_checks(p, max_conductor=2)]
    twist_ok = len(twists) >= 20 and all(r["pass"] for r in twists)

    ratio_bad, ratio_n, tunnell_bad = 0, 0, 0
    for p in (3, 5, 7):
        base = LocalFieldDesc(p)
        for f in range(1, 5):
            for label in ("K", "L"):
                for sigma in wd_representations(base, label, f):
                    for twist in ("K", "L"):
                        ratio_n += 1
                        expected = 1 if f == 1 or twist == label else -1
                        ratio_bad += twist_ratio(sigma, base.ext(twist)) != expected
                    for e in ("K", "L", "M"):
                        for chi in ("trivial", "sign") if e != "M" else ("trivial",):
                            tunnell_bad += tunnell_multiplicity(sigma, base.ext(e), chi) not in (0, 1)

    dich = [r for p, c in ODD_CASES for r in dichotomy_check(p, c)]
    dich_bad = sum(not r.passed for r in dich)
    ok = twist_ok and ratio_n > 0 and not ratio_bad and not tunnell_bad and dich and not dich_bad
    record("3", ok, f"{len(twists)} twist instances, {ratio_n} ratios ({ratio_bad} bad), "
                    f"{tunnell_bad} out-of-range multiplicities, {len(dich)} dichotomy triples ({dich_bad} bad)")
    assert ok


def test_criterion_4_bottom_rung():
    parts, ok = [], True
    for p, expected in ((11, 1), (23, 2), (31, 2)):
        cs = right_ideal_classes(maximal_order(p))
        classical = classical_dims(p, 2)[1]
        good = cs.mass == Fraction(p - 1, 24) and cs.h - 1 == classical == expected
        ok &= good
        parts.append(f"p={p} h-1={cs.h - 1} S2new={classical} mass={cs.mass}")
    record("4", ok, "; ".join(parts))
    assert ok


def test_criterion_5_brandt_p11():
    cs = right_ideal_classes(maximal_order(11))
    ops = {ell: brandt_matrix(cs, ell) for ell in (2, 3, 5)}
    mats = {ell: op.matrix for ell, op in ops.items()}
    commute = all(mat_mul(mats[a], mats[b]) == mat_mul(mats[b], mats[a]) for a in mats for b in mats)
    adjoint = all(op.is_self_adjoint() for op in ops.values())
    sums = all(s == ell + 1 for ell, op in ops.items() for s in op.row_sums())
    cusp = nullspace(weighted_rows(eisenstein_basis(cs), cs.units), cs.h)
    bound_ok = True
    for ell, m in mats.items():
        r = restrict(m, cusp)
        for ev in np.linalg.eigvals(np.array(r, dtype=float)).real:
            # exact test of a^2 <= 4l where the cusp eigenvalue is rational
            a = Fraction(round(ev))
            exact = abs(float(a) - ev) < 1e-9
            bound_ok &= (a * a <= 4 * ell) if exact else ev * ev <= 4 * ell + 1e-9
    ok = commute and adjoint and sums and bound_ok and len(cusp) == 1
    record("5", ok, f"commute={commute} self_adjoint={adjoint} row_sums={sums} ramanujan={bound_ok}")
    assert ok


def test_criterion_6_ladder_additivity():
    parts, ok = [], True
    for p, r in ((3, 4), (5, 3)):
        ladder = OrderLadder.build(p, r)
        dec = Decomposition(ladder, ComputeStore())
        for m in ladder.members:
            rep = dec.report(m)
            total = rep.dim_new + sum(dec.report(s).dim_new for s in ladder.superorders(m))
            ok &= total == rep.dim_cusp
        parts.append(f"p={p} to {p}^{r}: {len(ladder.members)} orders")
    record("6", ok, "; ".join(parts))
    assert ok


def test_criterion_7_level_p_cubed():
    parts, ok = [], True
    for p in (3, 5):
        out = verify_theorems(p, 3)
        wanted = [c for c in out["checks"]
                  if c["name"].startswith(("odd_level_evenness", "kl_m_dimension", "kl_disjoint", "kl_union_is_m"))]
        names = {c["name"].split("[")[0] for c in wanted}
        good = all(c["pass"] for c in wanted) and names == {"odd_level_evenness", "kl_m_dimension", "kl_disjoint",
                                                           "kl_union_is_m"}
        ok &= good
        dims = {o["name"]: o["dim_new"] for o in out["orders"] if o["r"] == 3}
        parts.append(f"p={p} new dims {dims}")
    record("7", ok, "; ".join(parts))
    assert ok


def test_criterion_8_level_p_squared():
    parts, ok = [], True
    for p in (3, 5, 7):
        out = verify_theorems(p, 2)
        wanted = [c for c in out["checks"] if c["name"].startswith("even_level_agreement")]
        good = len(wanted) == 1 and wanted[0]["pass"]
        ok &= good
        parts.append(f"p={p} systems {wanted[0]['lhs'] if wanted else None}")
    record("8", ok, "; ".join(parts))
    assert ok


def test_criterion_9_determinism_and_cache(tmp_path, capsys):
    def run(cache, threads):
        start = time.perf_counter()
        code = main(["verify", "--p", "3", "--max-level", "81", "--format", "json", "--threads", str(threads),
                     "--cache-dir", str(cache)])
        elapsed = time.perf_counter() - start
        return code, capsys.readouterr().out, elapsed

    cold_code, cold, t_cold = run(tmp_path / "a", 1)
    warm_code, warm, t_warm = run(tmp_path / "a", 1)
    par_code, par, _ = run(tmp_path / "b", 2)
    identical = cold == warm == par
    speedup = t_cold / max(t_warm, 1e-9)
    ok = identical and speedup >= 5 and cold_code == warm_code == par_code == 0
    record("9", ok, f"identical={identical} cold={t_cold:.2f}s warm={t_warm:.3f}s speedup={speedup:.0f}x")
    assert ok
