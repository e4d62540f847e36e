"""End-to-end acceptance checks; each prints one PASS/FAIL line with its time limit."""

import random
import time

from loghh.cyclic import adams_suite, build_cyclic, hc, hc_de_rham, sbi_sequence
from loghh.grobner import s_pairs_reduce_to_zero
from loghh.hochschild import (
    check_symbolic_identities, connes_B, hh_bar, hh_koszul, hh_resolution, hh_theta, hkr_map,
    level_ring, resolution_of_diagonal,
)
from loghh.intlin import IntMatrix, smith_normal_form
from loghh.logring import omega_hilbert
from loghh.oracle import oracle
from loghh.problem import fixture_spec

FINITE = ["point", "qxq", "dual_numbers", "kummer2_q", "kummer3_q", "kummer2_f2"]
FINITE_Q = ["point", "qxq", "dual_numbers", "kummer2_q", "kummer3_q"]
BOX5 = {0: 1, 1: 2, 2: 2, 3: 2, 4: 2}


def _criterion(capsys, number, title, limit, fn):
    start = time.perf_counter()
    try:
        failures = fn()
    except Exception as exc:  # report, then fail below
        failures = [f"{type(exc).__name__}: {exc}"]
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed >= limit:
        failures.append(f"took {elapsed:.2f}s, limit {limit}s")
    verdict = "PASS" if not failures else "FAIL"
    bound = f"< {limit}s" if limit is not None else "no limit"
    with capsys.disabled():
        print(f"\n[{verdict}] criterion {number}: {title} ({elapsed:.2f}s, {bound})"
              + ("" if not failures else " :: " + "; ".join(failures)))
    assert not failures


def _check(failures, ok, what):
    if not ok:
        failures.append(what)


def test_criterion_1_logpoint(capsys):
    def run():
        f = []
        s = fixture_spec("logpoint")
        k = hh_koszul(s, ["u0__1 - 1"], 3, (0, 0))
        r = hh_resolution(s, 3, (0, 0))
        _check(f, k.status == "ok" and [k.total(n) for n in range(4)] == [1, 1, 0, 0], "Koszul HH")
        _check(f, [r.total(n) for n in range(4)] == [1, 1, 0, 0], "resolution HH")
        _check(f, hkr_map(s, 1, (0, 0)).iso, "HKR iso")
        _check(f, hc_de_rham(s, 5, [0]).dims == {m: {0: 1} for m in range(6)}, "HC via de Rham")
        return f
    _criterion(capsys, 1, "log point HH (1,1,0,0), HKR iso, HC_0..5 = 1", 5, run)


def test_criterion_2_kummer(capsys):
    def run():
        f = []
        for name in ("kummer2_q", "kummer3_q"):
            s = fixture_spec(name)
            _check(f, hh_bar(s, 4).table() == [1, 0, 0, 0, 0], f"{name} HH")
            _check(f, omega_hilbert(s, 1, [0]) == {0: 0}, f"{name} Omega^1")
        s = fixture_spec("kummer2_f2")
        bar = hh_bar(s, 4).table()
        _check(f, bar == [1, 1, 1, 1, 1], "F2 bar HH")
        _check(f, hh_theta(s, 1).table() == bar[:2], "F2 Theta-complex degrees 0-1")
        return f
    _criterion(capsys, 2, "Kummer charts log etale over Q, periodic over F2", 30, run)


def test_criterion_3_node(capsys):
    def run():
        f = []
        s = fixture_spec("node")
        r = hh_resolution(s, 3, (0, 4))
        _check(f, r.dims[1] == omega_hilbert(s, 1, range(5)) == BOX5, "Tor_1 = Omega^1 = (1,2,2,2,2)")
        zero = {d: 0 for d in range(5)}
        _check(f, r.dims[2] == zero and r.dims[3] == zero, "Tor_2 = Tor_3 = 0")
        return f
    _criterion(capsys, 3, "nodal Tor_1 Hilbert function equals Omega^1, higher Tor vanish", 60, run)


def test_criterion_4_refinement(capsys):
    def run():
        tables = [hh_resolution(fixture_spec(n), 3, (0, 4)).dims for n in ("node", "node_refined", "node_redundant")]
        return [] if tables[0] == tables[1] == tables[2] else ["HH tables differ between charts"]
    _criterion(capsys, 4, "chart refinement leaves HH Hilbert tables unchanged", None, run)


def test_criterion_5_sbi(capsys):
    def run():
        f = []
        for name in ("qxq", "dual_numbers", "kummer2_f2"):
            r = sbi_sequence(fixture_spec(name), 4)
            _check(f, r.all_exact and all(r.checks.values()), f"{name} SBI")
        return f
    _criterion(capsys, 5, "SBI exact at every spot m <= 4 on three fixtures", 60, run)


def test_criterion_6_routes(capsys):
    def run():
        s = fixture_spec("qxq")
        a, b = hc(s, 4).dims, hc_de_rham(s, 4).dims
        want = {0: 2, 1: 0, 2: 2, 3: 0, 4: 2}
        return [] if a == b == want else [f"bicomplex {a} vs de Rham {b}"]
    _criterion(capsys, 6, "hc equals hc_de_rham on QxQ (even 2, odd 0)", None, run)


def test_criterion_7_adams(capsys):
    def run():
        f = []
        for name in FINITE_Q:
            results, comp = adams_suite(fixture_spec(name), [2, 3, 6], 3)
            _check(f, all(comp.values()), f"{name} psi2 psi3 = psi6")
            for k, r in results.items():
                _check(f, r.complete and all(r.checks.values()), f"{name} psi{k} decomposition")
        results, _ = adams_suite(fixture_spec("dual_numbers"), [2], 1)
        r = results[2]
        _check(f, r.matrices[1] == [[2]] and r.hkr.get(1), "eps_1(dx) eigenvalue 2")
        return f
    _criterion(capsys, 7, "Adams composition, complete decomposition, HKR eigenvector", 120, run)


def test_criterion_8_identities(capsys):
    def run():
        f = []
        for name in FINITE:
            s = fixture_spec(name)
            _, _, chk = connes_B(s, 3)
            _check(f, all(chk.values()), f"{name} B identities")
            cm = build_cyclic(s, 4)
            _check(f, all(cm.checks.values()), f"{name} simplicial/cyclic identities")
            for n in range(4):
                _check(f, s_pairs_reduce_to_zero(level_ring(s, n).gb), f"{name} level {n} Groebner basis")
        for name in ("logpoint", "node", "node_refined", "node_redundant", "polyline"):
            s = fixture_spec(name)
            _check(f, check_symbolic_identities(s, 3), f"{name} ring-map identities")
            res = resolution_of_diagonal(s, 3)
            _check(f, res.check_d_squared() and res.check_exactness(), f"{name} resolution")
            _check(f, s_pairs_reduce_to_zero(s.A.gb), f"{name} Groebner basis of A")
        rng = random.Random(20240607)
        for _ in range(200):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            A = IntMatrix([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
            if not smith_normal_form(A).verify(A):
                f.append("Smith form identity")
                break
        return f
    _criterion(capsys, 8, "structural identity suites", 240, run)


def test_criterion_9_oracle(capsys):
    def run():
        f = []
        for name in FINITE:
            s = fixture_spec(name)
            dense = oracle(s, 3)
            _check(f, dense["hh"] == hh_theta(s, 3).dims == hh_bar(s, 3).dims == hh_resolution(s, 3).dims,
                   f"{name} HH")
            _check(f, dense["hc"] == hc(s, 3).dims, f"{name} HC")
        return f
    _criterion(capsys, 9, "dense oracle agrees on every finite fixture", None, run)
