"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with its wall time and
time budget; a criterion fails if its result is wrong or it overruns.
"""

import json
import subprocess
import sys
import time
from contextlib import contextmanager
from math import comb

import pytest

from cycinv.context import GroupContext
from cycinv.gen_series import (ai_closed, bi_closed, digits, hilbert_closed, hilbert_identity,
                               recursion_check)
from cycinv.invariant_ring import (build_generators, minimal_generators, noether_number,
                                   noether_witness, special_elements, verify_generation)
from cycinv.module_decomp import (ModuleDecomposition, clear_cache, decompose_graded,
                                  decompose_graded_oracle, exterior_decompose, fixed_space_matrix,
                                  tensor_decompose)
from cycinv.verify import conjecture_search, length_laws

RESULTS = []


def _cold():
    # time each criterion from scratch, not on work cached by earlier tests
    clear_cache()
    build_generators.cache_clear()
    special_elements.cache_clear()


@contextmanager
def criterion(capsys, number, title, budget):
    _cold()
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        within = dt <= budget
        verdict = "PASS" if ok and within else "FAIL"
        note = "" if within else " (over budget)"
        line = f"{verdict} criterion {number}: {title} [{dt:.1f}s / {budget:.0f}s]{note}"
        RESULTS.append(line)
        with capsys.disabled():
            print("\n" + line)
    assert within, line


# Z/9 on F[V_4]
TABLE = [
    "0\t1:1", "1\t4:1", "2\t3:1,7:1", "3\t2:1,3:1,6:1,9:1", "4\t3:2,5:1,6:1,9:2",
    "5\t3:3,6:2,8:1,9:3", "6\t3:4,6:3,9:6", "7\t3:5,6:4,9:9", "8\t3:6,6:5,9:13",
    "9\t1:1,3:7,6:6,9:18", "10\t3:8,4:1,6:7,9:24", "11\t3:10,6:8,7:1,9:31",
    "12\t2:1,3:11,6:10,9:40", "13\t3:13,5:1,6:11,9:50", "14\t3:15,6:13,8:1,9:61",
    "15\t3:17,6:15,9:75", "16\t3:19,6:17,9:90", "17\t3:21,6:19,9:107",
]


def test_c1_decomposition_table(capsys):
    with criterion(capsys, 1, "p=3 decomposition table, degrees 0..17", 30):
        out = subprocess.run(
            [sys.executable, "-m", "cycinv.cli", "decompose", "--p", "3", "--degrees", "0..17"],
            capture_output=True, text=True, check=True).stdout
        assert out.splitlines() == TABLE


def test_c2_minimal_generators(capsys):
    with criterion(capsys, 2, "p=3 minimal generators: 11, degrees {1,2,3,3,4,5,6,7,8,9,9}", 120):
        led = minimal_generators(3, 12)
        assert led.consistent()
        assert len(led.generators) == 11
        assert led.degree_multiset() == [1, 2, 3, 3, 4, 5, 6, 7, 8, 9, 9]


def test_c3_noether_numbers(capsys):
    with criterion(capsys, 3, "Noether number 9 (p=3) and 4 (p=2)", 120):
        r3 = noether_number(3)
        assert r3.number == 9
        z = noether_witness(3, certify=True)
        assert z.degree() == 9 and r3.witness == z
        assert noether_number(2).number == 4


def test_c4_generation(capsys):
    with criterion(capsys, 4, "generating set spans invariants, p in {2,3}, d <= 12", 120):
        for p in (2, 3):
            rep = verify_generation(p, 12)
            assert rep.ok, rep.failing()
            assert [row[0] for row in rep.rows] == list(range(13))


def test_c5_length_laws(capsys):
    with criterion(capsys, 5, "length laws on compatible bases, p in {2,3}, d <= 15", 300):
        for p in (2, 3):
            res = length_laws(p, 15)
            assert res.ok, res.failures
            assert res.checks > 0


def test_c6_representation_ring(capsys):
    with criterion(capsys, 6, "tensor square and exterior powers of V_(p-1), p in {3,5,7}", 60):
        for p in (3, 5, 7):
            ctx = GroupContext(p, 1, 1)
            assert tensor_decompose(p - 1, p - 1, ctx) == {1: 1, p: p - 2}
            for i in range(p):
                if i % 2 == 0:
                    want = {1: 1, p: (comb(p - 1, i) - 1) // p}
                else:
                    want = {p - 1: 1, p: (comb(p - 1, i) - (p - 1)) // p}
                assert exterior_decompose(p - 1, i, ctx) == ModuleDecomposition(want)


def test_c7_series_bridge(capsys):
    with criterion(capsys, 7, "generating functions vs decompositions, p in {2,3}", 60):
        for p in (2, 3):
            ctx = GroupContext(p)
            H = hilbert_closed(p).series(19)
            A = {i: ai_closed(p, i).series(19) for i in range(1, p + 1)}
            B = {i: bi_closed(p, i).series(19) for i in range(1, p + 1)}
            for d in range(19):
                dec = decompose_graded(ctx, d)
                assert H[d] == fixed_space_matrix(ctx, d).shape[0] == dec.summands
                _, beta, gamma = digits(p, d)
                for i in range(1, p + 1):
                    assert B[i][d] == dec[i * p]
                    top = 1 if (beta == p - 1 and gamma == i - 1) else 0
                    assert A[i][d] == dec[i * p] - top
            rep = recursion_check(p, 60)
            assert rep.ok, rep.failure
            assert hilbert_identity(p)


def test_c8_oracle_equivalence(capsys):
    with criterion(capsys, 8, "filtration vs rank oracle: p in {2,3} d <= 18, p=5 d <= 12", 600):
        for p, dmax in ((2, 18), (3, 18), (5, 12)):
            ctx = GroupContext(p)
            oracle = decompose_graded_oracle(ctx, range(dmax + 1))
            for d in range(dmax + 1):
                assert decompose_graded(ctx, d) == oracle[d], (p, d)
            clear_cache()


def test_c9_conjecture_probe(capsys):
    with criterion(capsys, 9, "conjecture probe p=3, degree <= 15 (report only)", 600):
        rep = conjecture_search(GroupContext(3), 15)
        d = json.loads(json.dumps(rep.to_dict()))
        assert d["pairs_checked"] > 0
        assert d["status"] in ("no counterexample found", "counterexample found")
        assert (d["status"] == "counterexample found") == bool(d["counterexamples"])
        for c in d["counterexamples"]:
            assert c["length_f"] % 3 == 0 and c["length_fh"] % 3 != 0
        with capsys.disabled():
            print(f"\n  conjecture probe: {d['pairs_checked']} products, {d['status']}")


@pytest.fixture(scope="module", autouse=True)
def _summary():
    yield
    if RESULTS:
        print("\nacceptance summary:\n" + "\n".join(RESULTS))
