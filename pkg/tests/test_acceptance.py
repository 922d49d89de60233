"""Acceptance gate: one test per shipping criterion, goldens asserted exactly.

Each test ends with a single `criterion NN <name>: PASS/FAIL` line (shown
with -s, or in the -v listing through the test names). Criterion 04 runs
only in the extended tier (--extended or DELTA2N_EXTENDED=1).
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from delta2n.chain_complex import betti, boundary_matrix, build_basis, build_complex
from delta2n.equivariant_homology import (
    act,
    homology_character_next,
    homology_character_top,
    kernel_character_oracle,
    project_columns,
)
from delta2n.kernels import set_threads
from delta2n.linalg import is_surjective
from delta2n.symfunc_check import check_euler
from delta2n.symmetric_group import (
    character_table,
    class_size,
    compose,
    decompose,
    hook_dimension,
    partitions_of,
    specht_matrices,
)
from delta2n.theta_graphs import (
    canonicalize,
    enumerate_theta,
    has_odd_automorphism,
    relabel,
    to_line,
)

DATA = Path(__file__).parent / "data"

# golden character rows, classes in partitions_of(n) order (identity first)
GOLDEN_TOP = {
    4: (3, -1, -1, 0, 1),
    5: (15, 3, -1, 0, 0, -1, 0),
    6: (86, 2, 10, 6, -1, -1, 2, 0, 0, 1, 0),
    7: (575, 5, -13, 17, -1, -1, -1, -1, -1, 1, -1, 0, 0, -1, 1),
}
GOLDEN_NEXT = {
    4: (1, 1, 1, 1, 1),
    5: (5, 1, 1, -1, 1, -1, 0),
    6: (26, 2, -2, -2, -1, -1, -1, 0, 0, 1, 1),
    7: (155, 5, -1, -7, -1, -1, -1, 5, -1, 1, -1, 0, 0, -1, 1),
}
# the n=6 multiplicities of chi_33 and chi_222 are forced by the golden
# character row above (inner products are unambiguous), and two independent
# computation methods reproduce that row exactly
GOLDEN_MULTS_TOP = {
    4: {(2, 1, 1): 1},
    5: {(3, 1, 1): 1, (3, 2): 1, (4, 1): 1},
    6: {
        (1, 1, 1, 1, 1, 1): 1,
        (2, 1, 1, 1, 1): 1,
        (2, 2, 1, 1): 1,
        (2, 2, 2): 2,
        (3, 2, 1): 2,
        (3, 3): 1,
        (4, 2): 2,
        (5, 1): 1,
        (6,): 1,
    },
    7: {
        (2, 2, 2, 1): 1,
        (3, 1, 1, 1, 1): 3,
        (3, 2, 1, 1): 4,
        (3, 2, 2): 3,
        (3, 3, 1): 1,
        (4, 1, 1, 1): 3,
        (4, 2, 1): 5,
        (4, 3): 1,
        (5, 1, 1): 1,
        (5, 2): 2,
    },
}
GOLDEN_MULTS_NEXT = {
    4: {(4,): 1},
    5: {(3, 2): 1},
    6: {(3, 2, 1): 1, (4, 1, 1): 1},
    7: {
        (1, 1, 1, 1, 1, 1, 1): 1,
        (2, 2, 2, 1): 1,
        (3, 2, 1, 1): 1,
        (3, 3, 1): 1,
        (4, 1, 1, 1): 1,
        (4, 2, 1): 1,
        (4, 3): 1,
        (5, 1, 1): 1,
    },
}


def _report(num, name, ok, detail=""):
    print(f"criterion {num:02d} {name}: {'PASS' if ok else 'FAIL'}"
          + (f"  [{detail}]" if detail else ""))
    assert ok, f"criterion {num:02d} {name}: {detail or 'failed'}"


@pytest.fixture(scope="module", autouse=True)
def _warm_jit():
    # compile the numba kernels once so timed criteria measure algorithms,
    # not the jit
    betti(4)
    homology_character_top(4)


def test_01_betti_numbers():
    times, got = {}, {}
    for n in (4, 5, 6):
        t0 = time.perf_counter()
        got[n] = betti(n)
        times[n] = time.perf_counter() - t0
    ok = (
        got == {4: (3, 1), 5: (15, 5), 6: (86, 26)}
        and times[4] < 1.0
        and times[5] < 1.0
        and times[6] < 30.0
    )
    _report(1, "betti numbers n=4,5,6", ok,
            f"got {got}, times {[f'{times[n]:.2f}s' for n in (4, 5, 6)]}")


def test_02_character_tables():
    bad = []
    t0 = time.perf_counter()
    for n in (4, 5, 6):
        top = homology_character_top(n)
        nxt = homology_character_next(n)
        if top.as_ints() != GOLDEN_TOP[n]:
            bad.append(f"top n={n}: {top.as_ints()}")
        if nxt.as_ints() != GOLDEN_NEXT[n]:
            bad.append(f"next n={n}: {nxt.as_ints()}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1800.0
    _report(2, "character rows n=4,5,6", ok, "; ".join(bad) or f"{dt:.1f}s")


def test_03_decompositions():
    bad = []
    for n in (4, 5, 6):
        dec_top = decompose(homology_character_top(n))
        dec_nxt = decompose(homology_character_next(n))
        if dec_top != GOLDEN_MULTS_TOP[n]:
            bad.append(f"top n={n}: {dec_top}")
        if dec_nxt != GOLDEN_MULTS_NEXT[n]:
            bad.append(f"next n={n}: {dec_nxt}")
    _report(3, "irreducible decompositions n=4,5,6", not bad, "; ".join(bad))


def test_04_n7_characters(extended_tier):
    t0 = time.perf_counter()
    top = homology_character_top(7)
    nxt = homology_character_next(7)
    dt = time.perf_counter() - t0
    bad = []
    if top.as_ints() != GOLDEN_TOP[7]:
        bad.append(f"top: {top.as_ints()}")
    if nxt.as_ints() != GOLDEN_NEXT[7]:
        bad.append(f"next: {nxt.as_ints()}")
    if decompose(top) != GOLDEN_MULTS_TOP[7]:
        bad.append("top decomposition mismatch")
    if decompose(nxt) != GOLDEN_MULTS_NEXT[7]:
        bad.append("next decomposition mismatch")
    _report(4, "n=7 extended characters", not bad, "; ".join(bad) or f"{dt:.0f}s")


def test_05_method_agreement():
    bad = []
    for n in (4, 5):
        oracle = kernel_character_oracle(n).as_ints()
        proj = homology_character_top(n).as_ints()
        if oracle != proj:
            bad.append(f"n={n}: oracle {oracle} vs projection {proj}")
    _report(5, "kernel-trace oracle vs projection n=4,5", not bad, "; ".join(bad))


def test_06_euler_generating_function():
    bad, forced = [], 0
    for n in (4, 5, 6):
        report = check_euler(n, homology_character_top(n), homology_character_next(n))
        if {e.cycle_type for e in report} != set(partitions_of(n)):
            bad.append(f"n={n}: classes missing from report")
        for e in report:
            if not e.ok:
                bad.append(f"n={n} class {e.cycle_type}: {e.coefficient} != {e.bracket}")
            if any(part not in (1, 2, 3, 6) for part in e.cycle_type):
                forced += 1
                if e.coefficient != 0:
                    bad.append(f"n={n} class {e.cycle_type}: expected zero coefficient")
    ok = not bad and forced > 0
    _report(6, "z2 coefficient identity n=4,5,6", ok,
            "; ".join(bad) or f"{forced} forced-zero classes included")


def test_07_n2_ground_truth():
    # canonical line strings for the five marked theta types on two markings:
    # T1 marks two arcs, T2/T3 mix an interior and a branch vertex, T4 marks
    # both branch vertices; the fifth puts both marks inside a single arc
    by_edges = {
        k: {to_line(g): has_odd_automorphism(g) for g in enumerate_theta(2, k, full_only=False)}
        for k in (3, 4, 5)
    }
    t1 = "a=-;b=-;p0=;p1=1;p2=2"
    expected = {
        3: {"a=1;b=2;p0=;p1=;p2=": True},
        4: {"a=-;b=1;p0=;p1=;p2=2": True, "a=-;b=2;p0=;p1=;p2=1": True},
        5: {"a=-;b=-;p0=;p1=;p2=1,2": True, t1: False},
    }
    bad = []
    if by_edges != expected:
        bad.append(f"enumeration: {by_edges}")
    # degree 4 of the bridge-relative complex is spanned by T1 alone and the
    # degree-3 group vanishes, so H_4 is the span of T1; the marking swap
    # fixes the generator with positive sign: the trivial representation
    survivors = [g for g in enumerate_theta(2, 5, full_only=False)
                 if not has_odd_automorphism(g)]
    if len(survivors) != 1 or to_line(survivors[0]) != t1:
        bad.append("degree-4 chain group is not spanned by T1")
    else:
        canon, sign = canonicalize(relabel(survivors[0], (1, 0)))
        if canon != survivors[0] or sign != 1:
            bad.append(f"mark swap acts by {sign}, expected +1 (trivial rep)")
    if any(build_basis(2, p).dim != 0 for p in (2, 3, 4)):
        bad.append("full-type basis should be empty for n=2")
    _report(7, "n=2 marked theta census and trivial H_4", not bad, "; ".join(bad))


def test_08_representation_theory_suite():
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 7):
        table = character_table(n)
        parts = partitions_of(n)
        factorial = math.factorial(n)
        sizes = [class_size(mu) for mu in parts]
        if sum(hook_dimension(lam) ** 2 for lam in parts) != factorial:
            bad.append(f"n={n}: sum of squared dimensions != n!")
        for lam in parts:
            row = table.row(lam)
            if int(row[0]) != hook_dimension(lam):
                bad.append(f"n={n} {lam}: identity column != hook dimension")
            for kap in parts:
                inner = sum(s * int(a) * int(b)
                            for s, a, b in zip(sizes, row, table.row(kap)))
                if inner != (factorial if lam == kap else 0):
                    bad.append(f"n={n}: rows {lam},{kap} not orthogonal")
    # trace of the natural matrices reproduces the recursive character values
    for n in range(2, 6):
        table = character_table(n)
        for lam in partitions_of(n):
            got = tuple(int(v) for v in specht_matrices(lam).character().values)
            if got != tuple(int(v) for v in table.row(lam)):
                bad.append(f"specht trace vs table: n={n} {lam}")
    rng = np.random.default_rng(17)
    for n, lam in ((4, (2, 2)), (5, (3, 1, 1))):
        rep = specht_matrices(lam)
        for _ in range(5):
            p = tuple(rng.permutation(n).tolist())
            q = tuple(rng.permutation(n).tolist())
            if not np.array_equal(rep.matrix(compose(p, q)),
                                  rep.matrix(p) @ rep.matrix(q)):
                bad.append(f"multiplicativity: n={n} {lam}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10.0
    _report(8, "symmetric group toolkit", ok, "; ".join(bad) or f"{dt:.1f}s")


def test_09_structural_properties():
    bad = []
    rng = np.random.default_rng(23)
    for n in (4, 5, 6):
        cx = build_complex(n)
        if not cx.d(n + 1).matmul(cx.d(n + 2)).is_zero():
            bad.append(f"n={n}: d.d != 0")
        if not is_surjective(cx.d(n + 1)):
            bad.append(f"n={n}: d_{n+1} not surjective")
        for p in (n + 1, n + 2):
            dmat = np.zeros((build_basis(n, p - 1).dim, build_basis(n, p).dim),
                            dtype=np.int64)
            for (r, c), v in boundary_matrix(n, p).entries():
                dmat[r, c] = int(v)
            for _ in range(3):
                sigma = tuple(rng.permutation(n).tolist())
                lo, hi = act(sigma, p - 1), act(sigma, p)
                lhs = hi.sign[None, :] * dmat[:, hi.image]
                rhs = np.empty_like(dmat)
                rhs[lo.image, :] = lo.sign[:, None] * dmat
                if not np.array_equal(lhs, rhs):
                    bad.append(f"n={n} p={p}: boundary not equivariant")
                    break
    # identical results under different parallelism budgets and seeds
    set_threads(1)
    a = homology_character_top(6, seed=101)
    set_threads(8)
    b = homology_character_top(6, seed=202)
    if a.as_ints() != b.as_ints():
        bad.append("thread/seed variation changed the n=6 character")
    x = np.arange(60, dtype=np.int64).reshape(60, 1) % 7 - 3
    if not np.array_equal(project_columns((3, 2), 5, 7, x, nblocks=1),
                          project_columns((3, 2), 5, 7, x, nblocks=3)):
        bad.append("projection depends on block decomposition")
    _report(9, "complex structure and determinism n=4,5,6", not bad, "; ".join(bad))


def test_10_n5_kernel_cycle_suite():
    from delta2n.d25_analysis import (
        apply_projector,
        equivariant_isomorphism,
        find_isotypic_cycle,
        orbit_basis,
        projection_on_kernel,
    )

    t0 = time.perf_counter()
    bad = []
    p311 = projection_on_kernel((3, 1, 1))
    if sum(p311[i, i] for i in range(15)) != 6:
        bad.append("isotypic dimension inside the kernel != 6")
    v = find_isotypic_cycle()
    dmat = np.zeros((60, 60), dtype=np.int64)
    for (r, c), val in boundary_matrix(5, 7).entries():
        dmat[r, c] = int(val)
    if np.any(dmat @ v):
        bad.append("found vector is not a cycle")
    if not np.array_equal(apply_projector((3, 1, 1), v), v.astype(object)):
        bad.append("found vector is not isotypic")
    vb = orbit_basis(v)  # raises unless rank is exactly 6
    if vb.shape != (60, 6):
        bad.append(f"orbit basis shape {vb.shape}")
    h0 = equivariant_isomorphism(vb)  # verifies intertwining for all 120
    if h0.shape != (6, 6):
        bad.append(f"intertwiner shape {h0.shape}")
    if np.linalg.matrix_rank(np.array(h0, dtype=float)) != 6:
        bad.append("intertwiner is singular")
    ref = np.loadtxt(DATA / "reference_projector_15x15.txt", dtype=np.int64)
    if not np.array_equal(ref @ ref, 20 * ref) or np.trace(ref) != 120:
        bad.append("reference projector fails scaled idempotency")
    ih = np.loadtxt(DATA / "reference_intertwiner_6x6.txt", dtype=np.int64)
    if set(np.abs(ih).flatten().tolist()) != {20}:
        bad.append("reference intertwiner entries not +-20")
    if np.linalg.matrix_rank(ih.astype(float)) != 6:
        bad.append("reference intertwiner singular")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60.0
    _report(10, "n=5 isotypic cycle analysis", ok, "; ".join(bad) or f"{dt:.1f}s")
