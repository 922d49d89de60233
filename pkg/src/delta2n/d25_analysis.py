"""Explicit structure of the (3,1,1)-isotypic part of the top homology at
n = 5: an isotypic cycle with a 5-cycle orbit structure, the projection onto
the isotypic subspace in kernel coordinates, an orbit basis under the
permutations of the first three markings, and an explicit equivariant
isomorphism onto the Specht module.

Chain vectors are plain numpy arrays (length 60, integer or Fraction entries)
indexed by the n=5, degree-7 chain basis.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np

from .chain_complex import InternalConsistencyError, boundary_matrix, build_basis
from .equivariant_homology import act
from .linalg import SparseRationalMatrix, kernel_exact, rank_exact
from .symmetric_group import (
    cycle_type,
    hook_dimension,
    irreducible_character,
    partitions_of,
    specht_matrices,
)

N = 5
TOP_DEGREE = 7


class DegenerateVectorError(RuntimeError):
    """The marked-point orbit of the vector fails to span the subspace."""


class WrongIsotypeError(RuntimeError):
    """The averaged intertwiner vanished, so the source isotype was wrong."""


_KERNEL_MEMO: list = []
_ACT_MEMO: dict = {}


def _kernel():
    if not _KERNEL_MEMO:
        d = boundary_matrix(N, TOP_DEGREE)
        _, kern, pivots, free = kernel_exact(d)
        _KERNEL_MEMO.append((kern, pivots, free))
    return _KERNEL_MEMO[0]


def _act_tables(pi):
    if pi not in _ACT_MEMO:
        _ACT_MEMO[pi] = act(pi, TOP_DEGREE).gather_tables()
    return _ACT_MEMO[pi]


def _dense_boundary():
    d = boundary_matrix(N, TOP_DEGREE)
    out = np.zeros((d.rows, d.cols), dtype=np.int64)
    for (r, c), v in d.entries():
        out[r, c] = int(v)
    return out


def apply_projector(lam, x):
    """(d_lam/120) * sum_pi chi_lam(pi) A_pi x, exactly."""
    chi = irreducible_character(lam)
    acc = np.zeros(x.shape, dtype=object)
    xo = x.astype(object)
    for pi in permutations(range(N)):
        c = chi.at(cycle_type(pi))
        if not c:
            continue
        gidx, gsgn = _act_tables(pi)
        signs = gsgn.astype(object) if xo.ndim == 1 else gsgn.astype(object)[:, None]
        acc = acc + c * (signs * xo[gidx])
    scale = Fraction(hook_dimension(lam), factorial(N))
    return np.vectorize(lambda t: scale * t, otypes=[object])(acc)


def projection_on_kernel(lam):
    """Matrix of the lam-isotypic projector in kernel-basis coordinates."""
    kern, pivots, free = _kernel()
    pk = apply_projector(lam, kern)
    m = pk[free]  # kernel rows at free indices form the identity
    check = kern[pivots].dot(m) if len(pivots) else np.zeros((0, m.shape[1]), object)
    if not np.array_equal(check, pk[pivots]):
        raise InternalConsistencyError("projector does not preserve the kernel")
    return m


def _orbit_sum(a_pi, signed_e):
    """sum_{i=0}^{4} A_pi^i applied to a signed coordinate vector."""
    out = np.zeros(signed_e.shape[0], dtype=np.int64)
    cur = signed_e.copy()
    for _ in range(N):
        out += cur
        cur = a_pi.apply(cur)
    return out


def _path_shape(g):
    return tuple(sorted(len(p) for p in g.paths))


def find_isotypic_cycle(lam=(3, 1, 1)):
    """Deterministic search for a nonzero lam-isotypic cycle of orbit form.

    Looks for v = sum_i pi^i u, pi the 5-cycle, u a 4-term +-1 combination of
    basis graphs using both path shapes (two of each), with d v = 0 and
    P_lam v = v. Falls back to projecting a fixed random vector if the
    structured search fails.
    """
    basis = build_basis(N, TOP_DEGREE)
    d = _dense_boundary()
    pi = tuple(list(range(1, N)) + [0])
    a_pi = act(pi, TOP_DEGREE)
    dim = basis.dim

    orbits = []
    for g in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[g] = 1
        orbits.append(_orbit_sum(a_pi, e))
    bvecs = [d @ o for o in orbits]
    shapes = [_path_shape(g) for g in basis.graphs]

    # hash signed pair sums of orbit boundaries, then look for a second pair
    # cancelling the first (meet in the middle over 4-term supports)
    pair_index = {}
    pairs = []
    for g1 in range(dim):
        for g2 in range(g1 + 1, dim):
            for s2 in (1, -1):
                pair_index.setdefault(tuple(bvecs[g1] + s2 * bvecs[g2]), []).append(
                    len(pairs)
                )
                pairs.append((g1, g2, s2))

    wanted = sorted([(1, 1, 3), (1, 1, 3), (1, 2, 2), (1, 2, 2)])
    for require_shapes in (True, False):
        for idx, (g1, g2, s2) in enumerate(pairs):
            b12 = bvecs[g1] + s2 * bvecs[g2]
            for flip, key in ((1, tuple(-b12)), (-1, tuple(b12))):
                for jdx in pair_index.get(key, []):
                    if jdx <= idx:
                        continue
                    g3, g4, s4 = pairs[jdx]
                    support = (g1, g2, g3, g4)
                    if len(set(support)) < 4:
                        continue
                    shape_list = sorted(shapes[g] for g in support)
                    if require_shapes and shape_list != wanted:
                        continue
                    if not require_shapes and len(set(shape_list)) < 2:
                        continue
                    v = (
                        orbits[g1]
                        + s2 * orbits[g2]
                        + flip * orbits[g3]
                        + flip * s4 * orbits[g4]
                    )
                    if not v.any() or (d @ v).any():
                        continue
                    pv = apply_projector(lam, v)
                    if np.array_equal(pv, v.astype(object)):
                        return v.astype(object)

    # fallback: project a fixed seeded vector into the isotypic subspace
    rng = np.random.default_rng(20250819)
    x = rng.integers(-9, 10, size=dim).astype(np.int64)
    pv = apply_projector(lam, x)
    if not pv.any() or (d.astype(object) @ pv).any():
        raise InternalConsistencyError("fallback projection produced no cycle")
    return pv


def marked_triple_perms():
    """The six permutations of markings 0,1,2 fixing 3 and 4."""
    out = []
    for s in permutations(range(3)):
        out.append(tuple(list(s) + [3, 4]))
    return out


def orbit_basis(v):
    """{sigma v} over the six marked-triple permutations, rank-certified."""
    cols = []
    for sigma in marked_triple_perms():
        gidx, gsgn = _act_tables(sigma)
        cols.append(gsgn.astype(object) * np.asarray(v, dtype=object)[gidx])
    vb = np.stack(cols, axis=1)
    mat = SparseRationalMatrix.from_dense(vb)
    if rank_exact(mat) != 6:
        raise DegenerateVectorError("orbit of the vector has rank < 6")
    return vb


def _fraction_inverse(m):
    """Exact inverse of a small invertible Fraction matrix."""
    k = m.shape[0]
    aug = [[Fraction(m[i, j]) for j in range(k)] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            raise WrongIsotypeError("matrix not invertible")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        aug[col] = [a / pval for a in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    out = np.empty((k, k), dtype=object)
    for i in range(k):
        for j in range(k):
            out[i, j] = aug[i][k + j]
    return out


def _pivot_rows(vb):
    """Six rows of the 60x6 basis matrix forming an invertible 6x6 block."""
    rows, chosen = [], []
    work = []
    for r in range(vb.shape[0]):
        cand = work + [[Fraction(x) for x in vb[r]]]
        mat = SparseRationalMatrix.from_dense(np.array(cand, dtype=object))
        if rank_exact(mat) == len(cand):
            work = cand
            chosen.append(r)
            if len(chosen) == 6:
                return chosen
    raise DegenerateVectorError("basis matrix has rank < 6")


def representation_on_span(vb):
    """rho1: group element -> 6x6 exact matrix of its action on span(vb)."""
    pivots = _pivot_rows(vb)
    block_inv = _fraction_inverse(vb[pivots])
    reps = {}
    for pi in permutations(range(N)):
        gidx, gsgn = _act_tables(pi)
        avb = gsgn.astype(object)[:, None] * vb[gidx]
        rho = block_inv.dot(avb[pivots])
        if not np.array_equal(vb.dot(rho), avb):
            raise DegenerateVectorError("span is not invariant under the group")
        reps[pi] = rho
    return reps


def equivariant_isomorphism(vb, specht=None):
    """h0 = sum_pi rho2(pi^{-1}) . h . rho1(pi): an explicit intertwiner.

    h is the identity-shaped seed map; averaging makes h0 equivariant, so by
    Schur it is zero (wrong isotype) or an isomorphism.
    """
    rep = specht if specht is not None else specht_matrices((3, 1, 1))
    rho1 = representation_on_span(vb)
    width = vb.shape[1]
    seed = np.eye(rep.dim, width, dtype=np.int64).astype(object)
    h0 = np.zeros((rep.dim, width), dtype=object)
    for pi in permutations(range(N)):
        inv = tuple(np.argsort(pi).tolist())
        h0 = h0 + rep.matrix(inv).astype(object).dot(seed).dot(rho1[pi])
    if not h0.any():
        raise WrongIsotypeError("averaged intertwiner is zero")
    for pi, r1 in rho1.items():
        if not np.array_equal(h0.dot(r1), rep.matrix(pi).astype(object).dot(h0)):
            raise InternalConsistencyError("intertwining identity failed")
    if rep.dim != width or rank_exact(SparseRationalMatrix.from_dense(h0)) != rep.dim:
        raise WrongIsotypeError("intertwiner is singular")
    return h0
