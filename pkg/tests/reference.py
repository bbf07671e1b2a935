"""Independent reference implementations used only as test oracles.

These scan the full quantifier ranges directly with numpy broadcasting and
share no code with the quadratic-time deciders they check.
"""

from __future__ import annotations

import numpy as np

from qmconvex import BudgetExceededError, QuadraticInstance, enumerate_domain


def _violates_ge(lhs: np.ndarray, rhs: np.ndarray, eps: float) -> np.ndarray:
    """Elementwise failure of lhs >= rhs with relative slack, +inf aware."""
    lhs_inf = np.isinf(lhs)
    rhs_inf = np.isinf(rhs)
    both = ~lhs_inf & ~rhs_inf
    lhs_f = np.where(both, lhs, 0.0)
    rhs_f = np.where(both, rhs, 0.0)
    tol = eps * np.maximum(1.0, np.maximum(np.abs(lhs_f), np.abs(rhs_f)))
    return (~lhs_inf & rhs_inf) | (both & (lhs_f < rhs_f - tol))


def scan_anti_tree_metric(inst: QuadraticInstance, eps: float = 1e-9) -> bool:
    """a_ij + a_kl >= min(a_ik + a_jl, a_il + a_jk) over all distinct
    quadruples, checked by brute force over the full 4-index range."""
    n = inst.n
    a = np.where(np.eye(n, dtype=bool), 0.0, inst.quad)
    s_ij_kl = a[:, :, None, None] + a[None, None, :, :]
    s_ik_jl = a[:, None, :, None] + a[None, :, None, :]
    s_il_jk = a[:, None, None, :] + a[None, :, :, None]
    rhs = np.minimum(s_ik_jl, s_il_jk)
    viol = _violates_ge(s_ij_kl, rhs, eps)
    idx = np.arange(n)
    distinct = (
        (idx[:, None, None, None] != idx[None, :, None, None])
        & (idx[:, None, None, None] != idx[None, None, :, None])
        & (idx[:, None, None, None] != idx[None, None, None, :])
        & (idx[None, :, None, None] != idx[None, None, :, None])
        & (idx[None, :, None, None] != idx[None, None, None, :])
        & (idx[None, None, :, None] != idx[None, None, None, :])
    )
    return not bool((viol & distinct).any())


def _cross_equalities_ok(block: np.ndarray, eps: float) -> bool:
    """M[i,j] + M[k,l] == M[i,l] + M[k,j] for all i != k, j != l."""
    assert np.isfinite(block).all()
    lhs = block[:, :, None, None] + block[None, None, :, :]
    rhs = block[:, None, None, :] + block.T[None, :, :, None]
    rows = np.arange(block.shape[0])
    cols = np.arange(block.shape[1])
    distinct = (rows[:, None, None, None] != rows[None, None, :, None]) & (
        cols[None, :, None, None] != cols[None, None, None, :]
    )
    tol = eps * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return not bool(((np.abs(lhs - rhs) > tol) & distinct).any())


def scan_type2_equalities(inst: QuadraticInstance, big, eps: float = 1e-9) -> bool:
    """Full quantifier range of the type-II condition: every big component
    against everything outside it."""
    all_idx = np.arange(inst.n)
    for comp in big:
        rows = np.asarray(comp) - 1
        cols = np.setdiff1d(all_idx, rows, assume_unique=True)
        if len(cols) < 2:
            continue
        if not _cross_equalities_ok(inst.quad[np.ix_(rows, cols)], eps):
            return False
    return True


def scan_type3_equalities(inst: QuadraticInstance, big, eps: float = 1e-9) -> bool:
    """Full quantifier range of the type-III condition: every ordered pair
    of distinct big components."""
    arrays = [np.asarray(comp) - 1 for comp in big]
    for a in range(len(arrays)):
        for b in range(len(arrays)):
            if a == b:
                continue
            if not _cross_equalities_ok(inst.quad[np.ix_(arrays[a], arrays[b])], eps):
                return False
    return True


def anti_ultrametric_triples(matrix: np.ndarray, eps: float = 1e-9) -> bool:
    """Direct O(n^3) scan of m_ij >= min(m_ik, m_jk) over distinct triples."""
    n = matrix.shape[0]
    m = np.where(np.eye(n, dtype=bool), 0.0, matrix)
    lhs = np.broadcast_to(m[:, :, None], (n, n, n))
    rhs = np.minimum(m[:, None, :], m[None, :, :])
    idx = np.arange(n)
    distinct = (
        (idx[:, None, None] != idx[None, :, None])
        & (idx[:, None, None] != idx[None, None, :])
        & (idx[None, :, None] != idx[None, None, :])
    )
    return not bool((_violates_ge(lhs, rhs, eps) & distinct).any())


def condition_a_by_enumeration(inst: QuadraticInstance) -> bool | None:
    """Every index appears in some feasible point; None when enumeration
    is out of budget."""
    try:
        domain = enumerate_domain(inst)
    except BudgetExceededError:
        return None
    touched: set[int] = set()
    for support in domain.supports:
        touched.update(support)
    return bool(domain.supports) and len(touched) == inst.n
