"""Quadratic-time deciders and the top-level testing pipeline.

Type I instances are normalized (global minimum subtracted via per-index
offsets) and accepted iff the reduced matrix satisfies the reversed
ultrametric inequality a_ij >= min(a_ik, a_jk).  That property is checked
in O(n^2) by decomposing the matrix into a laminar family of plateaus and
rebuilding it: the rebuild matches the input exactly when the property
holds.

Type II and III instances reduce to additive rank-one structure on cross
blocks, checked through adjacent 2x2 equalities that propagate to all
index pairs.

The pipeline short-circuits the degenerate slices r = 1 and r = n-1,
rejects on a failed condition B when condition A is assumed, falls back
to the enumeration oracle on small instances otherwise, and dispatches to
the typed decider after classification.  Witness extraction is a separate
O(n^4) explain mode so the decision path stays quadratic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from . import oracle, structure
from .core import (
    DEFAULT_EPSILON,
    INVALID_INSTANCE,
    M_CONVEX,
    NOT_M_CONVEX,
    QUADRUPLE_VIOLATION,
    UNDECIDED,
    InternalInconsistencyError,
    QuadraticInstance,
    Verdict,
    Witness,
    approx_gt,
)
from .structure import DOM_EMPTY, TYPE_I, TYPE_II, TYPE_III

#: Default cap on C(n, r) for the brute-force fallback of the pipeline.
DEFAULT_BRUTE_FORCE_BUDGET = 20_000


@dataclass(frozen=True, eq=False)
class NormalizedMatrix:
    """Coefficients after stripping per-index offsets.

    global_min is the smallest pair coefficient overall; row_offsets[i] is
    the surplus of row i's minimum over global_min; reduced subtracts both
    endpoint offsets from every pair (infinite entries stay infinite).  On
    instances that pass the type-I test, every row of ``reduced`` attains
    global_min.
    """

    n: int
    global_min: float
    row_offsets: np.ndarray
    reduced: np.ndarray


@dataclass(eq=False)
class LaminarNode:
    """One plateau: a vertex set with its coefficient value.

    ``direct`` holds the 0-based members not owned by any child.  The
    node's full member set is the union of its subtree's direct members.
    """

    value: float
    direct: list[int] = field(default_factory=list)
    children: list["LaminarNode"] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class LaminarFamily:
    """Nested plateau sets certifying the reversed ultrametric inequality.

    The root covers all of [n]; strictly deeper sets carry strictly larger
    values (possibly +inf).
    """

    n: int
    root: LaminarNode

    def sets(self) -> list[tuple[frozenset, float]]:
        """All (member set, value) pairs, 1-based, in preorder."""
        out: list[tuple[frozenset, float]] = []
        # iterative post-order accumulation; deep chains must not recurse
        stack: list[tuple[LaminarNode, int, set, int]] = [
            (self.root, 0, {i + 1 for i in self.root.direct}, 0)
        ]
        out.append((frozenset(), self.root.value))
        while stack:
            node, child_idx, members, pos = stack[-1]
            if child_idx < len(node.children):
                child = node.children[child_idx]
                stack[-1] = (node, child_idx + 1, members, pos)
                child_members = {i + 1 for i in child.direct}
                out.append((frozenset(), child.value))
                stack.append((child, 0, child_members, len(out) - 1))
                continue
            stack.pop()
            out[pos] = (frozenset(members), node.value)
            if stack:
                stack[-1][2].update(members)
        return out


def normalize_type1(instance: QuadraticInstance) -> NormalizedMatrix:
    """Strip per-index offsets so plateau structure becomes visible.

    Requires every row to contain a finite entry, which classification as
    type I guarantees (at least two components exist).
    """
    n = instance.n
    quad = instance.quad
    # the NaN diagonal drops out of the nan-aware reductions
    global_min = float(np.nanmin(quad))
    if math.isinf(global_min):
        raise InternalInconsistencyError("all pair coefficients are infinite")
    row_min = np.nanmin(quad, axis=1)
    if np.isinf(row_min).any():
        raise InternalInconsistencyError("a row contains no finite coefficient")
    offsets = row_min - global_min
    reduced = quad - offsets[:, None] - offsets[None, :]
    return NormalizedMatrix(n, global_min, offsets, reduced)


def decompose(normalized: NormalizedMatrix, eps: float = DEFAULT_EPSILON) -> LaminarFamily:
    """Split [n] into nested plateaus by repeated pivot partitioning.

    Each step takes the smallest index of the current set as pivot,
    gathers the pivot-row minimum e and its argmin set X, records the
    current set as a plateau when e strictly exceeds the inherited value
    (ties merge), and recurses on X and its complement.  Recursion stops
    on singletons and below +inf plateaus.  O(n^2) total.
    """
    reduced = normalized.reduced
    root = LaminarNode(value=normalized.global_min)
    stack: list[tuple[np.ndarray, float, LaminarNode]] = [
        (np.arange(normalized.n, dtype=np.intp), normalized.global_min, root)
    ]
    while stack:
        members, inherited, parent = stack.pop()
        if members.size <= 1 or math.isinf(inherited):
            parent.direct.extend(int(v) for v in members)
            continue
        pivot = members[0]
        rest = members[1:]
        row = reduced[pivot, rest]
        e = float(row.min())
        if math.isinf(e):
            mask = np.isinf(row)
        else:
            finite = np.isfinite(row)
            scale = np.maximum(1.0, np.maximum(np.where(finite, np.abs(row), 0.0), abs(e)))
            mask = finite & (np.abs(row - e) <= eps * scale)
        argmin = rest[mask]
        complement = np.concatenate(([pivot], rest[~mask]))
        node = parent
        value = inherited
        if approx_gt(e, inherited, eps):
            node = LaminarNode(value=e)
            parent.children.append(node)
            value = e
        stack.append((complement, value, node))
        stack.append((argmin, value, node))
    _sort_directs(root)
    return LaminarFamily(normalized.n, root)


def _sort_directs(root: LaminarNode) -> None:
    todo = [root]
    while todo:
        node = todo.pop()
        node.direct.sort()
        todo.extend(node.children)


def reconstruct(family: LaminarFamily, n: int) -> np.ndarray:
    """Matrix implied by the family: each pair gets the value of the
    smallest plateau containing both indices.

    Walks the tree once, assigning every unordered pair exactly once:
    pairs among a node's direct members at the node's value, and pairs
    between a finished child subtree and the part of the node processed
    before it, again at the node's value.  O(n^2) total.
    """
    out = np.full((n, n), np.nan)

    class Frame:
        __slots__ = ("node", "next_child", "seen")

        def __init__(self, node: LaminarNode) -> None:
            self.node = node
            self.next_child = 0
            self.seen = np.asarray(node.direct, dtype=np.intp)
            if self.seen.size:
                out[np.ix_(self.seen, self.seen)] = node.value

    stack = [Frame(family.root)]
    covered = None
    while stack:
        frame = stack[-1]
        if frame.next_child < len(frame.node.children):
            child = frame.node.children[frame.next_child]
            frame.next_child += 1
            stack.append(Frame(child))
            continue
        stack.pop()
        if stack:
            parent = stack[-1]
            if frame.seen.size and parent.seen.size:
                out[np.ix_(frame.seen, parent.seen)] = parent.node.value
                out[np.ix_(parent.seen, frame.seen)] = parent.node.value
            parent.seen = np.concatenate([parent.seen, frame.seen])
        else:
            covered = frame.seen
    if covered is None or covered.size != n:
        raise InternalInconsistencyError("laminar family does not cover the ground set")
    np.fill_diagonal(out, np.nan)
    if np.isnan(out[~np.eye(n, dtype=bool)]).any():
        raise InternalInconsistencyError("reconstruction left unassigned pairs")
    return out


def check_anti_ultrametric(
    normalized: NormalizedMatrix, eps: float = DEFAULT_EPSILON
) -> bool:
    """True iff reduced[i][j] >= min(reduced[i][k], reduced[j][k]) for all
    distinct triples, decided by rebuild-and-compare in O(n^2)."""
    family = decompose(normalized, eps)
    rebuilt = reconstruct(family, normalized.n)
    return _matrices_match(normalized.reduced, rebuilt, eps)


def _matrices_match(a: np.ndarray, b: np.ndarray, eps: float) -> bool:
    if not np.array_equal(np.isinf(a), np.isinf(b)):
        return False
    # |a - b| is NaN exactly at matched infinities and on the diagonal,
    # both of which count as equal; NaN compares false, so test for "bad"
    with np.errstate(invalid="ignore"):
        diff = np.abs(a - b)
        scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        bad = diff > eps * scale
    return not bool(bad.any())


# ---------------------------------------------------------------------------
# Typed deciders


def test_type1(instance: QuadraticInstance, eps: float = DEFAULT_EPSILON) -> Verdict:
    """Type I: normalize, then decide the reversed ultrametric inequality."""
    normalized = normalize_type1(instance)
    ok = check_anti_ultrametric(normalized, eps)
    return Verdict(
        M_CONVEX if ok else NOT_M_CONVEX,
        method="algorithm-I",
        type_label=TYPE_I,
        epsilon=eps,
    )


def _adjacent_2x2_ok(block: np.ndarray, eps: float) -> bool:
    # block rows/cols are cross pairs, all finite under condition B
    if np.isinf(block).any():
        raise InternalInconsistencyError("infinite coefficient in a cross block")
    if block.shape[0] < 2 or block.shape[1] < 2:
        return True
    lhs = block[:-1, :-1] + block[1:, 1:]
    rhs = block[1:, :-1] + block[:-1, 1:]
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return bool((np.abs(lhs - rhs) <= eps * scale).all())


def test_type2(
    instance: QuadraticInstance,
    decomposition: structure.ComponentDecomposition,
    eps: float = DEFAULT_EPSILON,
) -> Verdict:
    """Type II: for every big component, the block against everything else
    must satisfy all adjacent 2x2 additive equalities, which propagate to
    a_ij + a_kl = a_il + a_jk for all i,k inside and j,l outside."""
    all_idx = np.arange(instance.n, dtype=np.intp)
    ok = True
    for comp in decomposition.big:
        rows = np.asarray(comp, dtype=np.intp) - 1
        cols = np.setdiff1d(all_idx, rows, assume_unique=True)
        block = instance.quad[np.ix_(rows, cols)]
        if not _adjacent_2x2_ok(block, eps):
            ok = False
            break
    return Verdict(
        M_CONVEX if ok else NOT_M_CONVEX,
        method="algorithm-II",
        type_label=TYPE_II,
        epsilon=eps,
    )


def test_type3(
    instance: QuadraticInstance,
    decomposition: structure.ComponentDecomposition,
    eps: float = DEFAULT_EPSILON,
) -> Verdict:
    """Type III: same 2x2 propagation on each block between two distinct
    big components."""
    ok = True
    big = [np.asarray(c, dtype=np.intp) - 1 for c in decomposition.big]
    for a in range(len(big)):
        for b in range(a + 1, len(big)):
            block = instance.quad[np.ix_(big[a], big[b])]
            if not _adjacent_2x2_ok(block, eps):
                ok = False
                break
        if not ok:
            break
    return Verdict(
        M_CONVEX if ok else NOT_M_CONVEX,
        method="algorithm-III",
        type_label=TYPE_III,
        epsilon=eps,
    )


# ---------------------------------------------------------------------------
# Degenerate slices r = 1 and r = n-1


def _slice_linear_verdict(instance: QuadraticInstance, eps: float) -> Verdict:
    """r = 1 or r = n-1: the objective is linear on its slice, so only the
    domain set matters; check its exchange property directly.

    The domain has at most n points.  For r = 1 every singleton is
    feasible; for r = n-1 the complement of {i} is feasible iff every
    infinite pair touches i.  In both cases a swap maps a feasible pair
    (x, y) to (y, x), which the loop below verifies in O(n^2).
    """
    n, r = instance.n, instance.r
    if r == 1:
        members = list(range(1, n + 1))
    else:
        # the complement of {i} is feasible iff i covers every infinite pair
        inf_pairs = np.argwhere(np.isinf(np.triu(instance.quad, 1)))
        if len(inf_pairs) == 0:
            members = list(range(1, n + 1))
        else:
            cover = {int(inf_pairs[0][0]) + 1, int(inf_pairs[0][1]) + 1}
            for a, b in inf_pairs[1:]:
                cover &= {int(a) + 1, int(b) + 1}
                if not cover:
                    break
            members = sorted(cover)
    if not members:
        return Verdict(INVALID_INSTANCE, method="slice-linear", epsilon=eps)
    member_set = set(members)
    ok = True
    for a in members:
        for b in members:
            if a == b:
                continue
            # dropping the index that distinguishes x from y and adding the
            # other one lands exactly on (y, x)
            if a not in member_set or b not in member_set:
                ok = False
                break
        if not ok:
            break
    return Verdict(
        M_CONVEX if ok else NOT_M_CONVEX, method="slice-linear", epsilon=eps
    )


# ---------------------------------------------------------------------------
# Pipeline


def test_mconvexity(
    instance: QuadraticInstance,
    *,
    assume_condition_a: bool = False,
    brute_force_budget: int = DEFAULT_BRUTE_FORCE_BUDGET,
    eps: float = DEFAULT_EPSILON,
    explain: bool = False,
    oracle_max_checks: int = oracle.DEFAULT_MAX_CHECKS,
) -> Verdict:
    """Decide M-convexity.

    Policy: short-circuit degenerate r; if some infinite component is not
    a clique then the answer is no under condition A, otherwise fall back
    to the enumeration oracle when C(n, r) fits the budget and report
    undecided beyond it; with clique components, classify by component
    count and run the quadratic-time decider for the type.  In explain
    mode a rejecting typed verdict carries a violating quadruple.
    """
    n, r = instance.n, instance.r
    if r == 1 or r == n - 1:
        return _slice_linear_verdict(instance, eps)
    graph = structure.build_infinity_graph(instance)
    decomposition = structure.decompose_components(graph)
    b_ok, b_witness = structure.check_condition_b(graph, decomposition)
    if not b_ok:
        if assume_condition_a:
            return Verdict(
                NOT_M_CONVEX, method="condition-b", witness=b_witness, epsilon=eps
            )
        if math.comb(n, r) <= brute_force_budget:
            return oracle.exchange_axiom_holds(
                instance, eps=eps, max_candidates=brute_force_budget + 1,
                max_checks=oracle_max_checks,
            )
        return Verdict(UNDECIDED, method="budget-exceeded", epsilon=eps)
    type_label = structure.classify(decomposition, r)
    if type_label == DOM_EMPTY:
        return Verdict(INVALID_INSTANCE, method="domain-empty", epsilon=eps)
    if type_label == TYPE_I:
        verdict = test_type1(instance, eps)
    elif type_label == TYPE_II:
        verdict = test_type2(instance, decomposition, eps)
    else:
        verdict = test_type3(instance, decomposition, eps)
    if explain and verdict.status == NOT_M_CONVEX and verdict.witness is None:
        quad = find_violation_quadruple(instance, decomposition, type_label, eps)
        if quad is None:
            raise InternalInconsistencyError(
                "typed decider rejected but the full scan found no quadruple"
            )
        verdict = replace(verdict, witness=Witness(QUADRUPLE_VIOLATION, indices=quad))
    return verdict


# ---------------------------------------------------------------------------
# Witness extraction (explain mode, O(n^4))


def _min_attained_once(sums: tuple[float, float, float], eps: float) -> bool:
    smallest = min(sums)
    if math.isinf(smallest):
        return False
    hits = 0
    for s in sums:
        if math.isinf(s):
            continue
        scale = max(1.0, abs(s), abs(smallest))
        if abs(s - smallest) <= eps * scale:
            hits += 1
    return hits == 1


def find_violation_quadruple(
    instance: QuadraticInstance,
    decomposition: structure.ComponentDecomposition,
    type_label: str,
    eps: float = DEFAULT_EPSILON,
) -> tuple[int, int, int, int] | None:
    """First quadruple (1-based) violating the type's condition.

    A quadruple violates iff its three pairing sums a_ij + a_kl,
    a_ik + a_jl, a_il + a_jk attain their minimum exactly once.  Type I
    scans all quadruples; types II and III scan only those in the
    condition's quantifier range (two indices inside one big component,
    respectively one big component against another).
    """
    quad = instance.quad

    def sums(i: int, j: int, k: int, l: int):
        return (
            quad[i, j] + quad[k, l],
            quad[i, k] + quad[j, l],
            quad[i, l] + quad[j, k],
        )

    if type_label == TYPE_I:
        for combo in combinations(range(instance.n), 4):
            if _min_attained_once(sums(*combo), eps):
                return tuple(v + 1 for v in combo)
        return None
    if type_label == TYPE_II:
        universe = set(range(instance.n))
        for comp in decomposition.big:
            inside = [v - 1 for v in comp]
            outside = sorted(universe - set(inside))
            for i in inside:
                for j in outside:
                    for k in inside:
                        if k <= i:
                            continue
                        for l in outside:
                            if l <= j:
                                continue
                            if _min_attained_once(sums(i, j, k, l), eps):
                                return (i + 1, j + 1, k + 1, l + 1)
        return None
    if type_label == TYPE_III:
        big = [[v - 1 for v in comp] for comp in decomposition.big]
        for a in range(len(big)):
            for b in range(a + 1, len(big)):
                for i in big[a]:
                    for j in big[b]:
                        for k in big[a]:
                            if k <= i:
                                continue
                            for l in big[b]:
                                if l <= j:
                                    continue
                                if _min_attained_once(sums(i, j, k, l), eps):
                                    return (i + 1, j + 1, k + 1, l + 1)
        return None
    raise ValueError(f"no quadruple condition for type {type_label!r}")
