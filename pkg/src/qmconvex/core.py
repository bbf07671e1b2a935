"""Instance model, value conventions, and the canonical JSON format.

Coefficients take values in R together with +inf, where +inf marks a
forbidden pair: any finite value is smaller than +inf, and adding +inf to
anything gives +inf.  NaN and -inf are rejected everywhere.

The symmetric coefficient matrix is stored densely with NaN on the
diagonal; the diagonal is structurally absent (the objective sums over
i < j only) and nothing may read it.  Indices are 1-based wherever a user
sees them (documents, witnesses, function arguments) and 0-based inside
the numpy arrays.

Every type is immutable after construction and every operation returns a
new object, so values are safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

INF = math.inf

#: Default relative tolerance for equality of finite values.  Two finite
#: numbers x, y are considered equal when |x - y| <= eps * max(1, |x|, |y|).
DEFAULT_EPSILON = 1e-9

# Verdict statuses.
M_CONVEX = "m_convex"
NOT_M_CONVEX = "not_m_convex"
UNDECIDED = "undecided"
INVALID_INSTANCE = "invalid_instance"

# Witness kinds.
EXCHANGE_VIOLATION = "exchange_violation"
QUADRUPLE_VIOLATION = "quadruple_violation"
DOMAIN_VIOLATION = "domain_violation"


class InstanceFormatError(ValueError):
    """Malformed instance document or invalid field values."""


class BudgetExceededError(RuntimeError):
    """A brute-force routine would exceed its work budget."""


class InternalInconsistencyError(RuntimeError):
    """A state that the caller's preconditions rule out was observed."""


# ---------------------------------------------------------------------------
# Tolerant comparisons on R ∪ {+inf}


def tolerance(x: float, y: float, eps: float = DEFAULT_EPSILON) -> float:
    """Absolute slack used when comparing the finite values x and y."""
    return eps * max(1.0, abs(x), abs(y))


def approx_eq(x: float, y: float, eps: float = DEFAULT_EPSILON) -> bool:
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= tolerance(x, y, eps)


def approx_le(x: float, y: float, eps: float = DEFAULT_EPSILON) -> bool:
    if math.isinf(x) or math.isinf(y):
        return x <= y
    return x <= y + tolerance(x, y, eps)


def approx_gt(x: float, y: float, eps: float = DEFAULT_EPSILON) -> bool:
    """True when x exceeds y by more than the shared tolerance."""
    if math.isinf(x) or math.isinf(y):
        return x > y
    return x > y + tolerance(x, y, eps)


def approx_lt(x: float, y: float, eps: float = DEFAULT_EPSILON) -> bool:
    return approx_gt(y, x, eps)


def as_coefficient(value: float, *, allow_inf: bool = True) -> float:
    """Validate a single coefficient: finite float, or +inf when allowed."""
    v = float(value)
    if math.isnan(v):
        raise InstanceFormatError("NaN is not a valid coefficient")
    if v == -INF:
        raise InstanceFormatError("-inf is not representable")
    if not allow_inf and math.isinf(v):
        raise InstanceFormatError("coefficient must be finite")
    return v


# ---------------------------------------------------------------------------
# Instance model


@dataclass(frozen=True, eq=False)
class QuadraticInstance:
    """A quadratic objective restricted to the size-r slice of {0,1}^n.

    f(x) = sum_i linear[i] x_i + sum_{i<j} quad[i][j] x_i x_j on the slice
    sum_i x_i = r, and +inf off the slice.  ``quad`` is an n-by-n float
    array, exactly symmetric off the diagonal, with +inf for forbidden
    pairs and NaN on the (unused) diagonal.
    """

    n: int
    r: int
    linear: np.ndarray
    quad: np.ndarray

    def __post_init__(self) -> None:
        n, r = self.n, self.r
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            raise InstanceFormatError("n must be an integer >= 2")
        if not isinstance(r, int) or isinstance(r, bool) or not 1 <= r <= n - 1:
            raise InstanceFormatError(f"r must satisfy 1 <= r <= n-1, got r={r}")
        linear = np.array(self.linear, dtype=float)
        quad = np.array(self.quad, dtype=float)
        if linear.shape != (n,):
            raise InstanceFormatError("linear coefficients must have length n")
        if not np.isfinite(linear).all():
            raise InstanceFormatError("linear coefficients must be finite")
        if quad.shape != (n, n):
            raise InstanceFormatError("quadratic coefficients must form an n x n array")
        if not np.isnan(np.diagonal(quad)).all():
            raise InstanceFormatError("diagonal entries are structurally absent (NaN)")
        if int(np.isnan(quad).sum()) != n:  # NaN nowhere but the diagonal
            raise InstanceFormatError("NaN is not a valid coefficient")
        if np.isneginf(quad).any():
            raise InstanceFormatError("-inf is not representable")
        if not np.array_equal(quad, quad.T, equal_nan=True):
            raise InstanceFormatError("quadratic coefficients must be symmetric")
        linear.flags.writeable = False
        quad.flags.writeable = False
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quad", quad)

    @classmethod
    def from_entries(
        cls,
        n: int,
        r: int,
        entries: Mapping[tuple[int, int], float] | Iterable[tuple[int, int, float]] = (),
        linear: Sequence[float] | None = None,
    ) -> "QuadraticInstance":
        """Build an instance from sparse 1-based pair entries.

        Omitted pairs default to 0.  Both (i, j) and (j, i) may be given,
        but conflicting values for the same pair are rejected.
        """
        if isinstance(entries, Mapping):
            triples = [(i, j, v) for (i, j), v in entries.items()]
        else:
            triples = [(i, j, v) for i, j, v in entries]
        quad = np.zeros((n, n), dtype=float)
        np.fill_diagonal(quad, np.nan)
        seen: dict[tuple[int, int], float] = {}
        for i, j, v in triples:
            if not (1 <= i <= n and 1 <= j <= n):
                raise InstanceFormatError(f"index out of range in pair ({i},{j})")
            if i == j:
                raise InstanceFormatError(f"diagonal pair ({i},{j}) is not allowed")
            v = as_coefficient(v)
            key = (min(i, j), max(i, j))
            if key in seen and seen[key] != v:
                raise InstanceFormatError(
                    f"asymmetric entry for pair {key}: {seen[key]} vs {v}"
                )
            seen[key] = v
            quad[i - 1, j - 1] = v
            quad[j - 1, i - 1] = v
        lin = np.zeros(n) if linear is None else np.asarray(linear, dtype=float)
        return cls(n, r, lin, quad)

    def pair(self, i: int, j: int) -> float:
        """Coefficient of the pair {i, j}, 1-based."""
        if i == j:
            raise IndexError("diagonal entries do not exist")
        return float(self.quad[i - 1, j - 1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadraticInstance):
            return NotImplemented
        return (
            self.n == other.n
            and self.r == other.r
            and np.array_equal(self.linear, other.linear)
            and np.array_equal(self.quad, other.quad, equal_nan=True)
        )

    def __repr__(self) -> str:
        inf_count = int(np.isinf(self.quad).sum()) // 2
        return f"QuadraticInstance(n={self.n}, r={self.r}, infinite_pairs={inf_count})"


# ---------------------------------------------------------------------------
# Canonical JSON document format


def _reject_constant(name: str) -> float:
    raise InstanceFormatError(f"non-finite JSON literal {name!r} is not allowed")


def _require_int(doc: Mapping, key: str) -> int:
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise InstanceFormatError(f"field {key!r} must be an integer")
    return v


def parse_instance(text: str) -> QuadraticInstance:
    """Parse the canonical JSON document into a validated instance.

    Format: {"n": int, "r": int, "linear": [n reals] (optional, zeros),
    "quad": [{"i": int, "j": int, "v": real or "inf"}, ...]} with 1-based
    i < j; omitted pairs are 0 and the string "inf" maps to +inf.
    """
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON document: {exc}") from None
    if not isinstance(doc, dict):
        raise InstanceFormatError("document must be a JSON object")
    unknown = set(doc) - {"n", "r", "linear", "quad"}
    if unknown:
        raise InstanceFormatError(f"unknown fields: {sorted(unknown)}")
    n = _require_int(doc, "n")
    r = _require_int(doc, "r")
    linear = doc.get("linear")
    if linear is not None:
        if not isinstance(linear, list) or len(linear) != n:
            raise InstanceFormatError("field 'linear' must be a list of n reals")
        linear = [as_coefficient(v, allow_inf=False) for v in linear]
    triples = []
    for entry in doc.get("quad", []):
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "v"}:
            raise InstanceFormatError("quad entries must be objects with keys i, j, v")
        i = _require_int(entry, "i")
        j = _require_int(entry, "j")
        v = entry["v"]
        if isinstance(v, str):
            if v != "inf":
                raise InstanceFormatError(f"unknown coefficient string {v!r}")
            v = INF
        elif not isinstance(v, (int, float)) or isinstance(v, bool):
            raise InstanceFormatError("coefficient must be a number or the string 'inf'")
        triples.append((i, j, v))
    if n < 2:
        raise InstanceFormatError("n must be an integer >= 2")
    return QuadraticInstance.from_entries(n, r, triples, linear=linear)


def serialize_instance(instance: QuadraticInstance) -> str:
    """Serialize to the canonical JSON document.

    Zero quadratic entries are omitted, entries are sorted by (i, j), and
    key order is fixed, so equal instances produce byte-identical output
    and parse_instance(serialize_instance(I)) == I.
    """
    doc: dict = {"n": instance.n, "r": instance.r}
    if np.any(instance.linear != 0.0):
        doc["linear"] = [float(v) for v in instance.linear]
    entries = []
    for i in range(instance.n):
        for j in range(i + 1, instance.n):
            v = instance.quad[i, j]
            if v != 0.0:
                entries.append(
                    {"i": i + 1, "j": j + 1, "v": "inf" if math.isinf(v) else float(v)}
                )
    doc["quad"] = entries
    return json.dumps(doc)


# ---------------------------------------------------------------------------
# Structure-preserving transforms


def apply_potential(instance: QuadraticInstance, potential: Sequence[float]) -> QuadraticInstance:
    """Shift every pair coefficient by potential[i] + potential[j].

    Infinite entries stay infinite and linear terms are unchanged.  The
    M-convexity verdict is invariant under this transform.
    """
    p = np.asarray(potential, dtype=float)
    if p.shape != (instance.n,) or not np.isfinite(p).all():
        raise ValueError("potential must be n finite reals")
    # add the symmetric shift in one rounding step so exact symmetry survives
    quad = instance.quad + (p[:, None] + p[None, :])
    return QuadraticInstance(instance.n, instance.r, instance.linear, quad)


def relabel(instance: QuadraticInstance, perm: Sequence[int]) -> QuadraticInstance:
    """Rename index i to perm[i-1] (1-based), permuting all coefficients."""
    images = list(perm)
    if sorted(images) != list(range(1, instance.n + 1)):
        raise ValueError("perm is not a bijection on 1..n")
    dest = np.asarray(images, dtype=int) - 1
    quad = np.empty_like(instance.quad)
    quad[np.ix_(dest, dest)] = instance.quad
    linear = np.empty_like(instance.linear)
    linear[dest] = instance.linear
    return QuadraticInstance(instance.n, instance.r, linear, quad)


# ---------------------------------------------------------------------------
# Verdicts and witnesses


@dataclass(frozen=True)
class Witness:
    """Machine-checkable certificate that a decision procedure returned no.

    kinds:
      exchange_violation  -- supports x, y and an index i in x\\y such that
                             no j makes the exchange inequality hold
      quadruple_violation -- indices (i, j, k, l) whose three pairing sums
                             attain their minimum exactly once
      domain_violation    -- indices (i, j, k) with {i,j}, {j,k} forbidden
                             but {i,k} allowed
    All indices are 1-based.
    """

    kind: str
    indices: tuple[int, ...] | None = None
    x: tuple[int, ...] | None = None
    y: tuple[int, ...] | None = None
    i: int | None = None

    def to_json(self) -> dict:
        if self.kind == EXCHANGE_VIOLATION:
            return {"kind": self.kind, "x": list(self.x), "y": list(self.y), "i": self.i}
        return {"kind": self.kind, "indices": list(self.indices)}


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure, with the method that produced it."""

    status: str
    method: str
    type_label: str | None = None
    witness: Witness | None = None
    epsilon: float = DEFAULT_EPSILON

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "method": self.method,
            "type": self.type_label,
            "witness": self.witness.to_json() if self.witness else None,
            "epsilon": self.epsilon,
        }


#: Process exit codes for each verdict status.
EXIT_CODES = {M_CONVEX: 0, NOT_M_CONVEX: 1, UNDECIDED: 2, INVALID_INSTANCE: 3}
