"""1D orthogonal polynomial families and numerical orthogonality checks.

Three families are supported, each evaluated through its three-term
recurrence:

* Legendre ``P_n`` on [-1, 1] with weight 1,
* Chebyshev (first kind) ``T_n`` on [-1, 1] with weight 1/sqrt(1 - x^2),
* Hermite-Gaussian functions ``psi_n`` on the real line,
  ``psi_n(x) = (2^n n! sqrt(pi))^(-1/2) exp(-x^2/c) H_n(x)``.

For the Hermite-Gaussian family ``c`` is selectable: the standard variant
uses ``c = 2`` (the orthonormal Hermite functions); a ``c = 3`` variant is
kept for reproducing configurations that use the wider envelope, but it is
not orthogonal and the orthogonality helpers reject it.
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, InputError, OrderOverflowError

# Guard against runaway recurrences; raise this limit deliberately if needed.
MAX_ORDER = 64


class Family(str, Enum):
    LEGENDRE = "legendre"
    CHEBYSHEV = "chebyshev"
    HERMITE = "hermite"


class HermiteVariant(str, Enum):
    STANDARD = "standard"  # envelope exp(-x^2/2): orthonormal Hermite functions
    THIRD = "third"        # envelope exp(-x^2/3): not orthogonal, compatibility only


@dataclass(frozen=True)
class PolynomialFamily:
    kind: Family
    hermite_variant: HermiteVariant = HermiteVariant.STANDARD

    @property
    def bounded(self) -> bool:
        """True when the natural orthogonality interval is [-1, 1]."""
        return self.kind in (Family.LEGENDRE, Family.CHEBYSHEV)

    def label(self) -> str:
        if self.kind is Family.HERMITE and self.hermite_variant is not HermiteVariant.STANDARD:
            return f"{self.kind.value}[{self.hermite_variant.value}]"
        return self.kind.value


def legendre() -> PolynomialFamily:
    return PolynomialFamily(Family.LEGENDRE)


def chebyshev() -> PolynomialFamily:
    return PolynomialFamily(Family.CHEBYSHEV)


def hermite(variant: HermiteVariant = HermiteVariant.STANDARD) -> PolynomialFamily:
    return PolynomialFamily(Family.HERMITE, variant)


def _check_order(n: int, order_limit: int) -> None:
    if n < 0:
        raise InputError(f"polynomial order must be >= 0, got {n}")
    if n > order_limit:
        raise OrderOverflowError(f"order {n} exceeds the configured maximum {order_limit}")


def eval_axis(
    family: PolynomialFamily,
    max_order: int,
    points,
    *,
    order_limit: int = MAX_ORDER,
) -> np.ndarray:
    """Evaluate orders 0..max_order at every point.

    Returns a ``(max_order + 1, len(points))`` float64 matrix whose row ``n``
    holds ``phi_n`` at the points.  ``eval_1d`` delegates here, so the two
    paths are bitwise identical by construction.
    """
    _check_order(max_order, order_limit)
    x = np.atleast_1d(np.asarray(points, dtype=np.float64))
    if x.ndim != 1:
        raise InputError("points must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise InputError("points must be finite")

    table = np.empty((max_order + 1, x.size), dtype=np.float64)
    if family.kind is Family.LEGENDRE:
        table[0] = 1.0
        if max_order >= 1:
            table[1] = x
        for n in range(1, max_order):
            table[n + 1] = ((2 * n + 1) * x * table[n] - n * table[n - 1]) / (n + 1)
    elif family.kind is Family.CHEBYSHEV:
        table[0] = 1.0
        if max_order >= 1:
            table[1] = x
        for n in range(1, max_order):
            table[n + 1] = 2.0 * x * table[n] - table[n - 1]
    elif family.kind is Family.HERMITE:
        _hermite_gaussian_rows(table, x, family.hermite_variant)
    else:  # pragma: no cover - enum is closed
        raise InputError(f"unknown family {family.kind!r}")
    return table


def _hermite_gaussian_rows(table: np.ndarray, x: np.ndarray, variant: HermiteVariant) -> None:
    max_order = table.shape[0] - 1
    h = np.empty_like(table)
    h[0] = 1.0
    if max_order >= 1:
        h[1] = 2.0 * x
    for n in range(1, max_order):
        h[n + 1] = 2.0 * x * h[n] - (2.0 * n) * h[n - 1]
    c = 2.0 if variant is HermiteVariant.STANDARD else 3.0
    envelope = np.exp(-(x * x) / c)
    for n in range(max_order + 1):
        # (2^n n! sqrt(pi))^{-1/2} in log space; exact enough for n <= MAX_ORDER
        # and immune to factorial overflow.
        log_norm = -0.5 * (n * math.log(2.0) + math.lgamma(n + 1) + 0.5 * math.log(math.pi))
        table[n] = h[n] * (math.exp(log_norm) * envelope)


def eval_1d(
    family: PolynomialFamily,
    n: int,
    x: float,
    *,
    order_limit: int = MAX_ORDER,
) -> float:
    """Evaluate ``phi_n(x)`` for one point via the family's recurrence."""
    if not math.isfinite(x):
        raise InputError(f"x must be finite, got {x!r}")
    return float(eval_axis(family, n, [x], order_limit=order_limit)[n, 0])


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Gauss rule: nodes, positive weights, and the weight-function tag."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: str  # "gauss-legendre" | "gauss-chebyshev" | "gauss-hermite"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or weights.ndim != 1 or nodes.size != weights.size:
            raise InputError("nodes and weights must be 1D and of equal length")
        if nodes.size < 1:
            raise InputError("quadrature rule needs at least one node")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
            raise InputError("nodes and weights must be finite")
        if np.any(weights <= 0):
            raise InputError("weights must be positive")

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def measure(self) -> float:
        """Integral of the constant 1 under the rule's weight."""
        return float(np.sum(self.weights))


def gauss_legendre(n: int) -> QuadratureRule:
    x, w = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(x, w, "gauss-legendre")


def gauss_chebyshev(n: int) -> QuadratureRule:
    x, w = np.polynomial.chebyshev.chebgauss(n)
    return QuadratureRule(x, w, "gauss-chebyshev")


def gauss_hermite(n: int) -> QuadratureRule:
    x, w = np.polynomial.hermite.hermgauss(n)
    return QuadratureRule(x, w, "gauss-hermite")


_RULE_FOR_FAMILY = {
    Family.LEGENDRE: ("gauss-legendre", gauss_legendre),
    Family.CHEBYSHEV: ("gauss-chebyshev", gauss_chebyshev),
    Family.HERMITE: ("gauss-hermite", gauss_hermite),
}

# Expected measure of each rule's weight function, for validation.
RULE_MEASURES = {
    "gauss-legendre": 2.0,
    "gauss-chebyshev": math.pi,
    "gauss-hermite": math.sqrt(math.pi),
}


def rule_for(family: PolynomialFamily, max_order: int) -> QuadratureRule:
    """Default rule for a family: 2*max_order + 4 nodes, exact past degree 2N."""
    _, make = _RULE_FOR_FAMILY[family.kind]
    return make(2 * max_order + 4)


def inner_product(family: PolynomialFamily, m: int, n: int, rule: QuadratureRule) -> float:
    """Weighted inner product <phi_m, phi_n> under the family's measure.

    The rule must match the family: Gauss-Legendre for Legendre,
    Gauss-Chebyshev for Chebyshev, Gauss-Hermite (applied in transformed
    form, i.e. with weights ``w_i * exp(x_i^2)``) for the Hermite-Gaussian
    functions, whose Gaussian factor lives inside ``psi_n`` itself.
    """
    expected_kind, _ = _RULE_FOR_FAMILY[family.kind]
    if rule.kind != expected_kind:
        raise ConfigurationError(
            f"rule {rule.kind!r} does not match family {family.kind.value!r}"
        )
    table = eval_axis(family, max(m, n), rule.nodes)
    integrand = table[m] * table[n]
    if family.kind is Family.HERMITE:
        return float(np.dot(rule.weights * np.exp(rule.nodes**2), integrand))
    return float(np.dot(rule.weights, integrand))


def analytic_norm_sq(family: PolynomialFamily, n: int) -> float:
    """Closed-form value of <phi_n, phi_n>."""
    if family.kind is Family.LEGENDRE:
        return 2.0 / (2 * n + 1)
    if family.kind is Family.CHEBYSHEV:
        return math.pi if n == 0 else math.pi / 2.0
    if family.hermite_variant is not HermiteVariant.STANDARD:
        raise ConfigurationError(
            "only the standard Hermite-Gaussian variant is orthonormal"
        )
    return 1.0


def orthogonality_report(
    family: PolynomialFamily,
    max_order: int,
    tolerance: float = 1e-8,
    rule: QuadratureRule | None = None,
) -> list[dict]:
    """Check every pair 0 <= m <= n <= max_order against its analytic value.

    Returns one row per pair: ``{m, n, value, expected, error, ok}``.
    """
    if rule is None:
        rule = rule_for(family, max_order)
    rows = []
    for m in range(max_order + 1):
        for n in range(m, max_order + 1):
            value = inner_product(family, m, n, rule)
            if m != n:
                expected = 0.0
            else:
                try:
                    expected = analytic_norm_sq(family, n)
                except ConfigurationError:
                    # non-orthonormal variants are held to their claimed
                    # norm of 1, which the report then exposes as broken
                    expected = 1.0
            error = abs(value - expected)
            rows.append(
                {
                    "m": m,
                    "n": n,
                    "value": value,
                    "expected": expected,
                    "error": error,
                    "ok": error < tolerance,
                }
            )
    return rows
