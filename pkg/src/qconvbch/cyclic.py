"""Cyclotomic cosets, BCH defining sets and parity matrices, closed-form bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .galois import (
    FieldElement,
    FieldSpec,
    SubfieldBasis,
    element_order,
    field_of_order,
    make_field,
    multiplicative_order,
    polynomial_basis,
    prime_power,
    primitive_nth_root,
)
from .matrix import MatrixFq, expand_rows_exB


def _check_coprime(n: int, q: int) -> None:
    if n < 1:
        raise ValueError("length must be positive")
    if math.gcd(n, q) != 1:
        raise ValueError(f"gcd({n}, {q}) != 1")


@dataclass(frozen=True)
class CyclotomicCoset:
    representative: int
    members: tuple[int, ...]
    n: int
    q: int

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x % self.n in self.members


def cyclotomic_coset(x: int, n: int, q: int) -> CyclotomicCoset:
    """The orbit {x q^i mod n}."""
    _check_coprime(n, q)
    x %= n
    seen = []
    y = x
    while y not in seen:
        seen.append(y)
        y = y * q % n
    members = tuple(sorted(seen))
    return CyclotomicCoset(members[0], members, n, q)


def all_cosets(n: int, q: int) -> list[CyclotomicCoset]:
    _check_coprime(n, q)
    out, covered = [], set()
    for x in range(n):
        if x not in covered:
            c = cyclotomic_coset(x, n, q)
            covered.update(c.members)
            out.append(c)
    return out


@dataclass(frozen=True)
class DefiningSet:
    n: int
    q: int
    exponents: tuple[int, ...]
    generating_range: tuple[int, int] | None = None

    def __len__(self) -> int:
        return len(self.exponents)

    @property
    def dimension(self) -> int:
        return self.n - len(self.exponents)


def defining_set_from(xs, n: int, q: int, generating_range=None) -> DefiningSet:
    exps: set[int] = set()
    for x in xs:
        exps.update(cyclotomic_coset(x, n, q).members)
    return DefiningSet(n, q, tuple(sorted(exps)), generating_range)


def bch_defining_set(n: int, q: int, b: int, delta: int) -> DefiningSet:
    """C_b ∪ C_{b+1} ∪ ... ∪ C_{b+delta-2}."""
    _check_coprime(n, q)
    if delta < 2:
        raise ValueError("designed distance must be at least 2")
    return defining_set_from(range(b, b + delta - 1), n, q, (b, delta))


def restricted_defining_set(alpha_lo: int, beta_hi: int, n: int, q: int) -> DefiningSet:
    """Union of C_x for alpha_lo <= x <= beta_hi with x not divisible by q."""
    _check_window(alpha_lo, beta_hi, n)
    _check_coprime(n, q)
    xs = [x for x in range(alpha_lo, beta_hi + 1) if x % q]
    return defining_set_from(xs, n, q)


def _check_window(alpha_lo: int, beta_hi: int, n: int | None = None) -> None:
    if not 2 <= alpha_lo <= beta_hi or (n is not None and beta_hi >= n):
        raise ValueError(f"need 2 <= alpha <= beta < n, got ({alpha_lo}, {beta_hi}, {n})")


def hartmann_tzeng_delta(alpha_lo: int, beta_hi: int, q: int, n: int | None = None) -> int:
    """Closed-form lower bound on the distance of the restricted-window code."""
    _check_window(alpha_lo, beta_hi, n)
    span = beta_hi - alpha_lo
    if span >= 2 * q - 3:
        return q + (span + 3) // q - 2
    return (span + 3) // 2


def delta_max(n: int, q: int) -> int:
    """floor(n/(q^r - 1) * (q^ceil(r/2) - 1 - (q-2)[r odd])), r = ord_n(q)."""
    r = multiplicative_order(n, q)
    odd = r % 2
    num = n * (q ** ((r + 1) // 2) - 1 - (q - 2) * odd)
    return num // (q**r - 1)


def hermitian_delta_bound(n: int, q: int) -> int:
    """floor(n (q^r - 1) / (q^(2r) - 1)) with r = ord_n(q^2)."""
    r = multiplicative_order(n, q * q)
    return n * (q**r - 1) // (q ** (2 * r) - 1)


def kappa_formula(n: int, q: int, delta: int) -> int:
    """r * ceil(delta (1 - 1/q)) in exact integer arithmetic."""
    r = multiplicative_order(n, q)
    return r * (-(-delta * (q - 1) // q))


def in_dual_containing_range(n: int, q: int, delta: int) -> bool:
    return math.gcd(n, q) == 1 and 2 <= 2 * delta < delta_max(n, q)


@dataclass(frozen=True)
class DimensionCheck:
    value: int
    coset_value: int
    in_range: bool
    formula_value: int | None

    @property
    def discrepancy(self) -> bool:
        return self.formula_value is not None and self.formula_value != self.coset_value


def bch_dimension_formula(n: int, q: int, delta: int) -> DimensionCheck:
    """n - r ceil(2 delta (1 - 1/q)) for the narrow-sense code of designed distance 2 delta + 1.

    Inside 2 <= 2 delta < delta_max the closed form is returned and must
    agree with the coset count.  Outside it the coset count is returned and
    the closed form is only reported alongside.
    """
    r = multiplicative_order(n, q)
    formula = n - r * (-(-2 * delta * (q - 1) // q))
    exact = bch_defining_set(n, q, 1, 2 * delta + 1).dimension
    ok = in_dual_containing_range(n, q, delta)
    if ok and formula != exact:
        raise AssertionError(f"dimension formula {formula} != coset count {exact} at {(n, q, delta)}")
    return DimensionCheck(formula if ok else exact, exact, ok, formula)


@dataclass(frozen=True)
class BCHContext:
    """Fields and basis needed to build parity matrices of length-n cyclic codes over GF(q)."""

    n: int
    q: int
    base: FieldSpec
    ext: FieldSpec
    alpha: FieldElement
    basis: SubfieldBasis

    @property
    def r(self) -> int:
        return self.ext.degree // self.base.degree


def bch_context(n: int, q: int, basis: SubfieldBasis | None = None) -> BCHContext:
    _check_coprime(n, q)
    p, s = prime_power(q)
    r = multiplicative_order(n, q)
    base = make_field(p, s)
    ext = make_field(p, s * r)
    if basis is None:
        basis = polynomial_basis(base, ext)
    elif basis.base is not base or basis.ext is not ext:
        raise ValueError("basis does not match GF(q^r)/GF(q)")
    return BCHContext(n, q, base, ext, primitive_nth_root(ext, n), basis)


def vandermonde_parity(n: int, b: int, delta: int, alpha: FieldElement) -> MatrixFq:
    """Rows (alpha^((b+i) j))_j for i = 0..delta-2."""
    ext = alpha.field
    if alpha.value == 0 or element_order(ext, alpha.value) != n:
        raise ValueError(f"alpha is not a primitive {n}-th root of unity")
    return exponent_parity(n, range(b, b + delta - 1), alpha)


def exponent_parity(n: int, exponents, alpha: FieldElement) -> MatrixFq:
    ext = alpha.field
    la = int(ext.log[alpha.value])
    xs = np.array(list(exponents), dtype=np.int64).reshape(-1, 1)
    j = np.arange(n, dtype=np.int64).reshape(1, -1)
    return MatrixFq(ext, ext.alpha_pow(la * xs * j).reshape(xs.shape[0], n))


@dataclass(frozen=True, eq=False)
class BCHSpec:
    n: int
    q: int
    b: int
    delta: int
    context: BCHContext

    @property
    def r(self) -> int:
        return self.context.r

    @cached_property
    def defining_set(self) -> DefiningSet:
        return bch_defining_set(self.n, self.q, self.b, self.delta)

    @property
    def dimension(self) -> int:
        return self.defining_set.dimension

    @cached_property
    def vandermonde(self) -> MatrixFq:
        return vandermonde_parity(self.n, self.b, self.delta, self.context.alpha)

    @cached_property
    def parity(self) -> MatrixFq:
        return expand_rows_exB(self.vandermonde, self.context.basis)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "b": self.b,
            "delta": self.delta,
            "r": self.r,
            "defining_set": list(self.defining_set.exponents),
            "dimension": self.dimension,
        }


def bch_code(n: int, q: int, b: int, delta: int, context: BCHContext | None = None) -> BCHSpec:
    if delta < 2 or delta > n:
        raise ValueError("designed distance must satisfy 2 <= delta <= n")
    ctx = context or bch_context(n, q)
    return BCHSpec(n, q, b, delta, ctx)


def defining_set_parity(ds: DefiningSet, context: BCHContext | None = None) -> MatrixFq:
    """GF(q) parity matrix of the cyclic code with defining set ``ds``."""
    ctx = context or bch_context(ds.n, ds.q)
    reps = sorted({cyclotomic_coset(x, ds.n, ds.q).representative for x in ds.exponents})
    return expand_rows_exB(exponent_parity(ds.n, reps, ctx.alpha), ctx.basis)


__all__ = [
    "CyclotomicCoset",
    "DefiningSet",
    "BCHSpec",
    "BCHContext",
    "cyclotomic_coset",
    "all_cosets",
    "bch_defining_set",
    "restricted_defining_set",
    "hartmann_tzeng_delta",
    "delta_max",
    "hermitian_delta_bound",
    "kappa_formula",
    "bch_dimension_formula",
    "in_dual_containing_range",
    "vandermonde_parity",
    "exponent_parity",
    "bch_context",
    "bch_code",
    "defining_set_parity",
    "field_of_order",
]
