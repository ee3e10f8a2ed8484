"""Exact arithmetic in GF(p^m).

Elements are plain integers ``0 <= v < p^m`` whose base-p digits are the
coefficients of the element as a polynomial in the modulus root ``x``
(least significant digit = constant term).  All arithmetic is table driven
and vectorizes over numpy integer arrays, so the same call works for a
scalar, a row or a whole matrix.

Subfields are not quotient chains: GF(q) and GF(q^r) are both built directly
over the prime field, and :func:`embedding` provides the explicit
homomorphism between them.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

MAX_CARDINALITY = 1 << 20
_FULL_TABLE_LIMIT = 256

FIELD_TABLE_ENV = "CONVBCH_FIELD_TABLE"


class FieldError(ValueError):
    """Invalid field construction or mixed-field arithmetic."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, s)`` with ``q = p^s``; raise if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    ps = prime_factors(q)
    if len(ps) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = ps[0]
    s = round(math.log(q, p))
    while p**s < q:
        s += 1
    while p**s > q:
        s -= 1
    if p**s != q:
        raise FieldError(f"{q} is not a prime power")
    return p, s


def _mul_by_x(v: int, p: int, m: int, low: list[int]) -> int:
    # low[i] = -modulus[i] mod p, for the monic reduction x^m = sum low[i] x^i
    top = v // p ** (m - 1)
    v = (v % p ** (m - 1)) * p
    if top:
        out = 0
        for i in range(m):
            d = (v // p**i) % p
            out += ((d + top * low[i]) % p) * p**i
        v = out
    return v


def _power_cycle(modulus: tuple[int, ...], p: int) -> list[int] | None:
    """Powers of x modulo ``modulus``; None unless x has order p^m - 1."""
    m = len(modulus) - 1
    order = p**m - 1
    low = [(-c) % p for c in modulus[:m]]
    if m == 1:
        # GF(p): the "root" is -c0, i.e. multiplication by x reduces to a scalar
        g = low[0]
        seq = [1]
        for _ in range(order - 1):
            seq.append(seq[-1] * g % p)
        if g == 0 or len(set(seq)) != order:
            return None
        return seq
    seq = [1]
    v = 1
    for i in range(1, order):
        v = _mul_by_x(v, p, m, low)
        if v == 1:
            return None
        seq.append(v)
    if _mul_by_x(v, p, m, low) != 1:
        return None
    return seq


def _candidate_moduli(p: int, m: int):
    # monic degree-m polynomials ordered by integer value of the low coefficients
    for low in range(p**m):
        coeffs = [(low // p**i) % p for i in range(m)]
        if coeffs[0] == 0:
            continue
        yield tuple(coeffs) + (1,)


def _parse_modulus(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(" ", "").strip("[]").split(",") if t)


def load_field_table(path: str | os.PathLike) -> dict[tuple[int, int], tuple[int, ...]]:
    """Read a modulus pinning file.

    One ``key = value`` pair per line, e.g. ``GF(2^4) = 1,1,0,0,1`` or
    ``2 4 = 1,1,0,0,1``; coefficients run from the constant term upwards.
    Blank lines and ``#`` comments are ignored.
    """
    table = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if key.startswith("GF(") and key.endswith(")"):
            p_txt, _, m_txt = key[3:-1].partition("^")
            p, m = int(p_txt), int(m_txt or 1)
        else:
            p, m = (int(t) for t in key.split())
        table[(p, m)] = _parse_modulus(value)
    return table


def _pinned_modulus(p: int, m: int) -> tuple[int, ...] | None:
    path = os.environ.get(FIELD_TABLE_ENV)
    if not path:
        return None
    return load_field_table(path).get((p, m))


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(p^m) with a fixed primitive modulus.

    Construct with :func:`make_field`; instances are cached, so identity
    comparison is the field-equality test.
    """

    characteristic: int
    degree: int
    modulus: tuple[int, ...]
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)
    digits: np.ndarray = field(repr=False)
    add_table: np.ndarray | None = field(repr=False, default=None)
    mul_table: np.ndarray | None = field(repr=False, default=None)

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def order(self) -> int:
        return self.characteristic**self.degree

    cardinality = order

    @property
    def name(self) -> str:
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.degree})/{coeffs}"

    def __repr__(self) -> str:
        return f"FieldSpec({self.name})"

    @property
    def generator(self) -> int:
        """The modulus root (a primitive element)."""
        return int(self.exp[1]) if self.order > 2 else 1

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def check(self, a) -> None:
        arr = np.asarray(a)
        if arr.size and (arr.min() < 0 or arr.max() >= self.order):
            raise FieldError(f"value outside {self.name}")

    # -- vectorized arithmetic -------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.add_table is not None:
            return self.add_table[a, b]
        if self.degree == 1:
            return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.p
        d = (self.digits[a] + self.digits[b]) % self.p
        return self._undigit(d)

    def neg(self, a):
        if self.p == 2:
            return a
        # widen first: table lookups return unsigned bytes
        if self.degree == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self._undigit((-self.digits[a].astype(np.int64)) % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        q1 = self.order - 1
        out = self.exp[(self.log[a] + self.log[b]) % q1]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a_arr = np.asarray(a, dtype=np.int64)
        if np.any(a_arr == 0):
            raise ZeroDivisionError(f"inverse of zero in {self.name}")
        q1 = self.order - 1
        out = self.exp[(-self.log[a_arr]) % q1]
        return out if out.ndim else int(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        a_arr = np.asarray(a, dtype=np.int64)
        q1 = self.order - 1
        if e == 0:
            out = np.ones_like(a_arr)
        else:
            if e < 0 and np.any(a_arr == 0):
                raise ZeroDivisionError(f"inverse of zero in {self.name}")
            out = np.where(a_arr == 0, 0, self.exp[(self.log[a_arr] * e) % q1])
        return out if out.ndim else int(out)

    def alpha_pow(self, e):
        """generator ** e for integer (array) e."""
        return self.exp[np.asarray(e, dtype=np.int64) % (self.order - 1)]

    def _undigit(self, d: np.ndarray):
        w = self.p ** np.arange(self.degree, dtype=np.int64)
        return d @ w

    # -- scalar helpers --------------------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, int(value))

    def format_element(self, v: int) -> str:
        v = int(v)
        return "0" if v == 0 else f"a^{int(self.log[v])}"

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text == "0":
            return 0
        if text.startswith("a^"):
            return int(self.alpha_pow(int(text[2:])))
        raise FieldError(f"bad element literal {text!r}")


@lru_cache(maxsize=None)
def _build_field(p: int, m: int, modulus: tuple[int, ...] | None) -> FieldSpec:
    if modulus is None:
        for cand in _candidate_moduli(p, m):
            seq = _power_cycle(cand, p)
            if seq is not None:
                modulus = cand
                break
    else:
        seq = _power_cycle(modulus, p)
        if seq is None:
            raise FieldError(f"pinned modulus {modulus} is not primitive over GF({p})")
    q = p**m
    exp = np.array(seq + seq, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    log[np.array(seq, dtype=np.int64)] = np.arange(q - 1, dtype=np.int64)
    powers = p ** np.arange(m, dtype=np.int64)
    digits = (np.arange(q, dtype=np.int64)[:, None] // powers) % p
    add_table = mul_table = None
    if q <= _FULL_TABLE_LIMIT:
        dt = np.uint8 if q <= 256 else np.int64
        el = np.arange(q, dtype=np.int64)
        add_table = (((digits[:, None, :] + digits[None, :, :]) % p) @ powers).astype(dt)
        la = log[el]
        mul_table = exp[(la[:, None] + la[None, :]) % (q - 1)]
        mul_table[0, :] = 0
        mul_table[:, 0] = 0
        mul_table = mul_table.astype(dt)
    for arr in (exp, log, digits, add_table, mul_table):
        if arr is not None:
            arr.setflags(write=False)
    return FieldSpec(p, m, tuple(modulus), exp, log, digits, add_table, mul_table)


def make_field(p: int, m: int = 1) -> FieldSpec:
    """GF(p^m) with the lexicographically smallest primitive modulus.

    Moduli are compared by the integer whose base-p digits are the low
    coefficients, so GF(2^4) gets x^4 + x + 1.  A modulus pinned through the
    ``CONVBCH_FIELD_TABLE`` file overrides the default choice.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    if p**m > MAX_CARDINALITY:
        raise FieldError(f"GF({p}^{m}) exceeds the {MAX_CARDINALITY} element ceiling")
    return _build_field(p, m, _pinned_modulus(p, m))


def field_of_order(q: int) -> FieldSpec:
    p, s = prime_power(q)
    return make_field(p, s)


@dataclass(frozen=True)
class FieldElement:
    """A scalar with its field attached; arithmetic checks the fields match."""

    field: FieldSpec
    value: int

    def _other(self, b) -> int:
        if isinstance(b, FieldElement):
            if b.field is not self.field:
                raise FieldError("mixed-field operands")
            return b.value
        if isinstance(b, (int, np.integer)):
            return int(b) % self.field.p
        return NotImplemented

    def __add__(self, b):
        return FieldElement(self.field, int(self.field.add(self.value, self._other(b))))

    __radd__ = __add__

    def __sub__(self, b):
        return FieldElement(self.field, int(self.field.sub(self.value, self._other(b))))

    def __rsub__(self, b):
        return FieldElement(self.field, int(self.field.sub(self._other(b), self.value)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.value)))

    def __mul__(self, b):
        return FieldElement(self.field, int(self.field.mul(self.value, self._other(b))))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return self * FieldElement(self.field, self.field.inv(self._other(b)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, int(e)))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.value])

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return self.field.format_element(self.value)


def multiplicative_order(n: int, q: int) -> int:
    """Smallest r >= 1 with q^r = 1 (mod n)."""
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(n, q) != 1:
        raise ValueError(f"gcd({n}, {q}) != 1")
    if n == 1:
        return 1
    r, x = 1, q % n
    while x != 1:
        x = x * q % n
        r += 1
    return r


def element_order(f: FieldSpec, a: int) -> int:
    if a == 0:
        raise ValueError("zero has no multiplicative order")
    return (f.order - 1) // math.gcd(int(f.log[a]), f.order - 1)


def primitive_nth_root(ext: FieldSpec, n: int) -> FieldElement:
    """generator ** ((|ext| - 1) / n), an element of order exactly n."""
    q1 = ext.order - 1
    if n < 1 or q1 % n:
        raise FieldError(f"{n} does not divide {q1}")
    return FieldElement(ext, int(ext.alpha_pow(q1 // n)))


def _eval_poly(f: FieldSpec, coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = int(f.add(f.mul(acc, x), c))
    return acc


@lru_cache(maxsize=None)
def _embedding(sub: FieldSpec, ext: FieldSpec) -> np.ndarray:
    if sub is ext:
        out = np.arange(ext.order, dtype=np.int64)
        out.setflags(write=False)
        return out
    if sub.p != ext.p or ext.degree % sub.degree:
        raise FieldError(f"{sub.name} is not a subfield of {ext.name}")
    qs1 = sub.order - 1
    e = (ext.order - 1) // qs1
    for j in range(1, qs1 + 1):
        if math.gcd(j, qs1) != 1:
            continue
        beta = int(ext.alpha_pow(e * j))
        if _eval_poly(ext, sub.modulus, beta) == 0:
            break
    else:  # pragma: no cover - a primitive modulus always has a root
        raise FieldError("no root of the subfield modulus found")
    out = np.zeros(sub.order, dtype=np.int64)
    nz = np.arange(1, sub.order)
    out[nz] = ext.alpha_pow(e * j * sub.log[nz])
    out.setflags(write=False)
    return out


def embedding(sub: FieldSpec, ext: FieldSpec) -> np.ndarray:
    """Lookup array mapping elements of ``sub`` to their images in ``ext``."""
    return _embedding(sub, ext)


def restriction(sub: FieldSpec, ext: FieldSpec) -> dict[int, int]:
    """Inverse of :func:`embedding` on its image."""
    emb = embedding(sub, ext)
    return {int(v): i for i, v in enumerate(emb)}


def conjugate(a: FieldElement, q: int) -> FieldElement:
    """Frobenius map a -> a^q, for q the order of a subfield of a's field."""
    f = a.field
    p, s = prime_power(q)
    if p != f.p or f.degree % s:
        raise FieldError(f"{q} is not a subfield order of {f.name}")
    return FieldElement(f, f.pow(a.value, q))


def frobenius(f: FieldSpec, arr, q: int):
    """Vectorized ``x -> x^q``."""
    return f.pow(np.asarray(arr, dtype=np.int64), q)


@dataclass(frozen=True, eq=False)
class SubfieldBasis:
    """A basis of ``ext`` as a vector space over its subfield ``base``."""

    base: FieldSpec
    ext: FieldSpec
    elements: tuple[int, ...]
    coord_table: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def expand(self, a) -> np.ndarray:
        """Coordinates over ``base`` (as base-field ints); last axis has length r."""
        return self.coord_table[np.asarray(a, dtype=np.int64)]

    def combine(self, w) -> np.ndarray:
        """Inverse of :meth:`expand`."""
        w = np.asarray(w, dtype=np.int64)
        emb = embedding(self.base, self.ext)
        acc = np.zeros(w.shape[:-1], dtype=np.int64)
        for i, b in enumerate(self.elements):
            acc = self.ext.add(acc, self.ext.mul(emb[w[..., i]], b))
        return acc


def subfield_basis(base: FieldSpec, ext: FieldSpec, elements) -> SubfieldBasis:
    if ext.degree % base.degree or ext.p != base.p:
        raise FieldError(f"{base.name} is not a subfield of {ext.name}")
    r = ext.degree // base.degree
    elements = tuple(int(e) for e in elements)
    if len(elements) != r:
        raise FieldError(f"a basis of {ext.name} over {base.name} needs {r} elements")
    emb = embedding(base, ext)
    values = np.zeros(1, dtype=np.int64)
    # enumerate sum_i w_i b_i; the last element processed is the most significant digit
    for b in elements:
        scaled = ext.mul(emb, b)
        values = ext.add(scaled[:, None], values[None, :]).reshape(-1)
    if len(np.unique(values)) != ext.order:
        raise FieldError("basis elements are linearly dependent over the subfield")
    q = base.order
    idx = np.arange(ext.order, dtype=np.int64)
    # position in the enumeration encodes (w_0, ..., w_{r-1}) with w_0 least significant
    coords = (idx[:, None] // q ** np.arange(r, dtype=np.int64)) % q
    table = np.empty((ext.order, r), dtype=np.int64)
    table[values] = coords
    table.setflags(write=False)
    return SubfieldBasis(base, ext, elements, table)


def polynomial_basis(base: FieldSpec, ext: FieldSpec, root: int | None = None) -> SubfieldBasis:
    """{1, a, ..., a^(r-1)} for ``a`` the modulus root of ``ext`` (or ``root``)."""
    a = ext.generator if root is None else int(root)
    r = ext.degree // base.degree
    return subfield_basis(base, ext, [ext.pow(a, i) if i else 1 for i in range(r)])


def expand_coords(a: FieldElement, basis: SubfieldBasis) -> tuple[FieldElement, ...]:
    if a.field is not basis.ext:
        raise FieldError("element does not live in the basis extension field")
    return tuple(FieldElement(basis.base, int(w)) for w in basis.expand(a.value))
