"""Dense matrices over GF(q) and exact block-code distance computations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .galois import FieldElement, FieldError, FieldSpec, SubfieldBasis, frobenius, prime_power

DEFAULT_MAX_WORDS = 1 << 24


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed its configured budget."""


@dataclass(frozen=True, eq=False)
class MatrixFq:
    field: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.int64, copy=True)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two dimensional")
        self.field.check(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, f: FieldSpec, rows: int, cols: int) -> "MatrixFq":
        return cls(f, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, f: FieldSpec, n: int) -> "MatrixFq":
        return cls(f, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "MatrixFq":
        return MatrixFq(self.field, self.data.T)

    def __getitem__(self, idx):
        out = self.data[idx]
        if np.ndim(out) == 0:
            return FieldElement(self.field, int(out))
        return MatrixFq(self.field, out if np.ndim(out) == 2 else np.atleast_2d(out))

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        _same_field(self, other)
        return MatrixFq(self.field, matmul(self.field, self.data, other.data))

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        _same_field(self, other)
        return MatrixFq(self.field, self.field.add(self.data, other.data))

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        _same_field(self, other)
        return MatrixFq(self.field, self.field.sub(self.data, other.data))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixFq)
            and other.field is self.field
            and other.shape == self.shape
            and bool(np.array_equal(self.data, other.data))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.data.any()

    def vstack(self, other: "MatrixFq") -> "MatrixFq":
        _same_field(self, other)
        if self.rows == 0:
            return other
        if other.rows == 0:
            return self
        return MatrixFq(self.field, np.vstack([self.data, other.data]))

    def rank(self) -> int:
        return len(rref(self)[1])

    def dump(self) -> str:
        return dump_matrix(self)

    def __repr__(self) -> str:
        return f"MatrixFq({self.rows}x{self.cols} over {self.field.name})"


def _same_field(a: MatrixFq, b: MatrixFq) -> None:
    if a.field is not b.field:
        raise FieldError("matrices over different fields")


def matmul(f: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of raw element arrays over ``f``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if f.degree == 1:
        return (a @ b) % f.p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = f.add(out, f.mul(a[:, k, None], b[None, k, :]))
    return np.asarray(out, dtype=np.int64)


def _rref_array(f: FieldSpec, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m = np.array(a, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        m[r] = f.mul(m[r], f.inv(int(m[r, c])))
        factors = m[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            m[hit] = f.sub(m[hit], f.mul(factors[hit, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m, pivots


def rref(M: MatrixFq) -> tuple[MatrixFq, list[int]]:
    """Reduced row-echelon form and pivot columns (topmost nonzero pivot)."""
    if M.rows == 0 or M.cols == 0:
        return M, []
    out, piv = _rref_array(M.field, M.data)
    return MatrixFq(M.field, out), piv


def rank(M: MatrixFq) -> int:
    return len(rref(M)[1])


def row_basis(M: MatrixFq) -> MatrixFq:
    R, piv = rref(M)
    return MatrixFq(M.field, R.data[: len(piv)].reshape(len(piv), M.cols))


def kernel_basis(M: MatrixFq) -> MatrixFq:
    """Rows spanning {v : v M^t = 0}."""
    f, n = M.field, M.cols
    if M.rows == 0:
        return MatrixFq.identity(f, n)
    R, piv = rref(M)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        basis[i, c] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = f.neg(int(R.data[r, c]))
    return MatrixFq(f, basis.reshape(len(free), n))


class Echelon:
    """Incrementally maintained reduced basis of a row space."""

    def __init__(self, f: FieldSpec, n: int):
        self.field = f
        self.n = n
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v) -> np.ndarray:
        f = self.field
        v = np.array(v, dtype=np.int64, copy=True)
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = f.sub(v, f.mul(int(v[c]), row))
        return np.asarray(v, dtype=np.int64)

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def insert(self, v) -> bool:
        f = self.field
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = np.asarray(f.mul(v, f.inv(int(v[c]))), dtype=np.int64)
        for i, row in enumerate(self.rows):
            if row[c]:
                self.rows[i] = np.asarray(f.sub(row, f.mul(int(row[c]), v)), dtype=np.int64)
        self.rows.append(v)
        self.pivots.append(c)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def in_rowspan(M: MatrixFq, v) -> bool:
    e = Echelon(M.field, M.cols)
    for row in M.data:
        e.insert(row)
    return e.contains(v)


def expand_rows_exB(M: MatrixFq, basis: SubfieldBasis) -> MatrixFq:
    """Expand each row over ``basis`` and keep the first rows that span.

    Every row of M becomes r coordinate rows over the base field; scanning
    top to bottom, a row is kept iff it increases the rank of the kept set.
    """
    if M.field is not basis.ext:
        raise FieldError("matrix entries do not live in the basis extension field")
    base, n = basis.base, M.cols
    ech = Echelon(base, n)
    kept = []
    for row in M.data:
        coords = basis.expand(row)  # (n, r)
        for i in range(basis.dimension):
            cand = coords[:, i]
            if ech.insert(cand):
                kept.append(cand)
    data = np.array(kept, dtype=np.int64).reshape(len(kept), n)
    return MatrixFq(base, data)


def euclidean_self_orthogonal(H: MatrixFq) -> bool:
    """True iff H H^t = 0."""
    if H.rows == 0:
        return True
    return not matmul(H.field, H.data, H.data.T).any()


def conjugate_matrix(H: MatrixFq, q: int) -> MatrixFq:
    return MatrixFq(H.field, frobenius(H.field, H.data, q))


def _check_square_order(f: FieldSpec, q: int) -> None:
    p, s = prime_power(q)
    if p != f.p or f.degree != 2 * s:
        raise FieldError(f"{f.name} is not GF({q}^2)")


def hermitian_self_orthogonal(H: MatrixFq, q: int) -> bool:
    """True iff H (H^(q))^t = 0 over GF(q^2)."""
    _check_square_order(H.field, q)
    if H.rows == 0:
        return True
    Hq = frobenius(H.field, H.data, q)
    return not matmul(H.field, H.data, Hq.T).any()


# -- codeword enumeration -------------------------------------------------------


class WordOps:
    """Vectorized add/weight on batches of words over a small field.

    Characteristic-2 fields with ``n * m <= 64`` pack a word into one uint64
    (XOR is addition, popcount of the folded bits is weight); everything
    else works on uint8 symbol arrays.  Both paths are observationally
    identical.
    """

    def __init__(self, f: FieldSpec, n: int, packed: bool | None = None):
        if f.order > 256:
            raise FieldError("codeword enumeration supports fields of at most 256 elements")
        self.field = f
        self.n = n
        can_pack = f.p == 2 and n * f.degree <= 64
        self.packed = can_pack if packed is None else (packed and can_pack)
        if self.packed:
            m = f.degree
            self._shifts = (np.arange(n, dtype=np.uint64) * np.uint64(m))
            mask = 0
            for j in range(n):
                mask |= 1 << (m * j)
            self._mask = np.uint64(mask)

    def encode(self, words: np.ndarray):
        words = np.asarray(words, dtype=np.int64)
        if not self.packed:
            return words.astype(np.uint8)
        w = words.astype(np.uint64) << self._shifts
        return np.bitwise_or.reduce(w, axis=-1) if w.shape[-1] else np.zeros(w.shape[:-1], np.uint64)

    def decode(self, enc) -> np.ndarray:
        if not self.packed:
            return np.asarray(enc, dtype=np.int64)
        m = self.field.degree
        enc = np.asarray(enc, dtype=np.uint64)
        out = (enc[..., None] >> self._shifts) & np.uint64((1 << m) - 1)
        return out.astype(np.int64)

    def add(self, a, b):
        if self.packed or self.field.p == 2:
            return np.bitwise_xor(a, b)
        return self.field.add_table[a, b]

    def weight(self, enc) -> np.ndarray:
        if not self.packed:
            return np.count_nonzero(enc, axis=-1)
        x = enc
        m = self.field.degree
        for s in range(1, m):
            x = x | (enc >> np.uint64(s))
        return np.bitwise_count(x & self._mask).astype(np.int64)

    def multiples(self, row) -> np.ndarray:
        """Encoded c * row for every field element c (index = c)."""
        f = self.field
        row = np.asarray(row, dtype=np.int64)
        return self.encode(f.mul(f.elements()[:, None], row[None, :]))

    def zero(self, count: int = 1):
        if self.packed:
            return np.zeros(count, dtype=np.uint64)
        return np.zeros((count, self.n), dtype=np.uint8)


def _span_table(ops: WordOps, G: np.ndarray):
    words = ops.zero(1)
    for row in G:
        mult = ops.multiples(row)
        if ops.packed:
            words = ops.add(mult[:, None], words[None, :]).reshape(-1)
        else:
            words = ops.add(mult[:, None, :], words[None, :, :]).reshape(-1, ops.n)
    return words


def iter_span(f: FieldSpec, G: np.ndarray, chunk_dim: int = 16, ops: WordOps | None = None):
    """Yield encoded chunks covering every F-linear combination of the rows of G."""
    G = np.asarray(G, dtype=np.int64).reshape(-1, G.shape[-1] if np.ndim(G) == 2 else 0)
    k, n = G.shape
    ops = ops or WordOps(f, n)
    q = f.order
    low_dim = k
    while low_dim > 0 and q**low_dim > (1 << chunk_dim):
        low_dim -= 1
    low = _span_table(ops, G[k - low_dim:])
    high = G[: k - low_dim]
    if high.shape[0] == 0:
        yield low
        return
    mults = [ops.multiples(r) for r in high]
    for coeffs in itertools.product(range(q), repeat=high.shape[0]):
        off = ops.zero(1)[0]
        for c, mu in zip(coeffs, mults):
            if c:
                off = ops.add(off, mu[c])
        yield ops.add(low, off)


def span_size(f: FieldSpec, k: int) -> int:
    return f.order**k


@dataclass(frozen=True)
class Distance:
    """An exact distance, or a certified lower bound when ``exact`` is False."""

    value: int
    exact: bool = True

    def __str__(self) -> str:
        return str(self.value) if self.exact else f">={self.value}"

    def to_json(self):
        return self.value if self.exact else {"at_least": self.value}


def min_weight_span(f: FieldSpec, G: np.ndarray, max_words: int = DEFAULT_MAX_WORDS) -> int:
    """Minimum nonzero weight of rowspan(G) by plain enumeration (G full rank)."""
    G = np.asarray(G, dtype=np.int64)
    k, n = G.shape
    if k == 0:
        raise ValueError("the zero code has no minimum distance")
    if span_size(f, k) > max_words:
        raise BudgetExceeded(f"{f.order}^{k} codewords exceed the budget of {max_words}")
    ops = WordOps(f, n)
    best = n + 1
    first = True
    for chunk in iter_span(f, G, ops=ops):
        w = ops.weight(chunk)
        if first:
            w = w.copy()
            w[0] = n + 1  # the all-zero combination
            first = False
        best = min(best, int(w.min()))
    return best


def _info_sets(f: FieldSpec, G: np.ndarray):
    k, n = G.shape
    remaining = list(range(n))
    out = []
    while remaining:
        rest = [c for c in range(n) if c not in set(remaining)]
        order = remaining + rest
        R, piv = _rref_array(f, G[:, order])
        in_block = [p for p in piv if p < len(remaining)]
        if not in_block:
            break
        inv = np.argsort(order)
        out.append((R[:, inv], len(in_block)))
        chosen = {order[p] for p in in_block}
        remaining = [c for c in remaining if c not in chosen]
    return out


def _weight_w_messages(k: int, w: int, q: int, batch: int):
    """(indices, coefficients) batches of weight-w messages, first coefficient 1."""
    pats = np.array(list(itertools.product(range(1, q), repeat=w - 1)), dtype=np.int64)
    pats = np.hstack([np.ones((len(pats), 1), dtype=np.int64), pats.reshape(len(pats), w - 1)])
    per = max(1, batch // len(pats))
    combos = itertools.combinations(range(k), w)
    while True:
        chunk = list(itertools.islice(combos, per))
        if not chunk:
            return
        idx = np.array(chunk, dtype=np.int64)
        yield (np.repeat(idx, len(pats), axis=0), np.tile(pats, (len(idx), 1)))


def _bz_distance(f, G, cap, max_words):
    k, n = G.shape
    q = f.order
    ops = WordOps(f, n)
    sets = _info_sets(f, G)
    tables = []
    for gamma, r in sets:
        tables.append(np.stack([ops.multiples(row) for row in gamma], axis=1))  # (q, k, ...)
    done = [0] * len(sets)
    upper = n + 1
    spent = 0
    lower = 1
    for w in range(1, k + 1):
        active = [j for j, (_, r) in enumerate(sets) if w + 1 - (k - r) > 0]
        for j in active:
            for lvl in range(done[j] + 1, w + 1):
                cost = math.comb(k, lvl) * (q - 1) ** (lvl - 1)
                spent += cost
                if spent > max_words:
                    if cap is not None:
                        return Distance(min(lower, upper), exact=lower >= upper)
                    raise BudgetExceeded(f"information-set search exceeded {max_words} words")
                tab = tables[j]
                for idx, coef in _weight_w_messages(k, lvl, q, 1 << 16):
                    acc = tab[coef[:, 0], idx[:, 0]]
                    for t in range(1, lvl):
                        acc = ops.add(acc, tab[coef[:, t], idx[:, t]])
                    upper = min(upper, int(ops.weight(acc).min()))
            done[j] = w
        lower = sum(max(0, w + 1 - (k - r)) for _, r in sets)
        if lower >= upper:
            return Distance(upper)
        if cap is not None and lower >= cap:
            return Distance(lower, exact=False)
    return Distance(upper)


def min_distance_generator(
    G: MatrixFq, cap: int | None = None, max_words: int = DEFAULT_MAX_WORDS
) -> Distance:
    """Minimum distance of rowspan(G) for full-rank G.

    Small codes are enumerated outright; larger ones use the
    Brouwer-Zimmermann information-set enumeration, which is still exact.
    With ``cap`` the search stops once the certified lower bound reaches it.
    """
    f = G.field
    k, n = G.shape
    if k == 0:
        raise ValueError("the zero code has no minimum distance")
    if span_size(f, k) <= min(max_words, 1 << 16):
        return Distance(min_weight_span(f, G.data, max_words))
    return _bz_distance(f, G.data, cap, max_words)


def min_distance_bruteforce(
    H: MatrixFq, cap: int | None = None, max_words: int = DEFAULT_MAX_WORDS
) -> Distance:
    """Minimum distance of ker H^t (the code with parity-check matrix H)."""
    G = kernel_basis(H)
    return min_distance_generator(G, cap=cap, max_words=max_words)


# -- text dump ------------------------------------------------------------------


def dump_matrix(M: MatrixFq) -> str:
    f = M.field
    lines = [f"{M.rows} {M.cols} {f.name}"]
    for row in M.data:
        lines.append(" ".join(f.format_element(v) for v in row))
    return "\n".join(lines)


def load_matrix(text: str) -> MatrixFq:
    from .galois import make_field

    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    rows_txt, cols_txt, name = lines[0].split()
    rows, cols = int(rows_txt), int(cols_txt)
    head, _, mod = name.partition("/")
    p_txt, _, m_txt = head[3:-1].partition("^")
    f = make_field(int(p_txt), int(m_txt))
    if mod and ",".join(str(c) for c in f.modulus) != mod:
        raise FieldError(f"modulus {mod} does not match the active {f.name}")
    data = np.array(
        [[f.parse_element(t) for t in ln.split()] for ln in lines[1 : 1 + rows]], dtype=np.int64
    ).reshape(rows, cols)
    return MatrixFq(f, data)
