"""Polynomial matrices over F_q[D] and convolutional-code machinery.

A :class:`PolyMatrix` stores the coefficient matrices G_0..G_m of
``G(D) = G_0 + G_1 D + ... + G_m D^m``.  Besides the algebra (encoding,
basicness certificates, reversal, Laurent orthogonality) this module holds
the two exact trellis searches: the encoder trellis of im G(D) and the
syndrome trellis of its Euclidean dual.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .galois import FieldSpec, frobenius
from .matrix import (
    BudgetExceeded,
    Distance,
    MatrixFq,
    kernel_basis,
    matmul,
    min_distance_bruteforce,
    min_distance_generator,
    rank,
    row_basis,
    rref,
)

DEFAULT_MAX_STATES = 1 << 16
DEFAULT_MAX_WORDS = 1 << 22
# vectors examined by one coset-leader search
LOW_WEIGHT_LIMIT = 1 << 25


class CatastrophicError(ValueError):
    """The generator matrix is catastrophic; a trellis search would not be meaningful."""


# -- polynomials over a field: tuples of ints, constant term first, no trailing zeros


def ptrim(a) -> tuple[int, ...]:
    a = list(int(x) for x in a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def padd(f: FieldSpec, a, b) -> tuple[int, ...]:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return ptrim(int(f.add(x, y)) for x, y in zip(a, b))


def pneg(f: FieldSpec, a) -> tuple[int, ...]:
    return tuple(int(f.neg(x)) for x in a)


def psub(f: FieldSpec, a, b) -> tuple[int, ...]:
    return padd(f, a, pneg(f, b))


def pmul(f: FieldSpec, a, b) -> tuple[int, ...]:
    if not a or not b:
        return ()
    av = np.asarray(a, dtype=np.int64)
    out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
    for j, c in enumerate(b):
        if c:
            out[j : j + len(a)] = f.add(out[j : j + len(a)], f.mul(av, int(c)))
    return ptrim(out)


def pscale(f: FieldSpec, a, c: int) -> tuple[int, ...]:
    return ptrim(int(f.mul(x, c)) for x in a)


def pdivmod(f: FieldSpec, a, b) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead_inv = f.inv(b[-1])
    quot = [0] * max(0, len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            t = int(f.mul(c, lead_inv))
            quot[i - db] = t
            for j in range(db + 1):
                r[i - db + j] = int(f.sub(r[i - db + j], f.mul(t, b[j])))
    return ptrim(quot), ptrim(r)


def pmonic(f: FieldSpec, a) -> tuple[int, ...]:
    if not a:
        return ()
    return pscale(f, a, f.inv(a[-1]))


def pgcd(f: FieldSpec, a, b) -> tuple[int, ...]:
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pdivmod(f, a, b)[1]
    return pmonic(f, a)


def pdeg(a) -> int:
    return len(a) - 1


def pformat(f: FieldSpec, a) -> str:
    if not a:
        return "0"
    terms = []
    for i, c in enumerate(a):
        if not c:
            continue
        coef = "" if (c == 1 and i) else f.format_element(c) if c != 1 else "1"
        mon = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
        terms.append(f"{coef}{'*' if coef and mon else ''}{mon}")
    return " + ".join(terms)


# -- polynomial matrices ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    field: FieldSpec
    coeffs: np.ndarray
    nominal_memory: int | None = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.int64, copy=True)
        if c.ndim != 3:
            raise ValueError("coefficients must have shape (m+1, rows, cols)")
        if c.shape[0] == 0:
            c = np.zeros((1,) + c.shape[1:], dtype=np.int64)
        last = c.shape[0]
        while last > 1 and not c[last - 1].any():
            last -= 1
        c = c[:last]
        self.field.check(c)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_matrices(cls, mats, nominal_memory=None) -> "PolyMatrix":
        mats = list(mats)
        f = mats[0].field
        return cls(f, np.stack([m.data for m in mats]), nominal_memory)

    @classmethod
    def constant(cls, M: MatrixFq) -> "PolyMatrix":
        return cls(M.field, M.data[None])

    @classmethod
    def from_polys(cls, f: FieldSpec, entries) -> "PolyMatrix":
        """From a nested list of coefficient sequences (constant term first)."""
        rows, cols = len(entries), len(entries[0])
        deg = max((len(e) for row in entries for e in row), default=1)
        c = np.zeros((max(deg, 1), rows, cols), dtype=np.int64)
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                for d, v in enumerate(e):
                    c[d, i, j] = v
        return cls(f, c)

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def memory(self) -> int:
        return self.coeffs.shape[0] - 1 if self.coeffs.any() else 0

    @cached_property
    def row_degrees(self) -> tuple[int, ...]:
        out = []
        for i in range(self.rows):
            nz = np.nonzero(self.coeffs[:, i, :].any(axis=1))[0]
            out.append(int(nz[-1]) if nz.size else 0)
        return tuple(out)

    @property
    def constraint_length(self) -> int:
        return sum(self.row_degrees)

    nu = constraint_length

    @property
    def degenerate(self) -> bool:
        return self.nominal_memory is not None and self.memory < self.nominal_memory

    def coefficient(self, j: int) -> MatrixFq:
        if j >= self.coeffs.shape[0]:
            return MatrixFq.zeros(self.field, self.rows, self.cols)
        return MatrixFq(self.field, self.coeffs[j])

    def entry(self, i: int, j: int) -> tuple[int, ...]:
        return ptrim(self.coeffs[:, i, j])

    def at_zero(self) -> MatrixFq:
        return self.coefficient(0)

    def high_coefficients(self) -> MatrixFq:
        """Row i taken from the coefficient of D^{nu_i}."""
        d = self.row_degrees
        return MatrixFq(self.field, np.array([self.coeffs[d[i], i] for i in range(self.rows)]).reshape(self.rows, self.cols))

    def conjugate(self, q: int) -> "PolyMatrix":
        return PolyMatrix(self.field, frobenius(self.field, self.coeffs, q), self.nominal_memory)

    def vstack(self, other: "PolyMatrix") -> "PolyMatrix":
        m = max(self.coeffs.shape[0], other.coeffs.shape[0])
        a = np.zeros((m, self.rows, self.cols), dtype=np.int64)
        b = np.zeros((m, other.rows, other.cols), dtype=np.int64)
        a[: self.coeffs.shape[0]] = self.coeffs
        b[: other.coeffs.shape[0]] = other.coeffs
        return PolyMatrix(self.field, np.concatenate([a, b], axis=1))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and other.field is self.field
            and other.coeffs.shape == self.coeffs.shape
            and bool(np.array_equal(other.coeffs, self.coeffs))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, memory {self.memory}, nu {self.nu}, {self.field.name})"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "field": self.field.name,
            "memory": self.memory,
            "coeffs": [self.coefficient(j).dump().split("\n") for j in range(self.coeffs.shape[0])],
        }


def polymatrix_from_json(obj) -> PolyMatrix:
    from .matrix import load_matrix

    mats = [load_matrix("\n".join(lines)) for lines in obj["coeffs"]]
    return PolyMatrix.from_matrices(mats)


def build_from_split(parts) -> PolyMatrix:
    """G(D) = H~_0 + H~_1 D + ... with each part zero-padded at the bottom to kappa rows."""
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    f = parts[0].field
    n = parts[0].cols
    for P in parts:
        if P.cols != n:
            raise ValueError("all parts must have the same number of columns")
        if P.field is not f:
            raise ValueError("all parts must share a field")
    kappa = max(P.rows for P in parts)
    c = np.zeros((len(parts), kappa, n), dtype=np.int64)
    for j, P in enumerate(parts):
        c[j, : P.rows] = P.data
    return PolyMatrix(f, c, nominal_memory=len(parts) - 1)


@dataclass
class CodewordStream:
    field: FieldSpec
    frames: np.ndarray
    start: int = 0

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.frames))

    def __len__(self) -> int:
        return len(self.frames)


def encode(G: PolyMatrix, u) -> CodewordStream:
    """v_t = sum_j u_{t-j} G_j for an input of shape (L, rows)."""
    f = G.field
    u = np.asarray(u, dtype=np.int64)
    if u.ndim == 1:
        u = u.reshape(-1, G.rows) if u.size else np.zeros((0, G.rows), np.int64)
    if u.shape[1] != G.rows:
        raise ValueError(f"input frames must have width {G.rows}")
    m = G.memory
    L = u.shape[0]
    out = np.zeros((L + m, G.cols), dtype=np.int64)
    if L == 0:
        return CodewordStream(f, out[:0])
    for j in range(G.coeffs.shape[0]):
        out[j : j + L] = f.add(out[j : j + L], matmul(f, u, G.coeffs[j]))
    return CodewordStream(f, out)


# -- basicness ------------------------------------------------------------------------


def _bareiss_det(f: FieldSpec, M) -> tuple[int, ...]:
    """Determinant of a square matrix of polynomials by fraction-free elimination."""
    a = [list(row) for row in M]
    n = len(a)
    if n == 0:
        return (1,)
    sign = 1
    prev: tuple[int, ...] = (1,)
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = psub(f, pmul(f, a[k][k], a[i][j]), pmul(f, a[i][k], a[k][j]))
                quo, rem = pdivmod(f, num, prev)
                assert not rem, "inexact division in fraction-free elimination"
                a[i][j] = quo
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return pneg(f, det) if sign < 0 else det


def _entries(G: PolyMatrix):
    return [[G.entry(i, j) for j in range(G.cols)] for i in range(G.rows)]


def smith_invariants(G: PolyMatrix) -> list[tuple[int, ...]]:
    """Monic invariant factors of G(D) over F_q[D] (the diagonal of its Smith form)."""
    f = G.field
    a = _entries(G)
    rows, cols = G.rows, G.cols
    out = []
    t = 0
    while t < min(rows, cols):
        nz = [(pdeg(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        while True:
            piv = a[t][t]
            changed = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    qt, rm = pdivmod(f, a[i][t], piv)
                    a[i] = [psub(f, a[i][j], pmul(f, qt, a[t][j])) for j in range(cols)]
                    if rm:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    qt, rm = pdivmod(f, a[t][j], piv)
                    for i in range(rows):
                        a[i][j] = psub(f, a[i][j], pmul(f, qt, a[i][t]))
                    if rm:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            # pivot must divide the remaining block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] and pdivmod(f, a[i][j], piv)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [padd(f, x, y) for x, y in zip(a[t], a[bad])]
        out.append(pmonic(f, a[t][t]))
        t += 1
    return out


def polynomial_minor_gcd(G: PolyMatrix, max_minors: int = 5000, samples: int = 64) -> tuple[int, ...]:
    """Monic gcd of all maximal (rows x rows) minors; () when G is rank deficient.

    A constant gcd of any subset of minors already proves the whole gcd is a
    constant, so a seeded sample of column subsets is tried first.  Otherwise
    every minor is visited when there are at most ``max_minors`` of them, and
    beyond that the product of the Smith invariant factors (which equals the
    same gcd) is returned.
    """
    f = G.field
    k, n = G.rows, G.cols
    if k > n:
        raise ValueError("minor gcd needs rows <= cols")
    if k == 0:
        return (1,)
    ent = _entries(G)

    def minor(cols) -> tuple[int, ...]:
        return _bareiss_det(f, [[ent[i][j] for j in cols] for i in range(k)])

    total = math.comb(n, k)
    g: tuple[int, ...] = ()
    if total > samples:
        rng = np.random.default_rng(0)
        for _ in range(samples):
            g = pgcd(f, g, minor(sorted(rng.choice(n, k, replace=False).tolist())))
            if len(g) == 1:
                return g
    if total <= max_minors:
        g = ()
        for cols in itertools.combinations(range(n), k):
            det = minor(cols)
            if det:
                g = pgcd(f, g, det)
                if len(g) == 1:
                    return g
        return g
    inv = smith_invariants(G)
    if len(inv) < k:
        return ()
    prod: tuple[int, ...] = (1,)
    for p in inv:
        prod = pmul(f, prod, p)
    return pmonic(f, prod)


@dataclass(frozen=True)
class Certificate:
    g0_full_rank: bool
    high_coeff_full_rank: bool
    minor_gcd: tuple[int, ...]
    basic: bool
    reduced: bool
    catastrophic: bool
    field: FieldSpec = field(repr=False, compare=False, default=None)

    def to_json(self) -> dict:
        return {
            "g0_full_rank": self.g0_full_rank,
            "high_coeff_full_rank": self.high_coeff_full_rank,
            "minor_gcd": pformat(self.field, self.minor_gcd) if self.field else list(self.minor_gcd),
            "basic": self.basic,
            "reduced": self.reduced,
            "catastrophic": self.catastrophic,
        }

    @property
    def ok(self) -> bool:
        return self.g0_full_rank and self.high_coeff_full_rank and self.basic


def certify_reduced_basic(G: PolyMatrix) -> Certificate:
    """Delay-free, predictable-degree and basicness checks for G(D)."""
    k = G.rows
    g0 = rank(G.at_zero()) == k
    high = rank(G.high_coefficients()) == k
    if k > G.cols:
        g = ()
    else:
        g = polynomial_minor_gcd(G)
    basic = len(g) == 1
    # Massey-Sain: non-catastrophic iff the minor gcd is a power of D
    catastrophic = not g or any(g[:-1])
    return Certificate(g0, high, g, basic, basic and high, catastrophic, G.field)


def is_catastrophic(G: PolyMatrix) -> bool:
    return certify_reduced_basic(G).catastrophic


# -- duality ------------------------------------------------------------------------------


def reverse_dual(H: PolyMatrix) -> PolyMatrix:
    """Row-wise D^{nu_i} h_i(1/D)."""
    c = np.zeros_like(H.coeffs)
    for i, d in enumerate(H.row_degrees):
        c[: d + 1, i] = H.coeffs[d::-1, i]
    return PolyMatrix(H.field, c)


def _laurent_products(f, A: np.ndarray, B: np.ndarray) -> dict[int, np.ndarray]:
    out = {}
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            s = i - j
            term = matmul(f, A[i], B[j].T)
            out[s] = f.add(out[s], term) if s in out else term
    return out


def laurent_orthogonal(G: PolyMatrix, W: PolyMatrix, hermitian: bool = False, q: int | None = None) -> bool:
    """True iff G(D) W~(1/D)^t = 0, W~ the entrywise conjugate when ``hermitian``."""
    if G.cols != W.cols:
        raise ValueError("column counts differ")
    if G.field is not W.field:
        raise ValueError("matrices over different fields")
    if G.rows == 0 or W.rows == 0:
        return True
    Wc = W.coeffs
    if hermitian:
        if q is None:
            raise ValueError("hermitian orthogonality needs the subfield order q")
        Wc = frobenius(W.field, Wc, q)
    prods = _laurent_products(G.field, G.coeffs, Wc)
    return all(not v.any() for v in prods.values())


def symplectic_check(X: PolyMatrix, Z: PolyMatrix) -> bool:
    """True iff X(D) Z(1/D)^t - Z(D) X(1/D)^t = 0."""
    if (X.rows, X.cols) != (Z.rows, Z.cols):
        raise ValueError("X and Z must have the same shape")
    if X.field is not Z.field:
        raise ValueError("X and Z over different fields")
    f = X.field
    xz = _laurent_products(f, X.coeffs, Z.coeffs)
    zx = _laurent_products(f, Z.coeffs, X.coeffs)
    for s in set(xz) | set(zx):
        a = xz.get(s, 0)
        b = zx.get(s, 0)
        if np.any(f.sub(a, b)):
            return False
    return True


# -- trellis searches -----------------------------------------------------------------------


def _digits(idx: np.ndarray, q: int, width: int) -> np.ndarray:
    return (idx[:, None] // (q ** np.arange(width, dtype=np.int64))) % q


def _undigits(d: np.ndarray, q: int) -> np.ndarray:
    return d @ (q ** np.arange(d.shape[1], dtype=np.int64)) if d.shape[1] else np.zeros(len(d), np.int64)


def _reduce_edges(src, dst, w, S):
    key = src * S + dst
    order = np.lexsort((w, key))
    key, w = key[order], w[order]
    first = np.ones(len(key), dtype=bool)
    first[1:] = key[1:] != key[:-1]
    key, w = key[first], w[first]
    return key // S, key % S, w


def shortest_return(S: int, src, dst, w, start: int, accept, block_best: float, cap=None):
    """Min weight of a nonempty path start -> accept.

    ``accept`` is a boolean mask over states; arrival at an accepting state
    ends the path.  ``block_best`` seeds the answer with single-edge
    codewords handled by the caller.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if len(src):
        src, dst, w = _reduce_edges(src, dst, w, S)
    ptr = np.searchsorted(src, np.arange(S + 1))
    inf = np.iinfo(np.int64).max // 4
    best = inf if block_best is None or block_best == np.inf else int(block_best)
    dist = np.full(S, inf, dtype=np.int64)
    done = np.zeros(S, dtype=bool)
    done[start] = True
    heap: list[tuple[int, int]] = []

    def relax(d0, lo, hi):
        nonlocal best
        if lo == hi:
            return
        t, nd = dst[lo:hi], d0 + w[lo:hi]
        acc = accept[t]
        if acc.any():
            best = min(best, int(nd[acc].min()))
        m = ~acc & ~done[t] & (nd < dist[t])
        if m.any():
            # several edges may hit the same target; keep the minimum
            tt, dd = t[m], nd[m]
            o = np.lexsort((dd, tt))
            tt, dd = tt[o], dd[o]
            keep = np.ones(len(tt), dtype=bool)
            keep[1:] = tt[1:] != tt[:-1]
            for s2, d2 in zip(tt[keep].tolist(), dd[keep].tolist()):
                if d2 < dist[s2]:
                    dist[s2] = d2
                    heapq.heappush(heap, (d2, s2))

    relax(0, ptr[start], ptr[start + 1])
    limit = best
    stopped_at_cap = False
    while heap:
        d, s = heapq.heappop(heap)
        if done[s] or d > dist[s]:
            continue
        if d >= best:
            break
        if cap is not None and d >= cap:
            stopped_at_cap = True
            break
        done[s] = True
        relax(d, ptr[s], ptr[s + 1])
    del limit
    if best >= inf:
        best = None
    if cap is not None and (best is None or best >= cap) and stopped_at_cap:
        return Distance(cap, exact=False)
    if best is None:
        raise ValueError("no nonzero codeword path found")
    return Distance(best)


@dataclass
class EncoderTrellis:
    """Edges of the encoder trellis of im G(D), minimized over parallel branches."""

    G: PolyMatrix
    states: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    block_best: float


def _enumerate_indices(total: int, chunk: int = 1 << 16):
    for lo in range(0, total, chunk):
        yield np.arange(lo, min(total, lo + chunk), dtype=np.int64)


def encoder_layout(G: PolyMatrix):
    """State digit positions (row, delay) and the stacked output matrix."""
    layout = [(i, j) for i, d in enumerate(G.row_degrees) for j in range(1, d + 1)]
    M = [G.coeffs[0][i] for i in range(G.rows)] + [G.coeffs[j][i] for i, j in layout]
    M = np.array(M, dtype=np.int64).reshape(len(M), G.cols)
    return layout, M


def encoder_next_state(layout, u: np.ndarray, st: np.ndarray) -> np.ndarray:
    pos = {key: p for p, key in enumerate(layout)}
    nxt = np.zeros_like(st)
    for p, (i, j) in enumerate(layout):
        nxt[:, p] = u[:, i] if j == 1 else st[:, pos[(i, j - 1)]]
    return nxt


def encoder_trellis(G: PolyMatrix, max_states=DEFAULT_MAX_STATES, max_words=DEFAULT_MAX_WORDS) -> EncoderTrellis:
    f = G.field
    q, k, nu = f.order, G.rows, G.nu
    S = q**nu
    if S > max_states:
        raise BudgetExceeded(f"{S} trellis states exceed the budget of {max_states}")
    total = q ** (k + nu)
    if total > max_words:
        raise BudgetExceeded(f"{total} trellis branches exceed the budget of {max_words}")
    layout, M = encoder_layout(G)
    srcs, dsts, ws = [], [], []
    block_best = np.inf
    for z in _enumerate_indices(total):
        zd = _digits(z, q, k + nu)
        out = matmul(f, zd, M)
        w = np.count_nonzero(out, axis=1)
        u, st = zd[:, :k], zd[:, k:]
        s = _undigits(st, q)
        s2 = _undigits(encoder_next_state(layout, u, st), q)
        loop = (s == 0) & (s2 == 0)
        nz_loop = loop & (z != 0)
        if nz_loop.any():
            block_best = min(block_best, int(w[nz_loop].min()))
        keep = ~loop
        srcs.append(s[keep])
        dsts.append(s2[keep])
        ws.append(w[keep])
    return EncoderTrellis(G, S, np.concatenate(srcs), np.concatenate(dsts), np.concatenate(ws), block_best)


def free_distance(
    G: PolyMatrix,
    weight_cap: int | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    max_words: int = DEFAULT_MAX_WORDS,
    check: bool = True,
) -> Distance:
    """Exact free distance of im G(D) by uniform-cost search on the encoder trellis."""
    if check and is_catastrophic(G):
        raise CatastrophicError("free distance search needs a non-catastrophic generator")
    if G.rows == 0:
        raise ValueError("the zero code has no free distance")
    if G.memory == 0:
        return min_distance_generator(row_basis(G.at_zero()), cap=weight_cap, max_words=max_words)
    T = encoder_trellis(G, max_states, max_words)
    accept = np.zeros(T.states, dtype=bool)
    accept[0] = True
    return shortest_return(T.states, T.src, T.dst, T.weight, 0, accept, T.block_best, weight_cap)


def weight_patterns(n: int, w: int, q: int, batch: int = 1 << 15):
    """(positions, values) of every weight-w vector of F_q^n, in batches."""
    vals = np.array(list(itertools.product(range(1, q), repeat=w)), dtype=np.int64).reshape(-1, w)
    per = max(1, batch // len(vals))
    combos = itertools.combinations(range(n), w)
    while True:
        chunk = list(itertools.islice(combos, per))
        if not chunk:
            return
        pos = np.array(chunk, dtype=np.int64).reshape(-1, w)
        yield np.repeat(pos, len(vals), axis=0), np.tile(vals, (len(pos), 1))


def sparse_product(f: FieldSpec, cols: np.ndarray, pos: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """Rows sum_t vals[:, t] * cols[pos[:, t]], i.e. sparse vectors times a matrix with rows ``cols``."""
    acc = np.zeros((len(pos), cols.shape[1]), dtype=np.int64)
    if f.order == 2:
        for t in range(pos.shape[1]):
            acc ^= cols[pos[:, t]]
        return acc
    for t in range(pos.shape[1]):
        acc = np.asarray(f.add(acc, f.mul(vals[:, t, None], cols[pos[:, t]])), dtype=np.int64)
    return acc


def _level_cost(n: int, w: int, q: int) -> int:
    return math.comb(n, w) * (q - 1) ** w


def coset_leader_weights(f: FieldSpec, A: np.ndarray, targets: np.ndarray, max_vectors: int = LOW_WEIGHT_LIMIT) -> np.ndarray:
    """For each target row y, the minimum weight of c with c A^t = y.

    Vectors are visited by increasing weight until every target is reached,
    so the cost is governed by the covering radius rather than by the size
    of the cosets.
    """
    q = f.order
    R, n = A.shape
    targets = np.asarray(targets, dtype=np.int64).reshape(-1, R)
    keys = _undigits(targets, q)
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    out = np.full(len(targets), -1, dtype=np.int64)
    out[keys == 0] = 0
    cols = A.T.copy()
    spent = 0
    for w in range(1, n + 1):
        if (out >= 0).all():
            break
        spent += _level_cost(n, w, q)
        if spent > max_vectors:
            raise BudgetExceeded(f"coset-leader search needs more than {max_vectors} vectors")
        for pos, vals in weight_patterns(n, w, q):
            k = _undigits(sparse_product(f, cols, pos, vals), q)
            i = np.minimum(np.searchsorted(sk, k), len(sk) - 1)
            hit = sk[i] == k
            idx = order[i[hit]]
            out[idx[out[idx] < 0]] = w
    if (out < 0).any():
        raise ValueError("target syndrome outside the image")
    return out


class SyndromeTrellis:
    """Trellis of the Euclidean dual of im G(D).

    A stream c lies in the dual iff every constraint
    ``sum_j c_{l+j} . g_{i,j} = 0`` holds.  The state collects the pending
    partial sums of unfinished constraints (nu_i of them for row i), so the
    trellis has q^nu states.  Frames enter only through
    ``y = (c . g_{i,j})_{i,j}``; frames with equal ``y`` form a coset of the
    block code K orthogonal to every coefficient row, and each branch is
    labelled with that coset's minimum weight.
    """

    def __init__(self, G: PolyMatrix, max_states=DEFAULT_MAX_STATES, max_words=DEFAULT_MAX_WORDS):
        f = G.field
        self.G = G
        self.field = f
        q = self.q = f.order
        n = self.n = G.cols
        degs = G.row_degrees
        self.ycols = [(i, j) for i, d in enumerate(degs) for j in range(d + 1)]
        self.layout = [(i, a) for i, d in enumerate(degs) for a in range(1, d + 1)]
        self.S = q ** len(self.layout)
        if self.S > max_states:
            raise BudgetExceeded(f"{self.S} trellis states exceed the budget of {max_states}")
        A = np.array([G.coeffs[j][i] for i, j in self.ycols], dtype=np.int64).reshape(len(self.ycols), n)
        self.A = A
        Am = MatrixFq(f, A)
        R, piv = rref(Am) if A.shape[0] else (Am, [])
        self.pivots = piv
        self.K = kernel_basis(Am).data if A.shape[0] else np.eye(n, dtype=np.int64)
        if q ** len(piv) > max_words:
            raise BudgetExceeded(f"{q}^{len(piv)} frame syndromes exceed the budget of {max_words}")
        x = _digits(np.arange(q ** len(piv), dtype=np.int64), q, len(piv))
        reps = np.zeros((len(x), n), dtype=np.int64)
        if piv:
            reps[:, piv] = x
        y = self.syndromes(reps)
        ok = self.frame_valid(y)
        self.reps, self.y = reps[ok], y[ok]
        self.rep_weight = coset_leader_weights(f, A, self.y)
        if self.K.shape[0]:
            self.block_best = min_distance_generator(MatrixFq(f, self.K), max_words=max_words).value
        else:
            self.block_best = np.inf

    def syndromes(self, frames: np.ndarray) -> np.ndarray:
        if not self.ycols:
            return np.zeros((len(frames), 0), dtype=np.int64)
        return matmul(self.field, frames, self.A.T)

    def frame_valid(self, y: np.ndarray) -> np.ndarray:
        ok = np.ones(len(y), dtype=bool)
        for c, (i, j) in enumerate(self.ycols):
            if self.G.row_degrees[i] == 0:
                ok &= y[:, c] == 0
        return ok

    def transitions(self, y: np.ndarray):
        """All (edge id, src, dst) produced by frames with syndromes ``y``."""
        f, q = self.field, self.q
        ycol = {key: c for c, key in enumerate(self.ycols)}
        pos = {key: p for p, key in enumerate(self.layout)}
        degs = self.G.row_degrees
        free = [p for p, (i, a) in enumerate(self.layout) if a < degs[i]]
        nfree = len(free)
        combos = _digits(np.arange(q**nfree, dtype=np.int64), q, nfree)
        E = len(y)
        idx = np.repeat(np.arange(E), len(combos))
        yy = y[idx]
        st = np.zeros((len(idx), len(self.layout)), dtype=np.int64)
        if nfree:
            st[:, free] = np.tile(combos, (E, 1))
        for p, (i, a) in enumerate(self.layout):
            if a == degs[i]:
                st[:, p] = f.neg(yy[:, ycol[(i, a)]])
        nxt = np.zeros_like(st)
        for p, (i, a) in enumerate(self.layout):
            if a == 1:
                nxt[:, p] = yy[:, ycol[(i, 0)]]
            else:
                nxt[:, p] = f.add(st[:, pos[(i, a - 1)]], yy[:, ycol[(i, a - 1)]])
        return idx, _undigits(st, q), _undigits(nxt, q)

    def edges(self):
        idx, s, s2 = self.transitions(self.y)
        w = self.rep_weight[idx]
        zero_frame = s == 0
        zero_frame &= s2 == 0
        keep = ~zero_frame
        return s[keep], s2[keep], w[keep]

    def free_distance(self, weight_cap=None) -> Distance:
        src, dst, w = self.edges()
        accept = np.zeros(self.S, dtype=bool)
        accept[0] = True
        return shortest_return(self.S, src, dst, w, 0, accept, self.block_best, weight_cap)


def dual_free_distance(
    G: PolyMatrix,
    hermitian: bool = False,
    q: int | None = None,
    weight_cap: int | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    max_words: int = DEFAULT_MAX_WORDS,
) -> Distance:
    """Exact free distance of the Euclidean (or Hermitian) dual of im G(D)."""
    if hermitian:
        if q is None:
            raise ValueError("hermitian dual needs the subfield order q")
        G = G.conjugate(q)
    if G.memory == 0:
        return min_distance_bruteforce(G.at_zero(), cap=weight_cap, max_words=max_words)
    return SyndromeTrellis(G, max_states, max_words).free_distance(weight_cap)
