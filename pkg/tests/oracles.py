"""Independent reference computations used only by the tests.

Everything here is deliberately naive: plain enumeration with no trellis,
no information sets and no shared search code.
"""

from __future__ import annotations

import itertools

import numpy as np

from qconvbch.galois import FieldSpec
from qconvbch.matrix import Echelon, MatrixFq, kernel_basis


def poly_mul_mod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Schoolbook product of coefficient lists modulo a monic modulus over GF(p)."""
    m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for k in range(m + 1):
                prod[d - m + k] = (prod[d - m + k] - c * modulus[k]) % p
    out = prod[:m] + [0] * max(0, m - len(prod))
    return out


def int_to_coeffs(v: int, p: int, m: int) -> list[int]:
    return [(v // p**i) % p for i in range(m)]


def coeffs_to_int(c, p: int) -> int:
    return sum(int(x) * p**i for i, x in enumerate(c))


def naive_mul(f: FieldSpec, a: int, b: int) -> int:
    p, m = f.p, f.degree
    return coeffs_to_int(poly_mul_mod(int_to_coeffs(a, p, m), int_to_coeffs(b, p, m), list(f.modulus), p), p)


def naive_add(f: FieldSpec, a: int, b: int) -> int:
    p, m = f.p, f.degree
    return coeffs_to_int([(x + y) % p for x, y in zip(int_to_coeffs(a, p, m), int_to_coeffs(b, p, m))], p)


def all_vectors(q: int, k: int):
    return itertools.product(range(q), repeat=k)


def block_min_distance(f: FieldSpec, G: np.ndarray) -> int:
    """Minimum nonzero weight of rowspan(G) by listing every combination."""
    G = np.asarray(G, dtype=np.int64)
    best = None
    for u in all_vectors(f.order, G.shape[0]):
        if not any(u):
            continue
        acc = np.zeros(G.shape[1], dtype=np.int64)
        for c, row in zip(u, G):
            if c:
                acc = f.add(acc, f.mul(c, row))
        w = int(np.count_nonzero(acc))
        if w and (best is None or w < best):
            best = w
    return best


def _convolve(f: FieldSpec, coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    m1, k, n = coeffs.shape
    L = u.shape[0]
    out = np.zeros((L + m1 - 1, n), dtype=np.int64)
    for t in range(L):
        for j in range(m1):
            for i in range(k):
                if u[t, i]:
                    out[t + j] = f.add(out[t + j], f.mul(int(u[t, i]), coeffs[j, i]))
    return out


def naive_free_distance(G, max_degree: int) -> int:
    """min wt(u G) over nonzero inputs of degree <= max_degree with u_0 != 0."""
    f = G.field
    k = G.rows
    best = None
    for flat in all_vectors(f.order, k * (max_degree + 1)):
        u = np.array(flat, dtype=np.int64).reshape(max_degree + 1, k)
        if not u[0].any():
            continue
        w = int(np.count_nonzero(_convolve(f, G.coeffs, u)))
        if best is None or w < best:
            best = w
    return best


def _sliding_constraints(G, frames: int, conj=None) -> MatrixFq:
    """Rows D^l g_i restricted to ``frames`` frames, for every shift that overlaps."""
    f = G.field
    n = G.cols
    C = G.coeffs if conj is None else conj
    rows = []
    for i, d in enumerate(G.row_degrees):
        for l in range(-d, frames):
            v = np.zeros(frames * n, dtype=np.int64)
            for j in range(d + 1):
                t = l + j
                if 0 <= t < frames:
                    v[t * n : (t + 1) * n] = C[j, i]
            rows.append(v)
    return MatrixFq(f, np.array(rows, dtype=np.int64).reshape(len(rows), frames * n))


def _span_words(f: FieldSpec, B: np.ndarray, batch: int = 1 << 14):
    """Every nonzero combination of the rows of B, built with broadcast field ops."""
    k = B.shape[0]
    combos = itertools.product(range(f.order), repeat=k)
    next(combos)  # the zero combination
    while True:
        U = np.array(list(itertools.islice(combos, batch)), dtype=np.int64)
        if not len(U):
            return
        acc = np.zeros((len(U), B.shape[1]), dtype=np.int64)
        for i in range(k):
            acc = f.add(acc, f.mul(U[:, i : i + 1], B[i][None, :]))
        yield from np.asarray(acc, dtype=np.int64)


def naive_dual_words(G, frames: int, conj=None):
    """Nonzero dual streams supported on ``frames`` frames (first frame nonzero)."""
    f = G.field
    n = G.cols
    K = kernel_basis(_sliding_constraints(G, frames, conj)).data
    for c in _span_words(f, K):
        if c[:n].any():
            yield c


def naive_dual_free_distance(G, frames: int, conj=None) -> int:
    return min(int(np.count_nonzero(c)) for c in naive_dual_words(G, frames, conj))


def naive_quotient_distance(G, frames: int, conj=None) -> int:
    """min weight over dual streams of ``frames`` frames that are not V-codewords."""
    f = G.field
    n = G.cols
    rows = []
    for i, d in enumerate(G.row_degrees):
        for l in range(0, frames - d):
            v = np.zeros(frames * n, dtype=np.int64)
            for j in range(d + 1):
                v[(l + j) * n : (l + j + 1) * n] = G.coeffs[j, i]
            rows.append(v)
    ech = Echelon(f, frames * n)
    for v in rows:
        ech.insert(v)
    best = None
    for c in naive_dual_words(G, frames, conj):
        if ech.contains(c):
            continue
        w = int(np.count_nonzero(c))
        if best is None or w < best:
            best = w
    return best


def cyclic_min_distance(f: FieldSpec, n: int, H: MatrixFq) -> int:
    """Minimum distance of ker H^t by listing the kernel."""
    return block_min_distance(f, kernel_basis(H).data)
