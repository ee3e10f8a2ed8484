"""Quantum convolutional stabilizer codes from self-orthogonal convolutional codes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convbch import Bound, ConvCode, RangeError, construct_conv_bch
from .cyclic import delta_max, hermitian_delta_bound
from .galois import make_field, prime_power, subfield_basis
from .matrix import (
    BudgetExceeded,
    Distance,
    MatrixFq,
    euclidean_self_orthogonal,
    WordOps,
    hermitian_self_orthogonal,
    iter_span,
    kernel_basis,
    matmul,
    rank,
    rref,
)
from .polymat import (
    DEFAULT_MAX_STATES,
    DEFAULT_MAX_WORDS,
    LOW_WEIGHT_LIMIT,
    _level_cost,
    sparse_product,
    weight_patterns,
    PolyMatrix,
    SyndromeTrellis,
    _digits,
    _undigits,
    certify_reduced_basic,
    encoder_layout,
    encoder_next_state,
    laurent_orthogonal,
    shortest_return,
    symplectic_check,
)

# hit cosets smaller than this are enumerated rather than searched by weight
DIRECT_SPLIT_LIMIT = 1 << 22

SRC_PURITY = "cited: dual-containing BCH range"


class SelfOrthogonalityError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StabilizerConv:
    n: int
    k: int
    q: int
    X: PolyMatrix
    Z: PolyMatrix
    construction: str  # "css-euclidean" or "hermitian"
    classical: PolyMatrix
    df_lower: Bound | None = None
    purity_bound: Bound | None = None
    degenerate: bool = False
    source: ConvCode | None = None

    @property
    def memory(self) -> int:
        return max(self.X.memory, self.Z.memory)

    m = memory

    @property
    def nu(self) -> int:
        return self.classical.nu

    @property
    def kappa(self) -> int:
        return self.classical.rows

    @property
    def hermitian(self) -> bool:
        return self.construction == "hermitian"

    def parameters(self) -> str:
        return f"[({self.n},{self.k},{self.memory})]_{self.q}"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "m": self.memory,
            "nu": self.nu,
            "q": self.q,
            "kappa": self.kappa,
            "construction": self.construction,
            "parameters": self.parameters(),
            "df_lower": self.df_lower.to_json() if self.df_lower else None,
            "purity_bound": self.purity_bound.to_json() if self.purity_bound else None,
            "degenerate": self.degenerate,
            "stabilizer": {"X": self.X.to_json(), "Z": self.Z.to_json()},
        }


def _full_rank(G: PolyMatrix) -> bool:
    # rank over F_q(D) equals rank at a generic point; a full-rank
    # constant or leading coefficient is a sufficient witness
    if G.rows == 0:
        return True
    if rank(G.at_zero()) == G.rows or rank(G.high_coefficients()) == G.rows:
        return True
    st = np.concatenate(list(G.coeffs), axis=1)
    return rank(MatrixFq(G.field, st)) == G.rows and certify_reduced_basic(G).minor_gcd != ()


def _zero_block(G: PolyMatrix) -> PolyMatrix:
    return PolyMatrix(G.field, np.zeros_like(G.coeffs))


def css_from_selforthogonal(G: PolyMatrix, n: int | None = None, q: int | None = None, **kw) -> StabilizerConv:
    """X = [G; 0], Z = [0; G] for a Euclidean self-orthogonal G(D)."""
    n = G.cols if n is None else n
    q = G.field.order if q is None else q
    if G.cols != n or G.field.order != q:
        raise ValueError("generator does not match the requested frame size or field")
    if not laurent_orthogonal(G, G):
        raise SelfOrthogonalityError("G(D) is not self-orthogonal")
    if not _full_rank(G):
        raise ValueError("G(D) is rank deficient")
    zero = _zero_block(G)
    X = G.vstack(zero)
    Z = zero.vstack(G)
    if not symplectic_check(X, Z):
        raise AssertionError("CSS stabilizer failed the symplectic check")
    return StabilizerConv(n, n - 2 * G.rows, q, X, Z, "css-euclidean", G, **kw)


def symplectic_basis(q: int):
    """GF(q^2) over GF(q) with basis {1, g}, g the generator of GF(q^2)."""
    p, s = prime_power(q)
    base, ext = make_field(p, s), make_field(p, 2 * s)
    return subfield_basis(base, ext, [1, ext.generator])


def hermitian_from_selforthogonal(G: PolyMatrix, n: int | None = None, q: int | None = None, **kw) -> StabilizerConv:
    """Expand each row g and g*gamma of a Hermitian self-orthogonal G over GF(q^2) into (X|Z) over GF(q).

    An entry a + b*gamma goes to (a | b); the trace-symplectic form of the
    expansion is then exactly X Z^t - Z X^t.
    """
    ext = G.field
    n = G.cols if n is None else n
    if q is None:
        p, s = prime_power(ext.order)
        q = p ** (s // 2)
    if ext.order != q * q:
        raise ValueError(f"generator must live over GF({q}^2)")
    if G.cols != n:
        raise ValueError("generator does not match the requested frame size")
    if not laurent_orthogonal(G, G, hermitian=True, q=q):
        raise SelfOrthogonalityError("G(D) is not Hermitian self-orthogonal")
    if not _full_rank(G):
        raise ValueError("G(D) is rank deficient")
    B = symplectic_basis(q)
    gamma = ext.generator
    rows = np.concatenate([G.coeffs, ext.mul(G.coeffs, gamma)], axis=1)
    coords = B.expand(rows)  # (m+1, 2k, n, 2)
    X = PolyMatrix(B.base, coords[..., 0])
    Z = PolyMatrix(B.base, coords[..., 1])
    if not symplectic_check(X, Z):
        raise AssertionError("Hermitian expansion failed the symplectic check")
    return StabilizerConv(n, n - 2 * G.rows, q, X, Z, "hermitian", G, **kw)


def _quantum_bounds(C: ConvCode, purity: int | None):
    lower = C.bounds.get("df_lower")
    pb = Bound(purity, SRC_PURITY) if purity is not None and C.in_range else None
    return lower, pb


def qcbch_euclidean(
    n: int, q: int, delta: int, force: bool = False, max_words: int = DEFAULT_MAX_WORDS
) -> StabilizerConv:
    """CSS code [(n, n-2 kappa, 1)]_q from the convolutional BCH code of (n, q, delta)."""
    C = construct_conv_bch(n, q, delta, force=force, max_words=max_words)
    if not euclidean_self_orthogonal(C.split.H):
        raise SelfOrthogonalityError(f"parent parity matrix of {(n, q, delta)} is not self-orthogonal")
    lower, pb = _quantum_bounds(C, delta_max(n, q) + 1)
    return css_from_selforthogonal(C.generator, n, q, df_lower=lower, purity_bound=pb, degenerate=C.degenerate, source=C)


def qcbch_hermitian(
    n: int, q: int, delta: int, force: bool = False, max_words: int = DEFAULT_MAX_WORDS
) -> StabilizerConv:
    """Hermitian construction [(n, n-2 kappa, 1)]_q from the GF(q^2) convolutional BCH code."""
    C = construct_conv_bch(n, q * q, delta, force=force, hermitian_subfield=q, max_words=max_words)
    if not hermitian_self_orthogonal(C.split.H, q):
        raise SelfOrthogonalityError(f"parent parity matrix of {(n, q, delta)} is not Hermitian self-orthogonal")
    lower, _ = _quantum_bounds(C, None)
    return hermitian_from_selforthogonal(C.generator, n, q, df_lower=lower, degenerate=C.degenerate, source=C)


def check_range(kind: str, n: int, q: int, delta: int) -> tuple[bool, int]:
    limit = delta_max(n, q) if kind != "hermitian" else hermitian_delta_bound(n, q)
    return 2 <= 2 * delta < limit, limit


# -- wt(C^perp \ C) ------------------------------------------------------------------


def quotient_free_distance(
    G: PolyMatrix,
    hermitian: bool = False,
    q: int | None = None,
    weight_cap: int | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    max_words: int = DEFAULT_MAX_WORDS,
) -> Distance:
    """Minimum weight of a stream in the dual of V = im G(D) that is not in V.

    Product of the dual syndrome trellis with a tracker that follows the
    encoder of V while the stream so far is a V-codeword prefix, and drops
    to an absorbing OUT state at the first frame no encoder branch can
    produce.  A path ends when the syndrome state is zero and the tracker
    is not at the zero state.  G must be reduced with G(0) of full rank,
    so that tracking is deterministic and a nonzero tracker state at the
    end certifies non-membership.
    """
    cert = certify_reduced_basic(G)
    if not (cert.g0_full_rank and cert.reduced):
        raise ValueError("membership tracking needs a reduced generator with G(0) of full rank")
    f = G.field
    Q, n = f.order, G.cols
    T = SyndromeTrellis(G.conjugate(q) if hermitian else G, max_states, max_words)
    kappa, nu = G.rows, G.nu
    E = Q**nu
    OUT = E
    P = T.S * (E + 1)
    if P > max_states:
        raise BudgetExceeded(f"{P} product states exceed the budget of {max_states}")

    def node(sig, tau):
        return sig * (E + 1) + tau

    srcs, dsts, ws = [], [], []
    # dual branches after the stream has left V
    ds, dd, dw = T.edges()
    srcs.append(node(ds, OUT))
    dsts.append(node(dd, OUT))
    ws.append(dw)

    # branches that stay inside V
    layout, M = encoder_layout(G)
    total = Q ** (kappa + nu)
    if total > max_words:
        raise BudgetExceeded(f"{total} encoder branches exceed the budget of {max_words}")
    zd = _digits(np.arange(total, dtype=np.int64), Q, kappa + nu)
    frames = matmul(f, zd, M)
    e_now = _undigits(zd[:, kappa:], Q)
    e_next = _undigits(encoder_next_state(layout, zd[:, :kappa], zd[:, kappa:]), Q)
    y = T.syndromes(frames)
    ok = T.frame_valid(y)
    idx, s, s2 = T.transitions(y[ok])
    sel = np.nonzero(ok)[0][idx]
    srcs.append(node(s, e_now[sel]))
    dsts.append(node(s2, e_next[sel]))
    ws.append(np.count_nonzero(frames[sel], axis=1))

    # leaving V: frames of dual coset y emitted at tracker state e, minus
    # the encoder's own frames contrib(e) + rowspan(G0)
    ykey = _undigits(T.y, Q)
    pos_of = {int(k): i for i, k in enumerate(ykey.tolist())}
    hit: dict[int, set[int]] = {}
    for yi, e in zip(_undigits(y[ok], Q).tolist(), e_now[ok].tolist()):
        hit.setdefault(pos_of[yi], set()).add(e)
    P0 = kernel_basis(MatrixFq(f, G.coeffs[0])).data
    contrib = matmul(f, _digits(np.arange(E, dtype=np.int64), Q, nu), M[kappa:]) if nu else np.zeros((1, n), np.int64)
    tsyn = matmul(f, contrib, P0.T)
    split = _split_coset_weights(f, T.A, P0, T.y, hit, tsyn, T.K)
    W = np.repeat(T.rep_weight[:, None], E, axis=1)
    for (yi, e), w in split.items():
        W[yi, e] = w
    eidx, s, s2 = T.transitions(T.y)
    Wt = W[eidx]  # (edges, E)
    present = Wt >= 0
    rows, es = np.nonzero(present)
    srcs.append(node(s[rows], es))
    dsts.append(node(s2[rows], np.full(len(rows), OUT)))
    ws.append(Wt[rows, es])

    src = np.concatenate(srcs)
    dst = np.concatenate(dsts)
    w = np.concatenate(ws).astype(np.int64)
    start = node(0, 0)
    keep = dst != start
    accept = np.zeros(P, dtype=bool)
    accept[node(0, np.arange(1, E + 1))] = True
    return shortest_return(P, src[keep], dst[keep], w[keep], start, accept, None, weight_cap)


def _split_coset_weights(f, A, P0, ys, hit, tsyn, K, max_vectors=LOW_WEIGHT_LIMIT) -> dict:
    """Min weight of c with c A^t = ys[yi] and c P0^t != tsyn[e], for each hit pair; -1 if none."""
    pairs = {(yi, e) for yi, es in hit.items() for e in es}
    if not pairs:
        return {}
    out = {}
    if not matmul(f, K, P0.T).any():
        # every coset of K sits inside one coset of rowspan(G0): nothing to split
        return {pr: -1 for pr in pairs}
    q = f.order
    n = A.shape[1]
    targets = sorted(hit)
    if q ** K.shape[0] * len(targets) <= DIRECT_SPLIT_LIMIT:
        return _split_by_cosets(f, A, P0, ys, hit, tsyn, K)
    keys = _undigits(ys, q)
    tkeys = keys[targets]
    order = np.argsort(tkeys)
    sk = tkeys[order]
    acols, pcols = A.T.copy(), P0.T.copy()
    open_pairs = set(pairs)

    def settle(yi, s0_rows, w):
        uniq = np.unique(s0_rows, axis=0)
        for e in [e for (y2, e) in open_pairs if y2 == yi]:
            if (uniq != tsyn[e][None, :]).any(axis=1).any():
                out[(yi, e)] = w
                open_pairs.discard((yi, e))

    zero_key = 0
    if zero_key in pos_index(keys):
        yi0 = pos_index(keys)[zero_key]
        if yi0 in hit:
            settle(yi0, np.zeros((1, P0.shape[0]), np.int64), 0)
    spent = 0
    for w in range(1, n + 1):
        if not open_pairs:
            break
        spent += _level_cost(n, w, q)
        if spent > max_vectors:
            raise BudgetExceeded(f"coset splitting needs more than {max_vectors} vectors")
        for pos, vals in weight_patterns(n, w, q):
            k = _undigits(sparse_product(f, acols, pos, vals), q)
            i = np.minimum(np.searchsorted(sk, k), len(sk) - 1)
            m = sk[i] == k
            if not m.any():
                continue
            s0 = sparse_product(f, pcols, pos[m], vals[m])
            which = np.array(targets)[order[i[m]]]
            for yi in np.unique(which).tolist():
                settle(yi, s0[which == yi], w)
    for pr in open_pairs:
        out[pr] = -1
    return out


def _split_by_cosets(f, A, P0, ys, hit, tsyn, K) -> dict:
    # enumerate each hit coset rep + rowspan(K) outright
    n = A.shape[1]
    words = np.concatenate(list(iter_span(f, K, ops=WordOps(f, n, packed=False))), axis=0).astype(np.int64)
    wsyn = matmul(f, words, P0.T)
    Am = MatrixFq(f, A)
    R, piv = rref(Am)
    out = {}
    for yi, es in hit.items():
        # a representative with the wanted syndrome, supported on the pivot columns
        sol = solve_left(f, A[:, piv], ys[yi])
        rep = np.zeros(n, dtype=np.int64)
        rep[piv] = sol
        cw = np.asarray(f.add(words, rep[None, :]), dtype=np.int64)
        wt = np.count_nonzero(cw, axis=1)
        syn = np.asarray(f.add(wsyn, matmul(f, rep[None, :], P0.T)), dtype=np.int64)
        for e in es:
            outside = (syn != tsyn[e][None, :]).any(axis=1)
            out[(yi, e)] = int(wt[outside].min()) if outside.any() else -1
    return out


def solve_left(f, B: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x with x B^t = y for square invertible B (rows of B index syndrome digits)."""
    k = B.shape[1]
    aug = np.concatenate([B, np.asarray(y, dtype=np.int64).reshape(-1, 1)], axis=1)
    R, piv = rref(MatrixFq(f, aug))
    if k in piv:
        raise ValueError("syndrome outside the image")
    x = np.zeros(k, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R.data[r, k]
    return x


def pos_index(keys) -> dict[int, int]:
    return {int(k): i for i, k in enumerate(np.asarray(keys).tolist())}


def quantum_free_distance_oracle(
    S: StabilizerConv,
    weight_cap: int | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    max_words: int = DEFAULT_MAX_WORDS,
) -> Distance:
    """Exact wt(C^perp \\ C) for the classical code C behind ``S``."""
    if S.k == S.n or S.classical.rows == 0:
        raise ValueError("trivial stabilizer: every stream is logical, the distance is undefined")
    if S.k <= 0:
        raise ValueError("no logical qudits: the quotient is empty")
    return quotient_free_distance(
        S.classical, S.hermitian, S.q if S.hermitian else None, weight_cap, max_states, max_words
    )


__all__ = [
    "RangeError",
    "SelfOrthogonalityError",
    "StabilizerConv",
    "check_range",
    "css_from_selforthogonal",
    "hermitian_from_selforthogonal",
    "qcbch_euclidean",
    "qcbch_hermitian",
    "quantum_free_distance_oracle",
    "quotient_free_distance",
    "symplectic_basis",
]
