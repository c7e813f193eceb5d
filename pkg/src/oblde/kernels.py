"""Hot inner loops, each in a numba flavour and a pure-numpy flavour.

Every public function here dispatches on :func:`oblde._backend.get_backend`.
All randomness arrives pre-drawn as arguments, which keeps the two flavours
bit-for-bit interchangeable except for floating-point summation order in the
distance reductions.
"""

import numpy as np

from ._backend import get_backend, njit

# ---------------------------------------------------------------------------
# donor selection and DE/rand/1 mutation
# ---------------------------------------------------------------------------


@njit
def _donor_indices_nb(picks):
    n = picks.shape[0]
    out = np.empty((n, 3), dtype=np.int64)
    excluded = np.empty(4, dtype=np.int64)
    for i in range(n):
        excluded[0] = i
        n_excl = 1
        for c in range(3):
            k = picks[i, c]
            # k-th smallest index outside the excluded set
            for a in range(n_excl):
                for b in range(a + 1, n_excl):
                    if excluded[b] < excluded[a]:
                        tmp = excluded[a]
                        excluded[a] = excluded[b]
                        excluded[b] = tmp
            for a in range(n_excl):
                if k >= excluded[a]:
                    k += 1
            out[i, c] = k
            excluded[n_excl] = k
            n_excl += 1
    return out


def _donor_indices_np(picks):
    n = picks.shape[0]
    out = np.empty((n, 3), dtype=np.int64)
    excluded = np.arange(n, dtype=np.int64)[:, None]
    for c in range(3):
        k = picks[:, c].astype(np.int64).copy()
        ordered = np.sort(excluded, axis=1)
        for a in range(ordered.shape[1]):
            k += k >= ordered[:, a]
        out[:, c] = k
        excluded = np.concatenate([excluded, k[:, None]], axis=1)
    return out


def donor_indices(picks):
    """Map raw draws to donor triples ``(r1, r2, r3)`` distinct from each row index.

    ``picks[i]`` must hold integers in ``[0, NP-2]``, ``[0, NP-3]`` and
    ``[0, NP-4]``; each is read as a rank among the indices still free, so the
    triple is uniform over ordered distinct triples excluding ``i``.
    """
    picks = np.ascontiguousarray(picks, dtype=np.int64)
    if get_backend() == "numba":
        return _donor_indices_nb(picks)
    return _donor_indices_np(picks)


@njit
def _rand1_mutants_nb(X, donors, F, lo, hi):
    n = donors.shape[0]
    d = X.shape[1]
    out = np.empty((n, d))
    for i in range(n):
        r1 = donors[i, 0]
        r2 = donors[i, 1]
        r3 = donors[i, 2]
        for j in range(d):
            v = X[r1, j] + F * (X[r2, j] - X[r3, j])
            if v < lo[j]:
                v = lo[j]
            elif v > hi[j]:
                v = hi[j]
            out[i, j] = v
    return out


def _rand1_mutants_np(X, donors, F, lo, hi):
    v = X[donors[:, 0]] + F * (X[donors[:, 1]] - X[donors[:, 2]])
    return np.clip(v, lo, hi)


def rand1_mutants(X, donors, F, lo, hi):
    """``x_r1 + F (x_r2 - x_r3)`` for every donor row, projected onto ``[lo, hi]``."""
    donors = np.ascontiguousarray(donors, dtype=np.int64)
    if donors.size and (donors.min() < 0 or donors.max() >= X.shape[0]):
        raise IndexError("donor index outside the population")
    if get_backend() == "numba":
        return _rand1_mutants_nb(X, donors, float(F), lo, hi)
    return _rand1_mutants_np(X, donors, F, lo, hi)


# ---------------------------------------------------------------------------
# crossover masks (True = coordinate taken from the mutant / opposite)
# ---------------------------------------------------------------------------


@njit
def _exp_mask_nb(start, u, cr):
    n, d = u.shape
    mask = np.zeros((n, d), dtype=np.bool_)
    for i in range(n):
        for k in range(d):
            mask[i, (start[i] + k) % d] = True
            if k == d - 1 or u[i, k] > cr:
                break
    return mask


def _exp_mask_np(start, u, cr):
    n, d = u.shape
    mask = np.zeros((n, d), dtype=bool)
    rows = np.arange(n)
    active = np.ones(n, dtype=bool)
    for k in range(d):
        mask[rows, (start + k) % d] = active
        active &= u[:, k] <= cr
    return mask


def exp_mask(start, u, cr):
    """Single circular run from ``start``, continued while ``u[k] <= cr``."""
    start = np.ascontiguousarray(start, dtype=np.int64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if get_backend() == "numba":
        return _exp_mask_nb(start, u, float(cr))
    return _exp_mask_np(start, u, cr)


@njit
def _mexp_mask_nb(start, u, cr_m, cr_s):
    n, d = u.shape
    mask = np.zeros((n, d), dtype=np.bool_)
    for i in range(n):
        from_mutant = True
        for k in range(d):
            mask[i, (start[i] + k) % d] = from_mutant
            if k == d - 1:
                break
            cr = cr_m if from_mutant else cr_s
            if u[i, k] > cr:
                from_mutant = not from_mutant
    return mask


def _mexp_mask_np(start, u, cr_m, cr_s):
    n, d = u.shape
    mask = np.empty((n, d), dtype=bool)
    rows = np.arange(n)
    from_mutant = np.ones(n, dtype=bool)
    for k in range(d):
        mask[rows, (start + k) % d] = from_mutant
        if k == d - 1:
            break
        from_mutant ^= u[:, k] > np.where(from_mutant, cr_m, cr_s)
    return mask


def mexp_mask(start, u, cr_m, cr_s):
    """Alternating mutant/target circular runs with continuation rates ``cr_m``/``cr_s``.

    The first run comes from the mutant. Only ``u[:, :D-1]`` is consumed.
    """
    start = np.ascontiguousarray(start, dtype=np.int64)
    u = np.ascontiguousarray(u, dtype=np.float64)
    if get_backend() == "numba":
        return _mexp_mask_nb(start, u, float(cr_m), float(cr_s))
    return _mexp_mask_np(start, u, cr_m, cr_s)


# ---------------------------------------------------------------------------
# O(NP^2 D) distance reductions
# ---------------------------------------------------------------------------

_CHUNK_ELEMS = 1 << 21


@njit
def _min_pair_distance_nb(X, scale):
    n, d = X.shape
    out = np.full(n, np.inf)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            acc = 0.0
            for k in range(d):
                diff = (X[i, k] - X[j, k]) / scale[k]
                acc += diff * diff
            if acc < out[i]:
                out[i] = acc
    return np.sqrt(out)


def _row_chunks(n, d):
    step = max(1, _CHUNK_ELEMS // max(1, n * d))
    for i0 in range(0, n, step):
        yield i0, min(n, i0 + step)


def _min_pair_distance_np(X, scale):
    n, d = X.shape
    Xs = X / scale
    out = np.empty(n)
    for i0, i1 in _row_chunks(n, d):
        diff = Xs[i0:i1, None, :] - Xs[None, :, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        sq[np.arange(i1 - i0), np.arange(i0, i1)] = np.inf
        out[i0:i1] = sq.min(axis=1)
    return np.sqrt(out)


def min_pair_distance(X, scale):
    """Per-row distance to the nearest *other* row, coordinates divided by ``scale``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    scale = np.ascontiguousarray(scale, dtype=np.float64)
    if get_backend() == "numba":
        return _min_pair_distance_nb(X, scale)
    return _min_pair_distance_np(X, scale)


@njit
def _pairwise_distance_sum_nb(X):
    n, d = X.shape
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for k in range(d):
                diff = X[i, k] - X[j, k]
                acc += diff * diff
            total += np.sqrt(acc)
    return total


def _pairwise_distance_sum_np(X):
    n, d = X.shape
    total = 0.0
    for i0, i1 in _row_chunks(n, d):
        diff = X[i0:i1, None, :] - X[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        # upper triangle only: column index strictly greater than row index
        cols = np.arange(n)[None, :]
        rows = np.arange(i0, i1)[:, None]
        total += dist[cols > rows].sum()
    return float(total)


def pairwise_distance_sum(X):
    """Sum of Euclidean distances over unordered pairs ``i < j``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    if get_backend() == "numba":
        return float(_pairwise_distance_sum_nb(X))
    return _pairwise_distance_sum_np(X)


def warmup():
    """Trigger numba compilation so timings exclude JIT cost."""
    X = np.zeros((4, 2))
    picks = np.zeros((4, 3), dtype=np.int64)
    start = np.zeros(4, dtype=np.int64)
    u = np.zeros((4, 2))
    lo, hi = np.zeros(2), np.ones(2)
    from ._backend import use_backend, HAVE_NUMBA

    if not HAVE_NUMBA:
        return
    with use_backend("numba"):
        donor_indices(picks)
        rand1_mutants(X, donor_indices(picks), 0.5, lo, hi)
        exp_mask(start, u, 0.5)
        mexp_mask(start, u, 0.5, 0.5)
        min_pair_distance(X, hi)
        pairwise_distance_sum(X)
