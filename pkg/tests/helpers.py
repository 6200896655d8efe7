"""Shared oracles and fixtures for the test suite.

Everything here is deliberately independent of the enumeration path it
checks: the ball oracle scans the full integer coordinate box implied by
Gram-matrix bounds.
"""

import numpy as np

from randlat.lattice import LatticeBasis


def random_unimodular(rng, n, shears=8, mag=2):
    """Random integer matrix with determinant +-1 (products of shears/swaps)."""
    u = np.eye(n, dtype=np.int64)
    for _ in range(shears):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            u[i] += int(rng.integers(-mag, mag + 1)) * u[j]
    perm = rng.permutation(n)
    return u[perm]


def random_basis(rng, n, spread=0.3):
    """Random covolume-1 basis: unimodular transform of a random diagonal."""
    logs = rng.uniform(-spread, spread, size=n)
    logs -= logs.mean()
    diag = np.diag(np.exp(logs))
    u = random_unimodular(rng, n)
    return LatticeBasis(u.astype(float) @ diag)


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def grid_ball(rows, radius, tol=1e-9):
    """Brute-force enumeration oracle over the integer coordinate box.

    Returns (coords, embeddings, lengths) for every nonzero lattice vector of
    length <= radius whose first nonzero embedding coordinate is positive,
    sorted by (length, coords).
    """
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    gram_inv = np.linalg.inv(rows @ rows.T)
    bounds = np.floor(radius * np.sqrt(np.diag(gram_inv)) + 1e-9).astype(int)
    axes = [np.arange(-b, b + 1) for b in bounds]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    emb = mesh @ rows
    lengths = np.linalg.norm(emb, axis=1)
    keep = (lengths > 0) & (lengths <= radius)
    mesh, emb, lengths = mesh[keep], emb[keep], lengths[keep]
    coords_out, emb_out, len_out = [], [], []
    for c, e, ln in zip(mesh, emb, lengths):
        sign = 0
        for x in e:
            if x > tol * ln:
                sign = 1
                break
            if x < -tol * ln:
                sign = -1
                break
        if sign < 0:
            continue
        coords_out.append(tuple(int(x) for x in c))
        emb_out.append(e)
        len_out.append(float(ln))
    order = sorted(range(len(coords_out)), key=lambda i: (len_out[i], coords_out[i]))
    return (
        [coords_out[i] for i in order],
        [emb_out[i] for i in order],
        [len_out[i] for i in order],
    )


def grid_successive_minima(rows, k, radius_start=None):
    """Successive minima straight from the definition on grid-scanned points."""
    from fractions import Fraction

    rows = np.asarray(rows, dtype=float)
    radius = radius_start or float(np.min(np.linalg.norm(rows, axis=1)))
    while True:
        coords, _, lengths = grid_ball(rows, radius)
        picked = []
        minima = []
        for c, ln in zip(coords, lengths):
            cand = picked + [c]
            m = [[Fraction(x) for x in row] for row in cand]
            if _frac_rank(m) > len(picked):
                picked.append(c)
                minima.append(ln)
                if len(minima) == k:
                    return minima
        radius *= 2.0


def _frac_rank(m):
    if not m:
        return 0
    rows, cols = len(m), len(m[0])
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank
