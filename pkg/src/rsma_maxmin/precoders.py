"""Construction of ZF, MRT, and common precoders from CSIT.

The two-group design zero-forces among the first N users and leaves the
remaining K - N users with no private beam; the single-group design gives
every user an MRT beam. All precoders are unit norm; power weights live
in the accompanying PrecoderSet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SINGULAR_COND_LIMIT = 1e12


class SingularChannelError(ValueError):
    """Raised when the stacked CSIT matrix is too ill-conditioned to invert."""


@dataclass(frozen=True)
class PrecoderSet:
    """Common + private precoders with the power-split/group metadata."""

    common: np.ndarray      # (N,) unit vector
    privates: np.ndarray    # (K, N); zero rows for users without a beam
    scheme: str             # "ZF" or "MRT"
    group1: tuple           # indices served by private + common streams
    group2: tuple           # indices served by the common stream only
    mu: np.ndarray          # (K,) private power fractions, sum <= 1


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate so the first nonzero entry is real positive (determinism)."""
    idx = np.flatnonzero(np.abs(vec) > 0)
    if idx.size == 0:
        return vec
    ref = vec[idx[0]]
    return vec * (np.conj(ref) / abs(ref))


def zf_precoders(h_hat_g1: np.ndarray) -> np.ndarray:
    """Unit-norm zero-forcing precoders for a square group of N users.

    Rows of h_hat_g1 are the CSIT vectors; column k of the inverse of the
    conjugated stack is orthogonal to every other user's estimate.
    """
    a = np.conj(np.asarray(h_hat_g1))
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("zf_precoders expects a square (N, N) CSIT stack")
    if np.linalg.cond(a) > SINGULAR_COND_LIMIT:
        raise SingularChannelError("CSIT matrix is numerically singular")
    p = np.linalg.inv(a)
    p /= np.linalg.norm(p, axis=0, keepdims=True)
    return p.T.copy()   # row k = precoder of user k


def group_zf_precoders(h_hat_group: np.ndarray) -> np.ndarray:
    """ZF precoders for a group of g <= N users (within-group nulling only)."""
    a = np.conj(np.asarray(h_hat_group))
    g, n = a.shape
    if g > n:
        raise ValueError("ZF group larger than the antenna count")
    if g == n:
        return zf_precoders(h_hat_group)
    gram = a @ a.conj().T
    if np.linalg.cond(gram) > SINGULAR_COND_LIMIT:
        raise SingularChannelError("CSIT matrix is numerically singular")
    p = a.conj().T @ np.linalg.inv(gram)   # (N, g) right pseudo-inverse columns
    p /= np.linalg.norm(p, axis=0, keepdims=True)
    return p.T.copy()


def mrt_precoders(h_hat: np.ndarray) -> np.ndarray:
    """Matched-filter beams h_hat_k / ||h_hat_k|| for each row."""
    h = np.asarray(h_hat)
    norms = np.linalg.norm(h, axis=-1, keepdims=True)
    if np.any(norms == 0.0):
        raise ValueError("MRT precoder undefined for a zero channel estimate")
    return h / norms


def common_precoder(
    h_hat: np.ndarray,
    mode: str = "dominant_eigvec",
    rng: np.random.Generator | None = None,
    tol: float = 1e-10,
    max_iter: int = 20000,
) -> np.ndarray:
    """Common-stream precoder from the stacked CSIT.

    random: isotropic unit vector. dominant_eigvec: dominant left singular
    vector of the N x K estimate stack, by power iteration on the N x N
    Gram matrix to relative eigenvalue tolerance `tol`.
    """
    h = np.asarray(h_hat)
    n = h.shape[1]
    if mode == "random":
        if rng is None:
            raise ValueError("random common precoder needs an rng")
        vec = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
        return _fix_phase(vec / np.linalg.norm(vec))
    if mode != "dominant_eigvec":
        raise ValueError(f"unknown common precoder mode {mode!r}")
    gram = h.T @ h.conj()   # sum_k h_k h_k^H over the stacked estimates
    # deterministic start: the strongest user's estimate
    start = h[np.argmax(np.linalg.norm(h, axis=1))]
    w = start / np.linalg.norm(start)
    lam = float(np.real(w.conj() @ gram @ w))
    for _ in range(max_iter):
        nxt = gram @ w
        nrm = np.linalg.norm(nxt)
        if nrm == 0.0:
            break
        w = nxt / nrm
        lam_next = float(np.real(w.conj() @ gram @ w))
        if abs(lam_next - lam) <= tol * max(abs(lam_next), 1e-300):
            lam = lam_next
            break
        lam = lam_next
    return _fix_phase(w)


def rsma_precoder_set(
    h_hat: np.ndarray,
    scheme: str,
    common_mode: str = "dominant_eigvec",
    rng: np.random.Generator | None = None,
) -> PrecoderSet:
    """Assemble the full precoder set for one realization.

    ZF: groups are the first N indices vs the rest, mu = 1/N on group 1.
    MRT: every user gets a beam, mu = 1/K so the private power budget holds.
    """
    h = np.asarray(h_hat)
    k, n = h.shape
    pc = common_precoder(h, mode=common_mode, rng=rng)
    if scheme == "ZF":
        group1 = tuple(range(n))
        group2 = tuple(range(n, k))
        privates = np.zeros((k, n), dtype=complex)
        privates[:n] = zf_precoders(h[:n])
        mu = np.zeros(k)
        mu[:n] = 1.0 / n
    elif scheme == "MRT":
        group1 = tuple(range(k))
        group2 = ()
        privates = mrt_precoders(h)
        mu = np.full(k, 1.0 / k)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return PrecoderSet(common=pc, privates=privates, scheme=scheme,
                       group1=group1, group2=group2, mu=mu)
