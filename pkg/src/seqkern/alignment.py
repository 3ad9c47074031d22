"""Alignment kernels: sums over all pairwise alignments.

An alignment matches an ordered subset of positions in one sequence to
an ordered subset in the other; unmatched letters are insertions.  The
global alignment kernel scores every alignment by a letter kernel on the
matched pairs and an affine gap weight ``exp(-delta_mu - mu * run)`` per
maximal insertion run, then sums the scores.  The local variant lets
runs at either end of either sequence skip the gap-start penalty.

Flexibility (discrete masses) holds iff the gap-extension penalty is
large enough relative to the letter kernel through the scalar
``sigma = 1' K^{-1} 1``; see :func:`has_discrete_masses_alignment`.

All kernels run on a shared O(|x||y|) dynamic programme over tables
``M / I_X / I_Y`` (last column is a match / insertion in x / insertion
in y).  Between adjacent matches the programme places x-insertions
before y-insertions, so each alignment is generated exactly once.  The
l-resolved variant :func:`alignment_dp_R` additionally tracks how many
matched pairs satisfy a marker predicate, which is what the heavy-tailed
variants integrate over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .core import HAS_MASSES, LACKS_MASSES, UNKNOWN_MASSES, Kernel
from .errors import DataError, NumericalError
from .seqcore import Alphabet, Sequence


def exponential_letter_matrix(size: int, lam: float) -> np.ndarray:
    """Letter matrix ``exp(-lam * 1(b != b'))`` restricted to the alphabet."""
    K = np.full((size, size), math.exp(-lam))
    np.fill_diagonal(K, 1.0)
    return K


def sigma_of(ks_matrix: np.ndarray) -> float:
    """The scalar ``1' K^{-1} 1`` controlling alignment-kernel flexibility."""
    K = np.asarray(ks_matrix, dtype=float)
    ones = np.ones(K.shape[0])
    return float(ones @ np.linalg.solve(K, ones))


@dataclass(frozen=True)
class AlignmentParams:
    """Letter kernel and affine gap penalties for alignment kernels.

    ``mu`` penalises each inserted letter, ``delta_mu`` each insertion
    run (``math.inf`` forbids insertions).  ``sigma = 1' K^{-1} 1`` and
    ``zeta = 2 mu - log sigma + log |B|`` are derived.
    """

    alphabet: Alphabet
    ks: np.ndarray
    mu: float
    delta_mu: float
    sigma: float = field(init=False)
    zeta: float = field(init=False)

    def __post_init__(self):
        K = np.asarray(self.ks, dtype=float)
        n = self.alphabet.size
        if K.shape != (n, n):
            raise DataError("letter matrix must be |B| x |B|")
        if not np.allclose(K, K.T, rtol=1e-12, atol=1e-12):
            raise DataError("letter matrix must be symmetric")
        if float(np.linalg.eigvalsh(K).min()) <= 0:
            raise DataError("letter matrix must be strictly positive definite")
        if self.mu < 0:
            raise DataError("gap extension penalty mu must be >= 0")
        if not (self.delta_mu >= 0):
            raise DataError("gap start penalty delta_mu must be >= 0 or inf")
        object.__setattr__(self, "ks", K)
        sigma = sigma_of(K)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(
            self, "zeta", 2.0 * self.mu - math.log(sigma) + math.log(n)
        )

    @classmethod
    def exponential(
        cls, alphabet: Alphabet, lam: float, mu: float, delta_mu: float
    ) -> "AlignmentParams":
        return cls(alphabet, exponential_letter_matrix(alphabet.size, lam), mu, delta_mu)


def has_discrete_masses_alignment(params: AlignmentParams) -> bool:
    """Flexibility condition for the global alignment kernel.

    With a finite positive gap-start penalty the kernel has discrete
    masses iff ``2 mu >= log sigma``; with no gap-start penalty the
    inequality must be strict.  An infinite gap-start penalty reduces the
    kernel to a position-wise product, which always has them.
    """
    if params.delta_mu == math.inf:
        return True
    if params.delta_mu > 0:
        return 2.0 * params.mu >= math.log(params.sigma)
    return 2.0 * params.mu > math.log(params.sigma)


def has_discrete_masses_local(params: AlignmentParams) -> bool:
    """Flexibility condition for the local alignment kernel.

    Same thresholds as the global kernel for finite gap-start penalties;
    with an infinite one the local kernel keeps discrete masses for every
    ``mu`` and letter kernel.
    """
    if params.delta_mu == math.inf:
        return True
    if params.delta_mu > 0:
        return 2.0 * params.mu >= math.log(params.sigma)
    return 2.0 * params.mu > math.log(params.sigma)


LType = Union[str, Callable[[int, int], int], np.ndarray]


def _ltype_matrix(ltype: LType, size: int) -> Optional[np.ndarray]:
    """Marker predicate on letter-code pairs as a 0/1 matrix (None = all zero)."""
    if ltype is None:
        return None
    if isinstance(ltype, str):
        if ltype == "none":
            return None
        if ltype == "mismatch":
            m = np.ones((size, size), dtype=bool)
            np.fill_diagonal(m, False)
            return m
        if ltype == "all":
            return np.ones((size, size), dtype=bool)
        raise DataError(f"unknown ltype {ltype!r}")
    if callable(ltype):
        return np.array(
            [[bool(ltype(a, b)) for b in range(size)] for a in range(size)]
        )
    m = np.asarray(ltype, dtype=bool)
    if m.shape != (size, size):
        raise DataError("ltype matrix must be |B| x |B|")
    return m


def _gap_factors(mu: float, delta_mu: float) -> tuple[float, float]:
    ext = math.exp(-mu)
    start = 0.0 if delta_mu == math.inf else math.exp(-delta_mu - mu)
    return ext, start


def _check_finite(value, x: Sequence, y: Sequence):
    if not np.all(np.isfinite(value)):
        raise NumericalError(
            f"alignment recursion overflowed on |x|={len(x)}, |y|={len(y)}"
        )
    return value


def alignment_value(x: Sequence, y: Sequence, ks: np.ndarray, mu: float,
                    delta_mu: float) -> float:
    """Global alignment kernel value (sum over all alignments)."""
    cx, cy = x.codes, y.codes
    nx, ny = len(cx), len(cy)
    e_ext, e_open = _gap_factors(mu, delta_mu)
    K = ks
    # row-rolling tables over j = 0..ny; row i = 0 seeds M(0,0) = 1
    M_prev = [0.0] * (ny + 1)
    IX_prev = [0.0] * (ny + 1)
    IY_prev = [0.0] * (ny + 1)
    M_prev[0] = 1.0
    for j in range(1, ny + 1):
        IY_prev[j] = e_open * (M_prev[j - 1] + IX_prev[j - 1]) + e_ext * IY_prev[j - 1]
    for i in range(1, nx + 1):
        M_cur = [0.0] * (ny + 1)
        IX_cur = [0.0] * (ny + 1)
        IY_cur = [0.0] * (ny + 1)
        IX_cur[0] = e_open * M_prev[0] + e_ext * IX_prev[0]
        a = cx[i - 1]
        Krow = K[a]
        for j in range(1, ny + 1):
            M_cur[j] = Krow[cy[j - 1]] * (
                M_prev[j - 1] + IX_prev[j - 1] + IY_prev[j - 1]
            )
            IX_cur[j] = e_open * M_prev[j] + e_ext * IX_prev[j]
            IY_cur[j] = e_open * (M_cur[j - 1] + IX_cur[j - 1]) + e_ext * IY_cur[j - 1]
        M_prev, IX_prev, IY_prev = M_cur, IX_cur, IY_cur
    total = M_prev[ny] + IX_prev[ny] + IY_prev[ny]
    return float(_check_finite(total, x, y))


def local_alignment_value(x: Sequence, y: Sequence, ks: np.ndarray, mu: float,
                          delta_mu: float) -> float:
    """Local alignment kernel value: boundary gap runs skip the start penalty."""
    cx, cy = x.codes, y.codes
    nx, ny = len(cx), len(cy)
    e_ext, e_open = _gap_factors(mu, delta_mu)
    K = ks
    total = math.exp(-mu * (nx + ny))  # the matchless alignment
    M_prev = [0.0] * (ny + 1)
    IX_prev = [0.0] * (ny + 1)
    IY_prev = [0.0] * (ny + 1)
    lead_prev = [math.exp(-mu * j) for j in range(ny + 1)]  # e^{-mu(i+j)} at i=0
    for i in range(1, nx + 1):
        M_cur = [0.0] * (ny + 1)
        IX_cur = [0.0] * (ny + 1)
        IY_cur = [0.0] * (ny + 1)
        lead_cur = [math.exp(-mu * (i + j)) for j in range(ny + 1)]
        IX_cur[0] = e_open * M_prev[0] + e_ext * IX_prev[0]
        a = cx[i - 1]
        Krow = K[a]
        tail_x = math.exp(-mu * (nx - i))
        for j in range(1, ny + 1):
            M_cur[j] = Krow[cy[j - 1]] * (
                M_prev[j - 1] + IX_prev[j - 1] + IY_prev[j - 1] + lead_prev[j - 1]
            )
            IX_cur[j] = e_open * M_prev[j] + e_ext * IX_prev[j]
            IY_cur[j] = e_open * (M_cur[j - 1] + IX_cur[j - 1]) + e_ext * IY_cur[j - 1]
            total += M_cur[j] * tail_x * math.exp(-mu * (ny - j))
        M_prev, IX_prev, IY_prev, lead_prev = M_cur, IX_cur, IY_cur, lead_cur
    return float(_check_finite(total, x, y))


def alignment_dp_R(x: Sequence, y: Sequence, ks: np.ndarray, mu: float,
                   delta_mu: float, ltype: LType = "none") -> np.ndarray:
    """Alignment sums split by marked-match count.

    Returns the vector ``R`` with ``R[L]`` the sum of alignment scores
    over alignments having exactly ``L`` matched pairs marked by
    ``ltype`` (a predicate on letter-code pairs: "mismatch", "all",
    "none", a callable, or a 0/1 matrix).  ``R.sum()`` is the plain
    alignment kernel value; ``len(R) == min(|x|, |y|) + 1``.
    """
    cx, cy = x.codes, y.codes
    nx, ny = len(cx), len(cy)
    nl = min(nx, ny) + 1
    e_ext, e_open = _gap_factors(mu, delta_mu)
    K = np.asarray(ks, dtype=float)
    lmat = _ltype_matrix(ltype, K.shape[0])
    M = np.zeros((nx + 1, ny + 1, nl))
    IX = np.zeros((nx + 1, ny + 1, nl))
    IY = np.zeros((nx + 1, ny + 1, nl))
    M[0, 0, 0] = 1.0
    for j in range(1, ny + 1):
        IY[0, j] = e_open * (M[0, j - 1] + IX[0, j - 1]) + e_ext * IY[0, j - 1]
    for i in range(1, nx + 1):
        a = cx[i - 1]
        IX[i, 0] = e_open * M[i - 1, 0] + e_ext * IX[i - 1, 0]
        for j in range(1, ny + 1):
            b = cy[j - 1]
            kv = K[a, b]
            J = M[i - 1, j - 1] + IX[i - 1, j - 1] + IY[i - 1, j - 1]
            if lmat is not None and lmat[a, b]:
                M[i, j, 1:] = kv * J[:-1]
            else:
                M[i, j] = kv * J
            IX[i, j] = e_open * M[i - 1, j] + e_ext * IX[i - 1, j]
            IY[i, j] = e_open * (M[i, j - 1] + IX[i, j - 1]) + e_ext * IY[i, j - 1]
    R = M[nx, ny] + IX[nx, ny] + IY[nx, ny]
    return _check_finite(R, x, y)


class AlignmentKernel(Kernel):
    """Global alignment kernel (all alignments, affine gap weights)."""

    family = "alignment"

    def __init__(self, params: AlignmentParams):
        self.p = params
        self.mass_status = (
            HAS_MASSES if has_discrete_masses_alignment(params) else LACKS_MASSES
        )

    @property
    def params(self) -> dict:
        return {"mu": self.p.mu, "delta_mu": self.p.delta_mu, "sigma": self.p.sigma}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        return alignment_value(x, y, self.p.ks, self.p.mu, self.p.delta_mu)


class LocalAlignmentKernel(Kernel):
    """Local alignment kernel: no start penalty for boundary gap runs."""

    family = "local_alignment"

    def __init__(self, params: AlignmentParams):
        self.p = params
        self.mass_status = (
            HAS_MASSES if has_discrete_masses_local(params) else LACKS_MASSES
        )

    @property
    def params(self) -> dict:
        return {"mu": self.p.mu, "delta_mu": self.p.delta_mu, "sigma": self.p.sigma}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        return local_alignment_value(x, y, self.p.ks, self.p.mu, self.p.delta_mu)


class HeavyTailedAlignmentMatches(Kernel):
    """Alignment kernel with a power-law tail in matched-pair mismatches.

    Each alignment contributes ``(C + m)**-beta`` times its gap weight,
    where ``m`` is the number of mismatched matched pairs: the closed
    form of a Gamma mixture of alignment kernels over the mismatch rate.
    The mixture reaches arbitrarily flat letter kernels, so for
    ``mu > 0`` the kernel has discrete masses.
    """

    family = "ht_alignment_matches"

    def __init__(self, alphabet: Alphabet, C: float, beta: float, mu: float,
                 delta_mu: float):
        if C <= 0 or beta <= 0:
            raise DataError("C and beta must be positive")
        if mu < 0 or not (delta_mu >= 0):
            raise DataError("gap penalties must be nonnegative")
        self.alphabet = alphabet
        self.C = float(C)
        self.beta = float(beta)
        self.mu = float(mu)
        self.delta_mu = float(delta_mu)
        self._ones = np.ones((alphabet.size, alphabet.size))
        # mu = 0 keeps the whole mixture outside the flexible regime, so
        # the closed-form flag cannot assert either way.
        self.mass_status = HAS_MASSES if mu > 0 else UNKNOWN_MASSES

    @property
    def params(self) -> dict:
        return {"C": self.C, "beta": self.beta, "mu": self.mu,
                "delta_mu": self.delta_mu}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        R = alignment_dp_R(x, y, self._ones, self.mu, self.delta_mu, "mismatch")
        L = np.arange(len(R))
        return float(((self.C + L) ** -self.beta) @ R)


class HeavyTailedAlignmentGaps(Kernel):
    """Alignment kernel with a power-law tail in total inserted length.

    Each alignment contributes ``(C + |x| + |y| - 2 L)**-beta`` times its
    letter scores and gap-start weights, ``L`` being the number of
    matches: the closed form of a Gamma mixture over the gap-extension
    penalty, which always contains flexible members.
    """

    family = "ht_alignment_gaps"
    mass_status = HAS_MASSES

    def __init__(self, alphabet: Alphabet, C: float, beta: float,
                 delta_mu: float, ks: np.ndarray):
        if C <= 0 or beta <= 0:
            raise DataError("C and beta must be positive")
        if not (delta_mu >= 0):
            raise DataError("delta_mu must be >= 0 or inf")
        K = np.asarray(ks, dtype=float)
        if K.shape != (alphabet.size, alphabet.size):
            raise DataError("letter matrix must be |B| x |B|")
        self.alphabet = alphabet
        self.C = float(C)
        self.beta = float(beta)
        self.delta_mu = float(delta_mu)
        self.ks = K

    @property
    def params(self) -> dict:
        return {"C": self.C, "beta": self.beta, "delta_mu": self.delta_mu}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        R = alignment_dp_R(x, y, self.ks, 0.0, self.delta_mu, "all")
        L = np.arange(len(R))
        inserted = len(x) + len(y) - 2 * L
        return float(((self.C + inserted) ** -self.beta) @ R)


def alignment_kernel(params: AlignmentParams) -> AlignmentKernel:
    return AlignmentKernel(params)


def local_alignment_kernel(params: AlignmentParams) -> LocalAlignmentKernel:
    return LocalAlignmentKernel(params)
