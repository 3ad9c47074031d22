"""Position-wise comparison kernels.

Two groups live here: classic kernels that compare sequences position by
position but have limited flexibility (the weighted-degree / lag-L
Hamming kernel), and their flexible replacements built from the same
notion of similarity (exponential Hamming, inverse-multiquadric Hamming,
centre-justified and shifted variants).
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    HAS_MASSES,
    LACKS_MASSES,
    Kernel,
    tensor_kernel,
)
from .errors import DataError
from .seqcore import PAD_CODE, Alphabet, Sequence, encode_padded


class LetterKernel:
    """A strictly positive-definite similarity on letters plus stop.

    Holds the ``|B| x |B|`` letter matrix, the letter-vs-stop column, and
    fixes ``k(stop, stop) = 1``.  Strict positive definiteness of the
    extended ``(|B|+1)``-dimensional matrix is required; it is what makes
    the induced position-wise product kernel fully flexible.
    """

    def __init__(self, alphabet: Alphabet, matrix, stop_row=None):
        K = np.asarray(matrix, dtype=float)
        n = alphabet.size
        if K.shape != (n, n):
            raise DataError("letter matrix must be |B| x |B|")
        if not np.allclose(K, K.T, rtol=1e-12, atol=1e-12):
            raise DataError("letter matrix must be symmetric")
        t = np.zeros(n) if stop_row is None else np.asarray(stop_row, dtype=float)
        if t.shape != (n,):
            raise DataError("stop row must have one entry per letter")
        ext = np.zeros((n + 1, n + 1))
        ext[:n, :n] = K
        ext[:n, n] = t
        ext[n, :n] = t
        ext[n, n] = 1.0
        eigmin = float(np.linalg.eigvalsh(ext).min())
        if eigmin <= 0:
            raise DataError(
                f"letter kernel is not strictly positive definite on the "
                f"extended alphabet (min eigenvalue {eigmin:.3e})"
            )
        self.alphabet = alphabet
        self.matrix = K
        self.stop_row = t
        self.extended = ext

    @classmethod
    def exponential(cls, alphabet: Alphabet, lam: float) -> "LetterKernel":
        """Mismatch kernel ``exp(-lam * 1(b != b'))`` with stop as a letter."""
        if lam <= 0:
            raise DataError("mismatch rate lambda must be positive")
        n = alphabet.size
        off = math.exp(-lam)
        K = np.full((n, n), off)
        np.fill_diagonal(K, 1.0)
        return cls(alphabet, K, stop_row=np.full(n, off))

    def value(self, a: int, b: int) -> float:
        """Evaluate on letter codes; ``PAD_CODE`` stands for stop."""
        ext = self.extended
        n = self.alphabet.size
        ia = n if a == PAD_CODE else a
        ib = n if b == PAD_CODE else b
        return ext[ia, ib]


class WeightedDegreeKernel(Kernel):
    """Count of positions where two sequences share the same L-mer.

    ``k(x, y) = #{l : x[l:l+L] == y[l:l+L], both windows inside}``.  For
    ``L = 1`` this equals ``max(|x|,|y|) - d_H(x,y)``.  The feature space
    is indexed by (position, L-mer) pairs; windows overlapping the stop
    padding match nothing.  The kernel is a useful similarity but a
    degenerate one: averages of its features over certain sequence sets
    coincide, so it cannot represent arbitrary functions or distinguish
    arbitrary distributions.
    """

    family = "weighted_degree"
    mass_status = LACKS_MASSES

    def __init__(self, L: int):
        if L < 1:
            raise DataError("window length L must be >= 1")
        self.L = int(L)

    @property
    def params(self) -> dict:
        return {"L": self.L}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        L = self.L
        n = min(len(x), len(y)) - L + 1
        count = 0
        for l in range(max(n, 0)):
            if x.codes[l : l + L] == y.codes[l : l + L]:
                count += 1
        return float(count)

    def pairwise(self, xs, ys=None) -> np.ndarray:
        sym = ys is None
        ys_ = xs if sym else ys
        width = max((len(s) for s in list(xs) + list(ys_)), default=0)
        wx = _window_codes(xs, self.L, width)
        wy = wx if sym else _window_codes(ys_, self.L, width)
        valid_x = wx >= 0
        valid_y = wy >= 0
        eq = (wx[:, None, :] == wy[None, :, :]) & valid_x[:, None, :] & valid_y[None, :, :]
        return eq.sum(axis=2).astype(float)


def _window_codes(seqs, L: int, width: int) -> np.ndarray:
    """Encode every in-range L-window as a single integer; -1 where absent."""
    if not seqs:
        return np.zeros((0, max(width - L + 1, 0)), dtype=np.int64)
    base = max(s.alphabet.size for s in seqs)
    codes = encode_padded(list(seqs), width)
    nwin = max(width - L + 1, 0)
    out = np.full((len(seqs), nwin), -1, dtype=np.int64)
    if nwin == 0:
        return out
    acc = np.zeros((len(seqs), nwin), dtype=np.int64)
    ok = np.ones((len(seqs), nwin), dtype=bool)
    for d in range(L):
        c = codes[:, d : d + nwin]
        ok &= c != PAD_CODE
        acc = acc * base + np.where(c == PAD_CODE, 0, c)
    out[ok] = acc[ok]
    return out


def weighted_degree_kernel(L: int) -> WeightedDegreeKernel:
    return WeightedDegreeKernel(L)


class BasePositionwiseKernel(Kernel):
    """Product of a letter kernel over stop-padded positions.

    ``k(x, y) = prod_l k_s(x_(l), y_(l))``; the product truncates at
    ``max(|x|, |y|)`` because ``k_s(stop, stop) = 1``.  Strict positive
    definiteness of the letter kernel gives the product kernel discrete
    masses.
    """

    family = "base_positionwise"
    mass_status = HAS_MASSES

    def __init__(self, letter_kernel: LetterKernel):
        self.letter_kernel = letter_kernel

    @property
    def params(self) -> dict:
        return {"alphabet": "".join(self.letter_kernel.alphabet.letters)}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        lk = self.letter_kernel
        n = max(len(x), len(y))
        v = 1.0
        for l in range(n):
            a = x.codes[l] if l < len(x) else PAD_CODE
            b = y.codes[l] if l < len(y) else PAD_CODE
            v *= lk.value(a, b)
        return v

    def pairwise(self, xs, ys=None) -> np.ndarray:
        sym = ys is None
        ys_ = xs if sym else ys
        cx = encode_padded(list(xs))
        cy = cx if sym else encode_padded(list(ys_))
        width = max(cx.shape[1], cy.shape[1])
        cx = _pad_to(cx, width)
        cy = _pad_to(cy, width)
        n = self.letter_kernel.alphabet.size
        ext = self.letter_kernel.extended
        ix = np.where(cx == PAD_CODE, n, cx)
        iy = np.where(cy == PAD_CODE, n, cy)
        vals = ext[ix[:, None, :], iy[None, :, :]]
        return vals.prod(axis=2)


def _pad_to(codes: np.ndarray, width: int) -> np.ndarray:
    if codes.shape[1] == width:
        return codes
    extra = np.full((codes.shape[0], width - codes.shape[1]), PAD_CODE, dtype=codes.dtype)
    return np.concatenate([codes, extra], axis=1)


def base_positionwise_kernel(letter_kernel: LetterKernel) -> BasePositionwiseKernel:
    return BasePositionwiseKernel(letter_kernel)


class ExpHammingKernel(BasePositionwiseKernel):
    """``exp(-lam * d_H(x, y))``: the mismatch-rate position-wise kernel."""

    family = "exp_hamming"
    mass_status = HAS_MASSES

    def __init__(self, alphabet: Alphabet, lam: float):
        super().__init__(LetterKernel.exponential(alphabet, lam))
        self.lam = float(lam)

    @property
    def params(self) -> dict:
        return {"lambda": self.lam}


def exp_hamming_kernel(alphabet: Alphabet, lam: float) -> ExpHammingKernel:
    return ExpHammingKernel(alphabet, lam)


class ImqHammingKernel(Kernel):
    """Inverse-multiquadric Hamming kernel ``(C + d_H(x, y))**-beta``.

    The same similarity as the exponential Hamming kernel, but with a
    power-law (heavy) tail in the Hamming distance: the closed form of a
    Gamma-weighted mixture of exponential Hamming kernels over all
    mismatch rates.  Heavy tails avoid diagonal dominance, and the
    mixture contains arbitrarily flexible members, so the kernel keeps
    discrete masses.
    """

    family = "imq_hamming"
    mass_status = HAS_MASSES

    def __init__(self, C: float = 1.0, beta: float = 2.0):
        if C <= 0 or beta <= 0:
            raise DataError("C and beta must be positive")
        self.C = float(C)
        self.beta = float(beta)

    @property
    def params(self) -> dict:
        return {"C": self.C, "beta": self.beta}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        m = min(len(x), len(y))
        d = max(len(x), len(y)) - m
        d += sum(a != b for a, b in zip(x.codes[:m], y.codes[:m]))
        return (self.C + d) ** -self.beta

    def pairwise(self, xs, ys=None) -> np.ndarray:
        d = _hamming_matrix(xs, ys)
        return (self.C + d) ** -self.beta


def _hamming_matrix(xs, ys=None) -> np.ndarray:
    sym = ys is None
    ys_ = xs if sym else ys
    cx = encode_padded(list(xs))
    cy = cx if sym else encode_padded(list(ys_))
    width = max(cx.shape[1], cy.shape[1], 1)
    cx = _pad_to(cx, width)
    cy = _pad_to(cy, width)
    neq = cx[:, None, :] != cy[None, :, :]
    both_pad = (cx[:, None, :] == PAD_CODE) & (cy[None, :, :] == PAD_CODE)
    return (neq & ~both_pad).sum(axis=2)


def imq_hamming_kernel(C: float = 1.0, beta: float = 2.0) -> ImqHammingKernel:
    return ImqHammingKernel(C, beta)


class ImqHammingLagKernel(Kernel):
    """Lag-L inverse-multiquadric Hamming kernel.

    ``(C + sum_l 1(x[l:l+L] != y[l:l+L]))**-beta`` where ``l`` runs over
    ``[0, max(|x|, |y|))`` and windows are compared as stop-padded
    strings.  Counting window mismatches instead of letter mismatches
    makes the underlying similarity the lag-L window-match count; the
    power-law form keeps discrete masses.  ``L = 1`` reduces to
    :class:`ImqHammingKernel` exactly.
    """

    family = "imq_hamming_lag"
    mass_status = HAS_MASSES

    def __init__(self, C: float = 1.0, beta: float = 2.0, L: int = 1):
        if C <= 0 or beta <= 0:
            raise DataError("C and beta must be positive")
        if L < 1:
            raise DataError("lag L must be >= 1")
        self.C = float(C)
        self.beta = float(beta)
        self.L = int(L)

    @property
    def params(self) -> dict:
        return {"C": self.C, "beta": self.beta, "L": self.L}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        d = lag_window_mismatches(x, y, self.L)
        return (self.C + d) ** -self.beta

    def pairwise(self, xs, ys=None) -> np.ndarray:
        sym = ys is None
        ys_ = xs if sym else ys
        out = np.empty((len(xs), len(ys_)))
        for i, x in enumerate(xs):
            lo = i if sym else 0
            for j in range(lo, len(ys_)):
                out[i, j] = self(x, ys_[j])
                if sym:
                    out[j, i] = out[i, j]
        return out


def lag_window_mismatches(x: Sequence, y: Sequence, L: int) -> int:
    """Number of positions whose stop-padded L-windows differ.

    Positions run over ``[0, max(|x|, |y|))``; a window is the padded
    slice ``x_(l:l+L)``, so windows past both ends agree and windows
    overlapping the padding compare padded letters.  For ``L = 1`` this
    is the Hamming distance.
    """
    n = max(len(x), len(y))
    cx, cy = x.codes, y.codes
    d = 0
    for l in range(n):
        for t in range(L):
            a = cx[l + t] if l + t < len(cx) else PAD_CODE
            b = cy[l + t] if l + t < len(cy) else PAD_CODE
            if a != b:
                d += 1
                break
    return d


def imq_hamming_lag_kernel(C: float = 1.0, beta: float = 2.0, L: int = 1) -> ImqHammingLagKernel:
    return ImqHammingLagKernel(C, beta, L)


def centre_justified_kernel(base: Kernel) -> Kernel:
    """Kernel on (left, right) sequence pairs around a reference point.

    Evaluates ``base(xL, yL) * base(xR, yR)``.  Left components should be
    reversed by the caller before construction of the pairs, so that both
    halves are compared outward from the reference point.
    """
    return tensor_kernel(base, base)


class ShiftedKernel(Kernel):
    """Sum of a base kernel over relative offsets of the two sequences.

    ``k_S(x, y) = sum_{l=0}^{shift_max} base(x[l:], y) + base(x, y[l:])``;
    the ``l = 0`` term appears in both sums, contributing ``2 base(x, y)``.

    Caution: the one-sided shift terms are not kernels themselves, and
    the sum can fail positive semidefiniteness when the base kernel
    decays fast (exponential Hamming with a large mismatch rate).  Use
    moderate bandwidths; Gram construction validates.
    """

    family = "shifted"

    def __init__(self, base: Kernel, shift_max: int):
        if shift_max < 0:
            raise DataError("shift_max must be >= 0")
        self.base = base
        self.shift_max = int(shift_max)
        self.mass_status = base.mass_status

    @property
    def params(self) -> dict:
        return {"base": self.base.family, "shift_max": self.shift_max}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        total = 0.0
        for l in range(self.shift_max + 1):
            total += self.base(x[l:], y) + self.base(x, y[l:])
        return total

    def pairwise(self, xs, ys=None) -> np.ndarray:
        ys_ = xs if ys is None else ys
        total = np.zeros((len(xs), len(ys_)))
        for l in range(self.shift_max + 1):
            xs_l = [x[l:] for x in xs]
            ys_l = [y[l:] for y in ys_]
            total += self.base.pairwise(xs_l, list(ys_))
            total += self.base.pairwise(list(xs), ys_l)
        return total


def shifted_kernel(base: Kernel, shift_max: int) -> ShiftedKernel:
    return ShiftedKernel(base, shift_max)
