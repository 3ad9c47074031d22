"""Kernel abstraction and mass-preserving combinators.

A kernel is a symmetric positive-semidefinite similarity over sequences.
Each kernel carries a ``mass_status`` flag recording whether delta
functions are known to live in its function space ("discrete masses") --
the property behind universality, characteristicness, and metrization of
the space of sequence distributions.  The flag is derived from
closed-form conditions on the kernel family, never probed at runtime.

Combinators here (positive sums, tilting, tensor products) preserve the
discrete-mass property.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence as Seq

import numpy as np

from .errors import DataError
from .seqcore import Sequence, VectorSequence, enumerate_sequences

HAS_MASSES = "has_discrete_masses"
LACKS_MASSES = "lacks_discrete_masses"
UNKNOWN_MASSES = "unknown"


class Kernel:
    """Base class: an evaluatable PSD similarity ``k(x, y)``.

    Subclasses implement :meth:`__call__`; evaluators must be pure and
    deterministic (any randomness happens at construction, behind a
    seed), so kernels are safe to share across threads.
    """

    family: str = "generic"
    mass_status: str = UNKNOWN_MASSES

    @property
    def params(self) -> dict:
        return {}

    def __call__(self, x, y) -> float:
        raise NotImplementedError

    def pairwise(self, xs: Seq, ys: Optional[Seq] = None) -> np.ndarray:
        """Dense matrix of kernel values, ``out[i, j] = k(xs[i], ys[j])``.

        With ``ys=None`` computes the symmetric matrix over ``xs``,
        filling only the upper triangle and mirroring it.  Families with
        vectorisable evaluators override this.
        """
        if ys is None:
            n = len(xs)
            out = np.empty((n, n))
            for i in range(n):
                for j in range(i, n):
                    out[i, j] = self(xs[i], xs[j])
                    out[j, i] = out[i, j]
            return out
        out = np.empty((len(xs), len(ys)))
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                out[i, j] = self(x, y)
        return out

    def self_similarities(self, xs: Seq) -> np.ndarray:
        return np.array([self(x, x) for x in xs])

    def normalized(self) -> "Kernel":
        """Tilt by ``k(x, x)**-0.5`` so the diagonal becomes 1."""
        return tilt_kernel(self, _NormalizingTilt(self))

    def __repr__(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({ps})"


class _NormalizingTilt:
    def __init__(self, kernel: Kernel):
        self._kernel = kernel

    def __call__(self, x) -> float:
        return self._kernel(x, x) ** -0.5


class SumKernel(Kernel):
    """Positive combination ``sum_n a_n * k_n``.

    Has discrete masses as soon as any summand does.
    """

    family = "sum"

    def __init__(self, parts: Iterable[tuple[float, Kernel]]):
        parts = [(float(w), k) for w, k in parts]
        if not parts:
            raise DataError("sum_kernel needs at least one part")
        if any(w <= 0 for w, _ in parts):
            raise DataError("sum_kernel weights must be positive")
        self.parts = parts
        if any(k.mass_status == HAS_MASSES for _, k in parts):
            self.mass_status = HAS_MASSES
        else:
            self.mass_status = UNKNOWN_MASSES

    @property
    def params(self) -> dict:
        return {"n_parts": len(self.parts)}

    def __call__(self, x, y) -> float:
        return sum(w * k(x, y) for w, k in self.parts)

    def pairwise(self, xs, ys=None) -> np.ndarray:
        total = None
        for w, k in self.parts:
            m = w * k.pairwise(xs, ys)
            total = m if total is None else total + m
        return total


def sum_kernel(parts: Iterable[tuple[float, Kernel]]) -> SumKernel:
    return SumKernel(parts)


class TiltedKernel(Kernel):
    """``k^A(x, y) = A(x) k(x, y) A(y)`` for a positive weight ``A``.

    Tilting rescales the kernel's view of sequence space (normalisation
    is the special case ``A = k(x,x)**-0.5``) and preserves discrete
    masses.
    """

    family = "tilt"

    def __init__(self, base: Kernel, weight: Callable[[Sequence], float]):
        self.base = base
        self.weight = weight
        self.mass_status = base.mass_status

    @property
    def params(self) -> dict:
        return {"base": self.base.family}

    def _a(self, x) -> float:
        a = float(self.weight(x))
        if not a > 0:
            raise DataError(f"tilt weight must be positive, got {a} on {x!r}")
        return a

    def __call__(self, x, y) -> float:
        return self._a(x) * self.base(x, y) * self._a(y)

    def pairwise(self, xs, ys=None) -> np.ndarray:
        ax = np.array([self._a(x) for x in xs])
        ay = ax if ys is None else np.array([self._a(y) for y in ys])
        return ax[:, None] * self.base.pairwise(xs, ys) * ay[None, :]


def tilt_kernel(base: Kernel, weight: Callable[[Sequence], float]) -> TiltedKernel:
    return TiltedKernel(base, weight)


class TensorKernel(Kernel):
    """Product kernel on pairs: ``k((x1,x2),(y1,y2)) = k1(x1,y1) k2(x2,y2)``."""

    family = "tensor"

    def __init__(self, left: Kernel, right: Kernel):
        self.left = left
        self.right = right
        statuses = (left.mass_status, right.mass_status)
        if all(s == HAS_MASSES for s in statuses):
            self.mass_status = HAS_MASSES
        elif LACKS_MASSES in statuses:
            self.mass_status = LACKS_MASSES
        else:
            self.mass_status = UNKNOWN_MASSES

    @property
    def params(self) -> dict:
        return {"left": self.left.family, "right": self.right.family}

    def __call__(self, x, y) -> float:
        (x1, x2), (y1, y2) = x, y
        return self.left(x1, y1) * self.right(x2, y2)

    def pairwise(self, xs, ys=None) -> np.ndarray:
        x1, x2 = [p[0] for p in xs], [p[1] for p in xs]
        if ys is None:
            return self.left.pairwise(x1) * self.right.pairwise(x2)
        y1, y2 = [p[0] for p in ys], [p[1] for p in ys]
        return self.left.pairwise(x1, y1) * self.right.pairwise(x2, y2)


def tensor_kernel(left: Kernel, right: Kernel) -> TensorKernel:
    return TensorKernel(left, right)


class IdentityKernel(Kernel):
    """``k(x, y) = 1(x = y)``: maximally flexible, zero generalisation."""

    family = "identity"
    mass_status = HAS_MASSES

    def __call__(self, x, y) -> float:
        return 1.0 if x == y else 0.0

    def pairwise(self, xs, ys=None) -> np.ndarray:
        ys_ = xs if ys is None else ys
        return np.array([[1.0 if x == y else 0.0 for y in ys_] for x in xs])


def eval_vector_encoded(kernel: Kernel, v: VectorSequence, w: VectorSequence) -> float:
    """Evaluate a sequence kernel on vector-encoded (reparameterised) input.

    Expands each encoding as a formal linear combination of ordinary
    sequences of the same length and sums the kernel over the product
    basis:

        sum_{|X|=|v|} sum_{|Y|=|w|} (prod_l v[l, X_l]) (prod_l w[l, Y_l]) k(X, Y)

    One-hot inputs recover ``k`` exactly.  Cost is ``|B|**(|v|+|w|)``
    kernel evaluations; intended as an exact small-scale oracle.
    """
    if v.alphabet.size != w.alphabet.size:
        raise DataError("vector encodings must share the alphabet dimension")

    def expansion(vs: VectorSequence):
        L = len(vs)
        for x in enumerate_sequences(vs.alphabet, L):
            coef = 1.0
            for l, c in enumerate(x.codes):
                coef *= vs.columns[l, c]
                if coef == 0.0:
                    break
            if coef != 0.0:
                yield coef, x

    total = 0.0
    terms_w = list(expansion(w))
    for cv, x in expansion(v):
        for cw, y in terms_w:
            total += cv * cw * kernel(x, y)
    return total
