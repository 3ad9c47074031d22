"""Embedding kernels: Euclidean kernels on vector representations.

An embedding maps sequences to points in ``R^D``; the kernel applies a
translation-invariant Euclidean kernel to the representations.  An
injective embedding makes the kernel universal and characteristic, but
using it to *optimise* distributions further requires the image to have
no accumulation points.  Representations drawn i.i.d. (here: uniformly
from the unit ball, keyed deterministically per sequence) accumulate;
rescaling them by ``|B|**((1+eps)|x|/D)`` spreads longer sequences onto
growing shells and removes accumulation almost surely.
"""

from __future__ import annotations

import hashlib
from typing import Callable, Optional

import numpy as np

from .core import HAS_MASSES, Kernel, UNKNOWN_MASSES
from .errors import DataError
from .seqcore import Sequence


class Embedding:
    """Deterministic map from sequences to vectors in ``R^D``, memoised.

    Subclasses implement :meth:`_compute`.  Memoisation is idempotent
    (the value is a pure function of the sequence), so concurrent first
    evaluations agree.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise DataError("embedding dimension must be >= 1")
        self.dim = int(dim)
        self._cache: dict[Sequence, np.ndarray] = {}

    def _compute(self, x: Sequence) -> np.ndarray:
        raise NotImplementedError

    def vector(self, x: Sequence) -> np.ndarray:
        v = self._cache.get(x)
        if v is None:
            v = np.asarray(self._compute(x), dtype=float)
            if v.shape != (self.dim,):
                raise DataError("embedding returned a vector of the wrong size")
            self._cache[x] = v
        return v

    def matrix(self, xs) -> np.ndarray:
        return np.stack([self.vector(x) for x in xs]) if xs else np.zeros((0, self.dim))


class RandomBallEmbedding(Embedding):
    """I.i.d.-style representations, uniform on the unit ball.

    Each sequence's vector is generated by a counter-based generator
    keyed on a cryptographic hash of the letters mixed with the seed, so
    the (infinite) sequence space never needs materialising and repeated
    lookups are identical.  Distinct sequences collide with probability
    zero in exact arithmetic, giving an almost surely injective map.
    """

    def __init__(self, dim: int, seed: int):
        super().__init__(dim)
        self.seed = int(seed)
        self._seed_bytes = self.seed.to_bytes(8, "little", signed=True)

    def _compute(self, x: Sequence) -> np.ndarray:
        payload = "\x1f".join(x.letters).encode()
        digest = hashlib.blake2b(payload, digest_size=16, key=self._seed_bytes).digest()
        key = int.from_bytes(digest, "little")
        rng = np.random.Generator(np.random.Philox(key=key))
        direction = rng.standard_normal(self.dim)
        direction /= np.linalg.norm(direction)
        radius = rng.random() ** (1.0 / self.dim)
        return direction * radius


class ScaledEmbedding(Embedding):
    """Length-dependent rescaling ``|B|**((1+eps)|x|/D) * base(x)``.

    Gives each length class its own shell so representations cannot
    accumulate; the base map's injectivity is preserved.
    """

    def __init__(self, base: Embedding, epsilon: float, alphabet_size: int):
        if epsilon <= 0:
            raise DataError("epsilon must be positive")
        if alphabet_size < 1:
            raise DataError("alphabet_size must be >= 1")
        super().__init__(base.dim)
        self.base = base
        self.epsilon = float(epsilon)
        self.alphabet_size = int(alphabet_size)

    def _compute(self, x: Sequence) -> np.ndarray:
        scale = self.alphabet_size ** ((1.0 + self.epsilon) * len(x) / self.dim)
        return scale * self.base.vector(x)


class FunctionEmbedding(Embedding):
    """Wrap an arbitrary deterministic function as an embedding."""

    def __init__(self, fn: Callable[[Sequence], np.ndarray], dim: int):
        super().__init__(dim)
        self._fn = fn

    def _compute(self, x: Sequence) -> np.ndarray:
        return np.atleast_1d(np.asarray(self._fn(x), dtype=float))


class TableEmbedding(Embedding):
    """Finite-support embedding backed by an explicit table.

    Raises on lookup of a sequence outside the table.
    """

    def __init__(self, table: dict[str, np.ndarray], dim: int):
        super().__init__(dim)
        self.table = {k: np.asarray(v, dtype=float) for k, v in table.items()}
        for k, v in self.table.items():
            if v.shape != (self.dim,):
                raise DataError(f"table row {k!r} has wrong dimension")

    def _compute(self, x: Sequence) -> np.ndarray:
        key = str(x)
        if key not in self.table:
            raise DataError(f"sequence {key!r} is not in the embedding table")
        return self.table[key]


class EuclideanKernel:
    """Translation-invariant kernel on ``R^D`` with unit diagonal."""

    def __init__(self, form: str, gamma: float = 1.0):
        if form not in ("imq", "rbf"):
            raise DataError("Euclidean kernel form must be 'imq' or 'rbf'")
        if form == "rbf" and gamma <= 0:
            raise DataError("rbf gamma must be positive")
        self.form = form
        self.gamma = float(gamma)

    def of_sqdist(self, d2):
        if self.form == "imq":
            return 1.0 / (1.0 + d2)
        return np.exp(-self.gamma * d2)

    def __call__(self, a: np.ndarray, b: np.ndarray) -> float:
        diff = a - b
        return float(self.of_sqdist(diff @ diff))


class EmbeddingKernel(Kernel):
    """``k(x, y) = k_E(F(x), F(y))`` for an embedding ``F``.

    ``k(x, x) = 1`` because ``k_E`` is translation invariant.  The
    ``mass_status`` flag reflects the embedding's spread: scaled random
    embeddings earn discrete masses (almost surely), plain i.i.d. ones
    accumulate and stay unflagged.
    """

    family = "embedding"

    def __init__(self, embedding: Embedding, euclidean: EuclideanKernel,
                 mass_status: Optional[str] = None):
        self.embedding = embedding
        self.euclidean = euclidean
        if mass_status is not None:
            self.mass_status = mass_status
        elif isinstance(embedding, ScaledEmbedding) and isinstance(
            embedding.base, RandomBallEmbedding
        ):
            self.mass_status = HAS_MASSES
        else:
            self.mass_status = UNKNOWN_MASSES

    @property
    def params(self) -> dict:
        return {"dim": self.embedding.dim, "form": self.euclidean.form}

    def __call__(self, x: Sequence, y: Sequence) -> float:
        return self.euclidean(self.embedding.vector(x), self.embedding.vector(y))

    def pairwise(self, xs, ys=None) -> np.ndarray:
        A = self.embedding.matrix(list(xs))
        B = A if ys is None else self.embedding.matrix(list(ys))
        d2 = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
        return self.euclidean.of_sqdist(d2)

    def self_similarities(self, xs) -> np.ndarray:
        return np.ones(len(xs))


def random_ball_embedding(seed: int, dim: int) -> RandomBallEmbedding:
    return RandomBallEmbedding(dim, seed)


def scaled_embedding(base: Embedding, epsilon: float, alphabet_size: int) -> ScaledEmbedding:
    return ScaledEmbedding(base, epsilon, alphabet_size)


def embedding_kernel(embedding: Embedding, euclidean: EuclideanKernel,
                     mass_status: Optional[str] = None) -> EmbeddingKernel:
    return EmbeddingKernel(embedding, euclidean, mass_status)


def load_embedding_table(path, dim: Optional[int] = None) -> TableEmbedding:
    """Read a CSV of ``sequence, v0, v1, ...`` rows into a table embedding."""
    table = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read embedding table {path!r}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) < 2:
                raise DataError(f"{path}:{lineno}: expected 'sequence,v0,...'")
            key = parts[0].strip()
            try:
                vec = np.array([float(p) for p in parts[1:]])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad vector entry") from exc
            if dim is None:
                dim = vec.size
            if vec.size != dim:
                raise DataError(f"{path}:{lineno}: inconsistent vector size")
            if key in table:
                raise DataError(f"{path}:{lineno}: duplicate sequence {key!r}")
            table[key] = vec
    if not table:
        raise DataError(f"{path}: empty embedding table")
    return TableEmbedding(table, dim)
