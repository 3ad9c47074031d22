import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from seqkern import Alphabet, Sequence


@pytest.fixture
def dna():
    return Alphabet("ACGT")


@pytest.fixture
def ab():
    return Alphabet("AB")


def random_sequence(rng: np.random.Generator, alphabet: Alphabet,
                    max_len: int, min_len: int = 0) -> Sequence:
    length = int(rng.integers(min_len, max_len + 1))
    return Sequence(alphabet, tuple(int(c) for c in rng.integers(alphabet.size, size=length)))


def random_distinct_sequences(rng, alphabet, n, max_len, min_len=0):
    out = []
    seen = set()
    while len(out) < n:
        s = random_sequence(rng, alphabet, max_len, min_len)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out
