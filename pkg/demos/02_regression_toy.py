"""Regression with a degenerate kernel vs its heavy-tailed replacement.

Labels: the count of the most common letter in each length-4 DNA
sequence.  With the full, noise-free data set, least squares under the
lag-2 window-count kernel plateaus at a large error (the labels are
partly invisible to its features), while the inverse-multiquadric
Hamming kernel interpolates exactly.
"""

import numpy as np

from seqkern import (
    DNA,
    enumerate_sequences,
    fit_regression,
    gram,
    imq_hamming_kernel,
    predict_many,
    weighted_degree_kernel,
)
from seqkern.cli import most_common_letter_count

rng = np.random.default_rng(0)
seqs = enumerate_sequences(DNA, 4)
y = np.array([most_common_letter_count(s) for s in seqs], dtype=float)

print(f"{'train size':>10s} {'window-count NRMSE':>20s} {'IMQ-H NRMSE':>14s}")
for n in (32, 64, 128, 256):
    idx = rng.permutation(len(seqs))[:n]
    train = [seqs[i] for i in idx]
    y_train = y[idx]
    row = [n]
    for kernel in (weighted_degree_kernel(2), imq_hamming_kernel(1.0, 2.0)):
        fit = fit_regression(gram(kernel, train), y_train, ridge=0.0)
        pred = predict_many(fit, seqs)
        row.append(float(np.sqrt(np.mean((pred - y) ** 2)) / y.std()))
    print(f"{row[0]:>10d} {row[1]:>20.4f} {row[2]:>14.2e}")

print()
print("More data does not rescue the window-count kernel: the residual")
print("is orthogonal to everything its features can express.")
