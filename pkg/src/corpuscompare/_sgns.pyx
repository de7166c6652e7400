# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled skip-gram negative-sampling epoch: sequential SGD, one update per pair."""

from libc.math cimport exp, log

import numpy as np


cdef inline unsigned long long splitmix64(unsigned long long* state) noexcept nogil:
    cdef unsigned long long z
    state[0] = state[0] + <unsigned long long>0x9E3779B97F4A7C15ULL
    z = state[0]
    z = (z ^ (z >> 30)) * <unsigned long long>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <unsigned long long>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double rand_unit(unsigned long long* state) noexcept nogil:
    # 53-bit mantissa in [0, 1)
    return <double>(splitmix64(state) >> 11) * (1.0 / 9007199254740992.0)


cdef inline Py_ssize_t sample_cdf(const double[::1] cdf, double u) noexcept nogil:
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = cdf.shape[0] - 1
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double sigmoid(double x) noexcept nogil:
    if x > 30.0:
        return 1.0
    if x < -30.0:
        return 0.0
    return 1.0 / (1.0 + exp(-x))


def train_epoch(
    float[:, ::1] input_vecs,
    float[:, ::1] output_vecs,
    const int[::1] rows_flat,
    const long long[::1] row_offsets,
    const int[::1] sent_flat,
    const long long[::1] sent_offsets,
    const double[::1] neg_cdf,
    int window,
    int negatives,
    double lr0,
    long long total_positions,
    long long positions_done,
    unsigned long long seed,
):
    """One deterministic epoch; returns (loss_sum, n_pairs, n_positions)."""
    cdef Py_ssize_t dim = input_vecs.shape[1]
    cdef Py_ssize_t n_sent = sent_offsets.shape[0] - 1

    h_arr = np.zeros(dim, dtype=np.float32)
    g_arr = np.zeros(dim, dtype=np.float32)
    cdef float[::1] h = h_arr
    cdef float[::1] grad = g_arr

    cdef unsigned long long state = seed ^ <unsigned long long>0x5851F42D4C957F2DULL
    cdef double loss_sum = 0.0
    cdef long long n_pairs = 0
    cdef long long pos_global = positions_done
    cdef long long n_positions = sent_flat.shape[0]

    cdef Py_ssize_t s, i, j, lo_j, hi_j, t, r, d, center, context, target
    cdef Py_ssize_t sent_start, sent_len, row_start, row_end
    cdef int b
    cdef double lr, score, sig, g, label

    with nogil:
        for s in range(n_sent):
            sent_start = <Py_ssize_t>sent_offsets[s]
            sent_len = <Py_ssize_t>(sent_offsets[s + 1] - sent_offsets[s])
            for i in range(sent_len):
                lr = lr0 * (1.0 - <double>pos_global / <double>total_positions)
                if lr < 0.0:
                    lr = 0.0
                pos_global = pos_global + 1

                b = 1 + <int>(splitmix64(&state) % <unsigned long long>window)
                lo_j = i - b
                if lo_j < 0:
                    lo_j = 0
                hi_j = i + b + 1
                if hi_j > sent_len:
                    hi_j = sent_len

                center = <Py_ssize_t>sent_flat[sent_start + i]
                row_start = <Py_ssize_t>row_offsets[center]
                row_end = <Py_ssize_t>row_offsets[center + 1]

                for j in range(lo_j, hi_j):
                    if j == i:
                        continue
                    context = <Py_ssize_t>sent_flat[sent_start + j]
                    n_pairs = n_pairs + 1

                    # h = subword-summed input vector of the center word
                    for d in range(dim):
                        h[d] = 0.0
                        grad[d] = 0.0
                    for r in range(row_start, row_end):
                        for d in range(dim):
                            h[d] = h[d] + input_vecs[rows_flat[r], d]

                    for t in range(negatives + 1):
                        if t == 0:
                            target = context
                            label = 1.0
                        else:
                            target = sample_cdf(neg_cdf, rand_unit(&state))
                            label = 0.0
                        score = 0.0
                        for d in range(dim):
                            score = score + <double>h[d] * <double>output_vecs[target, d]
                        sig = sigmoid(score)
                        if label == 1.0:
                            loss_sum = loss_sum + log_one_plus_exp(-score)
                        else:
                            loss_sum = loss_sum + log_one_plus_exp(score)
                        g = (label - sig) * lr
                        for d in range(dim):
                            grad[d] = grad[d] + <float>(g * <double>output_vecs[target, d])
                        for d in range(dim):
                            output_vecs[target, d] = output_vecs[target, d] + <float>(g * <double>h[d])

                    for r in range(row_start, row_end):
                        for d in range(dim):
                            input_vecs[rows_flat[r], d] = input_vecs[rows_flat[r], d] + grad[d]

    return loss_sum, n_pairs, n_positions


cdef inline double log_one_plus_exp(double x) noexcept nogil:
    # log(1 + e^x) without overflow
    if x > 30.0:
        return x
    if x < -30.0:
        return 0.0
    return log(1.0 + exp(x))
