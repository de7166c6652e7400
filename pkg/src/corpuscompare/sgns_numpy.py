"""Mini-batched numpy engine for skip-gram negative sampling.

Fallback used when the compiled kernel is unavailable. Optimizes the same
per-pair objective as the kernel (see ``embed.pair_loss``) but applies
updates per mini-batch instead of per pair, so trained matrices differ
numerically between the engines. Deterministic for a fixed seed.
"""

from __future__ import annotations

import numpy as np

BATCH_SIZE = 1024


def _build_pairs(sent_flat, sent_offsets, window, rng):
    """(center, context, position) triples with per-position dynamic windows."""
    n_positions = len(sent_flat)
    b_draws = rng.integers(1, window + 1, size=n_positions)
    centers, contexts, pos_ids = [], [], []
    p = 0
    for s in range(len(sent_offsets) - 1):
        start = int(sent_offsets[s])
        end = int(sent_offsets[s + 1])
        length = end - start
        for i in range(length):
            b = int(b_draws[p])
            lo = max(0, i - b)
            hi = min(length, i + b + 1)
            for j in range(lo, hi):
                if j != i:
                    centers.append(sent_flat[start + i])
                    contexts.append(sent_flat[start + j])
                    pos_ids.append(p)
            p += 1
    return (
        np.array(centers, dtype=np.int64),
        np.array(contexts, dtype=np.int64),
        np.array(pos_ids, dtype=np.int64),
    )


def _gather_rows(rows_flat, row_offsets, centers):
    """Flattened input rows for a batch of center words plus segment ids."""
    starts = row_offsets[centers]
    lens = (row_offsets[centers + 1] - starts).astype(np.int64)
    total = int(lens.sum())
    seg_ids = np.repeat(np.arange(len(centers)), lens)
    out_starts = np.concatenate(([0], np.cumsum(lens)[:-1]))
    flat_pos = np.repeat(starts - out_starts, lens) + np.arange(total)
    return rows_flat[flat_pos], seg_ids, np.concatenate(([0], np.cumsum(lens)))[:-1]


def train_epoch(
    input_vecs,
    output_vecs,
    rows_flat,
    row_offsets,
    sent_flat,
    sent_offsets,
    neg_cdf,
    window,
    negatives,
    lr0,
    total_positions,
    positions_done,
    seed,
):
    """One epoch of mini-batched SGD; returns (loss_sum, n_pairs, n_positions)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    centers, contexts, pos_ids = _build_pairs(sent_flat, sent_offsets, window, rng)
    n_pairs = len(centers)
    n_positions = len(sent_flat)
    if n_pairs == 0:
        return 0.0, 0, n_positions

    if negatives > 0:
        negs = np.searchsorted(neg_cdf, rng.random((n_pairs, negatives)), side="right")
        negs = np.minimum(negs, len(neg_cdf) - 1).astype(np.int64)
    else:
        negs = np.zeros((n_pairs, 0), dtype=np.int64)

    lr_pairs = (lr0 * np.maximum(0.0, 1.0 - (positions_done + pos_ids) / total_positions)).astype(
        np.float32
    )

    loss_sum = 0.0
    for lo in range(0, n_pairs, BATCH_SIZE):
        hi = min(lo + BATCH_SIZE, n_pairs)
        c_batch = centers[lo:hi]
        ctx_batch = contexts[lo:hi]
        neg_batch = negs[lo:hi]
        lr = lr_pairs[lo:hi]

        flat_rows, seg_ids, seg_starts = _gather_rows(rows_flat, row_offsets, c_batch)
        h = np.add.reduceat(input_vecs[flat_rows], seg_starts, axis=0)

        u_pos = output_vecs[ctx_batch]
        s_pos = np.clip(np.einsum("bd,bd->b", h, u_pos), -30.0, 30.0)
        u_neg = output_vecs[neg_batch]  # (B, k, d)
        s_neg = np.clip(np.einsum("bd,bkd->bk", h, u_neg), -30.0, 30.0)

        loss_sum += float(np.logaddexp(0.0, -s_pos.astype(np.float64)).sum())
        loss_sum += float(np.logaddexp(0.0, s_neg.astype(np.float64)).sum())

        g_pos = (1.0 - _sigmoid(s_pos)) * lr  # (B,)
        g_neg = -_sigmoid(s_neg) * lr[:, None]  # (B, k)

        grad_h = g_pos[:, None] * u_pos + np.einsum("bk,bkd->bd", g_neg, u_neg)

        dim = h.shape[1]
        out_rows = np.concatenate((ctx_batch, neg_batch.reshape(-1)))
        out_updates = np.concatenate(
            (g_pos[:, None] * h, (g_neg[:, :, None] * h[:, None, :]).reshape(-1, dim))
        )
        _scatter_mean(output_vecs, out_rows, out_updates)
        _scatter_mean(input_vecs, flat_rows, grad_h[seg_ids])

    return loss_sum, n_pairs, n_positions


def _scatter_mean(target, rows, updates):
    """target[rows] += updates, averaging where a row repeats within the batch.

    A hot row can repeat hundreds of times in one batch; summing those stale
    gradients is a runaway step, so the batched engine averages them instead.
    """
    uniq, inv, cnt = np.unique(rows, return_inverse=True, return_counts=True)
    buf = np.zeros((len(uniq), target.shape[1]), dtype=target.dtype)
    np.add.at(buf, inv, updates)
    buf /= cnt[:, None].astype(target.dtype)
    target[uniq] += buf


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))
