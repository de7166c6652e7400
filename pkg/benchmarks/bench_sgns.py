#!/usr/bin/env python3
"""Benchmark the compiled skip-gram kernel against the numpy fallback.

Usage:
    python3 benchmarks/bench_sgns.py --sentences 4000 --epochs 3
"""

import argparse
import time

import numpy as np

from corpuscompare import embed
from corpuscompare.textprep import TokenStream


def build_corpus(n_sentences, seed):
    rng = np.random.default_rng(seed)
    pool1 = [f"p1w{i}" for i in range(40)]
    pool2 = [f"p2w{i}" for i in range(40)]
    streams = []
    for i in range(n_sentences):
        if i % 2 == 0:
            words = list(rng.choice(pool1, size=10)) + ["alpha", "beta"]
        else:
            words = list(rng.choice(pool2, size=10)) + ["gamma"]
        rng.shuffle(words)
        streams.append(TokenStream(post_id=str(i), tokens=tuple(words)))
    return streams


def cosine(model, a, b):
    va = model.word_vector(a).astype(np.float64)
    vb = model.word_vector(b).astype(np.float64)
    return float(va @ vb / (np.linalg.norm(va) * np.linalg.norm(vb)))


def run(engine, streams, cfg):
    tokens = sum(len(s.tokens) for s in streams) * cfg.epochs
    t0 = time.perf_counter()
    model = embed.train(streams, cfg, engine=engine)
    elapsed = time.perf_counter() - t0
    margin = cosine(model, "alpha", "beta") - cosine(model, "alpha", "gamma")
    return {
        "engine": engine,
        "seconds": elapsed,
        "tokens_per_s": tokens / elapsed,
        "final_loss": model.epoch_losses[-1],
        "margin": margin,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sentences", type=int, default=4000)
    ap.add_argument("--dim", type=int, default=25)
    ap.add_argument("--epochs", type=int, default=3)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    streams = build_corpus(args.sentences, args.seed)
    cfg = embed.EmbedConfig(
        dim=args.dim, epochs=args.epochs, min_count=5, bucket_count=1 << 15, seed=args.seed
    )

    engines = ["numpy"] + (["fast"] if embed.HAVE_FAST_KERNEL else [])
    if not embed.HAVE_FAST_KERNEL:
        print("note: compiled kernel unavailable, benchmarking numpy engine only")

    results = [run(e, streams, cfg) for e in engines]
    print(f"{'engine':<8} {'seconds':>9} {'tokens/s':>12} {'final loss':>11} {'A/B margin':>11}")
    for r in results:
        print(
            f"{r['engine']:<8} {r['seconds']:>9.2f} {r['tokens_per_s']:>12.0f} "
            f"{r['final_loss']:>11.4f} {r['margin']:>11.3f}"
        )
    if len(results) == 2:
        print(f"\nspeedup (fast vs numpy): {results[0]['seconds'] / results[1]['seconds']:.1f}x")


if __name__ == "__main__":
    main()
