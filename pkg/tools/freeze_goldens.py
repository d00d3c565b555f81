#!/usr/bin/env python3
"""Regenerate the frozen expected values under tests/goldens/.

Run only when the underlying contract intentionally changes; tests
compare against these files exactly, so regenerating them on a drifted
implementation hides regressions.
"""

from __future__ import annotations

import json
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
GOLDENS = ROOT / "tests" / "goldens"
sys.path.insert(0, str(ROOT / "tests"))

import denoiser as dn  # noqa: E402
from worlds import acceptance_world, degenerate_world  # noqa: E402


def write(name: str, payload: dict) -> None:
    GOLDENS.mkdir(parents=True, exist_ok=True)
    path = GOLDENS / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def freeze_noise() -> None:
    cases = []
    for raw, spec_kw in [
        ("baby crawling", {"p": 0.1, "kind": "insert", "seed": 2235}),
        ("walking with a dog", {"p": 0.2, "kind": "mixed", "seed": 42}),
        ("juggling balls", {"p": 0.3, "kind": "delete", "seed": 7}),
        ("cutting in kitchen", {"p": 0.15, "kind": "substitute", "seed": 11}),
    ]:
        clean = [dn.tokenize(raw, 0)]
        noisy = dn.perturb(clean, dn.NoiseSpec(**spec_kw))
        cases.append({"clean": raw, "spec": spec_kw, "noisy": noisy[0].render()})
    write("noise.json", {"cases": cases})


def freeze_embedding() -> None:
    provider = dn.LexiconEmbedder(seed=13, dimension=64)
    bird = provider.encode_text(dn.tokenize("bird"))
    board = provider.encode_text(dn.tokenize("board"))
    world = acceptance_world()
    import numpy as np

    centers = {t.class_id: provider.encode_text(t) for t in world.clean}
    within, cross = [], []
    for s in world.visuals:
        for cid, center in centers.items():
            sim = dn.cosine_similarity(s.vec, center)
            (within if cid == s.true_class else cross).append(sim)
    write(
        "embedding.json",
        {
            "bird_board_cosine": dn.cosine_similarity(bird, board),
            "world_within_class_cosine_mean": float(np.mean(within)),
            "world_cross_class_cosine_mean": float(np.mean(cross)),
        },
    )


def freeze_degenerate() -> None:
    clean, provider, visuals, noisy = degenerate_world()
    assignment = dn.classify(visuals, noisy, provider)
    counts = Counter(assignment.labels)
    write(
        "degenerate_assignment.json",
        {
            "noisy": [t.render() for t in noisy],
            "histogram": {str(c): counts.get(c, 0) for c in range(len(clean))},
            "dominant_class": counts.most_common(1)[0][0],
            "dominant_count": counts.most_common(1)[0][1],
        },
    )


def freeze_acceptance() -> None:
    world = acceptance_world()
    noisy = dn.perturb(world.clean, dn.NoiseSpec(p=0.1, kind="mixed", seed=42))
    denoised, _ = dn.run_denoiser(
        noisy, world.visuals, world.corpus, world.provider, dn.DecodeConfig()
    )
    baseline = dn.frequency_baseline(noisy, world.corpus)
    truth = [s.true_class for s in world.visuals]
    write(
        "acceptance_world.json",
        {
            "noisy": [t.render() for t in noisy],
            "denoised": [t.render() for t in denoised],
            "label_acc_denoiser": dn.label_accuracy(denoised, world.clean),
            "label_acc_identity": dn.label_accuracy(noisy, world.clean),
            "label_acc_frequency_baseline": dn.label_accuracy(baseline, world.clean),
            "top1_before": dn.top1_accuracy(
                dn.classify(world.visuals, noisy, world.provider), truth
            ),
            "top1_after": dn.top1_accuracy(
                dn.classify(world.visuals, denoised, world.provider), truth
            ),
            "semantic_similarity": dn.semantic_similarity(denoised, world.clean, world.provider),
            "realized_noise_rate": dn.perturbation_rate(world.clean, noisy),
        },
    )


def main() -> None:
    freeze_noise()
    freeze_embedding()
    freeze_degenerate()
    freeze_acceptance()


if __name__ == "__main__":
    main()
