"""
Synthetic labeled datasets.

Three scenarios:

* ``ratio`` -- a base sequence and 8 variants, one per combination of a
  length, an event-nature and a date variation; 15 noisy instances of each
  (135 sequences), uniform date noise U(-0.25, 0.25).
* ``extra`` -- three models where model 3 is model 1 plus an aberrant late
  event; 15 instances each, Gaussian date noise N(0, 1).
* ``missing`` -- three models where model 1 is a subset of model 3; same
  protocol.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import Alphabet, TimedEvent, TimedSequence

RATIO, EXTRA, MISSING = "ratio", "extra", "missing"
SCENARIOS = (RATIO, EXTRA, MISSING)

RATIO_BASE = (("A", 0.0), ("B", 5.0), ("C", 10.0))
# each dimension takes one of two values, both different from the base
RATIO_LENGTH = ((("D", 14.0),), (("D", 14.0), ("D", 18.0)))
RATIO_NATURE = ({"A": "B", "B": "C", "C": "A"}, {"A": "C", "B": "A", "C": "B"})
RATIO_SHIFT = (6.0, 12.0)
RATIO_NOISE = 0.25

EXTRA_MODELS = {
    1: (("D", 0.0), ("E", 3.0), ("F", 5.0), ("D", 7.0), ("D", 10.0), ("E", 12.0), ("F", 15.0)),
    2: (("E", 2.0), ("A", 4.0), ("D", 8.0), ("C", 12.0)),
    3: (("D", 0.0), ("E", 3.0), ("F", 5.0), ("D", 7.0), ("D", 10.0), ("E", 12.0), ("F", 15.0), ("D", 1500.0)),
}
MISSING_MODELS = {
    1: (("D", 0.0), ("E", 3.0), ("F", 5.0), ("D", 7.0)),
    2: (("E", 2.0), ("A", 4.0), ("E", 7.0), ("D", 8.0), ("D", 10.0), ("E", 12.0)),
    3: (("D", 0.0), ("E", 2.0), ("E", 3.0), ("F", 5.0), ("D", 7.0), ("F", 9.0), ("A", 13.0)),
}


@dataclass(frozen=True)
class LabeledDataset:
    sequences: list[TimedSequence]
    labels: dict[str, int]
    alphabet: Alphabet
    scenario: str
    templates: dict[int, tuple]

    def __len__(self):
        return len(self.sequences)


def ratio_templates() -> dict[int, tuple]:
    """Category 0 is the base; categories 1..8 enumerate (length, nature, dates)."""
    out = {0: RATIO_BASE}
    for label, (li, ni, si) in enumerate(product(range(2), repeat=3), start=1):
        events = [(RATIO_NATURE[ni][s], t) for s, t in RATIO_BASE]
        events += list(RATIO_LENGTH[li])
        out[label] = tuple((s, t + RATIO_SHIFT[si]) for s, t in events)
    return out


def _instances(templates, n_per_model, noise, rng, prefix):
    alphabet = Alphabet.from_symbols(s for tpl in templates.values() for s, _ in tpl)
    sequences, labels = [], {}
    for label, tpl in templates.items():
        for k in range(n_per_model):
            jitter = noise(rng, len(tpl))
            events = tuple(
                TimedEvent(alphabet.index(s), float(t + e)) for (s, t), e in zip(tpl, jitter)
            )
            sid = f"{prefix}{label}-{k:03d}"
            sequences.append(TimedSequence(sid, events))
            labels[sid] = label
    return sequences, labels, alphabet


def _uniform(rng, n):
    return rng.uniform(-RATIO_NOISE, RATIO_NOISE, size=n)


def _gaussian(rng, n):
    return rng.normal(0.0, 1.0, size=n)


def generate_ratio_dataset(seed: int = 0, n_per_model: int = 15) -> LabeledDataset:
    rng = np.random.default_rng(seed)
    templates = ratio_templates()
    seqs, labels, alphabet = _instances(templates, n_per_model, _uniform, rng, "r")
    return LabeledDataset(seqs, labels, alphabet, RATIO, templates)


def generate_extra_event_dataset(seed: int = 0, n_per_model: int = 15) -> LabeledDataset:
    rng = np.random.default_rng(seed)
    seqs, labels, alphabet = _instances(EXTRA_MODELS, n_per_model, _gaussian, rng, "x")
    return LabeledDataset(seqs, labels, alphabet, EXTRA, dict(EXTRA_MODELS))


def generate_missing_event_dataset(seed: int = 0, n_per_model: int = 15) -> LabeledDataset:
    rng = np.random.default_rng(seed)
    seqs, labels, alphabet = _instances(MISSING_MODELS, n_per_model, _gaussian, rng, "m")
    return LabeledDataset(seqs, labels, alphabet, MISSING, dict(MISSING_MODELS))


GENERATORS = {
    RATIO: generate_ratio_dataset,
    EXTRA: generate_extra_event_dataset,
    MISSING: generate_missing_event_dataset,
}


def generate(scenario: str, seed: int = 0, n_per_model: int = 15) -> LabeledDataset:
    try:
        gen = GENERATORS[scenario]
    except KeyError:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}") from None
    return gen(seed, n_per_model)
