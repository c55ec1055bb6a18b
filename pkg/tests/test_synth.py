import io
from collections import Counter

import numpy as np
import pytest

from tseqclust import generate, write_sequences
from tseqclust.synth import EXTRA_MODELS, MISSING_MODELS, ratio_templates


def _bytes(ds):
    buf = io.StringIO()
    write_sequences(buf, ds.sequences, ds.alphabet)
    return buf.getvalue().encode()


@pytest.mark.parametrize("scenario,n,k", [("ratio", 135, 9), ("extra", 45, 3), ("missing", 45, 3)])
def test_sizes(scenario, n, k):
    ds = generate(scenario, seed=1)
    assert len(ds) == n
    counts = Counter(ds.labels.values())
    assert len(counts) == k and set(counts.values()) == {15}
    assert set(ds.labels) == {s.id for s in ds.sequences}


@pytest.mark.parametrize("scenario", ["ratio", "extra", "missing"])
def test_deterministic(scenario):
    assert _bytes(generate(scenario, 7)) == _bytes(generate(scenario, 7))
    assert _bytes(generate(scenario, 7)) != _bytes(generate(scenario, 8))


def test_unknown_scenario():
    with pytest.raises(ValueError):
        generate("nope")


def test_ratio_templates_distinct():
    tpl = ratio_templates()
    assert len(tpl) == 9 and len(set(tpl.values())) == 9


def test_ratio_instances_differ_only_in_dates():
    ds = generate("ratio", 0)
    by_label = {}
    for s in ds.sequences:
        by_label.setdefault(ds.labels[s.id], []).append(s)
    for label, seqs in by_label.items():
        tpl = ds.templates[label]
        for s in seqs:
            assert [ds.alphabet.symbol(e.type_index) for e in s.events] == [e for e, _ in tpl]
            assert np.all(np.abs(s.times - [t for _, t in tpl]) <= 0.25)


def test_extra_models():
    ds = generate("extra", 0)
    assert ds.templates == EXTRA_MODELS
    for s in ds.sequences:
        if ds.labels[s.id] == 3:
            assert ds.alphabet.symbol(s.events[-1].type_index) == "D"
            assert abs(s.events[-1].t - 1500) < 6


def test_missing_models_subset():
    m1, m3 = set(MISSING_MODELS[1]), set(MISSING_MODELS[3])
    assert m1 <= m3
    assert generate("missing", 0).templates == MISSING_MODELS


def test_gaussian_noise_scale():
    ds = generate("extra", 3, n_per_model=200)
    noise = []
    for s in ds.sequences:
        tpl = ds.templates[ds.labels[s.id]]
        noise += (s.times - np.sort([t for _, t in tpl])).tolist()
    assert abs(np.mean(noise)) < 0.1 and abs(np.std(noise) - 1) < 0.1
