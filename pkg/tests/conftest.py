"""Shared fixtures: the three-sequence care-pathway example and random sequences."""
from __future__ import annotations

import numpy as np
import pytest

from tseqclust import Alphabet, DropDtwParams, TimedSequence, Weights, embed

SRCP = Alphabet(("S", "R", "C", "P"))

S1 = [("S", 1), ("C", 2), ("R", 4.5)]
S2 = [("C", 0), ("C", 2), ("P", 3), ("S", 4), ("R", 5)]
S3 = [("S", 0), ("C", 1), ("C", 2), ("R", 4)]

# weights with a unit type term and a 3-day time scale, drops at cost 1,
# matches allowed within 3.5 days
EXAMPLE_PARAMS = DropDtwParams(Weights(p_e=1.0, p_t=1 / 9), delta=1.0, tau=3.5)


@pytest.fixture
def alphabet():
    return SRCP


@pytest.fixture
def example_seqs():
    return [
        TimedSequence.from_pairs("s1", S1, SRCP),
        TimedSequence.from_pairs("s2", S2, SRCP),
        TimedSequence.from_pairs("s3", S3, SRCP),
    ]


@pytest.fixture
def example_probs(example_seqs):
    return [embed(s, SRCP) for s in example_seqs]


def random_sequence(rng, n_types, max_len, id="r", t_max=10.0, min_len=0, integer_times=False):
    """Random timed sequence with distinct (type, t) pairs."""
    L = int(rng.integers(min_len, max_len + 1))
    events = set()
    while len(events) < L:
        t = float(rng.integers(0, int(t_max) + 1)) if integer_times else round(float(rng.uniform(0, t_max)), 3)
        events.add((int(rng.integers(n_types)), t))
    return TimedSequence(id, tuple(events))


def random_prob(rng, n_types, max_len, **kw):
    return embed(random_sequence(rng, n_types, max_len, **kw), Alphabet(tuple("ABCDEFGH"[:n_types])))


def random_params(rng):
    return DropDtwParams(
        Weights(p_e=float(rng.choice([0.5, 1.0, 2.0])), p_t=float(rng.choice([1 / 9, 0.5, 1.0]))),
        delta=float(rng.choice([0.5, 1.0, 4.0, np.inf])),
        sigma=float(rng.choice([2, np.inf])),
        tau=float(rng.choice([1.0, 5.0, np.inf])),
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
