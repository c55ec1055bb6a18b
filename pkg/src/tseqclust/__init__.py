"""
tseqclust
=========

Clustering of timed event sequences with drop-DTW and TSR averages.

A timed sequence is a list of ``(event type, date)`` pairs. Sequences are
compared with a DTW variant that may leave events unmatched at a fixed cost
(``delta``) and that only pairs events closer in time than ``tau``. Sets of
sequences are summarized by an average probabilistic timed sequence, and
clustered either hierarchically or with K-means.

Quick start::

    >>> from tseqclust import Alphabet, TimedSequence, embed, DropDtwParams, Weights, align
    >>> ab = Alphabet.from_symbols("ABC")
    >>> x = embed(TimedSequence.from_pairs("x", [("A", 0), ("B", 2)], ab), ab)
    >>> z = embed(TimedSequence.from_pairs("z", [("A", 0), ("C", 9)], ab), ab)
    >>> cost, al = align(x, z, DropDtwParams(Weights(), delta=1.0))
    >>> round(cost, 6), al.pairs
    (2.0, ((0, 0),))
"""
from .averaging import TsrConfig, TsrResult, inertia, tsr_average, vertical_average
from .clustering import ClusterParams, Clustering, hac_cluster, kmeans_cluster, pairwise_distances
from .core import (
    Alphabet,
    InvalidAlphabetError,
    ParseError,
    ProbEvent,
    ProbTimedSequence,
    TimedEvent,
    TimedSequence,
    ValidationError,
    barycenter_from_json,
    barycenter_to_json,
    embed,
    extract_argmax,
    parse_sequences,
    write_sequences,
)
from .evaluation import ConfusionMatrix, cohen_kappa, confusion_and_kappa, histogram_export, merge_labels
from .metric import (
    Alignment,
    DpTables,
    DropDtwParams,
    InfeasibleAlignmentError,
    Weights,
    align,
    cost_matrix,
    drop_dtw,
    drop_dtw_cost,
    event_distance,
    get_alignment,
)
from .oracle import brute_force_drop_dtw
from .params import ParamSuggestion, suggest_parameters
from .synth import (
    LabeledDataset,
    generate,
    generate_extra_event_dataset,
    generate_missing_event_dataset,
    generate_ratio_dataset,
)

__version__ = "0.1.0"
