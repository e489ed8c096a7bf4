from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Generic, Hashable, List, Sequence, Tuple, TypeVar

import numpy as np

from virtimu.errors import ConfigError

PROTOCOLS = ("R2R", "V2R", "Mix2R")

T = TypeVar("T")


def subject_holdout_splits(subjects: Sequence[Hashable], seed: int, k: int) -> List[Tuple[List[Hashable], Hashable]]:
    """k (train subjects, held-out subject) folds; held-out subjects drawn without replacement."""
    unique = list(dict.fromkeys(subjects))
    if not 1 <= k <= len(unique):
        raise ConfigError(f"k={k} folds requested for {len(unique)} subjects")
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(unique), size=k, replace=False)
    folds = []
    for i in picks:
        test = unique[int(i)]
        folds.append(([s for s in unique if s != test], test))
    return folds


@dataclass
class ProtocolSplit(Generic[T]):
    protocol: str
    train: List[T]
    test: T


def compose_protocol(real: Dict[Hashable, T], virtual: Dict[Hashable, T], test_subject: Hashable, protocol: str) -> ProtocolSplit[T]:
    """Training data for one fold.

    R2R trains on real data of the other subjects, V2R on their virtual data, Mix2R
    on both. The test set is always the held-out subject's real data.
    """
    if protocol not in PROTOCOLS:
        raise ConfigError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")
    if test_subject not in real:
        raise ConfigError(f"no real data for held-out subject {test_subject!r}")
    train: List[T] = []
    if protocol in ("R2R", "Mix2R"):
        train += [v for s, v in real.items() if s != test_subject]
    if protocol in ("V2R", "Mix2R"):
        train += [v for s, v in virtual.items() if s != test_subject]
    if not train:
        raise ConfigError(f"{protocol} fold for subject {test_subject!r} has no training data")
    return ProtocolSplit(protocol=protocol, train=train, test=real[test_subject])
