""" Base class for datasets.

A dataset is an ordered collection of labelled trials. Subjects keep the order
in which they first appear, so every iteration over a dataset is deterministic.
"""

from collections import OrderedDict
from typing import Dict, Iterator, List, Sequence

from aadbench.utils.exceptions import DatasetError
from aadbench.utils.signals.base import Trial


class BaseDataset:
    """Base class for datasets."""

    def __init__(self, trials: Sequence[Trial]) -> None:
        self.trials = list(trials)
        keys = [(trial.subject_id, trial.trial_id) for trial in self.trials]
        if len(set(keys)) != len(keys):
            raise DatasetError("Dataset contains duplicate (subject_id, trial_id) pairs")

    def __len__(self) -> int:
        return len(self.trials)

    def __getitem__(self, idx: int) -> Trial:
        return self.trials[idx]

    def __iter__(self) -> Iterator[Trial]:
        return iter(self.trials)

    @property
    def subjects(self) -> List[str]:
        return list(self.by_subject().keys())

    def by_subject(self) -> Dict[str, List[Trial]]:
        groups = OrderedDict()
        for trial in self.trials:
            groups.setdefault(trial.subject_id, []).append(trial)
        return groups

    def summary(self) -> List[dict]:
        """ One row per subject: trial count, total duration, channels, speakers and rate. """
        rows = []
        for subject_id, trials in self.by_subject().items():
            rows.append({
                'subject': subject_id,
                'trials': len(trials),
                'duration_s': sum(trial.duration for trial in trials),
                'channels': trials[0].n_channels,
                'speakers': trials[0].n_speakers,
                'fs': trials[0].fs,
            })
        return rows
