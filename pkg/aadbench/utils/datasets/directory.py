""" Dataset directories: a `manifest.json` listing trials plus one AADM (or CSV) file per matrix.

Manifest layout:

    {
        "format": "aadm",
        "version": 1,
        "trials": [
            {
                "subject_id": "s01", "trial_id": "t0", "attended": 0, "fs": 64.0,
                "eeg": "s01/t0_eeg.aadm", "channel_labels": ["Fz", ...],
                "envelopes": ["s01/t0_env0.aadm", "s01/t0_env1.aadm"]
            }
        ]
    }

Instead of `envelopes` a trial may list raw `audio` files (one per speaker, `.wav`
or single-column AADM/CSV with `audio_fs`); these are converted with the gammatone
envelope and resampled to the EEG rate on load. Paths are relative to the directory.
"""

import os
import logging

from typing import Any, Dict, List, Sequence

from aadbench.configs.dataset import DatasetConfig
from aadbench.utils.data import read_array, read_audio, read_dict_from_file, write_dict_to_file, write_matrix
from aadbench.utils.datasets.base import BaseDataset
from aadbench.utils.exceptions import AADError, DatasetError
from aadbench.utils.signals.base import MultiChannel, Signal, Trial
from aadbench.utils.signals.envelope import gammatone_envelope
from aadbench.utils.signals.filters import resample_staged

console = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
MANIFEST_FORMAT = 'aadm'
MANIFEST_VERSION = 1
REQUIRED_FIELDS = ('subject_id', 'attended', 'fs', 'eeg')


def _resolve(root: str, relpath: str) -> str:
    path = os.path.join(root, relpath)
    if not os.path.isfile(path):
        raise DatasetError(f"File {path} listed in the manifest does not exist")
    return path


def _envelope_from_audio(root: str, entry: Dict[str, Any], relpath: str, fs: float) -> Signal:
    samples, audio_fs = read_audio(_resolve(root, relpath))
    audio_fs = audio_fs if audio_fs is not None else entry.get('audio_fs')
    if audio_fs is None:
        raise DatasetError(f"Audio file {relpath} has no sample rate; set `audio_fs` in the manifest")
    envelope = gammatone_envelope(Signal(samples, audio_fs))
    return resample_staged(envelope, fs)


def _load_trial(root: str, entry: Dict[str, Any], index: int) -> Trial:
    missing = [field for field in REQUIRED_FIELDS if field not in entry]
    if missing:
        raise DatasetError(f"Manifest trial {index} lacks fields {missing}")
    fs = float(entry['fs'])
    data, labels = read_array(_resolve(root, entry['eeg']))
    labels = entry.get('channel_labels', labels)

    if 'envelopes' in entry:
        envelopes = []
        for relpath in entry['envelopes']:
            samples, _ = read_array(_resolve(root, relpath))
            if samples.shape[1] != 1:
                raise DatasetError(f"Envelope file {relpath} must hold a single column, got {samples.shape[1]}")
            envelopes.append(Signal(samples[:, 0], fs))
    elif 'audio' in entry:
        envelopes = [_envelope_from_audio(root, entry, relpath, fs) for relpath in entry['audio']]
    else:
        raise DatasetError(f"Manifest trial {index} lists neither `envelopes` nor `audio`")

    num_samples = min([data.shape[0]] + [len(envelope) for envelope in envelopes])
    if any(len(envelope) != num_samples for envelope in envelopes) or data.shape[0] != num_samples:
        console.info(f"Trial {index}: truncating EEG and envelopes to {num_samples} common samples")
    try:
        return Trial(
            eeg=MultiChannel(data[:num_samples], fs, labels),
            envelopes=[envelope.slice(0, num_samples) for envelope in envelopes],
            attended=int(entry['attended']),
            subject_id=str(entry['subject_id']),
            trial_id=str(entry.get('trial_id', f'trial{index}')))
    except AADError as e:
        raise DatasetError(f"Manifest trial {index} in {root} is invalid: {e}") from e


def load_dataset(path: str) -> List[Trial]:
    """ Loads every trial listed in `path`/manifest.json, in manifest order. """
    if not os.path.isdir(path):
        raise DatasetError(f"Dataset directory {path} does not exist")
    manifest = read_dict_from_file(os.path.join(path, MANIFEST_NAME))
    if not isinstance(manifest.get('trials'), list):
        raise DatasetError(f"Manifest in {path} has no `trials` list")
    trials = [_load_trial(path, entry, index) for index, entry in enumerate(manifest['trials'])]
    console.info(f"Loaded {len(trials)} trials from {path}")
    return trials


def save_dataset(trials: Sequence[Trial], path: str) -> str:
    """ Writes `trials` as a dataset directory and returns the manifest path.

    Samples are stored as float32, so a round trip is exact for float32-representable data.
    """
    os.makedirs(path, exist_ok=True)
    entries = []
    for trial in trials:
        subject_dir = os.path.join(path, trial.subject_id)
        os.makedirs(subject_dir, exist_ok=True)
        eeg_relpath = os.path.join(trial.subject_id, f"{trial.trial_id}_eeg.aadm")
        write_matrix(trial.eeg.data, os.path.join(path, eeg_relpath))
        envelope_relpaths = []
        for i, envelope in enumerate(trial.envelopes):
            relpath = os.path.join(trial.subject_id, f"{trial.trial_id}_env{i}.aadm")
            write_matrix(envelope.samples, os.path.join(path, relpath))
            envelope_relpaths.append(relpath)
        entries.append({
            'subject_id': trial.subject_id,
            'trial_id': trial.trial_id,
            'attended': trial.attended,
            'fs': trial.fs,
            'eeg': eeg_relpath,
            'channel_labels': trial.eeg.channel_labels,
            'envelopes': envelope_relpaths,
        })
    manifest_path = os.path.join(path, MANIFEST_NAME)
    write_dict_to_file({'format': MANIFEST_FORMAT, 'version': MANIFEST_VERSION, 'trials': entries}, manifest_path)
    console.info(f"Wrote {len(entries)} trials to {path}")
    return manifest_path


class DirectoryDataset(BaseDataset):

    def __init__(self, path: str) -> None:
        self.path = path
        super().__init__(load_dataset(path))

    @classmethod
    def from_config(cls, config: DatasetConfig) -> 'DirectoryDataset':
        return cls(config.path)
