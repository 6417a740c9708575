""" File helpers: JSON dictionaries, the AADM raw-float matrix format, CSV and WAV import, checksums.

An AADM file is a 16-byte header (magic `AADM`, u32 rows, u32 cols, u32 reserved,
all little-endian) followed by rows x cols little-endian float32 values, row-major.
Multi-channel recordings are stored with rows = time.
"""

import os
import json
import hashlib

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from scipy.io import wavfile

from aadbench.utils.exceptions import DatasetError

AADM_MAGIC = b'AADM'
AADM_HEADER_SIZE = 16
AADM_DTYPE = np.dtype('<f4')
HEADER_DTYPE = np.dtype('<u4')


def write_dict_to_file(dictionary: Dict[str, Any], filename: str) -> None:
    with open(filename, 'w') as f:
        json.dump(dictionary, f, indent=4)


def read_dict_from_file(filename: str) -> Dict[str, Any]:
    try:
        with open(filename, 'r') as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise DatasetError(f"File {filename} not found") from e
    except json.JSONDecodeError as e:
        raise DatasetError(f"File {filename} is not valid JSON: {e}") from e


def write_matrix(matrix: np.ndarray, filename: str) -> None:
    """ Writes a 1-D (stored as one column) or 2-D array in the AADM format. """
    matrix = np.asarray(matrix)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    if matrix.ndim != 2:
        raise DatasetError(f"Only 1-D and 2-D arrays can be written to {filename}, got shape {matrix.shape}")
    header = np.array([matrix.shape[0], matrix.shape[1], 0], dtype=HEADER_DTYPE)
    try:
        with open(filename, 'wb') as f:
            f.write(AADM_MAGIC)
            f.write(header.tobytes())
            f.write(np.ascontiguousarray(matrix, dtype=AADM_DTYPE).tobytes())
    except OSError as e:
        raise DatasetError(f"Cannot write {filename}: {e}") from e


def read_matrix(filename: str) -> np.ndarray:
    """ Reads an AADM file into a (rows, cols) float64 array. """
    try:
        with open(filename, 'rb') as f:
            raw = f.read()
    except OSError as e:
        raise DatasetError(f"Cannot read {filename}: {e}") from e
    if len(raw) < AADM_HEADER_SIZE or raw[:4] != AADM_MAGIC:
        raise DatasetError(f"File {filename} does not start with an AADM header")
    rows, cols, _ = np.frombuffer(raw[4:AADM_HEADER_SIZE], dtype=HEADER_DTYPE)
    expected = int(rows) * int(cols) * AADM_DTYPE.itemsize
    if len(raw) - AADM_HEADER_SIZE != expected:
        raise DatasetError(
            f"File {filename} declares {rows}x{cols} values but holds {len(raw) - AADM_HEADER_SIZE} payload bytes")
    data = np.frombuffer(raw[AADM_HEADER_SIZE:], dtype=AADM_DTYPE).reshape(int(rows), int(cols))
    return data.astype(np.float64)


def read_csv_matrix(filename: str) -> Tuple[np.ndarray, List[str]]:
    """ Reads a CSV with one column per channel and a header row of labels. """
    try:
        frame = pd.read_csv(filename)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DatasetError(f"Cannot read {filename}: {e}") from e
    try:
        data = frame.to_numpy(dtype=np.float64)
    except ValueError as e:
        raise DatasetError(f"File {filename} contains non-numeric values") from e
    return data, [str(c) for c in frame.columns]


def read_array(filename: str) -> Tuple[np.ndarray, Optional[List[str]]]:
    """ Dispatches on the file extension: `.csv` is read with labels, anything else as AADM. """
    if filename.lower().endswith('.csv'):
        return read_csv_matrix(filename)
    return read_matrix(filename), None


def read_audio(filename: str) -> Tuple[np.ndarray, Optional[float]]:
    """ Reads mono audio; `.wav` files carry their own rate, other formats return None for it. """
    if filename.lower().endswith('.wav'):
        try:
            fs, samples = wavfile.read(filename)
        except (OSError, ValueError) as e:
            raise DatasetError(f"Cannot read {filename}: {e}") from e
        samples = np.asarray(samples, dtype=np.float64)
        if samples.ndim == 2:
            samples = samples.mean(axis=1)
        return samples, float(fs)
    data, _ = read_array(filename)
    return data.mean(axis=1), None


def write_blocks(directory: str, descriptor_name: str, descriptor: Dict[str, Any], blocks: Dict[str, np.ndarray]) -> None:
    """ Writes a JSON descriptor plus one AADM file per named array. """
    os.makedirs(directory, exist_ok=True)
    files = {}
    for name, block in blocks.items():
        files[name] = f"{name}.aadm"
        write_matrix(block, os.path.join(directory, files[name]))
    write_dict_to_file(dict(descriptor, blocks=files), os.path.join(directory, descriptor_name))


def read_blocks(directory: str, descriptor_name: str) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    descriptor = read_dict_from_file(os.path.join(directory, descriptor_name))
    blocks = {name: read_matrix(os.path.join(directory, filename))
              for name, filename in descriptor.get('blocks', {}).items()}
    return descriptor, blocks


def file_checksum(filename: str) -> str:
    sha = hashlib.sha256()
    with open(filename, 'rb') as f:
        for block in iter(lambda: f.read(1 << 20), b''):
            sha.update(block)
    return sha.hexdigest()


def directory_checksum(directory: str) -> str:
    """ sha256 over every file below `directory`, visited in sorted relative-path order. """
    sha = hashlib.sha256()
    for root, dirs, files in os.walk(directory):
        dirs.sort()
        for name in sorted(files):
            path = os.path.join(root, name)
            sha.update(os.path.relpath(path, directory).encode())
            sha.update(file_checksum(path).encode())
    return sha.hexdigest()


def dict_checksum(dictionary: Dict[str, Any]) -> str:
    return hashlib.sha256(json.dumps(dictionary, sort_keys=True).encode()).hexdigest()
