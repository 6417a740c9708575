""" Result tables: per-subject curves and MESD values, and their aggregates across subjects.

Curves are written with full float precision, so `read_curves` returns exactly the
curves that were written. MESD values above the bound are written as ">bound"
and count as +inf when taking medians.
"""

import os
import logging

from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from aadbench.utils.exceptions import DatasetError, ParameterError
from aadbench.utils.metrics.accuracy import chance_level, standard_error
from aadbench.utils.metrics.curve import CurvePoint, PerformanceCurve
from aadbench.utils.metrics.mesd import MesdResult, UNBOUNDED

console = logging.getLogger(__name__)

CURVES_FILE = 'curves.csv'
MESD_FILE = 'mesd.csv'
AGGREGATE_CURVES_FILE = 'aggregate_curves.csv'
AGGREGATE_MESD_FILE = 'aggregate_mesd.csv'
CURVE_COLUMNS = ['algorithm', 'subject', 'tau', 'accuracy', 'n_decisions']
MESD_COLUMNS = ['algorithm', 'subject', 'mesd', 'mesd_seconds', 'tau', 'accuracy', 'num_states',
                'target_state', 'status', 'bound']
NA = 'NA'


def curves_frame(curves: Sequence[PerformanceCurve]) -> pd.DataFrame:
    return pd.DataFrame.from_records([record for curve in curves for record in curve.to_records()],
                                     columns=CURVE_COLUMNS)


def mesd_frame(curves: Sequence[PerformanceCurve], results: Sequence[MesdResult]) -> pd.DataFrame:
    rows = []
    for curve, result in zip(curves, results):
        rows.append({
            'algorithm': curve.algorithm, 'subject': curve.subject_id, 'mesd': result.display(),
            'mesd_seconds': result.mesd_seconds, 'tau': result.tau, 'accuracy': result.accuracy,
            'num_states': result.num_states, 'target_state': result.target_state, 'status': result.status,
            'bound': result.bound})
    return pd.DataFrame.from_records(rows, columns=MESD_COLUMNS)


def _to_csv(frame: pd.DataFrame, path: str) -> str:
    try:
        frame.to_csv(path, index=False, na_rep=NA)
    except OSError as e:
        raise DatasetError(f"Cannot write {path}: {e}") from e
    console.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_mesd(curves: Sequence[PerformanceCurve], results: Sequence[MesdResult], path: str) -> str:
    if len(results) != len(curves):
        raise ParameterError(f"Got {len(results)} MESD results for {len(curves)} curves")
    return _to_csv(mesd_frame(curves, results), path)


def curve_report(curves: Sequence[PerformanceCurve], out_dir: str,
                 mesd_results: Optional[Sequence[MesdResult]] = None) -> Dict[str, str]:
    """ Writes `curves.csv` and, when MESD results are given, `mesd.csv`; returns the written paths. """
    os.makedirs(out_dir, exist_ok=True)
    paths = {'curves': _to_csv(curves_frame(curves), os.path.join(out_dir, CURVES_FILE))}
    if mesd_results is not None:
        paths['mesd'] = write_mesd(curves, mesd_results, os.path.join(out_dir, MESD_FILE))
    return paths


def _read_csv(path: str, **kwargs) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise DatasetError(f"Result file {path} does not exist")
    try:
        return pd.read_csv(path, dtype={'algorithm': str, 'subject': str}, float_precision='round_trip', **kwargs)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
        raise DatasetError(f"Cannot parse {path}: {e}") from e


def read_curves(path: str) -> List[PerformanceCurve]:
    """ Parses a curves CSV back into one curve per (algorithm, subject), in order of appearance. """
    frame = _read_csv(path)
    missing = [column for column in CURVE_COLUMNS if column not in frame.columns]
    if missing:
        raise DatasetError(f"{path} lacks columns {missing}")
    curves = []
    for (algorithm, subject), group in frame.groupby(['algorithm', 'subject'], sort=False):
        points = [CurvePoint(float(row.tau), float(row.accuracy), int(row.n_decisions))
                  for row in group.itertuples(index=False)]
        curves.append(PerformanceCurve(subject_id=subject, algorithm=algorithm, points=points))
    return curves


def read_mesd(path: str) -> pd.DataFrame:
    # keep ">50.0" as text
    return _read_csv(path, converters={'mesd': str})


def aggregate_curves(curves: Sequence[PerformanceCurve], alpha: float = 0.05, n_speakers: int = 2) -> pd.DataFrame:
    """ Mean and standard error of the accuracy across subjects, per algorithm and window length.

    `chance_level` is the significance threshold for the smallest per-subject decision count at that length.
    """
    frame = curves_frame(curves)
    rows = []
    for (algorithm, tau), group in frame.groupby(['algorithm', 'tau'], sort=False):
        accuracies = group['accuracy'].to_numpy(dtype=np.float64)
        rows.append({
            'algorithm': algorithm, 'tau': tau,
            'mean': float(np.mean(accuracies)),
            'se': standard_error(accuracies),
            'n_subjects': int(group.shape[0]),
            'n_decisions': int(group['n_decisions'].sum()),
            'chance_level': chance_level(int(group['n_decisions'].min()), alpha, n_speakers),
        })
    return pd.DataFrame.from_records(rows, columns=['algorithm', 'tau', 'mean', 'se', 'n_subjects', 'n_decisions',
                                                    'chance_level'])


def _seconds(frame: pd.DataFrame) -> np.ndarray:
    seconds = frame['mesd_seconds'].to_numpy(dtype=np.float64)
    return np.where(frame['status'].to_numpy() == UNBOUNDED, np.inf, seconds)


def censored_median(values: Sequence[float]) -> float:
    """ Median where unbounded entries are +inf, so they sort above every finite value. """
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] == 0:
        return float('nan')
    ordered = np.sort(values)
    mid = values.shape[0] // 2
    if values.shape[0] % 2 == 1:
        return float(ordered[mid])
    lo, hi = ordered[mid - 1], ordered[mid]
    return float('inf') if np.isinf(hi) else float((lo + hi) / 2)


def aggregate_mesd(frame: pd.DataFrame) -> pd.DataFrame:
    """ Median MESD per algorithm with unbounded values included as +inf, plus their count. """
    rows = []
    for algorithm, group in frame.groupby('algorithm', sort=False):
        seconds = _seconds(group)
        median = censored_median(seconds)
        bound = float(group['bound'].iloc[0])
        rows.append({
            'algorithm': algorithm,
            'median': f">{bound:.1f}" if np.isinf(median) else f"{median:.10g}",
            'median_seconds': median,
            'n_subjects': int(group.shape[0]),
            'n_censored': int(np.sum(np.isinf(seconds))),
        })
    return pd.DataFrame.from_records(rows, columns=['algorithm', 'median', 'median_seconds', 'n_subjects',
                                                    'n_censored'])


def report(results_dir: str, alpha: float = 0.05) -> Dict[str, str]:
    """ Aggregates the result tables found in `results_dir`; returns the written paths.

    Raises:
        DatasetError: if the directory holds no curves.
    """
    curves = read_curves(os.path.join(results_dir, CURVES_FILE))
    if len(curves) == 0:
        raise DatasetError(f"No curves found in {results_dir}")
    paths = {'aggregate_curves': _to_csv(aggregate_curves(curves, alpha),
                                         os.path.join(results_dir, AGGREGATE_CURVES_FILE))}
    mesd_path = os.path.join(results_dir, MESD_FILE)
    if os.path.isfile(mesd_path):
        paths['aggregate_mesd'] = _to_csv(aggregate_mesd(read_mesd(mesd_path)),
                                          os.path.join(results_dir, AGGREGATE_MESD_FILE))
    else:
        console.warning(f"No {MESD_FILE} in {results_dir}, skipping the MESD summary")
    return paths
