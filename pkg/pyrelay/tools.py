import csv
import dataclasses
import math
import os

import numpy as np


def make_rng(seed, *keys):
    """
    Independent random generator for (seed, *keys)

    Parameters
    ----------
    seed : int
        Master seed

    keys : int
        Stream keys, e.g. the trial index. The stream of a key does not
        depend on how many other streams are drawn or in which order.

    Returns
    -------
    rng : numpy.random.Generator
        PCG64 generator
    """
    sequence = np.random.SeedSequence([int(seed), *(int(key) for key in keys)])
    return np.random.Generator(np.random.PCG64(sequence))


def _csv_value(value):
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def write_csv(f, header, rows):
    """
    Write a header and rows to an open text file. Floats are written with
    repr, so they read back exactly.
    """
    writer = csv.writer(f, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_value(value) for value in row])


def write_records(path, records, header=None):
    """
    Write dataclass records to a CSV file, one row per record

    Parameters
    ----------
    path : str

    records : sequence of dataclass

    header : list (str)
        Column names (default = field names)
    """
    if not records:
        raise ValueError("No records to write")

    header = header or [f.name for f in dataclasses.fields(records[0])]
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, "w", newline="") as f:
        write_csv(f, header, (dataclasses.astuple(record) for record in records))


def summary_path(path):
    """results/flow.csv -> results/flow_summary.csv"""
    stem, extension = os.path.splitext(path)
    return f"{stem}_summary{extension or '.csv'}"


def standard_error(values):
    """
    Standard error of the mean (sample standard deviation / sqrt(n)), NaN
    for fewer than 2 values
    """
    values = np.asarray(values, dtype=float)
    if len(values) < 2:
        return math.nan
    return float(np.std(values, ddof=1) / np.sqrt(len(values)))


def summarize(records, by, metrics, labels=None):
    """
    Group records and compute the mean, standard error and count of each
    metric. NaN values are excluded from the metric they belong to.

    Parameters
    ----------
    records : sequence of dataclass

    by : tuple (str)
        Grouping fields

    metrics : tuple (str)
        Numeric fields

    labels : list (str)
        Column names of the grouping fields (default = by)

    Returns
    -------
    header : list (str)
        by fields, then `<metric>_mean, <metric>_sem, <metric>_count`

    rows : list
        One row per group, groups in order of first appearance
    """
    groups = {}
    for record in records:
        key = tuple(getattr(record, field) for field in by)
        groups.setdefault(key, []).append(record)

    header = list(labels or by)
    for metric in metrics:
        header += [f"{metric}_mean", f"{metric}_sem", f"{metric}_count"]

    rows = []
    for key, members in groups.items():
        row = list(key)
        for metric in metrics:
            values = np.array([getattr(record, metric) for record in members], dtype=float)
            values = values[~np.isnan(values)]
            mean = float(np.mean(values)) if len(values) else math.nan
            row += [mean, standard_error(values), len(values)]
        rows.append(row)

    return header, rows


def write_summary(path, records, by, metrics, labels=None):
    header, rows = summarize(records, by, metrics, labels)
    with open(path, "w", newline="") as f:
        write_csv(f, header, rows)
