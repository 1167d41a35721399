"""Trajectory datasets: ingestion, covariate scaling, and train/test splits.

A trajectory is one unit's record in the single-stage decision problem:
initial covariate vector ``s0``, binary action ``a0``, final covariate
vector ``s1``, and a scalar reward. Datasets are stored columnar (numpy
arrays) and are immutable after construction; every operation returns a
new Dataset.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigError,
    DataError,
    DegenerateCovariateError,
    DimensionError,
    EmptyDatasetError,
    ParseError,
    SchemaError,
)

__all__ = [
    "Trajectory",
    "Dataset",
    "SplitPair",
    "load_dataset",
    "save_dataset",
    "scale_dataset",
    "apply_scaling",
    "unscale_dataset",
    "split",
]


@dataclass(frozen=True)
class Trajectory:
    """One patient record: (s0, a0, s1, reward)."""

    s0: np.ndarray
    a0: int
    s1: np.ndarray
    reward: float


@dataclass(frozen=True)
class Dataset:
    """Columnar collection of trajectories sharing one covariate layout.

    Attributes
    ----------
    s0, s1 : (n, k) float arrays of initial and final covariates.
    a0 : (n,) integer array with entries in {0, 1}.
    rewards : (n,) float array, never rescaled.
    covariate_names : k labels shared by s0 and s1 columns.
    scale_factors : per-covariate divisors already applied, or None if
        the covariates are raw.
    """

    s0: np.ndarray
    a0: np.ndarray
    s1: np.ndarray
    rewards: np.ndarray
    covariate_names: tuple[str, ...]
    scale_factors: np.ndarray | None = None

    def __post_init__(self):
        # Copy so freezing the arrays never touches caller-owned buffers.
        s0 = np.atleast_2d(np.array(self.s0, dtype=float))
        s1 = np.atleast_2d(np.array(self.s1, dtype=float))
        a0 = np.array(self.a0, dtype=np.int64).ravel()
        rewards = np.array(self.rewards, dtype=float).ravel()
        if s0.shape != s1.shape:
            raise DimensionError(
                f"s0 shape {s0.shape} differs from s1 shape {s1.shape}"
            )
        n, k = s0.shape
        if n < 1:
            raise EmptyDatasetError("dataset must contain at least one trajectory")
        if k < 1:
            raise DimensionError("state dimension must be at least 1")
        if a0.shape != (n,) or rewards.shape != (n,):
            raise DimensionError("a0 and rewards must have one entry per trajectory")
        if not np.all((a0 == 0) | (a0 == 1)):
            bad = int(np.flatnonzero((a0 != 0) & (a0 != 1))[0])
            raise DataError(f"a0 must be 0 or 1; row {bad + 1} has a0={a0[bad]}")
        if not (np.all(np.isfinite(s0)) and np.all(np.isfinite(s1))
                and np.all(np.isfinite(rewards))):
            raise DataError("covariates and rewards must be finite")
        names = tuple(str(c) for c in self.covariate_names)
        if len(names) != k:
            raise DimensionError(f"expected {k} covariate names, got {len(names)}")
        factors = self.scale_factors
        if factors is not None:
            factors = np.asarray(factors, dtype=float).ravel()
            if factors.shape != (k,):
                raise DimensionError("scale_factors must have one entry per covariate")
            if not np.all(factors > 0):
                raise DataError("scale_factors must be strictly positive")
            factors.setflags(write=False)
        for arr in (s0, a0, s1, rewards):
            arr.setflags(write=False)
        object.__setattr__(self, "s0", s0)
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "s1", s1)
        object.__setattr__(self, "rewards", rewards)
        object.__setattr__(self, "covariate_names", names)
        object.__setattr__(self, "scale_factors", factors)

    @property
    def n(self) -> int:
        return self.s0.shape[0]

    @property
    def k(self) -> int:
        return self.s0.shape[1]

    @property
    def trajectories(self) -> list[Trajectory]:
        """Materialize the rows as Trajectory records."""
        return [
            Trajectory(self.s0[i], int(self.a0[i]), self.s1[i], float(self.rewards[i]))
            for i in range(self.n)
        ]

    def take(self, indices) -> Dataset:
        """New Dataset restricted to the given row indices (order kept)."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            s0=self.s0[idx],
            a0=self.a0[idx],
            s1=self.s1[idx],
            rewards=self.rewards[idx],
            covariate_names=self.covariate_names,
            scale_factors=self.scale_factors,
        )


@dataclass(frozen=True)
class SplitPair:
    """Disjoint train/test partition of one dataset, tagged with its seed."""

    train: Dataset
    test: Dataset
    seed: int


def _fmt(x: float) -> str:
    # Shortest decimal string that round-trips the exact double.
    return repr(float(x))


def _parse_header(header: list[str]) -> tuple[list[str], bool]:
    """Return (covariate names, has_reward) or raise SchemaError.

    Expected column order: s0_<name> * k, a0, s1_<name> * k, optional reward.
    The s0 and s1 suffixes must match pairwise in order.
    """
    cols = [c.strip() for c in header]
    if not cols or not cols[0].startswith("s0_"):
        raise SchemaError("header must start with s0_* columns")
    s0_names = []
    i = 0
    while i < len(cols) and cols[i].startswith("s0_"):
        s0_names.append(cols[i][3:])
        i += 1
    if i >= len(cols) or cols[i] != "a0":
        raise SchemaError("expected 'a0' column after the s0_* block")
    i += 1
    s1_names = []
    while i < len(cols) and cols[i].startswith("s1_"):
        s1_names.append(cols[i][3:])
        i += 1
    if s1_names != s0_names:
        raise SchemaError("s1_* columns must mirror the s0_* columns in order")
    has_reward = False
    if i < len(cols):
        if cols[i] != "reward" or i != len(cols) - 1:
            raise SchemaError(f"unexpected trailing column '{cols[i]}'")
        has_reward = True
        i += 1
    return s0_names, has_reward


def load_dataset(path, reward_spec: int | str | None = None) -> Dataset:
    """Read a trajectory CSV.

    Parameters
    ----------
    path : file path with header ``s0_1,...,s0_K,a0,s1_1,...,s1_K[,reward]``.
    reward_spec : where the reward comes from. An int is a 1-based s1
        column index; the string ``"reward"`` names the explicit reward
        column; None uses the reward column when present and otherwise
        fails.

    Raises
    ------
    SchemaError, ParseError, EmptyDatasetError, ConfigError
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path}: file is empty") from None
        names, has_reward = _parse_header(header)
        k = len(names)
        n_cols = 2 * k + 1 + (1 if has_reward else 0)

        if reward_spec is None:
            if not has_reward:
                raise SchemaError(
                    f"{path}: no 'reward' column and no reward_spec given"
                )
            use_column = True
            reward_idx = -1
        elif isinstance(reward_spec, str):
            if reward_spec != "reward":
                raise ConfigError(f"unknown reward column {reward_spec!r}")
            if not has_reward:
                raise SchemaError(f"{path}: header has no 'reward' column")
            use_column = True
            reward_idx = -1
        else:
            reward_idx = int(reward_spec)
            if not 1 <= reward_idx <= k:
                raise ConfigError(
                    f"reward index {reward_idx} outside [1, {k}]"
                )
            use_column = False

        s0_rows, a0_rows, s1_rows, reward_rows = [], [], [], []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != n_cols:
                raise ParseError(
                    f"{path}: row {row_no} has {len(row)} fields, expected {n_cols}"
                )
            a_cell = row[k].strip()
            if a_cell not in ("0", "1"):
                raise ParseError(
                    f"{path}: row {row_no} has a0={a_cell!r}, must be 0 or 1"
                )
            try:
                s0 = [float(v) for v in row[:k]]
                s1 = [float(v) for v in row[k + 1:2 * k + 1]]
                if use_column:
                    reward = float(row[2 * k + 1])
                else:
                    reward = s1[reward_idx - 1]
            except ValueError as exc:
                raise ParseError(f"{path}: row {row_no}: {exc}") from None
            if not all(np.isfinite(v) for v in s0 + s1 + [reward]):
                raise ParseError(
                    f"{path}: row {row_no} contains a non-finite value"
                )
            s0_rows.append(s0)
            a0_rows.append(int(a_cell))
            s1_rows.append(s1)
            reward_rows.append(reward)

    if not s0_rows:
        raise EmptyDatasetError(f"{path}: no data rows")
    return Dataset(
        s0=np.array(s0_rows),
        a0=np.array(a0_rows),
        s1=np.array(s1_rows),
        rewards=np.array(reward_rows),
        covariate_names=tuple(names),
    )


def save_dataset(d: Dataset, path) -> None:
    """Write a Dataset as trajectory CSV (always with a reward column).

    Floats are printed at full round-trip precision, so load(save(d))
    reproduces the values bit for bit.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = (
            [f"s0_{c}" for c in d.covariate_names]
            + ["a0"]
            + [f"s1_{c}" for c in d.covariate_names]
            + ["reward"]
        )
        writer.writerow(header)
        for i in range(d.n):
            writer.writerow(
                [_fmt(v) for v in d.s0[i]]
                + [str(int(d.a0[i]))]
                + [_fmt(v) for v in d.s1[i]]
                + [_fmt(d.rewards[i])]
            )


def scale_dataset(d: Dataset) -> Dataset:
    """Divide every covariate by its s0 sample standard deviation.

    The factors (divisor n-1) are computed from this dataset's s0 columns
    and recorded on the result; s1 columns are divided by the same
    factors, rewards are left untouched.

    Raises
    ------
    DegenerateCovariateError : if some covariate has zero variance.
    DataError : if n < 2 (sample SD undefined).
    """
    if d.n < 2:
        raise DataError("scaling needs at least 2 rows to estimate a sample SD")
    sd = np.std(d.s0, axis=0, ddof=1)
    if np.any(sd <= 0):
        bad = int(np.flatnonzero(sd <= 0)[0])
        raise DegenerateCovariateError(
            f"covariate {d.covariate_names[bad]!r} has zero sample variance"
        )
    return apply_scaling(d, sd)


def apply_scaling(d: Dataset, factors) -> Dataset:
    """Divide covariates by the supplied per-covariate factors.

    Used to scale a test set with the factors estimated on the train set.
    """
    factors = np.asarray(factors, dtype=float).ravel()
    if factors.shape != (d.k,):
        raise DimensionError(
            f"expected {d.k} scale factors, got {factors.shape[0]}"
        )
    if not np.all(factors > 0):
        raise DataError("scale factors must be strictly positive")
    return Dataset(
        s0=d.s0 / factors,
        a0=d.a0,
        s1=d.s1 / factors,
        rewards=d.rewards,
        covariate_names=d.covariate_names,
        scale_factors=factors,
    )


def unscale_dataset(d: Dataset) -> Dataset:
    """Multiply covariates by the recorded factors, recovering raw units."""
    if d.scale_factors is None:
        raise DataError("dataset has no recorded scale factors")
    return Dataset(
        s0=d.s0 * d.scale_factors,
        a0=d.a0,
        s1=d.s1 * d.scale_factors,
        rewards=d.rewards,
        covariate_names=d.covariate_names,
        scale_factors=None,
    )


def split(d: Dataset, fraction: float, seed: int) -> SplitPair:
    """Random train/test partition, deterministic given the seed.

    ``round(fraction * n)`` rows go to train; both sides must be nonempty.
    """
    if not 0.0 < float(fraction) < 1.0:
        raise ConfigError(f"split fraction must be in (0, 1), got {fraction}")
    if d.n < 2:
        raise DataError("need at least 2 rows to split")
    n_train = int(round(float(fraction) * d.n))
    if n_train == 0 or n_train == d.n:
        raise ConfigError(
            f"fraction {fraction} leaves an empty side for n={d.n}"
        )
    perm = np.random.default_rng(seed).permutation(d.n)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    return SplitPair(train=d.take(train_idx), test=d.take(test_idx), seed=int(seed))
