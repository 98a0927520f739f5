"""Estimator-style wrappers so simulations and mapping scores plug into
parameter sweeps (``get_params``/``set_params``, ``ParameterGrid``, ``clone``).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .engine import simulate
from .mapping import STAGE_GROUPS, MappingMatrix, group_mean, load_bundled_mapping, round_half_up
from .metrics import compute_metrics, summarize
from .pipeline import SchedulerConfig
from .validation import check_topology, check_trace


class ClusterSchedulerSimulator(BaseEstimator):
    """Run one scheduler configuration over a trace.

    ``fit`` simulates ``repetitions`` runs with seeds ``seed, seed+1, ...`` and
    keeps the per-run reports. ``predict`` returns per-task finish times in
    seconds, ordered by task id, for the first fitted repetition. ``score``
    reruns on ``X`` and returns the negated mean NJSL, so larger is better.
    """

    def __init__(self, task_sort="FIFO", allocation="FIRSTFIT", seed=0, repetitions=1, topology=None):
        self.task_sort = task_sort
        self.allocation = allocation
        self.seed = seed
        self.repetitions = repetitions
        self.topology = topology

    def _config(self):
        return SchedulerConfig(str(self.task_sort).upper(), str(self.allocation).upper())

    def _run(self, X):
        trace = check_trace(X)
        topology = check_topology(self.topology)
        if int(self.repetitions) < 1:
            raise ValueError("repetitions must be >= 1")
        config = self._config()
        results, reports = [], []
        for rep in range(int(self.repetitions)):
            result = simulate(trace, topology, config, self.seed + rep)
            results.append(result)
            reports.append(compute_metrics(result, trace, rep))
        return config, trace, results, reports

    def fit(self, X, y=None):
        config, trace, self.results_, self.reports_ = self._run(X)
        self.summary_ = summarize(self.reports_)
        self.config_name_ = config.name
        self.n_tasks_ = len(trace)
        return self

    def predict(self, X=None):
        check_is_fitted(self, "results_")
        records = self.results_[0].records
        return np.array([r.finish_us for r in records], dtype=np.int64) / 1e6

    def score(self, X, y=None):
        _, _, _, reports = self._run(X)
        return -summarize(reports).avg_njsl


class MappingGroupScorer(TransformerMixin, BaseEstimator):
    """Map a mapping matrix to an (n_schedulers, n_groups) array of group scores."""

    def __init__(self, groups=("J", "T", "M", "R"), rounded=True):
        self.groups = groups
        self.rounded = rounded

    def fit(self, X=None, y=None):
        matrix = self._matrix(X)
        unknown = [g for g in self.groups if g not in STAGE_GROUPS]
        if unknown:
            raise ValueError(f"unknown stage groups {unknown}")
        self.feature_names_out_ = np.array(list(self.groups), dtype=object)
        self.schedulers_ = matrix.names
        return self

    def transform(self, X=None):
        check_is_fitted(self, "feature_names_out_")
        matrix = self._matrix(X)
        rows = []
        for name in matrix.names:
            means = [group_mean(matrix, name, g) for g in self.groups]
            rows.append([round_half_up(m) if self.rounded else float(m) for m in means])
        return np.array(rows, dtype=np.int64 if self.rounded else np.float64)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_out_")
        return self.feature_names_out_

    @staticmethod
    def _matrix(X) -> MappingMatrix:
        if X is None:
            return load_bundled_mapping()
        if not isinstance(X, MappingMatrix):
            raise TypeError("expected a MappingMatrix")
        return X
