import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import ParameterGrid

from dcsched.estimators import ClusterSchedulerSimulator, MappingGroupScorer
from dcsched.mapping import load_bundled_mapping
from dcsched.workload import parse_trace

from published_tables import GROUPS

TRACE = parse_trace("0 0 4 1 0 -1\n1 0 2 2 0 0\n2 1 1 1 1 -1\n3 1 3 4 1 -1\n4 2 2 1 2 -1\n")


def test_params_round_trip():
    est = ClusterSchedulerSimulator(task_sort="SRTF", allocation="BESTFIT", seed=3)
    params = est.get_params()
    assert params["task_sort"] == "SRTF" and params["seed"] == 3
    copy = clone(est)
    assert copy.get_params() == params
    est.set_params(allocation="WORSTFIT")
    assert est.get_params()["allocation"] == "WORSTFIT"


def test_fit_predict():
    est = ClusterSchedulerSimulator(repetitions=2).fit(TRACE)
    assert est.config_name_ == "FIFO-FIRSTFIT"
    assert len(est.reports_) == 2 and est.summary_.repetitions == 2
    finish = est.predict()
    assert finish.shape == (5,)
    assert np.all(finish > 0)


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        ClusterSchedulerSimulator().predict()


def test_score_is_negative_njsl_and_does_not_refit():
    est = ClusterSchedulerSimulator()
    assert not hasattr(est, "results_")
    score = est.score(TRACE)
    assert score <= -1.0
    assert not hasattr(est, "results_")


def test_parameter_grid_sweep():
    grid = ParameterGrid({"task_sort": ["FIFO", "SRTF", "RANDOM"], "allocation": ["BESTFIT", "WORSTFIT"]})
    names = set()
    for params in grid:
        est = ClusterSchedulerSimulator(**params).fit(TRACE)
        names.add(est.config_name_)
        assert est.summary_.avg_njsl >= 1.0
    assert len(names) == 6


def test_accepts_text_and_topology_dict():
    text = "0 0 1 1 0 -1\n"
    topo = {"clusters": [{"name": "x", "machines": [{"cpus": [2]}]}]}
    est = ClusterSchedulerSimulator(topology=topo).fit(text)
    assert est.predict().tolist() == [1.0]


def test_invalid_repetitions():
    with pytest.raises(ValueError):
        ClusterSchedulerSimulator(repetitions=0).fit(TRACE)


def test_group_scorer_matches_published():
    scorer = MappingGroupScorer()
    scores = scorer.fit_transform(load_bundled_mapping())
    assert scores.shape == (14, 4)
    expected = np.array([row[1:] for row in GROUPS.values()])
    assert np.abs(scores - expected).max() <= 1
    assert scorer.get_feature_names_out().tolist() == ["J", "T", "M", "R"]
    assert scorer.schedulers_[0] == "Condor"


def test_group_scorer_options():
    raw = MappingGroupScorer(groups=("M",), rounded=False).fit_transform(None)
    assert raw.dtype == np.float64
    assert raw[0, 0] == pytest.approx(200 / 7)
    with pytest.raises(ValueError):
        MappingGroupScorer(groups=("Z",)).fit()
    with pytest.raises(NotFittedError):
        MappingGroupScorer().transform(None)
