import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from amgrad import (
    AdaptiveMultiGradient,
    InputError,
    MultiTaskLogisticRegression,
    PreferenceAdaptiveMultiGradient,
    make_ex1,
    make_ex3,
    trig_preferences,
)
from amgrad.benchmarks import _synthetic_dataset

from conftest import distance_to_segment


class TestAdaptiveMultiGradient:
    def test_params_and_clone(self):
        est = AdaptiveMultiGradient(problem=make_ex1(), sigma=0.1, max_iter=50)
        params = est.get_params()
        assert params["sigma"] == 0.1 and params["max_iter"] == 50
        twin = clone(est)
        assert twin.get_params()["sigma"] == 0.1
        twin.set_params(kappa=0.5)
        assert twin.kappa == 0.5 and est.kappa == 0.95

    def test_fit_attributes(self):
        X = np.random.default_rng(0).uniform(-0.5, 0.5, (5, 6))
        est = AdaptiveMultiGradient(problem=make_ex3(6), max_iter=3000).fit(X)
        assert est.pareto_points_.shape == (5, 6)
        assert est.objectives_.shape == (5, 2)
        assert est.n_iter_.shape == (5,)
        assert set(est.terminations_) == {"stationary"}
        for x in est.pareto_points_:
            assert distance_to_segment(x, 6) <= 1e-3

    def test_transform_matches_fit(self):
        X = np.random.default_rng(1).uniform(0, 4.5, (4, 2))
        est = AdaptiveMultiGradient(problem=make_ex1())
        np.testing.assert_array_equal(est.fit_transform(X), est.transform(X))

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            AdaptiveMultiGradient(problem=make_ex1()).transform(np.ones((1, 2)))

    def test_validation(self):
        with pytest.raises(InputError):
            AdaptiveMultiGradient().fit(np.ones((2, 2)))
        with pytest.raises(InputError):
            AdaptiveMultiGradient(problem=make_ex1()).fit(np.ones((2, 3)))
        with pytest.raises(InputError):
            AdaptiveMultiGradient(problem=make_ex1(), sigma=-1.0).fit(np.ones((2, 2)))


class TestPreferenceEstimator:
    def test_default_starts(self):
        est = PreferenceAdaptiveMultiGradient(problem=make_ex1(), n_preferences=4, max_iter=200).fit()
        assert est.objectives_.shape == (4, 2)

    def test_explicit_preferences(self):
        est = PreferenceAdaptiveMultiGradient(problem=make_ex1(), preferences=[[1.0, 0.0], [0.0, 1.0]])
        est.fit(np.array([[2.0, 2.0], [2.0, 2.0]]))
        assert len(est.terminations_) == 2

    def test_preference_set_instance(self):
        prefs = trig_preferences(3)
        est = PreferenceAdaptiveMultiGradient(problem=make_ex1(), preferences=prefs, max_iter=50)
        assert est._preferences() is prefs


@pytest.fixture(scope="module")
def data():
    return _synthetic_dataset(0, 400, 5, 0.05)


class TestMultiTaskLogistic:
    def test_fit_predict(self, data):
        X, Y = data
        clf = MultiTaskLogisticRegression(n_preferences=4, max_iter=300).fit(X, Y)
        assert clf.front_coef_.shape == (4, 5)
        assert clf.coef_.shape == (1, 5)
        proba = clf.predict_proba(X)
        assert proba.shape == (400, 2)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0)
        pred = clf.predict(X)
        assert set(np.unique(pred)) <= {0, 1}
        # a shared model beats chance on at least one task
        acc = (pred[:, None] == Y).mean(axis=0)
        assert acc.max() > 0.6

    def test_selection_index(self, data):
        X, Y = data
        clf = MultiTaskLogisticRegression(n_preferences=3, selection=0, max_iter=100).fit(X, Y)
        assert clf.selected_ == 0

    def test_no_intercept(self, data):
        X, Y = data
        clf = MultiTaskLogisticRegression(n_preferences=2, fit_intercept=False, max_iter=50).fit(X, Y)
        assert np.all(clf.front_intercept_ == 0.0)

    def test_bad_labels(self, data):
        X, Y = data
        with pytest.raises(InputError):
            MultiTaskLogisticRegression().fit(X, Y * 2)
        with pytest.raises(InputError):
            MultiTaskLogisticRegression().fit(X, Y[:10])

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            MultiTaskLogisticRegression().predict(np.ones((1, 2)))
