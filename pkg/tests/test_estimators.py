import numpy as np
import pytest
from sklearn.base import clone

from halting_nets import BettiTransformer, VoidClassifier, boundary_net, cumulative_net, punctured_net
from halting_nets.netbuilder import DyadicPoint, OffGridError


def test_params_and_clone():
    est = BettiTransformer(level=2, dimension=3)
    assert est.get_params() == {"level": 2, "dimension": 3}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


def test_transform_nets():
    out = BettiTransformer().fit_transform([cumulative_net(1, 3), boundary_net(1, 3), punctured_net(2, 3)])
    assert out.tolist() == [[1, 0, 0, 0], [1, 0, 1, 0], [1, 0, 1, 0]]
    assert out.dtype == np.int64


def test_float_clouds_are_read_exactly():
    square_ring = np.array([[x, y] for x in (0, 0.5, 1) for y in (0, 0.5, 1) if (x, y) != (0.5, 0.5)])
    est = BettiTransformer().fit([square_ring])
    assert est.n_features_in_ == 2
    assert est.transform([square_ring]).tolist() == [[1, 1, 0]]


def test_non_dyadic_value_rejected():
    with pytest.raises(OffGridError):
        BettiTransformer().fit([np.array([[0.1, 0.0]])])


def test_classifier_predict_and_score():
    X = [cumulative_net(2, 3), punctured_net(2, 3), boundary_net(1, 3)]
    y = ["Trivial", "Nontrivial", "Nontrivial"]
    clf = VoidClassifier().fit(X, y)
    assert list(clf.classes_) == ["Nontrivial", "Trivial"]
    assert clf.predict(X).tolist() == y
    assert clf.score(X, y) == 1.0
    with pytest.raises(ValueError):
        clf.score(X, ["a", "b", "c"])


def test_dimension_mismatch_and_unfitted():
    with pytest.raises(ValueError):
        BettiTransformer(dimension=2).fit([cumulative_net(1, 3)])
    with pytest.raises(Exception):
        BettiTransformer().transform([cumulative_net(1, 3)])
    with pytest.raises(ValueError):
        BettiTransformer(level=-1).fit([cumulative_net(1, 3)])


def test_dyadic_point_lists():
    pts = [DyadicPoint.from_grid(p, 1) for p in [(0, 0), (1, 0), (2, 0)]]
    assert BettiTransformer().fit_transform([pts]).tolist() == [[1, 0, 0]]


def test_module_docstring_example():
    import doctest

    import halting_nets.estimators as mod

    assert doctest.testmod(mod).failed == 0
