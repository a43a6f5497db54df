"""scikit-learn style wrappers: each sample is a whole point cloud.

>>> from halting_nets import BettiTransformer, cumulative_net, boundary_net
>>> BettiTransformer().fit_transform([cumulative_net(1, 3), boundary_net(1, 3)])
array([[1, 0, 0, 0],
       [1, 0, 1, 0]])
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cubical import build_cubical
from .homology import NONTRIVIAL, TRIVIAL, betti, verdict_from_betti
from .validation import check_dimension, check_level, check_point_cloud


class _CloudEstimator(BaseEstimator):
    def __init__(self, level=None, dimension=None):
        self.level = level
        self.dimension = dimension

    def _validate_params_(self):
        if self.level is not None:
            check_level(self.level)
        if self.dimension is not None:
            check_dimension(self.dimension)

    def _betti_of(self, cloud):
        coords, level, D = check_point_cloud(cloud, self.level, self.dimension_)
        return betti(build_cubical(coords, level, D)), level

    def fit(self, X, y=None):
        self._validate_params_()
        X = list(X)
        D = self.dimension
        for cloud in X:
            _, _, D = check_point_cloud(cloud, self.level, D)
        if D is None:
            raise ValueError("cannot infer the dimension from an empty collection")
        self.dimension_ = D
        self.n_features_in_ = D
        return self


class BettiTransformer(TransformerMixin, _CloudEstimator):
    """Maps each point cloud to its GF(2) Betti vector ``(b_0, ..., b_D)``.

    ``level`` fixes the grid resolution of the cubical complex; by default
    each cloud uses the coarsest grid holding all its points.
    """

    def transform(self, X):
        check_is_fitted(self, "dimension_")
        rows = [self._betti_of(cloud)[0].betti for cloud in X]
        return np.asarray(rows, dtype=np.int64).reshape(-1, self.dimension_ + 1)


class VoidClassifier(ClassifierMixin, _CloudEstimator):
    """Labels each point cloud Trivial or Nontrivial by its (D-1)-th Betti number."""

    def fit(self, X, y=None):
        super().fit(X, y)
        self.classes_ = np.array([NONTRIVIAL, TRIVIAL])
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        out = []
        for cloud in X:
            vec, level = self._betti_of(cloud)
            out.append(verdict_from_betti(vec, level).verdict)
        return np.asarray(out, dtype=object)

    def score(self, X, y, sample_weight=None):
        y = np.asarray(y, dtype=object)
        if not set(y.tolist()) <= {TRIVIAL, NONTRIVIAL}:
            raise ValueError("labels must be 'Trivial' or 'Nontrivial'")
        return super().score(X, y, sample_weight)
