"""scikit-learn style estimators wrapping the functional API.

Fitted bases follow the scikit-learn convention of ``components_`` with one
basis vector per row.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_matrix
from .exceptions import InvalidInputError
from .linalg import ToleranceConfig, nullspace_basis
from .normalform import normal_form


class _BasisMixin:
    def _tolerances(self) -> ToleranceConfig:
        return ToleranceConfig(
            rank_rel_tol=self.rank_tol, zero_rel_tol=self.zero_tol, indep_rel_tol=self.indep_tol
        )

    def _check_vectors(self, X):
        check_is_fitted(self, "components_")
        X = check_matrix(X, name="X")
        dim = self.components_.shape[1]
        if X.shape[1] != dim:
            raise InvalidInputError(f"X has {X.shape[1]} features, expected {dim}")
        return X

    def transform(self, X):
        """Least-squares coordinates of the rows of ``X`` in the fitted basis."""
        X = self._check_vectors(X)
        coef, *_ = np.linalg.lstsq(self.components_.T, X.T, rcond=None)
        return coef.T

    def inverse_transform(self, C):
        check_is_fitted(self, "components_")
        C = check_matrix(C, name="C")
        if C.shape[1] != self.components_.shape[0]:
            raise InvalidInputError(f"C has {C.shape[1]} coordinates, expected {self.components_.shape[0]}")
        return C @ self.components_


class NormalFormBasis(_BasisMixin, BaseEstimator):
    """Normal form of the basis given by the columns of ``X`` (shape m x n).

    After ``fit``: ``components_`` (n x m) holds the normal-form basis vectors
    as rows, ``s_vectors_`` the normal vectors, ``keys_`` their ordering keys
    and ``result_`` the full :class:`~nfbasis.normalform.NormalFormResult`.
    """

    def __init__(self, algorithm="topdown", zero_tol=1e-9, rank_tol=1e-10, indep_tol=1e-9, allow_n1=False):
        self.algorithm = algorithm
        self.zero_tol = zero_tol
        self.rank_tol = rank_tol
        self.indep_tol = indep_tol
        self.allow_n1 = allow_n1

    def fit(self, X, y=None):
        X = check_matrix(X, name="X")
        result = normal_form(X, self._tolerances(), algorithm=self.algorithm, allow_n1=self.allow_n1)
        self.result_ = result
        self.components_ = result.columns.T.copy()
        self.s_vectors_ = result.s_vectors
        self.keys_ = list(result.keys)
        self.n_features_in_ = X.shape[1]
        return self


class KernelNormalForm(_BasisMixin, BaseEstimator):
    """Kernel of ``X`` (shape k x d) with its basis in normal form.

    ``components_`` has one kernel basis vector per row; ``transform`` returns
    coordinates of the projection onto the kernel.
    """

    def __init__(self, algorithm="topdown", zero_tol=1e-9, rank_tol=1e-10, indep_tol=1e-9):
        self.algorithm = algorithm
        self.zero_tol = zero_tol
        self.rank_tol = rank_tol
        self.indep_tol = indep_tol

    def fit(self, X, y=None):
        X = check_matrix(X, name="X")
        tol = self._tolerances()
        K = nullspace_basis(X, tol)
        self.n_features_in_ = X.shape[1]
        if K.shape[1] == 0:
            self.result_ = None
            self.components_ = np.zeros((0, X.shape[1]), dtype=K.dtype)
            return self
        self.result_ = normal_form(K, tol, algorithm=self.algorithm, allow_n1=True)
        self.components_ = self.result_.columns.T.copy()
        return self

    def transform(self, X):
        X = self._check_vectors(X)
        if self.components_.shape[0] == 0:
            return np.zeros((X.shape[0], 0), dtype=X.dtype)
        return super().transform(X)
