"""scikit-learn style wrapper: fit a monic MLDE to solutions, then transform
series into their residuals."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .mlde import apply_mlde, fit_mlde, frobenius_solve, indicial_poly
from .validation import check_series_list, check_weight


class MonicMLDE(BaseEstimator):
    """Monic MLDE of a fixed weight fitted from a list of solution series.

    Parameters
    ----------
    weight : rational
        Weight k of the Serre operators.
    margin : int
        Extra coefficient rows beyond the number of unknowns used by the solve.
    """

    def __init__(self, weight=0, margin=20):
        self.weight = weight
        self.margin = margin

    def fit(self, X, y=None):
        X = check_series_list(X)
        k = check_weight(self.weight)
        self.mlde_, self.report_ = fit_mlde(k, X, len(X), margin=self.margin,
                                            return_report=True)
        self.indicial_ = indicial_poly(self.mlde_)
        self.roots_ = self.indicial_.roots()
        self.n_solutions_ = len(X)
        return self

    def _check_fitted(self):
        if not hasattr(self, "mlde_"):
            raise NotFittedError("MonicMLDE is not fitted yet; call fit first")

    def transform(self, X):
        """Residual series of each input under the fitted equation."""
        self._check_fitted()
        return [apply_mlde(self.mlde_, f) for f in check_series_list(X)]

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    def score(self, X, y=None) -> float:
        """Fraction of inputs annihilated to their available precision."""
        res = self.transform(X)
        return sum(r.is_zero() for r in res) / len(res)

    def solve(self, prec: int, free=None):
        """Frobenius solutions at every indicial root, in root order."""
        self._check_fitted()
        return [frobenius_solve(self.mlde_, lam, prec, free=(free or {}).get(lam))
                for lam in self.roots_]
