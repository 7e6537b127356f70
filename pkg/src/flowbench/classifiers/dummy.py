"""Majority-class baseline."""

from __future__ import annotations

import numpy as np

from flowbench.classifiers.base import Classifier


class DummyModel(Classifier):
    """Always predicts the most frequent training class (tie: lowest code).

    Scores are the training class frequencies, repeated for every row.
    """

    name = "dummy"

    def __init__(self):
        super().__init__()
        self.prior_: np.ndarray | None = None

    def _fit(self, X, codes):
        counts = np.bincount(codes, minlength=self.classes_.size)
        self.prior_ = counts / codes.size

    def _scores(self, X):
        return np.tile(self.prior_, (X.shape[0], 1))

    def _state(self):
        return {"prior": self.prior_.tolist()}

    def _load_state(self, state):
        self.prior_ = np.asarray(state["prior"], dtype=np.float64)
