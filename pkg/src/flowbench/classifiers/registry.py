"""Model registry: stable snake_case names to seeded default-parameter factories."""

from __future__ import annotations

from typing import Callable

from flowbench.classifiers.base import Classifier
from flowbench.classifiers.bayes import BernoulliNBModel, GaussianNBModel
from flowbench.classifiers.dummy import DummyModel
from flowbench.classifiers.ensemble import (
    BaggingModel,
    ExtraTreesModel,
    RandomForestModel,
)
from flowbench.classifiers.linear import (
    LinearSVMModel,
    LogisticRegressionModel,
    PerceptronModel,
    RidgeModel,
)
from flowbench.classifiers.neighbors import KNNModel, NearestCentroidModel
from flowbench.classifiers.tree import DecisionTreeModel, ExtraTreeModel

MODEL_FACTORIES: dict[str, Callable[[int], Classifier]] = {
    "decision_tree": lambda seed: DecisionTreeModel(),
    "extra_tree": lambda seed: ExtraTreeModel(seed=seed),
    "bagging": lambda seed: BaggingModel(seed=seed),
    "random_forest": lambda seed: RandomForestModel(seed=seed),
    "extra_trees": lambda seed: ExtraTreesModel(seed=seed),
    "knn": lambda seed: KNNModel(),
    "gaussian_nb": lambda seed: GaussianNBModel(),
    "bernoulli_nb": lambda seed: BernoulliNBModel(),
    "nearest_centroid": lambda seed: NearestCentroidModel(),
    "ridge": lambda seed: RidgeModel(),
    "linear_svm_sgd": lambda seed: LinearSVMModel(seed=seed),
    "logistic_regression": lambda seed: LogisticRegressionModel(seed=seed),
    "perceptron": lambda seed: PerceptronModel(seed=seed),
    "dummy": lambda seed: DummyModel(),
}

MODEL_NAMES = list(MODEL_FACTORIES)

MODEL_CLASSES: dict[str, type[Classifier]] = {
    cls.name: cls
    for cls in (
        DecisionTreeModel,
        ExtraTreeModel,
        BaggingModel,
        RandomForestModel,
        ExtraTreesModel,
        KNNModel,
        GaussianNBModel,
        BernoulliNBModel,
        NearestCentroidModel,
        RidgeModel,
        LinearSVMModel,
        LogisticRegressionModel,
        PerceptronModel,
        DummyModel,
    )
}


def make_model(name: str, seed: int = 0) -> Classifier:
    """Instantiate a portfolio model by registry name with default parameters."""
    try:
        factory = MODEL_FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; known: {', '.join(MODEL_NAMES)}") from None
    return factory(seed)
