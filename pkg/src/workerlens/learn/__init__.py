"""From-scratch classifiers and the cross-validation harness."""

from .boost import AdaBoost, DegenerateWeakLearner
from .evaluate import (
    ClassTooSmall,
    EvalReport,
    ModelSpec,
    UnlabeledMatrix,
    build_model,
    confusion_matrix,
    evaluate,
    metrics_from_confusion,
    model_from_doc,
    stratified_kfold,
)
from .forest import RandomForest, UntrainedModel
from .svc import SVC, NonConvergence
from .tree import DecisionTree, EmptyDataset

__all__ = [
    "AdaBoost", "DegenerateWeakLearner", "ClassTooSmall", "EvalReport",
    "ModelSpec", "UnlabeledMatrix", "build_model", "confusion_matrix",
    "evaluate", "metrics_from_confusion", "model_from_doc", "stratified_kfold",
    "RandomForest", "UntrainedModel", "SVC", "NonConvergence",
    "DecisionTree", "EmptyDataset",
]
