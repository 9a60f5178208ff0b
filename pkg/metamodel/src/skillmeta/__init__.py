"""Surrogate-model introspection over skill-policy simulation summaries."""

from .collinearity import adj_gvif
from .crossval import CvReport, FittedCv, crossval_fit
from .dataset import TARGETS, build_meta_dataset, target_features
from .encoding import EncodedMatrix, encode_features
from .importance import ImportanceEntry, permutation_importance
from .shap_attrib import ShapSummary, shap_summary

__version__ = "0.1.0"

__all__ = [
    "adj_gvif",
    "CvReport",
    "FittedCv",
    "crossval_fit",
    "TARGETS",
    "build_meta_dataset",
    "target_features",
    "EncodedMatrix",
    "encode_features",
    "ImportanceEntry",
    "permutation_importance",
    "ShapSummary",
    "shap_summary",
]
