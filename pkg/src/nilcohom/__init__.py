"""Exact cohomology, Kuranishi deformations and extension of forms on invariant complex models."""

from .algebra import Beltrami, EndomorphismField, Form
from .deform import KuranishiFamily, invariance_scan, kuranishi_series
from .errors import HypothesisError, ModelError, ModelSyntaxError, NotSolvableError
from .extend import extend_d_closed, mild_extension_two_eq, p_kahler_extend, transverse_positivity
from .gauss import GaussRational
from .hodge import cohomology, lemma_variants
from .model import ComplexModel, catalog, catalog_names, load_model, parse_model, torus_model
from .series import Ring, Series

__version__ = "0.1.0"

__all__ = [
    "Beltrami",
    "ComplexModel",
    "EndomorphismField",
    "Form",
    "GaussRational",
    "HypothesisError",
    "KuranishiFamily",
    "ModelError",
    "ModelSyntaxError",
    "NotSolvableError",
    "Ring",
    "Series",
    "catalog",
    "catalog_names",
    "cohomology",
    "extend_d_closed",
    "invariance_scan",
    "kuranishi_series",
    "lemma_variants",
    "load_model",
    "mild_extension_two_eq",
    "p_kahler_extend",
    "parse_model",
    "torus_model",
    "transverse_positivity",
]
