"""Sign alpha-stable random projections and 0-bit consistent weighted sampling."""

from .cws import CwsConfig, CwsSketch, cws_corpus, cws_sample, cws_sketch, cws_sketch_cfg, encode_cws
from .dataset_io import LabeledDataset, l1_normalize, parse_dataset, write_features
from .estimator import KernelMatrix, collision_fraction, kernel_matrix
from .exceptions import ConfigMismatchError, DatasetFormatError, NoClosedFormError
from .kernels import (
    KernelValue,
    chi2_kernel,
    collision_law,
    minmax_kernel,
    normalized_minmax,
    resemblance,
    rho2,
)
from .keyed_rand import RandKey
from .sign_projection import SignSketch, SketchConfig, encode_sign, project_sign, sketch_corpus
from .sparse import EncodedFeatures, SparseVector
from .stable import empirical_cf, sample_stable
from .transformers import SignStableRandomProjection, ZeroBitCWS

__version__ = "0.1.0"
