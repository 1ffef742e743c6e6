"""Essential-oil property prediction from GC-MS composition."""

from ._core import (
    DegenerateLabels,
    Fingerprint,
    FingerprintError,
    SmilesError,
    auc,
    ecfp,
    macro_auc,
    normalize_adjacency,
    parse_smiles,
    roc_points,
    run_cli,
    split_kfold,
    tanimoto,
)

__all__ = [
    "DegenerateLabels",
    "Fingerprint",
    "FingerprintError",
    "SmilesError",
    "auc",
    "ecfp",
    "macro_auc",
    "normalize_adjacency",
    "parse_smiles",
    "roc_points",
    "run_cli",
    "split_kfold",
    "tanimoto",
]
