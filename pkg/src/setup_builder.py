"""Turn a RunConfig into a GroupSetup: group, V (weights and matrices) and the moment shift."""

import json
import logging
from pathlib import Path
from typing import List, Optional

import numpy as np

from src.errors import ConfigurationError
from src.models import FRAME_DUAL, GroupSetup, RationalVector, RootDatum, RunConfig, WeightedModule
from src.oracle.moment import build_representation, k_basis
from src.root_system import build_root_datum, is_weyl_stable

logger = logging.getLogger(__name__)


def _entry(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigurationError(f"complex entries are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(float(value))


def load_matrices(path: Path, datum: RootDatum) -> List[np.ndarray]:
    """
    Read rho(X_a) for the orthonormal basis of k from JSON.

    The file holds {"matrices": [...]} or a bare list, one square matrix per
    basis element; entries are numbers or [re, im] pairs.

    Raises:
        ConfigurationError: If the file is missing, malformed or has the wrong count
    """
    try:
        data = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"cannot read representation matrices {path}: {e}")
    if isinstance(data, dict):
        data = data.get('matrices')
    if not isinstance(data, list):
        raise ConfigurationError(f"{path}: expected a list of matrices")
    expected = len(k_basis(datum))
    if len(data) != expected:
        raise ConfigurationError(f"{path}: expected {expected} matrices (dim k), got {len(data)}")
    try:
        return [np.array([[_entry(x) for x in row] for row in matrix], dtype=complex) for matrix in data]
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{path}: malformed matrix entry: {e}")


def build_setup(config: RunConfig) -> GroupSetup:
    """
    Build the group setup a run configuration describes.

    Raises:
        ConfigurationError: For unsupported groups, malformed V or matrices given without weights
    """
    datum = build_root_datum(config.group_kind, config.form_scales)
    module: Optional[WeightedModule] = None
    matrices = None
    description = None

    if config.v_reps:
        if config.v_matrices:
            raise ConfigurationError("V_MATRICES cannot be combined with named representations")
        module, matrices = build_representation(datum, config.v_reps)
        description = ' + '.join(config.v_reps)
    elif config.v_weights:
        try:
            weights = [datum.vector(row, FRAME_DUAL) for row in config.v_weights]
        except ValueError as e:
            raise ConfigurationError(f"V weights: {e}")
        module = WeightedModule.from_list(weights)
        if not is_weyl_stable(datum, module):
            raise ConfigurationError(
                "V weights are not a K-module: the multiset must be stable under the Weyl group"
            )
        description = 'weights'
        if config.v_matrices:
            matrices = load_matrices(config.resolve(config.v_matrices), datum)
            description = f"weights + matrices from {config.v_matrices}"
    elif config.v_matrices:
        raise ConfigurationError("V_MATRICES needs V_WEIGHTS listing the weight of each basis vector")

    shift = None
    if config.moment_shift is not None:
        if len(config.moment_shift) != datum.ambient_dim:
            raise ConfigurationError(f"moment shift needs {datum.ambient_dim} coordinates")
        shift = RationalVector(config.moment_shift, FRAME_DUAL)

    setup = GroupSetup(datum, config.copies, module, matrices, shift, description)
    logger.info(f"Built {setup!r} ({description or 'no V'})")
    return setup
