"""Unit tests for building group setups from run configurations."""

import json
import numpy as np
import pytest
from src.errors import ConfigurationError
from src.models import RunConfig
from src.oracle.moment import build_representation
from src.root_system import build_root_datum
from src.setup_builder import build_setup, load_matrices


def _as_pairs(matrices):
    return [[[[float(z.real), float(z.imag)] for z in row] for row in m] for m in matrices]


@pytest.fixture
def su2():
    """Create an su(2) root datum."""
    return build_root_datum('su(2)')


@pytest.fixture
def matrices_file(tmp_path, su2):
    """Create a JSON file with the standard su(2) matrices as [re, im] pairs."""
    _, matrices = build_representation(su2, ['standard'])
    path = tmp_path / 'rho.json'
    path.write_text(json.dumps({'matrices': _as_pairs(matrices)}), encoding='utf-8')
    return path


def test_build_setup_without_v():
    """Test a bare group setup."""
    setup = build_setup(RunConfig('su(3)', copies=3))

    assert setup.copies == 3
    assert not setup.has_v
    assert setup.rep_matrices is None


def test_build_setup_named_reps():
    """Test named representations carry weights and matrices."""
    setup = build_setup(RunConfig('su(2)', copies=1, v_reps=['standard', 'standard']))

    assert setup.v_module.dim == 4
    assert len(setup.rep_matrices) == 3
    assert setup.rep_matrices[0].shape == (4, 4)
    assert setup.v_description == 'standard + standard'


def test_build_setup_weights_and_matrices(matrices_file, su2):
    """Test weights combine with matrices read relative to the config directory."""
    config = RunConfig(
        'su(2)', copies=1,
        v_weights=[['1/2', '-1/2'], ['-1/2', '1/2']],
        v_matrices=matrices_file.name,
        base_dir=matrices_file.parent,
    )
    setup = build_setup(config)
    _, expected = build_representation(su2, ['standard'])

    assert len(setup.rep_matrices) == 3
    for got, want in zip(setup.rep_matrices, expected):
        assert np.allclose(got, want)


def test_weights_only_setup_has_no_matrices():
    """Test weights alone give a weight module without matrices."""
    setup = build_setup(RunConfig('torus(2)', copies=1, v_weights=[[1, 0], [0, 1]]))

    assert setup.v_module.dim == 2
    assert setup.rep_matrices is None
    assert setup.v_description == 'weights'


def test_matrices_need_weights(matrices_file):
    """Test V_MATRICES without V_WEIGHTS is rejected."""
    config = RunConfig('su(2)', copies=1, v_matrices=str(matrices_file))

    with pytest.raises(ConfigurationError, match="V_WEIGHTS"):
        build_setup(config)


def test_matrices_with_named_reps_rejected(matrices_file):
    """Test named representations cannot be combined with a matrix file."""
    config = RunConfig('su(2)', copies=1, v_reps=['standard'], v_matrices=str(matrices_file))

    with pytest.raises(ConfigurationError):
        build_setup(config)


def test_load_matrices_errors(tmp_path, su2):
    """Test missing files, wrong counts and bad entries raise ConfigurationError."""
    with pytest.raises(ConfigurationError):
        load_matrices(tmp_path / 'missing.json', su2)

    short = tmp_path / 'short.json'
    short.write_text(json.dumps([[[0, 1], [-1, 0]]]), encoding='utf-8')
    with pytest.raises(ConfigurationError, match="expected 3 matrices"):
        load_matrices(short, su2)

    bad = tmp_path / 'bad.json'
    bad.write_text(json.dumps([[['x']]] * 3), encoding='utf-8')
    with pytest.raises(ConfigurationError):
        load_matrices(bad, su2)


def test_non_skew_matrices_rejected(tmp_path):
    """Test matrices that are not skew-Hermitian are refused."""
    path = tmp_path / 'sym.json'
    path.write_text(json.dumps([[[1, 0], [0, 1]]] * 3), encoding='utf-8')
    config = RunConfig(
        'su(2)', copies=1, v_weights=[['1/2', '-1/2'], ['-1/2', '1/2']], v_matrices=str(path),
    )

    with pytest.raises(ConfigurationError, match="skew-Hermitian"):
        build_setup(config)


def test_moment_shift():
    """Test the central shift is checked against the group."""
    setup = build_setup(RunConfig('torus(2)', copies=1, v_weights=[[1, 0]], moment_shift=['1/2', 1]))
    assert setup.moment_shift.coords == (0.5, 1)

    with pytest.raises(ConfigurationError, match="coordinates"):
        build_setup(RunConfig('torus(2)', copies=1, v_weights=[[1, 0]], moment_shift=[1]))
    with pytest.raises(ConfigurationError, match="su"):
        build_setup(RunConfig('su(2)', copies=1, v_reps=['standard'], moment_shift=[1, -1]))


def test_bad_weights_rejected():
    """Test weights of the wrong length raise ConfigurationError."""
    with pytest.raises(ConfigurationError):
        build_setup(RunConfig('su(2)', copies=1, v_weights=[[1, 0, 0]]))


def test_weights_must_be_weyl_stable():
    """Test a single weight of su(3) is not a K-module and is rejected."""
    with pytest.raises(ConfigurationError, match="not a K-module"):
        build_setup(RunConfig('su(3)', copies=2, v_weights=[['2/3', '-1/3', '-1/3']]))


def test_weyl_orbit_weights_are_accepted():
    """Test the full orbit of a weight (the standard representation) is accepted."""
    setup = build_setup(RunConfig('su(3)', copies=2, v_weights=[
        ['2/3', '-1/3', '-1/3'], ['-1/3', '2/3', '-1/3'], ['-1/3', '-1/3', '2/3'],
    ]))

    assert setup.v_module.dim == 3
