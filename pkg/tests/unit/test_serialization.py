"""Unit tests for polytope and point JSON handling."""

import json
import pytest
from fractions import Fraction
from src.errors import ConfigurationError, DomainError
from src.models import GroupSetup
from src.ressayre import generate_inequalities
from src.root_system import build_root_datum
from src.serialization import (
    dumps,
    has_floats,
    point_from_dict,
    polytope_from_dict,
    polytope_from_json,
    polytope_to_json,
    read_point,
    read_polytope,
    write_text,
)


@pytest.fixture
def triangle():
    """Create the generated su(2) x su(2) polytope."""
    return generate_inequalities(GroupSetup(build_root_datum('su(2)'), 2))


def test_dumps_is_stable():
    """Test keys are sorted and the text ends with a newline."""
    assert dumps({'b': 1, 'a': [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_polytope_json_layout(triangle):
    """Test the JSON carries group, fingerprint, constraints and provenance."""
    data = json.loads(polytope_to_json(triangle))

    assert data['copies'] == 2
    assert data['mode'] == 'ressayre'
    assert data['fingerprint'] == triangle.fingerprint
    assert len(data['inequalities']) == 3
    provenance = data['inequalities'][0]['provenance'][0]
    assert provenance['certificates']['schubertN'] == 1
    assert provenance['classification'] == 'ressayre'


def test_polytope_reload_is_identical(triangle):
    """Test reading the JSON back reproduces the same text."""
    text = polytope_to_json(triangle)
    reloaded = polytope_from_json(text)

    assert polytope_to_json(reloaded) == text
    assert [i.key for i in reloaded.inequalities] == [i.key for i in triangle.inequalities]


def test_polytope_from_malformed_input():
    """Test broken documents raise ConfigurationError."""
    with pytest.raises(ConfigurationError):
        polytope_from_json('not json')
    with pytest.raises(ConfigurationError):
        polytope_from_dict({'group': {'group': 'su(2)'}})


def test_read_and_write_polytope(tmp_path, triangle):
    """Test writing creates parent directories and reading restores the polytope."""
    path = tmp_path / 'out' / 'su2.json'
    write_text(path, polytope_to_json(triangle))

    assert read_polytope(path).fingerprint == triangle.fingerprint
    with pytest.raises(ConfigurationError):
        read_polytope(tmp_path / 'missing.json')


def test_point_from_dict():
    """Test exact entries become fractions and floats stay floats."""
    xi_tilde, xi = point_from_dict({'xi_tilde': [[1, '-1'], ['1/2', '-1/2']], 'xi': [0.5, -0.5]})

    assert xi_tilde == [[1, -1], [Fraction(1, 2), Fraction(-1, 2)]]
    assert isinstance(xi_tilde[1][0], Fraction)
    assert isinstance(xi[0], float)
    assert has_floats((xi_tilde, xi))
    assert not has_floats((xi_tilde, [1, -1]))


@pytest.mark.parametrize('data', [
    {'xi': [1, -1]},
    {'xi_tilde': [[1, -1]]},
    {'xi_tilde': [['a', -1]], 'xi': [1, -1]},
    [1, 2],
])
def test_point_from_dict_rejects(data):
    """Test missing fields and unreadable entries raise DomainError."""
    with pytest.raises(DomainError):
        point_from_dict(data)


def test_read_point(tmp_path):
    """Test points are read from JSON files."""
    path = tmp_path / 'point.json'
    path.write_text(json.dumps({'xi_tilde': [[1, -1], [1, -1]], 'xi': [2, -2]}), encoding='utf-8')

    assert read_point(path) == ([[1, -1], [1, -1]], [2, -2])
    with pytest.raises(ConfigurationError):
        read_point(tmp_path / 'missing.json')
