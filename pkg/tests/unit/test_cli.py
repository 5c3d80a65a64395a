"""Unit tests for the command-line tool."""

import json
import pytest
from src.admissible import U_REFUSAL
from src.cli import main, parse_class
from src.errors import ConfigurationError
from src.models import Inequality, RationalVector
from src.serialization import polytope_from_json, polytope_to_json

SU2_PAIR = """
[group]
kind = su(2)
copies = 2

[run]
seed = 5
trials = 50
"""


@pytest.fixture
def workdir(tmp_path):
    """Create a directory holding the su(2) x su(2) configuration."""
    (tmp_path / 'su2.conf').write_text(SU2_PAIR, encoding='utf-8')
    return tmp_path


@pytest.fixture
def generated(workdir, capsys):
    """Create the su(2) x su(2) polytope file through the CLI."""
    out = workdir / 'su2.json'
    code = main([
        'gen', '--config', str(workdir / 'su2.conf'), '--out', str(out),
        '--cache-dir', str(workdir / 'cache'),
    ])
    capsys.readouterr()
    assert code == 0
    return out


def _write(path, text):
    path.write_text(text, encoding='utf-8')
    return path


def test_parse_class():
    """Test class arguments become service entries."""
    assert parse_class('x_gamma') == 'x_gamma'
    assert parse_class('coset:2,1') == {'coset': [[2, 1]]}
    assert parse_class('schubert:2,1/1,3,2') == {'schubert': [[2, 1], [1, 3, 2]]}
    with pytest.raises(ConfigurationError):
        parse_class('orbit:1,2')
    with pytest.raises(ConfigurationError):
        parse_class('coset:a,b')


def test_gen_writes_polytope(generated):
    """Test gen writes the three triangle inequalities."""
    polytope = polytope_from_json(generated.read_text(encoding='utf-8'))

    assert len(polytope.inequalities) == 3


def test_gen_to_stdout_matches_cache(workdir, generated, capsys):
    """Test a cached regeneration prints byte-identical JSON."""
    code = main([
        'gen', '--config', str(workdir / 'su2.conf'), '--cache-dir', str(workdir / 'cache'),
    ])

    assert code == 0
    assert capsys.readouterr().out == generated.read_text(encoding='utf-8')


def test_gen_is_thread_independent(workdir, capsys):
    """Test 1 and 3 workers print the same polytope."""
    outputs = []
    for threads in ('1', '3'):
        code = main(['gen', '--config', str(workdir / 'su2.conf'), '--no-cache', '--threads', threads])
        assert code == 0
        outputs.append(capsys.readouterr().out)

    assert outputs[0] == outputs[1]


def test_admissible_lists_elements(workdir, capsys):
    """Test admissible prints the fingerprint and the two directions."""
    code = main(['admissible', '--config', str(workdir / 'su2.conf')])
    data = json.loads(capsys.readouterr().out)

    assert code == 0
    assert [e['gamma'] for e in data['admissible']] == [['1', '-1'], ['-1', '1']]


def test_admissible_empty(tmp_path, capsys):
    """Test s = 1 without V reports an empty set and exits 0."""
    config = _write(tmp_path / 'one.conf', "[group]\nkind = su(3)\ncopies = 1\n")

    code = main(['admissible', '--config', str(config)])

    assert code == 0
    assert capsys.readouterr().out.strip() == "empty: no admissible elements"


def test_gen_refuses_u_factor(tmp_path, capsys):
    """Test u(2) exits 3 with the refusal reason on stderr."""
    config = _write(tmp_path / 'u2.conf', "[group]\nkind = u(2)\ncopies = 2\n")

    code = main(['gen', '--config', str(config), '--no-cache'])

    assert code == 3
    assert U_REFUSAL in capsys.readouterr().err


def test_bad_config_exits_2(tmp_path, capsys):
    """Test unknown keys are usage errors."""
    config = _write(tmp_path / 'bad.conf', "[group]\nkind = su(2)\ncolour = blue\n")

    assert main(['gen', '--config', str(config), '--no-cache']) == 2
    assert 'unknown configuration keys' in capsys.readouterr().err


def test_missing_subcommand_exits_2(capsys):
    """Test argparse errors map to exit code 2."""
    assert main([]) == 2


def test_check_member_and_outside(workdir, generated, capsys):
    """Test check exits 0 inside and 1 outside."""
    inside = _write(workdir / 'in.json', json.dumps({'xi_tilde': [[1, -1], [1, -1]], 'xi': [2, -2]}))
    outside = _write(workdir / 'out.json', json.dumps({'xi_tilde': [[1, -1], [1, -1]], 'xi': [3, -3]}))

    assert main(['check', '--polytope', str(generated), '--point', str(inside)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['member']
    assert len(result['tight']) == 1

    assert main(['check', '--polytope', str(generated), '--point', str(outside)]) == 1
    result = json.loads(capsys.readouterr().out)
    assert not result['member']
    assert result['violated'][0]['value'] == '-2'


def test_check_non_dominant_exits_2(workdir, generated, capsys):
    """Test a non-dominant point is a domain error."""
    point = _write(workdir / 'bad.json', json.dumps({'xi_tilde': [[-1, 1], [1, -1]], 'xi': [0, 0]}))

    assert main(['check', '--polytope', str(generated), '--point', str(point)]) == 2
    assert 'not dominant' in capsys.readouterr().err


def test_verify_passes(workdir, generated, capsys):
    """Test verify exits 0 and prints a passing report."""
    code = main(['verify', '--config', str(workdir / 'su2.conf'), '--polytope', str(generated)])
    report = json.loads(capsys.readouterr().out)

    assert code == 0
    assert report['pass']
    assert report['trials'] == 50
    assert report['seed'] == 5


def test_verify_zero_samples(workdir, generated, capsys):
    """Test 0 samples is a vacuous pass."""
    code = main([
        'verify', '--config', str(workdir / 'su2.conf'), '--polytope', str(generated), '--samples', '0',
    ])

    assert code == 0
    assert json.loads(capsys.readouterr().out)['trials'] == 0


def test_verify_catches_injected_fault(workdir, generated, capsys):
    """Test a polytope with the false inequality a >= b fails verification."""
    polytope = polytope_from_json(generated.read_text(encoding='utf-8'))
    wrong = Inequality([RationalVector([1, -1]), RationalVector([-1, 1])], RationalVector([0, 0]))
    faulty = _write(
        workdir / 'faulty.json',
        polytope_to_json(polytope.with_inequalities(list(polytope.inequalities) + [wrong])),
    )

    code = main([
        'verify', '--config', str(workdir / 'su2.conf'), '--polytope', str(faulty), '--samples', '200',
    ])

    assert code == 1
    assert not json.loads(capsys.readouterr().out)['pass']


def test_verify_writes_report(workdir, generated, capsys):
    """Test --out writes the report instead of printing it."""
    out = workdir / 'reports' / 'su2.json'

    code = main([
        'verify', '--config', str(workdir / 'su2.conf'), '--polytope', str(generated),
        '--samples', '10', '--out', str(out),
    ])

    assert code == 0
    assert capsys.readouterr().out == ''
    assert json.loads(out.read_text(encoding='utf-8'))['trials'] == 10


def test_schubert_query(capsys):
    """Test [X_gamma] . sigma(s) has point coefficient 1 on P^1."""
    code = main([
        'schubert-query', '--group', 'su(2)', '--gamma', '1,-1',
        '--class', 'x_gamma', '--class', 'coset:2,1',
    ])
    result = json.loads(capsys.readouterr().out)

    assert code == 0
    assert result['pointCoefficient'] == 1


def test_schubert_query_bad_class(capsys):
    """Test unreadable classes exit 2."""
    code = main(['schubert-query', '--group', 'su(2)', '--gamma', '1,-1', '--class', 'orbit:1'])

    assert code == 2
    assert 'cannot read class' in capsys.readouterr().err
