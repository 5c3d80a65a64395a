"""Integration tests: configuration to generated polytope to numerical verification."""

import json
import numpy as np
import pytest
from pathlib import Path
from src.admissible import PROPER_NUMERICAL, PROPER_TORUS, enumerate_admissible
from src.errors import HypothesisRefusal
from src.models import RunConfig
from src.oracle.flow import check_limit_proposition
from src.oracle.moment import moment_map_v
from src.oracle.sampling import sample_orbit_sum
from src.oracle.validation import facet_report, membership_agreement, monte_carlo_validate
from src.polytope_service import PolytopeService
from src.ressayre import check_membership, generate_inequalities
from src.root_system import graded_pieces
from src.schubert import build_flag, euler_class
from src.serialization import dumps, polytope_to_json
from src.setup_builder import build_setup

GOLDEN = Path(__file__).parent / 'golden'

# spectra alpha, beta of the copies and zeta of the diagonal factor, 1-based and decreasing:
# alpha_i + beta_j + zeta_k >= 0 when i + j + k = 5, <= 0 when i + j + k = 7
HORN_SU3 = {
    (2, -1, -1, 2, -1, -1, -1, -1, 2),
    (2, -1, -1, -1, -1, 2, 2, -1, -1),
    (-1, -1, 2, 2, -1, -1, 2, -1, -1),
    (2, -1, -1, -1, 2, -1, -1, 2, -1),
    (-1, 2, -1, 2, -1, -1, -1, 2, -1),
    (-1, 2, -1, -1, 2, -1, 2, -1, -1),
    (1, 1, -2, 1, 1, -2, -2, 1, 1),
    (1, 1, -2, -2, 1, 1, 1, 1, -2),
    (-2, 1, 1, 1, 1, -2, 1, 1, -2),
    (1, 1, -2, 1, -2, 1, 1, -2, 1),
    (1, -2, 1, 1, 1, -2, 1, -2, 1),
    (1, -2, 1, 1, -2, 1, 1, 1, -2),
}


def _setup(text):
    return build_setup(RunConfig.from_text(text))


@pytest.fixture
def su2_pair():
    """Create su(2) diagonal in su(2) x su(2) from a configuration file body."""
    return _setup("[group]\nkind = su(2)\ncopies = 2\n")


@pytest.fixture
def su3_pair():
    """Create su(3) diagonal in su(3) x su(3) from a configuration file body."""
    return _setup("[group]\nkind = su(3)\ncopies = 2\n")


@pytest.fixture
def torus_with_v():
    """Create T^2 on C^3 with characters (1,0), (0,1), (1,1) and shift (1/2, 1)."""
    return _setup(
        "[group]\nkind = torus(2)\ncopies = 1\n"
        "[v]\nreps = character:1,0; character:0,1; character:1,1\nmoment_shift = 1/2, 1\n"
    )


@pytest.fixture
def su2_torus_with_v():
    """Create SU(2) x U(1) on C^2 + C^2 + C with the U(1) shift 1/2."""
    return _setup(
        "[group]\nkind = su(2) x torus(1)\ncopies = 1\n"
        "[v]\nreps = standard; standard; character:1@1\nmoment_shift = 0, 0, 1/2\n"
    )


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def test_su2_pair_pipeline(su2_pair):
    """Test generation, Monte Carlo and facet tightness for su(2) x su(2)."""
    polytope = generate_inequalities(su2_pair)
    assert len(polytope.inequalities) == 3

    report = monte_carlo_validate(polytope, su2_pair, trials=2000, seed=0)
    assert report['pass']
    assert report['violations'] == 0

    for entry in facet_report(polytope, su2_pair, trials=100, seed=0, max_iterations=300):
        assert entry['facet']


def test_su2_pair_region_is_filled(su2_pair):
    """Test every c in [|a - b|, a + b] is reached and lies in the generated region."""
    polytope = generate_inequalities(su2_pair)
    rng = np.random.default_rng(0)
    grid = np.linspace(0.0, 1.0, 11)
    for a in grid:
        for b in grid:
            reached = []
            for theta in np.linspace(0.0, np.pi / 2, 21):
                sample = sample_orbit_sum(
                    su2_pair.datum, [[a, -a], [b, -b]], rng,
                    unitaries=[np.eye(2), _rotation(theta)],
                )
                c = abs(float(sample.xi[0]))
                reached.append(c)
                result = check_membership(polytope, [[a, -a], [b, -b]], [c, -c], tol=1e-9)
                assert result.member, (a, b, c)
            assert min(reached) == pytest.approx(abs(a - b), abs=1e-9)
            assert max(reached) == pytest.approx(a + b, abs=1e-9)


def test_su3_pair_pipeline(su3_pair):
    """Test su(3) x su(3): six admissible directions, Schubert coefficient 1, Monte Carlo pass."""
    elements = enumerate_admissible(su3_pair)
    assert len(elements) == 6

    polytope = generate_inequalities(su3_pair)
    for ineq in polytope.inequalities:
        assert all(r.schubert_n == 1 for r in ineq.provenance)

    report = monte_carlo_validate(polytope, su3_pair, trials=1000, seed=0, threads=2)
    assert report['pass']


def test_infinitesimal_mode_agrees_on_samples(su3_pair):
    """Test both modes give the same membership verdicts on random draws."""
    ressayre = generate_inequalities(su3_pair)
    infinitesimal = generate_inequalities(su3_pair, mode='infinitesimal')

    assert membership_agreement(ressayre, infinitesimal, su3_pair, trials=500, seed=9)['agree']


def test_output_is_byte_identical_across_threads(su3_pair):
    """Test the polytope JSON does not depend on the worker count."""
    one = polytope_to_json(generate_inequalities(su3_pair, threads=1))
    four = polytope_to_json(generate_inequalities(su3_pair, threads=4))

    assert one == four


def _h_representation(polytope):
    data = json.loads(polytope_to_json(polytope))
    del data['fingerprint']
    del data['metadata']
    data['inequalities'] = [{'coeffs': i['coeffs'], 'text': i['text']} for i in data['inequalities']]
    return dumps(data)


@pytest.mark.parametrize('name', ['su2_pair', 'su3_pair'])
def test_polytope_matches_golden_file(name, request):
    """Test the emitted H-representation is byte-identical to the checked-in file."""
    polytope = generate_inequalities(request.getfixturevalue(name))
    golden = (GOLDEN / f"{name}.json").read_text(encoding='utf-8')

    assert _h_representation(polytope) == golden


def test_su3_pair_gives_the_horn_inequalities(su3_pair):
    """Test su(3) x su(3) emits exactly the twelve Horn inequalities for A + B + C = 0."""
    polytope = generate_inequalities(su3_pair)

    assert len(polytope.inequalities) == 12
    assert {tuple(int(c) for c in ineq.key) for ineq in polytope.inequalities} == HORN_SU3


def test_service_cache_survives_new_instance(tmp_path, su2_pair):
    """Test a second service reads the first one's cache."""
    first = PolytopeService(cache_dir=str(tmp_path), threads=1)
    second = PolytopeService(cache_dir=str(tmp_path), threads=1)

    _, text, _ = first.generate(su2_pair)
    _, cached_text, cached = second.generate(su2_pair)

    assert cached
    assert cached_text == text


def test_su2_standard_representation():
    """Test SU(2) on C^2 with s = 1 generates and validates through the V moment map."""
    setup = _setup("[group]\nkind = su(2)\ncopies = 1\n[v]\nreps = standard\n")
    polytope = generate_inequalities(setup)

    assert polytope.metadata['properness'] == PROPER_NUMERICAL
    assert polytope.inequalities == []
    assert monte_carlo_validate(polytope, setup, trials=500, seed=0)['pass']


def test_su3_two_standard_representations():
    """Test SU(3) on C^3 + C^3 with s = 1 generates inequalities that hold on samples."""
    setup = _setup("[group]\nkind = su(3)\ncopies = 1\n[v]\nreps = standard; standard\n")
    polytope = generate_inequalities(setup)

    assert polytope.metadata['properness'] == PROPER_NUMERICAL
    assert monte_carlo_validate(polytope, setup, trials=500, seed=0)['pass']


def test_su3_pair_with_standard_representation(monkeypatch):
    """Test su(3) x su(3) on C^3: three inequalities, one carrying a nontrivial Euler class."""
    setup = _setup("[group]\nkind = su(3)\ncopies = 2\n[v]\nreps = standard\n")
    polytope = generate_inequalities(setup)
    assert len(polytope.inequalities) == 3

    eulers = []
    for ineq in polytope.inequalities:
        gamma = ineq.provenance[0].gamma
        positive = graded_pieces(setup.v_module, gamma).positive
        if positive.dim > 0:
            euler = euler_class(build_flag(setup.datum, gamma), positive)
            assert euler.degrees() == [positive.dim]
            eulers.append(euler)
    assert eulers

    assert monte_carlo_validate(polytope, setup, trials=1000, seed=0)['pass']

    def flipped(s, v, include_shift=True):
        return -moment_map_v(s, v, include_shift=include_shift)

    monkeypatch.setattr('src.oracle.sampling.moment_map_v', flipped)
    report = monte_carlo_validate(polytope, setup, trials=1000, seed=0)
    assert not report['pass']
    assert report['violations'] > 0


@pytest.mark.parametrize('body,reason', [
    ("[group]\nkind = u(2)\ncopies = 2\n", r"u\(n\)"),
    ("[group]\nkind = su(2)\ncopies = 1\n", "s = 1"),
    ("[group]\nkind = su(2)\ncopies = 1\n[v]\nreps = standard; dual\n", "not proper"),
])
def test_refused_setups(body, reason):
    """Test setups outside the standing hypothesis are refused."""
    with pytest.raises(HypothesisRefusal, match=reason):
        generate_inequalities(_setup(body))


def test_limit_proposition_on_torus(torus_with_v):
    """Test <Phi(x_gamma), gamma> <= 0 on 100 semistable samples, with bounded Kempf-Ness rays."""
    elements = enumerate_admissible(torus_with_v)
    assert len(elements) == 6

    report = check_limit_proposition(torus_with_v, elements, samples=100, seed=0, kempf_ness_horizon=50.0)

    assert report['semistableWithLimit'] >= 100
    assert report['semistable'] >= 100
    assert report['draws'] > report['semistable']
    assert report['checked'] >= 100
    assert report['maxMargin'] <= 1e-6
    assert report['pass']


def test_limit_proposition_on_nonabelian_group(su2_torus_with_v):
    """Test the limit inequality for SU(2) x U(1), where semistability needs det(v1, v2) != 0."""
    elements = enumerate_admissible(su2_torus_with_v)
    assert len(elements) == 4

    report = check_limit_proposition(su2_torus_with_v, elements, samples=100, seed=0, flow_max_steps=500)

    assert report['semistableWithLimit'] >= 100
    assert report['checked'] >= 100
    assert all(m['margin'] < 0 for m in report['margins'])
    assert report['pass']


def test_limit_proposition_fails_short_of_samples(torus_with_v):
    """Test a draw budget too small for the requested semistable count fails the run."""
    report = check_limit_proposition(torus_with_v, enumerate_admissible(torus_with_v), samples=100, seed=0, max_draws=20)

    assert report['draws'] == 20
    assert report['semistableWithLimit'] < 100
    assert not report['pass']


def test_torus_polytope_validates(torus_with_v):
    """Test the torus polytope with V holds on Monte Carlo draws."""
    polytope = generate_inequalities(torus_with_v)

    assert polytope.metadata['properness'] == PROPER_TORUS
    assert monte_carlo_validate(polytope, torus_with_v, trials=500, seed=0)['pass']


@pytest.mark.slow
def test_su2_pair_acceptance(su2_pair):
    """Test 10^5 Monte Carlo draws on su(2) x su(2)."""
    polytope = generate_inequalities(su2_pair)

    report = monte_carlo_validate(polytope, su2_pair, trials=100000, seed=0, threads=4)

    assert report['pass']
    assert report['violations'] == 0


@pytest.mark.slow
def test_su3_pair_acceptance(su3_pair):
    """Test 10^5 Monte Carlo draws and facet tightness on su(3) x su(3)."""
    polytope = generate_inequalities(su3_pair)

    report = monte_carlo_validate(polytope, su3_pair, trials=100000, seed=0, threads=4)
    assert report['pass']
    for entry in facet_report(polytope, su3_pair, trials=500, seed=0, tol=1e-5):
        assert entry['facet']


@pytest.mark.slow
def test_su2_standard_acceptance():
    """Test 10^4 draws through the V moment map for SU(2) on C^2."""
    setup = _setup("[group]\nkind = su(2)\ncopies = 1\n[v]\nreps = standard\n")
    polytope = generate_inequalities(setup)

    assert monte_carlo_validate(polytope, setup, trials=10000, seed=0, tol=1e-8)['pass']
