"""Unit tests for Ressayre pair conditions, generation, membership and pruning."""

import pytest
from itertools import product
from src.admissible import PROPER_NONE, enumerate_admissible
from src.errors import ConfigurationError, DomainError, HypothesisRefusal
from src.models import GroupSetup, Inequality, RationalVector, WeylElement
from src.ressayre import (
    check_membership,
    condition_a,
    condition_schubert,
    condition_trace,
    evaluate_candidate,
    generate_inequalities,
    prune_redundant,
)
from src.root_system import build_root_datum, minimal_coset_reps
from src.schubert import build_flag, class_of_x_gamma

E = WeylElement.identity([2])
S = WeylElement([(1, 0)])

# a - b + c >= 0, -a + b + c >= 0, a + b - c >= 0 on spectra (a,-a), (b,-b), (c,-c)
TRIANGLE = {
    (1, -1, -1, 1, 1, -1),
    (-1, 1, 1, -1, 1, -1),
    (1, -1, 1, -1, -1, 1),
}


@pytest.fixture
def su2_pair():
    """Create su(2) diagonal in su(2) x su(2)."""
    return GroupSetup(build_root_datum('su(2)'), 2)


@pytest.fixture
def su3_pair():
    """Create su(3) diagonal in su(3) x su(3)."""
    return GroupSetup(build_root_datum('su(3)'), 2)


@pytest.fixture
def triangle(su2_pair):
    """Create the generated su(2) x su(2) polytope."""
    return generate_inequalities(su2_pair)


def test_condition_a(su2_pair):
    """Test the dimension identity on su(2) x su(2)."""
    gamma = su2_pair.datum.vector([1, -1])

    assert condition_a(su2_pair, gamma, [E, S]) == (True, (1, 1, 2))
    assert condition_a(su2_pair, gamma, [E, E]) == (False, (2, 1, 2))
    assert condition_a(su2_pair, gamma, [S, S]) == (False, (0, 1, 2))


def test_condition_trace(su2_pair):
    """Test the weighted root sums."""
    gamma = su2_pair.datum.vector([1, -1])

    assert condition_trace(su2_pair, gamma, [E, S]) == (True, 2, 2)
    assert condition_trace(su2_pair, gamma, [S, S]) == (False, 2, 4)


def test_condition_schubert(su2_pair):
    """Test point coefficients of the Schubert products on P^1."""
    datum = su2_pair.datum
    up = datum.vector([1, -1])
    down = datum.vector([-1, 1])

    assert condition_schubert(su2_pair, up, [E, S]) == 1
    assert condition_schubert(su2_pair, up, [E, E]) == 0
    assert condition_schubert(su2_pair, down, [S, S]) == 1
    assert condition_schubert(su2_pair, down, [E, S]) == 0


def test_evaluate_candidate(su2_pair):
    """Test a passing record carries its certificates."""
    element = enumerate_admissible(su2_pair)[0]
    record = evaluate_candidate(su2_pair, element, [E, S])

    assert record.classification == 'ressayre'
    assert record.certificates() == {'dimA': [1, 1, 2], 'traceLHS': '2', 'traceRHS': '2', 'schubertN': 1}
    assert record.rho.is_zero()


def test_generate_su2_pair(triangle):
    """Test su(2) x su(2) gives the triangle inequalities."""
    assert {ineq.key for ineq in triangle.inequalities} == TRIANGLE
    assert triangle.metadata['admissible'] == 2
    assert triangle.metadata['candidates'] == 8
    assert triangle.metadata['passing_pairs'] == 3
    assert triangle.metadata['properness'] == PROPER_NONE
    for ineq in triangle.inequalities:
        assert len(ineq.provenance) == 1
        assert ineq.provenance[0].schubert_n == 1


def test_generate_rejects_unknown_mode(su2_pair):
    """Test modes other than ressayre/infinitesimal raise."""
    with pytest.raises(ConfigurationError):
        generate_inequalities(su2_pair, mode='exact')


def test_generate_refuses_u_factor():
    """Test u(2) diagonal is refused before enumeration."""
    with pytest.raises(HypothesisRefusal):
        generate_inequalities(GroupSetup(build_root_datum('u(2)'), 2))


@pytest.mark.parametrize('q', [2, 3, 5])
def test_scaling_gamma_keeps_inequalities(su3_pair, q):
    """Test replacing gamma by q gamma yields the same inequality set."""
    base = generate_inequalities(su3_pair)
    scaled = generate_inequalities(su3_pair, gamma_scale=q)

    assert [i.key for i in scaled.inequalities] == [i.key for i in base.inequalities]


def test_su3_pair_pairs_are_ressayre(su3_pair):
    """Test every emitted su(3) x su(3) pair has Schubert coefficient 1 and both modes agree."""
    ressayre = generate_inequalities(su3_pair)
    infinitesimal = generate_inequalities(su3_pair, mode='infinitesimal')

    assert ressayre.inequalities
    for ineq in ressayre.inequalities:
        assert all(r.schubert_n == 1 for r in ineq.provenance)
    assert {i.key for i in infinitesimal.inequalities} == {i.key for i in ressayre.inequalities}


def test_condition_a_balances_degrees(su3_pair):
    """Test the dimension identity makes the product land in top degree, exhaustively."""
    datum = su3_pair.datum
    for element in enumerate_admissible(su3_pair):
        gamma = element.gamma
        flag = build_flag(datum, gamma)
        x_gamma = class_of_x_gamma(flag).terms()[0][0].length
        for w_tilde in product(minimal_coset_reps(datum, gamma), repeat=2):
            passed, _ = condition_a(su3_pair, gamma, w_tilde)
            degrees = x_gamma + sum(flag.class_of_coset(w).terms()[0][0].length for w in w_tilde)
            assert passed == (degrees == flag.dimension)


def test_generation_is_thread_independent(su3_pair):
    """Test 1 and 4 workers produce identical polytopes."""
    one = generate_inequalities(su3_pair, threads=1)
    four = generate_inequalities(su3_pair, threads=4)

    assert one.to_dict() == four.to_dict()


def test_membership_interior(triangle):
    """Test an interior point is a member with no tight inequality."""
    result = check_membership(triangle, [[1, -1], [1, -1]], [1, -1])

    assert result.member
    assert result.violated == []
    assert result.tight == []


def test_membership_boundary(triangle):
    """Test a boundary point is a member and reports the tight inequality."""
    result = check_membership(triangle, [[1, -1], [1, -1]], [2, -2])

    assert result.member
    assert [i.key for i in result.tight] == [(1, -1, 1, -1, -1, 1)]


def test_membership_outside(triangle):
    """Test a point violating a + b >= c is not a member."""
    result = check_membership(triangle, [[1, -1], [1, -1]], [3, -3])

    assert not result.member
    assert len(result.violated) == 1
    assert result.violated[0][1] == -2
    assert result.to_dict()['violated'][0]['value'] == '-2'


def test_membership_float_tolerance(triangle):
    """Test float points are compared against the tolerance."""
    result = check_membership(triangle, [[1.0, -1.0], [1.0, -1.0]], [2.0000000001, -2.0000000001], tol=1e-9)

    assert result.member
    assert len(result.tight) == 1


@pytest.mark.parametrize('xi_tilde,xi,message', [
    ([[-1, 1], [1, -1]], [1, -1], 'not dominant'),
    ([[1, -1], [1, -1]], [-1, 1], 'not dominant'),
    ([[1, 0], [1, -1]], [1, -1], 'trace'),
    ([[1, -1]], [1, -1], 'spectra'),
    ([[1, -1, 0], [1, -1]], [1, -1], 'coordinates'),
])
def test_membership_rejects_bad_points(triangle, xi_tilde, xi, message):
    """Test malformed points raise DomainError."""
    with pytest.raises(DomainError, match=message):
        check_membership(triangle, xi_tilde, xi)


def test_prune_keeps_facets(triangle):
    """Test LP pruning keeps the three triangle facets."""
    pruned = prune_redundant(triangle)

    assert {i.key for i in pruned.inequalities} == TRIANGLE
    assert pruned.metadata['pruned'] is True
    assert pruned.metadata['pruning'] == 'heuristic LP'


def test_prune_drops_implied_inequality(triangle):
    """Test c >= 0, implied by the chamber, is dropped."""
    implied = Inequality([RationalVector([0, 0]), RationalVector([0, 0])], RationalVector([1, -1]))
    padded = triangle.with_inequalities(list(triangle.inequalities) + [implied])
    assert len(padded.inequalities) == 4

    pruned = prune_redundant(padded)

    assert {i.key for i in pruned.inequalities} == TRIANGLE
