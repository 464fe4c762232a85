import itertools

import networkx as nx
import pytest

from src.core.braid import DELTA, IDENTITY_ELEMENT, SIGMA, compose, inverse, parse_word, reduce
from src.core.errors import RadiusGuardError
from src.core.exchange import (
    Heart,
    Role,
    Side,
    TILT_GENERATORS,
    all_tilts,
    generate_ball,
    rotation_tilts,
    simple_tilt,
    standard_heart,
    transition,
    verify_relation_ball,
    walk_endpoint,
)
from src.core.lattice import S_CLASS, T_CLASS


def test_standard_heart():
    a0 = standard_heart()
    t_simple, s_simple = a0.simple_pair
    assert t_simple.klass == T_CLASS and t_simple.role is Role.T
    assert s_simple.klass == S_CLASS and s_simple.role is Role.S
    assert a0.describe() == "(T, S)_E"


@pytest.mark.parametrize(
    "role,side,expected",
    [
        (Role.S, Side.RIGHT, DELTA),
        (Role.T, Side.RIGHT, SIGMA),
        (Role.T, Side.LEFT, inverse(DELTA)),
        (Role.S, Side.LEFT, inverse(SIGMA)),
    ],
)
def test_simple_tilts(role, side, expected):
    assert simple_tilt(standard_heart(), role, side) == Heart(expected)


def test_right_tilt_at_s_shifts_s():
    h = simple_tilt(standard_heart(), Role.S, Side.RIGHT)
    assert h.describe() == "(S[1], T)_X"


def test_left_and_right_tilts_are_inverse():
    a0 = standard_heart()
    right = simple_tilt(a0, Role.S, Side.RIGHT)
    # in the tilted heart S[1] plays the T-role
    assert simple_tilt(right, Role.T, Side.LEFT) == a0


def test_transition_is_unique():
    h1 = Heart(reduce(parse_word("S T^-1 [2]")))
    h2 = Heart(reduce(parse_word("T [1]")))
    a = transition(h1, h2)
    assert h1.translate(a) == h2
    assert transition(h1, h1).is_identity()


def test_rotation_tilts_follow_phase_order():
    a0 = standard_heart()
    assert [label for label, _ in rotation_tilts(a0, (0.25, 0.75))] == ["Sigma", "Sigma^-1"]
    assert [label for label, _ in rotation_tilts(a0, (0.75, 0.25))] == ["Delta", "Delta^-1"]
    assert len(rotation_tilts(a0, (0.5, 0.5))) == 4
    assert len(all_tilts(a0)) == 4


def test_ball_is_four_regular():
    ball = generate_ball(3)
    assert len(generate_ball(1).vertices) == 5
    for key in ball.interior():
        assert ball.out_degree(key) == 4
    assert ball.depth[ball.root] == 0


def test_simply_transitive_action():
    ball = generate_ball(2)
    keys = ball.vertices
    for k1 in keys[:6]:
        for k2 in keys:
            h1, h2 = ball.heart(k1), ball.heart(k2)
            assert h1.translate(transition(h1, h2)) == h2


def test_translation_moves_simples_by_the_k_action():
    ball = generate_ball(2)
    keys = ball.vertices
    for k1 in keys:
        for k2 in keys[::3]:
            h1 = ball.heart(k1)
            a = transition(h1, ball.heart(k2))
            moved = [s.klass for s in h1.translate(a).simple_pair]
            assert moved == [a.k_matrix.apply(s.klass) for s in h1.simple_pair]


def test_nontrivial_elements_fix_no_vertex():
    ball = generate_ball(2)
    elements = list(TILT_GENERATORS.values()) + [reduce(parse_word("S T^-1 [2]")), reduce(parse_word("[1]"))]
    for a in elements:
        assert not a.is_identity()
        for key, g in ball.representatives.items():
            assert ball.key_of(compose(a, g)) != key


def test_ball_matches_brute_force_words():
    elements = {IDENTITY_ELEMENT.key()}
    for n in (1, 2):
        for word in itertools.product(TILT_GENERATORS.values(), repeat=n):
            g = IDENTITY_ELEMENT
            for gen in word:
                g = compose(g, gen)
            elements.add(g.key())
    ball = generate_ball(2)
    assert set(ball.vertices) == elements
    assert len(elements) == 17


def test_shift_quotient_is_image_of_full_ball():
    full, shift = generate_ball(3), generate_ball(3, "shift")
    image = {key: shift.key_of(g) for key, g in full.representatives.items()}
    assert set(image.values()) == set(shift.vertices)
    for source, target, label in full.edges:
        assert (image[source], image[target], label) in shift.edges


def test_sph_quotient_is_five_cycle():
    ball = generate_ball(3, "sph")
    assert sorted(ball.vertices) == ["0", "1", "2", "3", "4"]
    assert nx.is_isomorphic(ball.underlying_graph(), nx.cycle_graph(5))


def test_shift_quotient_identifies_delta_with_its_inverse():
    ball = generate_ball(1, "shift")
    assert len(ball.vertices) == 4


def test_radius_guard():
    with pytest.raises(RadiusGuardError):
        generate_ball(13)
    with pytest.raises(RadiusGuardError):
        generate_ball(-1)
    with pytest.raises(RadiusGuardError):
        generate_ball(3, guard=2)


def test_relation_ball():
    ball = generate_ball(3)
    report = verify_relation_ball(ball, max_length=6)
    assert report.passed
    assert report.closed_walks > 0
    assert report.named_words == {"Sigma^6 Delta^-4": True, "Sigma Delta": False}


def test_relation_check_needs_full_ball():
    with pytest.raises(ValueError):
        verify_relation_ball(generate_ball(2, "sph"))


def test_walk_endpoint():
    ball = generate_ball(3)
    assert walk_endpoint(ball, ["Sigma", "Sigma^-1"]) == ball.root
    assert walk_endpoint(ball, ["Sigma"] * 3) == walk_endpoint(ball, ["Delta"] * 2)
    assert walk_endpoint(generate_ball(1), ["Sigma", "Sigma"]) is None


def test_exports():
    ball = generate_ball(1)
    graph = ball.to_networkx()
    assert graph.number_of_nodes() == 5
    assert graph.number_of_edges() == len(ball.edges)
    dot = ball.to_dot()
    assert dot.startswith('graph "exchange_none_r1" {')
    assert dot.count(" -- ") == sum(1 for _, _, label in ball.edges if not label.endswith("^-1"))
    data = ball.to_dict()
    assert data["quotient"] == "none"
    assert data["vertices"][0]["depth"] == 0
