import itertools
import random

import pytest

from coarsegeo.ball import distance as ball_distance
from coarsegeo.models import (
    GroupModel,
    canon,
    dehn_reduce,
    distance,
    geodesic_vertices,
    get_model,
    gromov_product,
    is_trivial,
    multiply,
)
from coarsegeo.words import free_reduce, inverse


def test_free_commutator_nontrivial(free_model):
    assert not is_trivial(free_model, "a b A B")


def test_surface_relator_trivial(surface_model):
    assert is_trivial(surface_model, "a1 b1 A1 B1 a2 b2 A2 B2")


def test_surface_single_generator_nontrivial(surface_model, surface_ball4):
    # Dehn cannot shorten a length-1 word; the ball distance oracle agrees
    assert not is_trivial(surface_model, "a1")
    assert ball_distance(surface_ball4, "", "a1") == 1


def test_random_word_times_inverse_trivial():
    rng = random.Random(11)
    for model in (get_model("free:2"), get_model("surface:2")):
        letters = model.letters()
        for _ in range(1000):
            w = free_reduce(rng.choice(letters) for _ in range(rng.randint(0, 20)))
            assert is_trivial(model, w + inverse(w))


def test_free_trivial_iff_reduced_empty_exhaustive_len8(free_model):
    # every freely reduced nonempty word of length <= 8 is nontrivial
    count = 0
    frontier = [()]
    for _ in range(8):
        nxt = []
        for w in frontier:
            for s in free_model.letters():
                if w and s == -w[-1]:
                    continue
                nxt.append(w + (s,))
        for w in nxt:
            assert not is_trivial(free_model, w)
            count += 1
        frontier = nxt
    assert count == 4 * (3 ** 8 - 1) // 2


def test_multiply_examples(free_model):
    assert multiply(free_model, "a", "A") == ()
    assert multiply(free_model, "a", "b") == (1, 2)


def test_multiply_dehn_shortening(surface_model):
    # a relator prefix longer than half collapses to the inverse of the
    # shorter complement, and prefix * remainder is the identity
    relator = surface_model.relators[0]
    g2 = 2  # genus
    prefix = relator[: 2 * g2 + 1]
    remainder = relator[2 * g2 + 1 :]
    assert multiply(surface_model, prefix, remainder) == ()
    shortened = multiply(surface_model, prefix, ())
    assert shortened == dehn_reduce(surface_model, prefix) == inverse(remainder)
    assert len(shortened) == 2 * g2 - 1


def test_dehn_reduce_gives_geodesic_length(surface_model, surface_ball4):
    # spot-check the Dehn geodesic claim against in-ball BFS distances
    rng = random.Random(5)
    letters = surface_model.letters()
    for _ in range(80):
        w = free_reduce(rng.choice(letters) for _ in range(rng.randint(0, 4)))
        if canon(surface_model, w) in surface_ball4.index:
            assert len(dehn_reduce(surface_model, w)) == ball_distance(
                surface_ball4, (), w
            )


def test_canon_identifies_half_relator_pair(surface_model):
    # the two halves of the relator octagon name one element
    half = surface_model.word("a1 b1 A1 B1")
    other = surface_model.word("b2 a2 B2 A2")
    assert canon(surface_model, half) == canon(surface_model, other)
    assert distance(surface_model, half, other) == 0


def test_geodesic_vertices_are_adjacent_and_tight(surface_model):
    u = surface_model.word("a1 b1")
    v = surface_model.word("b2 B1 a2")
    path = geodesic_vertices(surface_model, u, v)
    assert len(path) - 1 == distance(surface_model, u, v)
    for a, b in itertools.pairwise(path):
        assert distance(surface_model, a, b) == 1


def test_gromov_product_symmetry(surface_model):
    x = surface_model.word("a1 b1")
    y = surface_model.word("b1 a2")
    z = surface_model.word("B2")
    assert gromov_product(surface_model, x, y, z) == gromov_product(
        surface_model, y, x, z
    )


def test_model_parse_and_bounds():
    assert GroupModel.parse("free:2").rank == 2
    assert GroupModel.parse("surface:2").genus == 2
    with pytest.raises(ValueError):
        GroupModel.parse("free:1")
    with pytest.raises(ValueError):
        GroupModel.parse("surface:1")
    with pytest.raises(ValueError):
        GroupModel.parse("braid:3")
