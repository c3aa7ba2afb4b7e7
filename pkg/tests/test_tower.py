import random

import pytest
from hypothesis import given, settings, strategies as st

from grouptower.words import Word, parse_word, t_length, max_stage
from grouptower.tower import (
    ExtensionTower,
    MembershipUndecided,
    PreconditionViolated,
    ball_words,
    britton_reduce,
    centralizer_ball,
    commutes,
    coset_rep,
    cyclically_reduce,
    format_tower,
    in_cyclic,
    is_conjugate_into_base,
    is_reduced,
    minimal_root,
    nf_word,
    normal_form,
    parse_tower,
)

W = parse_word

FREE = ExtensionTower(2)
# t1 g0 t1^-1 = g1 over a rank-2 base
HNN = ExtensionTower(2).extend_hnn(W("g0"), W("g1"))
# one free-product letter
FREEZ = ExtensionTower(2).extend_free()
# free-product letter, then a step conjugating g0 onto it
MIXED = ExtensionTower(2).extend_free().extend_hnn(W("g0"), W("t1"))

TOWERS = [FREE, HNN, FREEZ, MIXED]


def random_words(tower, count, max_units, seed):
    rng = random.Random(seed)
    alphabet = tower.alphabet()
    out = []
    for _ in range(count):
        w = Word()
        for _ in range(rng.randint(0, max_units)):
            w = w * rng.choice(alphabet)
        out.append(w)
    return out


# oracle: rewrite with the unit relation t g0 = g1 t (and inverses) until
# no stable letter has a base letter to its right, then cancel t-pairs
def unit_relation_normal(word: Word) -> Word:
    units = list(word.units())
    changed = True
    while changed:
        changed = False
        for i in range(len(units) - 1):
            a, b = units[i], units[i + 1]
            if a.kind == "t" and b.kind == "g":
                if a.exponent == 1:
                    # t g0^e = g1^e t ; t g1^e stays (g1 not in the source subgroup)
                    if b.index == 0:
                        units[i : i + 2] = [b.__class__("g", 1, b.exponent), a]
                        changed = True
                        break
                else:
                    if b.index == 1:
                        units[i : i + 2] = [b.__class__("g", 0, b.exponent), a]
                        changed = True
                        break
            if a.kind == "t" and b.kind == "t" and a.exponent == -b.exponent:
                del units[i : i + 2]
                changed = True
                break
        merged = Word(units)
        if len(merged.units()) != len(units):
            units = list(merged.units())
            changed = True
    return Word(units)


class TestBrittonReduce:
    def test_relation_collapses_pinch(self):
        assert britton_reduce(W("t1 g0 t1^-1"), HNN) == W("g1")

    def test_free_cancellation(self):
        assert britton_reduce(W("t1 t1^-1"), HNN) == W("e")

    def test_inverse_pinch_power(self):
        # oracle: apply the unit relation t^-1 g1 t = g0 three times
        assert unit_relation_normal(W("t1^-1 g1^3 t1")).unit_length == 3
        assert britton_reduce(W("t1^-1 g1^3 t1"), HNN) == W("g0^3")

    def test_strategies_agree_on_normal_forms(self):
        for tower in TOWERS:
            for w in random_words(tower, 400, 10, seed=11):
                left = nf_word(britton_reduce(w, tower, "leftmost"), tower)
                right = nf_word(britton_reduce(w, tower, "rightmost"), tower)
                assert left == right, str(w)

    def test_reduced_word_keeps_stable_letters(self):
        # a reduced word with stable letters never normalizes to t-length 0
        for tower in (HNN, FREEZ, MIXED):
            for w in random_words(tower, 300, 8, seed=5):
                r = britton_reduce(w, tower)
                if t_length(r) >= 1:
                    assert t_length(nf_word(r, tower)) >= 1

    def test_rejects_unknown_letters(self):
        with pytest.raises(ValueError):
            britton_reduce(W("t2"), HNN)
        with pytest.raises(ValueError):
            britton_reduce(W("g5"), HNN)


class TestNormalForm:
    def test_pinch_then_base(self):
        # oracle: unit-relation rewriting
        assert unit_relation_normal(W("g0^2 t1 g0 t1^-1")) == W("g0^2 g1")
        assert nf_word(W("g0^2 t1 g0 t1^-1"), HNN) == W("g0^2 g1")

    def test_identity(self):
        assert nf_word(W("e"), HNN) == W("e")

    def test_transversal_pushes_source_power_left(self):
        # oracle: t g0 = g1 t by the relation
        assert unit_relation_normal(W("t1 g0")) == W("g1 t1")
        assert nf_word(W("t1 g0"), HNN) == W("g1 t1")

    def test_idempotent(self):
        for tower in TOWERS:
            for w in random_words(tower, 300, 9, seed=23):
                n = nf_word(w, tower)
                assert nf_word(n, tower) == n

    def test_congruence(self):
        # normal_form(u v) only depends on the classes of u and v
        for tower in (HNN, MIXED):
            for u, v in zip(
                random_words(tower, 150, 6, seed=3), random_words(tower, 150, 6, seed=4)
            ):
                assert nf_word(u * v, tower) == nf_word(nf_word(u, tower) * nf_word(v, tower), tower)

    def test_equal_after_inserting_relator_material(self):
        rng = random.Random(9)
        relators = [W("t1 g0 t1^-1 g1^-1"), W("t1 t1^-1"), W("g1 t1 g0^-1 t1^-1")]
        for w in random_words(HNN, 200, 7, seed=8):
            r = rng.choice(relators)
            cut = rng.randint(0, len(w.letters))
            v = Word(w.letters[:cut]) * r * Word(w.letters[cut:])
            assert nf_word(v, HNN) == nf_word(w, HNN)

    def test_stage_annotation(self):
        nf = normal_form(W("g0"), MIXED)
        assert nf.tower_stage == 2
        assert nf.word == W("g0")

    def test_stability_under_extension(self):
        # adding steps never changes normal forms of old words
        for w in random_words(FREEZ, 200, 8, seed=31):
            assert nf_word(w, FREEZ) == nf_word(w, MIXED)


class TestInCyclic:
    def test_power_of_generator(self):
        assert in_cyclic(W("g0^5"), W("g0"), FREE) == 5

    def test_absent_is_certified(self):
        # oracle: enumerate g0^k for |k| <= 8 and compare normal forms
        target = nf_word(W("g1"), FREE)
        assert all(nf_word(W("g0") ** k, FREE) != target for k in range(-8, 9))
        assert in_cyclic(W("g1"), W("g0"), FREE) is None

    def test_identity_power(self):
        assert in_cyclic(W("e"), W("g0"), FREE) == 0

    def test_multi_letter_generator(self):
        z = W("t1 g0")
        assert in_cyclic(z ** 4, z, MIXED) == 4
        assert in_cyclic(z ** -3, z, MIXED) == -3
        assert in_cyclic(W("t1 g1"), z, MIXED) is None

    def test_identity_generator_rejected(self):
        with pytest.raises(PreconditionViolated):
            in_cyclic(W("g0"), W("e"), FREE)

    def test_undecided_when_bound_is_tiny(self):
        z = W("t1 g0")
        with pytest.raises(MembershipUndecided):
            in_cyclic(z ** 9, z, MIXED, bound=2)


def brute_coset_rep(a, gen, tower, window=8):
    """Length-minimization oracle over an explicit window."""
    best = None
    for k in range(-window, window + 1):
        cand = nf_word(gen ** -k * a, tower)
        key = (cand.unit_length, str(cand))
        if best is None or key < best[0]:
            best = (key, k, cand)
    return best[1], best[2]


class TestCosetRep:
    def test_strips_power_prefix(self):
        assert brute_coset_rep(W("g0^3 g1"), W("g0"), FREE) == (3, W("g1"))
        assert coset_rep(W("g0^3 g1"), W("g0"), FREE) == (3, W("g1"))

    def test_element_of_subgroup(self):
        assert coset_rep(W("g0^2"), W("g0"), FREE) == (2, W("e"))

    def test_prefix_never_shortens(self):
        assert brute_coset_rep(W("g1 g0"), W("g0"), FREE) == (0, W("g1 g0"))
        assert coset_rep(W("g1 g0"), W("g0"), FREE) == (0, W("g1 g0"))

    def test_representative_is_coset_invariant(self):
        gen = W("g0 g1")
        for a in random_words(FREE, 120, 5, seed=17):
            k, rep = coset_rep(a, gen, FREE)
            for shift in (-2, -1, 1, 2):
                k2, rep2 = coset_rep(gen ** shift * a, gen, FREE)
                assert rep2 == rep
                assert k2 == k + shift

    def test_decomposition_reconstructs(self):
        for gen in (W("g0"), W("g0 g1"), W("t1 g0")):
            tower = MIXED
            for a in random_words(tower, 80, 5, seed=29):
                k, rep = coset_rep(a, gen, tower)
                assert nf_word(gen ** k * rep, tower) == nf_word(a, tower)

    def test_stable_letter_generator_sees_pinched_minimum(self):
        # with t1 g0 t1^-1 = g1 below, the coset <t1>(t1 g1^2 t1) contains
        # g0^2; a leading-run strip would miss it and break canonicity
        tower = ExtensionTower(2).extend_hnn(W("g0"), W("g1")).extend_hnn(W("g0"), W("t1"))
        u1, u2 = W("t1 g1^2 t1"), W("t1^2 g0^2")
        assert nf_word(u1, tower) == nf_word(u2, tower)
        assert coset_rep(u1, W("t1"), tower)[1] == W("g0^2")
        assert coset_rep(u2, W("t1"), tower)[1] == W("g0^2")
        w1 = W("t2^-1") * u1 * W("t2")
        w2 = W("t2^-1") * u2 * W("t2")
        assert nf_word(w1, tower) == nf_word(w2, tower)


class TestCyclicReduction:
    def test_visible_conjugation(self):
        assert cyclically_reduce(W("g1 g0 g1^-1"), FREE) == (W("g0"), W("g1"))

    def test_already_cyclically_reduced(self):
        # oracle: all rotations of g0 t1 stay reduced
        c, conj = cyclically_reduce(W("g0 t1"), FREEZ)
        assert (c, conj) == (W("g0 t1"), W("e"))

    def test_pinch_before_rotation(self):
        assert cyclically_reduce(W("t1 g0 t1^-1"), HNN) == (W("g1"), W("e"))

    def test_conjugation_identity_holds(self):
        for tower in TOWERS:
            for w in random_words(tower, 200, 8, seed=37):
                c, y = cyclically_reduce(w, tower)
                assert nf_word(y * c * y.inverse(), tower) == nf_word(w, tower)

    def test_every_rotation_of_result_is_reduced(self):
        for tower in (HNN, MIXED):
            for w in random_words(tower, 120, 7, seed=41):
                c, _ = cyclically_reduce(w, tower)
                units = c.units()
                for j in range(len(units)):
                    rot = Word(units[j:] + units[:j])
                    assert rot.unit_length == c.unit_length
                    assert is_reduced(rot, tower)


class TestConjugacyIntoStage:
    def test_base_conjugate(self):
        assert is_conjugate_into_base(W("g1 g0 g1^-1"), HNN, 1)

    def test_fresh_letter_is_not(self):
        assert not is_conjugate_into_base(W("t1"), FREEZ, 1)

    def test_pinch_reduces_into_base(self):
        assert is_conjugate_into_base(W("t1 g0 t1^-1"), HNN, 1)

    def test_stage_window(self):
        w = W("t1 g0")
        assert not is_conjugate_into_base(w, MIXED, 1)
        assert is_conjugate_into_base(w, MIXED, 2)


class TestMinimalRoot:
    def test_cube(self):
        root, degree = minimal_root(W("t1 g0") ** 3, FREEZ)
        assert (root, degree) == (W("t1 g0"), 3)
        # oracle: cube the candidate and compare normal forms
        assert nf_word(root ** 3, FREEZ) == nf_word(W("t1 g0") ** 3, FREEZ)

    def test_single_letter_is_rootless(self):
        assert minimal_root(W("t1"), FREEZ) == (W("t1"), 1)

    def test_rotated_cube(self):
        root, degree = minimal_root(W("g0 t1") ** 3, FREEZ)
        assert (root, degree) == (W("g0 t1"), 3)

    def test_power_in_cyclic_edge_tower(self):
        a = nf_word(W("t2 g1") ** 2, MIXED)
        root, degree = minimal_root(a, MIXED)
        assert degree == 2
        assert nf_word(root ** 2, MIXED) == a

    def test_base_element_rejected(self):
        with pytest.raises(PreconditionViolated):
            minimal_root(W("g0^4"), MIXED)
        with pytest.raises(PreconditionViolated):
            minimal_root(W("e"), MIXED)

    def test_roots_are_unique_on_samples(self):
        # equal fourth powers force equal elements
        seen = {}
        for w in random_words(MIXED, 150, 4, seed=43):
            n = nf_word(w, MIXED)
            if not n or is_conjugate_into_base(n, MIXED, 2):
                continue
            p = nf_word(n ** 4, MIXED)
            if p in seen:
                assert seen[p] == n
            seen[p] = n


class TestCommutesAndCentralizers:
    def test_powers_commute(self):
        assert commutes(W("g0"), W("g0^2"), FREE)

    def test_free_generators_do_not(self):
        assert not commutes(W("g0"), W("g1"), FREE)

    def test_identity_commutes(self):
        assert commutes(W("e"), W("g0 g1"), FREE)

    def test_free_base_centralizer_ball(self):
        ball = {n.word for n in centralizer_ball(W("g0"), FREE, 2)}
        assert ball == {W("e"), W("g0"), W("g0^-1"), W("g0^2"), W("g0^-2")}

    def test_no_stable_letter_enters_centralizer(self):
        ball = centralizer_ball(W("g0"), HNN, 2)
        assert all(max_stage(n.word) == 0 for n in ball)

    def test_radius_zero(self):
        assert {n.word for n in centralizer_ball(W("g0"), FREE, 0)} == {W("e")}


class TestTorsionFreeness:
    def test_no_small_torsion(self):
        for tower in (HNN, MIXED):
            seen = 0
            for w in random_words(tower, 250, 6, seed=47):
                n = nf_word(w, tower)
                if n:
                    seen += 1
                    for k in range(2, 6):
                        assert nf_word(n ** k, tower) != W("e")
            assert seen > 100


class TestBallEnumeration:
    def test_rank_one_ball(self):
        assert [str(w) for w in ball_words(ExtensionTower(1), 2)] == [
            "e",
            "g0",
            "g0^-1",
            "g0^-2",
            "g0^2",
        ]

    def test_alphabet_grows_with_free_step(self):
        ball = ball_words(FREEZ, 1)
        assert {str(w) for w in ball} == {"e", "g0", "g0^-1", "g1", "g1^-1", "t1", "t1^-1"}


class TestTowerDescriptions:
    def test_round_trip(self):
        text = format_tower(MIXED)
        assert parse_tower(text).steps == MIXED.steps

    def test_multi_letter_edge_words(self):
        tower = ExtensionTower(2).extend_free().extend_hnn(W("g0 g1"), W("t1 g0"))
        again = parse_tower(format_tower(tower))
        assert again.steps == tower.steps

    def test_rejects_bad_headers(self):
        with pytest.raises(ValueError):
            parse_tower("rank=2\n")
        with pytest.raises(ValueError):
            parse_tower("base rank=2\nstep 2 freeZ\n")


@given(data=st.data())
@settings(max_examples=120, deadline=None)
def test_normal_form_idempotence_property(data):
    tower = data.draw(st.sampled_from(TOWERS))
    alphabet = tower.alphabet()
    letters = data.draw(st.lists(st.sampled_from(alphabet), max_size=8))
    w = Word()
    for piece in letters:
        w = w * piece
    n = nf_word(w, tower)
    assert nf_word(n, tower) == n
