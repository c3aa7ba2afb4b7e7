"""Bounded brute-force verifiers for the tower conjugacy and root lemmas.

Every oracle scans tuples drawn from a ball of normal forms, evaluates a
predicate, and reports one of four outcomes: a pass backed by at least one
premise-satisfying tuple, a vacuous pass when no tuple met the premise, a
counterexample carrying replayable witness words, or an undecided verdict
when bounded membership searches could not certify every tuple.  Identical
specs (including the seed) give identical verdicts.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .words import Word, identity, t_length
from .tower import (
    ExtensionTower,
    MembershipUndecided,
    NormalForm,
    PreconditionViolated,
    ball_words,
    commutes,
    cyclically_reduce,
    in_cyclic,
    is_conjugate_into_base,
    minimal_root,
    nf_word,
)
from .constructions import root_witness

MAX_RADIUS = 6
# all tuples are enumerated when the full product is at most this size
EXHAUSTIVE_TUPLES = 40_000

PASS = "pass"
VACUOUS = "vacuous_pass"
COUNTEREXAMPLE = "counterexample"
UNDECIDED = "undecided"


class CapExceeded(Exception):
    """The ball holds more distinct normal forms than the configured cap."""


@dataclass(frozen=True)
class BallSpec:
    radius: int
    stage: int | None = None
    sample_cap: int = 4000
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.radius <= MAX_RADIUS:
            raise ValueError(f"radius must lie in 0..{MAX_RADIUS}")
        if self.sample_cap < 1:
            raise ValueError("sample cap must be positive")


@dataclass(frozen=True)
class OracleVerdict:
    lemma_id: str
    outcome: str
    witnesses: tuple[tuple[str, ...], ...] = ()
    checked: int = 0
    premise_hits: int = 0
    undecided: int = 0

    @property
    def is_ok(self) -> bool:
        return self.outcome in (PASS, VACUOUS)

    def to_tree(self) -> dict:
        return {
            "lemma": self.lemma_id,
            "outcome": self.outcome,
            "checked": self.checked,
            "premise_hits": self.premise_hits,
            "undecided": self.undecided,
            "witnesses": [list(w) for w in self.witnesses],
        }


def _ball(spec: BallSpec, tower: ExtensionTower) -> tuple[Word, ...]:
    ball = ball_words(tower, spec.radius, stage=spec.stage)
    if len(ball) > spec.sample_cap:
        raise CapExceeded(f"{len(ball)} normal forms exceed cap {spec.sample_cap}")
    return ball


def enumerate_ball(spec: BallSpec, tower: ExtensionTower) -> tuple[NormalForm, ...]:
    """All distinct normal forms of words of unit length <= radius, sorted."""
    stage = tower.num_steps if spec.stage is None else spec.stage
    return tuple(NormalForm(w, stage) for w in _ball(spec, tower))


def _tuples(items: tuple[Word, ...], arity: int, spec: BallSpec):
    """Deterministic tuple stream: exhaustive when small, seeded sample else."""
    total = len(items) ** arity
    if total <= EXHAUSTIVE_TUPLES:
        yield from itertools.product(items, repeat=arity)
        return
    rng = random.Random(f"{spec.seed}:{arity}:{len(items)}")
    for _ in range(spec.sample_cap):
        yield tuple(rng.choice(items) for _ in range(arity))


def _verdict(lemma_id, checked, hits, undecided, witnesses) -> OracleVerdict:
    if witnesses:
        outcome = COUNTEREXAMPLE
    elif undecided:
        outcome = UNDECIDED
    elif hits == 0:
        outcome = VACUOUS
    else:
        outcome = PASS
    return OracleVerdict(lemma_id, outcome, tuple(witnesses), checked, hits, undecided)


def _eligible(w: Word, tower: ExtensionTower) -> bool:
    """Not conjugate into the stage below the top step."""
    return not is_conjugate_into_base(w, tower, tower.num_steps)


# --------------------------------------------------------------------------
# predicates (shared by scans and counterexample replay)
# --------------------------------------------------------------------------


def square_inverse_pair_conjugate(tower: ExtensionTower, a: Word, b: Word) -> bool | None:
    """Premise: ab != e and ab = (ba)^-1.  Conclusion: ab is conjugate into
    the stage below the final free-product step.  None = premise unmet."""
    ab = nf_word(a * b, tower)
    if not ab:
        return None
    if nf_word(a * b * b * a, tower):
        return None
    return is_conjugate_into_base(ab, tower, tower.num_steps)


def powers_stay_outside(tower: ExtensionTower, a: Word, n: int) -> bool | None:
    if not _eligible(a, tower):
        return None
    return _eligible(nf_word(a ** n, tower), tower)


def common_cyclic_centralizer(tower: ExtensionTower, w: Word, c: Word, a: Word) -> bool | None:
    """Premise: w, c, a pairwise commute and a is not conjugate into the
    previous stage.  Conclusion: w and c are powers of one root."""
    if not commutes(w, c, tower) or not commutes(a, w, tower) or not commutes(a, c, tower):
        return None
    if not _eligible(a, tower):
        return None
    w_nf, c_nf = nf_word(w, tower), nf_word(c, tower)
    if not w_nf and not c_nf:
        return True
    base = max((c_nf, w_nf), key=lambda u: (t_length(u), bool(u)))
    root = root_witness(base, tower)
    return in_cyclic(w_nf, root, tower) is not None and in_cyclic(c_nf, root, tower) is not None


def root_of_cyclically_reduced_power(tower: ExtensionTower, zeta: Word, n: int) -> bool | None:
    """If zeta^n is a cyclically reduced word, zeta must be one too."""
    if not _eligible(zeta, tower):
        return None
    z_nf = nf_word(zeta, tower)
    power = nf_word(z_nf ** n, tower)
    if cyclically_reduce(power, tower)[1]:
        return None
    return not cyclically_reduce(z_nf, tower)[1]


def minimal_root_bound(tower: ExtensionTower, a: Word) -> bool | None:
    if not _eligible(a, tower):
        return None
    root, degree = minimal_root(a, tower)
    cyc, _ = cyclically_reduce(a, tower)
    if degree > max(t_length(cyc), 1):
        return False
    if nf_word(root ** degree, tower) != nf_word(a, tower):
        return False
    _, again = minimal_root(root, tower)
    return again == 1


def equal_powers_equal(tower: ExtensionTower, a: Word, b: Word, n: int) -> bool | None:
    if not _eligible(a, tower) or not _eligible(b, tower):
        return None
    if nf_word(a ** n, tower) != nf_word(b ** n, tower):
        return None
    return nf_word(a, tower) == nf_word(b, tower)


def rootless_power_rigidity(tower: ExtensionTower, a: Word, b: Word, n: int, m: int) -> bool | None:
    if not _eligible(a, tower) or not _eligible(b, tower):
        return None
    if minimal_root(a, tower)[1] != 1 or minimal_root(b, tower)[1] != 1:
        return None
    if nf_word(a ** n, tower) != nf_word(b ** m, tower):
        return None
    return n == m and nf_word(a, tower) == nf_word(b, tower)


def has_no_small_torsion(tower: ExtensionTower, w: Word, order_bound: int) -> bool | None:
    if not nf_word(w, tower):
        return None
    return all(nf_word(w ** k, tower) for k in range(2, order_bound + 1))


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------


def check_aabb(spec: BallSpec, tower: ExtensionTower) -> OracleVerdict:
    if tower.num_steps == 0 or not tower.steps[-1].is_free:
        raise PreconditionViolated("this check needs a final free-product step")
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    for a, b in _tuples(ball, 2, spec):
        checked += 1
        try:
            res = square_inverse_pair_conjugate(tower, a, b)
        except MembershipUndecided:
            undecided += 1
            continue
        if res is None:
            continue
        hits += 1
        if not res:
            witnesses.append((str(a), str(b)))
    return _verdict("aabb", checked, hits, undecided, witnesses)


def check_dodatkowy(spec: BallSpec, tower: ExtensionTower, power_bound: int = 4) -> OracleVerdict:
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    for a in ball:
        for n in range(1, power_bound + 1):
            checked += 1
            try:
                res = powers_stay_outside(tower, a, n)
            except MembershipUndecided:
                undecided += 1
                continue
            if res is None:
                continue
            hits += 1
            if not res:
                witnesses.append((str(a), str(n)))
    return _verdict("dodatkowy", checked, hits, undecided, witnesses)


def check_cent(spec: BallSpec, tower: ExtensionTower) -> OracleVerdict:
    """Scan commuting pairs first, then complete them with a commuting third
    element; this keeps the triple scan exhaustive at small radius."""
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    pairs = []
    for w, c in _tuples(ball, 2, spec):
        try:
            if commutes(w, c, tower):
                pairs.append((w, c))
        except MembershipUndecided:
            undecided += 1
    for w, c in pairs:
        for a in ball:
            checked += 1
            try:
                res = common_cyclic_centralizer(tower, w, c, a)
            except MembershipUndecided:
                undecided += 1
                continue
            if res is None:
                continue
            hits += 1
            if not res:
                witnesses.append((str(w), str(c), str(a)))
    return _verdict("cent", checked, hits, undecided, witnesses)


def check_cykr(spec: BallSpec, tower: ExtensionTower, power_bound: int = 3) -> OracleVerdict:
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    for zeta in ball:
        for n in range(1, power_bound + 1):
            checked += 1
            try:
                res = root_of_cyclically_reduced_power(tower, zeta, n)
            except MembershipUndecided:
                undecided += 1
                continue
            if res is None:
                continue
            hits += 1
            if not res:
                witnesses.append((str(zeta), str(n)))
    return _verdict("cykr", checked, hits, undecided, witnesses)


def check_ip(spec: BallSpec, tower: ExtensionTower) -> OracleVerdict:
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    for a in ball:
        checked += 1
        try:
            res = minimal_root_bound(tower, a)
        except MembershipUndecided:
            undecided += 1
            continue
        if res is None:
            continue
        hits += 1
        if not res:
            witnesses.append((str(a),))
    return _verdict("ip", checked, hits, undecided, witnesses)


def _power_profiles(ball, tower, power_bound, rootless_only):
    """Per eligible ball element: its normal-form powers up to the bound.

    The hot pair scans only compare these precomputed words; the predicate
    functions above stay as the replay reference.
    """
    profiles = []
    for a in ball:
        if not _eligible(a, tower):
            continue
        if rootless_only and minimal_root(a, tower)[1] != 1:
            continue
        profiles.append((a, tuple(nf_word(a ** n, tower) for n in range(1, power_bound + 1))))
    return profiles


def check_nn(spec: BallSpec, tower: ExtensionTower, power_bound: int = 4) -> OracleVerdict:
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    profiles = _power_profiles(ball, tower, power_bound, rootless_only=False)
    pool = tuple(p[0] for p in profiles)
    powers = dict(profiles)
    for a, b in _tuples(pool, 2, spec):
        for n in range(1, power_bound + 1):
            checked += 1
            if powers[a][n - 1] != powers[b][n - 1]:
                continue
            hits += 1
            if nf_word(a, tower) != nf_word(b, tower):
                witnesses.append((str(a), str(b), str(n)))
    checked += (len(ball) - len(pool)) * power_bound  # ineligible elements, premise unmet
    return _verdict("nn", checked, hits, undecided, witnesses)


def check_jsc(spec: BallSpec, tower: ExtensionTower, power_bound: int = 4) -> OracleVerdict:
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    profiles = _power_profiles(ball, tower, power_bound, rootless_only=True)
    pool = tuple(p[0] for p in profiles)
    powers = dict(profiles)
    for a, b in _tuples(pool, 2, spec):
        for n in range(1, power_bound + 1):
            for m in range(1, power_bound + 1):
                checked += 1
                if powers[a][n - 1] != powers[b][m - 1]:
                    continue
                hits += 1
                if n != m or nf_word(a, tower) != nf_word(b, tower):
                    witnesses.append((str(a), str(b), str(n), str(m)))
    return _verdict("jsc", checked, hits, undecided, witnesses)


def check_torsion(spec: BallSpec, tower: ExtensionTower, order_bound: int = 5) -> OracleVerdict:
    ball = _ball(spec, tower)
    checked = hits = undecided = 0
    witnesses = []
    for w in ball:
        checked += 1
        try:
            res = has_no_small_torsion(tower, w, order_bound)
        except MembershipUndecided:
            undecided += 1
            continue
        if res is None:
            continue
        hits += 1
        if not res:
            witnesses.append((str(w),))
    return _verdict("torsion", checked, hits, undecided, witnesses)


# --------------------------------------------------------------------------
# standard suite
# --------------------------------------------------------------------------


def standard_towers(bound_floor: int = 16) -> dict[str, ExtensionTower]:
    """The two reference towers the suite runs on: a free-product step on a
    rank-2 base, and the same plus a cyclic-edge step conjugating g0 onto
    the free letter."""
    from .words import generator, stable as stable_word

    free_top = ExtensionTower(2, bound_floor=bound_floor).extend_free()
    mixed = free_top.extend_hnn(generator(0), stable_word(1))
    return {"free_z": free_top, "hnn": mixed}


def run_standard_suite(
    radius: int = 3,
    power_bound: int = 4,
    order_bound: int = 5,
    sample_cap: int = 4000,
    seed: int = 0,
) -> list[tuple[str, OracleVerdict]]:
    """All eight oracles over the reference towers, with per-tower radii
    trimmed so pair scans stay exhaustive where the ball allows."""
    towers = standard_towers()
    results: list[tuple[str, OracleVerdict]] = []

    def spec(r: int) -> BallSpec:
        return BallSpec(radius=min(r, radius), sample_cap=sample_cap, seed=seed)

    free_top = towers["free_z"]
    mixed = towers["hnn"]
    results.append(("free_z", check_aabb(spec(radius), free_top)))
    for name, tower, pair_radius in (("free_z", free_top, radius), ("hnn", mixed, 2)):
        results.append((name, check_dodatkowy(spec(radius), tower, power_bound)))
        results.append((name, check_cent(spec(2), tower)))
        results.append((name, check_cykr(spec(radius), tower, min(power_bound, 3))))
        results.append((name, check_ip(spec(radius), tower)))
        results.append((name, check_nn(spec(pair_radius), tower, power_bound)))
        results.append((name, check_jsc(spec(pair_radius), tower, power_bound)))
        results.append((name, check_torsion(spec(radius), tower, order_bound)))
    return results


def random_word(rng: random.Random, tower: ExtensionTower, max_units: int) -> Word:
    """Seeded random word of at most ``max_units`` unit letters."""
    alphabet = tower.alphabet()
    w = identity()
    for _ in range(rng.randint(0, max_units)):
        w = w * rng.choice(alphabet)
    return w
