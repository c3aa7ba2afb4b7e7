"""Finite-stage surrogates of two tower constructions over a free base.

The classical construction adjoins, per step, one stable letter ``T_st`` for
every ordered pair of nonidentity ball elements, forcing ``T_st s T_st^-1 = t``.
Centralizers blow up: triple products ``T_st T_rs T_tr`` over distinct pairs
``(r, s)`` all commute with ``t``, and there is one witness per pair.

The scheduled construction alternates free-product steps with cyclic-edge
steps ``t x t^-1 = z`` that conjugate a fixed element ``x`` onto queued
witnesses ``z``, chosen oldest-first.  A ledger tracks which elements are
certified conjugate to a power of ``x`` so far; condition checks probe, at
bounded radius, that each step grew the group, kept centralizers of ledger
elements inside the previous stage, preserved the root-rigidity property of
non-ledger elements, and made monotone conjugation progress.

The base here is a plain free group, so one-conjugacy-class behaviour of the
true starting group is not reproduced; the ledger records only certified
conjugations and every certificate is replayable.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .words import Word, generator, identity, max_stage, sort_key, stable
from .tower import (
    ExtensionTower,
    MembershipUndecided,
    NormalForm,
    PreconditionViolated,
    _free_root,
    _member,
    _nf,
    ball_words,
    commutes,
    cyclically_reduce,
    minimal_root,
    nf_word,
)


class InsufficientPairs(Exception):
    """The ball could not supply the requested number of witness pairs."""


# --------------------------------------------------------------------------
# conjugacy ledger
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LedgerEntry:
    key: Word          # canonical cyclic form of the certified element
    conjugator: Word   # c with  c x^power c^-1 == key
    power: int         # nonzero; negative powers certify inverses


def cyclic_key(w: Word, tower: ExtensionTower) -> tuple[Word, Word]:
    """Canonical representative of the cyclic word of ``w``.

    Returns ``(key, carrier)`` with ``carrier^-1 w carrier == key``; the key
    is the sort-minimal normal form over all rotations of the cyclically
    reduced form, so conjugates that differ by rotation share a key.
    """
    c, conj = cyclically_reduce(w, tower)
    top = tower.num_steps
    units = c.units()
    best = _nf(c, tower, top)
    carrier = conj
    for j in range(1, len(units)):
        rotated = _nf(Word(units[j:] + units[:j]), tower, top)
        if sort_key(rotated) < sort_key(best):
            best = rotated
            carrier = conj * Word(units[:j])
    return best, _nf(carrier, tower, top)


@dataclass(frozen=True)
class ConjugacyLedger:
    """Certificates for elements known conjugate to powers of ``x``."""

    x: Word
    entries: tuple[tuple[Word, LedgerEntry], ...] = ()

    def _index(self) -> dict[Word, LedgerEntry]:
        return dict(self.entries)

    def contains(self, w: Word, tower: ExtensionTower) -> bool:
        key, _ = cyclic_key(w, tower)
        return key in self._index()

    def with_element(self, y: Word, conjugator: Word, power: int, tower: ExtensionTower) -> "ConjugacyLedger":
        """Record ``y == conjugator x^power conjugator^-1`` (verified here)."""
        if power == 0:
            raise ValueError("ledger powers are nonzero")
        check = nf_word(conjugator * self.x ** power * conjugator.inverse(), tower)
        if check != nf_word(y, tower):
            raise ValueError(f"certificate does not verify: {conjugator}, {power} vs {y}")
        key, carrier = cyclic_key(y, tower)
        index = self._index()
        if key in index:
            return self
        cert = LedgerEntry(key, nf_word(carrier.inverse() * conjugator, tower), power)
        return ConjugacyLedger(self.x, self.entries + ((key, cert),))

    def verify(self, tower: ExtensionTower) -> bool:
        return all(
            nf_word(e.conjugator * self.x ** e.power * e.conjugator.inverse(), tower) == key
            for key, e in self.entries
        )

    def __len__(self) -> int:
        return len(self.entries)


# --------------------------------------------------------------------------
# scheduled tower construction
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QueueEntry:
    creation_stage: int
    witness: Word      # the pending conjugation target z
    key: Word          # cyclic key of z, used for deduplication


@dataclass(frozen=True)
class ConstructionState:
    tower: ExtensionTower
    x: Word
    radius: int
    power_bound: int
    g0_mode: str
    base_steps: int                      # steps belonging to the seed group
    ledger: ConjugacyLedger
    z_record: tuple[tuple[Word, Word], ...] = ()   # nf(y) -> chosen witness z_y
    z_queue: tuple[QueueEntry, ...] = ()
    consumed: tuple[tuple[int, Word], ...] = ()
    fallbacks: tuple[int, ...] = ()                # even steps that fell back to a free step
    fractions: tuple[tuple[float, float], ...] = ()  # (seed-ball fraction, current-ball fraction)

    @property
    def stage(self) -> int:
        return self.tower.num_steps - self.base_steps

    def power_window(self) -> int:
        return max(self.radius, self.power_bound) + 2

    def recorded_witness(self, y_nf: Word) -> Word | None:
        for k, z in self.z_record:
            if k == y_nf:
                return z
        return None


def _seed_ball(state: ConstructionState) -> tuple[Word, ...]:
    return ball_words(state.tower, state.radius, stage=state.base_steps)


def _ledger_fractions(state: ConstructionState) -> tuple[float, float]:
    seed = [w for w in _seed_ball(state) if w]
    cur = [w for w in ball_words(state.tower, state.radius) if w]
    in_seed = sum(1 for w in seed if state.ledger.contains(w, state.tower))
    in_cur = sum(1 for w in cur if state.ledger.contains(w, state.tower))
    return (in_seed / len(seed) if seed else 1.0, in_cur / len(cur) if cur else 1.0)


def root_witness(y: Word, tower: ExtensionTower) -> Word:
    """Minimal root of ``y`` transported back through its cyclic conjugator."""
    c, conj = cyclically_reduce(y, tower)
    if not c:
        raise PreconditionViolated("the identity has no root witness")
    if max_stage(c) == 0:
        base, _ = _free_root(c)
        return nf_word(conj * base * conj.inverse(), tower)
    root, _ = minimal_root(y, tower)
    return root


def z_witness(y: Word, state: ConstructionState) -> Word:
    """The stable conjugation target for ``y``: its minimal root, recorded on
    first sight and reused afterwards."""
    tower = state.tower
    y_nf = nf_word(y, tower)
    if not y_nf:
        raise PreconditionViolated("z witnesses exist only for nonidentity elements")
    if state.ledger.contains(y_nf, tower):
        raise PreconditionViolated("element is already certified conjugate to x")
    recorded = state.recorded_witness(y_nf)
    if recorded is not None:
        return recorded
    return root_witness(y_nf, tower)


def _scan_witnesses(state: ConstructionState) -> ConstructionState:
    """Enqueue witnesses for ball elements not yet certified conjugate to x."""
    tower = state.tower
    record = dict(state.z_record)
    queued = {entry.key for entry in state.z_queue}
    fresh: list[QueueEntry] = []
    undecided = 0
    for y in ball_words(tower, state.radius):
        if not y or state.ledger.contains(y, tower):
            continue
        if y in record:
            continue
        try:
            z = root_witness(y, tower)
        except MembershipUndecided:
            undecided += 1
            continue
        record[y] = z
        key, _ = cyclic_key(z, tower)
        if key in queued or state.ledger.contains(z, tower):
            continue
        queued.add(key)
        fresh.append(QueueEntry(state.stage, nf_word(z, tower), key))
    fresh.sort(key=lambda e: sort_key(e.witness))
    return replace(
        state,
        z_record=tuple(sorted(record.items(), key=lambda kv: sort_key(kv[0]))),
        z_queue=state.z_queue + tuple(fresh),
    )


def initial_state(
    radius: int = 2,
    power_bound: int = 4,
    g0_mode: str = "free",
    base_rank: int = 2,
    bound_floor: int = 16,
) -> ConstructionState:
    """Stage-0 state: seed group, distinguished element x = g0, seeded ledger."""
    if g0_mode not in ("free", "classical"):
        raise ValueError(f"unknown g0 mode {g0_mode!r}")
    tower = ExtensionTower(base_rank, bound_floor=bound_floor)
    if g0_mode == "classical":
        seed = classical_state(base_rank, bound_floor=bound_floor)
        seed = classical_step(seed, 1)
        tower = seed.tower
    x = generator(0)
    state = ConstructionState(
        tower=tower,
        x=x,
        radius=radius,
        power_bound=power_bound,
        g0_mode=g0_mode,
        base_steps=tower.num_steps,
        ledger=ConjugacyLedger(x),
    )
    ledger = state.ledger
    for n in range(1, state.power_window() + 1):
        ledger = ledger.with_element(x ** n, identity(), n, tower)
        ledger = ledger.with_element(x ** -n, identity(), -n, tower)
    state = replace(state, ledger=ledger)
    state = _scan_witnesses(state)
    return replace(state, fractions=(_ledger_fractions(state),))


def tower_step(state: ConstructionState) -> ConstructionState:
    """One construction step: odd steps adjoin a free factor, even steps
    conjugate x onto the oldest pending witness (falling back to a free step
    when the queue is exhausted)."""
    idx = state.stage + 1
    tower = state.tower
    ledger = state.ledger
    queue = list(state.z_queue)
    consumed = state.consumed
    fallbacks = state.fallbacks
    if idx % 2 == 1:
        new_tower = tower.extend_free()
    else:
        chosen = None
        remaining: list[QueueEntry] = []
        for entry in queue:
            if chosen is None and not ledger.contains(entry.witness, tower):
                chosen = entry
            else:
                remaining.append(entry)
        if chosen is None:
            new_tower = tower.extend_free()
            fallbacks = fallbacks + (idx,)
        else:
            queue = remaining
            z = chosen.witness
            new_tower = tower.extend_hnn(state.x, z)
            t_word = stable(new_tower.num_steps)
            for n in range(1, state.power_window() + 1):
                ledger = ledger.with_element(nf_word(z ** n, new_tower), t_word, n, new_tower)
                ledger = ledger.with_element(nf_word(z ** -n, new_tower), t_word, -n, new_tower)
            consumed = consumed + ((idx, z),)
    state = replace(
        state,
        tower=new_tower,
        ledger=ledger,
        z_queue=tuple(queue),
        consumed=consumed,
        fallbacks=fallbacks,
    )
    state = _scan_witnesses(state)
    return replace(state, fractions=state.fractions + (_ledger_fractions(state),))


def run_construction(stages: int, **kwargs) -> ConstructionState:
    state = initial_state(**kwargs)
    for _ in range(stages):
        state = tower_step(state)
    return state


# --------------------------------------------------------------------------
# condition checks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    stage: int
    fresh_letter: str
    growth_pass: bool
    centralizer_results: tuple[dict, ...]
    rigidity_results: tuple[dict, ...]
    fractions: tuple[tuple[float, float], ...]
    progress_pass: bool
    checked: int
    undecided: int
    violations: tuple[str, ...]

    @property
    def all_pass(self) -> bool:
        return self.growth_pass and self.progress_pass and not self.violations

    def to_tree(self) -> dict:
        return {
            "stage": self.stage,
            "fresh_letter": self.fresh_letter,
            "growth_pass": self.growth_pass,
            "centralizers": list(self.centralizer_results),
            "rigidity": list(self.rigidity_results),
            "seed_ball_fractions": [f[0] for f in self.fractions],
            "current_ball_fractions": [f[1] for f in self.fractions],
            "progress_pass": self.progress_pass,
            "checked": self.checked,
            "undecided": self.undecided,
            "violations": list(self.violations),
        }


def _candidate_pool(state: ConstructionState, minimum: int, seed: int) -> list[Word]:
    """Ball elements plus seeded random words, at least ``minimum`` distinct."""
    tower = state.tower
    pool = list(ball_words(tower, state.radius))
    seen = set(pool)
    rng = random.Random(f"cond-candidates-{seed}")
    alphabet = tower.alphabet()
    attempts = 0
    while len(pool) < minimum and attempts < 80 * minimum:
        attempts += 1
        w = identity()
        for _ in range(rng.randint(1, state.radius + 3)):
            w = w * rng.choice(alphabet)
        v = nf_word(w, tower)
        if v not in seen:
            seen.add(v)
            pool.append(v)
    return pool


def check_conditions(
    state: ConstructionState,
    radius: int | None = None,
    power_bound: int | None = None,
    min_centralizer_candidates: int = 1000,
    seed: int = 0,
) -> ConditionReport:
    """Probe the step conditions at bounded radius.

    Growth: the fresh stable letter is not absorbed.  Centralizers: ledger
    elements gain no centralizing element involving the newest letter.
    Rigidity: for non-ledger ball elements y with witness z, any conjugate
    ``w y^m w^-1`` landing in <z> forces w into <z>.  Progress: the fraction
    of the seed ball certified conjugate to x never decreases.  Undecided
    membership searches are counted, never silently dropped.
    """
    if state.stage < 1:
        raise PreconditionViolated("condition checks need at least one step")
    tower = state.tower
    radius = state.radius if radius is None else radius
    power_bound = state.power_bound if power_bound is None else power_bound
    top = tower.num_steps
    checked = 0
    undecided = 0
    violations: list[str] = []

    fresh = stable(top)
    growth_pass = bool(nf_word(fresh, tower)) and max_stage(nf_word(fresh, tower)) == top

    ball = ball_words(tower, radius)
    pool = _candidate_pool(state, min_centralizer_candidates, seed)

    centralizer_results = []
    ledger_ball = [y for y in ball if y and state.ledger.contains(y, tower)]
    for y in ledger_ball:
        bad: list[str] = []
        local_undecided = 0
        for k in pool:
            checked += 1
            try:
                if commutes(k, y, tower) and max_stage(nf_word(k, tower)) == top:
                    bad.append(str(k))
            except MembershipUndecided:
                local_undecided += 1
        undecided += local_undecided
        if bad:
            violations.extend(f"centralizer:{y}:{k}" for k in bad[:4])
        centralizer_results.append(
            {
                "element": str(y),
                "candidates": len(pool),
                "violations": bad[:8],
                "undecided": local_undecided,
            }
        )

    rigidity_results = []
    outside = [y for y in ball if y and not state.ledger.contains(y, tower)]
    for y in outside:
        try:
            z = z_witness(y, state)
        except MembershipUndecided:
            undecided += 1
            continue
        bad = []
        local_undecided = 0
        for w in ball:
            winv = w.inverse()
            acc = w
            for m in range(1, power_bound + 1):
                checked += 1
                try:
                    acc = _nf(acc * y, tower, top)
                    conj = _nf(acc * winv, tower, top)
                    if _member(conj, z, tower, top) is None:
                        continue
                    if _member(w, z, tower, top) is None:
                        bad.append(f"{y}|{w}|{m}")
                except MembershipUndecided:
                    local_undecided += 1
        undecided += local_undecided
        if bad:
            violations.extend(f"rigidity:{item}" for item in bad[:4])
        rigidity_results.append(
            {
                "element": str(y),
                "witness": str(z),
                "tuples": len(ball) * power_bound,
                "violations": bad[:8],
                "undecided": local_undecided,
            }
        )

    seed_fracs = [f[0] for f in state.fractions]
    progress_pass = all(a <= b + 1e-12 for a, b in zip(seed_fracs, seed_fracs[1:]))

    return ConditionReport(
        stage=state.stage,
        fresh_letter=str(fresh),
        growth_pass=growth_pass,
        centralizer_results=tuple(centralizer_results),
        rigidity_results=tuple(rigidity_results),
        fractions=state.fractions,
        progress_pass=progress_pass,
        checked=checked,
        undecided=undecided,
        violations=tuple(violations),
    )


# --------------------------------------------------------------------------
# classical construction
# --------------------------------------------------------------------------


class ClassicalState:
    """Growing register of pair letters ``T_st`` over a free base.

    ``classical_step`` is functional; the witness search below registers
    missing pair letters in place, mirroring how the full construction has
    every pair letter available from the start.
    """

    def __init__(self, base_rank: int = 2, bound_floor: int = 16):
        self.tower = ExtensionTower(base_rank, bound_floor=bound_floor)
        self.snapshots: tuple[ExtensionTower, ...] = (self.tower,)
        self.pair_stage: dict[tuple[Word, Word], int] = {}

    def copy(self) -> "ClassicalState":
        dup = ClassicalState(self.tower.base_rank, self.tower.bound_floor)
        dup.tower = self.tower
        dup.snapshots = self.snapshots
        dup.pair_stage = dict(self.pair_stage)
        return dup

    def register_pair(self, s: Word, t: Word) -> int:
        key = (s, t)
        stage = self.pair_stage.get(key)
        if stage is None:
            self.tower = self.tower.extend_hnn(s, t)
            stage = self.tower.num_steps
            self.pair_stage[key] = stage
        return stage


def classical_state(base_rank: int = 2, bound_floor: int = 16) -> ClassicalState:
    return ClassicalState(base_rank, bound_floor)


def classical_step(state: ClassicalState, ball_radius: int) -> ClassicalState:
    """Adjoin ``T_st`` for every ordered pair of nonidentity normal forms in
    the current ball (finite surrogate of the full pair set)."""
    if ball_radius < 0:
        raise ValueError("ball radius must be nonnegative")
    new = state.copy()
    ball = [w for w in ball_words(state.tower, ball_radius) if w]
    for s in ball:
        for t in ball:
            new.register_pair(s, t)
    new.snapshots = new.snapshots + (new.tower,)
    return new


def classical_centralizer_witnesses(state: ClassicalState, t_elt: Word, count: int, max_radius: int = 3) -> set[NormalForm]:
    """Pairwise distinct elements ``T_st T_rs T_tr`` commuting with ``t_elt``,
    one per ordered pair ``(r, s)`` drawn from base balls of growing radius.

    Pair letters not yet present are registered into ``state`` on demand.
    Raises :class:`InsufficientPairs` when the allowed balls cannot supply
    ``count`` distinct pairs.
    """
    if count < 1:
        raise PreconditionViolated("witness count must be positive")
    t_nf = nf_word(t_elt, state.tower)
    if not t_nf or max_stage(t_nf) != 0:
        raise PreconditionViolated("the centralized element must be a nonidentity base element")
    witnesses: list[NormalForm] = []
    seen: set[Word] = set()
    tried: set[tuple[Word, Word]] = set()
    base = state.tower.truncate(0)
    for radius in range(1, max_radius + 1):
        pool = [w for w in ball_words(base, radius) if w]
        for r in pool:
            for s in pool:
                if (r, s) in tried:
                    continue
                tried.add((r, s))
                st_stage = state.register_pair(s, t_nf)
                rs_stage = state.register_pair(r, s)
                tr_stage = state.register_pair(t_nf, r)
                word = stable(st_stage) * stable(rs_stage) * stable(tr_stage)
                wit = nf_word(word, state.tower)
                if wit in seen:
                    continue
                if not commutes(wit, t_nf, state.tower):
                    raise AssertionError(f"witness {wit} fails to centralize {t_nf}")
                seen.add(wit)
                witnesses.append(NormalForm(wit, state.tower.num_steps))
                if len(witnesses) >= count:
                    return set(witnesses)
    raise InsufficientPairs(f"only {len(witnesses)} of {count} witnesses within radius {max_radius}")
