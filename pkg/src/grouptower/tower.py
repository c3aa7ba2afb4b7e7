"""Relation-aware word calculus over layered extension towers.

A tower starts from a free group of a given rank and grows one step at a
time.  Each step adjoins a fresh stable letter ``t`` and is either

* a free product with Z (the associated subgroups are trivial), or
* a cyclic-edge extension ``t source t^-1 = target`` identifying the cyclic
  subgroups generated by ``source`` and ``target`` of the tower built so far.

On top of the resulting groups this module provides reduction to pinch-free
words, canonical normal forms (so word equality decides group equality),
cyclic reduction, conjugacy-into-stage tests, bounded cyclic-subgroup
membership, root extraction, commutation tests and centralizer balls.

Membership in a cyclic subgroup is only semi-decidable by power search; the
searches here are bounded and certify absence via monotone growth of
normal-form lengths.  When neither a match nor a certificate is found inside
the bound, :class:`MembershipUndecided` is raised rather than guessing.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .words import (
    GENERATOR,
    STABLE,
    IDENTITY,
    Letter,
    Word,
    max_stage,
    parse_word,
    sort_key,
    stable,
)


class MembershipUndecided(Exception):
    """A bounded membership or coset search ended without a certificate.

    Raising instead of returning keeps wrong answers out of normal forms;
    the caller can retry with a larger bound.
    """


class PreconditionViolated(ValueError):
    """An operation was applied outside its stated domain."""


@dataclass(frozen=True)
class ExtensionStep:
    """One tower step; ``source is None`` marks a free product with Z."""

    stage: int
    source: Word | None = None
    target: Word | None = None

    def __post_init__(self) -> None:
        if self.stage < 1:
            raise ValueError("steps are numbered from 1")
        if (self.source is None) != (self.target is None):
            raise ValueError("source and target must be given together")
        if self.source is not None:
            if not self.source or not self.target:
                raise ValueError("cyclic-edge subgroups need nonidentity generators")
            if max_stage(self.source) >= self.stage or max_stage(self.target) >= self.stage:
                raise ValueError("edge words must live strictly below their step")

    @property
    def is_free(self) -> bool:
        return self.source is None

    @property
    def letter(self) -> Word:
        return stable(self.stage)


@dataclass(frozen=True, eq=False)
class ExtensionTower:
    """A base free group plus an ordered sequence of extension steps.

    ``bound_floor`` is the minimum |k| window for bounded power searches and
    is part of the tower value so results are reproducible.
    """

    base_rank: int
    steps: tuple[ExtensionStep, ...] = ()
    bound_floor: int = 16

    def __post_init__(self) -> None:
        if self.base_rank < 1:
            raise ValueError("base rank must be positive")
        if self.bound_floor < 4:
            raise ValueError("bound floor is unusably small")
        for i, step in enumerate(self.steps, start=1):
            if step.stage != i:
                raise ValueError(f"step {i} carries stage {step.stage}")
        # towers key every memoized engine call; hashing must not walk the
        # steps each time
        object.__setattr__(self, "_hash", hash((self.base_rank, self.steps, self.bound_floor)))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExtensionTower)
            and self.base_rank == other.base_rank
            and self.bound_floor == other.bound_floor
            and self.steps == other.steps
        )

    def __hash__(self) -> int:
        return self._hash

    @property
    def num_steps(self) -> int:
        return len(self.steps)

    def step(self, stage: int) -> ExtensionStep:
        return self.steps[stage - 1]

    def truncate(self, stage: int) -> "ExtensionTower":
        """The tower consisting of the first ``stage`` steps."""
        if not 0 <= stage <= self.num_steps:
            raise ValueError(f"no stage {stage} in this tower")
        return ExtensionTower(self.base_rank, self.steps[:stage], self.bound_floor)

    def extend_free(self) -> "ExtensionTower":
        step = ExtensionStep(self.num_steps + 1)
        return ExtensionTower(self.base_rank, self.steps + (step,), self.bound_floor)

    def extend_hnn(self, source: Word, target: Word) -> "ExtensionTower":
        """Adjoin ``t source t^-1 = target``; edge words are canonicalized first."""
        src = _nf(source, self, self.num_steps)
        tgt = _nf(target, self, self.num_steps)
        if not src or not tgt:
            raise PreconditionViolated("edge words must be nonidentity")
        step = ExtensionStep(self.num_steps + 1, src, tgt)
        return ExtensionTower(self.base_rank, self.steps + (step,), self.bound_floor)

    def validate_word(self, w: Word) -> None:
        for lt in w.letters:
            if lt.kind == GENERATOR and lt.index >= self.base_rank:
                raise ValueError(f"generator g{lt.index} outside base of rank {self.base_rank}")
            if lt.kind == STABLE and lt.index > self.num_steps:
                raise ValueError(f"stable letter t{lt.index} outside tower of {self.num_steps} steps")

    def alphabet(self, stage: int | None = None) -> tuple[Word, ...]:
        """Unit letters (and inverses) available at ``stage``, in fixed order."""
        stage = self.num_steps if stage is None else stage
        units: list[Word] = []
        for i in range(self.base_rank):
            units.append(Word((Letter(GENERATOR, i, 1),)))
            units.append(Word((Letter(GENERATOR, i, -1),)))
        for s in range(1, stage + 1):
            units.append(Word((Letter(STABLE, s, 1),)))
            units.append(Word((Letter(STABLE, s, -1),)))
        return tuple(units)


@dataclass(frozen=True)
class NormalForm:
    """A canonical word together with the stage where canonicality holds."""

    word: Word
    tower_stage: int

    def __str__(self) -> str:
        return str(self.word)


# --------------------------------------------------------------------------
# internal engine
# --------------------------------------------------------------------------


def _split(word: Word, stage: int) -> tuple[list[Word], list[int]]:
    """Split at unit occurrences of the stage letter.

    Returns ``segments, signs`` with ``len(segments) == len(signs) + 1``;
    segments contain no stage letter.
    """
    segments: list[Word] = []
    signs: list[int] = []
    current: list[Letter] = []
    for lt in word.letters:
        if lt.kind == STABLE and lt.index == stage:
            sign = 1 if lt.exponent > 0 else -1
            for _ in range(abs(lt.exponent)):
                segments.append(Word(current))
                current = []
                signs.append(sign)
        else:
            current.append(lt)
    segments.append(Word(current))
    return segments, signs


def _assemble(segments: list[Word], signs: list[int], stage: int) -> Word:
    letters: list[Letter] = list(segments[0].letters)
    for sign, seg in zip(signs, segments[1:]):
        letters.append(Letter(STABLE, stage, sign))
        letters.extend(seg.letters)
    return Word(letters)


def _effective_stage(word: Word, stage: int) -> int:
    return min(stage, max_stage(word))


@lru_cache(maxsize=1 << 20)
def _reduce(word: Word, tower: ExtensionTower, stage: int, leftmost: bool) -> Word:
    """Eliminate pinches and stable-letter cancellations at stages <= stage."""
    s = _effective_stage(word, stage)
    if s == 0:
        return word
    step = tower.step(s)
    segments, signs = _split(word, s)
    segments = [_reduce(seg, tower, s - 1, leftmost) for seg in segments]
    while True:
        m = len(signs)
        positions = range(m - 1) if leftmost else range(m - 2, -1, -1)
        hit = None
        for i in positions:
            if signs[i] != -signs[i + 1]:
                continue
            interior = segments[i + 1]
            if step.is_free:
                if not interior:
                    hit = (i, IDENTITY)
                    break
            else:
                gen, other = (step.source, step.target) if signs[i] > 0 else (step.target, step.source)
                k = _member(interior, gen, tower, s - 1)
                if k is not None:
                    hit = (i, _power_word(other, k, tower, s - 1))
                    break
        if hit is None:
            break
        i, image = hit
        merged = _reduce(segments[i] * image * segments[i + 2], tower, s - 1, leftmost)
        segments[i : i + 3] = [merged]
        del signs[i : i + 2]
    if not signs:
        return segments[0]
    return _assemble(segments, signs, s)


@lru_cache(maxsize=1 << 20)
def _nf(word: Word, tower: ExtensionTower, stage: int) -> Word:
    """Canonical form: reduce, then rewrite each post-letter segment to its
    coset-transversal representative, pushing the cyclic part across the
    stable letter (right to left, so pushes land before decomposition)."""
    s = _effective_stage(word, stage)
    if s == 0:
        return word
    reduced = _reduce(word, tower, s, True)
    s = _effective_stage(reduced, s)
    if s == 0:
        return reduced
    step = tower.step(s)
    segments, signs = _split(reduced, s)
    for i in range(len(signs), 0, -1):
        if step.is_free:
            segments[i] = _nf(segments[i], tower, s - 1)
            continue
        if signs[i - 1] > 0:
            gen, other = step.source, step.target
        else:
            gen, other = step.target, step.source
        k, rep = _coset(segments[i], gen, tower, s - 1)
        segments[i] = rep
        if k:
            segments[i - 1] = segments[i - 1] * _power_word(other, k, tower, s - 1)
    segments[0] = _nf(segments[0], tower, s - 1)
    return _assemble(segments, signs, s)


class _PowerTable:
    """Lazily extended table of normal forms of powers of one word.

    Supports membership queries ``w == base^k`` with a growth certificate:
    once three consecutive power lengths strictly increase past the query
    length, larger powers cannot match.
    """

    __slots__ = ("base", "tower", "stage", "words", "lengths", "index")

    def __init__(self, base: Word, tower: ExtensionTower, stage: int):
        self.base = base
        self.tower = tower
        self.stage = stage
        inv = _nf(base.inverse(), tower, stage)
        self.words = {0: IDENTITY, 1: base, -1: inv}
        self.lengths = {1: [base.unit_length], -1: [inv.unit_length]}
        self.index: dict[Word, int] = {IDENTITY: 0, base: 1}
        self.index.setdefault(inv, -1)

    def _extend(self, side: int) -> None:
        ks = self.lengths[side]
        k = (len(ks) + 1) * side
        nxt = _nf(self.words[k - side] * self.words[side], self.tower, self.stage)
        self.words[k] = nxt
        ks.append(nxt.unit_length)
        self.index.setdefault(nxt, k)

    def _certified(self, side: int, length: int, upto: int) -> bool:
        ks = self.lengths[side]
        run = 0
        prev = None
        for i in range(min(len(ks), upto)):
            cur = ks[i]
            if cur > length and (prev is None or cur > prev):
                run += 1
                if run >= 3:
                    return True
            else:
                run = 0
            prev = cur
        return False

    def power(self, k: int) -> Word:
        side = 1 if k >= 0 else -1
        while abs(k) > len(self.lengths[side]):
            self._extend(side)
        return self.words[k]

    def locate(self, w: Word, bound: int) -> int | None:
        if w == IDENTITY:
            return 0
        length = w.unit_length
        undecided = False
        for side in (1, -1):
            while True:
                k = self.index.get(w)
                if k is not None:
                    return k
                if self._certified(side, length, len(self.lengths[side])):
                    break
                if len(self.lengths[side]) >= bound:
                    undecided = True
                    break
                self._extend(side)
        if undecided:
            raise MembershipUndecided(
                f"no power of {self.base} matched {w} within |k| <= {bound} and no growth certificate"
            )
        return None


_power_tables: dict[tuple[Word, ExtensionTower, int], _PowerTable] = {}


def _table(base: Word, tower: ExtensionTower, stage: int) -> _PowerTable:
    key = (base, tower, stage)
    table = _power_tables.get(key)
    if table is None:
        table = _PowerTable(base, tower, stage)
        _power_tables[key] = table
    return table


def _power_word(base: Word, k: int, tower: ExtensionTower, stage: int) -> Word:
    if k == 0:
        return IDENTITY
    nfb = _nf(base, tower, stage)
    if len(nfb.letters) == 1:
        lt = nfb.letters[0]
        return Word((Letter(lt.kind, lt.index, lt.exponent * k),))
    return _table(nfb, tower, stage).power(k)


def _member(w: Word, gen: Word, tower: ExtensionTower, stage: int, bound: int | None = None) -> int | None:
    """k with w == gen^k in the stage group, or None; may raise MembershipUndecided."""
    nfw = _nf(w, tower, stage)
    nfg = _nf(gen, tower, stage)
    if not nfg:
        raise PreconditionViolated("membership in the trivial subgroup has no generator")
    if not nfw:
        return 0
    if len(nfg.letters) == 1:
        # powers of a single run are single runs; matching is exact arithmetic
        glt = nfg.letters[0]
        if len(nfw.letters) != 1:
            return None
        wlt = nfw.letters[0]
        if wlt.symbol != glt.symbol or wlt.exponent % glt.exponent:
            return None
        return wlt.exponent // glt.exponent
    if bound is None:
        bound = max(nfw.unit_length, tower.bound_floor)
    return _table(nfg, tower, stage).locate(nfw, bound)


@lru_cache(maxsize=1 << 18)
def _coset(a: Word, gen: Word, tower: ExtensionTower, stage: int) -> tuple[int, Word]:
    """Decompose ``a = gen^k * rep`` with ``rep`` the canonical representative
    of the right coset <gen>*a.

    The representative minimizes (unit length, text) over the coset; the
    search stops on each side after three consecutive length increases past
    the best candidate seen, which certifies the global minimum.
    """
    nfa = _nf(a, tower, stage)
    nfg = _nf(gen, tower, stage)
    if not nfg:
        raise PreconditionViolated("coset decomposition needs a nonidentity generator")
    if (
        len(nfg.letters) == 1
        and nfg.letters[0].kind == GENERATOR
        and abs(nfg.letters[0].exponent) == 1
    ):
        # base-generator unit: prepending powers cannot pinch or cancel past
        # the leading run, so stripping that run is the unique minimum
        # (false for stable-letter generators, whose powers can pinch into
        # the remainder)
        sym = nfg.letters[0].symbol
        sign = nfg.letters[0].exponent
        if nfa.letters and nfa.letters[0].symbol == sym:
            k = nfa.letters[0].exponent * sign
            return k, _nf(Word(nfa.letters[1:]), tower, stage)
        return 0, nfa
    best_k, best = 0, nfa
    best_key = sort_key(nfa)
    window = max(nfa.unit_length, tower.bound_floor) + 4
    undecided = False
    for side in (1, -1):
        run = 0
        prev = None
        for i in range(1, window + 1):
            k = i * side
            cand = _nf(_power_word(nfg, -k, tower, stage) * nfa, tower, stage)
            key = sort_key(cand)
            if key < best_key:
                best_k, best, best_key = k, cand, key
                run, prev = 0, None
                continue
            cur = cand.unit_length
            if cur > best.unit_length and (prev is None or cur > prev):
                run += 1
                if run >= 3:
                    break
            else:
                run = 0
            prev = cur
        else:
            undecided = True
    if undecided:
        raise MembershipUndecided(
            f"coset representative of {a} over <{gen}> not certified within window {window}"
        )
    return best_k, best


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------


def britton_reduce(w: Word, tower: ExtensionTower, strategy: str = "leftmost") -> Word:
    """A pinch-free word equal to ``w``; strategy picks which pinch goes first."""
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    tower.validate_word(w)
    return _reduce(w, tower, tower.num_steps, strategy == "leftmost")


def normal_form(w: Word, tower: ExtensionTower) -> NormalForm:
    """Canonical representative; two words are equal in the group iff their
    normal forms are identical."""
    tower.validate_word(w)
    return NormalForm(_nf(w, tower, tower.num_steps), tower.num_steps)


def nf_word(w: Word, tower: ExtensionTower) -> Word:
    """Shorthand for ``normal_form(w, tower).word``."""
    tower.validate_word(w)
    return _nf(w, tower, tower.num_steps)


def equal(u: Word, v: Word, tower: ExtensionTower) -> bool:
    return nf_word(u, tower) == nf_word(v, tower)


def in_cyclic(w: Word, g: Word, tower: ExtensionTower, bound: int | None = None) -> int | None:
    """k with ``w == g^k`` and |k| <= bound, or None when absence is certified."""
    tower.validate_word(w)
    tower.validate_word(g)
    if not nf_word(g, tower):
        raise PreconditionViolated("in_cyclic needs a nonidentity generator")
    return _member(w, g, tower, tower.num_steps, bound)


def coset_rep(a: Word, generator: Word, tower: ExtensionTower) -> tuple[int, Word]:
    tower.validate_word(a)
    tower.validate_word(generator)
    return _coset(a, generator, tower, tower.num_steps)


def is_reduced(w: Word, tower: ExtensionTower) -> bool:
    return britton_reduce(w, tower) == w


@lru_cache(maxsize=1 << 18)
def cyclically_reduce(w: Word, tower: ExtensionTower) -> tuple[Word, Word]:
    """Return ``(c, y)`` with ``w = y c y^-1`` and every rotation of ``c`` reduced.

    Rotating by a prefix conjugates, so whenever some rotation still reduces
    we take it and remember the prefix; each pass strictly shrinks the
    stage-count measure, so this terminates.
    """
    tower.validate_word(w)
    top = tower.num_steps
    c = _reduce(w, tower, top, True)
    conj = IDENTITY
    changed = True
    while changed:
        changed = False
        units = c.units()
        for j in range(1, len(units)):
            rotated = Word(units[j:] + units[:j])
            red = _reduce(rotated, tower, top, True)
            # rotation may already cancel at the wrap when re-merged
            if rotated.unit_length < c.unit_length or red != rotated:
                conj = conj * Word(units[:j])
                c = red
                changed = True
                break
    return c, _nf(conj, tower, top)


def is_conjugate_into_base(w: Word, tower: ExtensionTower, stage: int) -> bool:
    """True iff the conjugacy class of ``w`` meets the subgroup generated by
    the base together with the steps strictly below ``stage``."""
    if not 1 <= stage <= max(tower.num_steps, 1):
        raise ValueError(f"stage {stage} out of range")
    c, _ = cyclically_reduce(w, tower)
    return all(lt.kind != STABLE or lt.index < stage for lt in c.letters)


def _free_root(c: Word) -> tuple[Word, int]:
    """Minimal root of a cyclically reduced relation-free word, by smallest
    literal period of the unit sequence."""
    units = c.units()
    n = len(units)
    for p in range(1, n + 1):
        if n % p:
            continue
        cand = Word(units[:p])
        if cand ** (n // p) == c:
            return cand, n // p
    return c, 1


@lru_cache(maxsize=1 << 16)
def minimal_root(a: Word, tower: ExtensionTower) -> tuple[Word, int]:
    """``(w, n)`` with ``w^n = a`` and ``w`` admitting no proper root.

    Only for elements not conjugate into the base stage: the root search
    works along the highest stable letter of the cyclically reduced form.
    Degrees divide the count of top-stage letters; for each degree the root,
    if it exists, lies in the one-parameter family ``prefix * edge^m``
    obtained by cutting the rotated word after one period (commuting the
    edge-subgroup freedom across the stable letters telescopes everything
    else away), so candidates are verified by direct power comparison.
    """
    tower.validate_word(a)
    c, conj = cyclically_reduce(a, tower)
    if not c:
        raise PreconditionViolated("the identity has no minimal root")
    s = max_stage(c)
    if s == 0:
        raise PreconditionViolated("element is conjugate into the base stage")
    units = c.units()
    first = next(i for i, lt in enumerate(units) if lt.kind == STABLE and lt.index == s)
    prefix = Word(units[:first])
    body = Word(units[first:] + units[:first])
    conj = _nf(conj * prefix, tower, tower.num_steps)
    segments, signs = _split(body, s)
    count = len(signs)
    target = _nf(body, tower, tower.num_steps)
    step = tower.step(s)
    limit = body.unit_length + tower.bound_floor
    for degree in range(count, 1, -1):
        if count % degree:
            continue
        k = count // degree
        head = _assemble(segments[: k + 1], signs[:k], s)
        if step.is_free:
            twists: list[Word] = [IDENTITY]
        else:
            edge = step.target if signs[k % count] > 0 else step.source
            twists = [IDENTITY]
            for m in range(1, limit + 1):
                twists.append(_power_word(edge, m, tower, s - 1))
                twists.append(_power_word(edge, -m, tower, s - 1))
        for twist in twists:
            cand = head * twist
            if _nf(cand ** degree, tower, tower.num_steps) == target:
                root = _nf(conj * cand * conj.inverse(), tower, tower.num_steps)
                return root, degree
    return _nf(a, tower, tower.num_steps), 1


def commutes(a: Word, b: Word, tower: ExtensionTower) -> bool:
    return not nf_word(a * b * a.inverse() * b.inverse(), tower)


_ball_cache: dict[tuple[ExtensionTower, int, int], tuple[Word, ...]] = {}


def ball_words(tower: ExtensionTower, radius: int, stage: int | None = None) -> tuple[Word, ...]:
    """All distinct normal forms of words of unit length <= radius, sorted."""
    stage = tower.num_steps if stage is None else stage
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    key = (tower, radius, stage)
    cached = _ball_cache.get(key)
    if cached is not None:
        return cached
    units = tower.alphabet(stage)
    seen = {IDENTITY}
    frontier = [IDENTITY]
    for _ in range(radius):
        fresh = []
        for w in frontier:
            for u in units:
                v = _nf(w * u, tower, stage)
                if v not in seen:
                    seen.add(v)
                    fresh.append(v)
        frontier = sorted(fresh, key=sort_key)
    result = tuple(sorted(seen, key=sort_key))
    _ball_cache[key] = result
    return result


def centralizer_ball(y: Word, tower: ExtensionTower, radius: int) -> set[NormalForm]:
    """Ball elements commuting with ``y``."""
    tower.validate_word(y)
    if not nf_word(y, tower):
        raise PreconditionViolated("centralizer balls are for nonidentity elements")
    stage = tower.num_steps
    return {
        NormalForm(k, stage)
        for k in ball_words(tower, radius)
        if commutes(k, y, tower)
    }


# --------------------------------------------------------------------------
# tower description files
# --------------------------------------------------------------------------


def format_tower(tower: ExtensionTower) -> str:
    lines = [f"base rank={tower.base_rank}"]
    for step in tower.steps:
        if step.is_free:
            lines.append(f"step {step.stage} freeZ")
        else:
            lines.append(f"step {step.stage} hnn source={step.source} target={step.target}")
    return "\n".join(lines) + "\n"


def parse_tower(text: str) -> ExtensionTower:
    """Parse the line-oriented tower description format written by
    :func:`format_tower`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("base rank="):
        raise ValueError("tower description must start with 'base rank=<r>'")
    tower = ExtensionTower(int(lines[0].split("=", 1)[1]))
    for ln in lines[1:]:
        parts = ln.split(maxsplit=3)
        if len(parts) < 3 or parts[0] != "step":
            raise ValueError(f"bad tower line {ln!r}")
        stage = int(parts[1])
        if stage != tower.num_steps + 1:
            raise ValueError(f"step {stage} out of order")
        if parts[2] == "freeZ":
            tower = tower.extend_free()
        elif parts[2] == "hnn":
            rest = parts[3] if len(parts) > 3 else ""
            if not rest.startswith("source=") or " target=" not in rest:
                raise ValueError(f"bad hnn step line {ln!r}")
            source_text, target_text = rest[len("source="):].split(" target=", 1)
            tower = tower.extend_hnn(parse_word(source_text), parse_word(target_text))
        else:
            raise ValueError(f"unknown step kind {parts[2]!r}")
    return tower
