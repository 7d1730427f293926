"""Rank-by-rank presentation machinery at desk scale.

Rank i contributes a maximal set of length-i *periods* (cyclically reduced,
primitive, pairwise non-conjugate even up to inversion) and a set of
relators, each an interleaved power word around one period.  Conjugacy
questions "in rank i-1" are answered by a stratified oracle: exact free
group algebra while no relators exist below, and a budgeted Dehn rewriter
with three-valued verdicts (YES / NO / INDETERMINATE) once they do.  The
desk-scale pipeline never pretends the rewriter decides anything it cannot:
indeterminate candidates are excluded and reported, never guessed.

Relators found by pair classification live at the rank equal to their
period's length.  Those ranks are usually far beyond anything exhaustively
enumerable, so the presentation stores them sparsely and records the
provenance ("enumerated" ranks carry maximal period sets, "classified"
ranks only the periods that classification actually produced).
"""

from __future__ import annotations

import enum
import shlex
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    EmptyInput,
    EmptyWord,
    InvalidParams,
    Unsupported,
    WitnessNotFound,
    ZeroExponent,
)
from .verbal import ParamSet, build_w1_like, build_w2_like, make_v, make_w1, make_w2
from .words import (
    Alphabet,
    Word,
    canonical_cyclic,
    concat_all,
    conjugate,
    cyclic_reduce,
    enumerate_reduced_words,
    invert,
    minimal_conjugacy_witness,
    power,
    primitive_root,
    shortlex_key,
)

DEFAULT_DEHN_BUDGET = 10_000
_PIECE_BUDGET = 2_000_000  # total letters across the materialized symmetrized set


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    INDETERMINATE = "indeterminate"


# -- oracles ---------------------------------------------------------------


class FreeOracle:
    """Exact rank-0 oracle: plain free-group algebra."""

    is_free = True

    def is_identity(self, w: Word) -> Verdict:
        return Verdict.YES if w.is_empty else Verdict.NO

    def is_conjugate(self, u: Word, v: Word) -> Verdict:
        return Verdict.YES if canonical_cyclic(u) == canonical_cyclic(v) else Verdict.NO

    def conjugacy_witness(self, u: Word, v: Word) -> Word | None:
        return minimal_conjugacy_witness(u, v)


class DehnOracle:
    """Budgeted rewriting oracle over a fixed relator set.

    YES answers are sound (rewriting preserves the group element, so equal
    cyclic normal forms certify conjugacy).  NO answers are only issued for
    identity questions over a verified C'(1/6) set, where an irreducible
    nonempty word is classically nontrivial.  Everything else is
    INDETERMINATE.
    """

    is_free = False

    def __init__(self, relators: list[Word], budget: int = DEFAULT_DEHN_BUDGET):
        if not relators:
            raise EmptyInput("DehnOracle needs at least one relator")
        self.relators = list(relators)
        self.budget = budget
        self._table = _RelatorTable(self.relators)
        try:
            cores = [cyclic_reduce(r)[0] for r in self.relators]
            _, lam = piece_stats(cores)
            self._small_cancellation = lam < Fraction(1, 6)
        except BudgetExceeded:
            # cannot certify the small-cancellation hypothesis; NO verdicts off
            self._small_cancellation = False

    def is_identity(self, w: Word) -> Verdict:
        res = dehn_reduce_trace(w, self.relators, self.budget, _table=self._table)
        if res.word.is_empty:
            return Verdict.YES
        if res.exhausted:
            return Verdict.INDETERMINATE
        if self._small_cancellation:
            return Verdict.NO
        return Verdict.INDETERMINATE

    def is_conjugate(self, u: Word, v: Word) -> Verdict:
        ru = dehn_reduce_trace(u, self.relators, self.budget, _table=self._table)
        rv = dehn_reduce_trace(v, self.relators, self.budget, _table=self._table)
        if canonical_cyclic(ru.word) == canonical_cyclic(rv.word):
            return Verdict.YES
        return Verdict.INDETERMINATE

    def conjugacy_witness(self, u: Word, v: Word) -> Word | None:
        witness = minimal_conjugacy_witness(u, v)
        return witness  # free-group witness is valid in any quotient


# -- Dehn rewriting --------------------------------------------------------


@dataclass(frozen=True)
class DehnStep:
    """One replacement: the matched prefix of a rotated relator (or inverse).

    ``letters[pos : pos + matched]`` equals the first ``matched`` letters of
    relator ``relator_index`` (inverted when ``sign`` is -1) rotated left by
    ``offset``; it is replaced by the inverse of the remaining letters.
    """

    pos: int
    matched: int
    relator_index: int
    sign: int
    offset: int


@dataclass(frozen=True)
class DehnResult:
    word: Word
    steps: tuple[DehnStep, ...]
    exhausted: bool


def _encode(letters) -> str:
    return "".join(chr(0x100 + g) for g in letters)


class _RelatorTable:
    """Doubled-string search structures for a symmetrized relator set.

    Relators are replaced by their cyclic cores (the normal closure is the
    same and the symmetrized set is built from cyclic words anyway)."""

    def __init__(self, relators: list[Word]):
        if not relators:
            raise EmptyInput("need at least one relator")
        self.entries = []
        for idx, r in enumerate(relators):
            core, _ = cyclic_reduce(r)
            if core.is_empty:
                raise EmptyWord(f"relator {idx} is freely trivial")
            letters = tuple(core.to_letters())
            inv = tuple(-g for g in reversed(letters))
            for sign, ls in ((1, letters), (-1, inv)):
                self.entries.append((idx, sign, ls, _encode(ls + ls)))

    def best_match(self, enc: str, length: int, pos: int):
        """Longest half-exceeding match at ``pos``; None when there is none.

        Returns (matched, relator_index, sign, offset, replacement_letters).
        """
        best = None
        for idx, sign, ls, doubled in self.entries:
            rlen = len(ls)
            cap = min(rlen, length - pos)
            if 2 * cap <= rlen:
                continue
            lo, hi = rlen // 2 + 1, cap  # shortest useful, longest possible
            if doubled.find(enc[pos:pos + lo]) == -1:
                continue
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if doubled.find(enc[pos:pos + mid]) == -1:
                    hi = mid - 1
                else:
                    lo = mid
            matched = lo
            offset = doubled.find(enc[pos:pos + matched])
            if offset >= rlen:
                offset -= rlen
            excess = 2 * matched - rlen
            key = (-excess, idx, 0 if sign > 0 else 1, offset)
            if best is None or key < best[0]:
                rest = (ls + ls)[offset + matched:offset + rlen]
                replacement = tuple(-g for g in reversed(rest))
                best = (key, (matched, idx, sign, offset, replacement))
        return None if best is None else best[1]


def _splice_reduce(letters: list[int], pos: int, matched: int, replacement) -> list[int]:
    """Replace letters[pos:pos+matched] and freely reduce, deterministically
    (single left-to-right pass; mirrored by the certificate builder)."""
    stack = letters[:pos]
    for g in replacement:
        if stack and stack[-1] == -g:
            stack.pop()
        else:
            stack.append(g)
    for g in letters[pos + matched:]:
        if stack and stack[-1] == -g:
            stack.pop()
        else:
            stack.append(g)
    return stack


def dehn_reduce_trace(w: Word, relators: list[Word],
                      budget: int = DEFAULT_DEHN_BUDGET,
                      _table: _RelatorTable | None = None) -> DehnResult:
    """Greedy half-replacement loop with a recorded trace.

    Policy: leftmost replaceable position, then the longest match, ties by
    relator index, original relator before inverse, smallest rotation.
    Result length never grows; on a C'(1/6) set an empty result is exactly
    the identity certificate (classical guarantee, relied on, not proved).
    """
    table = _table if _table is not None else _RelatorTable(relators)
    letters = list(w.to_letters())
    steps: list[DehnStep] = []
    exhausted = False
    while letters:
        if len(steps) >= budget:
            exhausted = True
            break
        enc = _encode(letters)
        found = None
        for pos in range(len(letters)):
            got = table.best_match(enc, len(letters), pos)
            if got is not None:
                found = (pos, got)
                break
        if found is None:
            break
        pos, (matched, idx, sign, offset, replacement) = found
        steps.append(DehnStep(pos, matched, idx, sign, offset))
        letters = _splice_reduce(letters, pos, matched, replacement)
    from .words import free_reduce

    return DehnResult(free_reduce(w.alphabet, letters), tuple(steps), exhausted)


def dehn_reduce(w: Word, relators: list[Word],
                budget: int = DEFAULT_DEHN_BUDGET) -> Word:
    """Like :func:`dehn_reduce_trace` but raises when the budget runs out."""
    res = dehn_reduce_trace(w, relators, budget)
    if res.exhausted:
        raise BudgetExceeded(f"no fixed point within {budget} rewriting steps")
    return res.word


# -- small cancellation metrics ---------------------------------------------


def piece_stats(relators: list[Word]) -> tuple[int, Fraction]:
    """Longest common prefix between distinct symmetrized elements, and the
    ratio lambda = (that length) / (shortest relator length)."""
    if not relators:
        raise EmptyInput("need at least one relator")
    total = 0
    for r in relators:
        if r.is_empty:
            raise EmptyWord("relators must be nonempty")
        if not r.is_cyclically_reduced():
            raise InvalidParams("relators must be cyclically reduced")
        total += 2 * r.letter_length * r.letter_length
    if total > _PIECE_BUDGET:
        raise BudgetExceeded(
            f"symmetrized set would hold {total} letters, over {_PIECE_BUDGET}")
    symmetrized = set()
    for r in relators:
        letters = tuple(r.to_letters())
        inv = tuple(-g for g in reversed(letters))
        for ls in (letters, inv):
            for k in range(len(ls)):
                symmetrized.add(ls[k:] + ls[:k])
    ordered = sorted(symmetrized)
    max_piece = 0
    for a, b in zip(ordered, ordered[1:]):
        lcp = 0
        for x, y in zip(a, b):
            if x != y:
                break
            lcp += 1
        max_piece = max(max_piece, lcp)
    return max_piece, Fraction(max_piece, min(r.letter_length for r in relators))


# -- presentation data ------------------------------------------------------


@dataclass(frozen=True)
class RelatorRecord:
    """One relator with the data that regenerates it byte-identically."""

    z_star: int
    A: Word
    f: int
    j: int
    T: Word
    U: Word
    params: ParamSet
    relator: Word
    warnings: tuple[str, ...] = ()

    @property
    def rank(self) -> int:
        return self.A.letter_length

    @property
    def ledger_compliant(self) -> bool:
        return not self.warnings

    def regenerate(self) -> Word:
        return _relator_word(self.z_star, self.A, self.f, self.T, self.U, self.params)


@dataclass(frozen=True)
class TripleRecord:
    """Canonical representative of one pair class.

    X is graphically a power of base_X[0]; the class's second word is
    Z * Y * Z^-1 with Y a power of base_Y[0].  Z minimality is rechecked by
    breadth-first search up to ``z_search_cap`` letters.
    """

    X: Word
    Y: Word
    Z: Word
    base_X: tuple[Word, int]
    base_Y: tuple[Word, int]
    z_search_cap: int = 0

    @property
    def y_bar(self) -> Word:
        return conjugate(self.Y, self.Z)


@dataclass
class RankData:
    index: int
    periods: list[Word] = field(default_factory=list)
    provenance: str = "enumerated"
    relators: list[RelatorRecord] = field(default_factory=list)
    indeterminate: list[Word] = field(default_factory=list)


@dataclass
class GradedPresentation:
    alphabet: Alphabet
    params: ParamSet
    mode: str = "toy"
    ranks: dict[int, RankData] = field(default_factory=dict)

    def rank_data(self, i: int, provenance: str = "enumerated") -> RankData:
        if i not in self.ranks:
            self.ranks[i] = RankData(index=i, provenance=provenance)
        return self.ranks[i]

    def relators_up_to(self, i: int) -> list[Word]:
        out = []
        for idx in sorted(self.ranks):
            if idx > i:
                break
            out.extend(rec.relator for rec in self.ranks[idx].relators)
        return out

    def all_relators(self) -> list[RelatorRecord]:
        return [rec for idx in sorted(self.ranks) for rec in self.ranks[idx].relators]

    def oracle_for_rank(self, i: int, budget: int = DEFAULT_DEHN_BUDGET):
        """Exact free oracle while no relators exist at or below rank i."""
        relators = self.relators_up_to(i)
        if not relators:
            return FreeOracle()
        return DehnOracle(relators, budget)


# -- periods ----------------------------------------------------------------


def _conjugate_to_shorter_power(cand: Word, i: int, oracle) -> Verdict:
    """Is ``cand`` conjugate (in the oracle's rank) to a power of a shorter word?

    Exact for the free oracle (primitivity of the cyclic core).  For rewriting
    oracles the power range is capped at |cand| letters, the honest reach of a
    Dehn-style search; anything unresolved surfaces as INDETERMINATE.
    """
    if oracle.is_free:
        if not cand.is_cyclically_reduced():
            core, _ = cyclic_reduce(cand)
            cand = core
        if cand.is_empty:
            return Verdict.YES
        _, k = primitive_root(cand)
        return Verdict.YES if k > 1 else Verdict.NO
    saw_indeterminate = False
    for b in enumerate_reduced_words(cand.alphabet, i - 1, include_empty=False):
        if not b.is_cyclically_reduced() or b.letter_length >= i:
            continue
        kmax = max(1, i // b.letter_length)
        for k in range(-kmax, kmax + 1):
            if k == 0:
                continue
            verdict = oracle.is_conjugate(cand, power(b, k))
            if verdict is Verdict.YES:
                return Verdict.YES
            if verdict is Verdict.INDETERMINATE:
                saw_indeterminate = True
    return Verdict.INDETERMINATE if saw_indeterminate else Verdict.NO


def periods_rank(pres: GradedPresentation, i: int, oracle=None
                 ) -> tuple[list[Word], list[Word]]:
    """Maximal period set of rank i and the candidates the oracle could not
    settle (excluded from the kept set, reported to the caller).

    Candidates run in shortlex order; each must avoid being conjugate to a
    power of anything shorter and to earlier kept periods or their inverses.
    """
    if i < 1:
        raise InvalidParams("rank must be positive")
    oracle = oracle or pres.oracle_for_rank(i - 1)
    kept: list[Word] = []
    indeterminate: list[Word] = []
    for cand in enumerate_reduced_words(pres.alphabet, i, include_empty=False):
        if cand.letter_length != i or not cand.is_cyclically_reduced():
            continue
        verdict = _conjugate_to_shorter_power(cand, i, oracle)
        if verdict is Verdict.YES:
            continue
        if verdict is Verdict.INDETERMINATE:
            indeterminate.append(cand)
            continue
        ok = True
        for b in kept:
            for other in (b, invert(b)):
                verdict = oracle.is_conjugate(cand, other)
                if verdict is Verdict.YES:
                    ok = False
                elif verdict is Verdict.INDETERMINATE:
                    ok = False
                    indeterminate.append(cand)
                if not ok:
                    break
            if not ok:
                break
        if ok:
            kept.append(cand)
    return kept, indeterminate


# -- pair classification ------------------------------------------------------


def _pair_conjugacy_witness(u1: Word, w1: Word, u2: Word, w2: Word) -> Word | None:
    """Free-group W with u1 = W u2 W^-1 and w1 = W w2 W^-1, if one exists."""
    from .words import conjugacy_witnesses

    if u2.is_empty:
        if not u1.is_empty:
            return None
        return minimal_conjugacy_witness(w1, w2)
    core2, conj2 = cyclic_reduce(u2)
    root, _ = primitive_root(core2)
    rho = conjugate(root, conj2)  # centralizer generator of u2
    for w0 in conjugacy_witnesses(u1, u2):
        # all solutions of the first equation are w0 * rho^k
        residual = concat_all([invert(w0), w1, w0])
        bound = (residual.letter_length + w2.letter_length) // max(1, root.letter_length) + 2
        for k in range(-bound, bound + 1):
            if conjugate(w2, power(rho, k)) == residual:
                return concat_all([w0, power(rho, k)])
    return None


@dataclass(frozen=True)
class PairClass:
    z_star: int
    key: tuple[str, str]
    members: tuple[tuple[Word, Word], ...]
    triple: TripleRecord
    A: Word
    f: int
    j: int
    witness: Word  # v_{z*}(X, y_bar) = witness * A^f * witness^-1
    v_rep: Word
    w_rep: Word


@dataclass(frozen=True)
class ClassifyResult:
    z_star: int
    classes: tuple[PairClass, ...]
    discarded_trivial: int
    skipped_degenerate: tuple[tuple[Word, Word], ...]
    skipped_indeterminate: tuple[tuple[Word, Word], ...]


def _minimal_z_by_bfs(ybar: Word, coreY: Word, cap: int) -> Word | None:
    """Shortlex-first conjugator realizing ybar = Z coreY Z^-1, length <= cap."""
    for z in enumerate_reduced_words(ybar.alphabet, cap):
        if conjugate(coreY, z) == ybar:
            return z
    return None


def classify_pairs(pres: GradedPresentation, i: int, z_star: int, L: int,
                   oracle=None, z_search_cap: int = 3) -> ClassifyResult:
    """Partition pairs (X, Y) with |X|, |Y| <= L into joint conjugacy classes
    of their (v, w) values, discarding pairs whose w value dies in rank i-1.

    Class keys are the shortlex-least member pair; j indices within one
    (period, exponent) group follow key order.  Only the exact rank-0 oracle
    merges classes; rewriting oracles would at worst split them (their YES
    answers are sound but rare), which is reported, not hidden.
    """
    if z_star not in (1, 2):
        raise InvalidParams(f"z* must be 1 or 2, got {z_star}")
    oracle = oracle or pres.oracle_for_rank(i - 1)
    p = pres.params
    make_w = make_w1 if z_star == 1 else make_w2

    words_pool = [w for w in enumerate_reduced_words(pres.alphabet, L)]
    discarded = 0
    degenerate: list[tuple[Word, Word]] = []
    indeterminate: list[tuple[Word, Word]] = []
    survivors: list[tuple[Word, Word, Word, Word]] = []  # (X, Y, v, w)
    for x in words_pool:
        for y in words_pool:
            w_val = make_w(x, y, p)
            verdict = oracle.is_identity(w_val)
            if verdict is Verdict.YES:
                discarded += 1
                continue
            if verdict is Verdict.INDETERMINATE:
                indeterminate.append((x, y))
                continue
            v_val = make_v(z_star, x, y, p)
            if oracle.is_identity(v_val) is Verdict.YES:
                degenerate.append((x, y))
                continue
            survivors.append((x, y, v_val, w_val))

    groups: list[list[int]] = []
    for idx, (_, _, v_val, w_val) in enumerate(survivors):
        placed = False
        for group in groups:
            x0, y0, v0, w0 = survivors[group[0]]
            if oracle.is_free:
                if _pair_conjugacy_witness(v0, w0, v_val, w_val) is not None:
                    group.append(idx)
                    placed = True
                    break
            else:
                if (oracle.is_conjugate(v0, v_val) is Verdict.YES
                        and oracle.is_conjugate(w0, w_val) is Verdict.YES):
                    group.append(idx)
                    placed = True
                    break
        if not placed:
            groups.append([idx])

    # deterministic class records
    raw_classes = []
    for group in groups:
        members = sorted(
            ((survivors[g][0], survivors[g][1]) for g in group),
            key=lambda xy: (shortlex_key(xy[0]), shortlex_key(xy[1])))
        x0, y0 = members[0]
        key = (str(x0), str(y0))
        raw_classes.append((key, members, x0, y0))
    raw_classes.sort(key=lambda c: c[0])

    registry = _PeriodRegistry(pres)
    enriched = []
    for key, members, x0, y0 in raw_classes:
        core_x, gx = cyclic_reduce(x0)
        x_rep = core_x
        ybar = conjugate(y0, invert(gx))
        core_y, z_conj = cyclic_reduce(ybar)
        z_min = _minimal_z_by_bfs(ybar, core_y, min(z_search_cap, z_conj.letter_length))
        if z_min is not None:
            z_conj = z_min
        triple = TripleRecord(
            X=x_rep,
            Y=core_y,
            Z=z_conj,
            base_X=primitive_root(core_x) if not core_x.is_empty else (core_x, 1),
            base_Y=primitive_root(core_y) if not core_y.is_empty else (core_y, 1),
            z_search_cap=z_search_cap,
        )
        v_rep = make_v(z_star, triple.X, triple.y_bar, p)
        w_rep = make_w1(triple.X, triple.y_bar, p) if z_star == 1 \
            else make_w2(triple.X, triple.y_bar, p)
        a_word, f_val = registry.resolve(v_rep)
        witness = minimal_conjugacy_witness(v_rep, power(a_word, f_val))
        if witness is None:
            raise WitnessNotFound(
                f"no conjugator from the period power to the class value {key}")
        enriched.append((key, members, triple, a_word, f_val, witness, v_rep, w_rep))

    # j indices: per (A, f) group, in class-key order
    counters: dict[tuple[str, int], int] = {}
    classes = []
    for key, members, triple, a_word, f_val, witness, v_rep, w_rep in enriched:
        jkey = (str(a_word), f_val)
        counters[jkey] = counters.get(jkey, 0) + 1
        classes.append(PairClass(
            z_star=z_star, key=key, members=tuple(members), triple=triple,
            A=a_word, f=f_val, j=counters[jkey], witness=witness,
            v_rep=v_rep, w_rep=w_rep))
    return ClassifyResult(z_star, tuple(classes), discarded,
                          tuple(degenerate), tuple(indeterminate))


class _PeriodRegistry:
    """Canonical period chooser honoring the no-conjugate-duplicates rule."""

    def __init__(self, pres: GradedPresentation):
        self.pres = pres
        self._by_class: dict = {}
        for data in pres.ranks.values():
            for a_word in data.periods:
                self._by_class[canonical_cyclic(a_word)] = a_word

    def resolve(self, v_value: Word) -> tuple[Word, int]:
        """Period A and exponent f with v_value conjugate to A^f."""
        core, _ = cyclic_reduce(v_value)
        if core.is_empty:
            raise EmptyWord("degenerate class value")
        root, k = primitive_root(core)
        cw = canonical_cyclic(root)
        cwi = canonical_cyclic(invert(root))
        if cw in self._by_class:
            a_word = self._by_class[cw]
            return a_word, k
        if cwi in self._by_class:
            a_word = self._by_class[cwi]
            return a_word, -k
        a_word = cw.rep if shortlex_key(cw.rep) <= shortlex_key(cwi.rep) else cwi.rep
        sign = 1 if a_word == cw.rep else -1
        self._by_class[canonical_cyclic(a_word)] = a_word
        data = self.pres.rank_data(a_word.letter_length, provenance="classified")
        data.periods.append(a_word)
        return a_word, sign * k


# -- relators ----------------------------------------------------------------


def _relator_word(z_star: int, a_word: Word, f: int, t_word: Word, u_word: Word,
                  p: ParamSet) -> Word:
    block = power(a_word, f)
    if z_star == 1:
        return build_w1_like(t_word, block, p)
    return build_w2_like(u_word, t_word, block, p)


def relator_exponent_schedule(z_star: int, p: ParamSet) -> list[int]:
    """Period exponents (before multiplication by f) in template order."""
    from .verbal import w1_exponents, w2_exponents

    if z_star == 1:
        return w1_exponents(p.h, p.n)
    if z_star == 2:
        return w2_exponents(p.h, p.n)
    raise InvalidParams(f"z* must be 1 or 2, got {z_star}")


def build_relator(z_star: int, a_word: Word, f: int, t_word: Word, u_word: Word,
                  p: ParamSet, j: int = 1, assign=None) -> RelatorRecord:
    """Instantiate the rank-(|A|) relator template for one classified pair class.

    Toy-scale magnitude violations of the enumeration bounds are recorded as
    warnings on the record instead of refusals, so the pipeline stays
    exercisable; ``assign`` (a ledger assignment) additionally enables the
    exponent bound check 0 < |f| <= 100/zeta.
    """
    if z_star not in (1, 2):
        raise InvalidParams(f"z* must be 1 or 2, got {z_star}")
    if f == 0:
        raise ZeroExponent("the period exponent multiplier f must be nonzero")
    if a_word.is_empty:
        raise EmptyWord("the period must be nonempty")
    if t_word.is_empty or u_word.is_empty:
        raise EmptyInput("the conjugated slot words T and U must be nonempty")
    warnings = []
    d = p.d
    a_len = a_word.letter_length
    if a_len <= d:
        warnings.append(f"|A| = {a_len} <= d = {d}")
    for name, word in (("T", t_word), ("U", u_word)):
        if word.letter_length >= d * a_len:
            warnings.append(f"|{name}| = {word.letter_length} >= d|A| = {d * a_len}")
        if _is_power_of(word, a_word):
            warnings.append(f"{name} lies in the cyclic subgroup of A")
    if assign is not None:
        from .ledger import bound_f

        if abs(f) > bound_f(assign):
            warnings.append(f"|f| = {abs(f)} > 100/zeta = {bound_f(assign)}")
    relator = _relator_word(z_star, a_word, f, t_word, u_word, p)
    return RelatorRecord(z_star, a_word, f, j, t_word, u_word, p, relator,
                         tuple(warnings))


def _is_power_of(w: Word, a_word: Word) -> bool:
    if w.is_empty:
        return True
    if a_word.is_empty or w.letter_length % a_word.letter_length:
        return False
    k = w.letter_length // a_word.letter_length
    return w == power(a_word, k) or w == power(a_word, -k)


def verbal_membership_witness(rec: RelatorRecord, triple: TripleRecord,
                              oracle=None) -> Word:
    """Conjugator W with W * relator * W^-1 equal (rank 0) to the identity
    word evaluated at the class representative.  Exact; a failure on a
    freshly built record means the construction itself is broken."""
    oracle = oracle or FreeOracle()
    if not getattr(oracle, "is_free", False):
        raise Unsupported("witness search is implemented for the exact rank-0 oracle")
    p = rec.params
    target = make_w1(triple.X, triple.y_bar, p) if rec.z_star == 1 \
        else make_w2(triple.X, triple.y_bar, p)
    witness = minimal_conjugacy_witness(target, rec.relator)
    if witness is None or concat_all([witness, rec.relator, invert(witness)]) != target:
        raise WitnessNotFound(
            f"relator (z*={rec.z_star}, j={rec.j}) is not conjugate to its class value")
    return witness


# -- presentation building and serialization ---------------------------------


def build_presentation(alphabet: Alphabet, p: ParamSet, max_rank: int = 2,
                       pair_budget: int = 1, z_stars=(1, 2), mode: str = "toy",
                       dehn_budget: int = DEFAULT_DEHN_BUDGET,
                       z_search_cap: int = 3, assign=None) -> GradedPresentation:
    """Enumerate periods up to ``max_rank`` and attach all relators found by
    classifying pairs up to ``pair_budget`` letters per coordinate.

    ``assign`` (a verified ledger assignment) turns on the exponent-bound
    warning check for every synthesized relator."""
    pres = GradedPresentation(alphabet=alphabet, params=p, mode=mode)
    for i in range(1, max_rank + 1):
        oracle = pres.oracle_for_rank(i - 1, dehn_budget)
        kept, indet = periods_rank(pres, i, oracle)
        data = pres.rank_data(i)
        data.periods = kept
        data.indeterminate = indet
    for z_star in z_stars:
        result = classify_pairs(pres, 1, z_star, pair_budget,
                                z_search_cap=z_search_cap)
        for cls in result.classes:
            t_word, u_word = slot_words(cls, p)
            rec = build_relator(z_star, cls.A, cls.f, t_word, u_word, p,
                                j=cls.j, assign=assign)
            pres.rank_data(rec.rank, provenance="classified").relators.append(rec)
    return pres


def slot_words(cls: PairClass, p: ParamSet) -> tuple[Word, Word]:
    """The conjugated slot words (T, U) for one class: the next-lower v-value
    and the class's second word, both pulled back through the witness."""
    lower = make_v(cls.z_star - 1, cls.triple.X, cls.triple.y_bar, p)
    t_word = concat_all([invert(cls.witness), lower, cls.witness])
    u_word = concat_all([invert(cls.witness), cls.triple.y_bar, cls.witness])
    return t_word, u_word


# -- text serialization -------------------------------------------------------


def save_presentation(pres: GradedPresentation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"alphabet {pres.alphabet.m}\n")
        fh.write(f"params h={pres.params.h} d={pres.params.d} n={pres.params.n}\n")
        fh.write(f"mode {pres.mode}\n")
        for idx in sorted(pres.ranks):
            data = pres.ranks[idx]
            fh.write(f"rank {idx} provenance={data.provenance}\n")
            for a_word in data.periods:
                fh.write(f"period {shlex.quote(str(a_word))}\n")
            for rec in data.relators:
                fh.write(
                    "relator z*={z} A={a} f={f} j={j} T={t} U={u}\n".format(
                        z=rec.z_star, a=shlex.quote(str(rec.A)), f=rec.f, j=rec.j,
                        t=shlex.quote(str(rec.T)), u=shlex.quote(str(rec.U))))


def load_presentation(path) -> GradedPresentation:
    """Parse the text format; relator words are regenerated, never stored."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    alphabet = None
    params = None
    mode = "toy"
    pres = None
    current: RankData | None = None
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = shlex.split(line)
        head = tokens[0]
        if head == "alphabet":
            alphabet = Alphabet(int(tokens[1]))
        elif head == "params":
            kv = dict(tok.split("=", 1) for tok in tokens[1:])
            params = ParamSet(int(kv["h"]), int(kv["d"]), int(kv["n"]))
        elif head == "mode":
            mode = tokens[1]
            pres = GradedPresentation(alphabet=alphabet, params=params, mode=mode)
        elif head == "rank":
            if pres is None:
                pres = GradedPresentation(alphabet=alphabet, params=params, mode=mode)
            kv = dict(tok.split("=", 1) for tok in tokens[2:])
            current = pres.rank_data(int(tokens[1]),
                                     provenance=kv.get("provenance", "enumerated"))
            current.provenance = kv.get("provenance", current.provenance)
        elif head == "period":
            current.periods.append(Word.parse(alphabet, tokens[1]))
        elif head == "relator":
            kv = dict(tok.split("=", 1) for tok in tokens[1:])
            rec = build_relator(
                int(kv["z*"]), Word.parse(alphabet, kv["A"]), int(kv["f"]),
                Word.parse(alphabet, kv["T"]), Word.parse(alphabet, kv["U"]),
                params, j=int(kv["j"]))
            current.relators.append(rec)
        else:
            raise InvalidParams(f"unrecognized line in presentation file: {raw!r}")
    if pres is None:
        pres = GradedPresentation(alphabet=alphabet, params=params, mode=mode)
    return pres
