"""Two routes from a substitution to a stationary ordered diagram.

Route one (marked-word nesting) works for substitutions whose long-letter
images all start (or all end) with long letters: the vertices are dotted
words of shape long/shorts/long/shorts/long, and the read rule tracks how
the expanded middle block of one marked word sweeps across its neighbours.

Route two (return words) induces the system on the two-letter junction
markers of its minimal components: the vertices are return-word indices,
the read rule is the derivative substitution, and the top multiplicities
are the return-word lengths.

The multi-edge encoding and the properness / m-primitivity predicates are
the supporting cast: they certify when each route applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lcm

import numpy as np

from .diagrams import StationaryOrderedDiagram
from .errors import (
    CountExceedsImage,
    DecompositionFailure,
    DiagramError,
    NoNesting,
    ScaleTooSmall,
    UnboundedShorts,
)
from .words import (
    NestingClass,
    Substitution,
    Unbounded,
    Word,
    _windows,
    classify_letters,
    factor_language,
    incidence_matrix,
    nesting_class,
    short_block_bound,
    sorted_words,
)

# ---------------------------------------------------------------------------
# marked words


@dataclass(frozen=True)
class MarkedWord:
    """A language word of shape (long)(shorts)(long)(shorts)(long), with a
    cut after the first long-with-shorts block (starts-long reading) or right
    after the first letter (ends-long reading)."""

    left: str
    left_shorts: tuple[str, ...]
    middle: str
    middle_shorts: tuple[str, ...]
    right: str
    starts_long: bool = True

    @property
    def letters(self) -> tuple[str, ...]:
        return ((self.left,) + self.left_shorts + (self.middle,)
                + self.middle_shorts + (self.right,))

    @property
    def cut(self) -> int:
        return 1 + len(self.left_shorts) if self.starts_long else 1

    def word(self) -> Word:
        return Word(self.letters, marker=self.cut)

    @property
    def label(self) -> str:
        return str(self.word())

    @property
    def counted_block(self) -> tuple[str, ...]:
        """The letters whose expansion length is the tower height: the block
        right of the cut up to (and including) the second long letter's run
        start -- middle+shorts when starts-long, shorts+middle otherwise."""
        if self.starts_long:
            return (self.middle,) + self.middle_shorts
        return self.left_shorts + (self.middle,)

    @property
    def base_height(self) -> int:
        return len(self.counted_block)


def _marked_from_letters(w, long_set, starts_long) -> MarkedWord | None:
    longs = [i for i, a in enumerate(w) if a in long_set]
    if len(longs) != 3 or longs[0] != 0 or longs[2] != len(w) - 1:
        return None
    i, j, k = longs
    return MarkedWord(w[i], tuple(w[i + 1:j]), w[j], tuple(w[j + 1:k]),
                      w[k], starts_long)


def nesting_vocabulary(s: Substitution) -> list[MarkedWord]:
    """All language words with exactly three long letters, one at each end.

    Finite because all-short blocks are bounded; ordered by length then
    lexicographically (alphabet order).  The cut side follows the nesting
    class, preferring the starts-long reading when both hold.
    """
    cls = classify_letters(s)
    if not cls.long:
        raise NoNesting("no letter has unbounded growth")
    case = nesting_class(s)
    if case is NestingClass.NONE:
        raise NoNesting(
            "long-letter images neither all start nor all end with long letters")
    starts_long = case is not NestingClass.ENDS_LONG
    bound = short_block_bound(s)
    if isinstance(bound, Unbounded):
        raise UnboundedShorts(
            f"all-short factors keep growing past length {bound.cap}")
    long_set = set(cls.long)
    lang = factor_language(s, 2 * bound + 1)
    out = []
    for w in sorted_words(s, lang.factors):
        mw = _marked_from_letters(w, long_set, starts_long)
        if mw is not None:
            out.append(mw)
    return out


def _runs_start(s: Substitution, letters, long_set):
    """Decompose an expansion into (long letter, trailing short block) runs.
    Valid whenever the word starts with a long letter."""
    runs: list[tuple[str, list[str]]] = []
    for a in s.apply(letters):
        if a in long_set:
            runs.append((a, []))
        else:
            runs[-1][1].append(a)
    return [(w, tuple(f)) for w, f in runs]


def _runs_end(s: Substitution, letters, long_set):
    """Decompose an expansion into (leading short block, long letter) runs.
    Valid whenever the word ends with a long letter."""
    runs = []
    pending: list[str] = []
    for a in s.apply(letters):
        if a in long_set:
            runs.append((tuple(pending), a))
            pending = []
        else:
            pending.append(a)
    return runs


def nesting_matching_rule(s: Substitution, mw: MarkedWord) -> list[MarkedWord]:
    """The ordered marked words whose towers the expansion of `mw` sweeps.

    Expanding the three blocks of `mw` and re-reading the middle expansion
    run by run, the j-th output pairs run j with its immediate neighbours:
    the run before it (the last run of the first block when j = 1) and the
    long letter after it (the first run of the third block at the end).
    """
    long_set = set(classify_letters(s).long)
    out = []
    if mw.starts_long:
        first = _runs_start(s, (mw.left,) + mw.left_shorts, long_set)
        middle = _runs_start(s, (mw.middle,) + mw.middle_shorts, long_set)
        last = _runs_start(s, (mw.right,), long_set)
        prev = first[-1]
        for j, cur in enumerate(middle):
            nxt = middle[j + 1][0] if j + 1 < len(middle) else last[0][0]
            out.append(MarkedWord(prev[0], prev[1], cur[0], cur[1], nxt, True))
            prev = cur
    else:
        first = _runs_end(s, (mw.left,), long_set)
        middle = _runs_end(s, mw.left_shorts + (mw.middle,), long_set)
        last = _runs_end(s, mw.middle_shorts + (mw.right,), long_set)
        prev = first[-1][1]
        for j, (gap, letter) in enumerate(middle):
            ngap, nletter = middle[j + 1] if j + 1 < len(middle) else last[0]
            out.append(MarkedWord(prev, gap, letter, ngap, nletter, False))
            prev = letter
    return out


def nesting_diagram(s: Substitution) -> StationaryOrderedDiagram:
    """Stationary diagram on the marked-word vocabulary: read rule from the
    matching rule, top multiplicity = base tower height."""
    vocab = nesting_vocabulary(s)
    labels = tuple(mw.label for mw in vocab)
    images = tuple(
        tuple(out.label for out in nesting_matching_rule(s, mw))
        for mw in vocab)
    counts = tuple(mw.base_height for mw in vocab)
    return StationaryOrderedDiagram(labels, images, counts)


# ---------------------------------------------------------------------------
# multi-edge encoding


@dataclass(frozen=True)
class EncodedSystem:
    """Letters (a, i), one per top edge into a, with the rule that expands
    block i of a's read image; the i-blocks concatenate back to the full
    image, so expanding a letter's whole block row commutes with the read
    substitution."""

    base_alphabet: tuple[str, ...]
    counts: tuple[int, ...]
    tau: Substitution

    def pair_name(self, a: str, i: int) -> str:
        return f"{a}:{i}"

    def block_row(self, a: str) -> tuple[str, ...]:
        n = self.counts[self.base_alphabet.index(a)]
        return tuple(self.pair_name(a, i) for i in range(n))

    def encode_word(self, letters) -> tuple[str, ...]:
        out: list[str] = []
        for a in letters:
            out.extend(self.block_row(a))
        return tuple(out)

    @property
    def letters(self) -> tuple[tuple[str, int], ...]:
        return tuple((a, i)
                     for a, n in zip(self.base_alphabet, self.counts)
                     for i in range(n))


def multi_edge_encoding(d: StationaryOrderedDiagram) -> EncodedSystem:
    """Split each vertex into one letter per top edge.

    Letter (a, i) with i below the last block maps to the block row of the
    i-th read-image letter; the last letter (a, n_a - 1) absorbs the whole
    remaining image tail, so block rows expand exactly onto expanded block
    rows.  Requires every image to be at least as long as its top count.
    """
    for a in d.alphabet:
        if ":" in a:
            raise DiagramError(f"vertex label {a!r} contains the reserved ':'")
        n, m = d.top_count(a), len(d.read_image(a))
        if n > m:
            raise CountExceedsImage(
                f"vertex {a!r} has {n} top edges but only {m} image letters; "
                "replace the read rule by a power first")

    names: list[str] = []
    images: list[tuple[str, ...]] = []
    counts = tuple(d.top_count(a) for a in d.alphabet)

    def row(a: str) -> tuple[str, ...]:
        return tuple(f"{a}:{i}" for i in range(d.top_count(a)))

    def rows(letters) -> tuple[str, ...]:
        return tuple(x for b in letters for x in row(b))

    for a in d.alphabet:
        img = d.read_image(a)
        n = d.top_count(a)
        for i in range(n - 1):
            names.append(f"{a}:{i}")
            images.append(row(img[i]))
        names.append(f"{a}:{n - 1}")
        images.append(rows(img[n - 1:]))
    tau = Substitution(tuple(names), tuple(images))
    system = EncodedSystem(d.alphabet, counts, tau)
    for a in d.alphabet:
        if tau.apply(system.block_row(a)) != system.encode_word(d.read_image(a)):
            raise AssertionError(f"block-row expansion broke at {a!r}")
    return system


# ---------------------------------------------------------------------------
# minimal components


@dataclass(frozen=True)
class MinimalComponent:
    """Seeds whose one-sided fixed points share a factor set (at the given
    scale), plus the canonical junction pair: a letter whose expansions end
    with itself (left marker) against one whose expansions start with itself
    (right marker), both staying inside the component."""

    seeds: tuple[str, ...]
    pair: tuple[str, str] | None
    period: int | None
    scale: int


def _self_return_period(chain: dict[str, str], a: str) -> int | None:
    """Cycle length of a under the one-letter map, or None off-cycle."""
    seen = {a}
    b = chain[a]
    steps = 1
    while b not in seen:
        seen.add(b)
        b = chain[b]
        steps += 1
    if b != a:
        return None
    # walk once more to measure a's own cycle
    b, p = chain[a], 1
    while b != a:
        b = chain[b]
        p += 1
    return p


@lru_cache(maxsize=None)
def _grown_factors(s: Substitution, seed: tuple[str, ...], cap: int,
                   steps: int = 1):
    """All factors (length <= cap) of every steps-fold iterate of `seed`,
    via the bounded-window transfer map; exact for the same reason
    factor_language is, and includes the seed word itself.

    The power sigma^steps is never materialised: windows are pushed through
    sigma one application at a time, tagged with their step count mod steps,
    and only the multiple-of-steps generations are collected.  Each
    (window, phase) pair is expanded once, which covers the same factors
    because a short factor of sigma(w) always sits inside the image of a
    short factor of w.
    """
    total = set(_windows(s.encode(seed), cap))
    seen = {(w, 0) for w in total}
    work = list(seen)
    while work:
        u, phase = work.pop()
        phase = (phase + 1) % steps
        for w in _windows(u.translate(s._table), cap):
            if (w, phase) not in seen:
                seen.add((w, phase))
                work.append((w, phase))
                if phase == 0:
                    total.add(w)
    out: set[tuple[str, ...]] = set()
    for enc in total:
        for i in range(len(enc)):
            for j in range(i + 1, min(len(enc), i + cap) + 1):
                out.add(s.decode(enc[i:j]))
    return frozenset(out)


def _junction_ok(s: Substitution, power: int, r: str, l: str, factors,
                 cap: int) -> bool:
    """Does the two-sided point glued from r's left tail and l's right tail
    stay inside `factors`?  Checks the windows that straddle the junction;
    the two one-sided tails are checked separately by the caller.

    Tails grow under sigma^power, applied one sigma at a time and re-clipped
    (a suffix expands to a suffix, a prefix to a prefix), so long periods
    never materialise huge images.
    """
    tail, head = (r,), (l,)
    for _ in range(cap * (len(s.alphabet) + 2)):
        if len(tail) >= cap and len(head) >= cap:
            break
        for _ in range(power):
            tail = s.apply(tail)[-cap:]
            head = s.apply(head)[:cap]
    combined = tail + head
    mid = len(tail)
    for i in range(len(combined)):
        for j in range(i + 1, min(len(combined), i + cap) + 1):
            if i < mid < j and combined[i:j] not in factors:
                return False
    return True


def minimal_components(s: Substitution, scale: int = 8):
    """Scale-bounded component census from one-letter fixed seeds.

    Seeds are the long letters lying on a cycle of the first-letter map (so
    some expansion power starts with the seed again).  Seeds with equal
    factor sets share a component; a seed whose factor set strictly contains
    another's is discarded, since its limit point already accumulates on the
    smaller system.  Within each component the junction pair is the
    lexicographically least (left, right) marker pair whose glued point
    stays inside the component.
    """
    cls = classify_letters(s)
    long_set = set(cls.long)
    first = {a: s.image(a)[0] for a in s.alphabet}
    last = {a: s.image(a)[-1] for a in s.alphabet}

    seeds = []
    for a in s.alphabet:
        if a not in long_set:
            continue
        p = _self_return_period(first, a)
        if p is not None:
            seeds.append((a, p))
    if not seeds:
        return ()

    fact = {a: _grown_factors(s, (a,), scale, p) for a, p in seeds}

    kept = [
        (a, p) for a, p in seeds
        if not any(fact[a] > fact[b] for b, _ in seeds if b != a)]

    groups: list[list[tuple[str, int]]] = []
    for a, p in kept:
        for g in groups:
            if fact[g[0][0]] == fact[a]:
                g.append((a, p))
                break
        else:
            groups.append([(a, p)])

    left_candidates = [
        (a, _self_return_period(last, a))
        for a in s.alphabet
        if a in long_set and _self_return_period(last, a) is not None]

    out = []
    for g in groups:
        component_factors = fact[g[0][0]]
        best = None
        for r, pr in left_candidates:
            for l, pl in g:
                p = lcm(pr, pl)
                if (r, l) not in component_factors:
                    continue
                if not _grown_factors(s, (r,), scale, p) <= component_factors:
                    continue
                if not _junction_ok(s, p, r, l, component_factors, scale):
                    continue
                key = (s._index[r], s._index[l])
                if best is None or key < best[0]:
                    best = (key, (r, l), p)
        out.append(MinimalComponent(
            seeds=tuple(a for a, _ in g),
            pair=None if best is None else best[1],
            period=None if best is None else best[2],
            scale=scale))
    return tuple(out)


# ---------------------------------------------------------------------------
# return words and the derivative substitution


@dataclass(frozen=True)
class ReturnWordSystem:
    """The census of blocks between consecutive junction markers.

    `pairs` lists one (left marker, right marker) junction per component;
    `power` is the expansion power fixing every marker on its side;
    `vocabulary` holds the return words, first-discovery order; `indices`
    names them 1..n as the derived alphabet.
    """

    pairs: tuple[tuple[str, str], ...]
    power: int
    vocabulary: tuple[tuple[str, ...], ...]
    tau: Substitution | None = None

    @property
    def indices(self) -> tuple[str, ...]:
        return tuple(str(i + 1) for i in range(len(self.vocabulary)))

    def phi(self, index: str) -> tuple[str, ...]:
        return self.vocabulary[int(index) - 1]

    def phi_word(self, indices) -> tuple[str, ...]:
        out: list[str] = []
        for i in indices:
            out.extend(self.phi(i))
        return tuple(out)

    def word_text(self, index: str) -> str:
        return "".join(self.phi(index))


def _marker_cuts(word, markers) -> list[int]:
    cuts = [0]
    cuts.extend(
        c for c in range(1, len(word))
        if (word[c - 1], word[c]) in markers)
    return cuts


def return_words(s: Substitution, scale: int) -> ReturnWordSystem:
    """Enumerate the return words of the junction markers, in first-occurrence
    order along the marker letters' expansions; words of the language that
    qualify but never show up there (they live in transient strands) are
    appended in length-lexicographic order."""
    comps = minimal_components(s, scale=scale)
    if not comps:
        raise DecompositionFailure("no one-letter fixed seeds: nothing recurs")
    for c in comps:
        if c.pair is None:
            raise DecompositionFailure(
                f"component seeded by {c.seeds[0]!r} has no junction pair")
    pairs = tuple(c.pair for c in comps)
    power = lcm(*(c.period for c in comps))
    eff = s if power == 1 else s.power(power)
    markers = set(pairs)

    vocabulary: list[tuple[str, ...]] = []
    seen: set[tuple[str, ...]] = set()
    fronts = {l: (l,) for _, l in pairs}
    for _ in range(20):
        if all(len(w) >= 32 * scale for w in fronts.values()):
            break
        progressed = False
        for _, l in pairs:
            grown = eff.apply(fronts[l])
            progressed = progressed or len(grown) > len(fronts[l])
            fronts[l] = grown
        for _, l in pairs:
            word = fronts[l]
            cuts = _marker_cuts(word, markers)
            for c1, c2 in zip(cuts, cuts[1:]):
                if c2 - c1 > scale:
                    raise ScaleTooSmall(
                        f"marker gap of {c2 - c1} exceeds scale {scale}")
                seg = word[c1:c2]
                if seg not in seen:
                    seen.add(seg)
                    vocabulary.append(seg)
        if not progressed:
            break

    lang = factor_language(s, scale + 2)
    left_context = {l: r for r, l in pairs}
    right_contexts: dict[str, list[str]] = {}
    for r, l in pairs:
        right_contexts.setdefault(r, []).append(l)
    for w in sorted_words(s, (u for u in lang.factors if len(u) <= scale)):
        if w in seen or w[0] not in left_context or w[-1] not in right_contexts:
            continue
        if any((w[t], w[t + 1]) in markers for t in range(len(w) - 1)):
            continue
        before = (left_context[w[0]],)
        if any(before + w + (after,) in lang for after in right_contexts[w[-1]]):
            seen.add(w)
            vocabulary.append(w)
    return ReturnWordSystem(pairs, power, tuple(vocabulary))


def _decompose(rs: ReturnWordSystem, word) -> tuple[str, ...]:
    lookup = {w: idx for idx, w in zip(rs.indices, rs.vocabulary)}
    cuts = _marker_cuts(word, set(rs.pairs)) + [len(word)]
    out = []
    for c1, c2 in zip(cuts, cuts[1:]):
        seg = word[c1:c2]
        if seg not in lookup:
            raise DecompositionFailure(
                f"segment {''.join(seg)!r} is not a known return word; "
                "the vocabulary scale was too small")
        out.append(lookup[seg])
    return tuple(out)


def derivative_substitution(rs: ReturnWordSystem, s: Substitution) -> Substitution:
    """The induced rule on return-word indices: expand each return word one
    step and split along the marker cuts (the split is forced, hence unique)."""
    eff = s if rs.power == 1 else s.power(rs.power)
    images = tuple(_decompose(rs, eff.apply(w)) for w in rs.vocabulary)
    return Substitution(rs.indices, images)


# ---------------------------------------------------------------------------
# properness and m-primitivity


@dataclass(frozen=True)
class ProperWitness:
    power: int


@dataclass(frozen=True)
class NotProperUpTo:
    searched: int


def is_proper(s: Substitution, p_max: int):
    """Least p <= p_max such that, for every letter a, all admissible right
    neighbours expand (p times) to the same first letter, and all admissible
    left neighbours expand to the same last letter."""
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    lang2 = factor_language(s, 2)
    right_of = {a: set() for a in s.alphabet}
    left_of = {a: set() for a in s.alphabet}
    for w in lang2.factors:
        if len(w) == 2:
            right_of[w[0]].add(w[1])
            left_of[w[1]].add(w[0])
    first = {a: s.image(a)[0] for a in s.alphabet}
    last = {a: s.image(a)[-1] for a in s.alphabet}
    fp, lp = dict(first), dict(last)
    for p in range(1, p_max + 1):
        ok = all(
            len({fp[b] for b in right_of[a]}) <= 1
            and len({lp[c] for c in left_of[a]}) <= 1
            for a in s.alphabet)
        if ok:
            return ProperWitness(p)
        fp = {a: fp[first[a]] for a in s.alphabet}
        lp = {a: lp[last[a]] for a in s.alphabet}
    return NotProperUpTo(p_max)


@dataclass(frozen=True)
class MPrimitiveDecomposition:
    blocks: tuple[tuple[str, ...], ...]
    transient: tuple[str, ...]
    scale: int

    @property
    def m(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class NotMPrimitive:
    reason: str


def _is_primitive(mat: np.ndarray) -> bool:
    n = mat.shape[0]
    step = mat > 0
    power = step.copy()
    for _ in range((n - 1) ** 2 + 1):
        if power.all():
            return True
        power = (power.astype(np.int64) @ step.astype(np.int64)) > 0
    return bool(power.all())


def is_m_primitive(s: Substitution, scale: int = 8):
    """Decompose the alphabet into primitive image-closed blocks plus letters
    feeding into them, or explain why that fails.

    The two language conditions (iterate language stable under taking powers,
    every letter realized) are only checked up to `scale` and the result
    records that bound.
    """
    idx = s._index
    succ = {a: set(s.image(a)) for a in s.alphabet}
    reach: dict[str, set[str]] = {}
    for a in s.alphabet:
        out, frontier = set(succ[a]), list(succ[a])
        while frontier:
            for b in succ[frontier.pop()]:
                if b not in out:
                    out.add(b)
                    frontier.append(b)
        reach[a] = out

    sccs: list[tuple[str, ...]] = []
    assigned: set[str] = set()
    for a in s.alphabet:
        if a in assigned:
            continue
        comp = tuple(
            b for b in s.alphabet
            if (b == a) or (b in reach[a] and a in reach[b]))
        if a in reach[a]:  # genuine cycle class
            sccs.append(comp)
            assigned |= set(comp)
        else:
            sccs.append((a,))
            assigned.add(a)

    matrix = incidence_matrix(s)
    blocks = []
    for comp in sccs:
        closed = all(succ[a] <= set(comp) for a in comp)
        if not closed or len(comp) < 2:
            continue
        rows = [idx[a] for a in comp]
        if _is_primitive(matrix[np.ix_(rows, rows)]):
            blocks.append(comp)

    block_letters = {a for comp in blocks for a in comp}
    for a in s.alphabet:
        if a in block_letters:
            continue
        if not (reach[a] & block_letters):
            trapped = tuple(sorted({a} | reach[a], key=idx.get))
            return NotMPrimitive(
                f"letters reachable from {a!r} close up into {trapped}, "
                "which contains no primitive block")

    lang = factor_language(s, scale)
    for a in s.alphabet:
        if (a,) not in lang:
            return NotMPrimitive(f"letter {a!r} never occurs in the language")
    for k in (2, 3):
        power_lang = factor_language(s.power(k), scale)
        missing = [w for w in lang.factors if w not in power_lang]
        if missing:
            sample = "".join(sorted_words(s, missing)[0])
            return NotMPrimitive(
                f"power {k} loses the factor {sample!r} at scale {scale}")

    transient = tuple(a for a in s.alphabet if a not in block_letters)
    return MPrimitiveDecomposition(tuple(blocks), transient, scale)


# ---------------------------------------------------------------------------
# end-to-end pipeline


@lru_cache(maxsize=None)
def diagram_via_derivative(s: Substitution) -> StationaryOrderedDiagram:
    """Return-word route to a stationary ordered diagram: derivative rule as
    the read substitution, return-word lengths as the top multiplicities.
    The scale is grown automatically until every marker gap fits."""
    last_error: Exception | None = None
    for scale in (8, 16, 32, 64, 128):
        try:
            rs = return_words(s, scale)
            break
        except ScaleTooSmall as e:
            last_error = e
    else:
        raise last_error  # type: ignore[misc]
    tau = derivative_substitution(rs, s)
    verdict = is_proper(tau, 8)
    if isinstance(verdict, NotProperUpTo):
        raise DiagramError(
            "derivative rule is not proper at any power <= 8; "
            "the tower partitions would not generate the topology")
    counts = tuple(len(w) for w in rs.vocabulary)
    return StationaryOrderedDiagram(tau.alphabet, tau.images, counts)
