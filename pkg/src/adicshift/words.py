"""Alphabets, words, substitutions, factor languages, and growth classification.

A substitution is a map from a finite alphabet into nonempty words over that
alphabet.  Letters are arbitrary short strings (single characters in the rule
file grammar, but derived alphabets -- return-word indices, marked words --
need longer labels).  Internally the heavy string machinery re-encodes each
letter as a single private-use character so that expansion and window slicing
run on plain Python strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np

from .errors import AlphabetError, GrammarError

# ---------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class Substitution:
    """A map letter -> nonempty word, with a fixed alphabet order.

    The alphabet order is fixed at construction time (first appearance on the
    left-hand sides of the rule file) and is used for every deterministic
    tie-break downstream.
    """

    alphabet: tuple[str, ...]
    images: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        seen = set()
        for a in self.alphabet:
            if a in seen:
                raise GrammarError(f"duplicate letter {a!r} in alphabet")
            seen.add(a)
        if len(self.images) != len(self.alphabet):
            raise GrammarError("one image per alphabet letter required")
        for a, img in zip(self.alphabet, self.images):
            if not img:
                raise GrammarError(f"empty image for letter {a!r}")
            for b in img:
                if b not in seen:
                    raise GrammarError(
                        f"image of {a!r} uses {b!r}, which has no rule")

    @classmethod
    def from_rules(cls, rules) -> "Substitution":
        """Build from a dict or iterable of (letter, image) pairs; image may be
        a string (split into characters) or a sequence of letters."""
        pairs = list(rules.items()) if hasattr(rules, "items") else list(rules)
        alphabet = tuple(a for a, _ in pairs)
        images = tuple(tuple(img) for _, img in pairs)
        return cls(alphabet, images)

    # -- basic accessors ---------------------------------------------------

    @cached_property
    def _index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    def image(self, a: str) -> tuple[str, ...]:
        try:
            return self.images[self._index[a]]
        except KeyError:
            raise AlphabetError(f"letter {a!r} not in alphabet") from None

    def apply(self, word) -> tuple[str, ...]:
        """One expansion step on a word (tuple/list/str of letters)."""
        return self.decode(self.encode(as_letters(self, word)).translate(self._table))

    def power(self, k: int) -> "Substitution":
        """The substitution sigma^k (k >= 1) with the same alphabet order."""
        if k < 1:
            raise ValueError("power must be >= 1")
        return Substitution(
            self.alphabet,
            tuple(expand(self, (a,), k) for a in self.alphabet))

    def rule_text(self) -> str:
        """Render back into the rule-file grammar (used by reports)."""
        return "\n".join(
            f"{a} -> {''.join(img) if _single_chars(img) else ' '.join(img)}"
            for a, img in zip(self.alphabet, self.images))

    # -- internal single-character codec ------------------------------------

    @cached_property
    def _enc(self) -> dict[str, str]:
        return {a: chr(0xE000 + i) for i, a in enumerate(self.alphabet)}

    @cached_property
    def _dec(self) -> dict[str, str]:
        return {c: a for a, c in self._enc.items()}

    @cached_property
    def _images_enc(self) -> tuple[str, ...]:
        return tuple("".join(self._enc[b] for b in img) for img in self.images)

    @cached_property
    def _table(self) -> dict[int, str]:
        # str.translate table: one expansion step on encoded strings
        return {0xE000 + i: img for i, img in enumerate(self._images_enc)}

    def encode(self, letters) -> str:
        try:
            return "".join(self._enc[a] for a in letters)
        except KeyError as e:
            raise AlphabetError(f"letter {e.args[0]!r} not in alphabet") from None

    def decode(self, enc: str) -> tuple[str, ...]:
        dec = self._dec
        return tuple(dec[c] for c in enc)


def _single_chars(letters) -> bool:
    return all(len(a) == 1 for a in letters)


def parse_substitution(text: str) -> Substitution:
    """Parse the rule-file grammar: one `letter -> word` per line, `#` starts
    a comment, blank lines ignored, letters are single visible characters,
    alphabet ordered by first appearance on the left."""
    order: list[str] = []
    rules: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise GrammarError(f"line {lineno}: expected 'letter -> word'")
        lhs, rhs = line.split("->", 1)
        lhs = lhs.strip()
        if len(lhs) != 1:
            raise GrammarError(
                f"line {lineno}: left-hand side must be a single letter, got {lhs!r}")
        if lhs in rules:
            raise GrammarError(f"line {lineno}: duplicate rule for {lhs!r}")
        img = tuple(ch for ch in rhs if not ch.isspace())
        if not img:
            raise GrammarError(f"line {lineno}: empty right-hand side for {lhs!r}")
        order.append(lhs)
        rules[lhs] = img
    if not order:
        raise GrammarError("no rules found")
    for a in order:
        for b in rules[a]:
            if b not in rules:
                raise GrammarError(
                    f"missing rule for letter {b!r} (used in the image of {a!r})")
    return Substitution(tuple(order), tuple(rules[a] for a in order))


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class Word:
    """A finite word with an optional marker (a cut position in [0, len]),
    splitting negative from non-negative coordinates."""

    letters: tuple[str, ...]
    marker: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.marker is not None and not 0 <= self.marker <= len(self.letters):
            raise ValueError(f"marker {self.marker} outside [0, {len(self.letters)}]")

    def __len__(self):
        return len(self.letters)

    @property
    def text(self) -> str:
        sep = "" if _single_chars(self.letters) else " "
        return sep.join(self.letters)

    def __str__(self):
        if self.marker is None:
            return self.text
        sep = "" if _single_chars(self.letters) else " "
        left = sep.join(self.letters[:self.marker])
        right = sep.join(self.letters[self.marker:])
        return f"{left}.{right}"


def as_letters(s: Substitution, w) -> tuple[str, ...]:
    """Normalize Word / str / sequence input to a tuple of letters over s."""
    if isinstance(w, Word):
        letters = w.letters
    elif isinstance(w, str):
        letters = tuple(w)  # only sensible for single-character alphabets
    else:
        letters = tuple(w)
    for a in letters:
        if a not in s._index:
            raise AlphabetError(f"letter {a!r} not in alphabet {s.alphabet}")
    return letters


def expand(s: Substitution, w, n: int):
    """sigma^n applied letterwise; sigma^0 is the identity.

    Accepts a Word (marker transported to the image cut), a str (returned as
    str), or a sequence of letters (returned as a tuple).
    """
    if n < 0:
        raise ValueError("power must be >= 0")
    if isinstance(w, Word):
        letters = as_letters(s, w)
        out = s.encode(letters)
        cut = s.encode(letters[:w.marker]) if w.marker is not None else None
        for _ in range(n):
            out = out.translate(s._table)
            if cut is not None:
                cut = cut.translate(s._table)
        return Word(s.decode(out), len(cut) if cut is not None else None)
    letters = as_letters(s, w)
    enc = s.encode(letters)
    for _ in range(n):
        enc = enc.translate(s._table)
    dec = s.decode(enc)
    return "".join(dec) if isinstance(w, str) else dec


def expansion_lengths(s: Substitution, n: int) -> dict[str, int]:
    """|sigma^n(a)| for every letter, via exact integer matrix-vector steps."""
    counts = [[0] * len(s.alphabet) for _ in s.alphabet]
    for i, img in enumerate(s.images):
        for b in img:
            counts[i][s._index[b]] += 1
    v = [1] * len(s.alphabet)
    for _ in range(n):
        v = [sum(row[j] * v[j] for j in range(len(v))) for row in counts]
    return dict(zip(s.alphabet, v))


def norms(s: Substitution, n: int) -> tuple[int, int]:
    """(min, max) image length of sigma^n over the alphabet, n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lengths = expansion_lengths(s, n)
    return min(lengths.values()), max(lengths.values())


def incidence_matrix(s: Substitution) -> np.ndarray:
    """M[a, b] = number of occurrences of b in sigma(a), rows/columns in
    alphabet order.  Row a sums to |sigma(a)|."""
    m = np.zeros((len(s.alphabet), len(s.alphabet)), dtype=np.int64)
    for i, img in enumerate(s.images):
        for b in img:
            m[i, s._index[b]] += 1
    return m


# ---------------------------------------------------------------------------
# long/short classification


@dataclass(frozen=True)
class LetterClassification:
    long: tuple[str, ...]
    short: tuple[str, ...]


def classify_letters(s: Substitution) -> LetterClassification:
    """Graph criterion: a letter is long iff it reaches, in the occurrence
    digraph (edge c -> b when b occurs in sigma(c)), some letter that lies on
    a cycle and has image length >= 2.  A bare cycle of length-1 images stays
    bounded; a cycle letter with a branching image pumps one extra persistent
    letter per loop, so this matches |sigma^n(a)| -> infinity exactly."""
    succ = {a: set(s.image(a)) for a in s.alphabet}

    def reach_from(seeds):
        out, frontier = set(seeds), list(seeds)
        while frontier:
            for b in succ[frontier.pop()]:
                if b not in out:
                    out.add(b)
                    frontier.append(b)
        return out

    reach = {a: reach_from([a]) for a in s.alphabet}  # includes a itself
    on_cycle = {a for a in s.alphabet if a in reach_from(succ[a])}
    targets = {c for c in on_cycle if len(s.image(c)) >= 2}
    long = tuple(a for a in s.alphabet if reach[a] & targets)
    short = tuple(a for a in s.alphabet if not reach[a] & targets)
    return LetterClassification(long, short)


# ---------------------------------------------------------------------------
# factor language


@dataclass(frozen=True)
class FactorLanguage:
    """All factors of the iterates sigma^n(a), n >= 1, up to length cap.

    closure_status records how the bounded transfer iteration terminated:
    "converged" when the window sets stabilize, "cycle-summed" when they enter
    a genuine cycle and the union over one full cycle was taken.
    """

    cap: int
    factors: frozenset[tuple[str, ...]]
    closure_status: str

    def __contains__(self, w) -> bool:
        if isinstance(w, Word):
            w = w.letters
        elif isinstance(w, str):
            w = tuple(w)
        return tuple(w) in self.factors

    def words_of_length(self, k: int) -> list[tuple[str, ...]]:
        return [w for w in self.factors if len(w) == k]


def _windows(enc: str, cap: int) -> set[str]:
    # maximal cap-bounded pieces: the word itself if short, else all
    # length-cap windows
    if len(enc) <= cap:
        return {enc}
    return {enc[i:i + cap] for i in range(len(enc) - cap + 1)}


@lru_cache(maxsize=None)
def factor_language(s: Substitution, cap: int) -> FactorLanguage:
    """L(sigma) cut at length cap via the bounded-window transfer map.

    Iterates X_k = cap-windows of sigma^k(alphabet).  Sound because every
    length-<=cap window of sigma(w) sits inside sigma(u) for some factor u of
    w with |u| <= cap (images are nonempty).  The set sequence is eventually
    cyclic; the language is the downward closure of the union over the
    pre-period plus one full cycle.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    table = s._table
    current = frozenset(
        w for img in s._images_enc for w in _windows(img, cap))
    seen: dict[frozenset, int] = {current: 1}
    trail = [current]
    while True:
        nxt = frozenset(
            w for u in current for w in _windows(u.translate(table), cap))
        if nxt in seen:
            start = seen[nxt]
            period = len(trail) + 1 - start
            break
        seen[nxt] = len(trail) + 1
        trail.append(nxt)
        current = nxt

    if period == 1:
        status = "converged"
    else:
        # the window sets cycle; if their downward closures all agree the
        # language still converged, otherwise we sum over the cycle
        closures = [_downward(set(x), cap) for x in trail[start - 1:]]
        status = "converged" if all(c == closures[0] for c in closures) else "cycle-summed"

    union: set[str] = set()
    for x in trail:
        union |= x
    factors = frozenset(s.decode(w) for w in _downward(union, cap))
    return FactorLanguage(cap, factors, status)


def _downward(words: set[str], cap: int) -> set[str]:
    out: set[str] = set()
    for w in words:
        n = len(w)
        for i in range(n):
            top = min(n, i + cap)
            for j in range(i + 1, top + 1):
                out.add(w[i:j])
    return out


def sorted_words(s: Substitution, words) -> list[tuple[str, ...]]:
    """Deterministic order: length, then lexicographic by alphabet position."""
    idx = s._index
    return sorted(words, key=lambda w: (len(w), tuple(idx[a] for a in w)))


# ---------------------------------------------------------------------------
# structural predicates


class NestingClass(Enum):
    STARTS_LONG = "StartsLong"
    ENDS_LONG = "EndsLong"
    BOTH = "Both"
    NONE = "None"


def nesting_class(s: Substitution) -> NestingClass:
    """Do the images of long letters all start (resp. end) with a long letter?"""
    long = set(classify_letters(s).long)
    starts = all(s.image(a)[0] in long for a in long)
    ends = all(s.image(a)[-1] in long for a in long)
    if starts and ends:
        return NestingClass.BOTH
    if starts:
        return NestingClass.STARTS_LONG
    if ends:
        return NestingClass.ENDS_LONG
    return NestingClass.NONE


@dataclass(frozen=True)
class Unbounded:
    """All-short factors kept growing past the search cap -- evidence against
    aperiodicity, and a bound M does not exist at this scale."""
    cap: int


def short_block_bound(s: Substitution, cap: int = 16):
    """Least M such that every factor of length M contains a long letter.

    Returns M when the longest all-short factor found has length < cap
    (then no longer one exists: it would appear within the cap), otherwise
    Unbounded(cap).
    """
    if cap < 2:
        raise ValueError("cap must be >= 2")
    short = set(classify_letters(s).short)
    if not short:
        return 1
    lang = factor_language(s, cap)
    longest = max(
        (len(w) for w in lang.factors if set(w) <= short), default=0)
    if longest >= cap:
        return Unbounded(cap)
    return longest + 1


@dataclass(frozen=True)
class NoneUpToBounds:
    """No periodic witness within the bounds; a semi-decision, not a proof."""
    max_len: int
    max_pow: int


def periodicity_witness_search(s: Substitution, max_len: int, max_pow: int):
    """Search for u with |u| <= max_len whose max_pow-fold repetition is in
    the language -- a witness that X_sigma plausibly has a periodic point.
    Candidates run in length-then-lexicographic order; first hit wins."""
    if max_len < 1 or max_pow < 1:
        raise ValueError("bounds must be >= 1")
    lang = factor_language(s, max_len * max_pow)
    for u in sorted_words(s, (w for w in lang.factors if len(w) <= max_len)):
        if u * max_pow in lang:
            return u
    return NoneUpToBounds(max_len, max_pow)
