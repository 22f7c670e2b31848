"""Desubstitution of finite windows.

A window (a factor of the subshift, seen through a finite frame) is tiled by
one-letter images sigma(a); the two end tiles may be clipped.  Iterating the
tiling on the interior that survives end effects realizes recognizability at
desk scale: genuine aperiodic inputs produce a unique parse chain, periodic
ones an ambiguity report.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import WindowTooShort
from .words import (
    Substitution,
    as_letters,
    expand,
    expansion_lengths,
    factor_language,
    norms,
)

# ---------------------------------------------------------------------------
# tilings


@dataclass(frozen=True)
class Tiling:
    """One way to cover a window with images sigma(a).

    parent: the letters whose images tile the window, left to right.
    offset: position of the window start inside sigma(parent[0]); always
        0 <= offset < |sigma(parent[0])|.
    length: window length.
    boundary: visible lengths of the first and last tiles (the full image
        lengths when nothing is clipped; equal entries for a one-tile cover).
    cuts: tile boundary positions inside [0, length]; 0 and length appear
        exactly when a window edge coincides with a tile boundary.
    """

    parent: tuple[str, ...]
    offset: int
    length: int
    boundary: tuple[int, int]
    cuts: tuple[int, ...]

    def reconstruct(self, s: Substitution) -> tuple[str, ...]:
        """Concatenate the clipped images back into the window."""
        full = expand(s, self.parent, 1)
        return full[self.offset:self.offset + self.length]


def _parent_in_language(s: Substitution, parent) -> bool:
    # membership at cap |parent|; computed against a bucketed cap (next
    # multiple of 8) so repeated queries share one cached language -- the
    # answer is identical by the cap-filter consistency of factor_language
    bucket = max(8, -(-len(parent) // 8) * 8)
    return parent in factor_language(s, bucket).factors


def _tile_boundaries(s: Substitution, parent, offset):
    """Tile boundary positions in window coordinates; first entry <= 0."""
    bounds = [-offset]
    for a in parent:
        bounds.append(bounds[-1] + len(s.image(a)))
    return bounds


def one_word_tilings(s: Substitution, window, interior_only: bool = False):
    """All tilings of the window by {sigma(a)}; clipped end tiles are allowed
    unless interior_only, which demands an exact cover (offset 0, exact end).

    Parents are validated against the factor language at cap |parent| --
    except when the substitution never expands (max norm 1), where the
    language contains no multi-letter words and the check is meaningless.
    Result order: (first cut position, parent in alphabet indices).
    """
    letters = as_letters(s, window)
    n = len(letters)
    if n == 0:
        raise ValueError("window must be nonempty")
    images = {a: s.image(a) for a in s.alphabet}
    found: set[tuple[tuple[str, ...], int]] = set()

    if interior_only:
        def walk_exact(pos, parent):
            if pos == n:
                found.add((tuple(parent), 0))
                return
            for a, img in images.items():
                if letters[pos:pos + len(img)] == img:
                    parent.append(a)
                    walk_exact(pos + len(img), parent)
                    parent.pop()

        walk_exact(0, [])
    else:
        # single-tile covers: the window sits anywhere inside one image
        for a, img in images.items():
            for off in range(len(img) - n + 1):
                if img[off:off + n] == letters:
                    found.add(((a,), off))

        # multi-tile covers: clipped-or-full first tile, exact middles,
        # clipped-or-full last tile
        def walk(pos, parent, offset0):
            for a, img in images.items():
                end = pos + len(img)
                if end < n:
                    if letters[pos:end] == img:
                        parent.append(a)
                        walk(end, parent, offset0)
                        parent.pop()
                elif end == n:
                    if letters[pos:] == img:
                        found.add((tuple(parent + [a]), offset0))
                elif img[:n - pos] == letters[pos:]:
                    found.add((tuple(parent + [a]), offset0))

        for first, img in images.items():
            for offset0 in range(len(img)):
                k = len(img) - offset0
                if k < n and img[offset0:] == letters[:k]:
                    walk(k, [first], offset0)

    if norms(s, 1)[1] > 1:
        found = {(p, off) for (p, off) in found if _parent_in_language(s, p)}

    tilings = []
    for parent, offset in found:
        bounds = _tile_boundaries(s, parent, offset)
        cuts = tuple(b for b in bounds if 0 <= b <= n)
        left = min(bounds[1], n) - max(bounds[0], 0)
        right = min(bounds[-1], n) - max(bounds[-2], 0)
        tilings.append(Tiling(parent, offset, n, (left, right), cuts))

    index = {a: i for i, a in enumerate(s.alphabet)}
    tilings.sort(key=lambda t: (len(images[t.parent[0]]) - t.offset,
                                tuple(index[a] for a in t.parent)))
    return tilings


# ---------------------------------------------------------------------------
# recognizability

# sentinel magnitude for tile boundaries that fall outside the visible frame
_FAR = 10 ** 12


@dataclass(frozen=True)
class ChainLevel:
    """One desubstitution level: `parent` is the agreed word of level tiles
    meeting the clipped interior; `bounds` gives each tile boundary in base
    window coordinates, None where the boundary lies beyond the frame."""
    parent: tuple[str, ...]
    bounds: tuple

    @property
    def offset(self):
        """Base coordinate where the level expansion begins (None when the
        first tile starts left of the frame)."""
        return self.bounds[0]


@dataclass(frozen=True)
class ParseChain:
    base: tuple[str, ...]
    levels: tuple[ChainLevel, ...]

    def windows(self):
        """The base window followed by the parent word of each level."""
        return (self.base,) + tuple(l.parent for l in self.levels)


@dataclass(frozen=True)
class AmbiguityReport:
    """The surviving parse chains disagree on the interior (or none exist):
    evidence of periodicity or an insufficient radius."""
    level: int
    tilings: tuple[Tiling, ...]
    interior: tuple[int, int]
    note: str = ""


def _letter_forced(s: Substitution, visible: str, left_hidden: bool,
                   right_hidden: bool) -> bool:
    """Is the letter of a partially visible tile forced by its visible part?

    `visible` is the observed fragment of the tile's image; a hidden side
    means at least one image letter continues beyond the known region there.
    """
    if not visible:
        return False
    fits = 0
    for a in s.alphabet:
        img = "".join(s.image(a))
        if left_hidden and right_hidden:
            ok = len(img) > len(visible) + 1 and visible in img[1:-1]
        elif left_hidden:
            ok = len(img) > len(visible) and img.endswith(visible)
        else:
            ok = len(img) > len(visible) and img.startswith(visible)
        if ok:
            fits += 1
            if fits > 1:
                return False
    return fits == 1


def _annotate_chain(s: Substitution, chain, base, unit):
    """Per-level trace of one chain of tilings, in base coordinates.

    Returns a list of (cuts, tiles) per level, where cuts are the boundary
    positions surviving the level's clip and tiles are (start, end, letter)
    triples kept for the next level -- fully located tiles meeting the
    clipped interior, plus boundary-straddling tiles whose letter the
    visible fragment forces.  Unknown coordinates are None.
    """
    length = len(base)
    trace = []
    prev_word = "".join(base)        # word the current level retiles
    prev_bounds = list(range(length + 1))   # letter index -> base coordinate
    kept_lo, kept_hi = 0, length     # boundary-index clamp from kept tiles
    for level, t in enumerate(chain, start=1):
        lb = _tile_boundaries(s, t.parent, t.offset)
        bb = [prev_bounds[p] if kept_lo <= p <= kept_hi else None
              for p in lb]
        lo, hi = unit * level, length - unit * level
        cuts = tuple(b for b in bb if b is not None and lo <= b <= hi)
        tiles = []
        kept_idx = []
        for j, a in enumerate(t.parent):
            b, e = bb[j], bb[j + 1]
            if (b if b is not None else -_FAR) > hi:
                continue
            if (e if e is not None else _FAR) < lo:
                continue
            # a tile reaching past the known letters is kept only when its
            # visible fragment forces the letter
            left_hidden = lb[j] < kept_lo
            right_hidden = lb[j + 1] > kept_hi
            if left_hidden or right_hidden:
                p, q = max(lb[j], kept_lo), min(lb[j + 1], kept_hi)
                visible = prev_word[p:q]
                if not _letter_forced(s, visible, left_hidden, right_hidden):
                    continue
            tiles.append((b, e, a))
            kept_idx.append(j)
        if kept_idx and kept_idx != list(range(kept_idx[0], kept_idx[-1] + 1)):
            raise AssertionError("kept tiles must form a contiguous run")
        trace.append((cuts, tuple(tiles)))
        prev_word = "".join(t.parent)
        prev_bounds = bb
        if kept_idx:
            kept_lo, kept_hi = kept_idx[0], kept_idx[-1] + 1
        else:
            kept_lo, kept_hi = 0, -1     # nothing located: starve next level
    return trace


def recognize_window(s: Substitution, window, n: int, chain_budget: int = 1000):
    """Parse the window n levels deep.

    All candidate chains of tilings (one tiling per level, each retiling the
    previous level's full parent word) are compared level by level in base
    coordinates.  At level k the frame loses k * (max norm) letters per end
    -- the reach of end effects -- or nothing at all when every image is a
    single letter, so no tile can straddle the frame.  Chains must agree on
    the surviving cut positions and on the kept tiles; the kept tiles of the
    first chain form the ParseChain, and disagreement yields an
    AmbiguityReport.
    """
    if n < 1:
        raise ValueError("levels must be >= 1")
    base = as_letters(s, window)
    length = len(base)
    mnorm = norms(s, 1)[1]
    unit = mnorm if mnorm >= 2 else 0
    if unit and n * unit > length - n * unit:
        raise WindowTooShort(
            f"window length {length} cannot survive {n} rounds of clipping "
            f"{unit} per end")

    chains = [[]]
    for level in range(1, n + 1):
        interior = (unit * level, length - unit * level)
        extended = []
        for chain in chains:
            word = base if not chain else chain[-1].parent
            for t in one_word_tilings(s, word, interior_only=False):
                extended.append(chain + [t])
            if len(extended) > chain_budget:
                return AmbiguityReport(level, (), interior,
                                       "chain budget exceeded")
        if not extended:
            return AmbiguityReport(level, (), interior,
                                   "no tilings at all: not a language window")
        chains = extended

    traces = [tuple(_annotate_chain(s, chain, base, unit)) for chain in chains]
    if any(tr != traces[0] for tr in traces[1:]):
        level = next(
            k + 1 for k in range(n)
            if any(tr[k] != traces[0][k] for tr in traces[1:]))
        level_tilings = sorted(
            {chain[level - 1] for chain in chains},
            key=lambda t: (len(s.image(t.parent[0])) - t.offset, t.parent))
        return AmbiguityReport(level, tuple(level_tilings),
                               (unit * level, length - unit * level),
                               "chains disagree on the interior")

    levels = []
    for (cuts, tiles) in traces[0]:
        if not tiles:
            raise WindowTooShort(
                "no level tile meets the clipped interior; enlarge the radius")
        parent = tuple(a for _, _, a in tiles)
        bounds = (tiles[0][0],) + tuple(e for _, e, _ in tiles)
        levels.append(ChainLevel(parent, bounds))
    return ParseChain(base, tuple(levels))


def chain_cut_positions(chain: ParseChain, level: int):
    """Level tile boundaries in base coordinates (None beyond the frame)."""
    if not 1 <= level <= len(chain.levels):
        raise ValueError("level out of range")
    return chain.levels[level - 1].bounds


# ---------------------------------------------------------------------------
# tower bookkeeping


@dataclass
class TowerTable:
    """Heights |sigma^n(a)| of the level-n tower over each letter whose
    cylinder is nonempty (the letter occurs in the language)."""
    heights: dict[str, int]
    level: int


def kr_tower_heights(s: Substitution, n: int) -> TowerTable:
    if n < 0:
        raise ValueError("level must be >= 0")
    present = {w[0] for w in factor_language(s, 3).factors if len(w) == 1}
    lengths = expansion_lengths(s, n)
    return TowerTable({a: lengths[a] for a in s.alphabet if a in present}, n)
