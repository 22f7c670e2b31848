"""Layered box matrices over towers: j-symbols, finite j-sequence windows,
compatibility depth, common cuts, and the budgeted expansiveness search.

A j-symbol is the column-aligned matrix of a tower: row j is one box, row
j-1 the boxes it expands into one level down, and so on to unit boxes at
row 0.  Windows are finite clips of the bi-infinite row stacks an orbit
generates; all depth and cut notions here are window-relative.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .diagrams import (
    TOP,
    FinitePath,
    Maximal,
    StationaryOrderedDiagram,
    minimal_path,
    read_substitution,
    vershik_successor,
)
from .errors import AlphabetError, SpanMismatch, WindowTooShort
from .recognize import ParseChain
from .words import Substitution, expand

# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class JSymbol:
    """Finite box matrix of one tower: rows[i] lists (label, width) boxes,
    row `level` is the single base box, row 0 has unit boxes only."""

    base: str
    level: int
    rows: tuple[tuple[tuple[str, int], ...], ...]

    def __post_init__(self):
        if self.level != len(self.rows) - 1:
            raise ValueError("level must index the last row")
        totals = {sum(w for _, w in row) for row in self.rows}
        if len(totals) != 1:
            raise ValueError("rows must have equal total width")
        if any(w != 1 for _, w in self.rows[0]):
            raise ValueError("row 0 must consist of unit boxes")
        for below, above in zip(self.rows, self.rows[1:]):
            if not _cut_set(above) <= _cut_set(below):
                raise ValueError("box boundaries must refine downward")

    @property
    def width(self) -> int:
        return sum(w for _, w in self.rows[0])


def _cut_set(row) -> set[int]:
    edge, cuts = 0, set()
    for _, w in row[:-1]:
        edge += w
        cuts.add(edge)
    return cuts


def build_j_symbol(source, base: str, j: int) -> JSymbol:
    """The level-j box matrix over `base`.

    For a substitution, boxes at row i are labeled by the i-fold images of
    the letters of the (j-i)-fold expansion of `base`, so the width is the
    j-fold image length.  For a stationary diagram, boxes at row i >= 1 are
    labeled by vertices and sized by their tower heights; row 0 lists one
    unit box per top edge.
    """
    if j < 0:
        raise ValueError("symbol level must be >= 0")
    if isinstance(source, Substitution):
        if base not in source.alphabet:
            raise AlphabetError(f"unknown letter {base!r}")
        rows = tuple(
            tuple(("".join(expand(source, (b,), i)),
                   len(expand(source, (b,), i)))
                  for b in expand(source, (base,), j - i))
            for i in range(j + 1))
        return JSymbol(base, j, rows)
    d: StationaryOrderedDiagram = source
    if j == 0:
        if base != TOP:
            raise AlphabetError(f"level-0 boxes carry the top label, "
                                f"not {base!r}")
        return JSymbol(base, 0, (((TOP, 1),),))
    if base not in d.alphabet:
        raise AlphabetError(f"unknown vertex {base!r}")
    tau = read_substitution(d)
    heights = _tower_heights(d, j)
    rows = [tuple((TOP, 1)
                  for b in expand(tau, (base,), j - 1)
                  for _ in range(d.top_count(b)))]
    for i in range(1, j + 1):
        rows.append(tuple((b, heights[i][b])
                          for b in expand(tau, (base,), j - i)))
    return JSymbol(base, j, tuple(rows))


@lru_cache(maxsize=None)
def _tower_heights(d: StationaryOrderedDiagram, up_to: int):
    """heights[k][v] = number of paths from the top into v at level k."""
    heights = [{TOP: 1}]
    if up_to >= 1:
        heights.append({a: d.top_count(a) for a in d.alphabet})
    for _ in range(2, up_to + 1):
        prev = heights[-1]
        heights.append(
            {a: sum(prev[b] for b in d.read_image(a)) for a in d.alphabet})
    return tuple(heights)


# ---------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class JSequenceWindow:
    """A finite clip of stacked box rows on a common coordinate span.

    rows[i] lists (label, start, stop) with start/stop clipped to the
    half-open span; boxes abut and cover the span at every level.
    """

    span: tuple[int, int]
    rows: tuple[tuple[tuple[str, int, int], ...], ...]

    def __post_init__(self):
        lo, hi = self.span
        if lo >= hi:
            raise ValueError("span must be nonempty")
        for row in self.rows:
            if row[0][1] != lo or row[-1][2] != hi:
                raise ValueError("rows must cover the span")
            for (_, _, stop), (_, start, _) in zip(row, row[1:]):
                if stop != start:
                    raise ValueError("boxes must abut")
        edges = [{start for _, start, _ in row[1:]} for row in self.rows]
        for below, above in zip(edges, edges[1:]):
            if not above <= below:
                raise ValueError("box boundaries must refine downward")

    @property
    def level(self) -> int:
        return len(self.rows) - 1

    def cuts(self, i: int) -> frozenset[int]:
        """Interior box boundaries of row i."""
        return frozenset(start for _, start, _ in self.rows[i][1:])

    def clip(self, lo: int, hi: int) -> "JSequenceWindow":
        if lo < self.span[0] or hi > self.span[1] or lo >= hi:
            raise SpanMismatch(
                f"cannot clip {self.span} to [{lo}, {hi})")
        rows = tuple(
            tuple((label, max(start, lo), min(stop, hi))
                  for label, start, stop in row
                  if start < hi and stop > lo)
            for row in self.rows)
        return JSequenceWindow((lo, hi), rows)


def window_from_parse(s: Substitution, chain: ParseChain,
                      radius: int) -> JSequenceWindow:
    """Stack the levels of a parse chain over the central radius window.

    Coordinates are those of the parsed base window; row i boxes sit at the
    level-i tile boundaries of the chain and are labeled by i-fold images.
    """
    length = len(chain.base)
    center = length // 2
    lo, hi = center - radius, center + radius + 1
    if lo < 0 or hi > length:
        raise WindowTooShort(
            f"radius {radius} exceeds the parsed window interior")
    far = 10 ** 12
    rows = [tuple((a, k, k + 1) for k, a in enumerate(chain.base))]
    for i, lvl in enumerate(chain.levels, start=1):
        bounds = list(lvl.bounds)
        for k in range(len(bounds)):          # leading Nones: beyond frame
            if bounds[k] is not None:
                break
            bounds[k] = -far
        for k in range(len(bounds) - 1, -1, -1):   # trailing Nones
            if bounds[k] is not None:
                break
            bounds[k] = far
        rows.append(tuple(
            ("".join(expand(s, (a,), i)), start, stop)
            for a, start, stop in zip(lvl.parent, bounds, bounds[1:])))
    for row in rows:
        if row[0][1] > lo or row[-1][2] < hi:
            raise WindowTooShort(
                f"level tiles cover [{row[0][1]}, {row[-1][2]}), "
                f"short of the radius-{radius} window")
    return JSequenceWindow(
        (lo, hi),
        tuple(tuple((label, max(start, lo), min(stop, hi))
                    for label, start, stop in row
                    if start < hi and stop > lo)
              for row in rows))


def path_window(d: StationaryOrderedDiagram, p: FinitePath, j: int,
                radius: int) -> JSequenceWindow:
    """Rows 0..j of the tower matrix around a finite path's own column.

    The path sits at column 0; its tower spans [-rank, width - rank), and
    the window is the radius neighbourhood clipped to that extent.  Box
    positions come from a lazy descent, so deep towers never materialise.
    """
    if not 0 <= j <= p.level:
        raise ValueError("row level must be within the path depth")
    heights = _tower_heights(d, p.level)
    n = tower_rank(d, p)
    width = heights[p.level][p.terminal]
    lo = max(-radius, -n)
    hi = min(radius + 1, width - n)
    rows = [tuple((TOP, k, k + 1) for k in range(lo, hi))]
    for i in range(1, j + 1):
        rows.append(tuple(_row_slice(d, heights, p, -n, i, lo, hi)))
    return JSequenceWindow((lo, hi), tuple(rows))


def tower_rank(d: StationaryOrderedDiagram, p: FinitePath) -> int:
    """Position of the path inside its tower: the number of paths into the
    same terminal that precede it in the edge-wise enumeration order."""
    heights = _tower_heights(d, p.level)
    chain = p.vertices(d)
    rank = 0
    for k, edge in enumerate(p.indices, start=1):
        below = d.in_edges(k, chain[k])
        rank += sum(heights[k - 1][b] for b in below[:edge])
    return rank


def _row_slice(d, heights, p: FinitePath, tower_start: int, row: int,
               lo: int, hi: int):
    """(label, start, stop) boxes of the given row over [lo, hi), clipped;
    descends only into children overlapping the window."""
    stack = [(p.level, p.terminal, tower_start)]
    while stack:
        level, vertex, offset = stack.pop()
        if level == row:
            yield (vertex, max(offset, lo),
                   min(offset + heights[level][vertex], hi))
            continue
        pending = []
        at = offset
        for b in d.in_edges(level, vertex):
            w = heights[level - 1][b]
            if at < hi and at + w > lo:
                pending.append((level - 1, b, at))
            at += w
        stack.extend(reversed(pending))


# ---------------------------------------------------------------------------
# depth and cuts


@dataclass(frozen=True)
class DepthReport:
    """depth: highest row on which the two windows fully agree (-1 when
    even row 0 differs); common_cuts[i]: positions where both windows have
    a row-i box boundary."""
    depth: int
    common_cuts: tuple[tuple[int, ...], ...]


def depth_and_cuts(w1: JSequenceWindow, w2: JSequenceWindow) -> DepthReport:
    if w1.span != w2.span:
        raise SpanMismatch(f"spans differ: {w1.span} vs {w2.span}")
    top = min(w1.level, w2.level)
    depth = -1
    while depth < top and w1.rows[depth + 1] == w2.rows[depth + 1]:
        depth += 1
    cuts = tuple(tuple(sorted(w1.cuts(i) & w2.cuts(i)))
                 for i in range(top + 1))
    return DepthReport(depth, cuts)


# ---------------------------------------------------------------------------
# eventual periodicity


@dataclass(frozen=True)
class EventualPeriod:
    start: int
    period: int


def eventually_periodic_check(row, n0: int, m_max: int):
    """Least period m <= m_max with row[n + m] == row[n] for all visible
    n >= n0, or None.  The window must exceed n0 + 2*m_max so every
    candidate period is tested against at least m_max further columns."""
    row = tuple(row)
    if len(row) <= n0 + 2 * m_max:
        raise ValueError("window too short to certify any period")
    for m in range(1, m_max + 1):
        if all(row[n + m] == row[n] for n in range(n0, len(row) - m)):
            return EventualPeriod(n0, m)
    return None


# ---------------------------------------------------------------------------
# expansiveness witness search


@dataclass(frozen=True)
class CompatibleWitness:
    """Two distinct finite paths whose windows agree on all rows <= depth."""
    left: FinitePath
    right: FinitePath
    windows: tuple[JSequenceWindow, JSequenceWindow]
    depth: int
    radius: int
    via: str
    examined: int


@dataclass(frozen=True)
class NoneWithinBudget:
    budget: int
    examined: int
    radius: int


def shift_down_path(d: StationaryOrderedDiagram,
                    p: FinitePath) -> FinitePath:
    """Push every row one level down: re-enter the tower one level deeper
    through the minimal two-edge prefix, keeping all edges above the first.

    Iterating from a pair with equal rows up to 1 raises the agreement by
    one row per application, which is what turns shallow coincidences into
    deep ones on towers that repeat level structure.
    """
    if p.level < 1:
        raise ValueError("path must have at least one edge")
    return FinitePath(p.level + 1, p.terminal, (0, 0) + p.indices[1:])


def _window(d, p: FinitePath, j: int, radius: int, cache) -> JSequenceWindow:
    key = (p, j)
    if key not in cache:
        cache[key] = path_window(d, p, j, radius)
    return cache[key]


def _common_depth(d, x: FinitePath, y: FinitePath, j: int, radius: int,
                  cache) -> int:
    wx = _window(d, x, j, radius, cache)
    wy = _window(d, y, j, radius, cache)
    if wx.span != wy.span:
        lo = max(wx.span[0], wy.span[0])
        hi = min(wx.span[1], wy.span[1])
        if lo >= hi:
            return -1
        wx, wy = wx.clip(lo, hi), wy.clip(lo, hi)
    return depth_and_cuts(wx, wy).depth


def expansiveness_witness_search(d: StationaryOrderedDiagram, i: int,
                                 radius: int, budget: int):
    """Search for two distinct paths whose radius windows agree on all rows
    up to i, or report NoneWithinBudget once `budget` comparisons are spent.

    Pairs are drawn deterministically: for each vertex, successive paths of
    the depth-(i + radius) tower whose column is at least `radius` from
    both tower ends, so every window covers the full span and agreement is
    never an artifact of edge truncation; only paths into a common terminal
    are paired, so the comparison is between two columns of one tower.
    Each pair is compared over rows <= i via depth_and_cuts; pairs agreeing
    up to row 1 but not row i are additionally pushed down with
    shift_down_path and the pushed pair is re-verified before being
    reported.  Everything is window-relative: a hit certifies agreement at
    this radius only, and no outcome ever certifies expansiveness.
    """
    if i < 1:
        raise ValueError("target depth must be >= 1")
    level = max(i + radius, 2)
    per_vertex = max(3, isqrt(2 * budget // max(1, len(d.alphabet))) + 1)
    cache: dict = {}
    examined = 0
    for v in d.alphabet:
        pool = _path_pool(d, level, v, radius, per_vertex)
        for a in range(len(pool)):
            for b in range(a + 1, len(pool)):
                if examined >= budget:
                    return NoneWithinBudget(budget, examined, radius)
                examined += 1
                x, y = pool[a], pool[b]
                depth = _common_depth(d, x, y, i, radius, cache)
                if depth >= i:
                    return CompatibleWitness(
                        x, y,
                        (_window(d, x, i, radius, cache),
                         _window(d, y, i, radius, cache)),
                        depth, radius, "enumeration", examined)
                if depth >= 1:
                    fx, fy = x, y
                    for _ in range(i - 1):
                        fx = shift_down_path(d, fx)
                        fy = shift_down_path(d, fy)
                    if fx == fy or examined >= budget:
                        continue
                    examined += 1
                    depth = _common_depth(d, fx, fy, i, radius, cache)
                    if depth >= i:
                        return CompatibleWitness(
                            fx, fy,
                            (_window(d, fx, i, radius, cache),
                             _window(d, fy, i, radius, cache)),
                            depth, radius, "shift-down", examined)
    return NoneWithinBudget(budget, examined, radius)


def _path_pool(d: StationaryOrderedDiagram, level: int, vertex: str,
               radius: int, per_vertex: int):
    """Successive paths into the vertex whose column keeps the full radius
    window inside the tower, starting at the lowest such column."""
    width = _tower_heights(d, level)[level][vertex]
    pool = []
    p = minimal_path(d, level, vertex)
    rank = 0
    while len(pool) < per_vertex and rank < width - radius:
        if rank >= radius:
            pool.append(p)
        nxt = vershik_successor(d, p)
        if nxt is Maximal:
            break
        p, rank = nxt, rank + 1
    return pool


# ---------------------------------------------------------------------------
# pretty-printing


def box_matrix_text(obj) -> str:
    """Render a JSymbol or JSequenceWindow as an aligned box matrix, one
    text line per row, unit boxes first."""
    rows = []
    for row in obj.rows:
        boxes = []
        for box in row:
            if len(box) == 2:
                label, width = box
            else:
                label, start, stop = box
                width = stop - start
            boxes.append((str(label), width))
        rows.append(boxes)
    unit = 1
    for boxes in rows:
        for label, width in boxes:
            need = -(-(len(label) - (width - 1)) // width)
            unit = max(unit, need)
    lines = []
    for boxes in rows:
        cells = [label.center(width * unit + width - 1)
                 for label, width in boxes]
        lines.append("|" + "|".join(cells) + "|")
    return "\n".join(lines)
