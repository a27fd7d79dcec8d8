"""Path data model and the structural factorizations used by every map.

A path is a start height plus a tuple of integer rises.  Vertex ``i`` sits
between step ``i`` and step ``i + 1`` (steps are 1-based in the public
factorization reports, rises are 0-based in Python).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .symbolic import ABAR, BBAR, C, D, KAPPA, ONE, Polynomial

UNIT = "unit"
ALPHA = "alpha"
BETA = "beta"
AB_POS = "alphabeta_pos"
AB_NEG = "alphabeta_neg"
KAPPA2 = "kappa2"
KAPPA1 = "kappa"
BETA_JUMP = "beta_jump"

PLUS1 = "plus1"
MINUS1 = "minus1"
C_MARK = "c_mark"
D_MARK = "d_mark"

STEP_WEIGHTS = {
    UNIT: ONE,
    ALPHA: ABAR,
    BETA: BBAR,
    AB_POS: ABAR * BBAR,
    AB_NEG: -(ABAR * BBAR),
    KAPPA2: KAPPA * KAPPA,
    KAPPA1: KAPPA,
    BETA_JUMP: BBAR,
}

VERTEX_WEIGHTS = {
    PLUS1: ONE,
    MINUS1: -ONE,
    ALPHA: ABAR,
    BETA: BBAR,
    C_MARK: C,
    D_MARK: D,
}


class PathError(ValueError):
    """Base class for malformed paths."""


class HeightViolation(PathError):
    pass


class WordSyntaxError(PathError):
    pass


class NotOneTransit(PathError):
    pass


class ParityViolation(PathError):
    pass


class DanglingFactor(PathError):
    pass


class NoHeightOneVertex(PathError):
    pass


class MalformedWeights(PathError):
    pass


@dataclass(frozen=True)
class Path:
    start_height: int
    rises: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rises", tuple(int(r) for r in self.rises))
        for r in self.rises:
            if r != -1 and (r < 1 or r % 2 == 0):
                raise PathError(f"illegal rise {r}")
        h = self.start_height
        if h < 0:
            raise HeightViolation("start height below zero")
        for i, r in enumerate(self.rises):
            h += r
            if h < 0:
                raise HeightViolation(f"vertex {i + 1} below height zero")

    def __len__(self):
        return len(self.rises)

    @cached_property
    def heights(self) -> tuple:
        hs = [self.start_height]
        for r in self.rises:
            hs.append(hs[-1] + r)
        return tuple(hs)

    @property
    def end_height(self) -> int:
        return self.heights[-1]

    def height_one_vertices(self) -> list:
        return [i for i, h in enumerate(self.heights) if h == 1]

    def segment(self, lo: int, hi: int) -> "Path":
        """Subpath between vertices ``lo`` and ``hi``."""
        return Path(self.heights[lo], self.rises[lo:hi])

    def __str__(self):
        return format_word(self)


def heights(p: Path) -> tuple:
    return p.heights


_TOKEN = re.compile(r"u|d|j(\d+)$")


def parse_word(text: str) -> Path:
    """Parse ``"<height>: u d j3 ..."`` (``u`` = +1, ``d`` = -1, ``j<odd>`` = jump)."""
    head, sep, body = text.partition(":")
    if not sep:
        raise WordSyntaxError(f"missing ':' in {text!r}")
    try:
        start = int(head.strip())
    except ValueError:
        raise WordSyntaxError(f"bad start height {head!r}") from None
    rises = []
    for tok in body.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise WordSyntaxError(f"bad step {tok!r}")
        if tok == "u":
            rises.append(1)
        elif tok == "d":
            rises.append(-1)
        else:
            r = int(m.group(1))
            if r % 2 == 0 or r < 1:
                raise WordSyntaxError(f"jump height must be odd: {tok!r}")
            rises.append(r)
    return Path(start, rises)


def format_word(p: Path, jumps: bool = False) -> str:
    """Inverse of :func:`parse_word`; ``jumps=True`` writes up steps as ``j<r>``."""
    toks = []
    for r in p.rises:
        if r == -1:
            toks.append("d")
        elif r == 1 and not jumps:
            toks.append("u")
        else:
            toks.append(f"j{r}")
    return f"{p.start_height}:" + "".join(" " + t for t in toks)


def _freeze_labels(labels) -> tuple:
    if labels is None:
        return ()
    if isinstance(labels, Mapping):
        labels = labels.items()
    return tuple(sorted((int(i), str(t)) for i, t in labels))


@dataclass(frozen=True)
class LabeledPath:
    """A path with per-step tags, per-vertex tags, an optional mark and divider.

    ``vertex_labels`` is kept as a sorted tuple of ``(vertex, tag)`` pairs so
    the object is hashable; use :attr:`vertex_map` for dictionary access.
    """

    path: Path
    step_labels: tuple = ()
    vertex_labels: tuple = ()
    mark: int | None = None
    divider: int | None = None
    boundary_weight: Polynomial = field(default=ONE)

    def __post_init__(self):
        labels = tuple(self.step_labels) or (UNIT,) * len(self.path)
        if len(labels) != len(self.path):
            raise MalformedWeights("one step label per step required")
        for t in labels:
            if t not in STEP_WEIGHTS:
                raise MalformedWeights(f"unknown step label {t!r}")
        object.__setattr__(self, "step_labels", labels)
        vlabels = _freeze_labels(self.vertex_labels)
        for i, t in vlabels:
            if t not in VERTEX_WEIGHTS:
                raise MalformedWeights(f"unknown vertex label {t!r}")
            if not 0 <= i <= len(self.path):
                raise MalformedWeights(f"vertex label outside path: {i}")
        if len({i for i, _ in vlabels}) != len(vlabels):
            raise MalformedWeights("at most one label per vertex")
        object.__setattr__(self, "vertex_labels", vlabels)
        hs = self.path.heights
        for name in ("mark", "divider"):
            v = getattr(self, name)
            if v is not None and (not 0 <= v < len(hs) or hs[v] != 1):
                raise HeightViolation(f"{name} must sit on a height-one vertex")

    @property
    def vertex_map(self) -> dict:
        return dict(self.vertex_labels)

    @property
    def sign(self) -> int:
        negatives = sum(1 for _, t in self.vertex_labels if t == MINUS1)
        negatives += sum(1 for t in self.step_labels if t == AB_NEG)
        return -1 if negatives % 2 else 1

    @property
    def weight(self) -> Polynomial:
        w = self.boundary_weight
        for t in self.step_labels:
            if t != UNIT:
                w = w * STEP_WEIGHTS[t]
        for _, t in self.vertex_labels:
            if t != PLUS1:
                w = w * VERTEX_WEIGHTS[t]
        return w

    def replace(self, **changes) -> "LabeledPath":
        fields = dict(
            path=self.path,
            step_labels=self.step_labels,
            vertex_labels=self.vertex_labels,
            mark=self.mark,
            divider=self.divider,
            boundary_weight=self.boundary_weight,
        )
        fields.update(changes)
        if "path" in changes and "step_labels" not in changes:
            fields["step_labels"] = ()
        return LabeledPath(**fields)

    def to_json(self) -> dict:
        out = {
            "start_height": self.path.start_height,
            "rises": list(self.path.rises),
            "step_labels": list(self.step_labels),
            "vertex_labels": {str(i): t for i, t in self.vertex_labels},
            "boundary_weight": str(self.boundary_weight),
            "weight": str(self.weight),
        }
        if self.mark is not None:
            out["mark"] = self.mark
        if self.divider is not None:
            out["divider"] = self.divider
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "LabeledPath":
        from .symbolic import from_text

        return cls(
            Path(obj["start_height"], obj["rises"]),
            tuple(obj.get("step_labels", ())),
            {int(k): v for k, v in obj.get("vertex_labels", {}).items()},
            obj.get("mark"),
            obj.get("divider"),
            from_text(obj.get("boundary_weight", "1")),
        )


# --- D-factorisation -------------------------------------------------------


def first_return_split(rises: Sequence[int], base: int) -> list:
    """Split a Dyck word starting at ``base`` at each return to ``base``.

    Returns the list of ``(lo, hi)`` rise-index spans of the ``u D d`` blocks.
    """
    spans, h, lo = [], base, 0
    for i, r in enumerate(rises):
        h += r
        if h < base:
            raise NotOneTransit("path dips below its base height")
        if h == base:
            spans.append((lo, i + 1))
            lo = i + 1
    if h != base:
        raise NotOneTransit("path does not return to its base height")
    return spans


def d_factorize(p: Path, mark: int) -> tuple:
    """Split a one-transit path into 2-elevated Dyck factors left/right of ``mark``.

    ``p = prod(u D_i d) * prod(u D_j d)``; each ``D`` is returned as a
    :class:`Path` starting at height 2.
    """
    if p.start_height != 1 or any(abs(r) != 1 for r in p.rises):
        raise NotOneTransit("need a +-1 path from height 1")
    spans = first_return_split(p.rises, 1)
    if p.heights[mark] != 1:
        raise NotOneTransit("mark must be on a height-one vertex")
    left, right = [], []
    for lo, hi in spans:
        inner = Path(2, p.rises[lo + 1 : hi - 1])
        (left if hi <= mark else right).append(inner)
    return left, right


def d_concatenate(left: Sequence[Path], right: Sequence[Path]) -> Path:
    rises = []
    for inner in list(left) + list(right):
        rises += [1, *inner.rises, -1]
    return Path(1, rises)


# --- J-factorisation -------------------------------------------------------


@dataclass(frozen=True)
class JFactor:
    """Node of the J-factorisation tree.

    ``k is None`` is the empty factor; otherwise the first step is a
    ``2k+1`` jump and there are exactly ``k + 1`` children.
    """

    k: int | None = None
    children: tuple = ()

    def __post_init__(self):
        if self.k is None and self.children:
            raise ValueError("empty factor has no children")
        if self.k is not None and len(self.children) != self.k + 1:
            raise ValueError("J_k needs k+1 children")

    @property
    def is_empty(self) -> bool:
        return self.k is None

    @property
    def recursion_level(self) -> int:
        if self.k is None:
            return 0
        return 1 + max(c.recursion_level for c in self.children)

    def inner_rises(self) -> list:
        """Steps of the J subpath itself (without the surrounding ``d ... u-bar``)."""
        if self.k is None:
            return []
        out = [2 * self.k + 1]
        for child in self.children[:-1]:
            out += [-1, *child.inner_rises(), -1]
        out += [-1, *self.children[-1].inner_rises()]
        return out

    def factor_rises(self) -> list:
        """The ``d J u-bar`` word this node was parsed from."""
        return [-1, *self.inner_rises(), -1]

    def describe(self) -> str:
        if self.k is None:
            return "phi"
        return f"J{self.k}[" + ", ".join(c.describe() for c in self.children) + "]"


EMPTY_J = JFactor()


def parse_j_factor(rises: Sequence[int], pos: int = 0) -> tuple:
    """Parse one ``d J u-bar`` factor starting at even index ``pos``.

    Returns ``(node, next_pos)``.  Index parity is relative to ``pos``.
    """
    n = len(rises)
    if pos >= n:
        raise DanglingFactor("factor expected, word exhausted")
    if rises[pos] != -1:
        raise ParityViolation(f"even step {pos} is not a down step")
    if pos + 1 >= n:
        raise DanglingFactor("J factor not followed by a down step")
    r = rises[pos + 1]
    if r == -1:
        return EMPTY_J, pos + 2
    k = (r - 1) // 2
    children = []
    cur = pos + 2
    for _ in range(k + 1):
        child, cur = parse_j_factor(rises, cur)
        children.append(child)
    return JFactor(k, tuple(children)), cur


def parse_j_factors(rises: Sequence[int]) -> list:
    """Parse a whole word into consecutive ``d J u-bar`` factors."""
    out, pos = [], 0
    while pos < len(rises):
        node, pos = parse_j_factor(rises, pos)
        out.append(node)
    return out


def wrap_r1(p: Path) -> Path:
    """``d u_{2k+1} d . p . u-bar`` for an R1 path starting at ``2k+1``."""
    return Path(2, [-1, p.start_height, -1, *p.rises, -1])


def j_factorize(word: Path) -> JFactor:
    """J-factorisation of a single ``d J u-bar`` word.

    For an R1 path ``p`` use ``j_factorize(wrap_r1(p))``.  The tree is checked
    by re-linearisation and by the elevation property of every J factor.
    """
    node, end = parse_j_factor(word.rises, 0)
    if end != len(word.rises):
        raise DanglingFactor("trailing steps after the top factor")
    if node.factor_rises() != list(word.rises):
        raise ParityViolation("re-linearisation mismatch")
    _check_elevated(word.rises, word.start_height, node)
    return node


def _check_elevated(rises, start, node):
    # every J factor stays at or above its first vertex and has even length
    def walk(n, pos, h):
        h_after_d = h - 1
        if n.k is None:
            return pos + 2, h - 2
        inner = n.inner_rises()
        if len(inner) % 2:
            raise ParityViolation("J factor of odd length")
        hh = h_after_d
        for r in inner:
            hh += r
            if hh < h_after_d:
                raise ParityViolation("J factor dips below its base")
        cur, ch = pos + 2, h_after_d + 2 * n.k + 1
        for c in n.children:
            cur, ch = walk(c, cur, ch)
        return cur, ch

    walk(node, 0, start)


# --- B-factorisation -------------------------------------------------------


@dataclass(frozen=True)
class BFactorization:
    prefix: tuple  # Paths, each ``D_n d``, left to right
    b: Path
    suffix: tuple  # Paths, each ``u D'_m``, left to right
    lo: int  # leftmost height-one vertex
    hi: int  # rightmost height-one vertex


def _first_passage(rises, start, target_step):
    """Split a descent from ``start`` into ``D d`` blocks (``target_step`` = -1)
    or an ascent into ``u D`` blocks (``+1``, scanning right to left)."""
    blocks = []
    if target_step == -1:
        h, lo, low = start, 0, start
        for i, r in enumerate(rises):
            h += r
            if h < low:
                blocks.append((lo, i + 1))
                lo, low = i + 1, h
        return blocks
    # ascent: mirror image read from the right
    h, hi, low = start, len(rises), start
    for i in range(len(rises) - 1, -1, -1):
        h -= rises[i]
        if h < low:
            blocks.append((i, hi))
            hi, low = i, h
    return list(reversed(blocks))


def b_factorize(p: Path) -> BFactorization:
    """``p = prod(D_n d) . B . prod(u D'_m)`` with ``B`` spanning the
    leftmost to rightmost height-one vertex."""
    ones = p.height_one_vertices()
    if not ones:
        raise NoHeightOneVertex(str(p))
    lo, hi = ones[0], ones[-1]
    pre = p.rises[:lo]
    suf = p.rises[hi:]
    prefix = tuple(Path(p.heights[a], pre[a:b]) for a, b in _first_passage(pre, p.start_height, -1))
    suffix = tuple(Path(p.heights[hi + a], suf[a:b]) for a, b in _first_passage(suf, p.end_height, +1))
    return BFactorization(prefix, p.segment(lo, hi), suffix, lo, hi)


def b_concatenate(f: BFactorization) -> Path:
    rises = []
    for part in f.prefix:
        rises += part.rises
    rises += f.b.rises
    for part in f.suffix:
        rises += part.rises
    start = f.prefix[0].start_height if f.prefix else f.b.start_height
    return Path(start, rises)


# --- five-case factorisation of R3^2 paths --------------------------------


@dataclass(frozen=True)
class FiveCase:
    """Which of the five forms a signed R3 path takes.

    Step indices are 1-based.  ``bad`` is the leftmost bad step (``None`` in
    case 5); ``u``, ``d``, ``d_prime`` name the distinguished steps of the
    case, and ``m_span`` the half-open step range of the ``M`` factor.
    """

    case_id: int
    bad: int | None = None
    u: int | None = None
    d: int | None = None
    d_prime: int | None = None
    m_span: tuple | None = None


_ALLOWED_R3_2 = {
    (2, 1): {ALPHA, BETA, AB_NEG},
    (0, 1): {AB_POS},
}


def check_r3_2_labels(w: LabeledPath) -> None:
    p = w.path
    if p.start_height != 1 or p.end_height != 1 or any(abs(r) != 1 for r in p.rises):
        raise MalformedWeights("R3^2 paths are +-1 paths from height 1 to height 1")
    hs = p.heights
    for i, t in enumerate(w.step_labels):
        key = (hs[i], hs[i + 1])
        allowed = _ALLOWED_R3_2.get(key, {UNIT})
        if t not in allowed:
            raise MalformedWeights(f"step {i + 1} {key} cannot carry {t}")
    if w.vertex_labels or w.mark is not None or w.divider is not None:
        raise MalformedWeights("R3^2 paths carry step labels only")


def find_bad_step(w: LabeledPath) -> int | None:
    """0-based index of the leftmost bad step, or ``None``."""
    seen_beta = False
    for i, t in enumerate(w.step_labels):
        if t in (AB_POS, AB_NEG):
            return i
        if t == ALPHA and seen_beta:
            return i
        if t == BETA:
            seen_beta = True
    return None


def five_case_factorize(w: LabeledPath) -> FiveCase:
    check_r3_2_labels(w)
    bad = find_bad_step(w)
    if bad is None:
        return FiveCase(5)
    labels, rises = w.step_labels, w.path.rises
    t = labels[bad]
    if t == ALPHA:
        # previous return to height one carries the beta, followed by u M
        hs = w.path.heights
        j = bad - 1
        while hs[j] != 1:
            j -= 1
        d = j - 1  # step ending at vertex j
        if d < 0 or labels[d] != BETA or rises[j] != 1:
            raise MalformedWeights("alpha-bad step without a preceding d u")
        return FiveCase(1, bad + 1, u=j + 1, d=d + 1, d_prime=bad + 1, m_span=(j + 2, bad + 1))
    if t == AB_NEG:
        if rises[bad - 1] == -1:
            # u M d d': find u matching d = step bad-1
            hs = w.path.heights
            top = hs[bad - 1]  # height where d starts
            j = bad - 2
            while hs[j] != top - 1 or rises[j] != 1:
                j -= 1
            # j is the u step (2 -> 3); M spans steps j+1 .. bad-2
            return FiveCase(2, bad + 1, u=j + 1, d=bad, d_prime=bad + 1, m_span=(j + 2, bad))
        return FiveCase(3, bad + 1, u=bad, d=bad + 1)
    # AB_POS on an up step 0 -> 1, preceded by the 1 -> 0 down step
    return FiveCase(4, bad + 1, u=bad + 1, d=bad)


def split_r1_1(p: Path, mark: int) -> tuple:
    """Parse ``1: prod(u J d) . mark . J u-bar`` into J trees.

    Returns ``(prefix_trees, last_tree)``.
    """
    if p.start_height != 1 or p.heights[mark] != 1:
        raise PathError("R1^1 paths start at height 1 with the mark at height 1")
    prefix_trees = []
    hs = p.heights
    lo = 0
    for i in range(1, mark + 1):
        if hs[i] == 1:
            block = p.rises[lo:i]
            if block[0] != 1:
                raise ParityViolation("prefix factor must open with an up step")
            node, end = parse_j_factor([-1, *block[1:]], 0)
            if end != len(block):
                raise DanglingFactor("prefix factor does not close at height one")
            prefix_trees.append(node)
            lo = i
    if lo != mark:
        raise NotOneTransit("mark must follow a complete prefix factor")
    tail = [-1, *p.rises[mark:]]
    node, end = parse_j_factor(tail, 0)
    if end != len(tail):
        raise DanglingFactor("trailing steps after the last J factor")
    return prefix_trees, node
