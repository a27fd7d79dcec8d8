"""Bijections and sign-reversing involutions between the path models.

Route R1 -> R4:  ``gamma`` (J-factor rotation) then ``gamma_prime`` (J -> D).
Route R2 -> R4:  ``phi2_12`` on the truncated kappa-expanded set, then
``gamma_23``, ``gamma_34``, ``expand_cd`` and ``phi2_56``.
Route R3 -> R4:  ``expand_r3`` then ``phi3``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import pathcore as pc
from .models import (
    ModelId,
    enumerate_paths,
    expand_cd,
    is_valid,
    label_r1,
    label_r1_1,
    label_r2_1,
    label_r2_2,
    label_r2_3,
    label_r2_4,
    label_r4,
    pm_paths,
)
from .pathcore import JFactor, LabeledPath, Path
from .symbolic import Polynomial, total


class TransformError(ValueError):
    pass


class NotR1(TransformError):
    pass


class NotR1_1(TransformError):
    pass


class NotInImage(TransformError):
    pass


class OutsideTruncation(TransformError):
    pass


class NotR2_2(TransformError):
    pass


class NotR2_3(TransformError):
    pass


class NotR2_4(TransformError):
    pass


class NotInOmega(TransformError):
    pass


class NotR3_2(TransformError):
    pass


@dataclass(frozen=True)
class SignedSet:
    elements: tuple
    provenance: ModelId

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def positive(self) -> list:
        return [w for w in self.elements if w.sign > 0]

    @property
    def negative(self) -> list:
        return [w for w in self.elements if w.sign < 0]

    def total(self) -> Polynomial:
        return total(w.weight for w in self.elements)


# --- R1 -> R1^1 -> R4 -------------------------------------------------------


def gamma(w: LabeledPath) -> LabeledPath:
    """Rotate the J factors of ``d p u-bar`` into an R1^1 path."""
    if not is_valid(ModelId.R1, w):
        raise NotR1(pc.format_word(w.path, jumps=True))
    p = w.path
    k = (p.start_height - 1) // 2
    factors = pc.parse_j_factors([-1, *p.rises, -1])
    if len(factors) != k + 1:
        raise NotR1("J-factor count does not match the start height")
    rises = []
    for node in factors[:k]:
        rises += [1, *node.inner_rises(), -1]
    mark = len(rises)
    rises += [*factors[k].inner_rises(), -1]
    out = label_r1_1(Path(1, rises), mark)
    assert out.weight == w.weight
    return out


def gamma_inverse(q: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R1_1, q):
        raise NotR1_1(pc.format_word(q.path, jumps=True))
    prefix, last = pc.split_r1_1(q.path, q.mark)
    word = []
    for node in [*prefix, last]:
        word += node.factor_rises()
    p = Path(2 * len(prefix) + 1, word[1:-1])
    out = label_r1(p)
    if not is_valid(ModelId.R1, out):
        raise NotInImage("preimage is not an R1 path")
    return out


def j_to_d(node: JFactor) -> list:
    """Elevated Dyck word ``D`` with ``d D = gamma_prime(d J u-bar)``."""
    if node.is_empty:
        return []
    out = [1] * (node.k + 1)
    for child in node.children:
        out += [-1, *j_to_d(child)]
    return out


def _elevated_prefix_end(rises, pos):
    # end of the maximal elevated Dyck subword starting at ``pos``
    h = 0
    for i in range(pos, len(rises)):
        h += rises[i]
        if h < 0:
            return i
    return len(rises)


def d_to_j(rises) -> JFactor:
    """Inverse of :func:`j_to_d` on elevated Dyck words."""
    rises = list(rises)
    if not rises:
        return pc.EMPTY_J
    ups = 0
    while ups < len(rises) and rises[ups] == 1:
        ups += 1
    k = ups - 1
    children, pos = [], ups
    for j in range(k + 1):
        if pos >= len(rises) or rises[pos] != -1:
            raise NotInImage("D factor does not match u^{k+1} prod(d D_j)")
        pos += 1
        end = len(rises) if j == k else _elevated_prefix_end(rises, pos)
        children.append(d_to_j(rises[pos:end]))
        pos = end
    return JFactor(k, tuple(children))


def gamma_prime_factor(word: Path) -> Path:
    """``gamma_prime`` on a single ``d J u-bar`` word (e.g. an R1' path)."""
    node = pc.j_factorize(word)
    return Path(word.start_height, [-1, *j_to_d(node)])


def gamma_prime(q: LabeledPath) -> LabeledPath:
    """R1^1 -> R4; the trailing u-bar terminator is absorbed."""
    if not is_valid(ModelId.R1_1, q):
        raise NotR1_1(pc.format_word(q.path, jumps=True))
    prefix, last = pc.split_r1_1(q.path, q.mark)
    rises = []
    for node in prefix:
        rises += [1, *j_to_d(node), -1]
    mark = len(rises)
    rises += j_to_d(last)
    out = label_r4(Path(1, rises), mark)
    assert out.weight == q.weight
    return out


def gamma_prime_inverse(w: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R4, w):
        raise NotInImage("expected an R4 path")
    left, _ = pc.d_factorize(w.path, w.mark)
    rises = []
    for inner in left:
        rises += [1, *d_to_j(inner.rises).inner_rises(), -1]
    mark = len(rises)
    rises += [*d_to_j(w.path.rises[w.mark :]).inner_rises(), -1]
    return label_r1_1(Path(1, rises), mark)


def r1_to_r4(w: LabeledPath) -> LabeledPath:
    return gamma_prime(gamma(w))


def r4_to_r1(w: LabeledPath) -> LabeledPath:
    out = gamma_inverse(gamma_prime_inverse(w))
    if r1_to_r4(out) != w:
        raise NotInImage("round trip failed")
    return out


# --- Stage 1: truncated kappa-expanded set -----------------------------------


def _is_negative_r2_1(w: LabeledPath) -> bool:
    return w.vertex_map.get(0) == pc.MINUS1


def build_omega2(L: int, K: int) -> SignedSet:
    """Positive R2^1 paths starting at height <= 2K+1, negative ones <= 2K-1."""
    if K < L:
        raise ValueError("truncation K must be at least L")
    out = []
    for start in range(1, 2 * K + 2, 2):
        for rises in pm_paths(start, 2 * L):
            p = Path(start, rises)
            out.append(label_r2_1(p, False))
            if start <= 2 * K - 1:
                out.append(label_r2_1(p, True))
    return SignedSet(tuple(out), ModelId.R2_1)


def _shift(p: Path, dh: int) -> Path:
    return Path(p.start_height + dh, p.rises)


def phi2_12(w: LabeledPath, K: int | None = None) -> LabeledPath:
    """Push negatives up two units, positives without a height-one vertex down."""
    if not is_valid(ModelId.R2_1, w):
        raise NotInOmega("expected an R2^1 path")
    p = w.path
    if _is_negative_r2_1(w):
        out = label_r2_1(_shift(p, 2), False)
        if K is not None and out.path.start_height > 2 * K + 1:
            raise OutsideTruncation(str(out.path))
        return out
    if p.height_one_vertices():
        return w
    return label_r2_1(_shift(p, -2), True)


def fixed_points_r2_2(L: int, K: int) -> list:
    return [w for w in enumerate_paths(ModelId.R2_2, L) if w.path.start_height <= 2 * K + 1]


# --- Stage 2: pull the B factor above y = 0 ----------------------------------


def gamma_23(w: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R2_2, w):
        raise NotR2_2("expected an R2^2 path")
    p = w.path
    f = pc.b_factorize(p)
    b = f.b
    downs = [j for j, r in enumerate(b.rises) if r == 1 and b.heights[j] == 0]
    if not downs:
        return label_r2_3(p, f.lo)
    j = downs[-1]  # rightmost 0 -> 1 step u'
    w1, w2 = b.rises[:j], b.rises[j + 1 :]
    rises = [*p.rises[: f.lo], 1, *w1, *w2, *p.rises[f.hi :]]
    return label_r2_3(Path(p.start_height, rises), f.lo + 1 + len(w1))


def gamma_23_inverse(w: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R2_3, w):
        raise NotR2_3("expected an R2^3 path")
    p = w.path
    ones = p.height_one_vertices()
    lo, hi, div = ones[0], ones[-1], w.divider
    if div == lo:
        return label_r2_2(p)
    if p.rises[lo] != 1:
        raise NotInImage("B' must open with an up step")
    w1, w2 = p.rises[lo + 1 : div], p.rises[div:hi]
    rises = [*p.rises[:lo], *w1, 1, *w2, *p.rises[hi:]]
    return label_r2_2(Path(p.start_height, rises))


# --- Stage 3: rotate the boundary down to height one -------------------------


def gamma_34(w: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R2_3, w):
        raise NotR2_3("expected an R2^3 path")
    p = w.path
    f = pc.b_factorize(p)
    rises, c_marks, d_marks = [], [], []
    pre = f.prefix  # pre[i] = D d, left to right
    for i in range(0, len(pre), 2):
        rises += pre[i].rises[:-1]
        c_marks.append(len(rises))
        rises += [1, *pre[i + 1].rises[:-1], -1]
    divider = len(rises) + (w.divider - f.lo)
    rises += f.b.rises
    suf = f.suffix  # suf[m] = u D', left to right
    for m in range(0, len(suf), 2):
        rises += [1, *suf[m].rises[1:], -1]
        d_marks.append(len(rises))
        rises += suf[m + 1].rises[1:]
    out = label_r2_4(Path(1, rises), divider, c_marks, d_marks)
    assert out.weight == w.weight
    return out


def _next_one(hs, v):
    for i in range(v + 1, len(hs)):
        if hs[i] == 1:
            return i
    raise NotInImage("no height-one vertex after mark")


def _prev_one(hs, v):
    for i in range(v - 1, -1, -1):
        if hs[i] == 1:
            return i
    raise NotInImage("no height-one vertex before mark")


def gamma_34_inverse(w: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R2_4, w):
        raise NotR2_4("expected an R2^4 path")
    p, hs = w.path, w.path.heights
    r = p.rises
    cs = sorted(v for v, t in w.vertex_labels if t == pc.C_MARK)
    ds = sorted(v for v, t in w.vertex_labels if t == pc.D_MARK)
    prefix, prev = [], 0
    for c in cs:
        e = _next_one(hs, c)
        prefix += [*r[prev:c], -1, *r[c + 1 : e - 1], -1]
        prev = e
    lo = prev
    starts = [_prev_one(hs, dm) for dm in ds]
    hi = starts[0] if ds else len(r)
    if not lo <= w.divider <= hi:
        raise NotInImage("divider outside the B factor")
    suffix = []
    for j, dm in enumerate(ds):
        s = starts[j]
        nxt = starts[j + 1] if j + 1 < len(ds) else len(r)
        suffix += [1, *r[s + 1 : dm - 1], 1, *r[dm:nxt]]
    q = Path(2 * len(cs) + 1, [*prefix, *r[lo:hi], *suffix])
    out = label_r2_3(q, w.divider)
    if not is_valid(ModelId.R2_3, out) or gamma_34(out) != w:
        raise NotInImage("not in the image of gamma_34")
    return out


# --- Stage 4: cancel the signed height-one labels ----------------------------


def build_omega56(L: int) -> SignedSet:
    out = []
    for w in enumerate_paths(ModelId.R2_2, L):
        out.extend(expand_cd(gamma_34(gamma_23(w))))
    return SignedSet(tuple(out), ModelId.R2_5)


def phi2_56(w: LabeledPath) -> LabeledPath:
    if not is_valid(ModelId.R2_5, w):
        raise NotInOmega("expected an R2^5 path")
    signed = [v for v, t in w.vertex_labels if t in (pc.PLUS1, pc.MINUS1)]
    if not signed:
        return w
    v = signed[-1]
    labels = w.vertex_map
    labels[v] = pc.MINUS1 if labels[v] == pc.PLUS1 else pc.PLUS1
    return w.replace(vertex_labels=labels)


def r2_5_fixed_to_r4(w: LabeledPath) -> LabeledPath:
    """Drop the divider of a label-complete R2^5 path; it becomes the R4 mark."""
    out = label_r4(w.path, w.divider)
    assert out.weight == w.weight
    return out


# --- R3^2 involution -----------------------------------------------------------


def build_omega3(L: int) -> SignedSet:
    return SignedSet(tuple(enumerate_paths(ModelId.R3_2, L)), ModelId.R3_2)


def phi3(w: LabeledPath) -> LabeledPath:
    try:
        fc = pc.five_case_factorize(w)
    except pc.MalformedWeights as exc:
        raise NotR3_2(str(exc)) from None
    if fc.case_id == 5:
        return w
    rises = list(w.path.rises)
    labels = list(w.step_labels)
    if fc.case_id == 1:
        d0, dp0 = fc.d - 1, fc.d_prime - 1
        del rises[d0], labels[d0]
        rises.insert(dp0, -1)
        labels.insert(dp0, pc.AB_NEG)
        labels[dp0 - 1] = pc.UNIT
    elif fc.case_id == 2:
        u0, d0, dp0 = fc.u - 1, fc.d - 1, fc.d_prime - 1
        del rises[d0], labels[d0]
        rises.insert(u0, -1)
        labels.insert(u0, pc.BETA)
        labels[dp0] = pc.ALPHA
    elif fc.case_id == 3:
        u0, d0 = fc.u - 1, fc.d - 1
        rises[u0], rises[d0] = -1, 1
        labels[u0], labels[d0] = pc.UNIT, pc.AB_POS
    else:
        d0, u0 = fc.d - 1, fc.u - 1
        rises[d0], rises[u0] = 1, -1
        labels[d0], labels[u0] = pc.UNIT, pc.AB_NEG
    return LabeledPath(Path(w.path.start_height, rises), tuple(labels))


def r3_fixed_to_r4(w: LabeledPath) -> LabeledPath:
    """Relabel a bad-step-free R3^2 path as R4; the mark follows the last abar."""
    alphas = [i + 1 for i, t in enumerate(w.step_labels) if t == pc.ALPHA]
    out = label_r4(w.path, alphas[-1] if alphas else 0)
    if out.step_labels != w.step_labels:
        raise NotInImage("path still has a bad step")
    return out
