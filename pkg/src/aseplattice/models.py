"""The lattice path models, their weights, and exhaustive enumerators.

Every model is a view over :class:`~aseplattice.pathcore.LabeledPath`.  For
models whose labels are a function of the path (plus mark/divider) the
``label_*`` constructors are the single source of truth, and
:func:`is_valid` compares against them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from enum import Enum
from typing import Iterator

from . import pathcore as pc
from .pathcore import LabeledPath, Path
from .symbolic import C, D, KAPPA, ONE, Polynomial, total


class ModelId(str, Enum):
    R1 = "R1"
    R1_1 = "R1_1"
    R2 = "R2"
    R2_1 = "R2_1"
    R2_2 = "R2_2"
    R2_3 = "R2_3"
    R2_4 = "R2_4"
    R2_5 = "R2_5"
    R3 = "R3"
    R3_prime = "R3_prime"
    R3_2 = "R3_2"
    R4 = "R4"

    def __str__(self):
        return self.value


class UnboundedModel(ValueError):
    """The model is an infinite set and has no enumerator."""


class InvalidPath(ValueError):
    pass


class OddKappa(ValueError):
    pass


class MarkSideViolation(ValueError):
    pass


def _model(m) -> ModelId:
    return m if isinstance(m, ModelId) else ModelId(m)


# --- label constructors -----------------------------------------------------


def label_r1(p: Path) -> LabeledPath:
    hs = p.heights
    labels = tuple(pc.BETA_JUMP if r > 0 and hs[i] == 1 else pc.UNIT for i, r in enumerate(p.rises))
    k = (p.start_height - 1) // 2
    return LabeledPath(p, labels, boundary_weight=Polynomial.variable("abar", k))


def label_r1_1(p: Path, mark: int) -> LabeledPath:
    hs = p.heights
    labels = []
    for i, r in enumerate(p.rises):
        if i < mark and r == -1 and hs[i + 1] == 1:
            labels.append(pc.ALPHA)
        elif i >= mark and r > 0 and hs[i] == 1:
            labels.append(pc.BETA_JUMP)
        else:
            labels.append(pc.UNIT)
    return LabeledPath(p, tuple(labels), mark=mark)


def _cd_boundary(p: Path) -> Polynomial:
    return C ** ((p.start_height - 1) // 2) * D ** ((p.end_height - 1) // 2)


def label_r2(p: Path) -> LabeledPath:
    return LabeledPath(p, boundary_weight=KAPPA * KAPPA * _cd_boundary(p))


def label_r2_1(p: Path, negative: bool) -> LabeledPath:
    """Element of the kappa-expanded set: ``c^k d^l`` or ``-c^{k+1} d^{l+1}``."""
    if not negative:
        return LabeledPath(p, boundary_weight=_cd_boundary(p))
    return LabeledPath(p, vertex_labels={0: pc.MINUS1}, boundary_weight=_cd_boundary(p) * C * D)


def label_r2_2(p: Path) -> LabeledPath:
    return LabeledPath(p, boundary_weight=_cd_boundary(p))


def label_r2_3(p: Path, divider: int) -> LabeledPath:
    return LabeledPath(p, divider=divider, boundary_weight=_cd_boundary(p))


def label_r2_4(p: Path, divider: int, c_marks, d_marks) -> LabeledPath:
    labels = {v: pc.C_MARK for v in c_marks}
    labels.update({v: pc.D_MARK for v in d_marks})
    return LabeledPath(p, vertex_labels=labels, divider=divider)


def label_r3(p: Path) -> LabeledPath:
    hs = p.heights
    labels = []
    for i in range(len(p)):
        key = (hs[i], hs[i + 1])
        if key in ((1, 2), (2, 1)):
            labels.append(pc.KAPPA1)
        elif key == (1, 0):
            labels.append(pc.BETA)
        elif key == (0, 1):
            labels.append(pc.ALPHA)
        else:
            labels.append(pc.UNIT)
    return LabeledPath(p, tuple(labels))


def label_r3_prime(p: Path) -> LabeledPath:
    hs = p.heights
    labels = []
    for i in range(len(p)):
        key = (hs[i], hs[i + 1])
        if key == (2, 1):
            labels.append(pc.KAPPA2)
        elif key == (0, 1):
            labels.append(pc.AB_POS)
        else:
            labels.append(pc.UNIT)
    return LabeledPath(p, tuple(labels))


def label_r4(p: Path, mark: int) -> LabeledPath:
    """R4 weights with the bbar moved onto the matching 2 -> 1 down step."""
    hs = p.heights
    labels = []
    for i in range(len(p)):
        if hs[i] == 2 and hs[i + 1] == 1:
            labels.append(pc.ALPHA if i + 1 <= mark else pc.BETA)
        else:
            labels.append(pc.UNIT)
    return LabeledPath(p, tuple(labels), mark=mark)


# --- validity ---------------------------------------------------------------


def _pm1(p: Path) -> bool:
    return all(abs(r) == 1 for r in p.rises)


def _odd_ends(p: Path) -> bool:
    return p.start_height % 2 == 1 and p.end_height % 2 == 1


def _r1_shape(p: Path) -> bool:
    if len(p) % 2 or p.start_height % 2 == 0 or p.end_height != 1:
        return False
    for i, r in enumerate(p.rises):
        if i % 2 == 1 and r != -1:  # 1-based even step
            return False
    return 0 not in p.heights


def _same(w: LabeledPath, ref: LabeledPath) -> bool:
    return w == ref


def is_valid(m, w: LabeledPath) -> bool:
    m = _model(m)
    p = w.path
    try:
        if m is ModelId.R1:
            return w.mark is None and w.divider is None and _r1_shape(p) and _same(w, label_r1(p))
        if m is ModelId.R1_1:
            if w.mark is None or len(p) % 2 == 0 or p.end_height != 0 or p.rises[-1] != -1:
                return False
            pc.split_r1_1(p, w.mark)
            return _same(w, label_r1_1(p, w.mark))
        if m is ModelId.R2:
            return _pm1(p) and _odd_ends(p) and len(p) % 2 == 0 and _same(w, label_r2(p))
        if m is ModelId.R2_1:
            if not (_pm1(p) and _odd_ends(p) and len(p) % 2 == 0):
                return False
            return w in (label_r2_1(p, False), label_r2_1(p, True))
        if m is ModelId.R2_2:
            return (
                _pm1(p) and _odd_ends(p) and len(p) % 2 == 0
                and bool(p.height_one_vertices()) and _same(w, label_r2_2(p))
            )
        if m is ModelId.R2_3:
            return (
                _pm1(p) and _odd_ends(p) and len(p) % 2 == 0 and 0 not in p.heights
                and w.divider is not None and _same(w, label_r2_3(p, w.divider))
            )
        if m is ModelId.R2_4:
            return _valid_r2_4(w)
        if m is ModelId.R2_5:
            return _valid_r2_5(w)
        if m in (ModelId.R3, ModelId.R3_prime):
            if not (_pm1(p) and p.start_height == 1 and p.end_height == 1 and len(p) % 2 == 0):
                return False
            ref = label_r3(p) if m is ModelId.R3 else label_r3_prime(p)
            return _same(w, ref)
        if m is ModelId.R3_2:
            if len(p) % 2:
                return False
            pc.check_r3_2_labels(w)
            return True
        if m is ModelId.R4:
            return (
                w.mark is not None and _pm1(p) and p.start_height == 1 and p.end_height == 1
                and 0 not in p.heights and _same(w, label_r4(p, w.mark))
            )
    except (pc.PathError, ValueError):
        return False
    raise ValueError(f"unknown model {m}")


def _r2_4_base(w: LabeledPath) -> bool:
    p = w.path
    return (
        _pm1(p) and p.start_height == 1 and p.end_height == 1 and 0 not in p.heights
        and w.divider is not None and w.boundary_weight == ONE and w.mark is None
    )


def _valid_r2_4(w: LabeledPath) -> bool:
    if not _r2_4_base(w):
        return False
    hs = w.path.heights
    for v, t in w.vertex_labels:
        if hs[v] != 1:
            return False
        if t == pc.C_MARK and v >= w.divider or t == pc.D_MARK and v <= w.divider:
            return False
        if t not in (pc.C_MARK, pc.D_MARK):
            return False
    return True


def _valid_r2_5(w: LabeledPath) -> bool:
    if not _r2_4_base(w):
        return False
    labels = w.vertex_map
    for v in w.path.height_one_vertices():
        t = labels.get(v)
        if v == w.divider:
            if t is not None:
                return False
        elif t not in (pc.PLUS1, pc.MINUS1, pc.ALPHA if v < w.divider else pc.BETA):
            return False
    return len(labels) == len(w.path.height_one_vertices()) - 1


def weight(m, w: LabeledPath) -> Polynomial:
    if not is_valid(m, w):
        raise InvalidPath(f"not a valid {_model(m)} path: {pc.format_word(w.path)}")
    return w.weight


# --- enumeration ------------------------------------------------------------


def pm_paths(start: int, n: int, floor: int = 0) -> Iterator[tuple]:
    """All +-1 rise sequences of length ``n`` from ``start`` staying >= ``floor``."""
    rises = [0] * n

    def rec(i, h):
        if i == n:
            yield tuple(rises)
            return
        for r in (1, -1):
            if h + r >= floor:
                rises[i] = r
                yield from rec(i + 1, h + r)

    yield from rec(0, start)


def dyck_paths(n: int, base: int = 1) -> Iterator[tuple]:
    """+-1 paths of length ``n`` from ``base`` back to ``base``, never below it."""
    rises = [0] * n

    def rec(i, h):
        if i == n:
            if h == base:
                yield tuple(rises)
            return
        remaining = n - i
        if h + 1 - base <= remaining - 1:
            rises[i] = 1
            yield from rec(i + 1, h + 1)
        if h - 1 >= base:
            rises[i] = -1
            yield from rec(i + 1, h - 1)

    yield from rec(0, base)


def _r1_paths(L: int) -> Iterator[Path]:
    n = 2 * L
    for start in range(1, n + 2, 2):
        rises = [0] * n

        def rec(i, h):
            remaining = n - i
            if remaining == 0:
                if h == 1:
                    yield Path(start, rises)
                return
            if h - remaining > 1:
                return
            if h - 1 >= 1:
                rises[i] = -1
                yield from rec(i + 1, h - 1)
            if i % 2 == 0:  # 1-based odd step: jumps allowed
                r = 1
                while h + r - (remaining - 1) <= 1:
                    rises[i] = r
                    yield from rec(i + 1, h + r)
                    r += 2

        yield from rec(0, start)


def j_trees(n: int) -> list:
    """All J factor trees whose inner word has length ``n`` (even)."""
    return list(_j_trees(n))


def _j_trees(n):
    if n == 0:
        yield pc.EMPTY_J
        return
    for k in range((n - 2) // 2 + 1):
        rest = n - 2 * k - 2
        for sizes in _compositions(rest, k + 1):
            for kids in itertools.product(*(j_trees(s) for s in sizes)):
                yield pc.JFactor(k, tuple(kids))


def _compositions(total_len, parts):
    # even non-negative parts summing to total_len
    if parts == 1:
        yield (total_len,)
        return
    for first in range(0, total_len + 1, 2):
        for rest in _compositions(total_len - first, parts - 1):
            yield (first, *rest)


def _r1_1_paths(L: int) -> Iterator[LabeledPath]:
    # independent construction: prod(u J d) . mark . J u-bar, total 2L+1 steps
    n = 2 * L
    for last_len in range(0, n + 1, 2):
        for sizes in _prefix_sizes(n - last_len):
            for trees in itertools.product(*(j_trees(s) for s in sizes)):
                for last in j_trees(last_len):
                    rises = []
                    for t in trees:
                        rises += [1, *t.inner_rises(), -1]
                    mark = len(rises)
                    rises += [*last.inner_rises(), -1]
                    yield label_r1_1(Path(1, rises), mark)


def _prefix_sizes(budget):
    # sequences of inner J lengths with sum(len + 2) == budget
    if budget == 0:
        yield ()
        return
    for first in range(0, budget - 1, 2):
        for rest in _prefix_sizes(budget - first - 2):
            yield (first, *rest)


def enumerate_paths(m, L: int) -> list:
    """All paths of model ``m`` and length ``2L`` (``2L + 1`` for R1_1)."""
    m = _model(m)
    if L < 0:
        raise ValueError("L must be non-negative")
    n = 2 * L
    if m in (ModelId.R2, ModelId.R2_1):
        raise UnboundedModel(f"{m} is infinite; use the truncated signed sets")
    if m is ModelId.R1:
        return [label_r1(p) for p in _r1_paths(L)]
    if m is ModelId.R1_1:
        return list(_r1_1_paths(L))
    if m is ModelId.R4:
        out = []
        for rises in dyck_paths(n, 1):
            p = Path(1, rises)
            out.extend(label_r4(p, v) for v in p.height_one_vertices())
        return out
    if m in (ModelId.R3, ModelId.R3_prime, ModelId.R3_2):
        base = [Path(1, r) for r in pm_paths(1, n) if 1 + sum(r) == 1]
        if m is ModelId.R3:
            return [label_r3(p) for p in base]
        primes = [label_r3_prime(p) for p in base]
        if m is ModelId.R3_prime:
            return primes
        return [x for w in primes for x in _expand_kappa2(w)]
    if m in (ModelId.R2_2, ModelId.R2_3):
        out = []
        for start in range(1, n + 2, 2):
            for rises in pm_paths(start, n):
                p = Path(start, rises)
                ones = p.height_one_vertices()
                if not ones:
                    continue
                if m is ModelId.R2_2:
                    out.append(label_r2_2(p))
                elif 0 not in p.heights:
                    out.extend(label_r2_3(p, v) for v in ones)
        return out
    if m in (ModelId.R2_4, ModelId.R2_5):
        out = []
        for rises in dyck_paths(n, 1):
            p = Path(1, rises)
            ones = p.height_one_vertices()
            for div in ones:
                left = [v for v in ones if v < div]
                right = [v for v in ones if v > div]
                for cs in _subsets(left):
                    for ds in _subsets(right):
                        w = label_r2_4(p, div, cs, ds)
                        if m is ModelId.R2_4:
                            out.append(w)
                        else:
                            out.extend(expand_cd(w))
        return out
    raise ValueError(f"no enumerator for {m}")


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def total_weight(paths) -> Polynomial:
    return total(w.weight for w in paths)


def weight_multiset(paths) -> Counter:
    return Counter(w.weight for w in paths)


# --- weight expansions --------------------------------------------------------


def reweight_r3(w: LabeledPath) -> LabeledPath:
    """R3 -> R3': kappa^2 on 2->1 down steps, abar*bbar on 0->1 up steps."""
    if not is_valid(ModelId.R3, w):
        raise InvalidPath("expected an R3 path")
    kappas = sum(1 for t in w.step_labels if t == pc.KAPPA1)
    if kappas % 2:
        raise OddKappa("odd number of 1<->2 crossings")
    prime = label_r3_prime(w.path)
    assert prime.weight == w.weight
    return prime


def _expand_kappa2(w: LabeledPath) -> list:
    slots = [i for i, t in enumerate(w.step_labels) if t == pc.KAPPA2]
    out = []
    for choice in itertools.product((pc.ALPHA, pc.BETA, pc.AB_NEG), repeat=len(slots)):
        labels = list(w.step_labels)
        for i, t in zip(slots, choice):
            labels[i] = t
        out.append(LabeledPath(w.path, tuple(labels)))
    return out


def expand_r3(w: LabeledPath) -> tuple:
    """Return ``(R3' path, list of 3**k R3^2 paths)``."""
    prime = reweight_r3(w)
    return prime, _expand_kappa2(prime)


def expand_cd(w: LabeledPath) -> list:
    """R2^4 -> R2^5: each c (d) mark becomes -1 or abar (bbar); others +1."""
    hs = w.path.heights
    if w.divider is None:
        raise MarkSideViolation("R2^4 paths carry a divider")
    marks = []
    for v, t in w.vertex_labels:
        if hs[v] != 1:
            raise MarkSideViolation(f"mark at vertex {v} is not at height one")
        if t == pc.C_MARK and v < w.divider:
            marks.append((v, pc.ALPHA))
        elif t == pc.D_MARK and v > w.divider:
            marks.append((v, pc.BETA))
        else:
            raise MarkSideViolation(f"{t} at vertex {v} on the wrong side of the divider")
    marked = {v for v, _ in marks}
    base = {v: pc.PLUS1 for v in w.path.height_one_vertices() if v != w.divider and v not in marked}
    out = []
    for choice in itertools.product(*((pc.MINUS1, t) for _, t in marks)):
        labels = dict(base)
        labels.update({v: t for (v, _), t in zip(marks, choice)})
        out.append(LabeledPath(w.path, vertex_labels=labels, divider=w.divider))
    return out
