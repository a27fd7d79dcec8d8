from collections import Counter

import pytest

from aseplattice import models as md
from aseplattice import pathcore as pc
from aseplattice import symbolic as sy
from aseplattice import transforms as tr
from aseplattice.models import ModelId
from aseplattice.pathcore import LabeledPath
from aseplattice.symbolic import ABAR, BBAR, C, D

GOLDEN = "7: j1 d d d j3 d d d j1 d d d d d j1 d j3 d j1 d d d"
# final line of the worked J -> D computation: d u^4 d u d d u^2 d d u d d . d u d u^2 d u d d
GOLDEN_D = "2: d u u u u d u d d u u d d u d d d u d u u d u d d"
GOLDEN_R4 = "1: u u d d u u u d d u d d u d u d u u d u d d"

Z2 = ABAR + BBAR + ABAR * BBAR + ABAR ** 2 + BBAR ** 2


def golden():
    return md.label_r1(pc.parse_word(GOLDEN))


# --- R1 -> R4 ---------------------------------------------------------------


def test_gamma_k0():
    out = tr.gamma(md.label_r1(pc.parse_word("1: j1 d")))
    assert out.mark == 0
    assert pc.format_word(out.path, jumps=True) == "1: j1 d d"


def test_gamma_golden_shape():
    w = golden()
    out = tr.gamma(w)
    assert out.weight == w.weight == ABAR ** 3 * BBAR ** 2
    assert len(out.path) == 23 and out.path.start_height == 1 and out.path.end_height == 0
    prefix, last = pc.split_r1_1(out.path, out.mark)
    node = pc.j_factorize(pc.wrap_r1(w.path))
    assert prefix == list(node.children[:3]) and last == node.children[3]


def test_gamma_alpha_degree():
    for L in range(5):
        for w in md.enumerate_paths(ModelId.R1, L):
            out = tr.gamma(w)
            k = (w.path.start_height - 1) // 2
            assert out.step_labels.count("alpha") == k == out.weight.degree("abar")


def test_gamma_prime_empty_factor():
    assert tr.gamma_prime_factor(pc.Path(2, [-1, -1])) == pc.Path(2, [-1])


def test_gamma_prime_golden_factor():
    got = tr.gamma_prime_factor(pc.wrap_r1(golden().path))
    assert pc.format_word(got) == GOLDEN_D


def test_r1_to_r4_golden():
    w = golden()
    img = tr.r1_to_r4(w)
    assert pc.format_word(img.path) == GOLDEN_R4 and img.mark == 14
    assert img.weight == w.weight
    assert tr.r4_to_r1(img) == w


def test_golden_d_word_relates_to_r4_image():
    # d u^{k+1} prod(d D_j)  versus  prod_{j<=k}(u D_j d) . mark . D_{k+1}
    from aseplattice.transforms import j_to_d

    node = pc.j_factorize(pc.wrap_r1(golden().path))
    ds = [j_to_d(c) for c in node.children]
    assert [-1, 1, 1, 1, 1] + [x for D_ in ds for x in (-1, *D_)] == list(pc.parse_word(GOLDEN_D).rises)
    r4 = [x for D_ in ds[:3] for x in (1, *D_, -1)] + ds[3]
    assert r4 == list(pc.parse_word(GOLDEN_R4).rises)


def test_r1_r4_bijection():
    for L in range(5):
        r1 = md.enumerate_paths(ModelId.R1, L)
        images = [tr.r1_to_r4(w) for w in r1]
        assert Counter(images) == Counter(md.enumerate_paths(ModelId.R4, L))
        assert all(a.weight == b.weight for a, b in zip(r1, images))
        assert all(tr.r4_to_r1(b) == a for a, b in zip(r1, images))
        assert all(tr.gamma_prime_inverse(tr.gamma_prime(tr.gamma(a))) == tr.gamma(a) for a in r1)
    assert Counter(tr.r1_to_r4(w).weight for w in md.enumerate_paths(ModelId.R1, 2)) == Counter(
        [ABAR, BBAR, ABAR * BBAR, ABAR ** 2, BBAR ** 2]
    )


def test_r1_errors():
    with pytest.raises(tr.NotR1):
        tr.gamma(md.label_r1(pc.parse_word("1: u u d d")))
    with pytest.raises(tr.NotInImage):
        tr.gamma_prime_inverse(LabeledPath(pc.parse_word("1: u d")))


# --- stage 1 -------------------------------------------------------------------


def test_phi2_12_cases():
    neg = md.label_r2_1(pc.parse_word("1: u d"), True)
    pos = tr.phi2_12(neg)
    assert pos.path == pc.parse_word("3: u d") and pos.sign == 1
    assert pos.weight == -neg.weight == C * D
    high = md.label_r2_1(pc.parse_word("3: u u u u"), False)
    low = tr.phi2_12(high)
    assert low.path == pc.parse_word("1: u u u u") and low.sign == -1
    assert low.weight == -high.weight
    touching = md.label_r2_1(pc.parse_word("3: d d u u"), False)
    assert tr.phi2_12(touching) == touching


def test_phi2_12_truncation():
    neg = md.label_r2_1(pc.parse_word("5: u d"), True)
    with pytest.raises(tr.OutsideTruncation):
        tr.phi2_12(neg, K=2)
    with pytest.raises(ValueError):
        tr.build_omega2(3, 2)


def test_omega2_total():
    om = tr.build_omega2(2, 4)
    assert om.total() == 5 + 4 * C + 4 * D + C * D + C ** 2 + D ** 2
    assert len(om.positive) + len(om.negative) == len(om)


def test_phi2_12_involution():
    for L in range(4):
        K = L + 2
        om = tr.build_omega2(L, K)
        fixed = []
        for w in om:
            v = tr.phi2_12(w, K)
            assert tr.phi2_12(v, K) == w
            if v == w:
                fixed.append(w)
            else:
                assert v.sign == -w.sign and v.weight == -w.weight
        assert Counter(w.path for w in fixed) == Counter(w.path for w in tr.fixed_points_r2_2(L, K))
        assert om.total() == md.total_weight(fixed)


# --- stages 2 and 3 -------------------------------------------------------------


def test_gamma_23_examples():
    w = md.label_r2_2(pc.parse_word("1: d u d u"))
    out = tr.gamma_23(w)
    assert out.path == pc.parse_word("1: u d u d") and out.divider == 4
    high = md.label_r2_2(pc.parse_word("1: u d u d"))
    out = tr.gamma_23(high)
    assert out.path == high.path and out.divider == 0


def test_gamma_23_bijection():
    for L in range(5):
        r22 = md.enumerate_paths(ModelId.R2_2, L)
        images = [tr.gamma_23(w) for w in r22]
        assert len(set(images)) == len(images)
        assert Counter(images) == Counter(md.enumerate_paths(ModelId.R2_3, L))
        assert all(a.weight == b.weight and len(a.path) == len(b.path) for a, b in zip(r22, images))
        assert all(0 not in b.path.heights for b in images)
        assert all(tr.gamma_23_inverse(b) == a for a, b in zip(r22, images))
    assert len(md.enumerate_paths(ModelId.R2_3, 2)) == 16


def test_gamma_34_examples():
    w = md.label_r2_3(pc.parse_word("1: u d"), 2)
    out = tr.gamma_34(w)
    assert out.path == w.path and out.vertex_labels == () and out.divider == 2
    w = md.label_r2_3(pc.parse_word("3: d d u d"), 2)
    out = tr.gamma_34(w)
    assert out.path.start_height == 1 and out.path.end_height == 1
    assert [t for _, t in out.vertex_labels] == ["c_mark"]
    assert out.weight == w.weight == C


def test_gamma_34_bijection():
    for L in range(5):
        r23 = md.enumerate_paths(ModelId.R2_3, L)
        images = [tr.gamma_34(w) for w in r23]
        assert Counter(images) == Counter(md.enumerate_paths(ModelId.R2_4, L))
        assert len(set(images)) == len(images)
        assert all(a.weight == b.weight for a, b in zip(r23, images))
        assert all(tr.gamma_34_inverse(b) == a for a, b in zip(r23, images))


def test_stage_errors():
    with pytest.raises(tr.NotR2_2):
        tr.gamma_23(md.label_r2_2(pc.parse_word("3: u d")))
    with pytest.raises(tr.NotR2_3):
        tr.gamma_34(md.label_r2_2(pc.parse_word("1: u d")))


# --- stage 4 --------------------------------------------------------------------


def test_phi2_56_examples():
    p = pc.parse_word("1: u d u d")
    full = md.label_r4(p, 2)
    label_complete = md.label_r2_4(p, 2, [0], [4])
    ws = md.expand_cd(label_complete)
    fixed = [w for w in ws if tr.phi2_56(w) == w]
    assert len(fixed) == 1 and tr.r2_5_fixed_to_r4(fixed[0]) == full
    plain = md.expand_cd(md.label_r2_4(p, 2, [], []))[0]
    flipped = tr.phi2_56(plain)
    assert plain.vertex_map[4] == "plus1" and flipped.vertex_map[4] == "minus1"
    assert flipped.vertex_map[0] == "plus1"


def test_phi2_56_involution():
    for L in range(4):
        om = tr.build_omega56(L)
        assert Counter(om) == Counter(md.enumerate_paths(ModelId.R2_5, L))
        fixed = []
        for w in om:
            v = tr.phi2_56(w)
            assert tr.phi2_56(v) == w
            if v == w:
                fixed.append(w)
                assert not any(t in ("plus1", "minus1") for _, t in w.vertex_labels)
            else:
                assert v.sign == -w.sign and v.weight == -w.weight
        assert Counter(tr.r2_5_fixed_to_r4(w) for w in fixed) == Counter(md.enumerate_paths(ModelId.R4, L))
        assert om.total() == md.total_weight(fixed)
    assert tr.build_omega56(2).total() == Z2


# --- R3 involution ---------------------------------------------------------------


def test_phi3_examples():
    w = LabeledPath(pc.parse_word("1: u d"), ("unit", "beta"))
    assert tr.phi3(w) == w and tr.r3_fixed_to_r4(w) == md.label_r4(w.path, 0)
    w = LabeledPath(pc.parse_word("1: u d u d"), ("unit", "beta", "unit", "alpha"))
    out = tr.phi3(w)
    assert out == LabeledPath(pc.parse_word("1: u u d d"), ("unit", "unit", "unit", "alphabeta_neg"))
    assert tr.phi3(out) == w
    w = LabeledPath(pc.parse_word("1: u d"), ("unit", "alphabeta_neg"))
    out = tr.phi3(w)
    assert out == LabeledPath(pc.parse_word("1: d u"), ("unit", "alphabeta_pos"))


def test_phi3_involution():
    for L in range(4):
        om = tr.build_omega3(L)
        fixed = []
        for w in om:
            v = tr.phi3(w)
            assert tr.phi3(v) == w
            if v == w:
                fixed.append(w)
                assert pc.find_bad_step(w) is None
            else:
                assert v.sign == -w.sign and v.weight == -w.weight
        assert Counter(tr.r3_fixed_to_r4(w) for w in fixed) == Counter(md.enumerate_paths(ModelId.R4, L))
        assert om.total() == md.total_weight(fixed)
    assert tr.build_omega3(2).total() == Z2


def test_phi3_rejects_malformed():
    with pytest.raises(tr.NotR3_2):
        tr.phi3(LabeledPath(pc.parse_word("1: u d"), ("alpha", "unit")))


def test_signed_set_total_matches_canonical():
    for L in range(4):
        expect = sy.canonicalize(md.total_weight(md.enumerate_paths(ModelId.R3, L)))
        assert tr.build_omega3(L).total() == expect
