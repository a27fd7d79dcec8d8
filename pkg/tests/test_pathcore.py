import pytest

from aseplattice import models as md
from aseplattice import pathcore as pc
from aseplattice.pathcore import LabeledPath, Path

GOLDEN = "7: j1 d d d j3 d d d j1 d d d d d j1 d j3 d j1 d d d"


def test_heights():
    assert Path(1, [1, -1]).heights == (1, 2, 1)
    p = pc.parse_word(GOLDEN)
    assert len(p) == 22 and p.end_height == 1
    with pytest.raises(pc.HeightViolation):
        Path(0, [-1])


def test_rise_alphabet():
    with pytest.raises(pc.PathError):
        Path(1, [2])
    with pytest.raises(pc.PathError):
        Path(1, [-3])


def test_parse_and_format():
    assert pc.parse_word("1: u d") == Path(1, [1, -1])
    assert pc.format_word(Path(1, [1, -1])) == "1: u d"
    p = pc.parse_word(GOLDEN)
    assert pc.format_word(p, jumps=True) == GOLDEN
    assert p.rises[:4] == (1, -1, -1, -1)
    with pytest.raises(pc.HeightViolation):
        pc.parse_word("0: d")
    with pytest.raises(pc.WordSyntaxError):
        pc.parse_word("1: u x")
    with pytest.raises(pc.WordSyntaxError):
        pc.parse_word("u d")


def test_labeled_path_sign_and_weight():
    w = LabeledPath(Path(1, [1, -1, 1, -1]), ("unit", "alphabeta_neg", "unit", "alpha"), {2: "minus1"})
    assert w.sign == 1
    assert str(w.weight) == "1*abar^2*bbar"
    assert LabeledPath.from_json(w.to_json()) == w


def test_labeled_path_mark_height():
    with pytest.raises(pc.HeightViolation):
        LabeledPath(Path(1, [1, -1]), mark=1)


def test_d_factorize_examples():
    left, right = pc.d_factorize(Path(1, [1, -1]), 0)
    assert left == [] and right == [Path(2, [])]
    p = pc.parse_word("1: u u d d u d")
    left, right = pc.d_factorize(p, 6)
    assert left == [Path(2, [1, -1]), Path(2, [])] and right == []
    assert pc.d_concatenate(left, right) == p
    with pytest.raises(pc.NotOneTransit):
        pc.d_factorize(pc.parse_word("1: d u"), 0)


def test_d_factorize_counts_match_golden_weight():
    from aseplattice.transforms import r1_to_r4

    w = r1_to_r4(md.label_r1(pc.parse_word(GOLDEN)))
    left, right = pc.d_factorize(w.path, w.mark)
    assert (len(left), len(right)) == (w.weight.degree("abar"), w.weight.degree("bbar")) == (3, 2)


def test_j_factorize_empty_and_small():
    assert pc.j_factorize(Path(2, [-1, -1])).is_empty
    node = pc.j_factorize(pc.wrap_r1(pc.parse_word("1: j1 d")))
    assert node.recursion_level == 2
    assert node.describe() == "J0[J0[phi]]"


def test_j_factorize_golden_tree():
    node = pc.j_factorize(pc.wrap_r1(pc.parse_word(GOLDEN)))
    # nested factorisation of the golden path, transcribed by hand
    assert node.describe() == "J3[J0[phi], J1[phi, J0[phi]], phi, J0[J1[J0[phi], phi]]]"
    assert node.factor_rises() == list(pc.wrap_r1(pc.parse_word(GOLDEN)).rises)


def test_j_factorize_errors():
    with pytest.raises(pc.ParityViolation):
        pc.parse_j_factor([1, -1], 0)
    with pytest.raises(pc.DanglingFactor):
        pc.parse_j_factor([-1, 3, -1, -1], 0)


def test_b_factorize_examples():
    f = pc.b_factorize(pc.parse_word("1: u u d d"))
    assert f.prefix == () and f.suffix == () and f.b == pc.parse_word("1: u u d d")
    p = pc.parse_word("3: d d d u")
    f = pc.b_factorize(p)
    assert [q.rises for q in f.prefix] == [(-1,), (-1,)]
    assert f.b.rises == (-1, 1) and f.suffix == ()
    assert pc.b_concatenate(f) == p
    # heights 3 2 3 2 1: the only height-one vertex is the last one
    f = pc.b_factorize(pc.parse_word("3: d u d d"))
    assert (f.lo, f.hi) == (4, 4)
    with pytest.raises(pc.NoHeightOneVertex):
        pc.b_factorize(pc.parse_word("3: u d"))


def test_b_factor_counts_match_boundary():
    for w in md.enumerate_paths(md.ModelId.R2_2, 3):
        f = pc.b_factorize(w.path)
        assert len(f.prefix) == w.path.start_height - 1
        assert len(f.suffix) == w.path.end_height - 1


def _r3_2(word, labels):
    return LabeledPath(pc.parse_word(word), tuple(labels))


def test_five_case_examples():
    w = _r3_2("1: u d u d", ["unit", "alpha", "unit", "beta"])
    assert pc.five_case_factorize(w).case_id == 5
    w = _r3_2("1: u d u d", ["unit", "beta", "unit", "alpha"])
    fc = pc.five_case_factorize(w)
    assert (fc.case_id, fc.bad, fc.d, fc.u, fc.d_prime) == (1, 4, 2, 3, 4)
    w = _r3_2("1: d u", ["unit", "alphabeta_pos"])
    assert pc.five_case_factorize(w).case_id == 4
    w = _r3_2("1: u d", ["unit", "alphabeta_neg"])
    assert pc.five_case_factorize(w).case_id == 3
    w = _r3_2("1: u u d d", ["unit", "unit", "unit", "alphabeta_neg"])
    assert pc.five_case_factorize(w).case_id == 2


def test_five_case_malformed():
    with pytest.raises(pc.MalformedWeights):
        pc.five_case_factorize(_r3_2("1: u d", ["alphabeta_neg", "unit"]))


def test_factorizations_round_trip_all_models():
    for L in range(5):
        for w in md.enumerate_paths(md.ModelId.R4, L):
            assert pc.d_concatenate(*pc.d_factorize(w.path, w.mark)) == w.path
        for w in md.enumerate_paths(md.ModelId.R1, L):
            wrap = pc.wrap_r1(w.path)
            assert pc.j_factorize(wrap).factor_rises() == list(wrap.rises)
        for w in md.enumerate_paths(md.ModelId.R2_2, L):
            assert pc.b_concatenate(pc.b_factorize(w.path)) == w.path


def _j_lengths(node):
    if node.is_empty:
        return []
    out = [len(node.inner_rises())]
    for c in node.children:
        out += _j_lengths(c)
    return out


def test_every_j_factor_even():
    for L in range(6):
        for w in md.enumerate_paths(md.ModelId.R1, L):
            assert all(n % 2 == 0 for n in _j_lengths(pc.j_factorize(pc.wrap_r1(w.path))))


def test_five_cases_partition_r3_2():
    seen = set()
    for L in range(4):
        for w in md.enumerate_paths(md.ModelId.R3_2, L):
            fc = pc.five_case_factorize(w)
            seen.add(fc.case_id)
            assert (fc.case_id == 5) == (pc.find_bad_step(w) is None)
    assert seen == {1, 2, 3, 4, 5}
