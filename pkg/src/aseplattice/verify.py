"""Named invariant suites, shared by the CLI and the test-suite.

Each check runs at ``max(L, stated size)`` where an invariant fixes a size,
so ``run_suite("all", 3)`` covers everything at the documented sizes.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import algebra as al
from . import pathcore as pc
from . import symbolic as sy
from . import transforms as tr
from .models import ModelId, enumerate_paths, expand_cd, expand_r3, total_weight


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        tail = f"  {self.detail}" if self.detail else ""
        return f"[{mark}] {self.suite}: {self.name}{tail}"


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def marked_dyck_count(L: int) -> int:
    """Dyck paths of length 2L weighted by (returns + 1), by a DP on height
    and return count; independent of any path enumeration."""
    # state: (height, visits to height 0 so far)
    table = Counter({(0, 1): 1})
    for _ in range(2 * L):
        nxt: Counter = Counter()
        for (h, r), n in table.items():
            nxt[(h + 1, r)] += n
            if h:
                nxt[(h - 1, r + (h == 1))] += n
        table = nxt
    return sum(n * r for (h, r), n in table.items() if h == 0)


# --- symbolic --------------------------------------------------------------


def _random_poly(rng, names=sy.VARIABLES, terms=3):
    out = sy.ZERO
    for _ in range(rng.randint(0, terms)):
        mono = sy.Polynomial.constant(rng.randint(-3, 3))
        for name in names:
            e = rng.randint(0, 2)
            if e:
                mono = mono * sy.Polynomial.variable(name, e)
        out = out + mono
    return out


def suite_symbolic(L: int) -> list:
    rng = random.Random(20240601)
    res = []
    ok = True
    for _ in range(60):
        p, q, r = (_random_poly(rng) for _ in range(3))
        ok &= (p + q) + r == p + (q + r) and p * (q * r) == (p * q) * r
        ok &= p * (q + r) == p * q + p * r and p * q == q * p and p + q == q + p
    res.append(CheckResult("symbolic", "ring axioms", ok))
    ok = True
    for _ in range(40):
        p = _random_poly(rng, ("abar", "bbar", "c", "d")) * _random_poly(rng, ("kappa",)) ** 2
        try:
            cp = sy.canonicalize(p)
        except sy.OddKappaDegree:
            continue
        ok &= sy.canonicalize(cp) == cp
        a, b = Fraction(rng.randint(1, 9), rng.randint(1, 9)), Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assign = {"abar": a, "bbar": b}
        full = dict(assign, c=a - 1, d=b - 1)
        # kappa enters only squared, so evaluate through kappa^2 = 1 - cd
        kk = 1 - (a - 1) * (b - 1)
        raw = sum(
            Fraction(co) * a ** e[0] * b ** e[1] * kk ** (e[2] // 2) * full["c"] ** e[3] * full["d"] ** e[4]
            for e, co in p.terms.items()
        )
        ok &= sy.evaluate(cp, assign) == raw
    res.append(CheckResult("symbolic", "canonicalize idempotent and evaluation-compatible", ok))
    ok = all(sy.canonicalize(p) == p for p in (_random_poly(rng, ("abar", "bbar")) for _ in range(40)))
    res.append(CheckResult("symbolic", "canonicalize fixes {abar, bbar} polynomials", ok))
    return res


# --- factorizations ----------------------------------------------------------


def _even_j(node) -> bool:
    if node.is_empty:
        return True
    return len(node.inner_rises()) % 2 == 0 and all(_even_j(c) for c in node.children)


def _five_case_consistent(w, fc) -> bool:
    r = w.path.rises
    if fc.case_id == 5:
        return pc.find_bad_step(w) is None
    if fc.case_id in (1, 2):
        lo, hi = fc.m_span
        m = r[lo - 1 : hi - 1]
        dyck = all(sum(m[:i]) >= 0 for i in range(len(m) + 1)) and sum(m) == 0
        return dyck and r[fc.u - 1] == 1 and r[fc.d - 1] == -1 and r[fc.d_prime - 1] == -1
    if fc.case_id == 3:
        return r[fc.u - 1] == 1 and r[fc.d - 1] == -1 and fc.d == fc.u + 1
    return r[fc.d - 1] == -1 and r[fc.u - 1] == 1 and fc.u == fc.d + 1


def suite_factorizations(L: int) -> list:
    n = max(L, 4)
    res = []
    ok_d = ok_j = ok_b = ok_even = True
    for size in range(n + 1):
        for w in enumerate_paths(ModelId.R4, size):
            ok_d &= pc.d_concatenate(*pc.d_factorize(w.path, w.mark)) == w.path
        for w in enumerate_paths(ModelId.R1, size):
            wrap = pc.wrap_r1(w.path)
            node = pc.j_factorize(wrap)
            ok_j &= node.factor_rises() == list(wrap.rises)
            ok_even &= _even_j(node)
        for w in enumerate_paths(ModelId.R2_2, size):
            ok_b &= pc.b_concatenate(pc.b_factorize(w.path)) == w.path
    res.append(CheckResult("factorizations", f"D-factorization round trip, L<={n}", ok_d))
    res.append(CheckResult("factorizations", f"J-factorization round trip, L<={n}", ok_j))
    res.append(CheckResult("factorizations", f"every J factor has even length, L<={n}", ok_even))
    res.append(CheckResult("factorizations", f"B-factorization round trip, L<={n}", ok_b))
    ok = True
    m3 = max(L, 3)
    for size in range(m3 + 1):
        for w in enumerate_paths(ModelId.R3_2, size):
            fc = pc.five_case_factorize(w)
            ok &= _five_case_consistent(w, fc)
    res.append(CheckResult("factorizations", f"five cases exclusive and exhaustive, L<={m3}", ok))
    return res


# --- models ------------------------------------------------------------------


def _routes(L: int) -> dict:
    return {
        "R4": total_weight(enumerate_paths(ModelId.R4, L)),
        "R1": total_weight(enumerate_paths(ModelId.R1, L)),
        "R3": sy.canonicalize(total_weight(enumerate_paths(ModelId.R3, L))),
        "R2_2": sy.canonicalize(total_weight(enumerate_paths(ModelId.R2_2, L))),
    }


def suite_models(L: int) -> list:
    res = []
    n6 = max(L, 6)
    ok = True
    for size in range(n6 + 1):
        ok &= len(set(_routes(size).values())) == 1
    res.append(CheckResult("models", f"R1 = R2^2 = R3 = R4 totals, L<={n6}", ok))
    n8 = max(L, 8)
    ok = True
    for size in range(n8 + 1):
        r4 = enumerate_paths(ModelId.R4, size)
        z = total_weight(r4)
        ok &= len(r4) == catalan(size + 1) == marked_dyck_count(size)
        ok &= sy.evaluate(z, {"abar": 1, "bbar": 1}) == len(r4)
    res.append(CheckResult("models", f"|R4(L)| = Catalan(L+1) = Z_L(1,1), L<={n8}", ok))
    ok = all(0 not in w.path.heights for size in range(n6 + 1) for w in enumerate_paths(ModelId.R1, size))
    res.append(CheckResult("models", f"R1 paths avoid height zero, L<={n6}", ok))
    ok = True
    for size in range(max(L, 4) + 1):
        for w in enumerate_paths(ModelId.R3, size):
            prime, expanded = expand_r3(w)
            ok &= prime.weight == w.weight and sy.canonicalize(w.weight) == sy.canonicalize(total_weight(expanded))
        for w in enumerate_paths(ModelId.R2_4, size):
            ok &= sy.canonicalize(total_weight(expand_cd(w))) == sy.canonicalize(w.weight)
    res.append(CheckResult("models", "expand_r3 and expand_cd preserve signed weight", ok))
    return res


# --- involutions ---------------------------------------------------------------


def _check_involution(name, omega, phi, fixed_expected, detail_size):
    out = []
    twice = sign = True
    fixed = []
    for w in omega:
        v = phi(w)
        twice &= phi(v) == w
        if v == w:
            fixed.append(w)
        else:
            sign &= v.sign == -w.sign and v.weight == -w.weight
    lhs, rhs = total_weight(omega), total_weight(fixed)
    out.append(CheckResult("involutions", f"{name}: phi o phi = id, {detail_size}", twice))
    out.append(CheckResult("involutions", f"{name}: sign reversal off fixed points, {detail_size}", sign))
    out.append(
        CheckResult("involutions", f"{name}: total(Omega) = total(fixed), {detail_size}", lhs == rhs, sy.to_text(rhs))
    )
    ok = Counter(fixed_expected(fixed)) == Counter(fixed_expected(None))
    out.append(CheckResult("involutions", f"{name}: fixed-point characterization, {detail_size}", ok))
    return out


def suite_involutions(L: int) -> list:
    n = max(L, 3)
    res = []
    for size in range(n + 1):
        K = size + 2
        omega = tr.build_omega2(size, K)

        def fx12(fixed, size=size, K=K):
            if fixed is None:
                return [w.path for w in tr.fixed_points_r2_2(size, K)]
            return [w.path for w in fixed]

        res += _check_involution("phi2_12", omega, lambda w, K=K: tr.phi2_12(w, K), fx12, f"L={size} K={K}")

        omega56 = tr.build_omega56(size)

        def fx56(fixed, size=size):
            if fixed is None:
                return enumerate_paths(ModelId.R4, size)
            return [tr.r2_5_fixed_to_r4(w) for w in fixed]

        res += _check_involution("phi2_56", omega56, tr.phi2_56, fx56, f"L={size}")

        omega3 = tr.build_omega3(size)

        def fx3(fixed, size=size):
            if fixed is None:
                return enumerate_paths(ModelId.R4, size)
            return [tr.r3_fixed_to_r4(w) for w in fixed]

        res += _check_involution("phi3", omega3, tr.phi3, fx3, f"L={size}")
        ok = all((pc.find_bad_step(w) is None) == (tr.phi3(w) == w) for w in omega3)
        ok &= all(
            (not any(t in (pc.PLUS1, pc.MINUS1) for _, t in w.vertex_labels)) == (tr.phi2_56(w) == w) for w in omega56
        )
        res.append(CheckResult("involutions", f"fixed points carry no bad step / no +-1 label, L={size}", ok))
    return res


# --- bijections ----------------------------------------------------------------


def _check_bijection(name, domain, codomain, fwd, inv, size):
    images = [fwd(w) for w in domain]
    onto = Counter(images) == Counter(codomain) and len(set(images)) == len(images)
    weights = all(sy.canonicalize(a.weight) == sy.canonicalize(b.weight) for a, b in zip(domain, images))
    back = all(inv(b) == a for a, b in zip(domain, images))
    return [
        CheckResult("bijections", f"{name}: bijective onto codomain, L={size}", onto),
        CheckResult("bijections", f"{name}: weight preserving, L={size}", weights),
        CheckResult("bijections", f"{name}: round trip, L={size}", back),
    ]


GOLDEN_R1 = "7: j1 d d d j3 d d d j1 d d d d d j1 d j3 d j1 d d d"
GOLDEN_FACTOR = "2: d u u u u d u d d u u d d u d d d u d u u d u d d"
GOLDEN_R4 = "1: u u d d u u u d d u d d u d u d u u d u d d"
GOLDEN_R4_MARK = 14


def golden_check() -> list:
    from .models import label_r1

    p = pc.parse_word(GOLDEN_R1)
    w = label_r1(p)
    factor = tr.gamma_prime_factor(pc.wrap_r1(p))
    r4 = tr.r1_to_r4(w)
    return [
        CheckResult(
            "bijections", "golden path: J -> D word", pc.format_word(factor) == GOLDEN_FACTOR, pc.format_word(factor)
        ),
        CheckResult(
            "bijections",
            "golden path: R1 -> R4 image and weight",
            pc.format_word(r4.path) == GOLDEN_R4 and r4.mark == GOLDEN_R4_MARK and r4.weight == w.weight,
            f"{pc.format_word(r4.path)} mark={r4.mark} weight={r4.weight}",
        ),
    ]


def suite_bijections(L: int) -> list:
    n = max(L, 4)
    res = golden_check()
    for size in range(n + 1):
        r1 = enumerate_paths(ModelId.R1, size)
        res += _check_bijection("r1_to_r4", r1, enumerate_paths(ModelId.R4, size), tr.r1_to_r4, tr.r4_to_r1, size)
        r22 = enumerate_paths(ModelId.R2_2, size)
        r23 = enumerate_paths(ModelId.R2_3, size)
        res += _check_bijection("gamma_23", r22, r23, tr.gamma_23, tr.gamma_23_inverse, size)
        res += _check_bijection(
            "gamma_34", r23, enumerate_paths(ModelId.R2_4, size), tr.gamma_34, tr.gamma_34_inverse, size
        )
    return res


# --- algebra ---------------------------------------------------------------------


def suite_dehp(L: int) -> list:
    res = []
    for rep in (1, 2, 3):
        for N in sorted({3, 6, max(L, 3) + 3}):
            rpt = al.check_dehp(rep, N)
            res.append(CheckResult("dehp", f"rep {rep}, N={N}", rpt.passed, "; ".join(map(str, rpt.violations[:3]))))
    return res


def suite_transfer(L: int) -> list:
    res = []
    n4 = max(L, 4)
    ok = all(
        al.z_transfer(rep, size) == al.z_transfer(rep, size, N=2 * size + 6)
        for rep in (1, 3)
        for size in range(n4 + 1)
    )
    res.append(CheckResult("transfer", f"truncation N=2L+2 vs 2L+6 stable, L<={n4}", ok))
    n6 = max(L, 6)
    ok = True
    for size in range(n6 + 1):
        vals = set(_routes(size).values()) | {al.z_transfer(1, size), al.z_transfer(3, size)}
        ok &= len(vals) == 1
    res.append(CheckResult("transfer", f"reps 1, 3 equal all enumerations, L<={n6}", ok))
    n8 = max(L, 8)
    ok = True
    for size in range(n8 + 1):
        z = al.z_transfer(3, size)
        ok &= z.coefficients_nonnegative() and z.variables() <= {"abar", "bbar"}
    res.append(CheckResult("transfer", f"Z_L has positive coefficients, L<={n8}", ok))
    value = al.z_numeric_rep2(2, Fraction(1, 2), Fraction(1, 3), Fraction(1, 10 ** 9))
    ok = abs(value - Fraction(319, 36)) < Fraction(1, 10 ** 9)
    res.append(CheckResult("transfer", "rep 2 numeric series at L=2, c=1/2, d=1/3", ok, f"{float(value):.12f}"))
    return res


STATIONARY_PARAMS = ((Fraction(1), Fraction(1)), (Fraction(1, 2), Fraction(1, 3)), (Fraction(3, 4), Fraction(1)))


def suite_stationary(L: int) -> list:
    res = []
    n = max(L, 5)
    for size in range(1, n + 1):
        for a, b in STATIONARY_PARAMS:
            chk = al.check_stationary(al.ChainSpec(size, a, b))
            res.append(CheckResult("stationary", f"L={size} alpha={a} beta={b}", chk.passed))
    return res


SUITES = {
    "symbolic": suite_symbolic,
    "factorizations": suite_factorizations,
    "models": suite_models,
    "involutions": suite_involutions,
    "bijections": suite_bijections,
    "transfer": suite_transfer,
    "dehp": suite_dehp,
    "stationary": suite_stationary,
}


def run_suite(name: str, L: int) -> list:
    if name == "all":
        out = []
        for fn in SUITES.values():
            out += fn(L)
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](L)
