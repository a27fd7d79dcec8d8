"""Exact integer polynomials in the ASEP weight variables.

Every weight in the package is a :class:`Polynomial` over the ordered
variable set ``(abar, bbar, kappa, c, d)``.  The final basis is
``{abar, bbar}``; ``c = abar - 1``, ``d = bbar - 1`` and
``kappa**2 = abar + bbar - abar*bbar`` are staging variables removed by
:func:`canonicalize`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

VARIABLES = ("abar", "bbar", "kappa", "c", "d")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_NVARS = len(VARIABLES)
_ZERO_EXP = (0,) * _NVARS


class OddKappaDegree(ValueError):
    """A monomial carries an odd power of kappa."""


class MissingVariable(KeyError):
    """An evaluation assignment does not cover a variable of the polynomial."""


def _monomial_key(exps):
    # word order: abar < abar^2 < abar*bbar < bbar < bbar^2
    word = []
    for i, e in enumerate(exps):
        word.extend([i] * e)
    return tuple(word)


class Polynomial:
    """Immutable sparse polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None):
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != _NVARS:
                    raise ValueError(f"exponent vector must have {_NVARS} entries")
                if any(e < 0 for e in exps):
                    raise ValueError("negative exponent")
                if coeff:
                    clean[tuple(exps)] = int(coeff)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls({_ZERO_EXP: value})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> "Polynomial":
        exps = [0] * _NVARS
        exps[_INDEX[name]] = power
        return cls({tuple(exps): 1})

    @classmethod
    def _coerce(cls, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return cls.constant(other)
        return NotImplemented

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def variables(self) -> set:
        used = set()
        for exps in self._terms:
            used.update(VARIABLES[i] for i, e in enumerate(exps) if e)
        return used

    def degree(self, name: str) -> int:
        i = _INDEX[name]
        return max((exps[i] for exps in self._terms), default=0)

    def coefficients_nonnegative(self) -> bool:
        return all(c > 0 for c in self._terms.values())

    # ring operations
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            out[exps] = out.get(exps, 0) + coeff
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda item: _monomial_key(item[0]))

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"Polynomial({to_text(self)!r})"


ZERO = Polynomial()
ONE = Polynomial.constant(1)
ABAR = Polynomial.variable("abar")
BBAR = Polynomial.variable("bbar")
KAPPA = Polynomial.variable("kappa")
C = Polynomial.variable("c")
D = Polynomial.variable("d")
KAPPA2_CANONICAL = ABAR + BBAR - ABAR * BBAR


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def neg(p: Polynomial) -> Polynomial:
    return -p


def total(polys: Iterable[Polynomial]) -> Polynomial:
    """Sum an iterable of polynomials (dictionary accumulation, not pairwise)."""
    out: dict = {}
    for p in polys:
        for exps, coeff in p._terms.items():
            out[exps] = out.get(exps, 0) + coeff
    return Polynomial(out)


def reduce_kappa(p: Polynomial) -> Polynomial:
    """Substitute c, d and kappa**2, leaving at most a single kappa per monomial.

    Needed when comparing expressions that are linear in kappa, such as the
    eigenvector relations of the rep-2 vectors.
    """
    cache: dict = {}

    def power(base, key, n):
        if (key, n) not in cache:
            cache[(key, n)] = base ** n
        return cache[(key, n)]

    out = ZERO
    for (a, b, k, ce, de), coeff in p._terms.items():
        mono = Polynomial({(a, b, k % 2, 0, 0): coeff})
        if ce:
            mono = mono * power(ABAR - 1, "c", ce)
        if de:
            mono = mono * power(BBAR - 1, "d", de)
        if k >= 2:
            mono = mono * power(KAPPA2_CANONICAL, "k", k // 2)
        out = out + mono
    return out


def canonicalize(p: Polynomial) -> Polynomial:
    """Rewrite ``p`` in the basis ``{abar, bbar}``.

    Raises :class:`OddKappaDegree` if any monomial has an odd kappa power.
    """
    for exps in p._terms:
        if exps[2] % 2:
            raise OddKappaDegree(f"odd kappa power in {to_text(p)}")
    return reduce_kappa(p)


def evaluate(p: Polynomial, assignment: Mapping[str, Fraction | int]) -> Fraction:
    """Exact rational value of ``p`` under ``assignment`` (variable name -> value)."""
    missing = p.variables() - set(assignment)
    if missing:
        raise MissingVariable(", ".join(sorted(missing)))
    values = [Fraction(assignment.get(name, 0)) for name in VARIABLES]
    result = Fraction(0)
    for exps, coeff in p._terms.items():
        term = Fraction(coeff)
        for v, e in zip(values, exps):
            if e:
                term *= v ** e
        result += term
    return result


# ``eval`` is a builtin; keep the contract name available without shadowing it
eval_poly = evaluate


def to_text(p: Polynomial) -> str:
    """Render as ``coeff*var^e*...`` terms in word order, e.g. ``1 + 1*abar``."""
    if not p._terms:
        return "0"
    pieces = []
    for exps, coeff in p.sorted_terms():
        factors = []
        for name, e in zip(VARIABLES, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = f"{abs(coeff)}" + "".join("*" + f for f in factors)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(("+ " if coeff > 0 else "- ") + body)
    return " ".join(pieces)


def from_text(text: str) -> Polynomial:
    """Parse the output of :func:`to_text`."""
    text = text.strip()
    if text == "0":
        return ZERO
    tokens = text.replace("- ", "-").replace("+ ", "+").split()
    out = ZERO
    for tok in tokens:
        sign = 1
        if tok[0] in "+-":
            sign = -1 if tok[0] == "-" else 1
            tok = tok[1:]
        coeff_text, *factors = tok.split("*")
        mono = Polynomial.constant(sign * int(coeff_text))
        for f in factors:
            name, _, power = f.partition("^")
            if name not in _INDEX:
                raise ValueError(f"unknown variable {name!r}")
            mono = mono * Polynomial.variable(name, int(power) if power else 1)
        out = out + mono
    return out
