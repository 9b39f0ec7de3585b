"""The Klein-bottle group ``<a, b | aba = b>`` and its affine representations.

Every element has a unique normal form ``a^q b^k``.  The relation gives
``b a = a^-1 b``, so ``b^k a^m = a^((-1)^k m) b^k`` and the product rule is

    (q1, k1) * (q2, k2) = (q1 + (-1)^k1 q2, k1 + k2).

Freeness of an affine action only has to be examined on normal forms.  The
linear part of ``a^q b^k`` depends on ``q`` and on the parity of ``k``; the
family-specific closed-form certificates in :mod:`affine_klein.classify`
handle all of ``Z^2`` at once, and :func:`is_free_bounded` is the
independent finite check against them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .affine import ParamAffineMap, compose, fixed_point_set, inverse, power
from .errors import ContractViolation
from .intlinalg import IntMatrix

LETTERS = ("a", "A", "b", "B")  # A = a^-1, B = b^-1
_ALIASES = {"a": "a", "A": "A", "a^-1": "A", "a-": "A", "b": "b", "B": "B", "b^-1": "B", "b-": "B"}


def parse_word(word: str | Iterable[str]) -> tuple[str, ...]:
    """Accepts ``"abA"`` style strings or sequences like ``["a", "b^-1"]``."""
    items = list(word) if isinstance(word, str) else list(word)
    out = []
    for x in items:
        if x in (" ", "*", "."):
            continue
        if x not in _ALIASES:
            raise ContractViolation(f"unknown letter {x!r}")
        out.append(_ALIASES[x])
    return tuple(out)


@dataclass(frozen=True, order=True)
class NormalForm:
    q: int = 0
    k: int = 0

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        sign = -1 if self.k % 2 else 1
        return NormalForm(self.q + sign * other.q, self.k + other.k)

    def inverse(self) -> "NormalForm":
        # (a^q b^k)^-1 = b^-k a^-q = a^(-(-1)^k q) b^-k
        sign = -1 if self.k % 2 else 1
        return NormalForm(-sign * self.q, -self.k)

    @property
    def length(self) -> int:
        return abs(self.q) + abs(self.k)

    def word(self) -> tuple[str, ...]:
        return ("a" if self.q > 0 else "A",) * abs(self.q) + ("b" if self.k > 0 else "B",) * abs(self.k)

    def __str__(self) -> str:
        if self.q == 0 and self.k == 0:
            return "1"
        parts = []
        for letter, e in (("a", self.q), ("b", self.k)):
            if e == 1:
                parts.append(letter)
            elif e:
                parts.append(f"{letter}^{e}")
        return " ".join(parts)


_STEP = {"a": NormalForm(1, 0), "A": NormalForm(-1, 0), "b": NormalForm(0, 1), "B": NormalForm(0, -1)}


def normal_form(word) -> NormalForm:
    result = NormalForm()
    for letter in parse_word(word):
        result = result * _STEP[letter]
    return result


@dataclass(frozen=True)
class GroupHom:
    image_a: ParamAffineMap
    image_b: ParamAffineMap

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.image_a.parameters) | set(self.image_b.parameters)))

    def evaluate_at(self, sigma: Mapping) -> "GroupHom":
        return GroupHom(self.image_a.evaluate(sigma), self.image_b.evaluate(sigma))

    def __str__(self) -> str:
        return f"a={self.image_a}, b={self.image_b}"


def evaluate(h: GroupHom, w) -> ParamAffineMap:
    """Image of a word (letters or a :class:`NormalForm`) under ``h``."""
    if isinstance(w, NormalForm):
        return compose(power(h.image_a, w.q), power(h.image_b, w.k))
    images = {"a": h.image_a, "b": h.image_b}
    images["A"] = inverse(h.image_a)
    images["B"] = inverse(h.image_b)
    result = ParamAffineMap.identity(h.image_a.dim)
    for letter in parse_word(w):
        result = compose(result, images[letter])
    return result


def relation_holds(h: GroupHom) -> bool:
    lhs = compose(compose(h.image_a, h.image_b), h.image_a)
    return lhs == h.image_b


def torus_restriction(h: GroupHom) -> tuple[ParamAffineMap, ParamAffineMap]:
    """Images of the generators ``a``, ``b^2`` of the index-two torus subgroup."""
    if not relation_holds(h):
        raise ContractViolation("homomorphism does not satisfy aba = b")
    return h.image_a, compose(h.image_b, h.image_b)


def normal_forms(bound: int) -> list[NormalForm]:
    """Non-identity normal forms with ``|q|, |k| <= bound``, shortest first then lexicographic."""
    out = [NormalForm(q, k) for q in range(-bound, bound + 1) for k in range(-bound, bound + 1) if q or k]
    out.sort(key=lambda nf: (nf.length, nf.q, nf.k))
    return out


@dataclass(frozen=True)
class FreenessResult:
    free_up_to_bound: bool
    witness: NormalForm | None = None

    def __bool__(self) -> bool:
        return self.free_up_to_bound


def is_free_bounded(h: GroupHom, sigma: Mapping | None, bound: int, check_relation: bool = True) -> FreenessResult:
    """Scan normal forms in the box ``|q|, |k| <= bound`` for fixed points.

    The witness, if any, is the first fixing element in the order of
    :func:`normal_forms`.
    """
    if check_relation and not relation_holds(h):
        raise ContractViolation("homomorphism does not satisfy aba = b")
    num = h.evaluate_at(sigma or {})
    # cache powers: the box is scanned many times
    a_pows = {q: power(num.image_a, q) for q in range(-bound, bound + 1)}
    b_pows = {k: power(num.image_b, k) for k in range(-bound, bound + 1)}
    for nf in normal_forms(bound):
        g = compose(a_pows[nf.q], b_pows[nf.k])
        if not fixed_point_set(g).is_empty:
            return FreenessResult(False, nf)
    return FreenessResult(True, None)


def lattice_nondegeneracy(h: GroupHom, sigma: Mapping | None = None) -> bool:
    """Do the translations of ``h(a)`` and ``h(b)^2`` span a rank-two lattice at ``sigma``?"""
    b2 = compose(h.image_b, h.image_b)
    if b2.linear != IntMatrix.identity(2):
        raise ContractViolation("h(b)^2 must be a translation")
    sigma = sigma or {}
    ta = [x.evaluate(sigma) for x in h.image_a.translation]
    tb = [x.evaluate(sigma) for x in b2.translation]
    return ta[0] * tb[1] - ta[1] * tb[0] != 0


def random_word(rng, max_length: int) -> tuple[str, ...]:
    n = rng.randint(0, max_length)
    return tuple(rng.choice(LETTERS) for _ in range(n))


def word_from_letters(letters: Sequence[str]) -> str:
    return "".join(letters)
