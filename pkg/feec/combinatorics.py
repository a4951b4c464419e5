"""
Multiindices, alternator indices and the sign calculus on top of them.

Notation follows the usual barycentric conventions: A(r,m:n) is the set of
multiindices over [m:n] of total degree r, Σ(a:b,m:n) the set of strictly
ascending maps [a:b] -> [m:n]. Σ(k,n) = Σ(1:k,0:n) and
Σ_0(k,n) = Σ(0:k,0:n).
"""

import enum
import logging
import functools
import itertools
from dataclasses import dataclass

from .base import InvalidRange, Malformed, NotDisjoint, OutOfRange


log = logging.getLogger("feec.combinatorics")


@functools.total_ordering
class _Infinity:
    """⌊α⌋ of an empty support: compares above every integer"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __hash__(self):
        return hash("feec.Infinity")

    def __repr__(self):
        return "Infinity"

    __str__ = __repr__


Infinity = _Infinity()


def floor_of(indices):
    """minimal element, Infinity when empty"""
    return min(indices, default=Infinity)


class Sign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    def __mul__(self, other):
        if isinstance(other, Sign):
            return Sign(int(self) * int(other))
        return int(self) * other

    __rmul__ = __mul__

    def __neg__(self):
        return Sign(-int(self))

    @classmethod
    def of_power(cls, exponent):
        """(-1)**exponent"""
        return cls.MINUS if exponent % 2 else cls.PLUS


@dataclass(frozen=True)
class MultiIndex:
    """
    Exponent vector α over [lo:hi]; ``exp[i - lo]`` is α(i).
    """

    exp: tuple
    lo: int = 0

    def __post_init__(self):
        exp = tuple(self.exp)
        if any(not isinstance(e, int) or e < 0 for e in exp):
            raise Malformed("multiindex entries must be non-negative: {!r}".format(exp))
        object.__setattr__(self, "exp", exp)

    @classmethod
    def zeros(cls, lo, hi):
        return cls((0,) * (hi - lo + 1), lo)

    @classmethod
    def unit(cls, p, lo, hi):
        return cls.zeros(lo, hi).plus(p)

    @classmethod
    def from_indices(cls, indices, lo, hi):
        """the multiindex counting how often each index occurs"""
        exp = [0] * (hi - lo + 1)
        for i in indices:
            if not lo <= i <= hi:
                raise OutOfRange("index {} not in [{}:{}]".format(i, lo, hi))
            exp[i - lo] += 1
        return cls(tuple(exp), lo)

    @property
    def hi(self):
        return self.lo + len(self.exp) - 1

    def __getitem__(self, i):
        if not self.lo <= i <= self.hi:
            return 0
        return self.exp[i - self.lo]

    def degree(self):
        return sum(self.exp)

    def bracket(self):
        return frozenset(i for i, e in enumerate(self.exp, self.lo) if e > 0)

    def floor(self):
        for i, e in enumerate(self.exp, self.lo):
            if e > 0:
                return i
        return Infinity

    def plus(self, p):
        """α + p"""
        if not self.lo <= p <= self.hi:
            raise OutOfRange("index {} not in [{}:{}]".format(p, self.lo, self.hi))
        exp = list(self.exp)
        exp[p - self.lo] += 1
        return MultiIndex(tuple(exp), self.lo)

    def minus(self, p):
        """α - p, requires p ∈ [α]"""
        if self[p] == 0:
            raise OutOfRange("index {} not in the support of {}".format(p, self))
        exp = list(self.exp)
        exp[p - self.lo] -= 1
        return MultiIndex(tuple(exp), self.lo)

    def __add__(self, other):
        if not isinstance(other, MultiIndex):
            return NotImplemented
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise InvalidRange("cannot add multiindices over different ranges")
        return MultiIndex(tuple(a + b for a, b in zip(self.exp, other.exp)), self.lo)

    def __str__(self):
        return "({})".format(",".join(str(e) for e in self.exp))


@dataclass(frozen=True)
class Alternator:
    """
    Strictly ascending index map σ: [start:start+len-1] -> [0:n].

    ``start`` is 1 for members of Σ(k,n) and 0 for members of Σ_0(k,n);
    ``n`` is the ambient dimension needed for complements.
    """

    image: tuple
    n: int
    start: int = 1

    def __post_init__(self):
        image = tuple(self.image)
        if any(a >= b for a, b in zip(image, image[1:])):
            raise Malformed("alternator not strictly ascending: {!r}".format(image))
        if image and (image[0] < 0 or image[-1] > self.n):
            raise OutOfRange("alternator {!r} not inside [0:{}]".format(image, self.n))
        object.__setattr__(self, "image", image)

    @property
    def lo(self):
        return self.start

    @property
    def hi(self):
        return self.start + len(self.image) - 1

    def __len__(self):
        return len(self.image)

    def __iter__(self):
        return iter(self.image)

    def __contains__(self, i):
        return i in self.image

    def bracket(self):
        return frozenset(self.image)

    def floor(self):
        return floor_of(self.image)

    def plus(self, q):
        """σ + q, requires q ∉ [σ]"""
        if q in self.image:
            raise NotDisjoint("{} already in {}".format(q, self))
        return Alternator(tuple(sorted(self.image + (q,))), self.n, self.start)

    def minus(self, p):
        """σ - p, requires p ∈ [σ]"""
        if p not in self.image:
            raise OutOfRange("{} not in {}".format(p, self))
        return Alternator(tuple(i for i in self.image if i != p), self.n, self.start)

    def complement(self):
        return complement(self, self.n)

    def __str__(self):
        return "{{{}}}".format(",".join(str(i) for i in self.image))


def _image(x):
    return x.image if isinstance(x, Alternator) else tuple(x)


def enum_multiindices(r, lo, hi):
    """A(r,lo:hi), ordered with the exponent of ``lo`` descending first"""
    if lo > hi:
        raise InvalidRange("empty index range [{}:{}]".format(lo, hi))
    if r < 0:
        return []

    def rec(r, width):
        if width == 1:
            yield (r,)
            return
        for first in range(r, -1, -1):
            for rest in rec(r - first, width - 1):
                yield (first,) + rest

    return [MultiIndex(exp, lo) for exp in rec(r, hi - lo + 1)]


def enum_alternators(a, b, lo, hi):
    """Σ(a:b,lo:hi) in lexicographic order; {∅} whenever a > b"""
    if a > b:
        return [Alternator((), hi, a)]
    return [
        Alternator(image, hi, a)
        for image in itertools.combinations(range(lo, hi + 1), b - a + 1)
    ]


def sigma(k, n):
    """Σ(k,n)"""
    return enum_alternators(1, k, 0, n)


def sigma0(k, n):
    """Σ_0(k,n)"""
    return enum_alternators(0, k, 0, n)


def permutation_sign(seq):
    """parity of the insertion sort of a sequence of distinct integers"""
    items = list(seq)
    swaps = 0
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            swaps += 1
            j -= 1
    if len(set(items)) != len(items):
        raise NotDisjoint("repeated indices in {!r}".format(seq))
    return Sign.of_power(swaps)


def eps_before(q, s):
    """ε(q,σ): sign ordering q, σ(a), ..., σ(b)"""
    image = _image(s)
    if q in image:
        raise NotDisjoint("{} is in {}".format(q, image))
    return permutation_sign((q,) + image)


def eps_after(s, q):
    """ε(σ,q): sign ordering σ(a), ..., σ(b), q"""
    image = _image(s)
    if q in image:
        raise NotDisjoint("{} is in {}".format(q, image))
    return permutation_sign(image + (q,))


def eps(s, t):
    """ε(σ,ρ) for disjoint alternators (or plain indices)"""
    left = (s,) if isinstance(s, int) else _image(s)
    right = (t,) if isinstance(t, int) else _image(t)
    if set(left) & set(right):
        raise NotDisjoint("{!r} and {!r} overlap".format(left, right))
    return permutation_sign(left + right)


def complement(x, n):
    """σ^c: image [0:n] ∖ [σ]; Σ(k,n) and Σ_0(n-k,n) are exchanged"""
    image = _image(x)
    if any(not 0 <= i <= n for i in image):
        raise OutOfRange("{!r} is not inside [0:{}]".format(image, n))
    start = x.start if isinstance(x, Alternator) else 1
    rest = tuple(i for i in range(n + 1) if i not in image)
    return Alternator(rest, n, 1 - start)


def merge_sign(s, t):
    """(ε(σ,ρ), σ+ρ)"""
    sign = eps(s, t)
    n = max(
        s.n if isinstance(s, Alternator) else max(_image(s), default=0),
        t.n if isinstance(t, Alternator) else max(_image(t), default=0),
    )
    starts = [x.start for x in (s, t) if isinstance(x, Alternator)]
    start = min(starts) if starts else 1
    return sign, Alternator(tuple(sorted(_image(s) + _image(t))), n, start)


def alternator_monomial(s, n):
    """the multiindex of λ_σ = Π_{i∈[σ]} λ_i"""
    return MultiIndex.from_indices(_image(s), 0, n)
