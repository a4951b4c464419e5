"""
Exact barycentric differential forms on the n-simplex.

A form is stored in normal form: a map from pairs (α, σ), with α a
homogeneous multiindex of degree r over [0:n] and σ an alternator that
avoids the index 0, to a nonzero Fraction. dλ_0 is always eliminated
through dλ_0 = -(dλ_1 + ... + dλ_n), so two forms are equal exactly when
their stored terms agree after homogenizing to a common degree.
"""

import re
import logging
import itertools
from fractions import Fraction

from .base import (
    DegreeTooLow,
    Malformed,
    NotBarycentric,
    OutOfRange,
    Report,
    ShapeMismatch,
    fstr,
    same_shape,
    to_fraction,
)
from .combinatorics import (
    Alternator,
    MultiIndex,
    enum_alternators,
    enum_multiindices,
    eps,
    permutation_sign,
    sigma,
    sigma0,
)


log = logging.getLogger("feec.forms")


def _image(s):
    return s.image if isinstance(s, Alternator) else tuple(s)


def _exp(a):
    return a.exp if isinstance(a, MultiIndex) else tuple(a)


def _expand_alternator(image, n):
    """
    dλ_image as a list of (sign, image) with 0 eliminated.
    Returns [] when the alternator repeats an index.
    """
    if len(set(image)) != len(image):
        return []
    order = sorted(image)
    sign = permutation_sign(image)
    if not order or order[0] != 0:
        return [(sign, tuple(order))]
    rest = tuple(order[1:])
    result = []
    for i in range(1, n + 1):
        if i in rest:
            continue
        # dλ_0 ∧ dλ_rest = -Σ dλ_i ∧ dλ_rest
        result.append((-sign * eps(i, rest), tuple(sorted(rest + (i,)))))
    return result


class NormalForm:
    """
    Differential k-form on the n-simplex with homogeneous polynomial
    coefficients of degree r, kept in its unique normal form.
    """

    __slots__ = ("n", "k", "r", "terms")

    def __init__(self, n, k, r=0, terms=None):
        if n < 0:
            raise OutOfRange("simplex dimension must be >= 0, got {}".format(n))
        if k < 0:
            raise OutOfRange("form degree must be >= 0, got {}".format(k))
        if r < 0:
            raise DegreeTooLow("polynomial degree must be >= 0, got {}".format(r))
        self.n = n
        self.k = k
        self.r = r
        self.terms = {}
        for key, value in (terms or {}).items():
            value = Fraction(value)
            if value:
                self.terms[key] = value
        if k > n and self.terms:
            raise ShapeMismatch("a {}-form on a {}-simplex vanishes".format(k, n))

    @classmethod
    def from_pairs(cls, n, k, r, pairs):
        """accumulate (exp, image, coefficient) triples already in normal form"""
        acc = {}
        for exp, image, value in pairs:
            key = (tuple(exp), tuple(image))
            acc[key] = acc.get(key, 0) + value
        return cls(n, k, r, acc)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        """stored terms sorted by (descending exponent, alternator)"""
        return sorted(
            self.terms.items(), key=lambda kv: (tuple(-e for e in kv[0][0]), kv[0][1])
        )

    def coefficient(self, alpha, s):
        return self.terms.get((_exp(alpha), _image(s)), Fraction(0))

    def coordinates(self, index):
        """coefficient vector along a list of (exp, image) keys"""
        extra = set(self.terms) - set(index)
        if extra:
            raise ShapeMismatch(
                "form has terms outside the coordinate index: {}".format(sorted(extra))
            )
        return [self.terms.get(key, Fraction(0)) for key in index]

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        if (self.n, self.k) != (other.n, other.k):
            return False
        if not self.terms or not other.terms:
            return not self.terms and not other.terms
        r = max(self.r, other.r)
        return homogenize(self, r).terms == homogenize(other, r).terms

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, c):
        return scale(c, self)

    def __rmul__(self, c):
        return scale(c, self)

    def __xor__(self, other):
        return wedge(self, other)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return "{name}(n={o.n}, k={o.k}, r={o.r}, {text!r})".format(
            name=self.__class__.__name__, o=self, text=render(self)
        )


class BarycentricPoint:
    """Point given by n+1 exact barycentric weights summing to 1"""

    __slots__ = ("weights",)

    def __init__(self, weights):
        weights = tuple(Fraction(w) for w in weights)
        if not weights:
            raise NotBarycentric("a point needs at least one weight")
        if sum(weights) != 1:
            raise NotBarycentric(
                "barycentric weights must sum to 1, got {}".format(fstr(sum(weights)))
            )
        self.weights = weights

    @classmethod
    def vertex(cls, j, n):
        return cls(Fraction(int(i == j)) for i in range(n + 1))

    @property
    def n(self):
        return len(self.weights) - 1

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    def __eq__(self, other):
        return isinstance(other, BarycentricPoint) and self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return "{}({})".format(
            self.__class__.__name__, ", ".join(fstr(w) for w in self.weights)
        )


def storage_index(r, k, n):
    """every (exp, image) key a degree r k-form on the n-simplex can store"""
    return [
        (alpha.exp, s.image)
        for alpha in enum_multiindices(r, 0, n)
        for s in enum_alternators(1, k, 1, n)
    ]


def make_term(alpha, s, n=None, coefficient=1):
    """normal form of coefficient * λ^α dλ_σ"""
    exp = _exp(alpha)
    n = len(exp) - 1 if n is None else n
    if len(exp) != n + 1:
        raise ShapeMismatch("multiindex {} is not over [0:{}]".format(exp, n))
    image = _image(s)
    if any(a >= b for a, b in zip(image, image[1:])):
        raise Malformed("alternator not strictly ascending: {!r}".format(image))
    if image and (image[0] < 0 or image[-1] > n):
        raise OutOfRange("alternator {!r} not inside [0:{}]".format(image, n))
    k = len(image)
    pairs = [
        (exp, img, sign * Fraction(coefficient))
        for sign, img in _expand_alternator(image, n)
    ]
    return NormalForm.from_pairs(n, k, sum(exp), pairs)


def zero(n, k=0, r=0):
    return NormalForm(n, k, r)


def one(n):
    """the constant function 1"""
    return NormalForm(n, 0, 0, {((0,) * (n + 1), ()): 1})


def lam(i, n):
    """λ_i"""
    return make_term(MultiIndex.unit(i, 0, n), (), n)


def dlam(i, n):
    """dλ_i"""
    if not 0 <= i <= n:
        raise OutOfRange("index {} not in [0:{}]".format(i, n))
    return make_term(MultiIndex.zeros(0, n), (i,), n)


def monomial(alpha, n=None):
    """λ^α"""
    return make_term(alpha, (), n)


def alternator_form(s, n=None):
    """dλ_σ"""
    n = s.n if n is None and isinstance(s, Alternator) else n
    return make_term(MultiIndex.zeros(0, n), s, n)


def homogenize(omega, degree):
    """multiply by (λ_0 + ... + λ_n)**(degree - r)"""
    if degree < omega.r:
        raise DegreeTooLow(
            "cannot homogenize a degree {} form down to {}".format(omega.r, degree)
        )
    terms = dict(omega.terms)
    for _ in range(degree - omega.r):
        acc = {}
        for (exp, image), value in terms.items():
            for i in range(omega.n + 1):
                new = exp[:i] + (exp[i] + 1,) + exp[i + 1 :]
                key = (new, image)
                acc[key] = acc.get(key, 0) + value
        terms = acc
    return NormalForm(omega.n, omega.k, degree, terms)


@same_shape()
def add(omega, eta):
    r = max(omega.r, eta.r)
    a, b = homogenize(omega, r), homogenize(eta, r)
    terms = dict(a.terms)
    for key, value in b.terms.items():
        terms[key] = terms.get(key, 0) + value
    return NormalForm(omega.n, omega.k, r, terms)


def scale(c, omega):
    c = Fraction(c)
    return NormalForm(
        omega.n, omega.k, omega.r, {key: c * v for key, v in omega.terms.items()}
    )


def total(forms, n, k, r=0):
    """sum of an iterable of forms, zero when empty"""
    result = NormalForm(n, k, r)
    for form in forms:
        result = add(result, form)
    return result


@same_shape(check_k=False)
def wedge(omega, eta):
    n, k = omega.n, omega.k + eta.k
    r = omega.r + eta.r
    if k > n:
        return NormalForm(n, k, r)
    acc = {}
    for (e1, s1), v1 in omega.terms.items():
        for (e2, s2), v2 in eta.terms.items():
            if set(s1) & set(s2):
                continue
            sign = eps(s1, s2)
            key = (tuple(a + b for a, b in zip(e1, e2)), tuple(sorted(s1 + s2)))
            acc[key] = acc.get(key, 0) + sign * v1 * v2
    return NormalForm(n, k, r, acc)


def exterior_derivative(omega):
    n, k = omega.n, omega.k + 1
    if omega.r == 0 or k > n:
        return NormalForm(n, k, max(omega.r - 1, 0))
    acc = {}
    for (exp, image), value in omega.terms.items():
        for i, e in enumerate(exp):
            if e == 0 or i in image:
                continue
            lowered = exp[:i] + (e - 1,) + exp[i + 1 :]
            for sign, img in _expand_alternator((i,) + image, n):
                key = (lowered, img)
                acc[key] = acc.get(key, 0) + sign * e * value
    return NormalForm(n, k, omega.r - 1, acc)


d = exterior_derivative


def whitney(rho, n=None):
    """φ_ρ = Σ_p ε(p,ρ-p) λ_p dλ_{ρ-p}"""
    n = rho.n if n is None and isinstance(rho, Alternator) else n
    image = _image(rho)
    if not image:
        raise Malformed("a Whitney form needs a nonempty index set")
    if any(a >= b for a, b in zip(image, image[1:])):
        raise Malformed("alternator not strictly ascending: {!r}".format(image))
    if image[0] < 0 or image[-1] > n:
        raise OutOfRange("alternator {!r} not inside [0:{}]".format(image, n))
    pieces = []
    for p in image:
        rest = tuple(i for i in image if i != p)
        pieces.append(
            make_term(MultiIndex.unit(p, 0, n), rest, n, coefficient=eps(p, rest))
        )
    return total(pieces, n, len(image) - 1, 1)


def evaluate(omega, x):
    """coefficient of each dλ_σ (0 ∉ [σ]) at the point x"""
    if not isinstance(x, BarycentricPoint):
        x = BarycentricPoint(x)
    if x.n != omega.n:
        raise ShapeMismatch(
            "point has {} weights, form lives on a {}-simplex".format(
                len(x.weights), omega.n
            )
        )
    values = {s.image: Fraction(0) for s in enum_alternators(1, omega.k, 1, omega.n)}
    for (exp, image), value in omega.terms.items():
        term = value
        for w, e in zip(x.weights, exp):
            if e:
                term *= w ** e
        values[image] += term
    return {
        Alternator(image, omega.n, 1): value for image, value in sorted(values.items())
    }


_TERM = re.compile(r"^([+-][0-9]+(?:/[0-9]+)?) l\^\(([0-9,]*)\) dl\{([0-9,]*)\}$")


def render(omega):
    """textual form ``+3/2 l^(1,0,1) dl{1,2}``, ``0`` for the zero form"""
    if not omega.terms:
        return "0"
    parts = []
    for (exp, image), value in omega.items():
        sign = "-" if value < 0 else "+"
        parts.append(
            "{}{} l^({}) dl{{{}}}".format(
                sign,
                fstr(abs(value)),
                ",".join(str(e) for e in exp),
                ",".join(str(i) for i in image),
            )
        )
    return " ".join(parts)


def parse(text, n, k, r=0):
    """inverse of render; r is only used for the zero form"""
    text = text.strip()
    if text == "0":
        return NormalForm(n, k, r)
    tokens = text.split()
    if len(tokens) % 3:
        raise Malformed("expected 'coefficient l^(...) dl{{...}}' terms: {!r}".format(text))
    result = None
    for i in range(0, len(tokens), 3):
        chunk = " ".join(tokens[i : i + 3])
        match = _TERM.match(chunk)
        if match is None:
            raise Malformed("not a form term: {!r}".format(chunk))
        value = to_fraction(match.group(1))
        exp = tuple(int(e) for e in match.group(2).split(",") if e)
        image = tuple(int(e) for e in match.group(3).split(",") if e)
        if len(image) != k:
            raise ShapeMismatch("term {!r} is not a {}-form".format(chunk, k))
        term = make_term(exp, image, n, coefficient=value)
        result = term if result is None else add(result, term)
    return result


def verify_identities(n, r_max=1):
    """
    Exhaustively check the barycentric and Whitney form identities on the
    n-simplex. Failures are report entries.
    """
    report = Report("forms")
    log.info("verifying form identities for n={} r_max={}".format(n, r_max))
    one_n = one(n)

    unity = total((lam(i, n) for i in range(n + 1)), n, 0)
    report.check_equal("partition-of-unity", "n={}".format(n), unity, one_n)
    report.check_equal(
        "partition-of-zero",
        "n={}".format(n),
        total((dlam(i, n) for i in range(n + 1)), n, 1),
        NormalForm(n, 1),
    )
    for i in range(n + 1):
        for j in range(n + 1):
            value = evaluate(lam(i, n), BarycentricPoint.vertex(j, n))
            report.check_equal(
                "lagrange", "i={} j={}".format(i, j), value[Alternator((), n, 1)], int(i == j)
            )

    for k in range(0, n + 1):
        for rho in sigma0(k, n):
            # dφ_ρ = (k+1) dλ_ρ
            report.check_equal(
                "whitney-derivative",
                str(rho),
                exterior_derivative(whitney(rho)),
                scale(k + 1, alternator_form(rho, n)),
            )
            if k >= 1:
                report.check_equal(
                    "whitney-dependence",
                    str(rho),
                    total(
                        (
                            scale(
                                eps(p, rho.minus(p)),
                                wedge(lam(p, n), whitney(rho.minus(p))),
                            )
                            for p in rho
                        ),
                        n,
                        k - 1,
                    ),
                    NormalForm(n, k - 1),
                )
            for q in range(n + 1):
                if q in rho:
                    continue
                lhs = scale(eps(q, rho), whitney(rho.plus(q)))
                rhs = wedge(lam(q, n), alternator_form(rho, n)) - wedge(
                    dlam(q, n), whitney(rho)
                )
                report.check_equal("whitney-product", "{} q={}".format(rho, q), lhs, rhs)

        for s in enum_alternators(1, k, 0, n):
            converse = total(
                (
                    scale(eps(q, s), whitney(Alternator(s.image, n, 0).plus(q)))
                    for q in range(n + 1)
                    if q not in s
                ),
                n,
                k,
            )
            report.check_equal("alternator-converse", str(s), alternator_form(s, n), converse)
            for p in s:
                split = scale(
                    eps(p, s.minus(p)), wedge(dlam(p, n), alternator_form(s.minus(p), n))
                )
                report.check_equal(
                    "alternator-split", "{} p={}".format(s, p), alternator_form(s, n), split
                )

    for r in range(0, r_max + 1):
        for k in range(0, n + 1):
            for alpha in enum_multiindices(r, 0, n):
                for s in sigma(k, n):
                    term = make_term(alpha, s, n)
                    report.check_equal(
                        "d-squared",
                        "{} {}".format(alpha, s),
                        exterior_derivative(exterior_derivative(term)),
                        NormalForm(n, k + 2),
                    )

    leibniz_degree = min(r_max, 2) if n <= 3 else -1
    terms = [
        make_term(alpha, s, n)
        for r in range(leibniz_degree + 1)
        for k in range(n + 1)
        for alpha in enum_multiindices(r, 0, n)
        for s in enum_alternators(1, k, 1, n)
    ]
    for a, b in itertools.product(terms, repeat=2):
        if a.k + b.k > n:
            continue
        lhs = exterior_derivative(wedge(a, b))
        rhs = add(
            wedge(exterior_derivative(a), b),
            scale((-1) ** a.k, wedge(a, exterior_derivative(b))),
        )
        report.check_equal("leibniz", "{} | {}".format(render(a), render(b)), lhs, rhs)
        report.check_equal(
            "anticommutativity",
            "{} | {}".format(render(a), render(b)),
            wedge(a, b),
            scale((-1) ** (a.k * b.k), wedge(b, a)),
        )

    log.info("{!r}".format(report))
    return report


def restrict(omega, slots):
    """
    Pullback onto the face whose local vertex i is vertex ``slots[i]`` of
    the simplex: λ_i and dλ_i go to their face counterparts or to zero.
    """
    slots = tuple(slots)
    if any(a >= b for a, b in zip(slots, slots[1:])):
        raise Malformed("face slots must be strictly ascending: {!r}".format(slots))
    if not slots or slots[0] < 0 or slots[-1] > omega.n:
        raise OutOfRange("face slots {!r} not inside [0:{}]".format(slots, omega.n))
    m = len(slots) - 1
    dagger = {t: i for i, t in enumerate(slots)}
    if omega.k > m:
        return NormalForm(m, omega.k, omega.r)
    result = NormalForm(m, omega.k, omega.r)
    for (exp, image), value in omega.terms.items():
        if any(e and i not in dagger for i, e in enumerate(exp)):
            continue
        if any(i not in dagger for i in image):
            continue
        local = tuple(exp[t] for t in slots)
        result = add(
            result,
            make_term(local, tuple(dagger[i] for i in image), m, coefficient=value),
        )
    return result
