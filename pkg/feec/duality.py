"""
Integration over the simplex, the two duality pairings between
complementary form spaces, the coefficient isomorphisms behind them and
their sum-of-squares identities.

∫_T λ^α dλ_1∧...∧dλ_n = α!/(|α|+n)! fixes the volume normalization.
"""

import math
import logging
from fractions import Fraction

import numpy as np

from .base import DimensionMismatch, Report, ShapeMismatch, top_degree
from .combinatorics import (
    Alternator,
    MultiIndex,
    alternator_monomial,
    complement,
    enum_multiindices,
    eps,
    sigma,
)
from .forms import (
    BarycentricPoint,
    NormalForm,
    evaluate,
    make_term,
    monomial,
    scale,
    total,
    wedge,
    whitney,
)
from .matrix import ExactMatrix
from .spaces import SpaceId, basis, dimension, express, forms_matrix, realize


log = logging.getLogger("feec.duality")

PAIRS = ("first", "second")


def _check_which(which):
    if which not in PAIRS:
        raise ValueError("Not a valid pairing: {!r}".format(which))


@top_degree
def integrate(omega):
    """∫_T ω of an n-form"""
    n = omega.n
    result = Fraction(0)
    for (exp, _), value in omega.terms.items():
        numerator = 1
        for e in exp:
            numerator *= math.factorial(e)
        result += value * Fraction(numerator, math.factorial(sum(exp) + n))
    return result


def top_form(n):
    """φ_T = φ_{[0:n]}"""
    return whitney(Alternator(tuple(range(n + 1)), n, 0))


class CoefficientVector:
    """
    Coefficients v_{ασ} indexed by α ∈ A(r,n) and σ ∈ Σ(k,n).
    """

    def __init__(self, r, k, n, entries=None):
        self.r, self.k, self.n = r, k, n
        self.entries = {}
        keys = set(self.keys())
        for key, value in (entries or {}).items():
            key = (_exp(key[0]), _image(key[1]))
            if key not in keys:
                raise ShapeMismatch("{} is not an index of A({},{})xΣ({},{})".format(
                    key, r, n, k, n))
            value = Fraction(value)
            if value:
                self.entries[key] = value

    @staticmethod
    def index(r, k, n):
        return [(alpha, s) for alpha in enum_multiindices(r, 0, n) for s in sigma(k, n)]

    def keys(self):
        return [(alpha.exp, s.image) for alpha, s in self.index(self.r, self.k, self.n)]

    @classmethod
    def from_list(cls, r, k, n, values):
        keys = [(a.exp, s.image) for a, s in cls.index(r, k, n)]
        values = list(values)
        if len(values) != len(keys):
            raise ShapeMismatch(
                "expected {} coefficients, got {}".format(len(keys), len(values))
            )
        return cls(r, k, n, dict(zip(keys, values)))

    @classmethod
    def unit(cls, r, k, n, alpha, s):
        return cls(r, k, n, {(alpha, s): 1})

    @classmethod
    def random(cls, r, k, n, rng):
        """entries p/q with |p| <= 4 and 1 <= q <= 3 drawn from a numpy Generator"""
        keys = [(a.exp, s.image) for a, s in cls.index(r, k, n)]
        return cls(
            r,
            k,
            n,
            {
                key: Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
                for key in keys
            },
        )

    def to_list(self):
        return [self.entries.get(key, Fraction(0)) for key in self.keys()]

    def __getitem__(self, key):
        return self.entries.get((_exp(key[0]), _image(key[1])), Fraction(0))

    def __len__(self):
        return len(self.keys())

    def is_zero(self):
        return not self.entries

    def __repr__(self):
        return "{name}(r={o.r}, k={o.k}, n={o.n}, nonzero={count})".format(
            name=self.__class__.__name__, o=self, count=len(self.entries)
        )


def _exp(a):
    return a.exp if isinstance(a, MultiIndex) else tuple(a)


def _image(s):
    return s.image if isinstance(s, Alternator) else tuple(s)


def _terms(v):
    """(α, σ, σ^c, ε(σ,σ^c), value) over the nonzero entries"""
    for alpha, s in v.index(v.r, v.k, v.n):
        value = v[alpha, s]
        if not value:
            continue
        c = complement(s, v.n)
        yield alpha, s, c, eps(s, c), value


def source_form(which, v):
    """
    first:  Σ v λ^α dλ_σ in P_rΛ^k
    second: Σ ε(σ,σ^c) v λ^α φ_{σ^c} in P^-_{r+1}Λ^{n-k}
    """
    _check_which(which)
    n = v.n
    if which == "first":
        return total(
            (make_term(alpha, s, n, value) for alpha, s, _, _, value in _terms(v)),
            n,
            v.k,
            v.r,
        )
    return total(
        (
            scale(sign * value, wedge(monomial(alpha, n), whitney(c)))
            for alpha, s, c, sign, value in _terms(v)
        ),
        n,
        n - v.k,
        v.r + 1,
    )


def iso_first(v):
    """Σ ε(σ,σ^c) v λ^α λ_σ φ_{σ^c} in ringP^-_{r+k+1}Λ^{n-k}"""
    n = v.n
    return total(
        (
            scale(
                sign * value,
                wedge(monomial(alpha + alternator_monomial(s, n), n), whitney(c)),
            )
            for alpha, s, c, sign, value in _terms(v)
        ),
        n,
        n - v.k,
        v.r + v.k + 1,
    )


def iso_second(v):
    """Σ v λ^α λ_{σ^c} dλ_σ in ringP_{r+n-k+1}Λ^k"""
    n = v.n
    return total(
        (
            make_term(alpha + alternator_monomial(c, n), s, n, value)
            for alpha, s, c, _, value in _terms(v)
        ),
        n,
        v.k,
        v.r + n - v.k + 1,
    )


def iso(which, v):
    _check_which(which)
    return iso_first(v) if which == "first" else iso_second(v)


def representation_matrix(which, r, k, n):
    """columns: normal form coordinates of source_form of the unit vectors"""
    _check_which(which)
    columns = [
        source_form(which, CoefficientVector.unit(r, k, n, alpha, s))
        for alpha, s in CoefficientVector.index(r, k, n)
    ]
    if which == "first":
        return forms_matrix(columns, r, n, k)
    return forms_matrix(columns, r + 1, n, n - k)


def kernel_basis(which, r, k, n):
    """coefficient vectors spanning the kernel of source_form"""
    matrix = representation_matrix(which, r, k, n)
    return [CoefficientVector.from_list(r, k, n, v) for v in matrix.nullspace()]


def dependency_condition(which, form, v):
    """
    Whether v satisfies the recursive or the theta form of the linear
    conditions that characterize the kernel of source_form(which).
    """
    _check_which(which)
    if form not in ("recursive", "theta"):
        raise ValueError("Not a valid condition form: {!r}".format(form))
    r, k, n = v.r, v.k, v.n
    if which == "first" and form == "recursive":
        for alpha in enum_multiindices(r, 0, n):
            for s in sigma(k, n):
                if 0 in s:
                    continue
                value = v[alpha, s]
                for p in s:
                    rest = s.minus(p)
                    value -= eps(p, rest) * v[alpha, rest.plus(0)]
                if value:
                    return False
        return True
    if which == "first":
        for alpha in enum_multiindices(r, 0, n):
            for theta in sigma(k + 1, n):
                value = sum(
                    (eps(p, theta.minus(p)) * v[alpha, theta.minus(p)] for p in theta),
                    Fraction(0),
                )
                if value:
                    return False
        return True
    if form == "recursive":
        for alpha in enum_multiindices(r, 0, n):
            for s in sigma(k, n):
                low = complement(s, n).floor()
                if alpha.floor() < low:
                    continue
                value = v[alpha, s]
                for q in s:
                    if not alpha[q]:
                        continue
                    rest = s.minus(q)
                    value -= (
                        eps(low, rest)
                        * eps(q, rest)
                        * v[alpha.plus(low).minus(q), rest.plus(low)]
                    )
                if value:
                    return False
        return True
    for beta in enum_multiindices(r + 1, 0, n):
        for theta in sigma(k + 1, n):
            value = Fraction(0)
            for p in theta:
                if not beta[p]:
                    continue
                rest = theta.minus(p)
                value += eps(rest, p) * v[beta.minus(p), rest]
            if value:
                return False
    return True


def _theta_sum(v, theta, with_p):
    """Σ_α Σ_{p∈θ} ε(p,θ-p) λ^α (λ_p) v_{α,θ-p} as a 0-form"""
    n = v.n
    pieces = []
    for alpha in enum_multiindices(v.r, 0, n):
        for p in theta:
            rest = theta.minus(p)
            value = v[alpha, rest]
            if not value:
                continue
            exp = alpha.plus(p) if with_p else alpha
            pieces.append(make_term(exp, (), n, eps(p, rest) * value))
    return total(pieces, n, 0, v.r + (1 if with_p else 0))


def quadratic_forms(which, v):
    """(pairing integrand, sum-of-squares integrand) as n-forms"""
    _check_which(which)
    n, k = v.n, v.k
    phi = top_form(n)
    sign = (-1) ** k
    squares = []
    for theta in sigma(k + 1, n):
        if which == "first":
            weight = monomial(alternator_monomial(theta, n), n)
            inner = _theta_sum(v, theta, with_p=False)
        else:
            weight = monomial(alternator_monomial(complement(theta, n), n), n)
            inner = _theta_sum(v, theta, with_p=True)
        squares.append(wedge(wedge(weight, wedge(inner, inner)), phi))
    rhs = scale(sign, total(squares, n, n))
    if which == "first":
        lhs = wedge(source_form("first", v), iso_first(v))
    else:
        lhs = wedge(iso_second(v), source_form("second", v))
    return lhs, rhs


def quadratic_form(which, v):
    """(lhs, rhs) of the sum-of-squares identity, both exact rationals"""
    lhs, rhs = quadratic_forms(which, v)
    return integrate(lhs), integrate(rhs)


def quadratic_form_pointwise(which, v, x):
    """both integrands evaluated at x, as coefficients of dλ_1∧...∧dλ_n"""
    if not isinstance(x, BarycentricPoint):
        x = BarycentricPoint(x)
    lhs, rhs = quadratic_forms(which, v)
    top = Alternator(tuple(range(1, v.n + 1)), v.n, 1)
    return evaluate(lhs, x)[top], evaluate(rhs, x)[top]


def pairing_spaces(which, r, k, n):
    """(space of ω, space of η) of a pairing"""
    _check_which(which)
    if which == "first":
        return (
            SpaceId("P", r, k, n),
            SpaceId("Pminus", r + k + 1, n - k, n, ring=True),
        )
    return (
        SpaceId("P", r + n - k + 1, k, n, ring=True),
        SpaceId("Pminus", r + 1, n - k, n),
    )


def _pairing(which, omega, eta, r, check_membership):
    if omega.n != eta.n:
        raise ShapeMismatch(
            "forms on simplices of dimension {} and {}".format(omega.n, eta.n)
        )
    n = omega.n
    if omega.k + eta.k != n:
        raise ShapeMismatch(
            "form degrees {} and {} are not complementary in dimension {}".format(
                omega.k, eta.k, n
            )
        )
    if check_membership:
        left, right = pairing_spaces(which, r, omega.k, n)
        express(omega, left)
        express(eta, right)
    return integrate(wedge(omega, eta))


def pairing_first(omega, eta, r=None, check_membership=True):
    """∫_T ω∧η for ω ∈ P_rΛ^k, η ∈ ringP^-_{r+k+1}Λ^{n-k}"""
    r = omega.r if r is None else r
    return _pairing("first", omega, eta, r, check_membership)


def pairing_second(omega, eta, r=None, check_membership=True):
    """∫_T ω∧η for ω ∈ ringP_{r+n-k+1}Λ^k, η ∈ P^-_{r+1}Λ^{n-k}"""
    if r is None:
        r = max(eta.r - 1, 0)
    return _pairing("second", omega, eta, r, check_membership)


def gram_matrix(which, r, k, n):
    """pairing matrix between the bases of the two spaces, required square"""
    left, right = pairing_spaces(which, r, k, n)
    rows = [realize(t) for t in basis(left)]
    cols = [realize(t) for t in basis(right)]
    if len(rows) != len(cols):
        raise DimensionMismatch(
            "{} has dimension {} but {} has dimension {}".format(
                left, len(rows), right, len(cols)
            )
        )
    matrix = ExactMatrix(len(rows), len(cols))
    for i, omega in enumerate(rows):
        for j, eta in enumerate(cols):
            matrix[i, j] = integrate(wedge(omega, eta))
    log.info("gram matrix {} r={} k={} n={}: {!r}".format(which, r, k, n, matrix))
    return matrix


def verify_wedge_phi_identities(n):
    """
    dλ_σ ∧ φ_{ρ^c} in its three cases, and the symmetry, reflexive and
    exchange identities of dλ_σ ∧ ε(ρ,ρ^c) λ_ρ φ_{ρ^c}, for all σ, ρ ∈ Σ(k,n).
    """
    report = Report("wedge-phi")
    phi = top_form(n)
    for k in range(n + 1):
        for s in sigma(k, n):
            sc = complement(s, n)
            d_s = make_term(MultiIndex.zeros(0, n), s, n)
            lam_s = monomial(alternator_monomial(s, n), n)
            lam_sc = total((monomial(MultiIndex.unit(q, 0, n), n) for q in sc), n, 0)
            for rho in sigma(k, n):
                rc = complement(rho, n)
                instance = "k={} sigma={} rho={}".format(k, s, rho)
                lhs = wedge(d_s, whitney(rc))
                common = s.bracket() & rc.bracket()
                if len(common) > 1:
                    report.check_equal("wedge-phi-vanishing", instance, lhs, NormalForm(n, n))
                elif not common:
                    rhs = scale(
                        (-1) ** k * eps(s, sc),
                        wedge(lam_sc, phi),
                    )
                    report.check_equal("wedge-phi-disjoint", instance, lhs, rhs)
                else:
                    (p,) = common
                    (q,) = rho.bracket() - s.bracket()
                    rhs = scale(
                        (-1) ** (k + 1) * eps(rho, rc) * eps(p, s.minus(p)) * eps(q, s.minus(p)),
                        wedge(monomial(MultiIndex.unit(p, 0, n), n), phi),
                    )
                    report.check_equal("wedge-phi-single", instance, lhs, rhs)

                d_rho = make_term(MultiIndex.zeros(0, n), rho, n)
                lam_rho = monomial(alternator_monomial(rho, n), n)
                left = wedge(d_s, scale(eps(rho, rc), wedge(lam_rho, whitney(rc))))
                right = wedge(d_rho, scale(eps(s, sc), wedge(lam_s, whitney(sc))))
                report.check_equal("symmetry", instance, left, right)
                if rho == s:
                    rhs = scale(
                        (-1) ** k,
                        wedge(wedge(lam_s, lam_sc), phi),
                    )
                    report.check_equal("reflexive", instance, left, rhs)
                elif len(s.bracket() & rho.bracket()) == k - 1:
                    (p,) = s.bracket() - rho.bracket()
                    (q,) = rho.bracket() - s.bracket()
                    rhs = scale(
                        (-1) ** (k + 1) * eps(p, s.minus(p)) * eps(q, s.minus(p)),
                        wedge(wedge(lam_rho, monomial(MultiIndex.unit(p, 0, n), n)), phi),
                    )
                    report.check_equal("exchange", instance, left, rhs)
    report.logger.info("{!r}".format(report))
    return report


def _in_kernel(which, v):
    return source_form(which, v).is_zero()


def _sample_vectors(which, r, k, n, samples, rng):
    """kernel basis vectors, random kernel combinations and random vectors"""
    kernel = kernel_basis(which, r, k, n)
    vectors = list(kernel)
    for _ in range(samples):
        vectors.append(CoefficientVector.random(r, k, n, rng))
        if kernel:
            weights = [Fraction(int(rng.integers(-3, 4))) for _ in kernel]
            values = [
                sum((w * kv for w, kv in zip(weights, column)), Fraction(0))
                for column in zip(*(kv.to_list() for kv in kernel))
            ]
            vectors.append(CoefficientVector.from_list(r, k, n, values))
    return vectors


def verify_dependencies(which, r, k, n, samples=50, seed=0):
    """recursive condition ⇔ theta condition ⇔ kernel membership; iso keeps kernels"""
    rng = np.random.default_rng(seed)
    report = Report("dependencies-{}".format(which))
    target_space = pairing_spaces(which, r, k, n)[1 if which == "first" else 0]
    for i, v in enumerate(_sample_vectors(which, r, k, n, samples, rng)):
        instance = "{} r={} k={} n={} #{}".format(which, r, k, n, i)
        in_kernel = _in_kernel(which, v)
        recursive = dependency_condition(which, "recursive", v)
        theta = dependency_condition(which, "theta", v)
        report.record(
            "recursive-condition",
            instance,
            recursive == in_kernel,
            "recursive={} kernel={}".format(recursive, in_kernel),
        )
        report.record(
            "theta-condition",
            instance,
            theta == in_kernel,
            "theta={} kernel={}".format(theta, in_kernel),
        )
        image = iso(which, v)
        report.record(
            "iso-kernel",
            instance,
            image.is_zero() == in_kernel,
            "image zero={} kernel={}".format(image.is_zero(), in_kernel),
        )
    images = [
        iso(which, CoefficientVector.unit(r, k, n, alpha, s))
        for alpha, s in CoefficientVector.index(r, k, n)
    ]
    degree = target_space.r
    rank = forms_matrix(images, degree, n, target_space.k).rank()
    report.check_equal(
        "iso-rank", "{} r={} k={} n={}".format(which, r, k, n), rank, dimension(target_space)
    )
    return report


def sample_points(n, count, rng):
    """vertices, the barycenter and random interior points"""
    points = [BarycentricPoint.vertex(j, n) for j in range(n + 1)]
    points.append(BarycentricPoint([Fraction(1, n + 1)] * (n + 1)))
    while len(points) < count:
        weights = [int(rng.integers(1, 6)) for _ in range(n + 1)]
        points.append(BarycentricPoint([Fraction(w, sum(weights)) for w in weights]))
    return points[: max(count, 1)]


def verify_quadratic_forms(which, r, k, n, samples=50, seed=0, points=5):
    """lhs = rhs, the sign of lhs, its kernel, and the pointwise identity"""
    rng = np.random.default_rng(seed)
    report = Report("quadratic-{}".format(which))
    where = sample_points(n, points, rng)
    for i, v in enumerate(_sample_vectors(which, r, k, n, samples, rng)):
        instance = "{} r={} k={} n={} #{}".format(which, r, k, n, i)
        lhs_form, rhs_form = quadratic_forms(which, v)
        lhs, rhs = integrate(lhs_form), integrate(rhs_form)
        report.check_equal("sum-of-squares", instance, lhs, rhs)
        report.record("semidefinite", instance, (-1) ** k * lhs >= 0, "lhs={}".format(lhs))
        in_kernel = _in_kernel(which, v)
        report.record(
            "degeneracy",
            instance,
            (lhs == 0) == in_kernel,
            "lhs={} kernel={}".format(lhs, in_kernel),
        )
        if i < 2 * len(where):
            x = where[i % len(where)]
            top = Alternator(tuple(range(1, n + 1)), n, 1)
            report.check_equal(
                "pointwise",
                "{} at {!r}".format(instance, x),
                evaluate(lhs_form, x)[top],
                evaluate(rhs_form, x)[top],
            )
    return report


def verify_gram(r, k, n):
    """both Gram matrices are square with nonzero determinant"""
    report = Report("gram")
    for which in PAIRS:
        instance = "{} r={} k={} n={}".format(which, r, k, n)
        try:
            matrix = gram_matrix(which, r, k, n)
        except DimensionMismatch as error:
            report.record("gram-square", instance, False, str(error))
            continue
        report.record("gram-square", instance, True)
        det = matrix.det()
        report.record("gram-nonsingular", instance, det != 0, "det={}".format(det))
    return report


def pair_forms(which, omega, eta, **kwargs):
    _check_which(which)
    if which == "first":
        return pairing_first(omega, eta, **kwargs)
    return pairing_second(omega, eta, **kwargs)
