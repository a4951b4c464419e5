"""
Canonical spanning sets and bases of the polynomial differential form
spaces P_rΛ^k(T), P^-_rΛ^k(T) and their trace-free subspaces.
"""

import logging
import itertools
import dataclasses
from dataclasses import dataclass

from .base import (
    DegreeTooLow,
    InvalidRange,
    NotInSpace,
    Report,
    ShapeMismatch,
    Unsupported,
)
from .combinatorics import (
    Alternator,
    MultiIndex,
    enum_alternators,
    enum_multiindices,
    sigma,
    sigma0,
)
from .forms import (
    homogenize,
    make_term,
    monomial,
    restrict,
    storage_index,
    total,
    scale,
    wedge,
    whitney,
)
from .matrix import ExactMatrix


log = logging.getLogger("feec.spaces")

FAMILIES = ("P", "Pminus")


@dataclass(frozen=True)
class SpaceId:
    """
    One of P_rΛ^k(T^n), P^-_rΛ^k(T^n), or, with ring=True, the subspace
    of forms whose traces on all proper faces vanish.
    """

    family: str
    r: int
    k: int
    n: int
    ring: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidRange(
                "Not a valid space family: {!r} (expected one of {})".format(
                    self.family, ", ".join(FAMILIES)
                )
            )
        if self.n < 0:
            raise InvalidRange("simplex dimension must be >= 0, got {}".format(self.n))
        if not 0 <= self.k <= self.n:
            raise InvalidRange("form degree {} not in [0:{}]".format(self.k, self.n))
        if self.r < 0:
            raise InvalidRange("polynomial degree must be >= 0, got {}".format(self.r))

    @property
    def is_whitney(self):
        return self.family == "Pminus"

    def replace(self, **kwargs):
        return dataclasses.replace(self, **kwargs)

    def on(self, n):
        """same family and degrees on an n-simplex"""
        return self.replace(n=n)

    def full(self):
        return self.replace(ring=False)

    def trace_free(self):
        return self.replace(ring=True)

    def __str__(self):
        name = "{}P{}".format(
            "ring" if self.ring else "", "^-" if self.is_whitney else ""
        )
        return "{}_{}Λ^{}(T^{})".format(name, self.r, self.k, self.n)


@dataclass(frozen=True)
class SpanningTerm:
    """
    λ^α dλ_σ (kind "alternator") or λ^α φ_ρ (kind "whitney")
    """

    kind: str
    alpha: MultiIndex
    index: Alternator

    @property
    def n(self):
        return self.alpha.hi

    @property
    def k(self):
        return len(self.index) - (1 if self.kind == "whitney" else 0)

    @property
    def degree(self):
        return self.alpha.degree() + (1 if self.kind == "whitney" else 0)

    def __str__(self):
        name = "phi" if self.kind == "whitney" else "dl"
        return "l^{} {}{}".format(self.alpha, name, self.index)


def _alternator_term(alpha, s):
    return SpanningTerm("alternator", alpha, s)


def _whitney_term(alpha, rho):
    return SpanningTerm("whitney", alpha, rho)


def _covers(alpha, s, n):
    return alpha.bracket() | s.bracket() == frozenset(range(n + 1))


def _top_alternator(n):
    """dλ_1∧...∧dλ_n, the constant 1 when n = 0"""
    return _alternator_term(
        MultiIndex.zeros(0, n), Alternator(tuple(range(1, n + 1)), n, 1)
    )


def spanning_set(s):
    """the canonical spanning set of the space"""
    n, r, k = s.n, s.r, s.k
    if s.family == "P":
        if s.ring and r == 0:
            return [_top_alternator(n)] if k == n else []
        return [
            _alternator_term(alpha, sg)
            for alpha in enum_multiindices(r, 0, n)
            for sg in sigma(k, n)
            if not s.ring or _covers(alpha, sg, n)
        ]
    return [
        _whitney_term(alpha, rho)
        for alpha in enum_multiindices(r - 1, 0, n)
        for rho in sigma0(k, n)
        if not s.ring or _covers(alpha, rho, n)
    ]


def basis_b0(r, k, n):
    """{λ^α dλ_σ : α ∈ A(r,n), σ ∈ Σ(k,n), ⌊σ⌋ > 0}, a basis of P_rΛ^k for all r"""
    return [
        _alternator_term(alpha, sg)
        for alpha in enum_multiindices(r, 0, n)
        for sg in enum_alternators(1, k, 1, n)
    ]


def basis(s, strict=False):
    """
    The geometrically decomposable basis of the space.

    For P_0Λ^k with k >= 1 the decomposable index set is not a basis; the
    B_0 basis is returned instead unless ``strict`` is set.
    """
    n, r, k = s.n, s.r, s.k
    if s.family == "P":
        if r == 0:
            if s.ring:
                return spanning_set(s)
            if k >= 1:
                if strict:
                    raise Unsupported(
                        "no decomposable basis of {} (needs r >= 1)".format(s)
                    )
                log.debug("using the B_0 basis for {}".format(s))
                return basis_b0(r, k, n)
        return [
            t
            for t in spanning_set(s)
            if t.alpha.floor() not in t.index
        ]
    if s.ring:
        return [t for t in spanning_set(s) if t.index.floor() == 0]
    return [t for t in spanning_set(s) if t.alpha.floor() >= t.index.floor()]


def ring_basis_alternative(s):
    """the trace-free P basis described by ⌊α⌋ = min([0:n] ∖ [σ])"""
    if s.family != "P" or not s.ring:
        raise Unsupported("alternative description only for ring P spaces, not {}".format(s))
    if s.r == 0:
        return basis(s)
    result = []
    for t in spanning_set(s):
        rest = [i for i in range(s.n + 1) if i not in t.index]
        if rest and t.alpha.floor() == min(rest):
            result.append(t)
    return result


def realize(t):
    """the NormalForm of a spanning term"""
    if t.kind == "alternator":
        return make_term(t.alpha, t.index, t.n)
    return wedge(monomial(t.alpha, t.n), whitney(t.index))


def coeff_matrix(terms, degree, n=None, k=None):
    """columns are the normal form coordinates of the realized terms"""
    terms = list(terms)
    if terms:
        n = terms[0].n if n is None else n
        k = terms[0].k if k is None else k
    if n is None or k is None:
        raise ShapeMismatch("n and k are needed for an empty term list")
    too_high = [t for t in terms if t.degree > degree]
    if too_high:
        raise DegreeTooLow(
            "degree {} below term degree {}".format(degree, too_high[0].degree)
        )
    return forms_matrix([realize(t) for t in terms], degree, n, k)


def forms_matrix(forms, degree, n, k):
    index = storage_index(degree, k, n)
    columns = [homogenize(form, degree).coordinates(index) for form in forms]
    log.debug("coefficient matrix {}x{}".format(len(index), len(columns)))
    return ExactMatrix.from_columns(columns, len(index))


def span_rank(s, terms=None):
    terms = spanning_set(s) if terms is None else terms
    return coeff_matrix(terms, s.r, s.n, s.k).rank()


def dimension(s):
    """cardinality of the basis"""
    return len(basis(s))


def express(omega, s):
    """coefficients of omega along basis(s); NotInSpace when impossible"""
    if (omega.n, omega.k) != (s.n, s.k):
        raise ShapeMismatch(
            "a {}-form on T^{} cannot live in {}".format(omega.k, omega.n, s)
        )
    terms = basis(s)
    degree = max(omega.r, s.r)
    if not terms:
        if omega.is_zero():
            return []
        raise NotInSpace("{} is the zero space".format(s))
    matrix = coeff_matrix(terms, degree, s.n, s.k)
    rhs = homogenize(omega, degree).coordinates(storage_index(degree, s.k, s.n))
    solution = matrix.solve(rhs)
    if solution is None:
        raise NotInSpace("form is not in {}".format(s))
    return solution


def combine(coefficients, terms, s):
    """Σ c_i realize(t_i) as a form of the space"""
    return total(
        (scale(c, realize(t)) for c, t in zip(coefficients, terms) if c),
        s.n,
        s.k,
        s.r,
    )


def contains(omega, s):
    try:
        express(omega, s)
    except NotInSpace:
        return False
    return True


def proper_faces(n):
    """slot tuples of all proper faces of the n-simplex"""
    return [
        face
        for m in range(n)
        for face in itertools.combinations(range(n + 1), m + 1)
    ]


def trace_kernel(s):
    """forms of the full space whose traces to all proper faces vanish"""
    full = s.full()
    terms = basis(full)
    forms = [realize(t) for t in terms]
    blocks = []
    for face in proper_faces(s.n):
        m = len(face) - 1
        if s.k > m:
            continue
        traces = [restrict(form, face) for form in forms]
        blocks.append(forms_matrix(traces, s.r, m, s.k))
    if not blocks:
        return forms
    constraints = ExactMatrix.stack(blocks, len(forms))
    kernel = constraints.nullspace()
    log.debug("trace kernel of {}: {} forms".format(s, len(kernel)))
    return [combine(v, terms, full) for v in kernel]


def verify_bases(r, k, n):
    """
    Spanning sets and bases of both families and their trace-free
    subspaces: ranks, trace-freeness and the alternative ring description.
    """
    report = Report("bases")
    for family in FAMILIES:
        s = SpaceId(family, r, k, n)
        instance = str(s)
        terms = basis(s)
        size = len(terms)
        report.check_equal("span-rank", instance, span_rank(s), size)
        report.check_equal("basis-rank", instance, span_rank(s, terms), size)

        ring = s.trace_free()
        instance = str(ring)
        ring_terms = basis(ring)
        report.check_equal(
            "ring-basis-rank", instance, span_rank(ring, ring_terms), len(ring_terms)
        )
        report.check_equal(
            "ring-trace-kernel", instance, len(trace_kernel(ring)), len(ring_terms)
        )
        for t in ring_terms:
            form = realize(t)
            for face in proper_faces(n):
                if len(face) - 1 < k:
                    continue
                report.record(
                    "ring-trace-free",
                    "{} {} face={}".format(instance, t, face),
                    restrict(form, face).is_zero(),
                )
        if family == "P":
            alternative = ring_basis_alternative(ring)
            report.check_equal(
                "ring-alternative",
                instance,
                sorted(str(t) for t in alternative),
                sorted(str(t) for t in ring_terms),
            )
    log.info("{!r}".format(report))
    return report
