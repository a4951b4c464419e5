"""
Degrees of freedom φ(ω) = ∫_F η ∧ Tr_F ω and their global assembly.
"""

import logging
from dataclasses import dataclass

from .base import DimensionMismatch, NotSquare, Report, Singular, ShapeMismatch
from .duality import integrate
from .forms import NormalForm, wedge
from .matrix import ExactMatrix
from .simplicial import (
    GlobalForm,
    OrderedSimplex,
    as_simplex,
    global_basis,
    global_dimension,
    global_trace,
    trace,
)
from .spaces import SpaceId, SpanningTerm, basis, dimension, realize


log = logging.getLogger("feec.dof")


@dataclass(frozen=True)
class DofFunctional:
    """ω ↦ ∫_F η ∧ Tr_F ω with η a basis form of the weight space on F"""

    face: OrderedSimplex
    family: str
    r: int
    k: int
    term: SpanningTerm

    @property
    def weight(self):
        return realize(self.term)

    def __str__(self):
        return "{} {}".format(self.face, self.term)


def weight_space(family, r, k, m):
    """
    P^-_{r+k-m}Λ^{m-k} for family P, P_{r+k-m-1}Λ^{m-k} for family Pminus;
    None when the space is trivial for degree reasons
    """
    if m < k:
        return None
    if family == "P":
        degree = r + k - m
        if degree <= 0:
            return None
        return SpaceId("Pminus", degree, m - k, m)
    degree = r + k - m - 1
    if degree < 0:
        return None
    return SpaceId("P", degree, m - k, m)


def dof_basis(F, family, r, k):
    """one functional per basis form of the weight space on F"""
    F = as_simplex(F)
    space = weight_space(family, r, k, F.dim)
    if space is None:
        log.debug("no {} dofs on {} for r={} k={}".format(family, F, r, k))
        return []
    functionals = [DofFunctional(F, family, r, k, term) for term in basis(space)]
    expected = dimension(SpaceId(family, r, k, F.dim, ring=True))
    if len(functionals) != expected:
        raise DimensionMismatch(
            "{} dofs on {} but the trace-free space has dimension {}".format(
                len(functionals), F, expected
            )
        )
    return functionals


def apply_dof(phi, g, T=None):
    """
    ∫_F η ∧ Tr_F g for a global form, or for a local form on a cell T ⊇ F
    """
    if isinstance(g, GlobalForm):
        traced = global_trace(g.complex, g, phi.face, check=False)
    elif isinstance(g, NormalForm):
        if T is None:
            T = OrderedSimplex(tuple(range(g.n + 1)))
        traced = trace(g, phi.face, T)
    else:
        raise ShapeMismatch("cannot apply a dof to {!r}".format(g))
    if traced.k != phi.k:
        raise ShapeMismatch(
            "dof for {}-forms applied to a {}-form".format(phi.k, traced.k)
        )
    return integrate(wedge(phi.weight, traced))


def all_dofs(c, family, r, k):
    return [phi for F in c.all_faces() for phi in dof_basis(F, family, r, k)]


def global_dof_count(c, family, r, k):
    return len(all_dofs(c, family, r, k))


def dof_system(c, family, r, k):
    """(functionals, global basis, matrix of functional i on basis form j)"""
    s = SpaceId(family, r, k, c.n)
    rows = all_dofs(c, family, r, k)
    cols = global_basis(s, c)
    matrix = ExactMatrix(len(rows), len(cols))
    for i, phi in enumerate(rows):
        for j, (face, _, form) in enumerate(cols):
            if not face.is_face_of(phi.face):
                continue
            matrix[i, j] = apply_dof(phi, form)
    log.info(
        "dof matrix {} r={} k={} on {!r}: {!r}".format(family, r, k, c, matrix)
    )
    return rows, cols, matrix


def dof_matrix(c, family, r, k):
    """the square, nonsingular dof matrix of the global space"""
    _, _, matrix = dof_system(c, family, r, k)
    if matrix.rows != matrix.cols:
        raise NotSquare(
            "{} dofs for {} global basis forms".format(matrix.rows, matrix.cols)
        )
    if matrix.det() == 0:
        raise Singular("dof matrix of {} r={} k={} is singular".format(family, r, k))
    return matrix


def verify_unisolvence(c, family, r, k):
    """square, nonsingular, block triangular, and sized like the global space"""
    report = Report("unisolvence")
    instance = "{} r={} k={} {!r}".format(family, r, k, c)
    rows, cols, matrix = dof_system(c, family, r, k)
    s = SpaceId(family, r, k, c.n)
    report.check_equal("dof-count", instance, len(rows), global_dimension(s, c))
    square = report.record(
        "dof-square", instance, matrix.rows == matrix.cols,
        "{}x{}".format(matrix.rows, matrix.cols),
    )
    if square:
        det = matrix.det()
        report.record("dof-nonsingular", instance, det != 0, "det={}".format(det))
    off_block = [
        (i, j)
        for i, phi in enumerate(rows)
        for j, (face, _, form) in enumerate(cols)
        if not face.is_face_of(phi.face) and apply_dof(phi, form) != 0
    ]
    report.record(
        "block-triangular", instance, not off_block, "nonzero at {}".format(off_block[:3])
    )
    for F in c.all_faces():
        block_rows = [i for i, phi in enumerate(rows) if phi.face == F]
        block_cols = [j for j, (face, _, _) in enumerate(cols) if face == F]
        if not block_rows and not block_cols:
            continue
        if len(block_rows) != len(block_cols):
            report.record("diagonal-block", "{} {}".format(instance, F), False, "not square")
            continue
        block = ExactMatrix.from_rows(
            [[matrix[i, j] for j in block_cols] for i in block_rows], len(block_cols)
        )
        report.record(
            "diagonal-block", "{} {}".format(instance, F), block.det() != 0
        )
    return report
