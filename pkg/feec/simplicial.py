"""
Simplicial complexes, traces, extension operators and the geometric
decomposition of conforming global forms.

Every simplex orders its vertices by ascending global id, so the induced
orderings of a shared face agree in every cell containing it.
"""

import json
import logging
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .base import (
    FaceNotInComplex,
    IntersectionNotAFace,
    Malformed,
    NonUniformDimension,
    NotAFace,
    NotInSpace,
    NotSingleValued,
    Report,
    ResidueNotTraceFree,
    ShapeMismatch,
    Unsupported,
)
from .combinatorics import Alternator, MultiIndex
from .forms import NormalForm, add, restrict, scale, storage_index
from .matrix import ExactMatrix
from .spaces import SpanningTerm, basis, combine, express, forms_matrix, realize


log = logging.getLogger("feec.simplicial")


@dataclass(frozen=True, order=True)
class OrderedSimplex:
    vertices: tuple

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if not vertices:
            raise Malformed("a simplex needs at least one vertex")
        if any(not isinstance(v, int) for v in vertices):
            raise Malformed("vertex ids must be integers: {!r}".format(vertices))
        if any(a >= b for a, b in zip(vertices, vertices[1:])):
            raise Malformed(
                "vertices must be strictly ascending: {!r}".format(vertices)
            )
        object.__setattr__(self, "vertices", vertices)

    @property
    def dim(self):
        return len(self.vertices) - 1

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def is_face_of(self, other):
        return set(self.vertices) <= set(other.vertices)

    def faces(self, dim=None):
        """all subsimplices (of one dimension when given), self included"""
        dims = range(self.dim + 1) if dim is None else [dim]
        return [
            OrderedSimplex(vertices)
            for m in dims
            for vertices in itertools.combinations(self.vertices, m + 1)
        ]

    def intersection(self, other):
        common = tuple(v for v in self.vertices if v in other.vertices)
        return OrderedSimplex(common) if common else None

    def __str__(self):
        return "[{}]".format(",".join(str(v) for v in self.vertices))


def as_simplex(x):
    return x if isinstance(x, OrderedSimplex) else OrderedSimplex(tuple(x))


@dataclass(frozen=True)
class InclusionMap:
    """ı(F,T): local vertex i of F is local vertex slots[i] of T"""

    face: OrderedSimplex
    cell: OrderedSimplex
    slots: tuple

    @property
    def entries(self):
        return Alternator(self.slots, self.cell.dim, 0)

    def __call__(self, i):
        return self.slots[i]

    def dagger(self, j):
        """ı†: a slot of T back to F, None outside the image"""
        try:
            return self.slots.index(j)
        except ValueError:
            return None


def inclusion(F, T):
    F, T = as_simplex(F), as_simplex(T)
    if not F.is_face_of(T):
        raise NotAFace("{} is not a subsimplex of {}".format(F, T))
    return InclusionMap(F, T, tuple(T.vertices.index(v) for v in F.vertices))


def trace(omega, F, T):
    """tr_{T,F} ω for a form on T"""
    F, T = as_simplex(F), as_simplex(T)
    if omega.n != T.dim:
        raise ShapeMismatch(
            "form on a {}-simplex traced from {}".format(omega.n, T)
        )
    return restrict(omega, inclusion(F, T).slots)


def _check_degree(s):
    if s.r < 1:
        raise Unsupported(
            "extensions and global spaces need r >= 1, got {}".format(s)
        )


def _face_space(s, F, ring):
    return s.replace(n=F.dim, ring=ring)


def _relabel(term, imap):
    """a spanning term on F as the corresponding term on T"""
    n = imap.cell.dim
    exp = [0] * (n + 1)
    for i, e in enumerate(term.alpha.exp):
        exp[imap(i)] = e
    index = Alternator(
        tuple(imap(i) for i in term.index.image), n, term.index.start
    )
    return SpanningTerm(term.kind, MultiIndex(tuple(exp), 0), index)


def ext_local(s, F, T, omega):
    """
    ext_{F,T} of a trace-free form on F, defined on the trace-free basis
    of F by relabeling indices through ı(F,T). Only family, r and k of
    ``s`` are used.
    """
    _check_degree(s)
    F, T = as_simplex(F), as_simplex(T)
    imap = inclusion(F, T)
    space = _face_space(s, F, True)
    coefficients = express(omega, space)
    terms = [_relabel(t, imap) for t in basis(space)]
    return combine(coefficients, terms, s.replace(n=T.dim, ring=False))


def ext_full(s, F, T, omega):
    """
    Extension of any form of the full space on F: decompose over the
    subfaces of F, extend every piece, sum.
    """
    _check_degree(s)
    F, T = as_simplex(F), as_simplex(T)
    if F == T:
        express(omega, _face_space(s, T, False))
        return omega
    space = _face_space(s, F, False)
    local = build_complex([F.vertices])
    pieces = geometric_decompose(space, local, GlobalForm(space, local, {F: omega}))
    result = NormalForm(T.dim, s.k, s.r)
    for face, piece in pieces.items():
        if piece:
            result = add(result, ext_local(s, face, T, piece))
    return result


class SimplicialComplex:
    """
    Top cells of one dimension together with their full face lattice.
    """

    def __init__(self, cells):
        self.cells = tuple(cells)
        self.n = self.cells[0].dim
        self.logger = log.getChild("complex")
        containing = {}
        for cell in self.cells:
            for face in cell.faces():
                containing.setdefault(face, []).append(cell)
        self._containing = containing
        self.faces = {m: [] for m in range(self.n + 1)}
        for face in sorted(containing, key=lambda f: (f.dim, f.vertices)):
            self.faces[face.dim].append(face)

    def all_faces(self):
        return [face for m in range(self.n + 1) for face in self.faces[m]]

    def cells_containing(self, F):
        F = as_simplex(F)
        if F not in self._containing:
            raise FaceNotInComplex("{} is not a face of the complex".format(F))
        return list(self._containing[F])

    def shared_faces(self):
        return [F for F in self.all_faces() if len(self._containing[F]) > 1]

    def __contains__(self, F):
        return as_simplex(F) in self._containing

    def counts(self):
        """number of faces per dimension"""
        return [len(self.faces[m]) for m in range(self.n + 1)]

    def __repr__(self):
        return "{name}(n={o.n}, cells={cells}, faces={counts})".format(
            name=self.__class__.__name__,
            o=self,
            cells=len(self.cells),
            counts=self.counts(),
        )


def build_complex(cells):
    """the complex generated by a list of ascending vertex lists"""
    cells = list(cells)
    if not cells:
        raise NonUniformDimension("a complex needs at least one cell")
    simplices = []
    for i, vertices in enumerate(cells):
        try:
            simplices.append(OrderedSimplex(tuple(vertices)))
        except Malformed as error:
            raise Malformed("cell {}: {}".format(i, error)) from error
    dims = {s.dim for s in simplices}
    if len(dims) != 1:
        raise NonUniformDimension(
            "cells of mixed dimensions {}".format(sorted(dims))
        )
    if len(set(simplices)) != len(simplices):
        raise Malformed("repeated cells in {!r}".format(cells))
    complex_ = SimplicialComplex(simplices)
    for (i, a), (j, b) in itertools.combinations(enumerate(simplices), 2):
        common = a.intersection(b)
        if common is not None and common not in complex_:
            raise IntersectionNotAFace(
                "cells {} and {} meet in {}, which is not a face".format(i, j, common)
            )
    complex_.logger.debug("built {!r}".format(complex_))
    return complex_


def load_mesh(path):
    """read ``{"cells": [[...], ...]}`` from a JSON file"""
    with open(path) as stream:
        try:
            document = json.load(stream)
        except ValueError as error:
            raise Malformed("{}: not JSON ({})".format(path, error)) from error
    if not isinstance(document, dict) or not isinstance(document.get("cells"), list):
        raise Malformed("{}: expected an object with a 'cells' list".format(path))
    return build_complex(document["cells"])


class GlobalForm:
    """
    One form per top cell; traces from all cells agree on shared faces.
    """

    def __init__(self, space, complex_, per_cell, check_membership=True):
        self.space = space
        self.complex = complex_
        per_cell = {as_simplex(T): omega for T, omega in per_cell.items()}
        missing = [T for T in complex_.cells if T not in per_cell]
        for T in missing:
            per_cell[T] = NormalForm(complex_.n, space.k, space.r)
        unknown = [T for T in per_cell if T not in complex_.cells]
        if unknown:
            raise FaceNotInComplex("{} is not a cell of the complex".format(unknown[0]))
        for T, omega in per_cell.items():
            if (omega.n, omega.k) != (complex_.n, space.k):
                raise ShapeMismatch(
                    "cell {} carries a {}-form on a {}-simplex".format(T, omega.k, omega.n)
                )
            if check_membership:
                express(omega, space.replace(n=complex_.n, ring=False))
        self.per_cell = per_cell
        self._check_single_valued()

    @classmethod
    def _trusted(cls, space, complex_, per_cell):
        """a sum or multiple of single-valued forms needs no revalidation"""
        g = cls.__new__(cls)
        g.space, g.complex, g.per_cell = space, complex_, per_cell
        return g

    def _check_single_valued(self):
        for F in self.complex.shared_faces():
            if F.dim < self.space.k:
                continue
            cells = self.complex.cells_containing(F)
            first = trace(self.per_cell[cells[0]], F, cells[0])
            for T in cells[1:]:
                if trace(self.per_cell[T], F, T) != first:
                    raise NotSingleValued(
                        "traces on {} from {} and {} differ".format(F, cells[0], T)
                    )

    def __getitem__(self, T):
        return self.per_cell[as_simplex(T)]

    def _combine(self, other, factor):
        if other.complex is not self.complex:
            raise ShapeMismatch("global forms live on different complexes")
        return GlobalForm._trusted(
            self.space,
            self.complex,
            {
                T: add(omega, scale(factor, other.per_cell[T]))
                for T, omega in self.per_cell.items()
            },
        )

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rmul__(self, c):
        return GlobalForm._trusted(
            self.space,
            self.complex,
            {T: scale(c, omega) for T, omega in self.per_cell.items()},
        )

    def is_zero(self):
        return all(omega.is_zero() for omega in self.per_cell.values())

    def __eq__(self, other):
        if not isinstance(other, GlobalForm):
            return NotImplemented
        return self.complex is other.complex and all(
            self.per_cell[T] == other.per_cell[T] for T in self.complex.cells
        )

    __hash__ = None

    def __repr__(self):
        return "{name}({space}, cells={cells})".format(
            name=self.__class__.__name__, space=self.space, cells=len(self.per_cell)
        )


def global_trace(c, g, F, check=True):
    """
    Trace through the first cell containing F. With ``check`` the traces
    from every other cell containing F must agree, else NotSingleValued.
    """
    F = as_simplex(F)
    cells = c.cells_containing(F)
    result = trace(g[cells[0]], F, cells[0])
    if check:
        for T in cells[1:]:
            if trace(g[T], F, T) != result:
                raise NotSingleValued("traces on {} disagree".format(F))
    return result


def global_extend(s, c, F, omega):
    """Ext_F: ext_{F,T} into every cell T ⊇ F, zero elsewhere"""
    _check_degree(s)
    F = as_simplex(F)
    c.cells_containing(F)
    per_cell = {}
    for T in c.cells:
        if F.is_face_of(T):
            per_cell[T] = ext_local(s, F, T, omega)
        else:
            per_cell[T] = NormalForm(c.n, s.k, s.r)
    return GlobalForm(s.replace(n=c.n, ring=False), c, per_cell, check_membership=False)


def geometric_decompose(s, c, g):
    """
    The unique trace-free pieces ω_F with g = Σ_F Ext_F ω_F, found face
    dimension by face dimension.
    """
    _check_degree(s)
    residual = g
    pieces = {}
    for m in range(s.k, c.n + 1):
        for F in c.faces[m]:
            piece = global_trace(c, residual, F, check=False)
            try:
                express(piece, _face_space(s, F, True))
            except NotInSpace as error:
                raise ResidueNotTraceFree(
                    "residual trace on {} is not trace-free".format(F)
                ) from error
            pieces[F] = piece
            if piece:
                residual = residual - global_extend(s, c, F, piece)
        c.logger.debug("decomposed dimension {} faces".format(m))
    if not residual.is_zero():
        raise ResidueNotTraceFree("nonzero residual after the top dimension")
    return pieces


def reassemble(s, c, pieces):
    """Σ_F Ext_F ω_F"""
    result = GlobalForm(s.replace(n=c.n, ring=False), c, {}, check_membership=False)
    for F, piece in pieces.items():
        if piece:
            result = result + global_extend(s, c, F, piece)
    return result


def global_basis(s, c):
    """[(face, trace-free basis term, Ext_F of it)] ordered by face"""
    _check_degree(s)
    result = []
    for F in c.all_faces():
        if F.dim < s.k:
            continue
        for term in basis(_face_space(s, F, True)):
            result.append((F, term, global_extend(s, c, F, realize(term))))
    return result


def global_dimension(s, c):
    """nullity of the single-valuedness constraints on cellwise bases"""
    _check_degree(s)
    local = basis(s.replace(n=c.n, ring=False))
    forms = [realize(t) for t in local]
    size = len(forms)
    offsets = {T: i * size for i, T in enumerate(c.cells)}
    unknowns = size * len(c.cells)
    blocks = []
    for F in c.shared_faces():
        if F.dim < s.k:
            continue
        cells = c.cells_containing(F)
        first = cells[0]
        traces = {
            T: forms_matrix([trace(f, F, T) for f in forms], s.r, F.dim, s.k)
            for T in cells
        }
        for T in cells[1:]:
            block = ExactMatrix(traces[first].rows, unknowns)
            block.data[:, offsets[first] : offsets[first] + size] = traces[first].data
            block.data[:, offsets[T] : offsets[T] + size] = -traces[T].data
            blocks.append(block)
    if not blocks:
        return unknowns
    return ExactMatrix.stack(blocks, unknowns).nullity()


def verify_extension_axioms(s, T=None):
    """
    Right inverse, compatibility, locality and ext_full consistency over
    all face pairs of one simplex.
    """
    _check_degree(s)
    T = OrderedSimplex(tuple(range(s.n + 1))) if T is None else as_simplex(T)
    report = Report("extension")
    faces = [F for F in T.faces() if F.dim >= s.k]
    for F in faces:
        for term in basis(_face_space(s, F, True)):
            b = realize(term)
            extended = ext_local(s, F, T, b)
            instance = "{} {} {}".format(F, T, term)
            report.check_equal("right-inverse", instance, trace(extended, F, T), b)
            for G in faces:
                if F.is_face_of(G):
                    report.check_equal(
                        "compatibility",
                        "{} G={}".format(instance, G),
                        trace(extended, G, T),
                        ext_local(s, F, G, b),
                    )
                else:
                    report.check_equal(
                        "locality",
                        "{} G={}".format(instance, G),
                        trace(extended, G, T),
                        NormalForm(G.dim, s.k, s.r),
                    )
        for term in basis(_face_space(s, F, False)):
            omega = realize(term)
            extended = ext_full(s, F, T, omega)
            instance = "{} {} {}".format(F, T, term)
            for G in faces:
                common = F.intersection(G)
                if common is None or common.dim < s.k:
                    expected = NormalForm(G.dim, s.k, s.r)
                else:
                    expected = ext_full(s, common, G, trace(omega, common, F))
                report.check_equal(
                    "ext-full-consistency",
                    "{} G={}".format(instance, G),
                    trace(extended, G, T),
                    expected,
                )
    report.logger.info("{!r}".format(report))
    return report


def form_coordinates(omega):
    """(exp, image, coefficient) triples in normal-form coordinates"""
    index = storage_index(omega.r, omega.k, omega.n)
    return [
        (exp, image, value)
        for (exp, image), value in zip(index, omega.coordinates(index))
        if value
    ]


def _random_combination(forms, rng):
    return [Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in forms]


def random_global_form(s, c, rng):
    """a random rational combination of the global basis"""
    _check_degree(s)
    space = s.replace(n=c.n, ring=False)
    result = GlobalForm(space, c, {}, check_membership=False)
    columns = global_basis(s, c)
    for (_, _, form), weight in zip(columns, _random_combination(columns, rng)):
        if weight:
            result = result + weight * form
    return result


def verify_decomposition(s, c, samples=25, seed=0):
    """
    geometric_decompose and reassemble are mutually inverse on random
    conforming forms and on random trace-free pieces.
    """
    _check_degree(s)
    rng = np.random.default_rng(seed)
    report = Report("decomposition")
    prefix = "{} r={} k={} {!r}".format(s.family, s.r, s.k, c)
    for i in range(samples):
        instance = "{} #{}".format(prefix, i)
        g = random_global_form(s, c, rng)
        pieces = geometric_decompose(s, c, g)
        report.check_equal("decompose-reassemble", instance, reassemble(s, c, pieces), g)

        chosen = {}
        for F in c.all_faces():
            if F.dim < s.k:
                continue
            space = _face_space(s, F, True)
            terms = basis(space)
            chosen[F] = combine(_random_combination(terms, rng), terms, space.full())
        again = geometric_decompose(s, c, reassemble(s, c, chosen))
        report.record(
            "reassemble-decompose",
            instance,
            all(again[F] == piece for F, piece in chosen.items()),
        )
    c.logger.info("{!r}".format(report))
    return report
