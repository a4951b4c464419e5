import logging
import functools
from fractions import Fraction


log = logging.getLogger("feec.base")


class FEECError(Exception):
    """Base class of every error raised by feec"""


class InvalidRange(FEECError, ValueError):
    pass


class NotDisjoint(FEECError, ValueError):
    pass


class OutOfRange(FEECError, ValueError):
    pass


class Malformed(FEECError, ValueError):
    pass


class DegreeTooLow(FEECError):
    pass


class ShapeMismatch(FEECError):
    pass


class NotBarycentric(FEECError, ValueError):
    pass


class Unsupported(FEECError):
    pass


class NotInSpace(FEECError):
    pass


class NotAFace(FEECError):
    pass


class NonUniformDimension(FEECError, ValueError):
    pass


class IntersectionNotAFace(FEECError, ValueError):
    pass


class NotSingleValued(FEECError, ValueError):
    pass


class FaceNotInComplex(FEECError, ValueError):
    pass


class ResidueNotTraceFree(FEECError):
    pass


class NotTopDegree(FEECError):
    pass


class DimensionMismatch(FEECError):
    pass


class NotSquare(FEECError):
    pass


class Singular(FEECError):
    pass


def same_shape(check_k=True):
    """
    Decorator helper which ensures both form arguments live on the same
    simplex (and, optionally, have the same form degree) before func runs
    """

    def decorator(func):
        name = func.__name__

        @functools.wraps(func)
        def wrapper(omega, eta, *args, **kwargs):
            if omega.n != eta.n:
                raise ShapeMismatch(
                    "{}: simplex dimensions differ ({} != {})".format(
                        name, omega.n, eta.n
                    )
                )
            if check_k and omega.k != eta.k:
                raise ShapeMismatch(
                    "{}: form degrees differ ({} != {})".format(name, omega.k, eta.k)
                )
            return func(omega, eta, *args, **kwargs)

        return wrapper

    return decorator


def top_degree(func):
    """Decorator helper: the form argument must be an n-form"""

    @functools.wraps(func)
    def wrapper(omega, *args, **kwargs):
        if omega.k != omega.n:
            raise NotTopDegree(
                "{} needs a {}-form, got a {}-form".format(
                    func.__name__, omega.n, omega.k
                )
            )
        return func(omega, *args, **kwargs)

    return wrapper


def fstr(x):
    """exact fraction string: "p" or "p/q" """
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "{}/{}".format(x.numerator, x.denominator)


def to_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError) as error:
        raise Malformed("not an exact fraction: {!r}".format(text)) from error


class Report:
    """
    Outcome of a verification suite.

    Every checked instance is one entry ``(family, instance, ok, detail)``.
    A suite never raises on a failed identity: failures are entries.
    """

    def __init__(self, name):
        self.name = name
        self.entries = []
        self.logger = logging.getLogger("feec.report.{}".format(name))

    def record(self, family, instance, ok, detail=""):
        ok = bool(ok)
        self.entries.append((family, instance, ok, detail))
        if not ok:
            self.logger.warning("{} failed at {}: {}".format(family, instance, detail))
        return ok

    def check_equal(self, family, instance, lhs, rhs):
        ok = lhs == rhs
        detail = "" if ok else "{} != {}".format(lhs, rhs)
        return self.record(family, instance, ok, detail)

    def extend(self, other):
        self.entries.extend(other.entries)
        return self

    @property
    def passed(self):
        return all(ok for _, _, ok, _ in self.entries)

    @property
    def failures(self):
        return [e for e in self.entries if not e[2]]

    def coverage(self):
        """number of checked instances per identity family, in first-seen order"""
        counts = {}
        for family, _, _, _ in self.entries:
            counts[family] = counts.get(family, 0) + 1
        return counts

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return "{name}<{r.name!r}>(checked={n}, failed={f})".format(
            name=self.__class__.__name__,
            r=self,
            n=len(self.entries),
            f=len(self.failures),
        )
