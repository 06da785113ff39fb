"""Exact linear algebra over Q(i) for finite-dimensional group algebras."""
import logging
from fractions import Fraction

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .algebra import Coefficient

logger = logging.getLogger(__name__)


def to_domain(value):
    value = Coefficient.coerce(value)
    return QQ_I(QQ(value.re.numerator, value.re.denominator),
                QQ(value.im.numerator, value.im.denominator))


def from_domain(value):
    return Coefficient(_fraction(value.x), _fraction(value.y))


def _fraction(rational):
    return Fraction(int(rational.numerator), int(rational.denominator))


def coordinate_matrix(elements, basis):
    """Matrix whose columns are the coordinates of the elements in the given basis.

    basis is a sequence of group elements; an element supported outside it
    raises ValueError.
    """
    position = {g: i for i, g in enumerate(basis)}
    rows = [[QQ_I.zero for _ in elements] for _ in basis]
    for column, element in enumerate(elements):
        for g, coefficient in element.terms.items():
            if g not in position:
                raise ValueError(f"support element {element.context.show(g)} is outside the basis")
            rows[position[g]][column] = to_domain(coefficient)
    return DomainMatrix(rows, (len(basis), len(elements)), QQ_I)


def rank(elements, basis):
    """Dimension of the span of the elements."""
    if not elements:
        return 0
    return coordinate_matrix(elements, basis).rank()


def solve_in_span(elements, target, basis):
    """Coefficients c with sum c_i * elements[i] = target, or None if target is not in the span.

    Free variables are set to zero, so the answer is the one read off the
    reduced row echelon form.
    """
    columns = list(elements) + [target]
    matrix = coordinate_matrix(columns, basis)
    reduced, pivots = matrix.rref()
    last = len(elements)
    if last in pivots:
        return None
    rows = reduced.to_list()
    solution = [Coefficient() for _ in elements]
    for row, column in enumerate(pivots):
        solution[column] = from_domain(rows[row][last])
    return solution


def span_basis(elements, basis):
    """A maximal linearly independent sublist, keeping the earliest elements."""
    if not elements:
        return []
    _, pivots = coordinate_matrix(elements, basis).rref()
    return [elements[column] for column in pivots]
