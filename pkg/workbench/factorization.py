"""Words in the subgroup generators Y: geodesic factorizations and Y-balls.

Searches run on the Cayley graph of H with respect to Y. Every y in Y has
|y|_X <= r, so ceil(|w^-1 u|_X / r) never overestimates the number of
factors still needed to get from w to u; it prunes both the best-first
distance search and the depth-first enumeration of geodesics.
"""
import heapq
import logging
from dataclasses import dataclass

from .conf import resolve_cap
from .exceptions import NotInSubgroup, ResourceCapExceeded, VerificationError
from .freegroup import identity, invert, multiply, multiply_all

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class YFactorization:
    u: object
    factors: tuple
    geodesic: bool = True

    @property
    def n(self):
        return len(self.factors)

    @property
    def x_expansions(self):
        """Letter sequences x_{i,1} ... x_{i,k_i} of the factors."""
        return tuple(y.letters for y in self.factors)

    @property
    def factor_lengths(self):
        return tuple(len(y) for y in self.factors)

    def prefixes(self):
        """y_1...y_j for j = 0..n, reduced."""
        current = identity(self.u.rank)
        result = [current]
        for y in self.factors:
            current = multiply(current, y)
            result.append(current)
        return tuple(result)

    def as_dict(self):
        return {
            'u': self.u.text,
            'factors': [y.text for y in self.factors],
            'n': self.n,
            'geodesic': self.geodesic,
        }


def _max_factor_length(sub):
    return max((len(y) for y in sub.Y), default=0)


def _lower_bound(word, target, reach):
    distance = len(multiply(invert(word), target))
    return -(-distance // reach)


def _require_member(sub, u):
    if u.rank != sub.rank:
        raise NotInSubgroup(f"{u.text} is a word over F_{u.rank}, not F_{sub.rank}")
    if not sub.contains(u):
        raise NotInSubgroup(f"{u.text} is not in {sub}")
    if not sub.Y and u.letters:
        raise NotInSubgroup(f"the generating set of {sub} is empty")


def y_length(sub, u, cap=None):
    """|u|_Y by best-first search with the admissible bound above."""
    _require_member(sub, u)
    cap = resolve_cap(cap, 'BFS_CAP')
    start = identity(sub.rank)
    if u == start:
        return 0
    reach = _max_factor_length(sub)
    best = {start: 0}
    heap = [(_lower_bound(start, u, reach), 0, 0, start)]
    pushed = 1
    expanded = 0
    while heap:
        _, negated, _, word = heapq.heappop(heap)
        steps = -negated
        if word == u:
            logger.debug("|%s|_Y = %d after expanding %d nodes", u.text, steps, expanded)
            return steps
        if steps > best[word]:
            continue
        expanded += 1
        if expanded > cap:
            raise ResourceCapExceeded('BFS_CAP', cap)
        for y in sub.Y:
            neighbour = multiply(word, y)
            if steps + 1 < best.get(neighbour, steps + 2):
                best[neighbour] = steps + 1
                estimate = steps + 1 + _lower_bound(neighbour, u, reach)
                heapq.heappush(heap, (estimate, -(steps + 1), pushed, neighbour))
                pushed += 1
    raise NotInSubgroup(f"{u.text} is not reachable from Y")


def _geodesics(sub, u, length, cap):
    """Yield every factorization of u into `length` factors, in canonical Y order."""
    reach = _max_factor_length(sub)
    dead_ends = set()
    path = []
    visited = 0

    def search(word, remaining):
        nonlocal visited
        if remaining == 0:
            if word == u:
                yield tuple(path)
            return
        if (word, remaining) in dead_ends:
            return
        visited += 1
        if visited > cap:
            raise ResourceCapExceeded('BFS_CAP', cap)
        found = False
        for y in sub.Y:
            neighbour = multiply(word, y)
            if _lower_bound(neighbour, u, reach) > remaining - 1:
                continue
            path.append(y)
            for factors in search(neighbour, remaining - 1):
                found = True
                yield factors
            path.pop()
        if not found:
            dead_ends.add((word, remaining))

    yield from search(identity(sub.rank), length)


def y_geodesic_factorization(sub, u, cap=None):
    """The first Y-geodesic factorization of u in canonical Y order."""
    cap = resolve_cap(cap, 'BFS_CAP')
    length = y_length(sub, u, cap)
    factors = next(_geodesics(sub, u, length, cap), None)
    if factors is None:
        raise VerificationError(f"search found |{u.text}|_Y = {length} but no factorization of that length")
    return YFactorization(u, factors, geodesic=True)


def all_geodesic_factorizations(sub, u, cap=None, bfs_cap=None):
    """Every Y-geodesic factorization of u, up to `cap` of them.

    Returns (factorizations, truncated).
    """
    cap = resolve_cap(cap, 'FACTORIZATION_CAP')
    bfs_cap = resolve_cap(bfs_cap, 'BFS_CAP')
    length = y_length(sub, u, bfs_cap)
    found = []
    for factors in _geodesics(sub, u, length, bfs_cap):
        if len(found) == cap:
            logger.debug("geodesic enumeration for %s truncated at %d", u.text, cap)
            return found, True
        found.append(YFactorization(u, factors, geodesic=True))
    return found, False


def factorization_from_factors(sub, factors, u=None, cap=None):
    """Wrap a user-supplied Y-word, checking the factors and flagging geodesicity."""
    factors = tuple(factors)
    members = set(sub.Y)
    for position, y in enumerate(factors):
        if y not in members:
            raise NotInSubgroup(f"factor {position + 1} ({y.text}) is not in Y")
    product = multiply_all(factors, sub.rank)
    if u is None:
        u = product
    elif product != u:
        raise VerificationError(f"factors multiply to {product.text}, not {u.text}")
    geodesic = y_length(sub, u, cap) == len(factors)
    return YFactorization(u, factors, geodesic=geodesic)


def y_ball(sub, radius, cap=None):
    """Elements u of H with |u|_Y <= radius, mapped to |u|_Y.

    Layers come out in order of Y-length, each layer in shortlex order.
    """
    cap = resolve_cap(cap, 'BFS_CAP')
    start = identity(sub.rank)
    lengths = {start: 0}
    layer = [start]
    for depth in range(1, radius + 1):
        discovered = set()
        for word in layer:
            for y in sub.Y:
                neighbour = multiply(word, y)
                if neighbour not in lengths and neighbour not in discovered:
                    discovered.add(neighbour)
        if len(lengths) + len(discovered) > cap:
            raise ResourceCapExceeded('BFS_CAP', cap, len(lengths) + len(discovered))
        layer = sorted(discovered)
        for word in layer:
            lengths[word] = depth
    logger.debug("Y-ball of radius %d in %s: %d elements", radius, sub, len(lengths))
    return lengths
