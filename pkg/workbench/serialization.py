"""Reading and writing words, elements, groups, weights and reports.

Elements have a JSON form ({"terms": [{"word": ..., "coeff": ...}]}, or
"perm" keys in a quotient) and a text form such as "1 - t:ab + (1/2+3i)*t:bA".
"""
import json
import logging
import re
from fractions import Fraction
from pathlib import Path

from django.core.serializers.json import DjangoJSONEncoder

from .algebra import ONE, AlgebraElement, Coefficient, FreeContext, PermutationContext
from .exceptions import AlphabetMismatch, ParseError, UnknownName, WeightError
from .freegroup import parse_word
from .groups import (
    GroupHom, Kernel, Stabilizer, apply_hom, build_subgroup, builtin_hom,
    make_permutation, preimage_mode, quotient_table,
)
from .weights import InducedWeight, RadialWeight, RestrictedWeight, TableWeight

logger = logging.getLogger(__name__)

SAMPLES_DIR = Path(__file__).resolve().parent / 'samples'


# Coefficients and elements

def coefficient_to_json(value):
    return {'re': str(value.re), 'im': str(value.im)}


def coefficient_from_json(data):
    if isinstance(data, dict):
        try:
            return Coefficient(_exact(data.get('re', '0')), _exact(data.get('im', '0')))
        except (TypeError, ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {data!r}") from None
    if isinstance(data, float):
        raise ParseError(f"coefficient {data!r} must be exact, not a float")
    if isinstance(data, int):
        return Coefficient(data)
    return Coefficient.parse(str(data))


def _exact(value):
    if isinstance(value, float):
        raise ValueError("floats are not exact")
    return Fraction(value)


def element_to_json(f):
    terms = []
    for g, coefficient in f.items():
        key = 'word' if isinstance(f.context, FreeContext) else 'perm'
        value = g.text if key == 'word' else list(g.array_form)
        terms.append({key: value, 'coeff': coefficient_to_json(coefficient)})
    return {'terms': terms}


def element_from_json(data, context, hom=None):
    if not isinstance(data, dict) or not isinstance(data.get('terms'), list):
        raise ParseError("element JSON needs a 'terms' list")
    pairs = []
    for position, term in enumerate(data['terms']):
        if not isinstance(term, dict):
            raise ParseError(f"term {position} is not an object")
        coefficient = coefficient_from_json(term.get('coeff', 1))
        if 'word' in term:
            pairs.append((_word_atom(term['word'], context, hom, position), coefficient))
        elif 'perm' in term:
            pairs.append((_perm_atom(term['perm'], context, position), coefficient))
        else:
            raise ParseError(f"term {position} has neither 'word' nor 'perm'")
    return AlgebraElement(context, pairs)


def _word_atom(text, context, hom, offset):
    if isinstance(context, FreeContext):
        return parse_word(text, context.rank)
    if hom is None:
        raise ParseError("a word term in a quotient element needs the group", offset)
    return apply_hom(hom, parse_word(text, hom.rank))


def _perm_atom(images, context, offset):
    if not isinstance(context, PermutationContext):
        raise ParseError("permutation term in an element of a free group algebra", offset)
    try:
        permutation = make_permutation(images)
    except (TypeError, ValueError) as error:
        raise ParseError(str(error), offset) from None
    if permutation.size != context.degree:
        raise AlphabetMismatch(f"permutation of degree {permutation.size} in a degree-{context.degree} element")
    return permutation


_WHITESPACE = re.compile(r'\s*')
_COEFFICIENT = re.compile(r'\([^()]*\)|(?:\d+(?:/\d+)?)?i(?![A-Za-z:])|\d+(?:/\d+)?')
_ATOM = re.compile(r't:(?P<word>[A-Za-z]+|1)|p:(?P<perm>\d+(?:\s*,\s*\d+)*)|(?P<identity>e)(?![A-Za-z:])')


def parse_element(text, context, hom=None):
    """Element from JSON text or the term syntax; ParseError carries the offset."""
    stripped = text.strip()
    if stripped.startswith('{'):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as error:
            raise ParseError(f"malformed element JSON: {error.msg}", error.pos) from None
        return element_from_json(data, context, hom)

    pairs = []
    position = _skip(text, 0)
    if position == len(text):
        raise ParseError("empty element", position)
    if text.startswith('0', position) and _skip(text, position + 1) == len(text):
        return AlgebraElement.zero(context)
    sign = ONE
    if text[position] in '+-':
        sign = -ONE if text[position] == '-' else ONE
        position = _skip(text, position + 1)
    while True:
        coefficient = ONE
        match = _COEFFICIENT.match(text, position)
        atom = None
        if match:
            start = position
            try:
                coefficient = Coefficient.parse(match.group())
            except ParseError:
                raise ParseError(f"cannot read coefficient {match.group()!r}", start) from None
            position = _skip(text, match.end())
            if position < len(text) and text[position] == '*':
                position = _skip(text, position + 1)
            else:
                atom = context.identity
        if atom is None:
            match = _ATOM.match(text, position)
            if not match:
                raise ParseError("expected a term (t:WORD, p:i,j,..., e or a coefficient)", position)
            if match.group('word') is not None:
                atom = _word_atom(match.group('word'), context, hom, position)
            elif match.group('perm') is not None:
                images = [int(point) for point in match.group('perm').split(',')]
                atom = _perm_atom(images, context, position)
            else:
                atom = context.identity
            position = _skip(text, match.end())
        pairs.append((atom, sign * coefficient))
        if position == len(text):
            break
        if text[position] not in '+-':
            raise ParseError(f"unexpected {text[position]!r}", position)
        sign = -ONE if text[position] == '-' else ONE
        position = _skip(text, position + 1)
    return AlgebraElement(context, pairs)


def _skip(text, position):
    return _WHITESPACE.match(text, position).end()


def format_element(f):
    """Term syntax that parse_element reads back to the same element."""
    if not f:
        return '0'
    parts = []
    for g, coefficient in f.items():
        atom = f"t:{g.text}" if isinstance(f.context, FreeContext) else 'p:' + ','.join(map(str, g.array_form))
        if coefficient.im:
            negative = not coefficient.re and coefficient.im < 0
        else:
            negative = coefficient.re < 0
        magnitude = -coefficient if negative else coefficient
        text = atom if magnitude == ONE else f"{magnitude}*{atom}"
        if parts:
            parts.append(('- ' if negative else '+ ') + text)
        else:
            parts.append(('-' if negative else '') + text)
    return ' '.join(parts)


# Groups

def _load_json_source(spec, what):
    text = spec.strip()
    if text.startswith('{'):
        try:
            return json.loads(text)
        except json.JSONDecodeError as error:
            raise ParseError(f"malformed {what} JSON: {error.msg}", error.pos) from None
    for candidate in (Path(spec), SAMPLES_DIR / spec):
        if candidate.is_file():
            try:
                return json.loads(candidate.read_text(encoding='utf-8'))
            except json.JSONDecodeError as error:
                raise ParseError(f"malformed {what} JSON in {candidate}: {error.msg}", error.pos) from None
    return None


def mode_from_json(data, degree):
    if data in (None, 'kernel'):
        return Kernel()
    if isinstance(data, dict) and 'stabilizer' in data:
        point = int(data['stabilizer'])
        if not 0 <= point < degree:
            raise ParseError(f"stabilized point {point} outside 0..{degree - 1}")
        return Stabilizer(point)
    if isinstance(data, dict) and 'preimage' in data:
        return preimage_mode([make_permutation(images) for images in data['preimage']], degree)
    raise ParseError(f"unknown subgroup mode {data!r}")


def mode_to_json(mode):
    return mode.describe()


def group_from_json(data):
    """(hom, mode) from a group spec object."""
    if not isinstance(data, dict):
        raise ParseError("group spec must be a JSON object")
    if 'builtin' in data:
        hom = builtin_hom(data['builtin'])
    else:
        try:
            images = [make_permutation(images) for images in data['images']]
            hom = GroupHom(int(data['rank']), int(data['degree']), tuple(images), name=data.get('name', ''))
        except KeyError as error:
            raise ParseError(f"group spec is missing {error.args[0]!r}") from None
        except (TypeError, ValueError) as error:
            raise ParseError(f"bad group spec: {error}") from None
    return hom, mode_from_json(data.get('mode'), hom.degree)


def load_group(spec):
    """A group from inline JSON, a JSON file (also looked up among the samples) or a builtin name."""
    data = _load_json_source(spec, 'group')
    if data is None:
        return builtin_hom(spec.strip()), Kernel()
    return group_from_json(data)


def group_to_json(hom, mode=None):
    data = {
        'name': str(hom),
        'rank': hom.rank,
        'degree': hom.degree,
        'images': [list(image.array_form) for image in hom.generator_images],
    }
    if mode is not None:
        data['mode'] = mode_to_json(mode)
    return data


def subgroup_to_json(sub):
    return {
        'group': group_to_json(sub.hom, sub.mode),
        'index': sub.index,
        'normal': sub.is_normal,
        'transversal': [t.text for t in sub.transversal],
        'schreier_generators': [s.text for s in sub.schreier_gens],
        'radius': sub.radius,
        'Y': [y.text for y in sub.Y],
    }


def table_to_json(table):
    return {
        'group': str(table.hom),
        'order': table.order,
        'elements': [
            {'perm': list(g.array_form), 'length': length, 'word': word.text}
            for g, length, word in zip(table.elements, table.lengths, table.words)
        ],
    }


# Weights

def weight_from_json(data):
    if not isinstance(data, dict) or 'kind' not in data:
        raise WeightError("weight spec must be an object with a 'kind'")
    kind = data['kind']
    if kind == 'radial':
        table = None
        if 'group' in data:
            table = quotient_table(_group_of(data['group'])[0])
        return RadialWeight(data.get('base'), table)
    if kind == 'table':
        values = data.get('values')
        if not isinstance(values, dict):
            raise WeightError("table weight needs a 'values' object")
        if 'group' in data:
            hom, _ = _group_of(data['group'])
            table = quotient_table(hom)
            keyed = {apply_hom(hom, parse_word(word, hom.rank)): value for word, value in values.items()}
            return TableWeight(_exact_values(keyed), table)
        rank = data.get('rank')
        return TableWeight(_exact_values({parse_word(word, rank): value for word, value in values.items()}))
    if kind == 'induced':
        hom, _ = _group_of(data.get('group'))
        return InducedWeight(weight_from_json(data.get('parent')), hom)
    if kind == 'restricted':
        hom, mode = _group_of(data.get('group'))
        return RestrictedWeight(weight_from_json(data.get('parent')), build_subgroup(hom, mode))
    raise UnknownName(f"unknown weight kind {kind!r}")


def _exact_values(values):
    try:
        return {key: _exact(value) for key, value in values.items()}
    except (TypeError, ValueError, ZeroDivisionError):
        raise WeightError("table weight values must be exact rationals") from None


def _group_of(spec):
    if spec is None:
        raise WeightError("weight spec needs a 'group'")
    if isinstance(spec, str):
        return load_group(spec)
    return group_from_json(spec)


def load_weight(spec):
    """Radial weight of the configured base when spec is None; else inline JSON, a file or 'radial:c'."""
    if spec is None:
        return RadialWeight()
    if spec.startswith('radial:'):
        return RadialWeight(spec.partition(':')[2])
    data = _load_json_source(spec, 'weight')
    if data is None:
        raise UnknownName(f"no weight spec file or inline JSON {spec!r}")
    return weight_from_json(data)


# Reports

def certificate_to_json(certificate):
    bound = certificate.norm_bound
    return {
        'u': certificate.u.text,
        'factors': [y.text for y in certificate.factorization.factors],
        'geodesic': certificate.factorization.geodesic,
        'gens': [
            {'y': y.text, 'g_y': element_to_json(g), 'summands': [p.text for p in certificate.summands[y]]}
            for y, g in certificate.gens.items()
        ],
        'identity_checked': certificate.identity_checked,
        'norm_bound': None if bound is None else {
            'base': str(bound.base),
            'norm': str(bound.largest_norm),
            'bound': str(bound.bound),
            'norms': {y.text: str(value) for y, value in bound.norms.items()},
            'strictly_increasing': bound.strictly_increasing,
            'holds': bound.holds,
        },
    }


def decomposition_to_json(decomposition):
    return {
        'f': element_to_json(decomposition.f),
        'phi': [{'y': y.text, 'phi_y': element_to_json(phi)} for y, phi in decomposition.phi.items()],
        'identity_checked': decomposition.identity_checked,
        'norms': {y.text: str(value) for y, value in decomposition.norms.items()},
        'norm_bound': None if decomposition.norm_bound is None else str(decomposition.norm_bound),
        'bound_holds': decomposition.bound_holds,
    }


def expression_to_json(expression):
    return {
        'f': element_to_json(expression.f),
        'components': {str(i): element_to_json(part) for i, part in expression.components.items()},
        'psi': [{'y': y.text, 'psi_y': element_to_json(psi)} for y, psi in expression.psi.items()],
        'identity_checked': expression.identity_checked,
    }


def pullback_to_json(result):
    return {
        'subgroup': subgroup_to_json(result.sub),
        'generators': [{'y': y.text, 'element': element_to_json(element)} for y, element in result.generators],
        'degenerate': [y.text for y in result.degenerate],
        'spans_ideal': result.spans_ideal,
    }


def lifted_ideal_to_json(lifted):
    return {
        'model': str(lifted.model),
        'order': lifted.model.order,
        'index': lifted.model.index,
        'ideal_basis': [element_to_json(b) for b in lifted.ideal_basis],
        'J_generators': [
            {'coset': position, 'element': element_to_json(element)}
            for position, _, element in lifted.generators
        ],
        'dim_I': lifted.dim_I,
        'dim_J': lifted.dim_J,
        'codim_I': lifted.codim_I,
        'codim_J': lifted.codim_J,
        'codimension_holds': lifted.codimension_holds,
        'witnesses_checked': lifted.witnesses_checked,
        'witnesses_hold': lifted.witnesses_hold,
        'quotient_basis': [element_to_json(g) for g in lifted.quotient_basis],
        'quotient_basis_completes': lifted.quotient_basis_completes,
        'verified': lifted.verified,
    }


def subgroup_expression_to_json(expression):
    return {
        'g': element_to_json(expression.g),
        'terms': [
            {'coset': k, 'input': i, 'coefficient': element_to_json(c), 'component': element_to_json(f)}
            for k, i, c, f in expression.terms
        ],
        'identity_checked': expression.identity_checked,
    }


def separation_to_json(result):
    return {
        'f': element_to_json(result.f),
        'translated_by': result.translated_by.text,
        'finite_set': [s.text for s in result.finite_set],
        'family': result.family,
        'separated': result.separated,
        'level': result.level,
        'value': None if result.value is None else coefficient_to_json(result.value),
        'tried': [{'level': level, 'value': coefficient_to_json(value)} for level, value in result.tried],
        'tail': str(result.tail),
        'weighted_tail': str(result.weighted_tail),
        'meets_trivially': result.meets_trivially,
        'certified': result.certified,
    }


def render_text(data, indent=0):
    """Indented key: value rendering of a JSON-ready report."""
    pad = '  ' * indent
    lines = []
    if isinstance(data, dict):
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(data, list):
        for value in data:
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}-")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(value)}")
    else:
        lines.append(f"{pad}{_scalar(data)}")
    return '\n'.join(lines)


def _scalar(value):
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if value == [] or value == {}:
        return '(none)'
    return str(value)


def dump_json(data):
    return json.dumps(data, indent=2, ensure_ascii=False, cls=DjangoJSONEncoder)

