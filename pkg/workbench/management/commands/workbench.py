import argparse
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from workbench import serialization
from workbench.algebra import (
    FreeContext, PermutationContext, augmentation, convolve, coset_sums, push_forward,
    weighted_norm,
)
from workbench.cancellation import check_lemma_2_3
from workbench.conf import overrides
from workbench.exceptions import USAGE, VERIFICATION, NoSeparatingQuotient, WorkbenchError
from workbench.factorization import (
    all_geodesic_factorizations, factorization_from_factors, y_geodesic_factorization,
)
from workbench.freegroup import ball, multiply_all, parse_word
from workbench.groups import build_subgroup, coset_transversal, make_permutation, quotient_table
from workbench.ideals import (
    decompose_augmentation, express_in_J_generators, pull_back_generators, separate,
    telescope_certificate,
)
from workbench.lifting import FINITE_MODELS, builtin_model, extract_subgroup_expression, lift_ideal
from workbench.models import SuiteRun
from workbench.suites import SUITES, run_suite
from workbench.weights import RadialWeight, check_submultiplicative

logger = logging.getLogger(__name__)


def _positive(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
    if number <= 0:
        raise argparse.ArgumentTypeError(f"caps must be positive, got {number}")
    return number


def _word_list(value):
    return [part for part in value.split(',') if part.strip()]


class Command(BaseCommand):
    help = "Exact computations in weighted free group algebras and their finite quotients."

    def add_arguments(self, parser):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--group', help="group spec: inline JSON, a JSON file, a sample name or a builtin")
        common.add_argument('--weight', help="weight spec: inline JSON, a JSON file or radial:c")
        common.add_argument('--seed', type=int)
        common.add_argument('--cap-ball', type=_positive)
        common.add_argument('--cap-order', type=_positive)
        common.add_argument('--cap-bfs', type=_positive)
        common.add_argument('--format', choices=('json', 'text'), default='json')
        common.add_argument('--out', help="write the report to this file instead of stdout")

        elements = argparse.ArgumentParser(add_help=False)
        elements.add_argument('--rank', type=int, help="free rank of the elements (default: the group's, or 2)")
        elements.add_argument('--quotient', action='store_true',
                              help="read elements in the algebra of the group's finite image")

        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        def add(name, help_text, *parents):
            return subparsers.add_parser(name, help=help_text, parents=[common, *parents])

        sub = add('reduce', "freely reduce a word")
        sub.add_argument('word')
        sub.add_argument('--rank', type=int)

        sub = add('mul', "multiply words")
        sub.add_argument('words', nargs='+')
        sub.add_argument('--rank', type=int)

        sub = add('ball', "list the ball of reduced words")
        sub.add_argument('--rank', type=int, default=2)
        sub.add_argument('--radius', type=int, required=True)
        sub.add_argument('--punctured', action='store_true')

        add('group-info', "describe a homomorphism and its finite image")
        add('transversal', "left transversal of the subgroup")
        sub = add('ygens', "the generating set Y of the subgroup")
        sub.add_argument('--radius', default='auto')

        sub = add('weight-eval', "evaluate a weight")
        target = sub.add_mutually_exclusive_group(required=True)
        target.add_argument('--word')
        target.add_argument('--perm', help="comma-separated images of a permutation")
        sub.add_argument('--rank', type=int)

        sub = add('submult-check', "check submultiplicativity on a ball or a finite image")
        sub.add_argument('--rank', type=int, default=2)
        sub.add_argument('--radius', type=int, default=3)

        sub = add('conv', "convolve two elements", elements)
        sub.add_argument('f')
        sub.add_argument('g')

        for name, help_text in (('norm', "weighted l1 norm"), ('aug', "augmentation"),
                                ('coset-sums', "sums of f over the cosets of H"),
                                ('push', "push forward to the finite image"),
                                ('decompose', "decompose an augmentation-zero element on H"),
                                ('express', "express an element with vanishing coset sums")):
            sub = add(name, help_text, elements)
            sub.add_argument('f')

        for name, help_text in (('certificate', "telescoping certificate for delta_e - delta_u"),
                                ('lemma23', "cancellation checks on a geodesic Y-factorization")):
            sub = add(name, help_text)
            sub.add_argument('--u', required=True)
            sub.add_argument('--factors', type=_word_list, help="comma-separated Y words")
            sub.add_argument('--base')
        sub.add_argument('--all', action='store_true', help="check every geodesic factorization")

        add('pullback', "pull the J generators back to the finite image")

        sub = add('lift', "lift a left ideal of CH to CG on a finite model")
        sub.add_argument('--model', choices=FINITE_MODELS, required=True)
        sub.add_argument('--ideal', action='append', required=True, help="a generator of I; repeatable")

        sub = add('extract', "rewrite g = sum h_i f_i over the components of the f_i")
        sub.add_argument('--model', choices=FINITE_MODELS, required=True)
        sub.add_argument('--g', required=True)
        sub.add_argument('--pair', nargs=2, action='append', required=True, metavar=('H', 'F'))

        sub = add('separate', "find a finite quotient that separates an element from zero", elements)
        sub.add_argument('f')
        sub.add_argument('--family', default='grigorchuk')
        sub.add_argument('--max-level', type=_positive)
        sub.add_argument('--finite-set', type=_word_list)
        sub.add_argument('--base')

        sub = add('suite', "run a randomized verification suite")
        sub.add_argument('name', choices=sorted(SUITES))
        sub.add_argument('--record', action='store_true', help="store the run in the database")

        sub = add('history', "list recorded suite runs")
        sub.add_argument('--name')
        sub.add_argument('--limit', type=_positive, default=20)

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        logger.info("workbench %s", subcommand)
        handler = getattr(self, 'do_' + subcommand.replace('-', '_'))
        try:
            with overrides(BALL_CAP=options.get('cap_ball'), ORDER_CAP=options.get('cap_order'),
                           BFS_CAP=options.get('cap_bfs')):
                handler(options)
        except NoSeparatingQuotient as error:
            if error.result is not None:
                self.emit(serialization.separation_to_json(error.result), options)
            raise CommandError(str(error), returncode=error.exit_status)
        except WorkbenchError as error:
            raise CommandError(str(error), returncode=error.exit_status)

    # Output

    def emit(self, data, options):
        if options['format'] == 'text':
            text = serialization.render_text(data)
        else:
            text = serialization.dump_json(data)
        if options.get('out'):
            Path(options['out']).write_text(text + '\n', encoding='utf-8')
        else:
            self.stdout.write(text)

    def verified(self, passed, what):
        if not passed:
            raise CommandError(f"verification failed: {what}", returncode=VERIFICATION)

    # Inputs

    def group(self, options):
        if not options.get('group'):
            raise CommandError("this subcommand needs --group", returncode=USAGE)
        return serialization.load_group(options['group'])

    def context(self, options):
        """Element context and, when a group was given, its homomorphism."""
        hom = self.group(options)[0] if options.get('group') else None
        if options.get('quotient'):
            if hom is None:
                raise CommandError("--quotient needs --group", returncode=USAGE)
            return PermutationContext(hom.degree), hom
        rank = options.get('rank') or (hom.rank if hom else 2)
        return FreeContext(rank), hom

    def element(self, text, options):
        context, hom = self.context(options)
        return serialization.parse_element(text, context, hom)

    def weight(self, options, hom=None):
        weight = serialization.load_weight(options.get('weight'))
        if hom is not None and isinstance(weight, RadialWeight) and weight.table is None:
            weight = weight.on_quotient(quotient_table(hom))
        return weight

    def subgroup(self, options, radius='auto'):
        hom, mode = self.group(options)
        return build_subgroup(hom, mode, radius=radius)

    def cosets(self, options):
        """Transversal only, without Schreier generators or Y."""
        hom, mode = self.group(options)
        return coset_transversal(hom, mode)

    def factorization(self, sub, options):
        u = parse_word(options['u'], sub.rank)
        if options.get('factors'):
            factors = [parse_word(text, sub.rank) for text in options['factors']]
            return factorization_from_factors(sub, factors, u)
        return y_geodesic_factorization(sub, u)

    # Words and groups

    def do_reduce(self, options):
        word = parse_word(options['word'], options.get('rank'))
        self.emit({'input': options['word'], 'reduced': word.text, 'pretty': word.pretty,
                   'length': len(word)}, options)

    def do_mul(self, options):
        rank = options.get('rank') or max(parse_word(text).rank for text in options['words'])
        product = multiply_all([parse_word(text, rank) for text in options['words']], rank)
        self.emit({'factors': options['words'], 'product': product.text, 'pretty': product.pretty,
                   'length': len(product)}, options)

    def do_ball(self, options):
        found = ball(options['rank'], options['radius'])
        words = found.punctured() if options['punctured'] else found
        words = list(words)
        self.emit({'rank': options['rank'], 'radius': options['radius'], 'size': len(words),
                   'words': [w.text for w in words]}, options)

    def do_group_info(self, options):
        hom, mode = self.group(options)
        data = serialization.group_to_json(hom, mode)
        data['image'] = serialization.table_to_json(quotient_table(hom))
        self.emit(data, options)

    def do_transversal(self, options):
        sub = self.cosets(options)
        self.emit({'group': str(sub.hom), 'mode': serialization.mode_to_json(sub.mode),
                   'index': sub.index, 'transversal': [t.text for t in sub.transversal]}, options)

    def do_ygens(self, options):
        radius = options['radius']
        self.emit(serialization.subgroup_to_json(
            self.subgroup(options, radius if radius == 'auto' else int(radius))), options)

    # Weights

    def do_weight_eval(self, options):
        if options.get('perm'):
            hom = self.group(options)[0]
            element = make_permutation([int(point) for point in options['perm'].split(',')])
            weight = self.weight(options, hom)
            shown = list(element.array_form)
        else:
            element = parse_word(options['word'], options.get('rank'))
            weight = self.weight(options)
            shown = element.text
        self.emit({'element': shown, 'weight': weight.describe(), 'value': str(weight(element))}, options)

    def do_submult_check(self, options):
        if options.get('group'):
            hom = self.group(options)[0]
            domain = quotient_table(hom)
            weight = self.weight(options, hom)
        else:
            domain = ball(options['rank'], options['radius'])
            weight = self.weight(options)
        report = check_submultiplicative(weight, domain)
        self.emit({'weight': weight.describe(), **report.as_dict()}, options)
        self.verified(report.passed, "the weight is not submultiplicative")

    # Elements

    def do_conv(self, options):
        f = self.element(options['f'], options)
        g = self.element(options['g'], options)
        product = convolve(f, g)
        self.emit({'product': serialization.element_to_json(product),
                   'text': serialization.format_element(product)}, options)

    def do_norm(self, options):
        f = self.element(options['f'], options)
        hom = self.group(options)[0] if options.get('quotient') else None
        weight = self.weight(options, hom)
        self.emit({'weight': weight.describe(), **weighted_norm(f, weight).as_dict()}, options)

    def do_aug(self, options):
        f = self.element(options['f'], options)
        self.emit({'augmentation': serialization.coefficient_to_json(augmentation(f))}, options)

    def do_coset_sums(self, options):
        sub = self.cosets(options)
        f = self.element(options['f'], options)
        sums = coset_sums(f, sub)
        self.emit({'cosets': [
            {'representative': sub.transversal[position].text, 'sum': serialization.coefficient_to_json(value)}
            for position, value in sorted(sums.items())
        ]}, options)

    def do_push(self, options):
        hom = self.group(options)[0]
        image = push_forward(self.element(options['f'], options), hom)
        self.emit({'group': str(hom), 'image': serialization.element_to_json(image),
                   'text': serialization.format_element(image)}, options)

    # Ideals

    def do_certificate(self, options):
        sub = self.subgroup(options)
        certificate = telescope_certificate(sub, parse_word(options['u'], sub.rank),
                                            self.factorization(sub, options), base=options.get('base'))
        self.emit(serialization.certificate_to_json(certificate), options)
        if certificate.norm_bound is not None:
            self.verified(certificate.norm_bound.holds, "the prefix norm bound does not hold")

    def do_decompose(self, options):
        sub = self.subgroup(options)
        decomposition = decompose_augmentation(sub, self.element(options['f'], options))
        self.emit(serialization.decomposition_to_json(decomposition), options)
        self.verified(decomposition.bound_holds is not False, "the decomposition norm bound does not hold")

    def do_express(self, options):
        sub = self.subgroup(options)
        expression = express_in_J_generators(sub, self.element(options['f'], options))
        self.emit(serialization.expression_to_json(expression), options)

    def do_pullback(self, options):
        hom, mode = self.group(options)
        result = pull_back_generators(hom, mode)
        self.emit(serialization.pullback_to_json(result), options)
        self.verified(result.spans_ideal, "the pulled back generators do not span the ideal")

    def do_lift(self, options):
        model = builtin_model(options['model'])
        generators = [serialization.parse_element(text, model.context, model.table.hom)
                      for text in options['ideal']]
        lifted = lift_ideal(model, generators)
        self.emit(serialization.lifted_ideal_to_json(lifted), options)
        self.verified(lifted.verified, f"lifting the ideal in {model}")

    def do_extract(self, options):
        model = builtin_model(options['model'])
        hom = model.table.hom

        def read(text):
            return serialization.parse_element(text, model.context, hom)

        expression = [(read(h), read(f)) for h, f in options['pair']]
        result = extract_subgroup_expression(model, read(options['g']), expression)
        self.emit(serialization.subgroup_expression_to_json(result), options)

    def do_separate(self, options):
        f = self.element(options['f'], options)
        finite_set = [parse_word(text, f.context.rank) for text in options.get('finite_set') or ()]
        result = separate(f, family=options['family'], max_level=options.get('max_level'),
                          finite_set=finite_set, base=options.get('base'))
        self.emit(serialization.separation_to_json(result), options)
        self.verified(result.certified is not False, "the lower bound could not be certified")

    def do_lemma23(self, options):
        sub = self.subgroup(options)
        u = parse_word(options['u'], sub.rank)
        if options.get('all'):
            factorizations, truncated = all_geodesic_factorizations(sub, u)
        else:
            factorizations, truncated = [self.factorization(sub, options)], False
        reports = [check_lemma_2_3(sub, factorization) for factorization in factorizations]
        passed = all(report.passed for report in reports)
        self.emit({'u': u.text, 'truncated': truncated, 'passed': passed,
                   'reports': [report.as_dict() for report in reports]}, options)
        self.verified(passed, f"cancellation properties fail for {u.text}")

    # Suites

    def do_suite(self, options):
        report = run_suite(options['name'], seed=options.get('seed'))
        data = report.as_dict()
        if options['record']:
            run = SuiteRun.record(report)
            data['recorded_as'] = run.id
        self.emit(data, options)
        self.verified(report.passed, f"suite {report.name} has {report.failed} failed checks")

    def do_history(self, options):
        runs = SuiteRun.objects.all()
        if options.get('name'):
            runs = runs.filter(name=options['name'])
        self.emit({'runs': [run.summary() for run in runs[:options['limit']]]}, options)
