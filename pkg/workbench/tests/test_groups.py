from django.test import SimpleTestCase

from workbench.conf import overrides
from workbench.exceptions import ResourceCapExceeded, UnknownName
from workbench.freegroup import ball, parse_word
from workbench.groups import (
    Kernel, Stabilizer, apply_hom, build_subgroup, builtin_hom, coset_transversal,
    cycle_permutation, grigorchuk_level_hom, make_permutation, preimage_mode, quotient_family,
    quotient_table, schreier_generators,
)


def texts(words):
    return [w.text for w in words]


class HomomorphismTestCase(SimpleTestCase):

    def test_word_images_compose_left_to_right(self):
        """Test apply_hom(uv) = apply_hom(u) * apply_hom(v)"""
        hom = builtin_hom('sym3')
        for u in ball(2, 2):
            for v in ball(2, 1):
                self.assertEqual(apply_hom(hom, u * v), apply_hom(hom, u) * apply_hom(hom, v))

    def test_inverse_letters_map_to_inverses(self):
        """Test the image of A is the inverse of the image of a"""
        hom = builtin_hom('sym3')
        self.assertTrue(apply_hom(hom, parse_word('bB', 2)).is_Identity)
        self.assertEqual(apply_hom(hom, parse_word('B', 2)), ~hom.generator_images[1])

    def test_make_permutation_rejects_non_permutations(self):
        """Test that repeated images are refused"""
        with self.assertRaises(ValueError):
            make_permutation([0, 0, 1])
        self.assertEqual(cycle_permutation(3, (0, 1, 2)).array_form, [1, 2, 0])

    def test_unknown_builtin(self):
        """Test that an unknown group name is reported"""
        with self.assertRaises(UnknownName):
            builtin_hom('monster')
        with self.assertRaises(UnknownName):
            quotient_family('lamplighter')


class TransversalTestCase(SimpleTestCase):

    def test_even_length_kernel(self):
        """Test the kernel of F_2 -> Z/2 has transversal {e, a}"""
        sub = coset_transversal(builtin_hom('even2'), Kernel())
        self.assertEqual(sub.index, 2)
        self.assertEqual(texts(sub.transversal), ['1', 'a'])
        self.assertTrue(sub.contains(parse_word('ab', 2)))
        self.assertFalse(sub.contains(parse_word('aba', 2)))

    def test_stabilizer_prefers_shorter_representative(self):
        """Test the stabilizer of 0 under a -> (0 1 2) picks A over aa"""
        sub = coset_transversal(builtin_hom('cycle3'), Stabilizer(0))
        self.assertEqual(texts(sub.transversal), ['1', 'a', 'A'])
        self.assertEqual(sub.representative(parse_word('aa', 2)).text, 'A')

    def test_cosets_partition_the_ball(self):
        """Test every word lies in the coset of exactly one representative"""
        sub = coset_transversal(builtin_hom('sym3'), Stabilizer(0))
        self.assertEqual(sub.index, 3)
        for w in ball(2, 3):
            t = sub.representative(w)
            self.assertTrue(sub.contains(~t * w))

    def test_schreier_generators_of_even_kernel(self):
        """Test the Schreier generators of the even-length kernel"""
        sub = coset_transversal(builtin_hom('even2'), Kernel())
        gens = schreier_generators(sub)
        self.assertEqual(set(texts(gens)), {'AA', 'bA', 'BA', 'aa', 'ab', 'aB'})
        self.assertTrue(all(sub.contains(s) for s in gens))

    def test_index_one(self):
        """Test a trivial quotient: index 1, Y is the whole punctured ball"""
        sub = build_subgroup(builtin_hom('trivial:2'), Kernel())
        self.assertEqual(sub.index, 1)
        self.assertEqual(sub.radius, 1)
        self.assertEqual(texts(sub.Y), ['a', 'A', 'b', 'B'])

    def test_y_for_even_kernel(self):
        """Test Y = even nonempty words of length <= 2"""
        sub = build_subgroup(builtin_hom('even2'))
        self.assertEqual(sub.radius, 2)
        self.assertEqual(len(sub.Y), 12)
        self.assertTrue(all(len(y) == 2 for y in sub.Y))
        self.assertEqual(list(sub.Y), sorted(sub.Y))

    def test_normality(self):
        """Test kernels are normal and the stabilizer in Sym(3) is not"""
        self.assertTrue(build_subgroup(builtin_hom('klein')).is_normal)
        self.assertFalse(build_subgroup(builtin_hom('sym3'), Stabilizer(0)).is_normal)

    def test_preimage_mode(self):
        """Test the preimage of <(0 1)(2 3)> in the Klein four-group has index 2"""
        hom = builtin_hom('klein')
        mode = preimage_mode([hom.generator_images[0]], 4)
        sub = build_subgroup(hom, mode)
        self.assertEqual(sub.index, 2)
        self.assertTrue(sub.contains(parse_word('a', 2)))
        self.assertFalse(sub.contains(parse_word('b', 2)))

    def test_transversal_cap(self):
        """Test the order cap stops the coset search"""
        with self.assertRaises(ResourceCapExceeded):
            coset_transversal(builtin_hom('cyclic:12'), Kernel(), cap=5)

    def test_y_generates_the_subgroup_image(self):
        """Test products of Y reach every quotient element in the subgroup"""
        cases = [('even2', Kernel()), ('sym3', Stabilizer(0)), ('klein', Kernel())]
        for name, mode in cases:
            sub = build_subgroup(builtin_hom(name), mode)
            table = quotient_table(sub.hom)
            expected = {g for g in table.elements if mode.contains(g)}
            steps = [apply_hom(sub.hom, y) for y in sub.Y]
            reached = {table.identity}
            frontier = [table.identity]
            while frontier:
                g = frontier.pop()
                for step in steps:
                    product = g * step
                    if product not in reached:
                        reached.add(product)
                        frontier.append(product)
            self.assertEqual(reached, expected, name)
            self.assertTrue(set(sub.schreier_gens) <= set(sub.Y), name)


class QuotientTableTestCase(SimpleTestCase):

    def test_sym3_lengths(self):
        """Test the Cayley graph lengths of Sym(3) under a, b"""
        table = quotient_table(builtin_hom('sym3'))
        self.assertEqual(table.order, 6)
        self.assertEqual(table.length_of(table.identity), 0)
        self.assertEqual(sorted(table.lengths), [0, 1, 1, 1, 2, 2])
        for element, word in zip(table.elements, table.words):
            self.assertEqual(apply_hom(table.hom, word), element)
            self.assertEqual(len(word), table.length_of(element))

    def test_grigorchuk_level_orders(self):
        """Test the orders of the first three level quotients"""
        orders = [quotient_table(grigorchuk_level_hom(level)).order for level in (1, 2, 3)]
        self.assertEqual(orders, [2, 8, 128])

    def test_grigorchuk_generators_are_involutions(self):
        """Test a, b, c, d act as involutions and bcd = 1"""
        hom = grigorchuk_level_hom(4)
        for image in hom.generator_images:
            self.assertTrue((image * image).is_Identity)
        self.assertTrue(apply_hom(hom, parse_word('bcd', 4)).is_Identity)

    def test_grigorchuk_levels_project(self):
        """Test dropping the deepest bit maps level L onto level L - 1"""
        for level in range(2, 7):
            upper = grigorchuk_level_hom(level)
            lower = grigorchuk_level_hom(level - 1)
            for high, low in zip(upper.generator_images, lower.generator_images):
                upper_array = high.array_form
                lower_array = low.array_form
                for leaf in range(2 ** level):
                    self.assertEqual(upper_array[leaf] >> 1, lower_array[leaf >> 1], (level, leaf))

    def test_grigorchuk_cap_checked_after_cache(self):
        """Test a smaller order cap still refuses a level built earlier"""
        self.assertEqual(grigorchuk_level_hom(5).degree, 32)
        with overrides(ORDER_CAP=4):
            with self.assertRaises(ResourceCapExceeded):
                grigorchuk_level_hom(5)
        with self.assertRaises(ResourceCapExceeded):
            grigorchuk_level_hom(5, cap=16)
