"""Tests for divisor classes and the rules built on them."""

import pytest

from formdiv.arith import euler_phi, is_squarefree
from formdiv.errors import DomainError, ErrorCode, OracleFailure
from formdiv.forms import (
    FormSpec,
    ResidueClassSet,
    Sign,
    character_row,
    class_independent,
    closure_holds,
    divisor_classes,
    divisor_classes_oracle,
    forbidden_classes,
    note6_count,
    reduced_classes,
    reduced_forbidden_classes,
    representative_primes,
    seed_classes,
    special_primes,
)


PLUS, MINUS = Sign.PLUS, Sign.MINUS

# aa-Nbb with N square only reaches its classes through the factor a+sqrt(N)b
DEGENERATE_HARVEST_BOUND = 120


def members(classes):
    return list(classes.members)


class TestTypes:
    """FormSpec and ResidueClassSet construction."""

    def test_formspec_rejects_zero(self):
        with pytest.raises(DomainError):
            FormSpec(0, PLUS)

    @pytest.mark.parametrize('n, sign, degenerate', [
        (1, MINUS, True),
        (9, MINUS, True),
        (1, PLUS, False),
        (5, MINUS, False),
    ])
    def test_degenerate(self, n, sign, degenerate):
        assert FormSpec(n, sign).degenerate is degenerate

    def test_formspec_str(self):
        assert str(FormSpec(5, PLUS)) == 'aa+5bb'
        assert str(FormSpec(1, MINUS)) == 'aa-bb'

    def test_class_set_sorts_and_validates(self):
        s = ResidueClassSet(20, (9, 1, 3, 7))
        assert members(s) == [1, 3, 7, 9]
        assert 23 in s
        with pytest.raises(DomainError):
            ResidueClassSet(20, (5,))
        with pytest.raises(DomainError):
            ResidueClassSet(20, (2,))


class TestDivisorClasses:
    """The Kronecker-symbol characterization."""

    @pytest.mark.parametrize('n, sign, expected', [
        (5, PLUS, [1, 3, 7, 9]),
        (1, PLUS, [1]),
        (2, PLUS, [1, 3]),
        (3, PLUS, [1, 7]),
        (5, MINUS, [1, 9, 11, 19]),
        (2, MINUS, [1, 7]),
        (1, MINUS, [1, 3]),
    ])
    def test_examples(self, n, sign, expected):
        assert members(divisor_classes(FormSpec(n, sign))) == expected

    @pytest.mark.parametrize('n, sign, expected', [
        (1, PLUS, [3]),
        (5, PLUS, [11, 13, 17, 19]),
        (7, MINUS, [5, 11, 13, 15, 17, 23]),
    ])
    def test_forbidden_examples(self, n, sign, expected):
        assert members(forbidden_classes(FormSpec(n, sign))) == expected

    def test_half_of_units_for_squarefree_n(self):
        for n in range(1, 106):
            if not is_squarefree(n):
                continue
            for sign in (PLUS, MINUS):
                form = FormSpec(n, sign)
                if form.degenerate:
                    continue
                assert len(divisor_classes(form)) == euler_phi(4 * n) // 2 == note6_count(n)

    def test_plus_antisymmetry_and_minus_symmetry(self):
        for n in range(1, 106):
            plus = divisor_classes(FormSpec(n, PLUS))
            for r in plus:
                assert (4 * n - r) not in plus
            minus = FormSpec(n, MINUS)
            if minus.degenerate:
                continue
            classes = divisor_classes(minus)
            for r in classes:
                assert (4 * n - r) in classes

    def test_closure_and_seeds(self):
        for n in range(1, 106):
            for sign in (PLUS, MINUS):
                form = FormSpec(n, sign)
                classes = divisor_classes(form)
                assert closure_holds(classes)
                assert set(seed_classes(form).members) <= set(classes.members)
                assert 1 in classes


class TestOracle:
    """The divisor harvest agrees with the symbol."""

    @pytest.mark.parametrize('n, sign, bound, expected', [
        (2, PLUS, 20, [1, 3]),
        (1, PLUS, 20, [1]),
        (6, PLUS, 30, [1, 5, 7, 11]),
    ])
    def test_examples(self, n, sign, bound, expected):
        assert members(divisor_classes_oracle(FormSpec(n, sign), bound)) == expected

    def test_harvest_is_subset(self):
        for n in (7, 10, 13, 21, 30):
            for sign in (PLUS, MINUS):
                form = FormSpec(n, sign)
                harvested = set(divisor_classes_oracle(form, 40).members)
                assert harvested <= set(divisor_classes(form).members)

    def test_harvest_equals_symbol_up_to_30(self):
        for n in range(1, 31):
            for sign in (PLUS, MINUS):
                form = FormSpec(n, sign)
                if form.degenerate:
                    continue
                assert divisor_classes_oracle(form, 60) == divisor_classes(form), (n, sign)

    def test_degenerate_harvest_needs_a_wider_grid(self):
        # aa-16bb: the first prime of 57 mod 64 is 313 = a+4b, out of reach at 60
        assert 57 not in divisor_classes_oracle(FormSpec(16, MINUS), 60).members
        for n in (1, 4, 9, 16, 25):
            form = FormSpec(n, MINUS)
            assert divisor_classes_oracle(form, DEGENERATE_HARVEST_BOUND) == divisor_classes(form), n

    def test_factor_ceiling_is_an_error(self):
        with pytest.raises(OracleFailure):
            divisor_classes_oracle(FormSpec(5, PLUS), 40, ceiling=3)


class TestReduction:
    """Halving the modulus."""

    def test_examples(self):
        assert members(reduced_classes(FormSpec(3, PLUS))) == [1]
        assert members(reduced_classes(FormSpec(7, PLUS))) == [1, 9, 11]
        assert reduced_classes(FormSpec(5, PLUS)) is None
        reduced = reduced_classes(FormSpec(13, MINUS))
        assert reduced.modulus == 26
        assert members(reduced) == [1, 3, 9, 17, 23, 25]

    def test_forbidden_reduction(self):
        assert members(reduced_forbidden_classes(FormSpec(3, PLUS))) == [5]
        assert members(reduced_forbidden_classes(FormSpec(7, PLUS))) == [3, 5, 13]

    def test_dichotomy(self):
        for n in range(1, 106):
            if n % 4 == 0:
                continue
            plus = reduced_classes(FormSpec(n, PLUS)) is not None
            assert plus is (n % 4 == 3), n
            minus = FormSpec(n, MINUS)
            if not minus.degenerate:
                assert (reduced_classes(minus) is not None) is (n % 4 == 1), n


class TestCounts:
    """The class-count table."""

    @pytest.mark.parametrize('n, expected', [(105, 48), (5, 4), (2, 2), (1, 1), (30, 16), (210, 96)])
    def test_examples(self, n, expected):
        assert note6_count(n) == expected

    def test_rejects_non_squarefree(self):
        with pytest.raises(DomainError):
            note6_count(12)


class TestClosureAndSeeds:
    """Group closure and the seed classes."""

    def test_closure_examples(self):
        assert closure_holds(ResidueClassSet(20, (1, 3, 7, 9)))
        assert closure_holds(ResidueClassSet(4, (1,)))
        assert not closure_holds(ResidueClassSet(20, (11, 13, 17, 19)))

    @pytest.mark.parametrize('n, expected', [(2, [1, 3]), (5, [1, 9]), (1, [1])])
    def test_seed_examples(self, n, expected):
        assert members(seed_classes(FormSpec(n, PLUS))) == expected


class TestCharacterRows:
    """The residue tables for +P."""

    def test_examples(self):
        assert character_row(3, PLUS).plus_classes == (2,)
        assert character_row(11, MINUS).plus_classes == (1, 3, 4, 5, 9)
        assert character_row(13, MINUS).plus_classes == (1, 3, 4, 9, 10, 12)

    def test_rejects_non_odd_prime(self):
        for P in (2, 9, 1):
            with pytest.raises(DomainError):
                character_row(P, PLUS)

    def test_rows_partition(self):
        for P in (3, 5, 7, 11, 13, 17):
            for sign in (PLUS, MINUS):
                row = character_row(P, sign)
                assert len(row.plus_classes) == len(row.minus_classes) == (P - 1) // 2
                assert sorted(row.plus_classes + row.minus_classes) == list(range(1, P))

    def test_rows_agree_with_classes(self):
        for P in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            for sign in (PLUS, MINUS):
                row = character_row(P, sign)
                for n in range(1, 106):
                    if n % P == 0:
                        continue
                    admissible = P % (4 * n) in divisor_classes(FormSpec(n, sign))
                    assert admissible is ((n % P) in row.plus_classes), (P, n, sign)


class TestIndependence:
    """Euler's criterion is constant on each class."""

    def test_class_independence(self):
        for n in (3, 5, 7, 10, 13, 21, 30, 60):
            for sign in (PLUS, MINUS):
                form = FormSpec(n, sign)
                if form.degenerate:
                    continue
                for r in list(divisor_classes(form)) + list(forbidden_classes(form)):
                    assert class_independent(form, r, 3, 10 ** 7)

    def test_representative_bound_exhausted(self):
        with pytest.raises(OracleFailure) as excinfo:
            representative_primes(1, 420, 3, 500)
        assert excinfo.value.code is ErrorCode.PRIME_BOUND

    def test_special_primes(self):
        assert special_primes(FormSpec(10, MINUS)) == [2, 5]
        assert special_primes(FormSpec(13, PLUS)) == [2, 13]
        assert special_primes(FormSpec(1, PLUS)) == [2]
