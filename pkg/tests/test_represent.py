"""Tests for representation witnesses and the surveys built on them."""

import pytest

from formdiv.arith import primes_up_to
from formdiv.errors import DomainError
from formdiv.forms import FormSpec, Sign, divisor_classes
from formdiv.represent import (
    RepresentationWitness,
    TwoCoefForm,
    class_multiplier_survey,
    inclusion_check,
    parse_form,
    represent,
    smallest_multiplier,
    split_survey,
)


PLUS, MINUS = Sign.PLUS, Sign.MINUS


class TestTwoCoefForm:
    """Construction, parsing and rendering of p*a^2 +/- q*b^2."""

    def test_plus_forms_are_canonical(self):
        form = TwoCoefForm(3, 2)
        assert (form.p, form.q) == (2, 3)
        assert str(form) == '2aa+3bb'
        assert form.target == FormSpec(6, PLUS)

    def test_minus_forms_keep_order(self):
        form = TwoCoefForm(3, 1, MINUS)
        assert (form.p, form.q) == (3, 1)
        assert str(form) == '3aa-bb'
        assert form != TwoCoefForm(1, 3, MINUS)

    def test_coefficients_must_be_coprime(self):
        with pytest.raises(DomainError):
            TwoCoefForm(4, 6)

    @pytest.mark.parametrize('text, p, q, sign', [
        ('aa+bb', 1, 1, PLUS),
        ('2aa+3bb', 2, 3, PLUS),
        ('aa-2bb', 1, 2, MINUS),
        ('3aa-bb', 3, 1, MINUS),
        ('5aa+6bb', 5, 6, PLUS),
    ])
    def test_parse_form(self, text, p, q, sign):
        form = parse_form(text)
        assert (form.p, form.q, form.sign) == (p, q, sign)

    @pytest.mark.parametrize('text', ['2aa+5', 'aa*bb', '', '2a+3b'])
    def test_parse_form_rejects(self, text):
        with pytest.raises(DomainError):
            parse_form(text)


class TestRepresent:
    """Single witnesses with k = 1."""

    @pytest.mark.parametrize('M, form, a, b', [
        (29, TwoCoefForm(1, 5), 3, 2),
        (46, TwoCoefForm(1, 5), 1, 3),
        (7, TwoCoefForm(1, 2, MINUS), 3, 1),
        (29, TwoCoefForm(1, 1), 5, 2),
        (5, TwoCoefForm(2, 3), 1, 1),
    ])
    def test_examples(self, M, form, a, b):
        witness = represent(M, form)
        assert (witness.a, witness.b) == (a, b)
        assert witness.multiplier == 1

    def test_none(self):
        assert represent(3, TwoCoefForm(1, 1)) is None
        assert represent(9, TwoCoefForm(1, 1)) is None

    def test_rejects_non_positive(self):
        with pytest.raises(DomainError):
            represent(0, TwoCoefForm(1, 1))

    def test_render(self):
        assert represent(29, TwoCoefForm(1, 5)).render() == '29 = 3² + 5·2²'
        assert represent(7, TwoCoefForm(1, 2, MINUS)).render() == '7 = 3² − 2·1²'

    def test_witness_validates_itself(self):
        with pytest.raises(DomainError):
            RepresentationWitness(29, 1, 3, 3, TwoCoefForm(1, 5))
        with pytest.raises(DomainError):
            RepresentationWitness(9, 1, 3, 0, TwoCoefForm(1, 1))

    @pytest.mark.parametrize('n, classes', [
        (1, {1}),
        (2, {1, 3}),
        (3, {1, 7}),
    ])
    def test_completeness_small_forms(self, n, classes):
        form = TwoCoefForm.principal(n)
        for p in primes_up_to(10 ** 5):
            if p % (4 * n) in classes and p > n:
                witness = represent(p, form)
                assert witness is not None, p
                assert witness.a ** 2 + n * witness.b ** 2 == p

    def test_minus_form_witnesses(self):
        form = TwoCoefForm(1, 2, MINUS)
        for p in primes_up_to(5000):
            if p % 8 in (1, 7):
                witness = represent(p, form)
                assert witness.a ** 2 - 2 * witness.b ** 2 == p


class TestSmallestMultiplier:
    """The smallest k with k*p represented."""

    @pytest.mark.parametrize('p, n, k, a, b', [
        (3, 11, 4, 1, 1),
        (7, 13, 2, 1, 1),
        (29, 1, 1, 5, 2),
        (13, 17, 2, 3, 1),
        (5, 11, 3, 2, 1),
    ])
    def test_examples(self, p, n, k, a, b):
        found = smallest_multiplier(p, TwoCoefForm.principal(n))
        assert found[0] == k
        assert (found[1].a, found[1].b) == (a, b)

    def test_candidates_restrict_the_search(self):
        k, witness = smallest_multiplier(13, TwoCoefForm.principal(17), candidates=[1, 9])
        assert k == 9
        assert (witness.a, witness.b) == (10, 1)
        assert smallest_multiplier(3, TwoCoefForm.principal(11), candidates=[1, 2]) is None

    def test_rejects_bad_prime(self):
        with pytest.raises(DomainError):
            smallest_multiplier(9, TwoCoefForm.principal(5))
        with pytest.raises(DomainError):
            smallest_multiplier(5, TwoCoefForm.principal(5))


class TestSurveys:
    """Per-class multiplier and split surveys."""

    def test_multiplier_survey_n5(self):
        survey = class_multiplier_survey(FormSpec(5, PLUS), 10000)
        assert survey.multipliers == {1: (1,), 3: (2,), 7: (2,), 9: (1,)}
        assert not survey.warnings

    def test_multiplier_survey_n13(self):
        survey = class_multiplier_survey(FormSpec(13, PLUS), 10000)
        for r in (1, 49, 9, 25, 29, 17):
            assert survey.multipliers[r] == (1,)
        for r in (7, 31, 11, 19, 47, 15):
            assert survey.multipliers[r] == (2,)

    def test_multiplier_survey_n1(self):
        assert class_multiplier_survey(FormSpec(1, PLUS), 1000).multipliers == {1: (1,)}

    def test_multiplier_survey_parallel_matches_serial(self):
        serial = class_multiplier_survey(FormSpec(11, PLUS), 3000)
        parallel = class_multiplier_survey(FormSpec(11, PLUS), 3000, jobs=2)
        assert serial.multipliers == parallel.multipliers

    def test_claimed_multipliers_suffice(self):
        for n, candidates in ((11, [1, 4]), (19, [1, 4])):
            form = TwoCoefForm.principal(n)
            classes = divisor_classes(FormSpec(n, PLUS))
            for p in primes_up_to(5000):
                if p > 2 and n % p and p in classes:
                    assert smallest_multiplier(p, form, candidates=candidates) is not None, (n, p)

    def test_multiplier_survey_rejects_minus(self):
        with pytest.raises(DomainError):
            class_multiplier_survey(FormSpec(5, MINUS), 100)

    def test_split_n6(self):
        survey = split_survey(6, [TwoCoefForm(2, 3)], 10000)
        assert survey.assignment == {
            1: ('aa+6bb',), 5: ('2aa+3bb',), 7: ('aa+6bb',), 11: ('2aa+3bb',),
        }
        assert survey.exclusive

    def test_split_n10(self):
        survey = split_survey(10, [parse_form('2aa+5bb')], 10000)
        for r in (1, 9, 11, 19):
            assert survey.assignment[r] == ('aa+10bb',)
        for r in (7, 23, 37, 13):
            assert survey.assignment[r] == ('2aa+5bb',)

    def test_split_n30_four_forms(self):
        companions = [parse_form(t) for t in ('2aa+15bb', '3aa+10bb', '5aa+6bb')]
        survey = split_survey(30, companions, 10000)
        assert survey.exclusive
        assert not survey.unrepresented
        assert all(len(names) == 1 for names in survey.assignment.values())

    def test_split_n14_is_mixed(self):
        survey = split_survey(14, [TwoCoefForm(2, 7)], 10000)
        assert not survey.exclusive
        assert set(survey.mixed) == {1, 9, 15, 23, 25, 39}

    def test_split_n21_leaves_classes_unrepresented(self):
        survey = split_survey(21, [TwoCoefForm(3, 7)], 10000)
        assert survey.exclusive
        assert len(survey.unrepresented) == 6

    def test_split_rejects_wrong_companion(self):
        with pytest.raises(DomainError):
            split_survey(6, [TwoCoefForm(2, 5)], 100)


class TestInclusion:
    """Companion forms share the divisors of a^2 +/- pq b^2."""

    @pytest.mark.parametrize('form', [
        TwoCoefForm(2, 3),
        TwoCoefForm(3, 5),
        TwoCoefForm(5, 7, MINUS),
        TwoCoefForm(3, 1, MINUS),
        TwoCoefForm(5, 6),
    ])
    def test_holds(self, form):
        report = inclusion_check(form, 40)
        assert report.holds
        assert report.harvested

    def test_rejects_tiny_bound(self):
        with pytest.raises(DomainError):
            inclusion_check(TwoCoefForm(2, 3), 1)
