import math

import numpy as np
import pytest

from holevo_auth import gf2
from holevo_auth.adversary import forgery_search
from holevo_auth.bounds import (DiscriminationInstance, check_contractivity_suite, check_corollary1,
                                check_corollary2, check_dpi_suite, check_fano_helstrom, check_lemma1,
                                check_lemma2, check_theorem2, constant_channel, exact_forgery_probability,
                                fano_helstrom_instances, guess_instance, identity_channel, optimal_error,
                                toy_holevo, toy_transcripts)
from holevo_auth.errors import HypothesisViolated
from holevo_auth.hashing import KeyedToeplitzMAC
from holevo_auth.protocol import erasure_joint
from holevo_auth.quantum import apply_channel, random_state, relative_entropy
from holevo_auth.verdict import EXACT, LOWER, TWO_SIDED, BoundCheck, verdict_csv


def forgery_oracle(n, q, d):
    """Average of the enumerated posterior optimum over (x, e, M)."""
    mac = KeyedToeplitzMAC.for_key_length(n, d)
    joint = erasure_joint(n, q)
    total = 0.0
    for x, e in zip(*np.nonzero(joint)):
        xb = gf2.int_to_bits(int(x), n)
        for m in range(1 << mac.message_bits):
            msg = gf2.int_to_bits(m, mac.message_bits)
            out = forgery_search(joint, mac, (msg, mac.tag(xb, msg)), e=int(e))
            total += joint[x, e] * out.success_rate / (1 << mac.message_bits)
    return total


class TestVerdict:
    def test_kinds(self):
        assert BoundCheck("u", 0.1, 0.12, stderr=0.01).passed
        assert not BoundCheck("u", 0.1, 0.15, stderr=0.01).passed
        assert BoundCheck("l", 0.5, 0.49, stderr=0.01, kind=LOWER).passed
        assert not BoundCheck("e", 0.0, 1e-6, stderr=1.0, kind=EXACT).passed
        assert not BoundCheck("t", 0.5, 0.3, stderr=0.01, kind=TWO_SIDED).passed
        v = BoundCheck("v", 0.0, 1.0, vacuous=True)
        assert v.passed and v.status == "vacuous"

    def test_csv(self):
        text = verdict_csv([BoundCheck("a, b", 0.25, 0.125)], {"param_value": "3"})
        assert text.splitlines() == ["param_value,bound_name,bound_value,measured,stderr,pass",
                                     '3,"a, b",0.25,0.125,0,true']


class TestLemma1:
    @pytest.mark.parametrize("n, q, d", [(4, 0.0, 2), (4, 0.3, 2), (4, 0.7, 1), (5, 0.5, 2)])
    def test_exact_forgery_matches_enumeration(self, n, q, d):
        assert exact_forgery_probability(n, q, d) == pytest.approx(forgery_oracle(n, q, d), abs=1e-12)

    def test_no_leakage_equality(self):
        inst = guess_instance(6, 0.0)
        assert inst.chi == pytest.approx(0.0) and inst.p_guess == pytest.approx(2.0 ** -6)
        assert check_lemma1(inst)[1].passed

    def test_full_leakage_is_trivial(self):
        inst = guess_instance(4, 1.0)
        up = check_lemma1(inst, delta=inst.entropy_H)[1]
        assert up.bound == 1.0 and up.passed

    def test_delta_below_chi_rejected(self):
        inst = guess_instance(4, 0.5)
        with pytest.raises(HypothesisViolated):
            check_lemma1(inst, delta=0.0)

    def test_chi_matches_joint(self):
        inst = guess_instance(5, 0.4)
        assert inst.chi == pytest.approx(inst.chi_joint, abs=1e-9)


class TestTheorem2:
    def test_branches(self):
        up, low = check_theorem2(4.0, 0.06, 0.001)
        assert up.status == "true" and low.status == "vacuous"
        up, low = check_theorem2(0.0, 1.0, 0.0)
        assert up.status == "vacuous" and low.status == "true"
        up, low = check_theorem2(0.0, 0.0, 0.0)
        assert low.status == "false"


class TestCorollaries:
    def test_corollary1(self):
        assert check_corollary1(4.0, 16.0, 4, 0.06, 0.001).passed
        assert check_corollary1(0.0, 16.0, 0, 1.0, 0.0).status == "vacuous"
        assert check_corollary1(12.0, 16.0, 4, 0.06, 0.001).bound == 2.0 ** -4
        with pytest.raises(HypothesisViolated):
            check_corollary1(13.0, 16.0, 4, 0.0, 0.0)

    def test_corollary2(self):
        c = check_corollary2(0.0, 16.0, 4, 4, 0.1, 0.001)
        assert c.bound == pytest.approx(2.0 ** -3)
        with pytest.raises(HypothesisViolated):
            check_corollary2(9.0, 16.0, 4, 4, 0.0, 0.0)


class TestLemma2:
    def test_sixteen_transcripts(self):
        assert len(set(toy_transcripts())) == 16
        assert all(check_lemma2(f).passed for f in toy_transcripts())

    def test_empty_transcript_equality(self):
        c = check_lemma2(None)
        assert c.measured == pytest.approx(c.bound, abs=1e-12)

    def test_one_key_bit(self):
        chi_e = toy_holevo(None)
        for f in [(0, 0, 1, 1), (0, 1, 0, 1)]:
            gain = toy_holevo(f) - chi_e
            assert 0 <= gain <= 1 + 1e-12
        # x2 is invisible to Eve, so broadcasting it adds a full bit
        assert toy_holevo((0, 1, 0, 1)) - chi_e == pytest.approx(1.0, abs=1e-12)

    def test_independent_transcript_adds_nothing(self):
        chi_e = toy_holevo(None)
        assert toy_holevo((0, 0, 0, 0)) == pytest.approx(chi_e, abs=1e-12)
        assert toy_holevo((1, 1, 1, 1)) == pytest.approx(chi_e, abs=1e-12)


class TestFanoHelstrom:
    def test_zero_information_binary(self):
        inst = DiscriminationInstance(2, 0.0)
        fano, hel = check_fano_helstrom(inst)
        assert fano.bound == pytest.approx(0.5, abs=1e-9) and optimal_error(inst) == pytest.approx(0.5)
        assert fano.passed and hel.passed

    def test_identical_four(self):
        inst = DiscriminationInstance(4, 0.0)
        _, hel = check_fano_helstrom(inst)
        assert hel.bound == pytest.approx(0.75) and hel.measured == pytest.approx(0.75)

    def test_orthogonal_pair_is_vacuous(self):
        fano, hel = check_fano_helstrom(DiscriminationInstance(2, math.pi))
        assert fano.bound == 0.0 and hel.bound == pytest.approx(0.0, abs=1e-12)

    def test_all_instances_pass(self):
        assert all(c.passed for inst in fano_helstrom_instances() for c in check_fano_helstrom(inst))


class TestChannels:
    def test_identity_equality(self):
        rng = np.random.default_rng(0)
        rho, sigma = random_state(3, rng), random_state(3, rng)
        ch = identity_channel(3)
        assert relative_entropy(apply_channel(ch, rho), apply_channel(ch, sigma)) == pytest.approx(
            relative_entropy(rho, sigma), abs=1e-9)

    def test_constant_channel(self):
        rng = np.random.default_rng(1)
        ch = constant_channel(2, [1, 0])
        out = [apply_channel(ch, random_state(2, rng)) for _ in range(2)]
        assert relative_entropy(*out) == pytest.approx(0.0, abs=1e-9)

    def test_random_suites(self):
        rng = np.random.default_rng(2)
        assert check_dpi_suite(100, [2, 3], rng).passed
        assert check_contractivity_suite(100, [2, 3], rng).passed
