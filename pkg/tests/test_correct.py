from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpb import arith
from bpb.correct import (
    Correction,
    correct_c0_l1,
    correct_linfty_l1,
    eta_of_eps,
    partition_domain,
    verify_correction,
)
from bpb.errors import (
    EpsOutOfRange,
    NotNearNorming,
    NotPositive,
    NotUnitNorm,
    PreconditionViolated,
    VectorOutOfBall,
)
from bpb.harness import PROFILES, gen_instance, run_instance
from bpb.lattice import LatticeVector, LinearOperator, MeasureSpace, PositiveOperator, apply, l1_norm

from conftest import brute_inf_to_one


def pos(matrix, codomain=None):
    m, n = len(matrix), len(matrix[0])
    return PositiveOperator(
        tuple(tuple(r) for r in matrix), MeasureSpace.counting(n), codomain or MeasureSpace.counting(m)
    )


def vec(values, space):
    return LatticeVector(tuple(values), space)


class TestEta:
    def test_half(self):
        eta, threshold = eta_of_eps(Q(1, 2))
        assert eta == Q(1, 13456)
        assert threshold == Q(1, 13456**2)

    def test_nine_tenths(self):
        eta, threshold = eta_of_eps(Q(9, 10))
        assert eta == Q(81, 3364 * 100)
        assert threshold == Q(6561, 113164960000)
        assert float(threshold) == pytest.approx(5.7977e-8, rel=1e-4)

    def test_monotone_and_below_eps(self):
        values = [Q(k, 100) for k in range(1, 100)]
        etas = [eta_of_eps(e) for e in values]
        assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(etas, etas[1:]))
        assert all(th < eta < e for e, (eta, th) in zip(values, etas))

    @pytest.mark.parametrize("eps", [0, 1, 58, Q(-1, 2)])
    def test_out_of_range(self, eps):
        with pytest.raises(EpsOutOfRange):
            eta_of_eps(eps)

    def test_float_mode(self):
        with arith.use_mode("float"):
            eta, threshold = eta_of_eps(0.9)
            assert threshold == pytest.approx((0.9 / 58) ** 4, rel=1e-15)


class TestPartition:
    def test_all_ones(self):
        space = MeasureSpace.counting(3)
        p = partition_domain(vec([1, 1, 1], space), Q(1, 10))
        assert (p.A, p.B, p.C) == (frozenset(), {0, 1, 2}, frozenset())

    def test_mixed(self):
        p = partition_domain(vec([1, -1, 0], MeasureSpace.counting(3)), Q(1, 100))
        assert (p.A, p.B, p.C) == ({1}, {0}, {2})

    def test_boundaries(self):
        eta = Q(1, 100)
        p = partition_domain(vec([1 - eta, -1 + eta, 1 - eta / 2, -1], MeasureSpace.counting(4)), eta)
        assert p.C == {0, 1}
        assert p.B == {2}
        assert p.A == {3}

    def test_outside_ball(self):
        with pytest.raises(VectorOutOfBall):
            partition_domain(vec([Q(11, 10), 0], MeasureSpace.counting(2)), Q(1, 10))


class TestSpecExamples:
    def test_single_row_already_attaining(self):
        S = pos([[Q(1, 2), Q(1, 2)]])
        f0 = vec([1, 1], S.domain)
        c = correct_linfty_l1(S, f0, Q(1, 2))
        cert = c.certificate
        assert (cert.partition.A, cert.partition.B, cert.partition.C) == (frozenset(), {0, 1}, frozenset())
        assert cert.lemma_witness.g1.values == (0,)
        assert cert.lemma_witness.g2.values == (1,)
        assert c.T == S and c.u0 == f0
        assert cert.dist_point == cert.dist_op_bound == cert.dist_op_exact == cert.dist_V == 0

    def test_diagonal_with_sign_flip(self):
        S = pos([[Q(1, 2), 0], [0, Q(1, 2)]])
        f0 = vec([1, -1], S.domain)
        c = correct_linfty_l1(S, f0, Q(1, 2))
        cert = c.certificate
        assert (cert.partition.A, cert.partition.B) == ({1}, {0})
        w = cert.lemma_witness
        assert w.eps == Q(1, 58)
        assert w.normalizer == 1
        assert w.g1.values == (0, Q(1, 2)) and w.g2.values == (Q(1, 2), 0)
        assert c.T == S and c.u0 == f0
        assert cert.dist_op_exact == 0

    def test_coordinate_pulled_to_one(self):
        S = pos([[Q(1, 4), Q(1, 4)], [Q(1, 4), Q(1, 4)]])
        eta, threshold = eta_of_eps(Q(1, 2))
        f0 = vec([1, 1 - threshold], S.domain)
        assert l1_norm(apply(S, f0)) == 1 - threshold / 2
        c = correct_linfty_l1(S, f0, Q(1, 2))
        assert c.u0.values == (1, 1)
        assert c.certificate.dist_point == threshold <= eta
        assert verify_correction(S, f0, Q(1, 2), c).passed

    def test_light_column_is_cut(self):
        # S = [[1 - k, k]], f0 = (1, 0): C = {1} carries mass k, T = [[1, 0]]
        eps = Q(1, 2)
        _, threshold = eta_of_eps(eps)
        k = threshold / 2
        S = pos([[1 - k, k]])
        f0 = vec([1, 0], S.domain)
        c = correct_linfty_l1(S, f0, eps)
        cert = c.certificate
        assert cert.partition.C == {1}
        assert cert.sfc_mass == k
        assert cert.norm_V == 1 - k
        assert cert.dist_V == k
        assert c.T.matrix == ((1, 0),)
        assert c.u0.values == (1, 0)
        oracle = brute_inf_to_one([[k, -k]], (1,))
        assert oracle == 2 * k
        assert cert.dist_op_exact == oracle == cert.dist_op_bound

    def test_leak_is_removed_by_the_lemma(self):
        # two blocks with a tiny cross entry; hand values below
        eps = Q(1, 2)
        _, threshold = eta_of_eps(eps)
        d = threshold / 8
        raw = [[1, d], [0, 1]]
        mass = 2 + d
        S = pos([[a / mass for a in r] for r in raw])
        f0 = vec([1, -1], S.domain)
        assert l1_norm(apply(S, f0)) == (2 - d) / mass
        c = correct_linfty_l1(S, f0, eps)
        w = c.certificate.lemma_witness
        # S(chi_A) = (d, 1)/mass, S(chi_B) = (1, 0)/mass
        assert (w.G1, w.G2, w.W) == ({1}, {0}, frozenset())
        assert c.T.matrix == ((Q(1, 2), 0), (0, Q(1, 2)))
        assert c.certificate.dist_V == d / mass
        assert c.certificate.norm_V == 2 / mass
        T_minus_S = [[a - b for a, b in zip(r, s)] for r, s in zip(c.T.matrix, S.matrix)]
        assert c.certificate.dist_op_exact == brute_inf_to_one(T_minus_S, (1, 1))


class TestErrors:
    def test_not_near_norming_reports_deficit(self):
        S = pos([[Q(1, 2), Q(1, 2)]])
        with pytest.raises(NotNearNorming) as info:
            correct_linfty_l1(S, vec([1, 0], S.domain), Q(1, 2))
        assert info.value.deficit == Q(1, 2)
        assert info.value.threshold == eta_of_eps(Q(1, 2))[1]

    def test_not_positive(self):
        S = LinearOperator(((Q(1, 2), Q(-1, 2)),), MeasureSpace.counting(2), MeasureSpace.counting(1))
        with pytest.raises(NotPositive):
            correct_linfty_l1(S, vec([1, -1], S.domain), Q(1, 2))

    def test_not_unit_norm_and_normalize_option(self):
        S = pos([[1, 1]])
        f0 = vec([1, 1], S.domain)
        with pytest.raises(NotUnitNorm):
            correct_linfty_l1(S, f0, Q(1, 2))
        c = correct_linfty_l1(S, f0, Q(1, 2), normalize=True)
        assert c.certificate.scale == Q(1, 2)
        assert c.T.matrix == ((Q(1, 2), Q(1, 2)),)

    def test_f0_not_unit(self):
        S = pos([[Q(1, 2), Q(1, 2)]])
        with pytest.raises(NotUnitNorm):
            correct_linfty_l1(S, vec([Q(1, 2), Q(1, 2)], S.domain), Q(1, 2))

    def test_eps_range(self):
        S = pos([[1]])
        with pytest.raises(EpsOutOfRange):
            correct_linfty_l1(S, vec([1], S.domain), 1)


class TestVerify:
    def test_accepts_corrector_output(self):
        inst = gen_instance(3, 4, 4, Q(1, 2), profile="sign-pattern")
        c = correct_linfty_l1(inst.S, inst.f0, inst.eps)
        report = verify_correction(inst.S, inst.f0, inst.eps, c)
        assert report.passed and report.op_distance_method == "sign-enumeration"

    def test_non_attaining_pair_fails_with_deficit(self):
        S = pos([[Q(1, 2), Q(1, 2)]])
        f0 = vec([1, 0], S.domain)
        report = verify_correction(S, f0, Q(1, 2), Correction(S, f0, None, None))
        failed = {item.name: item for item in report.failures()}
        assert set(failed) == {"norm-attainment"}
        item = failed["norm-attainment"]
        assert item.rhs - item.lhs == 1 - l1_norm(apply(S, f0)) == Q(1, 2)

    def test_half_scaled_point_fails_unit_sphere(self):
        S = pos([[Q(1, 2), Q(1, 2)]])
        f0 = vec([1, 1], S.domain)
        c = correct_linfty_l1(S, f0, Q(1, 2))
        bad = Correction(c.T, c.u0 * Q(1, 2), c.eta, c.certificate)
        names = {item.name for item in verify_correction(S, f0, Q(1, 2), bad).failures()}
        assert "u0-unit" in names

    def test_large_domain_uses_entry_mass(self):
        inst = gen_instance(1, 6, 2, Q(1, 2))
        c = correct_linfty_l1(inst.S, inst.f0, inst.eps, cap=4)
        assert c.certificate.dist_op_exact is None
        report = verify_correction(inst.S, inst.f0, inst.eps, c, cap=4)
        assert report.op_distance_method == "entry-mass-bound" and report.passed


@st.composite
def block_instances(draw):
    n = draw(st.integers(1, 6))
    m = draw(st.integers(1, 6))
    signs = [draw(st.sampled_from((-1, 1))) for _ in range(n)]
    groups = [draw(st.sampled_from((-1, 1))) for _ in range(m)]
    entry = st.fractions(min_value=0, max_value=3, max_denominator=12)
    raw = [[draw(entry) if groups[j] == signs[i] else Q(0) for i in range(n)] for j in range(m)]
    mass = sum(sum(r) for r in raw)
    if mass == 0:
        raw[0][0] = Q(1)
        signs[0] = groups[0]
        mass = Q(1)
    S = pos([[a / mass for a in r] for r in raw])
    return S, vec(signs, S.domain)


@settings(max_examples=60, deadline=None)
@given(block_instances(), st.sampled_from([Q(1, 10), Q(3, 10), Q(3, 5), Q(9, 10)]))
def test_fixed_point_when_already_disjoint(instance, eps):
    S, f0 = instance
    assert l1_norm(apply(S, f0)) == 1
    c = correct_linfty_l1(S, f0, eps)
    assert c.T == S
    assert c.u0 == f0


@pytest.mark.parametrize("profile", PROFILES)
@pytest.mark.parametrize("seed", range(8))
def test_end_to_end(profile, seed):
    eps = [Q(1, 10), Q(3, 10), Q(3, 5), Q(9, 10)][seed % 4]
    inst = gen_instance(seed, 1 + seed % 7, 1 + (3 * seed) % 7, eps, profile=profile)
    c, report = run_instance(inst)
    assert report.passed and c.certificate.passed
    cert = c.certificate
    part = cert.partition
    diff = c.u0 - inst.f0
    assert all(diff[i] == 0 for i in part.C)
    assert all(abs(diff[i]) <= c.eta for i in part.A | part.B)
    assert cert.dist_V < eps / 2 and cert.norm_V >= 1 - eps / 2
    if inst.f0.is_nonnegative():
        assert c.u0.is_nonnegative() and not part.A


def test_norming_perturbed_is_positive():
    for seed in range(5):
        inst = gen_instance(seed, 5, 3, Q(3, 10), profile="norming-perturbed")
        assert inst.f0.is_nonnegative()
        c, report = run_instance(inst)
        assert c.u0.is_nonnegative() and report.passed


def test_float_mode_end_to_end():
    for seed in range(6):
        inst = gen_instance(seed, 5, 4, Q(1, 2), profile=PROFILES[seed % 3], mode="float")
        c, report = run_instance(inst)
        assert report.passed, report.lines()
        assert isinstance(c.certificate.norm_V, float)


class TestC0:
    def test_basis_vector(self):
        S = pos([[1, 0]])
        x0 = vec([1, 0], S.domain)
        c = correct_c0_l1(S, x0, Q(1, 2), tail_declared_zero=True)
        p = c.certificate.partition
        assert (p.A, p.B, p.C) == (frozenset(), {0}, {1})
        assert c.T == S and c.u0 == x0

    def test_requires_tail_acknowledgement(self):
        S = pos([[1]])
        with pytest.raises(PreconditionViolated):
            correct_c0_l1(S, vec([1], S.domain), Q(1, 2))

    def test_declared_tail_must_vanish(self):
        S = pos([[Q(1, 2), Q(1, 2)]])
        with pytest.raises(PreconditionViolated):
            correct_c0_l1(S, vec([1, 1], S.domain), Q(1, 2), tail_declared_zero=True, tail=1)

    def test_matches_linfty_pipeline(self):
        for seed in range(6):
            inst = gen_instance(seed, 5, 4, Q(3, 10), profile=PROFILES[seed % 3], kind="c0")
            a = correct_c0_l1(inst.S, inst.f0, inst.eps, tail_declared_zero=True)
            b = correct_linfty_l1(inst.S, inst.f0, inst.eps)
            assert a == b

    def test_tail_padding_does_not_change_the_head(self):
        padded = gen_instance(4, 6, 3, Q(3, 5), profile="sign-pattern", kind="c0", tail=2)
        assert padded.f0.values[-2:] == (0, 0)
        c = correct_c0_l1(padded.S, padded.f0, padded.eps, tail_declared_zero=True, tail=2)
        head = MeasureSpace.counting(4)
        S_head = PositiveOperator(tuple(r[:4] for r in padded.S.matrix), head, padded.S.codomain)
        h = correct_c0_l1(S_head, vec(padded.f0.values[:4], head), padded.eps, tail_declared_zero=True)
        assert tuple(r[:4] for r in c.T.matrix) == h.T.matrix
        assert all(r[4:] == (0, 0) for r in c.T.matrix)
        assert c.u0.values[:4] == h.u0.values and c.u0.values[4:] == (0, 0)
