"""Kernel tests: closed-form inverses, eigensolvers, and block inverses.

Derived expectations come from independent routes: reconstruction products,
the explicit characteristic polynomial of the generalized problem, direct
inversion, and identity products.
"""

import math
import random

import numpy as np
import pytest

from secrecy221 import matkit as mk
from secrecy221.errors import (
    NoiseDegenerate,
    NotPositiveDefinite,
    SingularMatrix,
    SingularUpdate,
)

I2 = ((1.0, 0.0), (0.0, 1.0))


def rand_mat2(rng) -> mk.Mat2:
    return ((rng.gauss(0, 1), rng.gauss(0, 1)), (rng.gauss(0, 1), rng.gauss(0, 1)))


def rand_sym2(rng) -> mk.Mat2:
    a, b, d = rng.gauss(0, 1), rng.gauss(0, 1), rng.gauss(0, 1)
    return ((a, b), (b, d))


def rand_spd2(rng, shift: float = 0.1) -> mk.Mat2:
    m = rand_mat2(rng)
    g = mk.matmul2(mk.transpose2(m), m)
    return mk.matadd2(g, mk.matscale2(shift, I2))


def max_abs_diff2(a: mk.Mat2, b: mk.Mat2) -> float:
    return max(abs(a[i][j] - b[i][j]) for i in range(2) for j in range(2))


class TestInv2:
    def test_identity(self):
        assert mk.inv2(I2) == I2

    def test_diagonal(self):
        assert mk.inv2(((2.0, 0.0), (0.0, 4.0))) == ((0.5, 0.0), (0.0, 0.25))

    def test_permutation_is_involution(self):
        p = ((0.0, 1.0), (1.0, 0.0))
        assert mk.inv2(p) == p

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix):
            mk.inv2(((1.0, 1.0), (1.0, 1.0)))
        with pytest.raises(SingularMatrix):
            mk.inv2(((0.0, 0.0), (0.0, 0.0)))

    def test_double_inverse_is_identity_map(self):
        rng = random.Random(101)
        for _ in range(1000):
            m = rand_mat2(rng)
            if abs(mk.det2(m)) < 1e-6:
                continue
            back = mk.inv2(mk.inv2(m))
            assert max_abs_diff2(back, m) <= 1e-10 * max(1.0, mk.fro2(m))

    def test_product_is_identity(self):
        rng = random.Random(7)
        for _ in range(200):
            m = rand_mat2(rng)
            if abs(mk.det2(m)) < 1e-6:
                continue
            assert max_abs_diff2(mk.matmul2(m, mk.inv2(m)), I2) <= 1e-10


class TestSymEig2:
    def test_diagonal(self):
        (l1, l2), (v1, v2) = mk.sym_eig2(((3.0, 0.0), (0.0, 1.0)))
        assert (l1, l2) == (3.0, 1.0)
        assert v1 == (1.0, 0.0) and v2 == (0.0, 1.0)

    def test_circulant(self):
        (l1, l2), (v1, _) = mk.sym_eig2(((2.0, 1.0), (1.0, 2.0)))
        assert math.isclose(l1, 3.0, rel_tol=1e-14)
        assert math.isclose(l2, 1.0, rel_tol=1e-14)
        r = 1.0 / math.sqrt(2.0)
        assert math.isclose(v1[0], r, rel_tol=1e-14)
        assert math.isclose(v1[1], r, rel_tol=1e-14)

    def test_reconstruction_on_random(self):
        # V diag(l) V^T must reproduce the input.
        rng = random.Random(42)
        for _ in range(10_000):
            m = rand_sym2(rng)
            (l1, l2), (v1, v2) = mk.sym_eig2(m)
            rec = mk.matadd2(
                mk.matscale2(l1, mk.outer2(v1, v1)),
                mk.matscale2(l2, mk.outer2(v2, v2)),
            )
            assert max_abs_diff2(rec, m) <= 1e-10 * max(1.0, mk.fro2(m))

    def test_orthonormal_and_sign_convention(self):
        rng = random.Random(3)
        for _ in range(2000):
            m = rand_sym2(rng)
            (l1, l2), (v1, v2) = mk.sym_eig2(m)
            assert l1 >= l2
            assert abs(mk.norm2(v1) - 1.0) <= 1e-12
            assert abs(mk.norm2(v2) - 1.0) <= 1e-12
            assert abs(mk.dot2(v1, v2)) <= 1e-12
            for v in (v1, v2):
                first = v[0] if v[0] != 0.0 else v[1]
                assert first > 0.0


class TestGenRayleighMax:
    def test_diagonal_case(self):
        lam, q = mk.gen_rayleigh_max(((2.0, 0.0), (0.0, 2.0)), ((5.0, 0.0), (0.0, 1.0)))
        assert lam == 2.0
        assert q == (0.0, 1.0)

    def test_identity_pair(self):
        lam, q = mk.gen_rayleigh_max(I2, I2)
        assert lam == 1.0
        assert q == (1.0, 0.0)

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            mk.gen_rayleigh_max(I2, ((1.0, 0.0), (0.0, 0.0)))

    def test_against_characteristic_polynomial(self):
        # det(A - lambda B) = det(B) l^2 - (a00 b11 + a11 b00 - 2 a01 b01) l + det(A)
        rng = random.Random(17)
        for _ in range(500):
            a = rand_spd2(rng)
            b = rand_spd2(rng)
            lam, q = mk.gen_rayleigh_max(a, b)
            c2 = mk.det2(b)
            c1 = -(a[0][0] * b[1][1] + a[1][1] * b[0][0] - 2.0 * a[0][1] * b[0][1])
            c0 = mk.det2(a)
            disc = math.sqrt(max(c1 * c1 - 4.0 * c2 * c0, 0.0))
            root_max = (-c1 + disc) / (2.0 * c2)
            assert math.isclose(lam, root_max, rel_tol=1e-10)
            # eigen relation B^{-1} A q = lam q
            resid = mk.sub2(
                mk.matvec2(mk.inv2(b), mk.matvec2(a, q)), mk.scale2(lam, q)
            )
            assert mk.norm2(resid) <= 1e-10 * max(1.0, lam)

    def test_maximality_over_random_directions(self):
        rng = random.Random(23)
        for _ in range(10):
            a = rand_spd2(rng)
            b = rand_spd2(rng)
            lam, _ = mk.gen_rayleigh_max(a, b)
            for _ in range(100):
                ang = rng.uniform(0.0, 2.0 * math.pi)
                q = (math.cos(ang), math.sin(ang))
                quotient = mk.quad2(a, q) / mk.quad2(b, q)
                assert quotient <= lam * (1.0 + 1e-12)


class TestGenEig2Rank1:
    def test_matches_generic_solver(self):
        rng = random.Random(19)
        for _ in range(500):
            a = rand_spd2(rng)
            c = abs(rng.gauss(0, 2))
            v = (rng.gauss(0, 1), rng.gauss(0, 1))
            b = mk.matadd2(I2, mk.matscale2(c, mk.outer2(v, v)))
            (l1, l2), (q1, _) = mk.gen_eig2_rank1(a, c, v)
            (g1, g2), (p1, _) = mk.gen_eig2(a, b)
            assert math.isclose(l1, g1, rel_tol=1e-10)
            assert math.isclose(l2, g2, rel_tol=1e-9, abs_tol=1e-12)
            assert abs(abs(mk.dot2(q1, p1)) - 1.0) <= 1e-9

    def test_stable_at_extreme_scale(self):
        # B's small eigenvalue is exactly 1; the structured route must keep
        # the generalized spectrum accurate when c ||v||^2 is enormous.
        a = ((1.0 + 1e9 * 2.0, 0.0), (0.0, 1.0 + 1e9 * 0.5))
        (l1, l2), (q1, _) = mk.gen_eig2_rank1(a, 1e9, (1.0, 0.0))
        # pencil diag(1 + 2e9, 1 + 5e8) vs diag(1 + 1e9, 1)
        assert math.isclose(l1, 1.0 + 1e9 * 0.5, rel_tol=1e-12)
        assert math.isclose(l2, (1.0 + 2e9) / (1.0 + 1e9), rel_tol=1e-12)
        assert q1 == (0.0, 1.0)

    def test_zero_weight_reduces_to_symmetric(self):
        a = ((2.0, 1.0), (1.0, 2.0))
        (l1, l2), (v1, _) = mk.gen_eig2_rank1(a, 0.0, (0.3, 0.4))
        assert math.isclose(l1, 3.0, rel_tol=1e-14)
        assert math.isclose(l2, 1.0, rel_tol=1e-14)
        assert math.isclose(v1[0], 1.0 / math.sqrt(2), rel_tol=1e-14)

    def test_negative_weight_rejected(self):
        with pytest.raises(NotPositiveDefinite):
            mk.gen_eig2_rank1(I2, -0.5, (1.0, 0.0))


class TestRank1UpdateInverse:
    def test_zero_update(self):
        assert mk.rank1_update_inverse(I2, 0.0, (0.3, -0.7)) == I2

    def test_diagonal_case(self):
        out = mk.rank1_update_inverse(I2, 3.0, (1.0, 0.0))
        assert out == ((0.25, 0.0), (0.0, 1.0))

    def test_singular_update(self):
        with pytest.raises(SingularUpdate):
            mk.rank1_update_inverse(I2, -1.0, (1.0, 0.0))

    def test_against_direct_inverse(self):
        rng = random.Random(5)
        checked = 0
        while checked < 500:
            m = rand_mat2(rng)
            c = rng.gauss(0, 1)
            u = (rng.gauss(0, 1), rng.gauss(0, 1))
            updated = mk.matadd2(m, mk.matscale2(c, mk.outer2(u, u)))
            (s1, s2) = sorted(
                (abs(x) for x in np.linalg.svd(np.array(m), compute_uv=False)),
                reverse=True,
            )
            if s2 == 0 or s1 / s2 > 1e6 or abs(mk.det2(updated)) < 1e-6:
                continue
            got = mk.rank1_update_inverse(mk.inv2(m), c, u)
            want = mk.inv2(updated)
            scale = mk.fro2(want)
            assert max_abs_diff2(got, want) <= 1e-10 * max(1.0, scale)
            # product with the updated matrix recovers the identity
            assert max_abs_diff2(mk.matmul2(updated, got), I2) <= 1e-9
            checked += 1


class TestInvN:
    def test_zero_correlation(self):
        assert mk.inv_N((0.0, 0.0)) == mk.eye3()

    def test_closed_form_half(self):
        ninv = mk.inv_N((0.5, 0.0))
        k = 0.75
        assert math.isclose(ninv[0][0], 1.0 + 0.25 / k, rel_tol=1e-15)
        assert ninv[0][1] == 0.0
        assert math.isclose(ninv[0][2], -0.5 / k, rel_tol=1e-15)
        assert ninv[1][1] == 1.0
        assert math.isclose(ninv[2][2], 1.0 / k, rel_tol=1e-15)

    @pytest.mark.parametrize("radius", [0.9, 0.99])
    def test_identity_product_on_circle(self, radius):
        rng = random.Random(11)
        for _ in range(300):
            ang = rng.uniform(0, 2 * math.pi)
            a = (radius * math.cos(ang), radius * math.sin(ang))
            n = mk.noise_cov3(a)
            ninv = mk.inv_N(a)
            prod = mk.matmul3(n, ninv)
            eye = mk.eye3()
            err = max(
                abs(prod[i][j] - eye[i][j]) for i in range(3) for j in range(3)
            )
            assert err <= 1e-12

    def test_degenerate(self):
        with pytest.raises(NoiseDegenerate):
            mk.inv_N((1.0, 0.0))
        with pytest.raises(NoiseDegenerate):
            mk.inv_N((0.8, 0.7))


class TestOrthPerp:
    @pytest.mark.parametrize(
        "v,expected",
        [
            ((1.0, 0.0), (0.0, 1.0)),
            ((0.0, 1.0), (-1.0, 0.0)),
            (
                (1.0 / math.sqrt(2), 1.0 / math.sqrt(2)),
                (-1.0 / math.sqrt(2), 1.0 / math.sqrt(2)),
            ),
        ],
    )
    def test_rotation(self, v, expected):
        got = mk.orth_perp(v)
        assert math.isclose(got[0], expected[0], abs_tol=1e-15)
        assert math.isclose(got[1], expected[1], abs_tol=1e-15)
        assert abs(mk.dot2(got, v)) <= 1e-15

    def test_requires_unit(self):
        with pytest.raises(ValueError):
            mk.orth_perp((2.0, 0.0))
