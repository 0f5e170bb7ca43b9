import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from laxspec import kernels
from laxspec.errors import NonConvergenceError
from laxspec.hermitian import (
    HermitianMatrix,
    apply,
    available_backends,
    eigendecompose,
    propagator,
    register_backend,
)

from oracles import expm_taylor


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianMatrix(scale * (a + a.conj().T) / 2)


def check_contract(H, fac):
    bound = 1e-12 * max(1.0, H.frobenius())
    assert fac.residual(H) <= bound
    assert fac.orthonormality() <= 1e-12 * H.K
    assert np.all(np.diff(fac.lambdas) >= 0)
    assert abs(fac.lambdas.sum() - np.trace(H.dense()).real) <= bound


class TestHermitianMatrix:
    def test_mirrors_lower_triangle(self):
        H = HermitianMatrix([[1.0, 99.0], [2 + 1j, 3.0]])
        assert_allclose(H.dense(), [[1, 2 - 1j], [2 + 1j, 3]])
        assert H[0, 1] == 2 - 1j

    def test_exactly_hermitian(self, rng):
        H = random_hermitian(rng, 7).dense()
        assert np.array_equal(H, H.conj().T)

    def test_diagonal_real(self):
        H = HermitianMatrix([[1 + 5j]])
        assert H.dense()[0, 0] == 1.0

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            HermitianMatrix(np.zeros((2, 3)))


class TestEigendecompose:
    def test_identity(self):
        H = HermitianMatrix(np.eye(3))
        fac = eigendecompose(H)
        assert_allclose(fac.lambdas, [1, 1, 1], atol=1e-15)
        check_contract(H, fac)

    def test_pauli_x(self):
        H = HermitianMatrix([[0, 1], [1, 0]])
        fac = eigendecompose(H)
        assert_allclose(fac.lambdas, [-1, 1], atol=1e-15)
        check_contract(H, fac)

    @pytest.mark.parametrize("backend", ["householder-ql", "lapack"])
    @pytest.mark.parametrize("n", [1, 2, 3, 8, 17, 64])
    def test_random(self, rng, n, backend):
        H = random_hermitian(rng, n)
        check_contract(H, eigendecompose(H, backend))

    def test_matches_lapack_spectrum(self, rng):
        H = random_hermitian(rng, 40)
        assert_allclose(eigendecompose(H).lambdas, np.linalg.eigvalsh(H.dense()), atol=1e-12)

    def test_already_tridiagonal_and_diagonal(self):
        H = HermitianMatrix(np.diag([3.0, -1.0, 2.0, 2.0]))
        fac = eigendecompose(H)
        assert_allclose(fac.lambdas, [-1, 2, 2, 3])
        check_contract(H, fac)
        T = np.diag([1.0, 2, 3]) + np.diag([1j, 0], -1) + np.diag([-1j, 0], 1)
        check_contract(HermitianMatrix(T), eigendecompose(HermitianMatrix(T)))

    def test_degenerate(self, rng):
        q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        H = HermitianMatrix(q @ np.diag([1, 1, 1, 2, 2, 5.0]) @ q.conj().T)
        fac = eigendecompose(H)
        assert_allclose(fac.lambdas, [1, 1, 1, 2, 2, 5], atol=1e-13)
        check_contract(H, fac)

    def test_deterministic(self, rng):
        H = random_hermitian(rng, 12)
        a, b = eigendecompose(H), eigendecompose(H)
        assert np.array_equal(a.lambdas, b.lambdas) and np.array_equal(a.U, b.U)

    def test_sweep_cap(self):
        d = np.array([1.0, 2.0, 3.0])
        e = np.array([1.0, 1.0, 0.0])
        assert kernels.tql_np(d.copy(), e.copy(), np.eye(3), 0) == 0
        assert kernels.tql_nb(d.copy(), e.copy(), np.eye(3), 0) == 0

    def test_non_convergence_error_carries_size(self):
        register_backend("never", lambda h: (_ for _ in ()).throw(NonConvergenceError(h.shape[0], 0.5)))
        with pytest.raises(NonConvergenceError) as info:
            eigendecompose(HermitianMatrix(np.eye(4)), "never")
        assert info.value.size == 4 and info.value.residual == 0.5
        assert "4x4" in str(info.value)

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            eigendecompose(HermitianMatrix(np.eye(2)), "nope")
        assert "householder-ql" in available_backends()

    @given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1), st.floats(1e-3, 1e3))
    def test_contract_property(self, n, seed, scale):
        H = random_hermitian(np.random.default_rng(seed), n, scale)
        check_contract(H, eigendecompose(H))


class TestKernelAgreement:
    def test_tridiagonalize_backends_agree(self, rng):
        h = random_hermitian(rng, 24).dense()
        d1, s1, q1 = kernels.tridiagonalize_np(h)
        d2, s2, q2 = kernels.tridiagonalize_nb(h)
        assert_allclose(d1, d2, atol=1e-12)
        assert_allclose(s1, s2, atol=1e-12)
        assert_allclose(q1, q2, atol=1e-12)
        T = np.diag(d1) + np.diag(s1, -1) + np.diag(s1.conj(), 1)
        assert_allclose(q1 @ T @ q1.conj().T, h, atol=1e-12)

    def test_tql_backends_agree(self, rng):
        n = 20
        d = rng.normal(size=n)
        e = np.append(np.abs(rng.normal(size=n - 1)), 0.0)
        out = []
        for tql in (kernels.tql_np, kernels.tql_nb):
            dd, ee, z = d.copy(), e.copy(), np.eye(n)
            assert tql(dd, ee, z, 50) == -1
            out.append((np.sort(dd), z))
        assert_allclose(out[0][0], out[1][0], atol=1e-13)
        T = np.diag(d) + np.diag(e[:-1], 1) + np.diag(e[:-1], -1)
        assert_allclose(np.sort(np.linalg.eigvalsh(T)), out[0][0], atol=1e-12)


class TestPropagator:
    def test_t_zero_identity(self, rng):
        p = propagator(eigendecompose(random_hermitian(rng, 5)), 0.0)
        v = rng.normal(size=5) + 1j * rng.normal(size=5)
        assert_allclose(apply(p, v), v, atol=1e-13)

    def test_phase_flip(self):
        p = propagator(eigendecompose(HermitianMatrix(np.diag([0.0, 1.0]))), np.pi, +1)
        assert_allclose(apply(p, np.array([1.0, 1.0])), [1.0, -1.0], atol=1e-15)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_identity_matrix(self, rng, sign):
        p = propagator(eigendecompose(HermitianMatrix(np.eye(4))), 0.37, sign)
        v = rng.normal(size=4) + 0j
        assert_allclose(apply(p, v), np.exp(sign * 0.37j) * v, atol=1e-15)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_matches_expm_oracle(self, rng, sign):
        H = random_hermitian(rng, 3)
        p = propagator(eigendecompose(H), 0.7, sign)
        E = expm_taylor(sign * 0.7j * H.dense())
        assert_allclose(p.matrix(), E, atol=1e-12)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert_allclose(apply(p, v), E @ v, atol=1e-12)

    def test_norm_preserved(self, rng):
        H = random_hermitian(rng, 8)
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        w = apply(propagator(eigendecompose(H), 3.3), v)
        assert abs(np.linalg.norm(w) - np.linalg.norm(v)) <= 1e-12 * np.linalg.norm(v)

    def test_dimension_mismatch(self):
        p = propagator(eigendecompose(HermitianMatrix(np.eye(3))), 1.0)
        with pytest.raises(ValueError):
            apply(p, np.ones(4))

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            propagator(eigendecompose(HermitianMatrix(np.eye(2))), 1.0, 2)

    @given(st.integers(1, 10), st.integers(0, 2 ** 32 - 1),
           st.floats(-50, 50), st.floats(-50, 50), st.sampled_from([1, -1]))
    def test_group_property(self, n, seed, t1, t2, sign):
        r = np.random.default_rng(seed)
        fac = eigendecompose(random_hermitian(r, n))
        v = r.normal(size=n) + 1j * r.normal(size=n)
        lhs = apply(propagator(fac, t1, sign), apply(propagator(fac, t2, sign), v))
        rhs = apply(propagator(fac, t1 + t2, sign), v)
        assert np.linalg.norm(lhs - rhs) <= 1e-11 * max(1.0, np.linalg.norm(v))

    @given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.floats(-5, 5))
    def test_oracle_equivalence(self, n, seed, t):
        r = np.random.default_rng(seed)
        H = random_hermitian(r, n)
        v = r.normal(size=n) + 1j * r.normal(size=n)
        got = apply(propagator(eigendecompose(H), t, 1), v)
        assert np.linalg.norm(got - expm_taylor(1j * t * H.dense()) @ v) <= 1e-11 * np.linalg.norm(v)


class TestShiftPropagate:
    @pytest.mark.parametrize("n", [1, 2, 9, 40])
    def test_backends_agree_with_matrix_powers(self, rng, n):
        q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        w0 = rng.normal(size=n) + 1j * rng.normal(size=n)
        S = np.eye(n, k=1)
        expected = [(np.linalg.matrix_power(q @ S, k) @ w0)[0] for k in range(n)]
        for impl in (kernels.shift_propagate_np, kernels.shift_propagate_nb):
            out, worst = impl(q, w0)
            assert_allclose(out, expected, atol=1e-12)
            assert worst <= 1 + 1e-12
