"""
tests/test_encoding.py

Тесты кодирований:
- apply и аксиомы кодирования
- отображения состояний (estate, F/B, Гиббс)
- complex -> real, кудиты, композиция
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest
import scipy.linalg
from scipy.stats import unitary_group

from hamcore import PAULI, Hamiltonian, LocalTerm, assemble, diagonalize, pauli_matrix
from hamcore.errors import BadAncilla, DegenerateEncoding, DimMismatch
from hamcore.linalg import random_hermitian, random_density_matrix, evolution_operator
from encoding import (
    Encoding, apply, identity_encoding, verify_encoding_axioms,
    estate, fb_maps, estate_gibbs, emeas_gibbs,
    complex_to_real_enc, complex_to_real_local_encoding, complex_to_real_sim,
    qudit_to_qubit, compose, channel_check, local_action_residual,
)


def _samples(dim: int, count: int = 20, seed: int = 1234):
    rng = np.random.default_rng(seed)
    return [random_hermitian(dim, rng) for _ in range(count)]


def _make_conjugating_encoding(dim: int = 2) -> Encoding:
    """V = 1, p = 0, q = 1: E(M) = M̄."""
    return Encoding(np.eye(dim), dim, 1, np.zeros((1, 1)), np.ones((1, 1)))


def _random_kraus(dim: int, count: int, seed: int):
    """Случайный канал: блоки столбцов случайной изометрии."""
    u = unitary_group.rvs(dim * count, random_state=seed)
    iso = u[:, :dim]
    return [iso[k * dim:(k + 1) * dim, :] for k in range(count)]


# ---------------------------------------------------------------------------
# apply
# ---------------------------------------------------------------------------

def test_identity_encoding_apply():
    """Тождественное кодирование не меняет M."""
    m = _samples(4, 1)[0]
    assert np.allclose(apply(identity_encoding(4), m).entries, m)


def test_complex_to_real_maps_y_to_yy():
    """σ_y ↦ σ_y ⊗ σ_y, вещественная матрица 4x4."""
    out = apply(complex_to_real_enc(1), PAULI['Y']).entries
    assert np.allclose(out, np.kron(PAULI['Y'], PAULI['Y']))
    assert np.allclose(out.imag, 0)


def test_conjugating_encoding():
    """p = 0, q = 1 на σ_y даёт conj(Y) = −Y."""
    out = apply(_make_conjugating_encoding(), PAULI['Y']).entries
    assert np.allclose(out, -PAULI['Y'])


def test_apply_dimension_mismatch():
    with pytest.raises(DimMismatch):
        apply(identity_encoding(2), np.eye(4))


def test_complex_to_real_real_input_and_spectrum():
    """Вещественный H даёт два одинаковых блока; спектр удваивается."""
    rng = np.random.default_rng(3)
    h_real = random_hermitian(4, rng).real
    e = complex_to_real_enc(2)
    out = apply(e, h_real).entries
    assert np.allclose(out.imag, 0)
    assert np.allclose(out, np.kron(np.eye(2), h_real))
    h = random_hermitian(4, rng)
    out = apply(e, h).entries
    assert np.allclose(out.imag, 0)
    got = np.linalg.eigvalsh(out)
    want = np.sort(np.repeat(np.linalg.eigvalsh(h), 2))
    assert np.allclose(got, want, atol=1e-9)


# ---------------------------------------------------------------------------
# Аксиомы
# ---------------------------------------------------------------------------

def test_axioms_identity_encoding():
    report = verify_encoding_axioms(identity_encoding(4), _samples(4))
    assert report.passed
    assert report.worst_deviation <= 1e-9


def test_axioms_complex_to_real():
    report = verify_encoding_axioms(complex_to_real_enc(2), _samples(4))
    assert report.passed, str(report)


def test_axioms_detect_corrupted_isometry():
    """Испорченная V (не изометрия) даёт IsometryViolation."""
    good = complex_to_real_enc(1)
    bad = Encoding(1.1 * good.v, good.dim_in, good.anc_dim, good.proj_p, good.proj_q)
    report = verify_encoding_axioms(bad, _samples(2, 5))
    assert not report.passed
    assert "IsometryViolation" in report.flags


def test_axioms_local_complex_to_real():
    """Локальное кодирование проходит и проверку блочной структуры."""
    e = complex_to_real_local_encoding(2)
    report = verify_encoding_axioms(e, _samples(4, 6))
    assert report.passed, str(report)
    assert e.p == 1 and e.q == 1


def test_channel_preservation():
    """Σ E'(K)†E'(K) = 1 на закодированном подпространстве."""
    kraus = _random_kraus(4, 3, seed=5)
    assert channel_check(complex_to_real_enc(2), kraus) <= 1e-9
    assert channel_check(complex_to_real_local_encoding(2), kraus) <= 1e-9


def test_local_action_stays_on_declared_sites():
    """Образ однотельного оператора действует только на узлах своего блока."""
    e = complex_to_real_local_encoding(2)
    for letter in "XYZ":
        for site in (0, 1):
            assert local_action_residual(e, site, PAULI[letter]) <= 1e-9


# ---------------------------------------------------------------------------
# Отображения состояний
# ---------------------------------------------------------------------------

def test_estate_identity_and_bad_ancilla():
    rho = random_density_matrix(2, np.random.default_rng(1))
    assert np.allclose(estate(identity_encoding(2), rho).entries, rho)
    e = complex_to_real_enc(1)
    with pytest.raises(BadAncilla):
        estate(e, rho, sigma=np.diag([0.0, 1.0]))


def test_estate_expectation_and_f_recovery():
    """tr(E(A)·E_state(ρ)) = tr(Aρ); F(E_state(ρ)) = ρ, B = 0."""
    rng = np.random.default_rng(2)
    e = complex_to_real_local_encoding(2)
    for _ in range(5):
        a = random_hermitian(4, rng)
        rho = random_density_matrix(4, rng)
        enc_state = estate(e, rho).entries
        assert np.isclose(np.trace(apply(e, a).entries @ enc_state), np.trace(a @ rho), atol=1e-9)
        f, b = fb_maps(e, enc_state)
        assert np.allclose(f.entries, rho, atol=1e-9)
        assert np.allclose(b.entries, 0, atol=1e-9)


def test_fb_orthogonal_state():
    """Состояние вне закодированного подпространства даёт (0, 0)."""
    e = complex_to_real_local_encoding(2)
    plus_y = np.array([1, 1j]) / np.sqrt(2)
    minus_y = np.array([1, -1j]) / np.sqrt(2)
    psi = np.kron(np.kron(np.array([1, 0]), np.array([0, 1])), np.kron(plus_y, minus_y))
    rho = np.outer(psi, psi.conj())
    f, b = fb_maps(e, rho)
    assert np.allclose(f.entries, 0, atol=1e-12)
    assert np.allclose(b.entries, 0, atol=1e-12)


def test_fb_trace_and_forward_evolution():
    """tr F + tr B = tr(E(1)ρ'); F эволюционирует вперёд во времени."""
    rng = np.random.default_rng(4)
    e = complex_to_real_enc(2)
    h = random_hermitian(4, rng)
    rho_sim = random_density_matrix(e.dim_out, rng)
    f, b = fb_maps(e, rho_sim)
    assert np.isclose(
        np.trace(f.entries) + np.trace(b.entries),
        np.trace(e.encoded_projector() @ rho_sim), atol=1e-9,
    )
    t = 0.7
    u_sim = evolution_operator(apply(e, h).entries, t)
    u = evolution_operator(h, t)
    f_t, _ = fb_maps(e, u_sim @ rho_sim @ u_sim.conj().T)
    assert np.allclose(f_t.entries, u @ f.entries @ u.conj().T, atol=1e-9)


def test_time_evolution_commutes_with_estate():
    """e^{−iE(H)t}E_state(ρ)e^{iE(H)t} = E_state(e^{−iHt}ρe^{iHt})."""
    rng = np.random.default_rng(6)
    e = complex_to_real_enc(2)
    h = random_hermitian(4, rng)
    rho = random_density_matrix(4, rng)
    for t in (0.5, 3.0, 10.0):
        u_sim = evolution_operator(apply(e, h).entries, t)
        u = evolution_operator(h, t)
        lhs = u_sim @ estate(e, rho).entries @ u_sim.conj().T
        rhs = estate(e, u @ rho @ u.conj().T).entries
        assert np.allclose(lhs, rhs, atol=1e-8)


def test_gibbs_maps():
    """Контракт tr[emeas(A)·estate_gibbs(ρ)] = tr(Aρ) и перенос состояния Гиббса."""
    rng = np.random.default_rng(8)
    e = complex_to_real_enc(2)
    a = random_hermitian(4, rng)
    rho = random_density_matrix(4, rng)
    lhs = np.trace(emeas_gibbs(e, a).entries @ estate_gibbs(e, rho).entries)
    assert np.isclose(lhs, np.trace(a @ rho), atol=1e-9)

    h = random_hermitian(4, rng)
    gibbs = scipy.linalg.expm(-h)
    gibbs /= np.trace(gibbs)
    proj = e.encoded_projector()
    sim = proj @ scipy.linalg.expm(-apply(e, h).entries) @ proj
    sim /= np.trace(sim)
    assert np.allclose(estate_gibbs(e, gibbs).entries, sim, atol=1e-9)

    ident = identity_encoding(4)
    assert np.allclose(estate_gibbs(ident, rho).entries, rho)
    assert np.allclose(emeas_gibbs(ident, a).entries, a)
    conj = _make_conjugating_encoding(4)
    assert np.isclose(
        np.trace(emeas_gibbs(conj, a).entries @ estate_gibbs(conj, rho).entries),
        np.trace(a @ rho), atol=1e-9,
    )


def test_gibbs_degenerate_encoding():
    empty = Encoding(np.eye(2), 2, 1, np.zeros((1, 1)), np.zeros((1, 1)))
    with pytest.raises(DegenerateEncoding):
        estate_gibbs(empty, np.eye(2) / 2)


# ---------------------------------------------------------------------------
# Конструкции и композиция
# ---------------------------------------------------------------------------

def test_complex_to_real_sim_is_real_with_doubled_spectrum():
    """H' вещественный, нижние 2·dim собственных значений = удвоенный спектр H."""
    rng = np.random.default_rng(10)
    h = Hamiltonian(2, 2, (LocalTerm((0, 1), random_hermitian(4, rng)),))
    inst = complex_to_real_sim(h)
    m = assemble(inst.h_sim).entries
    assert np.allclose(m.imag, 0)
    got = diagonalize(m).eigenvalues[:8]
    want = np.sort(np.repeat(diagonalize(assemble(h)).eigenvalues, 2))
    assert np.allclose(got, want, atol=1e-9)
    assert inst.h_sim.k_max <= 4


def test_qudit_encoding_axioms():
    rng = np.random.default_rng(12)
    h = Hamiltonian(2, 3, (LocalTerm((0, 1), random_hermitian(9, rng)),))
    inst = qudit_to_qubit(h)
    assert inst.h_sim.n == 4
    report = verify_encoding_axioms(inst.encoding, _samples(9, 4))
    assert report.passed, str(report)


def test_compose_identities():
    e = compose(identity_encoding(4), identity_encoding(4))
    m = _samples(4, 1)[0]
    assert np.allclose(apply(e, m).entries, m)
    assert (e.p, e.q) == (1, 0)


def test_compose_two_complex_to_real():
    """Композиция совпадает с последовательным применением; p = q = 2."""
    inner = complex_to_real_enc(1)
    outer = complex_to_real_enc(2)
    e = compose(outer, inner)
    assert (e.p, e.q) == (2, 2)
    for h in _samples(2, 5):
        sequential = apply(outer, apply(inner, h).entries).entries
        assert np.allclose(apply(e, h).entries, sequential, atol=1e-9)


def test_compose_local_encodings_stays_local():
    """Композиция локальных кодирований локальна и проходит аксиомы."""
    inner = complex_to_real_local_encoding(1)
    outer = complex_to_real_local_encoding(2)
    e = compose(outer, inner)
    assert e.is_local
    assert e.locality[0].sim_sites == (0, 1, 2, 3)
    for h in _samples(2, 4):
        sequential = apply(outer, apply(inner, h).entries).entries
        assert np.allclose(apply(e, h).entries, sequential, atol=1e-9)
    report = verify_encoding_axioms(e, _samples(2, 4))
    assert report.passed, str(report)
