"""
tests/test_simcheck.py

Тесты сертификации симуляций:
- выравнивание изометрии и verify_simulation
- текстовый формат отчёта
- статсумма, эволюция во времени, шум
- композиция бюджетов
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import logging

import numpy as np
import pytest
import scipy.linalg

from hamcore import Hamiltonian, LocalTerm, PauliTerm
from hamcore.errors import (
    BudgetViolation, NotLocalEncoding, ParseError, RankMismatch, RankPNotOne, SubspaceMismatch,
)
from hamcore.linalg import random_hermitian, random_density_matrix
from gadgets import build_simulator, subdivision_gadget
from encoding import (
    Encoding, LocalBlock, complex_to_real_enc, complex_to_real_sim, identity_encoding, local_encoding,
    perfect_simulation, qudit_to_qubit,
)
from simcheck import (
    SimulationReport, report_from_text, align_isometry, verify_simulation,
    eigenvalue_errors, isometry_distance, partition_check, time_evolution_check,
    noise_roundtrip, depolarizing_kraus, compose_budget,
)
import simcheck.verify as verify_module


def _make_target(n: int = 2, seed: int = 5, scale: float = 0.5) -> Hamiltonian:
    rng = np.random.default_rng(seed)
    block = random_hermitian(2 ** n, rng, scale)
    return Hamiltonian(n, 2, (LocalTerm(tuple(range(n)), block),))


def _make_perfect_pair():
    """Комплексный H и его идеальная симуляция через complex -> real."""
    h = _make_target()
    e = complex_to_real_enc(2)
    return h, perfect_simulation(h, e, 20.0), e


def _make_report(eps: float, eta: float, delta: float) -> SimulationReport:
    return SimulationReport(delta=delta, eta_measured=eta, eps_measured=eps)


def _make_gadget_pair(delta: float = 100.0):
    """Subdivision Z0·Z1 через медиатор: кодирование с ненулевым дополнением."""
    g = subdivision_gadget(PauliTerm((0,), "Z"), PauliTerm((1,), "Z"))
    return g, build_simulator(g, delta)


def _isometry_encoding(v: np.ndarray) -> Encoding:
    return Encoding(v, v.shape[1], 1, np.ones((1, 1)), np.zeros((1, 1)))


# ---------------------------------------------------------------------------
# verify_simulation
# ---------------------------------------------------------------------------

def test_perfect_simulation_is_exact():
    """Идеальная симуляция: η = ε = 0, ранг 2·4."""
    h, h_sim, e = _make_perfect_pair()
    report = verify_simulation(h, h_sim, e, 10.0, eps=1e-6, eta=1e-6)
    assert report.passed
    assert report.rank == 8
    assert report.multiplicity == 2
    assert report.eps_measured < 1e-9
    assert report.eta_measured < 1e-9
    assert report.eps_measured <= report.eps_operator + 1e-9


def test_qutrit_simulation_is_exact():
    """Случайный кутритный гамильтониан на двух узлах симулируется точно."""
    rng = np.random.default_rng(11)
    h = Hamiltonian(2, 3, (LocalTerm((0, 1), random_hermitian(9, rng)),))
    inst = qudit_to_qubit(h)
    report = verify_simulation(h, inst.h_sim, inst.encoding, inst.delta, eps=1e-9, eta=1e-9)
    assert report.passed
    assert report.eps_measured <= 1e-9


def test_complex_to_real_sim_certified():
    """Локальная симуляция complex -> real с удвоенными кратностями."""
    h = _make_target(seed=8, scale=1.0)
    inst = complex_to_real_sim(h)
    report = verify_simulation(h, inst.h_sim, inst.encoding, inst.delta, eps=1e-8, eta=1e-8)
    assert report.passed
    assert report.multiplicity == 2
    assert len(report.per_eigenvalue_errors) == 4


def test_wrong_cut_is_subspace_mismatch():
    """Порог выше штрафа медиатора захватывает возбуждённый сектор: ранг 8 вместо 4."""
    g, h_sim = _make_gadget_pair()
    assert verify_simulation(g.target, h_sim, g.simulator_encoding(), 50.0).rank == 4
    with pytest.raises(SubspaceMismatch):
        verify_simulation(g.target, h_sim, g.simulator_encoding(), 300.0)


def test_requested_eps_controls_verdict():
    """Сдвиг спектра на 0.05: проходит при большом ε и не проходит при малом."""
    h, _, e = _make_perfect_pair()
    shifted = Hamiltonian(h.n, 2, h.terms + (PauliTerm((), "", 0.05),))
    h_sim = perfect_simulation(shifted, e, 20.0)
    loose = verify_simulation(h, h_sim, e, 10.0, eps=0.1)
    tight = verify_simulation(h, h_sim, e, 10.0, eps=0.01)
    assert loose.passed
    assert not tight.passed
    assert abs(loose.eps_measured - 0.05) < 1e-9
    assert abs(loose.eps_operator - 0.05) < 1e-9


def test_eps_measured_is_max_eigenvalue_error():
    """eps_measured совпадает с максимумом поблочных ошибок и не больше операторной нормы."""
    g, h_sim = _make_gadget_pair()
    report = verify_simulation(g.target, h_sim, g.simulator_encoding(), 50.0)
    assert report.per_eigenvalue_errors
    assert report.eps_measured == max(report.per_eigenvalue_errors)
    assert report.eps_measured <= report.eps_operator + 1e-9
    assert _make_report(0.1, 0.1, 5.0).eps_certified == 0.1
    again = report_from_text(report.to_text())
    assert again.eps_measured == max(again.per_eigenvalue_errors)
    assert again.eps_operator == report.eps_operator


def test_eta_within_alignment_bound(caplog):
    """η не превышает √2·‖P_≤Δ − E(1)‖; предупреждения нет."""
    g, h_sim = _make_gadget_pair()
    h, perfect, e = _make_perfect_pair()
    with caplog.at_level(logging.WARNING, logger="simcheck.verify"):
        reports = [
            verify_simulation(g.target, h_sim, g.simulator_encoding(), 50.0),
            verify_simulation(h, perfect, e, 10.0),
        ]
    for report in reports:
        assert report.eta_measured <= report.eta_bound + 1e-10
    assert reports[0].eta_measured > 0.0
    assert not [rec for rec in caplog.records if "η" in rec.getMessage()]


def test_eta_above_alignment_bound_is_logged(caplog, monkeypatch):
    """Выравнивание, нарушившее оценку, видно в логе."""
    g, h_sim = _make_gadget_pair()
    monkeypatch.setattr(verify_module, "isometry_distance", lambda e, aligned: 1.5)
    with caplog.at_level(logging.WARNING, logger="simcheck.verify"):
        report = verify_simulation(g.target, h_sim, g.simulator_encoding(), 50.0)
    assert report.eta_measured == 1.5
    assert any("оценку выравнивания" in rec.getMessage() for rec in caplog.records)


def test_eigenvalue_errors_blockwise():
    errors = eigenvalue_errors([0.0, 1.0], [0.0, 0.1, 1.0, 1.2], 2)
    assert np.allclose(errors, [0.1, 0.2])
    with pytest.raises(SubspaceMismatch):
        eigenvalue_errors([0.0, 1.0], [0.0, 0.1, 1.0], 2)


# ---------------------------------------------------------------------------
# align_isometry
# ---------------------------------------------------------------------------

def test_align_identity_case():
    """Если P_low = E(1), выравнивание ничего не меняет."""
    e = identity_encoding(4)
    aligned = align_isometry(e, np.eye(4))
    assert isometry_distance(e, aligned) < 1e-12


def test_align_small_rotation_within_bound():
    """‖Ṽ − V‖ <= √2·‖P_low − E(1)‖, и Ṽ отображает на P_low."""
    rng = np.random.default_rng(2)
    v = np.eye(4, dtype=complex)[:, :2]
    e = _isometry_encoding(v)
    rotation = scipy.linalg.expm(-1j * 0.05 * random_hermitian(4, rng))
    w = rotation @ v
    p_low = w @ w.conj().T
    aligned = align_isometry(e, p_low)
    distance = isometry_distance(e, aligned)
    bound = np.sqrt(2.0) * np.linalg.norm(p_low - v @ v.conj().T, 2)
    assert distance <= bound + 1e-12
    assert np.allclose(aligned.v @ aligned.v.conj().T, p_low, atol=1e-10)


def test_align_rank_mismatch():
    e = _isometry_encoding(np.eye(4, dtype=complex)[:, :2])
    p_low = np.diag([1.0, 0.0, 0.0, 0.0])
    with pytest.raises(RankMismatch):
        align_isometry(e, p_low)


# ---------------------------------------------------------------------------
# SimulationReport
# ---------------------------------------------------------------------------

def test_report_text_roundtrip_is_stable():
    """to_text -> report_from_text -> to_text даёт тот же текст."""
    h, h_sim, e = _make_perfect_pair()
    report = verify_simulation(h, h_sim, e, 10.0, eps=0.1, eta=0.1)
    report.partition = (1.0, 1e-5, 1e-3)
    report.time_evolution = [(0.5, 1e-8, 0.1), (1.0, 2e-8, 0.2)]
    text = report.to_text()
    again = report_from_text(text)
    assert again.to_text() == text
    assert again.passed
    assert again.time_evolution[1] == (1.0, 2e-8, 0.2)
    assert verify_simulation(h, h_sim, e, 10.0, eps=0.1, eta=0.1).to_text().splitlines()[:11] == \
        text.splitlines()[:11]


def test_report_parse_errors_are_located():
    text = _make_report(0.1, 0.1, 5.0).to_text()
    with pytest.raises(ParseError) as info:
        report_from_text(text.replace("rank = 0", "rank = abc"))
    assert info.value.location == 'rank'
    with pytest.raises(ParseError):
        report_from_text("delta 5\n")


# ---------------------------------------------------------------------------
# Следствия симуляции
# ---------------------------------------------------------------------------

def test_partition_bound_perfect_simulation():
    """Ошибка статсуммы не превышает оценку при β = 1 и β = 1e-3."""
    h, h_sim, e = _make_perfect_pair()
    for beta in (1.0, 1e-3):
        check = partition_check(h, h_sim, e, 10.0, beta, eps=0.0)
        assert check.holds


def test_partition_gibbs_mode_energy():
    h, h_sim, e = _make_perfect_pair()
    check = partition_check(h, h_sim, e, 10.0, 1.0, eps=0.0, mode="gibbs")
    assert check.energy_error is not None
    assert check.energy_error < 1e-6


def test_time_evolution_perfect_simulation():
    """Идеальная симуляция: расстояние 0 при всех t."""
    h, h_sim, e = _make_perfect_pair()
    rho = random_density_matrix(4, np.random.default_rng(4))
    points = time_evolution_check(h, h_sim, e, rho, [0.5, 1.0, 2.0], eps=0.0, eta=0.0)
    assert len(points) == 3
    for point in points:
        assert point.distance < 1e-8
        assert point.f_distance < 1e-8


def test_noise_identity_channel():
    h = _make_target(seed=8, scale=1.0)
    inst = complex_to_real_sim(h)
    rho = random_density_matrix(4, np.random.default_rng(6))
    check = noise_roundtrip(inst.encoding, [np.eye(inst.encoding.dim_out)], rho)
    assert check.distance < 1e-9
    assert check.delta_leak < 1e-9
    assert check.estate_distance < 1e-9


def test_noise_depolarizing_is_local():
    """Деполяризация одного кубита симулятора индуцирует шум на одном узле."""
    h = _make_target(seed=8, scale=1.0)
    inst = complex_to_real_sim(h)
    e = inst.encoding
    rho = random_density_matrix(4, np.random.default_rng(7))
    kraus = depolarizing_kraus(0, e.n_out, 0.3)
    check = noise_roundtrip(e, kraus, rho, strong=True)
    assert check.local_ok
    assert all(len(s) <= 1 for s in check.supports)
    assert check.distance <= check.bound + 1e-9
    assert check.strong_residual is not None and check.strong_residual <= 1e-9


def test_noise_strong_form_needs_rank_one():
    """Сильная форма требует rank(P) = 1; глобальное кодирование отвергается."""
    block = LocalBlock(0, (0, 1), np.eye(4), 2, np.eye(2), np.zeros((2, 2)))
    e = local_encoding([block], 2, 2, 2)
    with pytest.raises(RankPNotOne):
        noise_roundtrip(e, [np.eye(4)], np.eye(2) / 2, strong=True)
    with pytest.raises(NotLocalEncoding):
        noise_roundtrip(complex_to_real_enc(1), [np.eye(4)], np.eye(2) / 2)


# ---------------------------------------------------------------------------
# compose_budget
# ---------------------------------------------------------------------------

def test_compose_budget_exact_outer_collapses():
    """ε_A = 0: композиция даёт (Δ_B, η_A + η_B, ε_B)."""
    budget = compose_budget(_make_report(0.0, 0.01, 100.0), _make_report(0.05, 0.02, 10.0), 1.0)
    assert budget.delta == 10.0
    assert abs(budget.eta - 0.03) < 1e-15
    assert budget.eps == 0.05


def test_compose_budget_accumulates():
    budget = compose_budget(_make_report(0.01, 0.01, 100.0), _make_report(0.02, 0.02, 10.0), 1.0)
    assert budget.eps > 0.03
    assert budget.eta > 0.03
    assert budget.delta < 10.0


def test_compose_budget_violation():
    with pytest.raises(BudgetViolation):
        compose_budget(_make_report(2.0, 0.0, 100.0), _make_report(0.0, 0.0, 10.0), 1.0)
    with pytest.raises(BudgetViolation):
        compose_budget(_make_report(0.1, 0.0, 100.0), _make_report(0.1, 0.0, 1.1), 1.0)
