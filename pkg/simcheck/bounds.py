"""
simcheck/bounds.py

Следствия симуляции: статсумма, эволюция во времени, шум, композиция.

Каждая проверка возвращает измеренную величину вместе с оценкой,
которую она обязана соблюдать; нарушения пишутся в лог.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import (
    BadForm, BudgetViolation, DimMismatch, NotLocalEncoding, RankPNotOne,
)
from hamcore.hamiltonian import Hamiltonian, assemble
from hamcore.linalg import (
    embed_operator, evolution_operator, locality_residual, operator_norm, trace_norm,
)
from hamcore.spectrum import Spectrum, as_matrix, diagonalize
from hamcore.terms import PAULI
from encoding.core import Encoding
from encoding.states import default_ancilla_state, emeas_gibbs, estate, fb_maps

from .report import SimulationReport
from .verify import simulator_spectrum

logger = logging.getLogger(__name__)

# константа из доказательства леммы о композиции симуляций
COMPOSE_CONSTANT = 2.0 * np.sqrt(2.0)


@dataclass
class PartitionCheck:
    """Относительная ошибка статсуммы и её оценка."""
    relative_error: float
    bound: float
    beta: float
    energy_error: Optional[float] = None

    @property
    def holds(self) -> bool:
        return self.relative_error <= self.bound

    def as_triple(self) -> Tuple[float, float, float]:
        return (self.beta, self.relative_error, self.bound)


@dataclass
class TimeEvolutionPoint:
    """Расстояние эволюционировавших состояний в момент t."""
    t: float
    distance: float
    bound: float
    f_distance: float = 0.0

    @property
    def holds(self) -> bool:
        return self.distance <= self.bound and self.f_distance <= self.bound


@dataclass
class NoiseCheck:
    """Индуцированный канал на исходной системе и расстояния до его образа."""
    induced_kraus: List[np.ndarray]
    distance: float
    bound: float
    delta_leak: float
    estate_distance: float
    strong_residual: Optional[float] = None
    supports: List[Tuple[int, ...]] = field(default_factory=list)
    allowed_sites: Tuple[int, ...] = ()

    @property
    def local_ok(self) -> bool:
        allowed = set(self.allowed_sites)
        return all(set(s) <= allowed for s in self.supports)

    def as_triple(self) -> Tuple[float, float, float]:
        return (self.delta_leak, self.distance, self.bound)


@dataclass
class ComposedBudget:
    """(Δ, η, ε) композиции двух симуляций."""
    delta: float
    eta: float
    eps: float


def _spectrum_or(h_sim: Hamiltonian, spectrum: Optional[Spectrum], tol: Tolerances) -> Spectrum:
    return spectrum if spectrum is not None else simulator_spectrum(h_sim, tol)


def _gibbs(spec: Spectrum, beta: float) -> np.ndarray:
    weights = -beta * spec.eigenvalues
    weights = np.exp(weights - logsumexp(weights))
    vecs = spec.eigenvectors
    return (vecs * weights) @ vecs.conj().T


def partition_check(h: Hamiltonian, h_sim: Hamiltonian, e: Encoding, delta: float,
                    beta: float, eps: float, mode: str = "state",
                    tol: Tolerances = DEFAULT_TOLERANCES,
                    spectrum: Optional[Spectrum] = None) -> PartitionCheck:
    """
    Сравнивает Z_{H'}(β) с (p+q)·Z_H(β).

    Оценка: (d')^m e^{−βΔ} / ((p+q) d^n e^{−β‖H‖}) + (e^{εβ} − 1).
    В режиме "gibbs" дополнительно измеряется
    |tr[emeas_gibbs(H)·e^{−βH'}/Z'] − ⟨H⟩_β|.

    Args:
        eps: сертифицированная ε (например, eps_certified из отчёта)
    """
    if mode not in ("state", "gibbs"):
        raise BadForm(f"Неизвестный режим partition_check: '{mode}'")
    target = assemble(h).entries
    spec_h = diagonalize(target, tol)
    spec_sim = _spectrum_or(h_sim, spectrum, tol)
    mult = e.multiplicity

    log_z = logsumexp(-beta * spec_h.eigenvalues)
    log_z_sim = logsumexp(-beta * spec_sim.eigenvalues)
    relative = abs(np.exp(log_z_sim - np.log(mult) - log_z) - 1.0)

    norm_h = float(np.max(np.abs(spec_h.eigenvalues))) if spec_h.dim else 0.0
    shell = np.exp(
        h_sim.n * np.log(h_sim.d) - beta * delta
        - np.log(mult) - h.n * np.log(h.d) + beta * norm_h
    )
    bound = float(shell + np.expm1(eps * beta))

    energy_error = None
    if mode == "gibbs":
        rho_target = _gibbs(spec_h, beta)
        rho_sim = _gibbs(spec_sim, beta)
        measured = np.trace(emeas_gibbs(e, target).entries @ rho_sim).real
        exact = np.trace(target @ rho_target).real
        energy_error = float(abs(measured - exact))

    result = PartitionCheck(float(relative), bound, float(beta), energy_error)
    if not result.holds:
        logger.warning(
            "Статсумма: ошибка %.3e превышает оценку %.3e при β = %g", relative, bound, beta
        )
    return result


def time_evolution_check(h: Hamiltonian, h_sim: Hamiltonian, e: Encoding, rho,
                         times: Sequence[float], eps: float, eta: float,
                         tol: Tolerances = DEFAULT_TOLERANCES,
                         spectrum: Optional[Spectrum] = None) -> List[TimeEvolutionPoint]:
    """
    Для каждого t: ‖e^{−iH't}ρ'e^{iH't} − E_state(e^{−iHt}ρe^{iHt})‖₁ и
    F-вариант ‖F(e^{−iH't}ρ'e^{iH't}) − e^{−iHt}F(ρ')e^{iHt}‖₁,
    оба против оценки 2εt + 4η.
    """
    target = assemble(h).entries
    rho = as_matrix(rho)
    rho_sim = estate(e, rho).entries
    f_initial, _ = fb_maps(e, rho_sim)
    spec_sim = _spectrum_or(h_sim, spectrum, tol)
    vecs = spec_sim.eigenvectors

    points = []
    for t in times:
        u_sim = (vecs * np.exp(-1j * t * spec_sim.eigenvalues)) @ vecs.conj().T
        u = evolution_operator(target, t)
        evolved_sim = u_sim @ rho_sim @ u_sim.conj().T
        evolved = u @ rho @ u.conj().T
        distance = trace_norm(evolved_sim - estate(e, evolved).entries)
        f_evolved, _ = fb_maps(e, evolved_sim)
        f_distance = trace_norm(f_evolved.entries - u @ f_initial.entries @ u.conj().T)
        point = TimeEvolutionPoint(float(t), distance, 2 * eps * t + 4 * eta, f_distance)
        if not point.holds:
            logger.warning(
                "Эволюция: при t = %g расстояние %.3e (F: %.3e) превышает %.3e",
                t, distance, f_distance, point.bound,
            )
        points.append(point)
    return points


def depolarizing_kraus(site: int, n: int, p: float) -> List[np.ndarray]:
    """Краусовы операторы деполяризующего канала на одном кубите из n."""
    if not 0.0 <= p <= 1.0:
        raise BadForm(f"Вероятность деполяризации вне [0, 1]: {p}")
    ops = [np.sqrt(1.0 - 3.0 * p / 4.0) * np.eye(2)]
    ops += [np.sqrt(p / 4.0) * PAULI[ch] for ch in "XYZ"]
    return [embed_operator(k, [site], n, 2) for k in ops]


def _nontrivial_sites(op: np.ndarray, n: int, d: int, tol: float) -> Tuple[int, ...]:
    scale = max(1.0, operator_norm(op))
    sites = []
    for s in range(n):
        others = [x for x in range(n) if x != s]
        if locality_residual(op, others, n, d) > tol * scale:
            sites.append(s)
    return tuple(sites)


def noise_roundtrip(e: Encoding, kraus_sim: Sequence, rho, p_low=None, eta: float = 0.0,
                    strong: bool = False,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> NoiseCheck:
    """
    Переносит шум N' симулятора на исходную систему.

    N(ρ) = F(N'(E_state(ρ))) с краусовыми операторами
    N_{ijk} = √λ_j (1 ⊗ ⟨ψ_i|)V†N'_kV(1 ⊗ |ψ_j⟩), где σ = Σ λ_j|ψ_j⟩⟨ψ_j|.

    Args:
        e: локальное кодирование
        kraus_sim: операторы Крауса N' на полном пространстве симулятора
        rho: состояние исходной системы
        p_low: P_{≤Δ}(H'); по умолчанию E(1)
        eta: сертифицированная η
        strong: требовать rank(P) = 1 и проверять E(1)N'(ρ')E(1) = E_state(N(ρ))

    Raises:
        NotLocalEncoding: если кодирование не локально
        RankPNotOne: если strong и rank(P) != 1
    """
    if not e.is_local or e.n_in is None or e.d_in is None:
        raise NotLocalEncoding("noise_roundtrip требует локальное кодирование")
    if strong and e.p != 1:
        raise RankPNotOne(f"Сильная форма требует rank(P) = 1, получено {e.p}")
    kraus_sim = [as_matrix(k) for k in kraus_sim]
    if any(k.shape != (e.dim_out, e.dim_out) for k in kraus_sim):
        raise DimMismatch("Операторы Крауса не действуют на пространстве симулятора")
    completeness = sum(k.conj().T @ k for k in kraus_sim)
    if operator_norm(completeness - np.eye(e.dim_out)) > tol.tol_eig:
        raise BadForm("Канал симулятора не сохраняет след")

    rho = as_matrix(rho)
    sigma = default_ancilla_state(e)
    lam, psi = np.linalg.eigh((sigma + sigma.conj().T) / 2)
    p_values, p_vecs = np.linalg.eigh((e.proj_p + e.proj_p.conj().T) / 2)
    p_basis = p_vecs[:, p_values > 0.5]
    one = np.eye(e.dim_in)

    induced = []
    for k in kraus_sim:
        pulled = e.v.conj().T @ k @ e.v
        for i in range(p_basis.shape[1]):
            left = np.kron(one, p_basis[:, i].reshape(-1, 1))
            for j in range(len(lam)):
                if lam[j] <= tol.tol_eig:
                    continue
                right = np.kron(one, psi[:, j].reshape(-1, 1))
                op = np.sqrt(lam[j]) * (left.conj().T @ pulled @ right)
                if operator_norm(op) > tol.tol_eig:
                    induced.append(op)

    rho_sim = estate(e, rho).entries
    noisy_sim = sum(k @ rho_sim @ k.conj().T for k in kraus_sim)
    noisy = sum(k @ rho @ k.conj().T for k in induced) if induced else np.zeros_like(rho)

    projector = e.encoded_projector() if p_low is None else as_matrix(p_low)
    delta_leak = float(max(0.0, 1.0 - np.trace(projector @ noisy_sim).real))
    e1 = e.encoded_projector()
    distance = trace_norm(noisy_sim - e1 @ noisy_sim @ e1)
    bound = float(np.sqrt(delta_leak * (4.0 - 3.0 * delta_leak)) + 8.0 * eta)

    image = estate(e, noisy).entries
    estate_distance = trace_norm(noisy_sim - image)
    strong_residual = None
    if e.p == 1:
        strong_residual = trace_norm(e1 @ noisy_sim @ e1 - image)

    n_in, d_in = e.n_in, e.d_in
    supports = [_nontrivial_sites(op, n_in, d_in, 1e-9) for op in induced]
    touched = set()
    for k in kraus_sim:
        touched.update(_nontrivial_sites(k, e.n_out, e.d_out, 1e-9))
    allowed = tuple(b.orig_site for b in e.locality if touched & set(b.sim_sites))

    result = NoiseCheck(induced, distance, bound, delta_leak, estate_distance,
                        strong_residual, supports, allowed)
    if distance > bound + tol.tol_eig:
        logger.warning("Шум: расстояние %.3e превышает оценку %.3e", distance, bound)
    return result


def compose_budget(r_ab: SimulationReport, r_bc: SimulationReport, norm_c: float) -> ComposedBudget:
    """
    (Δ, η, ε) для A, симулирующего C через B.

    r_ab: отчёт "A симулирует B" (ε_A, η_A); r_bc: "B симулирует C" (Δ_B, ε_B, η_B).
    Щель между низкоэнергетическими частями B берётся консервативно:
    Δ_G = Δ_B − ‖C‖ − ε_B.

    Raises:
        BudgetViolation: если ε_A, ε_B > ‖C‖ или Δ_B < ‖C‖ + 2ε_A + ε_B
    """
    eps_a, eta_a = r_ab.eps_certified, r_ab.eta_measured
    eps_b, eta_b, delta_b = r_bc.eps_certified, r_bc.eta_measured, r_bc.delta
    if eps_a > norm_c or eps_b > norm_c:
        raise BudgetViolation(
            f"ε_A = {eps_a:.3g}, ε_B = {eps_b:.3g} должны быть <= ‖C‖ = {norm_c:.3g}"
        )
    if delta_b < norm_c + 2 * eps_a + eps_b:
        raise BudgetViolation(
            f"Δ_B = {delta_b:.6g} < ‖C‖ + 2ε_A + ε_B = {norm_c + 2 * eps_a + eps_b:.6g}"
        )
    gap = delta_b - norm_c - eps_b
    if eps_a == 0.0:
        return ComposedBudget(delta_b, eta_a + eta_b, eps_b)
    correction = COMPOSE_CONSTANT * eps_a / gap
    eta = eta_a + eta_b + correction
    eps = eps_a + eps_b + correction * (norm_c + eps_a + 2 * eps_b)
    return ComposedBudget(delta_b - eps_a, eta, eps)
