"""
simcheck/verify.py

Проверка, что H' является (Δ, η, ε)-симуляцией H при заданном кодировании.

Порядок действий:
1. P_{≤Δ}(H') из полного спектра H'
2. Ẽ: поворот V на P_{≤Δ} (полярное разложение)
3. η = ‖Ṽ − V‖, ε = ‖H'_{≤Δ} − Ẽ(H)‖ и поблочные ошибки собственных значений
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import DimMismatch, RankMismatch, SubspaceMismatch, TooFar
from hamcore.hamiltonian import Hamiltonian, assemble
from hamcore.linalg import operator_norm
from hamcore.spectrum import DenseOperator, Spectrum, as_matrix, diagonalize, low_energy_projector
from encoding.core import Encoding

from .report import SimulationReport

logger = logging.getLogger(__name__)


def align_isometry(e: Encoding, p_low, tol: Tolerances = DEFAULT_TOLERANCES) -> Encoding:
    """
    Поворачивает кодирование так, чтобы Ẽ(1) совпало с p_low.

    U — унитарная часть полярного разложения p_low·E(1) + (1 − p_low)(1 − E(1));
    она переводит E(1) в p_low, Ṽ = U·V.

    Raises:
        RankMismatch: если ранги p_low и E(1) различны
        TooFar: если ‖p_low − E(1)‖ >= 1
    """
    p_low = as_matrix(p_low)
    e1 = e.encoded_projector()
    if p_low.shape != e1.shape:
        raise DimMismatch(f"Проектор {p_low.shape} не совпадает с выходом кодирования {e1.shape}")
    rank_low = int(round(float(np.trace(p_low).real)))
    rank_enc = int(round(float(np.trace(e1).real)))
    if rank_low != rank_enc:
        raise RankMismatch(f"rank(P_low) = {rank_low}, rank(E(1)) = {rank_enc}")
    distance = operator_norm(p_low - e1)
    if distance >= 1.0 - tol.tol_orth:
        raise TooFar(f"‖P_low − E(1)‖ = {distance:.6g} >= 1")
    one = np.eye(e1.shape[0])
    rotation_source = p_low @ e1 + (one - p_low) @ (one - e1)
    u, _ = scipy.linalg.polar(rotation_source)
    return Encoding(
        u @ e.v, e.dim_in, e.anc_dim, e.proj_p, e.proj_q, e.locality,
        n_in=e.n_in, d_in=e.d_in, n_out=e.n_out, d_out=e.d_out,
    )


def isometry_distance(e: Encoding, aligned: Encoding) -> float:
    """‖Ṽ − V‖ на носителе 1 ⊗ (P + Q)."""
    support = e.support_basis()
    return operator_norm((aligned.v - e.v) @ support)


def eigenvalue_errors(target_values: Sequence[float], sim_values: Sequence[float],
                      multiplicity: int) -> List[float]:
    """
    Поблочное сравнение спектров.

    i-е собственное значение цели сопоставляется блоку из multiplicity
    соседних нижних собственных значений симулятора; ошибка i-го — максимум
    |λ_i(H) − λ_j(H')| по блоку.
    """
    target_values = np.sort(np.asarray(target_values, dtype=float))
    sim_values = np.sort(np.asarray(sim_values, dtype=float))
    need = len(target_values) * multiplicity
    if len(sim_values) < need:
        raise SubspaceMismatch(
            f"У симулятора {len(sim_values)} собственных значений, нужно {need}"
        )
    errors = []
    for i, value in enumerate(target_values):
        block = sim_values[i * multiplicity:(i + 1) * multiplicity]
        errors.append(float(np.max(np.abs(block - value))))
    return errors


def _check_dims(h: Hamiltonian, h_sim: Hamiltonian, e: Encoding) -> None:
    if e.dim_in != h.dim:
        raise DimMismatch(f"Кодирование ожидает размерность {e.dim_in}, у цели {h.dim}")
    if e.dim_out != h_sim.dim:
        raise DimMismatch(f"Кодирование выдаёт размерность {e.dim_out}, у симулятора {h_sim.dim}")


def simulator_spectrum(h_sim: Hamiltonian, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Полный спектр симулятора (сборка с учётом dim_cap)."""
    return diagonalize(assemble(h_sim), tol)


def low_energy_part(spec: Spectrum, delta: float) -> Tuple[DenseOperator, np.ndarray]:
    """(P_{≤Δ}, H'_{≤Δ}) из готового спектра."""
    p_low = low_energy_projector(spec, delta)
    k = spec.count_below(delta)
    vecs = spec.subspace(k)
    h_low = (vecs * spec.eigenvalues[:k]) @ vecs.conj().T
    return p_low, h_low


def verify_simulation(h: Hamiltonian, h_sim: Hamiltonian, e: Encoding, delta: float,
                      eps: Optional[float] = None, eta: Optional[float] = None,
                      tol: Tolerances = DEFAULT_TOLERANCES,
                      spectrum: Optional[Spectrum] = None) -> SimulationReport:
    """
    Проверяет (Δ, η, ε)-симуляцию H гамильтонианом H'.

    Args:
        h: целевой гамильтониан
        h_sim: гамильтониан симулятора
        e: кодирование dim(h) -> dim(h_sim)
        delta: порог Δ
        eps, eta: требуемые значения; None — без требования
        spectrum: заранее вычисленный спектр H' (иначе считается здесь)

    Returns:
        SimulationReport; eps_measured — максимум per_eigenvalue_errors,
        passed = eps_measured <= eps и eta_measured <= eta

    Raises:
        SubspaceMismatch: если rank(P_{≤Δ}) != (p+q)·dim(h)
        DegenerateCut: если собственное значение H' ближе degeneracy_tol к Δ
    """
    _check_dims(h, h_sim, e)
    target = assemble(h).entries
    spec = spectrum if spectrum is not None else simulator_spectrum(h_sim, tol)
    p_low, h_low = low_energy_part(spec, delta)
    rank = spec.count_below(delta)
    expected = e.multiplicity * h.dim
    if rank != expected:
        raise SubspaceMismatch(
            f"rank(P_≤Δ) = {rank} при Δ = {delta:.6g}, ожидалось (p+q)·dim = {expected}"
        )

    aligned = align_isometry(e, p_low, tol)
    eta_measured = isometry_distance(e, aligned)
    eta_bound = np.sqrt(2.0) * operator_norm(p_low.entries - e.encoded_projector())
    if eta_measured > eta_bound + tol.tol_orth:
        # ‖Ṽ − V‖ <= √2·‖P_≤Δ − E(1)‖ для полярного выравнивания
        logger.warning(
            "η = %.3e превышает оценку выравнивания √2·‖P_≤Δ − E(1)‖ = %.3e", eta_measured, eta_bound
        )
    eps_operator = operator_norm(h_low - aligned.extended_apply(target))

    target_values = scipy.linalg.eigvalsh((target + target.conj().T) / 2)
    errors = eigenvalue_errors(target_values, spec.eigenvalues[:rank], e.multiplicity)
    eps_measured = max(errors, default=0.0)
    if eps_measured > eps_operator + tol.tol_eig:
        # поблочные ошибки не могут превышать операторную норму
        logger.warning(
            "Спектральная ошибка %.3e превышает ‖H'_≤Δ − Ẽ(H)‖ = %.3e", eps_measured, eps_operator
        )

    passed = True
    if eps is not None:
        passed = passed and eps_measured <= eps
    if eta is not None:
        passed = passed and eta_measured <= eta
    return SimulationReport(
        delta=float(delta),
        eta_measured=float(eta_measured),
        eps_measured=float(eps_measured),
        eps_operator=float(eps_operator),
        eta_bound=float(eta_bound),
        rank=rank,
        multiplicity=e.multiplicity,
        requested_eps=eps,
        requested_eta=eta,
        passed=bool(passed),
        per_eigenvalue_errors=errors,
    )
