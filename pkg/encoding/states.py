"""
encoding/states.py

Отображения состояний: E_state, F/B, варианты для состояний Гиббса.
"""

from typing import Optional, Tuple

import numpy as np

from hamcore.config import DEFAULT_TOLERANCES
from hamcore.errors import BadAncilla, DegenerateEncoding, DimMismatch
from hamcore.linalg import partial_trace
from hamcore.spectrum import DenseOperator, as_matrix

from .core import Encoding


def default_ancilla_state(e: Encoding) -> np.ndarray:
    """σ = P/p для стандартного кодирования, иначе Q/q."""
    if e.p >= 1:
        return e.proj_p / e.p
    if e.q >= 1:
        return e.proj_q / e.q
    raise DegenerateEncoding("Кодирование с p + q = 0 не имеет состояния анциллы")


def estate(e: Encoding, rho, sigma=None, tol: float = 1e-9) -> DenseOperator:
    """
    E_state(ρ) = V(ρ ⊗ σ)V† (или V(ρ̄ ⊗ σ)V† при p = 0).

    Args:
        e: кодирование
        rho: матрица плотности на исходном пространстве
        sigma: состояние анциллы; по умолчанию P/p

    Raises:
        BadAncilla: если σ не лежит в P (или в Q при p = 0)
    """
    rho = as_matrix(rho)
    if rho.shape != (e.dim_in, e.dim_in):
        raise DimMismatch(f"ρ размера {rho.shape}, ожидалось {e.dim_in}")
    sigma = default_ancilla_state(e) if sigma is None else as_matrix(sigma)
    required = e.proj_p if e.p >= 1 else e.proj_q
    if sigma.shape != required.shape or np.max(np.abs(required @ sigma - sigma)) > tol:
        raise BadAncilla("Состояние анциллы не лежит в требуемом проекторе")
    base = rho if e.p >= 1 else rho.conj()
    out = e.v @ np.kron(base, sigma) @ e.v.conj().T
    return DenseOperator.of(out)


def fb_maps(e: Encoding, rho_sim) -> Tuple[DenseOperator, DenseOperator]:
    """
    F(ρ') = tr_E[(1 ⊗ P)V†ρ'V], B(ρ') = conj(tr_E[(1 ⊗ Q)V†ρ'V]).

    Returns:
        (F, B): положительные операторы на исходном пространстве
    """
    rho_sim = as_matrix(rho_sim)
    pulled = e.v.conj().T @ rho_sim @ e.v
    dims = [e.dim_in, e.anc_dim]
    one = np.eye(e.dim_in)
    f = partial_trace(np.kron(one, e.proj_p) @ pulled, dims, [0])
    b = partial_trace(np.kron(one, e.proj_q) @ pulled, dims, [0]).conj()
    f = (f + f.conj().T) / 2
    b = (b + b.conj().T) / 2
    return DenseOperator(f, hermitian=True), DenseOperator(b, hermitian=True)


def estate_gibbs(e: Encoding, rho) -> DenseOperator:
    """E(ρ)/(p+q): отображение, сохраняющее состояния Гиббса."""
    if e.multiplicity == 0:
        raise DegenerateEncoding("p + q = 0")
    return DenseOperator.of(e.extended_apply(as_matrix(rho)) / e.multiplicity)


def emeas_gibbs(e: Encoding, a) -> DenseOperator:
    """
    Парное к estate_gibbs отображение наблюдаемых.

    ((p+q)/p)·V(A ⊗ P)V† при p ≠ 0, иначе ((p+q)/q)·V(Ā ⊗ Q)V†;
    tr[emeas_gibbs(A)·estate_gibbs(ρ)] = tr(Aρ).
    """
    a = as_matrix(a)
    if e.multiplicity == 0:
        raise DegenerateEncoding("p + q = 0")
    if e.p >= 1:
        out = (e.multiplicity / e.p) * (e.v @ np.kron(a, e.proj_p) @ e.v.conj().T)
    else:
        out = (e.multiplicity / e.q) * (e.v @ np.kron(a.conj(), e.proj_q) @ e.v.conj().T)
    return DenseOperator.of(out)
