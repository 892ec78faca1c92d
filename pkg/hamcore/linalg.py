"""
hamcore/linalg.py

Плотная линейная алгебра на тензорных произведениях.

Соглашение: узел 0 — старший тензорный множитель.
"""

from typing import Sequence, List

import numpy as np
import scipy.linalg


def embed_operator(block: np.ndarray, support: Sequence[int], n: int, d: int = 2) -> np.ndarray:
    """
    Продолжает оператор на носителе support тождественным на остальные узлы.

    Args:
        block: матрица размера d^k x d^k, множители в порядке support
        support: номера узлов (в порядке множителей block)
        n: число узлов
        d: локальная размерность

    Returns:
        матрица d^n x d^n
    """
    support = list(support)
    k = len(support)
    block = np.asarray(block, dtype=complex)
    if k == 0:
        return block.reshape(1, 1)[0, 0] * np.eye(d ** n, dtype=complex)
    if support == list(range(k)):
        return np.kron(block, np.eye(d ** (n - k), dtype=complex))
    rest = [s for s in range(n) if s not in support]
    op = np.kron(block, np.eye(d ** (n - k), dtype=complex))
    order = support + rest
    perm = list(np.argsort(order))
    op = op.reshape([d] * (2 * n))
    op = op.transpose(perm + [n + p for p in perm])
    return op.reshape(d ** n, d ** n)


def permutation_matrix(dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """
    Унитарная перестановка тензорных множителей.

    Новый множитель j равен старому множителю order[j].
    """
    dims = list(dims)
    k = len(dims)
    total = int(np.prod(dims)) if dims else 1
    eye = np.eye(total).reshape(dims + dims)
    perm = eye.transpose(list(order) + list(range(k, 2 * k)))
    return perm.reshape(total, total)


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """
    Частичный след по всем множителям, кроме keep.

    Args:
        rho: оператор на пространстве с множителями dims
        dims: размерности множителей
        keep: сохраняемые множители (по возрастанию)
    """
    dims = list(dims)
    keep = sorted(keep)
    k = len(dims)
    t = np.asarray(rho).reshape(dims + dims)
    drop = [i for i in range(k) if i not in keep]
    cur = k
    for ax in sorted(drop, reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + cur)
        cur -= 1
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(dk, dk)


def operator_norm(a: np.ndarray) -> float:
    """Операторная норма (наибольшее сингулярное число)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def trace_norm(a: np.ndarray) -> float:
    """Следовая норма (сумма сингулярных чисел)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 'nuc'))


def hermiticity_defect(a: np.ndarray) -> float:
    """max |A - A†|."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a: np.ndarray, tol: float) -> bool:
    """Эрмитовость с допуском, масштабированным нормой элементов."""
    a = np.asarray(a)
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return hermiticity_defect(a) <= tol * scale


def locality_residual(op: np.ndarray, sites: Sequence[int], n: int, d: int = 2) -> float:
    """
    Расстояние от op до ближайшего оператора вида A_sites ⊗ 1.

    A берётся как нормированный частичный след, что даёт ноль тогда и
    только тогда, когда op действует только на sites.
    """
    sites = sorted(sites)
    reduced = partial_trace(op, [d] * n, sites) / d ** (n - len(sites))
    return operator_norm(np.asarray(op) - embed_operator(reduced, sites, n, d))


def acts_within(op: np.ndarray, sites: Sequence[int], n: int, d: int = 2,
                tol: float = 1e-9) -> bool:
    """True, если op действует нетривиально только на узлах sites."""
    return locality_residual(op, sites, n, d) <= tol * max(1.0, operator_norm(op))


def evolution_operator(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-iHt)."""
    return scipy.linalg.expm(-1j * t * np.asarray(h, dtype=complex))


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Случайная эрмитова матрица (GUE-подобная)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def random_density_matrix(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Случайная матрица плотности полного ранга."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def kron_all(mats: List[np.ndarray]) -> np.ndarray:
    """Тензорное произведение списка матриц."""
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out
