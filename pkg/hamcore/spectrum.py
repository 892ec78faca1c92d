"""
hamcore/spectrum.py

Плотный оператор, детерминированный эрмитов спектральный разложитель
и проектор на низкоэнергетическое подпространство.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.linalg

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import NotHermitian, DegenerateCut
from .linalg import hermiticity_defect


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Плотная матрица с флагом эрмитовости."""
    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"Ожидалась квадратная матрица, получено {m.shape}")
        if self.hermitian:
            scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
            if hermiticity_defect(m) > DEFAULT_TOLERANCES.tol_herm * scale:
                raise NotHermitian(
                    f"Оператор помечен эрмитовым, отклонение {hermiticity_defect(m):.3g}"
                )
        m.setflags(write=False)
        object.__setattr__(self, 'entries', m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    @classmethod
    def of(cls, m, tol: float = DEFAULT_TOLERANCES.tol_herm) -> "DenseOperator":
        """Оборачивает матрицу, определяя эрмитовость автоматически."""
        m = np.asarray(m, dtype=complex)
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        return cls(m, hermiticity_defect(m) <= tol * scale)


def as_matrix(a) -> np.ndarray:
    """Матрица из DenseOperator или array-like."""
    if isinstance(a, DenseOperator):
        return a.entries
    return np.asarray(a, dtype=complex)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Собственные значения по возрастанию и ортонормированные векторы-столбцы."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_tol: float = DEFAULT_TOLERANCES.degeneracy_tol

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def count_below(self, delta: float) -> int:
        return int(np.sum(self.eigenvalues <= delta))

    def lowest(self, k: int) -> np.ndarray:
        return self.eigenvalues[:k]

    def subspace(self, k: int) -> np.ndarray:
        """Столбцы k нижних собственных векторов."""
        return self.eigenvectors[:, :k]


def _fix_phases(vecs: np.ndarray, tol_phase: float) -> np.ndarray:
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        idx = np.flatnonzero(np.abs(col) > tol_phase)
        if idx.size == 0:
            continue
        lead = col[idx[0]]
        vecs[:, j] = col * (abs(lead) / lead)
    return vecs


def _cluster_order(values: np.ndarray, vecs: np.ndarray, tol: float) -> np.ndarray:
    """Порядок столбцов внутри вырожденных кластеров: лексикографический."""
    order = []
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < tol:
            stop += 1
        block = list(range(start, stop))
        if len(block) > 1:
            keys = {
                j: tuple(
                    x for z in np.round(vecs[:, j], 8) for x in (-z.real, -z.imag)
                )
                for j in block
            }
            block.sort(key=lambda j: keys[j])
        order.extend(block)
        start = stop
    return np.array(order, dtype=int)


def diagonalize(a: Union[DenseOperator, np.ndarray],
                tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """
    Полное спектральное разложение эрмитова оператора.

    Собственные значения по возрастанию; первая компонента каждого
    вектора с модулем > tol_phase вещественна и неотрицательна; внутри
    вырожденных кластеров векторы упорядочены лексикографически.

    Raises:
        NotHermitian: если оператор не эрмитов
    """
    if isinstance(a, DenseOperator):
        m = a.entries
        if not a.hermitian:
            raise NotHermitian("diagonalize требует эрмитов оператор")
    else:
        m = np.asarray(a, dtype=complex)
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if hermiticity_defect(m) > tol.tol_herm * scale:
            raise NotHermitian(f"Матрица не эрмитова (отклонение {hermiticity_defect(m):.3g})")
    if m.shape[0] == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0), dtype=complex), tol.degeneracy_tol)
    m = (m + m.conj().T) / 2
    values, vecs = scipy.linalg.eigh(m)
    vecs = _fix_phases(np.array(vecs, dtype=complex), tol.tol_phase)
    order = _cluster_order(values, vecs, tol.degeneracy_tol)
    values = values[order]
    vecs = vecs[:, order]
    values.setflags(write=False)
    vecs.setflags(write=False)
    return Spectrum(values, vecs, tol.degeneracy_tol)


def low_energy_projector(s: Spectrum, delta: float) -> DenseOperator:
    """
    Проектор на собственные векторы с собственными значениями <= Δ.

    Raises:
        DegenerateCut: если некоторое собственное значение ближе
            degeneracy_tol к Δ
    """
    close = np.abs(s.eigenvalues - delta) < s.degeneracy_tol
    if np.any(close):
        raise DegenerateCut(
            f"Порог Δ = {delta} совпадает с собственным значением {s.eigenvalues[close][0]}"
        )
    k = s.count_below(delta)
    basis = s.eigenvectors[:, :k]
    proj = basis @ basis.conj().T
    proj = (proj + proj.conj().T) / 2
    return DenseOperator(proj, hermitian=True)
