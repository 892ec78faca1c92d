"""
pipeline/classify.py

Классификация наборов взаимодействий: classical / stoquastic / universal.

2-локальная часть взаимодействия записывается вещественной матрицей
M_ab = tr((σ_a ⊗ σ_b)H)/4. Сопряжение U⊗U поворачивает M в R M Rᵀ,
поэтому решение принимается по инвариантам: антисимметричная часть,
ранг симметричной и общая главная ось.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from hamcore.errors import DimMismatch, NotHermitian, Only1Local
from hamcore.linalg import hermiticity_defect
from hamcore.terms import PAULI, pauli_matrix


CLASSICAL = 'classical'
STOQUASTIC = 'stoquastic'
UNIVERSAL = 'universal'

SIGMAS = (PAULI['X'], PAULI['Y'], PAULI['Z'])


@dataclass
class InteractionSet:
    """Набор 1- и 2-кубитных эрмитовых взаимодействий."""
    interactions: Tuple[np.ndarray, ...]
    label: Optional[str] = None

    def __post_init__(self):
        blocks = []
        for idx, block in enumerate(self.interactions):
            block = np.asarray(block, dtype=complex)
            if block.shape not in ((2, 2), (4, 4)):
                raise DimMismatch(f"Взаимодействие #{idx}: ожидался блок 2x2 или 4x4, получено {block.shape}")
            scale = max(1.0, float(np.max(np.abs(block))))
            if hermiticity_defect(block) > 1e-10 * scale:
                raise NotHermitian(f"Взаимодействие #{idx} не эрмитово")
            blocks.append(block)
        self.interactions = tuple(blocks)

    @classmethod
    def from_pauli(cls, items: Sequence[Dict[str, float]], label: Optional[str] = None) -> "InteractionSet":
        """
        Набор из словарей строк Паули: {"XX": 1, "YY": 1}, {"Z": 1} или {"XX": 2, "Z": 1}.

        Словарь только из однобуквенных строк даёт блок 2x2. Если в словаре
        есть двухбуквенная строка, однобуквенные действуют на первый кубит
        ("Z" читается как "ZI"). 'I' обозначает тождественный множитель.
        """
        blocks = []
        for idx, item in enumerate(items):
            lengths = {len(word) for word in item}
            if not item or not lengths <= {1, 2}:
                raise DimMismatch(f"Взаимодействие #{idx}: строки должны быть длины 1 или 2")
            width = max(lengths)
            blocks.append(sum(w * pauli_matrix(word.ljust(width, 'I')) for word, w in item.items()))
        return cls(tuple(blocks), label)

    def __len__(self) -> int:
        return len(self.interactions)

    def __str__(self) -> str:
        name = self.label or "S"
        return f"InteractionSet({name}: {len(self)} взаимодействий)"


def two_local_matrix(block) -> np.ndarray:
    """M_ab = tr((σ_a ⊗ σ_b)H)/4 — коэффициенты 2-локальной части."""
    block = np.asarray(block, dtype=complex)
    if block.shape != (4, 4):
        raise DimMismatch(f"Ожидался 2-кубитный блок, получено {block.shape}")
    m = np.empty((3, 3))
    for a, sa in enumerate(SIGMAS):
        for b, sb in enumerate(SIGMAS):
            m[a, b] = np.trace(np.kron(sa, sb) @ block).real / 4.0
    return m


def one_local_vectors(block) -> List[np.ndarray]:
    """Векторы Блоха 1-локальных частей: одна для 2x2, две (A⊗1, 1⊗B) для 4x4."""
    block = np.asarray(block, dtype=complex)
    if block.shape == (2, 2):
        return [np.array([np.trace(s @ block).real / 2.0 for s in SIGMAS])]
    eye = np.eye(2)
    left = np.array([np.trace(np.kron(s, eye) @ block).real / 4.0 for s in SIGMAS])
    right = np.array([np.trace(np.kron(eye, s) @ block).real / 4.0 for s in SIGMAS])
    return [left, right]


def pauli_rank(block, tol: float = 1e-8) -> int:
    """Ранг Паули: ранг M с допуском tol·max(1, ‖M‖)."""
    m = two_local_matrix(block)
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    return int(np.sum(np.linalg.svd(m, compute_uv=False) > tol * scale))


def _is_parallel(vec: np.ndarray, axis: np.ndarray, tol: float) -> bool:
    return float(np.linalg.norm(vec - np.dot(vec, axis) * axis)) <= tol


def classify(s: InteractionSet, tol: float = 1e-8) -> str:
    """
    classical, stoquastic или universal.

    stoquastic: все антисимметричные части M нулевые, симметричные — ранга
    не выше 1 с общей осью v; classical дополнительно требует, чтобы все
    1-локальные части были параллельны v.

    Raises:
        Only1Local: в наборе нет взаимодействия с ненулевой 2-локальной частью
    """
    scale = max([1.0] + [float(np.max(np.abs(b))) for b in s.interactions])
    limit = tol * scale
    axis: Optional[np.ndarray] = None
    two_local = False
    vectors: List[np.ndarray] = []
    for block in s.interactions:
        vectors.extend(one_local_vectors(block))
        if block.shape != (4, 4):
            continue
        m = two_local_matrix(block)
        if np.max(np.abs(m)) <= limit:
            continue
        two_local = True
        if np.max(np.abs(m - m.T)) / 2.0 > limit:
            return UNIVERSAL
        values, vecs = np.linalg.eigh((m + m.T) / 2.0)
        significant = np.abs(values) > limit
        if int(np.sum(significant)) > 1:
            return UNIVERSAL
        v = vecs[:, int(np.argmax(np.abs(values)))]
        if axis is None:
            axis = v
        elif abs(abs(float(np.dot(axis, v))) - 1.0) > tol:
            return UNIVERSAL
    if not two_local:
        raise Only1Local(f"{s}: нет взаимодействия с 2-локальной частью")
    if all(_is_parallel(vec, axis, limit) for vec in vectors):
        return CLASSICAL
    return STOQUASTIC
