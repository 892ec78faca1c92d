"""
hamcore/terms.py

Термы гамильтониана: символьная строка Паули и плотный локальный блок.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple, Optional, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import BadSupport, NotHermitian, HamforgeError, DimMismatch
from .linalg import hermiticity_defect


PAULI_LETTERS = "XYZ"

PAULI = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(letters: str) -> np.ndarray:
    """Матрица тензорного произведения букв (I допускается)."""
    out = np.ones((1, 1), dtype=complex)
    for letter in letters:
        out = np.kron(out, PAULI[letter])
    return out


def _check_support(sites: Sequence[int]) -> Tuple[int, ...]:
    sites = tuple(int(s) for s in sites)
    if any(s < 0 for s in sites):
        raise BadSupport(f"Отрицательный номер узла: {sites}")
    if any(b <= a for a, b in zip(sites, sites[1:])):
        raise BadSupport(f"Узлы должны строго возрастать: {sites}")
    return sites


@dataclass(frozen=True)
class PauliTerm:
    """
    Взвешенная строка Паули.

    Пустые sites означают явный тождественный терм.
    """
    sites: Tuple[int, ...]
    letters: str
    weight: float = 1.0
    origin: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'sites', _check_support(self.sites))
        letters = "".join(self.letters)
        object.__setattr__(self, 'letters', letters)
        if len(letters) != len(self.sites):
            raise BadSupport(
                f"Число букв ({len(letters)}) не равно числу узлов ({len(self.sites)})"
            )
        if any(ch not in PAULI_LETTERS for ch in letters):
            raise HamforgeError(f"Допустимы только буквы X, Y, Z: '{letters}'")
        weight = float(self.weight)
        if not math.isfinite(weight):
            raise HamforgeError(f"Вес терма должен быть конечным: {self.weight}")
        object.__setattr__(self, 'weight', weight)

    @property
    def is_identity(self) -> bool:
        return len(self.sites) == 0

    @property
    def support(self) -> Tuple[int, ...]:
        return self.sites

    @property
    def y_count(self) -> int:
        return self.letters.count('Y')

    def block(self) -> np.ndarray:
        """Матрица строки на собственном носителе (без веса)."""
        return pauli_matrix(self.letters)

    def scaled(self, factor: float) -> "PauliTerm":
        return PauliTerm(self.sites, self.letters, self.weight * factor, self.origin)

    def shifted(self, mapping) -> "PauliTerm":
        """Переносит терм на другие узлы; mapping: старый узел -> новый."""
        pairs = sorted((mapping[s], ch) for s, ch in zip(self.sites, self.letters))
        return PauliTerm(
            tuple(p[0] for p in pairs), "".join(p[1] for p in pairs), self.weight, self.origin
        )

    def with_origin(self, origin: str) -> "PauliTerm":
        return PauliTerm(self.sites, self.letters, self.weight, origin)

    def label(self) -> str:
        if self.is_identity:
            return "I"
        return " ".join(f"{ch}{s}" for s, ch in zip(self.sites, self.letters))

    def __str__(self) -> str:
        return f"{self.weight:+.6g}·{self.label()}"


@dataclass(eq=False)
class LocalTerm:
    """Плотный эрмитов блок на упорядоченном носителе."""
    support: Tuple[int, ...]
    block: np.ndarray
    weight: float = 1.0
    origin: Optional[str] = None

    def __post_init__(self):
        self.support = _check_support(self.support)
        block = np.array(self.block, dtype=complex)
        if block.ndim != 2 or block.shape[0] != block.shape[1]:
            raise DimMismatch(f"Блок должен быть квадратным, получено {block.shape}")
        tol = DEFAULT_TOLERANCES.tol_herm
        scale = max(1.0, float(np.max(np.abs(block)))) if block.size else 1.0
        if hermiticity_defect(block) > tol * scale:
            raise NotHermitian(
                f"Блок на {self.support} не эрмитов (отклонение {hermiticity_defect(block):.3g})"
            )
        block.setflags(write=False)
        self.block = block
        self.weight = float(self.weight)
        if not math.isfinite(self.weight):
            raise HamforgeError(f"Вес терма должен быть конечным: {self.weight}")

    @property
    def sites(self) -> Tuple[int, ...]:
        return self.support

    def local_dim(self) -> int:
        """Локальная размерность, выведенная из размера блока."""
        k = len(self.support)
        if k == 0:
            return 1
        return int(round(self.block.shape[0] ** (1.0 / k)))

    def scaled(self, factor: float) -> "LocalTerm":
        return LocalTerm(self.support, self.block, self.weight * factor, self.origin)

    def with_origin(self, origin: str) -> "LocalTerm":
        return LocalTerm(self.support, self.block, self.weight, origin)

    def __str__(self) -> str:
        return f"{self.weight:+.6g}·Block{list(self.support)}"


def term_block(term) -> np.ndarray:
    """Взвешенная матрица терма на его носителе."""
    if isinstance(term, PauliTerm):
        return term.weight * term.block()
    return term.weight * term.block
