"""
hamcore - Операторная алгебра hamforge

Экспортирует:
- Термы (PauliTerm, LocalTerm) и Hamiltonian
- Сборку плотной матрицы и разложение Паули
- Детерминированный спектральный разложитель
- Допуски и иерархию ошибок
"""

from .config import Tolerances, DEFAULT_TOLERANCES, get_dim_cap
from .errors import HamforgeError
from .terms import PauliTerm, LocalTerm, PAULI, pauli_matrix, term_block
from .spectrum import DenseOperator, Spectrum, diagonalize, low_energy_projector, as_matrix
from .hamiltonian import (
    Hamiltonian, assemble, pauli_decompose, collect_pauli,
    from_pauli_dict, parse_pauli_label, norm_bound, FAMILY_TAGS,
)
from .families import audit_family
from .linalg import (
    embed_operator, permutation_matrix, partial_trace,
    operator_norm, trace_norm, acts_within, locality_residual,
)

__all__ = [
    'Tolerances',
    'DEFAULT_TOLERANCES',
    'get_dim_cap',
    'HamforgeError',
    'PauliTerm',
    'LocalTerm',
    'PAULI',
    'pauli_matrix',
    'term_block',
    'DenseOperator',
    'Spectrum',
    'diagonalize',
    'low_energy_projector',
    'as_matrix',
    'Hamiltonian',
    'assemble',
    'pauli_decompose',
    'collect_pauli',
    'from_pauli_dict',
    'parse_pauli_label',
    'norm_bound',
    'FAMILY_TAGS',
    'audit_family',
    'embed_operator',
    'permutation_matrix',
    'partial_trace',
    'operator_norm',
    'trace_norm',
    'acts_within',
    'locality_residual',
]
