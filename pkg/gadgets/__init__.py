"""
gadgets - Пертурбативные гаджеты

Экспортирует:
- PerturbativeGadget, эффективный гамильтониан и сборку симулятора
- Поиск сертифицированного Δ (DeltaSearch, delta_for)
- Гаджеты с медиаторами: subdivision, fork, crossing, Y-elimination, 3 -> 2
- Логический кубит K4 (Гейзенберг / XY) и компиляцию в него
- Гаджеты-подпространства: удаление 1-локальной части, тройки
- parallel_merge
"""

from .base import (
    PerturbativeGadget, GadgetReport, gadget_report, effective_hamiltonian,
    effective_mismatch, build_simulator, schedule, pauli_hamiltonian, with_passthrough,
    DELTA_EXPONENTS,
)
from .search import DeltaSearch, SweepPoint, seed_delta, seed_formula, lambda_bound, delta_for
from .mediator import subdivision_gadget, fork_gadget, crossing_gadget, crossing_weights
from .reductions import y_elimination_gadget, y_support, y_support_groups, three_to_two_gadget
from .heisenberg import (
    LogicalQubitGadget, logical_basis, logical_coefficients, heisenberg_first_order,
    heisenberg_second_order, second_order_closed_form, xy_variant, first_order_table,
    second_order_table, FirstOrderRow, SecondOrderRow, solve_pair_weights, heisenberg_compile,
)
from .subspace import (
    SubspaceEncoding, one_local_deletion_gadget, deletion_form, subspace3_gadget,
    subspace_interaction,
)
from .merge import parallel_merge

__all__ = [
    'PerturbativeGadget',
    'GadgetReport',
    'gadget_report',
    'effective_hamiltonian',
    'effective_mismatch',
    'build_simulator',
    'schedule',
    'pauli_hamiltonian',
    'with_passthrough',
    'DELTA_EXPONENTS',
    'DeltaSearch',
    'SweepPoint',
    'seed_delta',
    'seed_formula',
    'lambda_bound',
    'delta_for',
    'subdivision_gadget',
    'fork_gadget',
    'crossing_gadget',
    'crossing_weights',
    'y_elimination_gadget',
    'y_support',
    'y_support_groups',
    'three_to_two_gadget',
    'LogicalQubitGadget',
    'logical_basis',
    'logical_coefficients',
    'heisenberg_first_order',
    'heisenberg_second_order',
    'second_order_closed_form',
    'xy_variant',
    'first_order_table',
    'second_order_table',
    'FirstOrderRow',
    'SecondOrderRow',
    'solve_pair_weights',
    'heisenberg_compile',
    'SubspaceEncoding',
    'one_local_deletion_gadget',
    'deletion_form',
    'subspace3_gadget',
    'subspace_interaction',
    'parallel_merge',
]
