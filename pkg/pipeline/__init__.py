"""
pipeline - Компиляция гамильтонианов

Экспортирует:
- classify и InteractionSet: classical / stoquastic / universal
- PassManager и проходы, compile (compile_hamiltonian)
- CompilationPlan и budget_split
- layout_square_lattice, LatticeRouter, GridEmbedding
"""

from .classify import (
    InteractionSet, classify, pauli_rank, two_local_matrix, one_local_vectors,
    CLASSICAL, STOQUASTIC, UNIVERSAL,
)
from .plan import CompilationPlan, PassRecord, StageRecord, budget_split, weight_statistics
from .passes import (
    Pass, PassContext, PassResult, QuditPass, ComplexToRealPass, YEliminationPass,
    LocalityReductionPass, LogicalQubitPass, LatticePass, COMPILE_FAMILIES,
)
from .manager import PassManager, compile_hamiltonian, end_to_end_check, budget_chain
from .lattice import GridEmbedding, LatticeRouter, LatticeResult, is_grid_subgraph, layout_square_lattice

compile = compile_hamiltonian

__all__ = [
    'InteractionSet',
    'classify',
    'pauli_rank',
    'two_local_matrix',
    'one_local_vectors',
    'CLASSICAL',
    'STOQUASTIC',
    'UNIVERSAL',
    'CompilationPlan',
    'PassRecord',
    'StageRecord',
    'budget_split',
    'weight_statistics',
    'Pass',
    'PassContext',
    'PassResult',
    'QuditPass',
    'ComplexToRealPass',
    'YEliminationPass',
    'LocalityReductionPass',
    'LogicalQubitPass',
    'LatticePass',
    'COMPILE_FAMILIES',
    'PassManager',
    'compile_hamiltonian',
    'compile',
    'end_to_end_check',
    'budget_chain',
    'GridEmbedding',
    'LatticeRouter',
    'LatticeResult',
    'is_grid_subgraph',
    'layout_square_lattice',
]
