"""
simcheck - Сертификация (Δ, η, ε)-симуляций

Экспортирует:
- SimulationReport и его текстовый формат
- align_isometry, verify_simulation, eigenvalue_errors
- Проверки статсуммы, эволюции во времени и шума
- compose_budget для цепочек симуляций
"""

from .report import SimulationReport, report_from_text
from .verify import (
    align_isometry, verify_simulation, eigenvalue_errors, isometry_distance,
    simulator_spectrum, low_energy_part,
)
from .bounds import (
    PartitionCheck, TimeEvolutionPoint, NoiseCheck, ComposedBudget,
    partition_check, time_evolution_check, noise_roundtrip, depolarizing_kraus,
    compose_budget, COMPOSE_CONSTANT,
)

__all__ = [
    'SimulationReport',
    'report_from_text',
    'align_isometry',
    'verify_simulation',
    'eigenvalue_errors',
    'isometry_distance',
    'simulator_spectrum',
    'low_energy_part',
    'PartitionCheck',
    'TimeEvolutionPoint',
    'NoiseCheck',
    'ComposedBudget',
    'partition_check',
    'time_evolution_check',
    'noise_roundtrip',
    'depolarizing_kraus',
    'compose_budget',
    'COMPOSE_CONSTANT',
]
