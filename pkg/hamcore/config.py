"""
hamcore/config.py

Допуски и ограничения численной проверки.
"""

import os
from dataclasses import dataclass, replace


DIM_CAP_ENV = "HAMFORGE_DIM_CAP"
DEFAULT_DIM_CAP = 2 ** 14


@dataclass(frozen=True)
class Tolerances:
    """Набор допусков, общий для всех проверок."""
    tol_herm: float = 1e-10
    tol_orth: float = 1e-10
    tol_eig: float = 1e-9
    tol_assemble: float = 1e-9
    degeneracy_tol: float = 1e-8
    tol_phase: float = 1e-12
    delta_cap: float = 1e12
    delta_seed_constant: float = 16.0
    samples: int = 20
    seed: int = 1234

    def with_overrides(self, **kwargs) -> "Tolerances":
        """Возвращает копию с изменёнными полями."""
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()


def get_dim_cap() -> int:
    """
    Возвращает dim_cap с учётом переменной окружения HAMFORGE_DIM_CAP.

    Некорректное значение переменной игнорируется.
    """
    raw = os.environ.get(DIM_CAP_ENV)
    if raw:
        try:
            value = int(raw)
            if value > 0:
                return value
        except ValueError:
            pass
    return DEFAULT_DIM_CAP
