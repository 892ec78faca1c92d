"""
encoding - Кодирования наблюдаемых E(M) = V(M ⊗ P + M̄ ⊗ Q)V†

Экспортирует:
- Encoding, LocalBlock и сборку локальных кодирований
- apply, отображения состояний (estate, fb_maps, Гиббс)
- Проверку аксиом и локальности
- Конструкции complex -> real, кудиты -> кубиты, композицию
"""

from .core import (
    Encoding, LocalBlock, apply, local_encoding, identity_encoding,
    assemble_isometry, mediator_encoding, ancilla_encoding,
)
from .states import estate, fb_maps, estate_gibbs, emeas_gibbs, default_ancilla_state
from .axioms import (
    AxiomReport, verify_encoding_axioms, channel_check,
    local_action_residual, local_image,
)
from .constructions import (
    SimulatorInstance, complex_to_real_enc, complex_to_real_local_encoding,
    complex_to_real_sim, qudit_to_qubit, perfect_simulation,
)
from .compose import compose

__all__ = [
    'Encoding',
    'LocalBlock',
    'apply',
    'local_encoding',
    'identity_encoding',
    'assemble_isometry',
    'mediator_encoding',
    'ancilla_encoding',
    'estate',
    'fb_maps',
    'estate_gibbs',
    'emeas_gibbs',
    'default_ancilla_state',
    'AxiomReport',
    'verify_encoding_axioms',
    'channel_check',
    'local_action_residual',
    'local_image',
    'SimulatorInstance',
    'complex_to_real_enc',
    'complex_to_real_local_encoding',
    'complex_to_real_sim',
    'qudit_to_qubit',
    'perfect_simulation',
    'compose',
]
