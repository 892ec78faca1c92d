"""
hamcore/families.py

Проверка принадлежности гамильтониана семейству взаимодействий.

Термы группируются по носителю, компоненты Паули на одном носителе
складываются, после чего проверяются правила семейства.
"""

from typing import Dict, Tuple

from .config import DEFAULT_TOLERANCES
from .errors import FamilyViolation, UnsupportedFamily


# 2-локальные буквы, составляющие взаимодействие семейства
FAMILY_PAIRS = {
    'heisenberg': ('XX', 'YY', 'ZZ'),
    'xy': ('XX', 'YY'),
}

REAL_LETTERS = {'XX', 'XZ', 'ZX', 'ZZ', 'X', 'Z'}
TIM_LETTERS = {'XX', 'Z'}


def _grouped(h) -> Dict[Tuple[int, ...], Dict[str, float]]:
    # импорт здесь: hamiltonian импортирует этот модуль лениво
    from .hamiltonian import pauli_decompose
    from .terms import PauliTerm

    groups: Dict[Tuple[int, ...], Dict[str, float]] = {}
    for t in h.terms:
        parts = [t] if isinstance(t, PauliTerm) else pauli_decompose(t, h.d)
        for p in parts:
            bucket = groups.setdefault(p.sites, {})
            bucket[p.letters] = bucket.get(p.letters, 0.0) + p.weight
    return groups


def audit_family(h, tag: str = None) -> None:
    """
    Проверяет, что все термы h принадлежат семейству tag (по умолчанию
    h.family_tag).

    Raises:
        FamilyViolation: при первом нарушении
        UnsupportedFamily: для неизвестного тега
    """
    tag = tag or h.family_tag
    if tag is None or tag == 'unrestricted':
        return
    if tag not in ('heisenberg', 'xy', 'no_y_pauli', 'real_2local_with_fields', 'tim'):
        raise UnsupportedFamily(f"Неизвестное семейство: {tag}")
    if h.d != 2:
        raise FamilyViolation(f"Семейство {tag} определено только для кубитов (d = {h.d})")
    groups = _grouped(h)
    scale = max([1.0] + [abs(w) for g in groups.values() for w in g.values()])
    tol = DEFAULT_TOLERANCES.tol_assemble * scale

    for sites, comps in groups.items():
        comps = {k: v for k, v in comps.items() if abs(v) > tol}
        if not sites or not comps:
            continue
        if tag in FAMILY_PAIRS:
            _audit_pair_family(tag, sites, comps, tol)
        elif tag == 'no_y_pauli':
            if any('Y' in letters for letters in comps):
                raise FamilyViolation(f"Узлы {sites}: буква Y запрещена в no_y_pauli")
        elif tag == 'real_2local_with_fields':
            bad = [k for k in comps if k not in REAL_LETTERS]
            if bad:
                raise FamilyViolation(f"Узлы {sites}: термы {bad} вне {{XX,XZ,ZX,ZZ,X,Z}}")
        elif tag == 'tim':
            bad = [k for k in comps if k not in TIM_LETTERS]
            if bad:
                raise FamilyViolation(f"Узлы {sites}: термы {bad} вне {{XX, Z}}")


def _audit_pair_family(tag: str, sites, comps: Dict[str, float], tol: float) -> None:
    if len(sites) != 2:
        raise FamilyViolation(
            f"Семейство {tag}: допустимы только 2-локальные термы, на {sites} найдено {sorted(comps)}"
        )
    wanted = FAMILY_PAIRS[tag]
    extra = [k for k in comps if k not in wanted]
    if extra:
        raise FamilyViolation(f"Семейство {tag}: на {sites} лишние компоненты {extra}")
    values = [comps.get(k, 0.0) for k in wanted]
    if any(abs(v - values[0]) > tol for v in values) or abs(values[0]) <= tol:
        raise FamilyViolation(
            f"Семейство {tag}: на {sites} коэффициенты {dict(zip(wanted, values))} не пропорциональны"
        )
