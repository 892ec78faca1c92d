"""
pipeline/plan.py

План компиляции: записи проходов и стадий, бюджет (ε, η), статистика весов.

Текстовый формат плана — строки "ключ = значение" в фиксированном
порядке, числа в формате {:.12g}; повторный запуск даёт тот же текст.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from hamcore.errors import HamforgeError
from hamcore.terms import PauliTerm, term_block


def budget_split(eps: float, eta: float, count: int) -> List[Tuple[float, float]]:
    """
    Геометрическое деление бюджета: ε_i = ε/2^{count−i+1} (так же для η).

    Внешние (поздние) стадии получают большую долю; сумма строго меньше
    (ε, η), запас уходит на поправки compose_budget.

    Raises:
        HamforgeError: если ε или η не положительны
    """
    if not (eps > 0 and eta > 0):
        raise HamforgeError(f"ε и η должны быть положительными: ε={eps}, η={eta}")
    if count < 0:
        raise HamforgeError(f"Число стадий не может быть отрицательным: {count}")
    return [(eps / 2 ** (count - i + 1), eta / 2 ** (count - i + 1)) for i in range(1, count + 1)]


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


@dataclass
class StageRecord:
    """Одна стадия прохода: гаджет (или точная конструкция) с выбранным Δ."""
    name: str
    inventory: Dict[str, int]
    delta: float
    n_in: int
    n_out: int
    eps_budget: Optional[float] = None
    eta_budget: Optional[float] = None
    certified: bool = False
    eps_measured: Optional[float] = None
    eta_measured: Optional[float] = None
    # затравка Δ до ограничения delta_cap; None, если ограничения не было
    delta_uncapped: Optional[float] = None

    @property
    def capped(self) -> bool:
        return self.delta_uncapped is not None

    def lines(self, prefix: str) -> List[str]:
        inventory = ",".join(f"{k}:{v}" for k, v in sorted(self.inventory.items())) or "-"
        return [
            f"{prefix}.name = {self.name}",
            f"{prefix}.inventory = {inventory}",
            f"{prefix}.delta = {_fmt(float(self.delta))}",
            f"{prefix}.delta_uncapped = {_fmt(self.delta_uncapped)}",
            f"{prefix}.sites = {self.n_in} -> {self.n_out}",
            f"{prefix}.budget = {_fmt(self.eps_budget)}, {_fmt(self.eta_budget)}",
            f"{prefix}.certified = {_fmt(self.certified)}",
            f"{prefix}.measured = {_fmt(self.eps_measured)}, {_fmt(self.eta_measured)}",
        ]

    def __str__(self) -> str:
        status = "сертифицирован" if self.certified else "оценка"
        if self.capped:
            status += f", ограничен delta_cap; затравка {self.delta_uncapped:.3g}"
        return f"{self.name}: Δ={self.delta:.6g} ({status}), {self.n_in} -> {self.n_out} узлов"


@dataclass
class PassRecord:
    """Запись прохода; applied=False означает, что проход пропущен (reason)."""
    name: str
    applied: bool
    reason: str = ""
    n_in: int = 0
    n_out: int = 0
    exact: bool = False
    stages: List[StageRecord] = field(default_factory=list)

    def __str__(self) -> str:
        if not self.applied:
            return f"{self.name}: пропущен ({self.reason})"
        return f"{self.name}: {self.n_in} -> {self.n_out} узлов, стадий {len(self.stages)}"


@dataclass
class CompilationPlan:
    """
    Результат компиляции: проходы по порядку, карта узлов, бюджет,
    итоговое семейство и статистика весов.

    site_map: исходный узел -> узлы симулятора, кодирующие его
    budget: 'eps', 'eta' (запрошенные) и 'split' (по стадиям)
    weight_stats: 'lambda_sim' = max|вес| нетождественных термов,
        'rounds' = число стадий, 'lambda_formula_log10' — оценка сверху
        log10 Λ_sim по асимптотике O(nΛ₀(1/ε+1/η))^{6^r}
    embedding: GridEmbedding для раскладки на решётку (в текст не попадает)
    """
    target_family: str
    passes: List[PassRecord] = field(default_factory=list)
    site_map: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    budget: Dict[str, object] = field(default_factory=dict)
    final_family: Optional[str] = None
    weight_stats: Dict[str, float] = field(default_factory=dict)
    certify: bool = False
    certified: bool = False
    eps_end_to_end: Optional[float] = None
    eta_end_to_end: Optional[float] = None
    budget_chain: Optional[Tuple[float, float, float]] = None
    embedding: Optional[object] = None

    @property
    def applied(self) -> List[PassRecord]:
        return [p for p in self.passes if p.applied]

    @property
    def stages(self) -> List[StageRecord]:
        return [s for p in self.passes for s in p.stages]

    @property
    def capped_stages(self) -> List[str]:
        """Стадии, где затравка Δ была ограничена delta_cap."""
        return [s.name for s in self.stages if s.capped]

    @property
    def is_identity(self) -> bool:
        return not self.applied

    def to_text(self) -> str:
        lines = [
            f"target_family = {self.target_family}",
            f"final_family = {_fmt(self.final_family)}",
            f"certify = {_fmt(self.certify)}",
            f"certified = {_fmt(self.certified)}",
            f"eps = {_fmt(self.budget.get('eps'))}",
            f"eta = {_fmt(self.budget.get('eta'))}",
        ]
        split = self.budget.get('split') or []
        lines.append("split = " + ("; ".join(f"{_fmt(e)}, {_fmt(h)}" for e, h in split) or "-"))
        capped = self.capped_stages
        lines.append("delta_capped = " + (",".join(capped) or "none"))
        for idx, record in enumerate(self.passes):
            prefix = f"pass[{idx}]"
            lines.append(f"{prefix}.name = {record.name}")
            lines.append(f"{prefix}.applied = {_fmt(record.applied)}")
            if not record.applied:
                lines.append(f"{prefix}.reason = {record.reason}")
                continue
            lines.append(f"{prefix}.exact = {_fmt(record.exact)}")
            lines.append(f"{prefix}.sites = {record.n_in} -> {record.n_out}")
            for s_idx, stage in enumerate(record.stages):
                lines.extend(stage.lines(f"{prefix}.stage[{s_idx}]"))
        for site, sim_sites in sorted(self.site_map.items()):
            lines.append(f"site_map[{site}] = {','.join(str(s) for s in sim_sites)}")
        for key, value in sorted(self.weight_stats.items()):
            lines.append(f"weight_stats.{key} = {_fmt(value)}")
        lines.append(f"end_to_end = {_fmt(self.eps_end_to_end)}, {_fmt(self.eta_end_to_end)}")
        chain = self.budget_chain
        lines.append("budget_chain = " + (", ".join(_fmt(float(x)) for x in chain) if chain else "none"))
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        names = " -> ".join(p.name for p in self.applied) or "тождественный"
        return f"CompilationPlan({self.target_family}: {names})"


def weight_statistics(terms, rounds: int, n: int, lambda0: float,
                      eps: float, eta: float) -> Dict[str, float]:
    """
    Λ_sim по фактическим весам и асимптотическая оценка для r стадий.

    Тождественные термы в Λ_sim не учитываются: это сдвиг спектра.
    """
    lam = 0.0
    for t in terms:
        if isinstance(t, PauliTerm):
            if not t.is_identity:
                lam = max(lam, abs(t.weight))
        else:
            lam = max(lam, float(np.max(np.abs(term_block(t)))))
    base = max(n, 1) * max(lambda0, 1.0) * (1.0 / eps + 1.0 / eta)
    return {
        'lambda_sim': float(lam),
        'rounds': float(rounds),
        'lambda_formula_log10': float(6 ** rounds * math.log10(base)) if rounds else 0.0,
    }
