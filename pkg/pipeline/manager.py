"""
pipeline/manager.py

Менеджер проходов: ведёт гамильтониан через фиксированную цепочку
проходов, делит бюджет (ε, η) и собирает CompilationPlan.

Бюджет делится на фиксированные слоты: ε_i = ε/2^{m−i+1} для i-го из m
приближённых проходов, возможных для данного семейства. Пропущенный
проход оставляет свой слот неиспользованным; точные проходы бюджета не
тратят.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from hamcore.config import DEFAULT_TOLERANCES, Tolerances, get_dim_cap
from hamcore.errors import (
    BudgetViolation, DimensionCap, HamforgeError, UnsupportedFamily,
)
from hamcore.hamiltonian import Hamiltonian, norm_bound
from encoding.core import Encoding, identity_encoding
from gadgets.base import hamiltonian_norm
from simcheck.bounds import compose_budget
from simcheck.report import SimulationReport
from simcheck.verify import simulator_spectrum, verify_simulation

from .passes import (
    COMPILE_FAMILIES, LOGICAL_FAMILIES, ComplexToRealPass, LatticePass, LocalityReductionPass,
    LogicalQubitPass, Pass, PassContext, QuditPass, YEliminationPass, chain_groups, compose_all,
    in_family, pauli_form,
)
from .plan import CompilationPlan, PassRecord, budget_split, weight_statistics

logger = logging.getLogger(__name__)


def end_to_end_check(h: Hamiltonian, h_sim: Hamiltonian, e: Encoding, eps: float, eta: float,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> Optional[SimulationReport]:
    """
    Проверка итоговой симуляции с порогом посередине щели над нижними
    (p+q)·dim(h) уровнями симулятора.

    Returns:
        SimulationReport или None, если щели нет или проверка не прошла
    """
    spec = simulator_spectrum(h_sim, tol)
    k = e.multiplicity * h.dim
    values = spec.eigenvalues
    if k > spec.dim:
        logger.warning("Сквозная проверка: симулятору нужно %d уровней, есть %d", k, spec.dim)
        return None
    if k == spec.dim:
        cut = float(values[-1]) + 1.0
    else:
        if values[k] - values[k - 1] <= 2 * tol.degeneracy_tol:
            logger.warning("Сквозная проверка: нет щели над %d нижними уровнями", k)
            return None
        cut = 0.5 * float(values[k - 1] + values[k])
    try:
        return verify_simulation(h, h_sim, e, cut, eps, eta, tol, spectrum=spec)
    except HamforgeError as exc:
        logger.warning("Сквозная проверка не выполнена: %s", exc)
        return None


def budget_chain(reports: Sequence[SimulationReport], norm_c: float) -> Optional[Tuple[float, float, float]]:
    """
    (Δ, η, ε) цепочки стадий по правилу композиции: каждая следующая
    стадия симулирует результат всех предыдущих.
    """
    if not reports:
        return None
    acc = reports[0]
    for r in reports[1:]:
        try:
            cb = compose_budget(r, acc, norm_c)
        except BudgetViolation as exc:
            logger.warning("Цепочка бюджета разорвана: %s", exc)
            return None
        acc = SimulationReport(delta=cb.delta, eta_measured=cb.eta, eps_measured=cb.eps)
    return acc.delta, acc.eta_measured, acc.eps_measured


def finish_plan(plan: CompilationPlan, h: Hamiltonian, h_out: Hamiltonian,
                encoding: Optional[Encoding], reports: Sequence[SimulationReport],
                eps: float, eta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
    """Статистика весов, сквозная проверка и цепочка бюджета."""
    plan.final_family = h_out.family_tag
    plan.weight_stats = weight_statistics(
        h_out.terms, len(plan.stages), h.n, norm_bound(h), eps, eta,
    )
    stages_ok = all(s.certified for s in plan.stages)
    if not plan.certify:
        plan.certified = False
        return
    if encoding is None:
        logger.warning("Сквозная проверка невозможна: кодирование не помещается в dim_cap")
        plan.certified = False
        return
    report = end_to_end_check(h, h_out, encoding, eps, eta, tol)
    if report is not None:
        plan.eps_end_to_end = report.eps_measured
        plan.eta_end_to_end = report.eta_measured
    plan.budget_chain = budget_chain(reports, hamiltonian_norm(h))
    if report is not None and plan.budget_chain is not None:
        chain_eps = plan.budget_chain[2]
        if report.eps_measured > chain_eps + tol.tol_eig:
            logger.warning("Сквозное ε = %.3e превышает оценку цепочки %.3e",
                           report.eps_measured, chain_eps)
    plan.certified = stages_ok and report is not None and report.passed


class PassManager:
    """
    Компиляция в целевое семейство.

    Порядок проходов: qudit_to_qubit, complex_to_real, y_elimination,
    locality_reduction, logical_qubit, square_lattice.
    """

    def __init__(self, target_family: str, eps: float, eta: float, lattice: bool = False,
                 certify: bool = False, spacing: int = 1, tol: Tolerances = DEFAULT_TOLERANCES,
                 verbose: bool = False):
        if target_family not in COMPILE_FAMILIES:
            raise UnsupportedFamily(
                f"Компиляция в семейство '{target_family}' не поддерживается; "
                f"доступны: {', '.join(COMPILE_FAMILIES)}"
            )
        if lattice and target_family in LOGICAL_FAMILIES:
            raise UnsupportedFamily(
                f"Семейство {target_family} не раскладывается на решётку: блоки K4 содержат диагонали"
            )
        if not (eps > 0 and eta > 0):
            raise HamforgeError(f"ε и η должны быть положительными: ε={eps}, η={eta}")
        self.ctx = PassContext(target_family, certify, lattice, spacing, tol, verbose)
        self.eps = eps
        self.eta = eta
        self.verbose = verbose
        self.passes: List[Pass] = [
            QuditPass(verbose), ComplexToRealPass(verbose), YEliminationPass(verbose),
            LocalityReductionPass(verbose), LogicalQubitPass(verbose), LatticePass(verbose),
        ]

    def _log(self, message: str) -> None:
        if self.verbose:
            print(f"  [{self.__class__.__name__}] {message}")

    def slots(self) -> List[Tuple[str, Tuple[float, float]]]:
        """Слоты бюджета приближённых проходов, возможных для семейства."""
        names = [p.name for p in self.passes if not p.exact and p.enabled(self.ctx)]
        return list(zip(names, budget_split(self.eps, self.eta, len(names))))

    def run(self, h: Hamiltonian) -> Tuple[Hamiltonian, Optional[Encoding], CompilationPlan]:
        """
        Returns:
            (симулятор в целевом семействе, кодирование или None, план)

        Raises:
            DimensionCap: сертификация запрошена, а dim(h) больше dim_cap
            UnsupportedFamily, RoutingFailure, OddYCount, CapExceeded: от проходов
        """
        ctx = self.ctx
        if ctx.certify and h.dim > get_dim_cap():
            raise DimensionCap(f"dim(h) = {h.dim} превышает dim_cap = {get_dim_cap()}")
        slots = dict(self.slots())
        plan = CompilationPlan(ctx.target_family, certify=ctx.certify)
        plan.budget = {'eps': self.eps, 'eta': self.eta, 'split': [slots[name] for name in slots]}
        plan.site_map = {i: (i,) for i in range(h.n)}

        if not ctx.lattice and in_family(h, ctx.target_family):
            self._log(f"{h} уже в семействе {ctx.target_family}")
            for p in self.passes:
                plan.passes.append(PassRecord(p.name, False, "гамильтониан уже в семействе"))
            h_out = h.with_terms(h.terms, family_tag=ctx.target_family)
            encoding = identity_encoding(h.dim, h.n, h.d) if h.dim <= get_dim_cap() else None
            plan.final_family = ctx.target_family
            plan.weight_stats = weight_statistics(h.terms, 0, h.n, norm_bound(h), self.eps, self.eta)
            plan.certified = ctx.certify
            return h_out, encoding, plan

        current = h
        encodings: List[Optional[Encoding]] = []
        reports: List[SimulationReport] = []
        for p in self.passes:
            applies, reason = p.applies(current, ctx)
            if not applies:
                self._log(f"{p.name}: пропущен ({reason})")
                plan.passes.append(PassRecord(p.name, False, reason, exact=p.exact))
                continue
            eps_p, eta_p = (0.0, 0.0) if p.exact else slots[p.name]
            self._log(f"{p.name}: {reason}; бюджет ε={eps_p:.3g}, η={eta_p:.3g}")
            result = p.run(current, ctx, eps_p, eta_p)
            plan.passes.append(PassRecord(
                p.name, True, reason, current.n, result.h.n, p.exact, list(result.stages),
            ))
            plan.site_map = chain_groups(plan.site_map, result.groups)
            encodings.append(result.encoding)
            reports.extend(result.reports)
            current = result.h

        geometry = current.geometry if ctx.lattice else None
        final = pauli_form(current)
        h_out = Hamiltonian(final.n, 2, final.terms, ctx.target_family, geometry)
        encoding = compose_all(encodings)
        finish_plan(plan, h, h_out, encoding, reports, self.eps, self.eta, ctx.tol)
        self._log(str(plan))
        return h_out, encoding, plan


def compile_hamiltonian(h: Hamiltonian, target_family: str, eps: float, eta: float,
                        lattice: bool = False, certify: bool = False, spacing: int = 1,
                        tol: Tolerances = DEFAULT_TOLERANCES,
                        verbose: bool = False) -> Tuple[Hamiltonian, Optional[Encoding], CompilationPlan]:
    """Компиляция h в target_family (см. PassManager)."""
    manager = PassManager(target_family, eps, eta, lattice, certify, spacing, tol, verbose)
    return manager.run(h)
