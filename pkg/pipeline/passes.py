"""
pipeline/passes.py

Проходы компиляции: каждый принимает гамильтониан и возвращает
симулятор, кодирование и записи стадий.

Порядок проходов фиксирован (см. PassManager):
кудиты -> вещественный -> без Y -> 2-локальный -> логические кубиты -> решётка.
"""

import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from hamcore.config import DEFAULT_TOLERANCES, Tolerances, get_dim_cap
from hamcore.errors import CapExceeded, DimensionCap, FamilyViolation, OddYCount, UnsupportedFamily
from hamcore.families import REAL_LETTERS, audit_family
from hamcore.hamiltonian import Hamiltonian
from hamcore.terms import PauliTerm
from encoding.constructions import SimulatorInstance, complex_to_real_sim, qudit_to_qubit
from encoding.core import Encoding
from gadgets.base import PerturbativeGadget, build_simulator, pauli_hamiltonian, with_passthrough
from gadgets.heisenberg import heisenberg_compile
from gadgets.mediator import subdivision_gadget
from gadgets.merge import parallel_merge
from gadgets.reductions import three_to_two_gadget, y_elimination_gadget, y_support_groups
from gadgets.search import DeltaSearch, seed_delta
from simcheck.report import SimulationReport
from simcheck.verify import verify_simulation

from .plan import StageRecord, budget_split

logger = logging.getLogger(__name__)

COMPILE_FAMILIES = ('heisenberg', 'xy', 'no_y_pauli', 'real_2local_with_fields')
LOGICAL_FAMILIES = ('heisenberg', 'xy')


@dataclass
class PassContext:
    """Общие параметры компиляции, доступные каждому проходу."""
    target_family: str
    certify: bool = False
    lattice: bool = False
    spacing: int = 1
    tol: Tolerances = DEFAULT_TOLERANCES
    verbose: bool = False


@dataclass
class PassResult:
    """
    Выход прохода.

    groups: узел входа -> узлы выхода, кодирующие его
    encoding: None, если плотная изометрия не помещается в dim_cap
    reports: отчёты проверок по стадиям (только в режиме сертификации)
    """
    h: Hamiltonian
    encoding: Optional[Encoding]
    groups: Dict[int, Tuple[int, ...]]
    stages: List[StageRecord]
    reports: List[SimulationReport] = field(default_factory=list)
    exact: bool = False


def pauli_form(h: Hamiltonian, origin: Optional[str] = None) -> Hamiltonian:
    """Гамильтониан из сложенных строк Паули (плотные блоки раскладываются)."""
    return pauli_hamiltonian(h.n, h.terms, origin)


def dense_fits(n_out: int, columns: int = 1) -> bool:
    """Помещается ли плотная изометрия 2^n_out x columns в dim_cap."""
    cap = get_dim_cap()
    return 2 ** n_out <= cap and columns <= cap


def mediator_groups(g: PerturbativeGadget) -> Dict[int, Tuple[int, ...]]:
    """Узлы симулятора, кодирующие каждый целевой узел гаджета."""
    if g.kind == 'subspace':
        return {u: tuple(sites) for u, (sites, _) in g.blocks.items()}
    groups = {i: (i,) for i in range(g.n_target)}
    for owner, (anc, _) in g.blocks.items():
        groups[owner] = (owner,) + tuple(anc)
    return groups


def run_gadget_stage(g: PerturbativeGadget, eps: float, eta: float, ctx: PassContext,
                     inventory: Dict[str, int], name: str,
                     estimate: Optional[float] = None) -> Tuple[Hamiltonian, Optional[Encoding],
                                                                StageRecord, Optional[SimulationReport]]:
    """
    Выбирает Δ для гаджета и собирает симулятор.

    Сертификация: DeltaSearch (удвоение Δ до прохождения проверки).
    Без сертификации: estimate (если задан) или затравка seed_delta,
    ограниченная delta_cap, и предупреждение, что Δ не проверен.

    Raises:
        CapExceeded: Δ превысил delta_cap или симулятор не проверяется в dim_cap
    """
    report = None
    uncapped = None
    if ctx.certify:
        if not dense_fits(g.n_sim):
            raise CapExceeded(f"{name}: симулятор на {g.n_sim} кубитах не проверяется в пределах dim_cap")
        search = DeltaSearch(g, eps, eta, ctx.tol, ctx.verbose)
        try:
            delta = search.run()
        except DimensionCap as exc:
            raise CapExceeded(
                f"{name}: симулятор на {g.n_sim} кубитах не проверяется в пределах dim_cap"
            ) from exc
        report = search.report
        encoding = g.simulator_encoding()
    else:
        delta = estimate
        if delta is None:
            delta = seed_delta(g, eps, eta, ctx.tol.delta_seed_constant, exact_norm=False)
        if delta > ctx.tol.delta_cap:
            logger.warning("%s: затравка Δ = %.3g ограничена delta_cap = %.3g", name, delta, ctx.tol.delta_cap)
            uncapped = float(delta)
            delta = ctx.tol.delta_cap
        logger.warning("%s: Δ = %.6g получен из асимптотики и не сертифицирован", name, delta)
        encoding = g.simulator_encoding() if dense_fits(g.n_sim) else None
    h_out = pauli_hamiltonian(g.n_sim, build_simulator(g, delta).terms, name)
    stage = StageRecord(
        name=name, inventory=dict(inventory), delta=float(delta), n_in=g.n_target, n_out=g.n_sim,
        eps_budget=eps, eta_budget=eta, certified=report is not None and report.passed,
        eps_measured=report.eps_measured if report else None,
        eta_measured=report.eta_measured if report else None, delta_uncapped=uncapped,
    )
    return h_out, encoding, stage, report


def run_exact_stage(h: Hamiltonian, inst: SimulatorInstance, ctx: PassContext,
                    name: str) -> Tuple[Hamiltonian, StageRecord, Optional[SimulationReport]]:
    """Точная конструкция: в режиме сертификации проверяется при её Δ."""
    report = None
    if ctx.certify:
        if inst.encoding is None:
            raise CapExceeded(f"{name}: кодирование на {inst.h_sim.n} кубитах не помещается в dim_cap")
        report = verify_simulation(h, inst.h_sim, inst.encoding, inst.delta, tol=ctx.tol)
    h_out = pauli_hamiltonian(inst.h_sim.n, inst.h_sim.terms, name)
    stage = StageRecord(
        name=name, inventory={name: 1}, delta=float(inst.delta), n_in=h.n, n_out=h_out.n,
        eps_budget=0.0, eta_budget=0.0,
        certified=report is not None and report.eps_measured <= ctx.tol.tol_eig * max(1.0, inst.delta),
        eps_measured=report.eps_measured if report else None,
        eta_measured=report.eta_measured if report else None,
    )
    return h_out, stage, report


class Pass(ABC):
    """
    Базовый проход.

    applies(h, ctx) -> (применим ли, причина); run(h, ctx, eps, eta) -> PassResult.
    """

    name = "pass"
    exact = False

    def __init__(self, verbose: bool = False):
        self.verbose = verbose

    @abstractmethod
    def applies(self, h: Hamiltonian, ctx: PassContext) -> Tuple[bool, str]:
        pass

    @abstractmethod
    def run(self, h: Hamiltonian, ctx: PassContext, eps: float, eta: float) -> PassResult:
        pass

    def enabled(self, ctx: PassContext) -> bool:
        """Может ли проход понадобиться для данного семейства (для деления бюджета)."""
        return True

    def _log(self, message: str) -> None:
        if self.verbose:
            print(f"  [{self.__class__.__name__}] {message}")


# ---------------------------------------------------------------------------
# Точные проходы
# ---------------------------------------------------------------------------

class QuditPass(Pass):
    """d > 2: идеальная симуляция кубитами, ⌈log2 d⌉ кубитов на кудит."""

    name = "qudit_to_qubit"
    exact = True

    def applies(self, h, ctx):
        if h.d > 2:
            return True, f"d = {h.d}"
        return False, "кубитный вход"

    def run(self, h, ctx, eps, eta):
        m = max(1, int(math.ceil(math.log2(h.d))))
        inst = qudit_to_qubit(h, with_encoding=dense_fits(h.n * m, h.dim))
        h_out, stage, report = run_exact_stage(h, inst, ctx, self.name)
        self._log(str(stage))
        groups = {i: tuple(range(i * m, i * m + m)) for i in range(h.n)}
        return PassResult(h_out, inst.encoding, groups, [stage], [report] if report else [], exact=True)


def has_odd_y(h: Hamiltonian) -> bool:
    return any(t.y_count % 2 for t in h.pauli_terms())


class ComplexToRealPass(Pass):
    """Строки Паули с нечётным числом Y (мнимые матрицы): Y_j -> Y_j Y_{n+j}."""

    name = "complex_to_real"
    exact = True

    def applies(self, h, ctx):
        if has_odd_y(h):
            return True, "есть строки с нечётным числом Y"
        return False, "гамильтониан вещественный"

    def run(self, h, ctx, eps, eta):
        inst = complex_to_real_sim(h, with_encoding=dense_fits(2 * h.n, 4 ** h.n))
        h_out, stage, report = run_exact_stage(h, inst, ctx, self.name)
        self._log(str(stage))
        groups = {j: (j, h.n + j) for j in range(h.n)}
        return PassResult(h_out, inst.encoding, groups, [stage], [report] if report else [], exact=True)


# ---------------------------------------------------------------------------
# Гаджетные проходы
# ---------------------------------------------------------------------------

class YEliminationPass(Pass):
    """
    Убирает буквы Y: один медиатор на группу строк с общим Y-носителем.

    Если A² группы снова содержит Y (остаток на >= 2 узлах), группа
    разбивается на отдельные строки.
    """

    name = "y_elimination"

    def applies(self, h, ctx):
        if any(t.y_count for t in h.pauli_terms()):
            return True, "есть буквы Y"
        return False, "нет букв Y"

    def run(self, h, ctx, eps, eta):
        terms = list(pauli_form(h).terms)
        with_y = [t for t in terms if t.y_count]
        rest = [t for t in terms if not t.y_count]
        odd = [t for t in with_y if t.y_count % 2]
        if odd:
            raise OddYCount(f"Строка {odd[0].label()} содержит нечётное число Y")
        gadgets: List[PerturbativeGadget] = []
        mediator = h.n
        for ys, group in sorted(y_support_groups(with_y).items()):
            g = y_elimination_gadget(group, h.n, mediator)
            if len(group) > 1 and any('Y' in t.letters for t in g.h1.terms):
                self._log(f"группа {ys}: A² содержит Y, строки обрабатываются по одной")
                parts = [y_elimination_gadget(t, h.n, mediator + k) for k, t in enumerate(group)]
            else:
                parts = [g]
            gadgets.extend(parts)
            mediator += len(parts)
        merged = with_passthrough(parallel_merge(gadgets, name=self.name), rest)
        h_out, enc, stage, report = run_gadget_stage(
            merged, eps, eta, ctx, {'y_elimination': len(gadgets)}, self.name,
        )
        self._log(str(stage))
        return PassResult(h_out, enc, mediator_groups(merged), [stage], [report] if report else [])


def subdivision_rounds(k_max: int) -> int:
    """Число раундов разбиения, после которых все термы не длиннее 3."""
    rounds = 0
    while k_max >= 4:
        k_max = math.ceil(k_max / 2) + 1
        rounds += 1
    return rounds


def split_term(t: PauliTerm) -> Tuple[PauliTerm, PauliTerm]:
    """w·P -> (w·P_first, P_rest), первая половина — ⌈k/2⌉ узлов."""
    half = math.ceil(len(t.sites) / 2)
    first = PauliTerm(t.sites[:half], t.letters[:half], t.weight)
    second = PauliTerm(t.sites[half:], t.letters[half:], 1.0)
    return first, second


class LocalityReductionPass(Pass):
    """
    k-локальные строки без Y -> 2-локальные {XX, XZ, ZX, ZZ, X, Z}.

    Раунды разбиения делят строки длины >= 4 пополам, последний раунд
    заменяет каждую 3-локальную строку гаджетом третьего порядка.
    """

    name = "locality_reduction"

    def enabled(self, ctx):
        return ctx.target_family != 'no_y_pauli' or ctx.lattice

    def applies(self, h, ctx):
        if not self.enabled(ctx):
            return False, f"семейство {ctx.target_family} допускает k-локальные строки"
        if h.k_max > 2:
            return True, f"k_max = {h.k_max}"
        return False, "гамильтониан 2-локальный"

    def run(self, h, ctx, eps, eta):
        current = pauli_form(h)
        total = subdivision_rounds(current.k_max) + 1
        split = budget_split(eps, eta, total)
        groups = {i: (i,) for i in range(h.n)}
        stages: List[StageRecord] = []
        reports: List[SimulationReport] = []
        encodings: List[Optional[Encoding]] = []
        for r in range(total):
            eps_r, eta_r = split[r]
            if current.k_max >= 4:
                g, inventory = self._subdivision_round(current, r)
            elif current.k_max == 3:
                g, inventory = self._three_to_two_round(current)
            else:
                break
            current, enc, stage, report = run_gadget_stage(
                g, eps_r, eta_r, ctx, inventory, f"{self.name}[{r}]",
            )
            self._log(str(stage))
            groups = chain_groups(groups, mediator_groups(g))
            stages.append(stage)
            encodings.append(enc)
            if report is not None:
                reports.append(report)
        return PassResult(current, compose_all(encodings), groups, stages, reports)

    @staticmethod
    def _subdivision_round(h: Hamiltonian, r: int) -> Tuple[PerturbativeGadget, Dict[str, int]]:
        long_terms = [t for t in h.terms if len(t.sites) >= 4]
        rest = [t for t in h.terms if len(t.sites) < 4]
        gadgets = [
            subdivision_gadget(*split_term(t), n_target=h.n, mediator=h.n + k, name="subdivision")
            for k, t in enumerate(long_terms)
        ]
        merged = with_passthrough(parallel_merge(gadgets, name=f"subdivision[{r}]"), rest)
        return merged, {'subdivision': len(gadgets)}

    @staticmethod
    def _three_to_two_round(h: Hamiltonian) -> Tuple[PerturbativeGadget, Dict[str, int]]:
        triples = [t for t in h.terms if len(t.sites) == 3]
        rest = [t for t in h.terms if len(t.sites) < 3]
        gadgets = []
        for k, t in enumerate(triples):
            a, b, c = (PauliTerm((s,), ch) for s, ch in zip(t.sites, t.letters))
            gadgets.append(three_to_two_gadget(a, b, c.scaled(t.weight), n_target=h.n, mediator=h.n + k))
        merged = with_passthrough(parallel_merge(gadgets, name="three_to_two"), rest)
        return merged, {'three_to_two': len(gadgets)}


class LogicalQubitPass(Pass):
    """Вещественный 2-локальный гамильтониан -> чистый Гейзенберг / XY на блоках K4."""

    name = "logical_qubit"

    def enabled(self, ctx):
        return ctx.target_family in LOGICAL_FAMILIES

    def applies(self, h, ctx):
        if not self.enabled(ctx):
            return False, f"семейство {ctx.target_family} не требует логических кубитов"
        if in_family(h, ctx.target_family):
            return False, "гамильтониан уже в семействе"
        return True, f"семейство {ctx.target_family}"

    def run(self, h, ctx, eps, eta):
        couplings: Dict[Tuple[int, int], np.ndarray] = {}
        fields: Dict[int, List[float]] = {}
        constant: List[PauliTerm] = []
        for t in pauli_form(h).terms:
            if t.is_identity:
                constant.append(t)
                continue
            if t.letters not in REAL_LETTERS:
                raise UnsupportedFamily(
                    f"{self.name}: строка {t.label()} вне формы {{XX, XZ, ZX, ZZ, X, Z}}"
                )
            if len(t.sites) == 1:
                fields.setdefault(t.sites[0], [0.0, 0.0])['XZ'.index(t.letters)] += t.weight
            else:
                j = couplings.setdefault(t.sites, np.zeros((2, 2)))
                j['XZ'.index(t.letters[0]), 'XZ'.index(t.letters[1])] += t.weight
        g = heisenberg_compile(
            h.n, couplings, {u: tuple(v) for u, v in fields.items()},
            interaction=ctx.target_family, seed=ctx.tol.seed,
        )
        g = with_passthrough(g, constant)
        h_out, enc, stage, report = run_gadget_stage(
            g, eps, eta, ctx, {'k4_block': h.n, 'coupling': len(couplings)}, self.name,
        )
        h_out = h_out.with_terms(h_out.terms, family_tag=ctx.target_family)
        self._log(str(stage))
        return PassResult(h_out, enc, mediator_groups(g), [stage], [report] if report else [])


class LatticePass(Pass):
    """Раскладка 2-локального гамильтониана на квадратную решётку (LatticeRouter)."""

    name = "square_lattice"

    def enabled(self, ctx):
        return ctx.lattice

    def applies(self, h, ctx):
        if not ctx.lattice:
            return False, "решётка не запрошена"
        return True, "запрошена квадратная решётка"

    def run(self, h, ctx, eps, eta):
        # импорт здесь: lattice использует помощники этого модуля
        from .lattice import LatticeRouter

        router = LatticeRouter(
            h, eps, eta, spacing=ctx.spacing, certify=ctx.certify, tol=ctx.tol, verbose=ctx.verbose,
        )
        result = router.run()
        return PassResult(result.h, result.encoding, result.groups, result.stages, result.reports)


# ---------------------------------------------------------------------------
# Помощники
# ---------------------------------------------------------------------------

def chain_groups(outer: Dict[int, Tuple[int, ...]],
                 inner: Dict[int, Tuple[int, ...]]) -> Dict[int, Tuple[int, ...]]:
    """Карта узлов после ещё одной стадии: исходный узел -> объединение образов."""
    return {
        site: tuple(sorted({s for mid in mids for s in inner.get(mid, (mid,))}))
        for site, mids in outer.items()
    }


def compose_all(encodings: Sequence[Optional[Encoding]]) -> Optional[Encoding]:
    """Композиция кодирований стадий по порядку; None, если какое-то неизвестно."""
    # импорт здесь: encoding.compose тянет весь пакет кодирований
    from encoding.compose import compose

    if not encodings or any(e is None for e in encodings):
        return None
    out = encodings[0]
    for e in encodings[1:]:
        out = compose(e, out)
    return out


def in_family(h: Hamiltonian, family: str) -> bool:
    """Принадлежит ли h семейству (синтаксическая проверка)."""
    try:
        audit_family(h, family)
    except FamilyViolation:
        return False
    return True


def inventory_of(stages: Sequence[StageRecord]) -> Dict[str, int]:
    total: Counter = Counter()
    for s in stages:
        total.update(s.inventory)
    return dict(total)
