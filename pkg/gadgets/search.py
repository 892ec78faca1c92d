"""
gadgets/search.py

Поиск сертифицированного Δ для гаджета.

Затравка — асимптотика из лемм теории возмущений с константой c₀,
округлённая вверх до степени двойки; дальше Δ удваивается, пока
verify_simulation не подтвердит (Δ/2, η, ε)-симуляцию.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

from hamcore.config import DEFAULT_TOLERANCES, Tolerances
from hamcore.errors import (
    CapExceeded, DegenerateCut, HamforgeError, RankMismatch, SubspaceMismatch, TooFar,
)
from hamcore.hamiltonian import norm_bound
from simcheck.report import SimulationReport
from simcheck.verify import verify_simulation

from .base import PerturbativeGadget, build_simulator, hamiltonian_norm

logger = logging.getLogger(__name__)

# исходы проверки, которые означают "Δ ещё мал"
RETRYABLE = (SubspaceMismatch, TooFar, DegenerateCut, RankMismatch)


@dataclass
class SweepPoint:
    """Одна проверка в ходе поиска."""
    delta: float
    eps_measured: Optional[float]
    eta_measured: Optional[float]
    passed: bool
    failure: Optional[str] = None

    def __str__(self) -> str:
        if self.failure:
            return f"Δ={self.delta:.6g}: {self.failure}"
        status = "ok" if self.passed else "мало"
        return f"Δ={self.delta:.6g}: ε={self.eps_measured:.3e}, η={self.eta_measured:.3e} ({status})"


def seed_formula(order: int, lam: float, eps: float, eta: float, constant: float = 16.0) -> float:
    """
    Затравка из асимптотики лемм:

    порядок 1: c₀·max(‖H1‖²/ε, ‖H1‖/η)
    порядок 2: c₀·max(Λ⁶/ε², Λ²/η²)
    порядок 3: c₀·max(Λ¹²/ε³, Λ³/η³)

    Для порядка 1 lam — это ‖H1‖. Округляется вверх до степени двойки,
    поэтому меньшее ε не может дать меньший результат поиска.
    """
    try:
        if order == 1:
            raw = max(lam ** 2 / eps, lam / eta)
        elif order == 2:
            raw = max(lam ** 6 / eps ** 2, lam ** 2 / eta ** 2)
        else:
            raw = max(lam ** 12 / eps ** 3, lam ** 3 / eta ** 3)
        raw *= constant
        if raw <= 1.0:
            return 1.0
        return float(2.0 ** math.ceil(math.log2(raw)))
    except (OverflowError, ValueError):
        return math.inf


def lambda_bound(g: PerturbativeGadget) -> float:
    """Оценка Λ сверху по неравенству треугольника, без сборки матриц."""
    if g.order == 1:
        return norm_bound(g.h1)
    parts = [g.h1, g.h2] + ([g.h1prime] if g.h1prime is not None else [])
    return max(norm_bound(p) for p in parts)


def seed_delta(g: PerturbativeGadget, eps: float, eta: float, constant: float = 16.0,
               exact_norm: bool = True) -> float:
    """
    Затравка seed_formula для гаджета.

    exact_norm=False берёт Λ из lambda_bound (режим без сертификации:
    симулятор может быть сколь угодно большим).
    """
    if not exact_norm:
        lam = lambda_bound(g)
    else:
        lam = hamiltonian_norm(g.h1) if g.order == 1 else g.lambda_norm
    return seed_formula(g.order, lam, eps, eta, constant)


class DeltaSearch:
    """
    Удвоение Δ до прохождения проверки.

    После run() доступны history (все проверки) и report (отчёт для
    найденного Δ).
    """

    def __init__(self, g: PerturbativeGadget, eps: float, eta: float,
                 tol: Tolerances = DEFAULT_TOLERANCES, verbose: bool = False):
        if not (eps > 0 and eta > 0):
            raise HamforgeError(f"ε и η должны быть положительными: ε={eps}, η={eta}")
        self.gadget = g
        self.eps = eps
        self.eta = eta
        self.tol = tol
        self.verbose = verbose
        self.history: List[SweepPoint] = []
        self.report: Optional[SimulationReport] = None

    def _log(self, message: str) -> None:
        if self.verbose:
            print(f"  [{self.__class__.__name__}] {message}")

    def check(self, delta: float) -> SweepPoint:
        """Одна проверка (Δ/2, η, ε) для симулятора с данным Δ."""
        g = self.gadget
        h_sim = build_simulator(g, delta)
        try:
            report = verify_simulation(
                g.target, h_sim, g.simulator_encoding(), delta / 2, self.eps, self.eta, self.tol,
            )
        except RETRYABLE as exc:
            return SweepPoint(delta, None, None, False, exc.__class__.__name__)
        point = SweepPoint(delta, report.eps_measured, report.eta_measured, report.passed)
        if report.passed:
            self.report = report
        return point

    def run(self) -> float:
        """
        Returns:
            первый Δ, при котором проверка прошла

        Raises:
            CapExceeded: если Δ превысил tol.delta_cap
        """
        delta = seed_delta(self.gadget, self.eps, self.eta, self.tol.delta_seed_constant)
        self._log(f"{self.gadget.name}: затравка Δ = {delta:.6g} (Λ = {self.gadget.lambda_norm:.4g})")
        while delta <= self.tol.delta_cap:
            point = self.check(delta)
            self._warn_if_not_monotone(point)
            self.history.append(point)
            self._log(str(point))
            if point.passed:
                return delta
            delta *= 2.0
        raise CapExceeded(
            f"{self.gadget.name}: Δ превысил {self.tol.delta_cap:.3g} без прохождения проверки "
            f"(ε={self.eps}, η={self.eta})"
        )

    def _warn_if_not_monotone(self, point: SweepPoint) -> None:
        previous = [p for p in self.history if p.eps_measured is not None]
        if point.eps_measured is None or not previous:
            return
        last = previous[-1]
        if point.eps_measured > last.eps_measured + self.tol.tol_eig:
            logger.warning(
                "%s: ε выросла с %.3e до %.3e при увеличении Δ с %.6g до %.6g",
                self.gadget.name, last.eps_measured, point.eps_measured, last.delta, point.delta,
            )


def delta_for(g: PerturbativeGadget, eps: float, eta: float,
              tol: Tolerances = DEFAULT_TOLERANCES, verbose: bool = False) -> float:
    """Сертифицированный Δ для гаджета (см. DeltaSearch)."""
    return DeltaSearch(g, eps, eta, tol, verbose).run()
