"""
simcheck/report.py

Отчёт о проверке (Δ, η, ε)-симуляции и его текстовый формат.

Формат: строки "ключ = значение" в фиксированном порядке, числа через repr,
поэтому повторный запуск даёт побайтно тот же текст.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from hamcore.errors import ParseError


REPORT_FIELDS = (
    'delta', 'eta_measured', 'eps_measured', 'eps_operator', 'eta_bound',
    'rank', 'multiplicity', 'requested_eps', 'requested_eta', 'passed',
    'per_eigenvalue_errors', 'partition', 'time_evolution', 'noise',
)


@dataclass
class SimulationReport:
    """
    Результат verify_simulation.

    eps_measured: максимум per_eigenvalue_errors (поблочные ошибки уровней)
    eps_operator: ‖H'_{≤Δ} − Ẽ(H)‖, операторная норма (≥ eps_measured);
        None для отчётов, собранных не verify_simulation
    eta_measured: ‖Ṽ − V‖ на носителе кодирования
    eta_bound: √2·‖P_{≤Δ} − E(1)‖
    partition: (β, относительная ошибка, оценка)
    time_evolution: [(t, расстояние, оценка 2εt + 4η)]
    noise: (δ, расстояние, оценка √(δ(4−3δ)) + 8η)
    """
    delta: float
    eta_measured: float
    eps_measured: float
    eps_operator: Optional[float] = None
    eta_bound: float = 0.0
    rank: int = 0
    multiplicity: int = 1
    requested_eps: Optional[float] = None
    requested_eta: Optional[float] = None
    passed: bool = True
    per_eigenvalue_errors: List[float] = field(default_factory=list)
    partition: Optional[Tuple[float, float, float]] = None
    time_evolution: List[Tuple[float, float, float]] = field(default_factory=list)
    noise: Optional[Tuple[float, float, float]] = None

    @property
    def eps_certified(self) -> float:
        """ε для оценок статсуммы, эволюции и композиции: операторная норма, если известна."""
        return self.eps_measured if self.eps_operator is None else max(self.eps_operator, self.eps_measured)

    def bounds_hold(self) -> bool:
        """Все записанные величины не превосходят своих оценок."""
        if self.partition is not None and self.partition[1] > self.partition[2]:
            return False
        if any(d > b for _, d, b in self.time_evolution):
            return False
        if self.noise is not None and self.noise[1] > self.noise[2]:
            return False
        return True

    def to_text(self) -> str:
        lines = []
        for name in REPORT_FIELDS:
            lines.append(f"{name} = {_format_value(name, getattr(self, name))}")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] Δ={self.delta:.6g}, ε={self.eps_measured:.3e}, "
            f"η={self.eta_measured:.3e}, rank={self.rank}"
        )


def _format_value(name: str, value) -> str:
    if value is None:
        return "none"
    if name == 'passed':
        return "true" if value else "false"
    if name in ('rank', 'multiplicity'):
        return str(int(value))
    if name == 'per_eigenvalue_errors':
        return ", ".join(repr(float(x)) for x in value)
    if name in ('partition', 'noise'):
        return ", ".join(repr(float(x)) for x in value)
    if name == 'time_evolution':
        return "; ".join(":".join(repr(float(x)) for x in point) for point in value)
    return repr(float(value))


def _parse_floats(raw: str, sep: str, location: str) -> List[float]:
    if not raw:
        return []
    try:
        return [float(x) for x in raw.split(sep)]
    except ValueError:
        raise ParseError(f"Ожидались числа, получено '{raw}'", location)


def report_from_text(text: str) -> SimulationReport:
    """
    Разбирает текст, созданный SimulationReport.to_text().

    Raises:
        ParseError: с номером строки или именем поля
    """
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if " = " not in line:
            raise ParseError(f"Строка без '=': '{line}'", f"строка {lineno}")
        key, raw = line.split(" = ", 1)
        key = key.strip()
        if key not in REPORT_FIELDS:
            raise ParseError(f"Неизвестное поле '{key}'", f"строка {lineno}")
        values[key] = raw.strip()
    missing = [k for k in REPORT_FIELDS if k not in values]
    if missing:
        raise ParseError(f"Нет полей: {', '.join(missing)}", "report")

    def scalar(key: str) -> Optional[float]:
        raw = values[key]
        if raw == "none":
            return None
        parsed = _parse_floats(raw, ",", key)
        if len(parsed) != 1:
            raise ParseError(f"Ожидалось одно число, получено '{raw}'", key)
        return parsed[0]

    def triple(key: str) -> Optional[Tuple[float, float, float]]:
        raw = values[key]
        if raw == "none":
            return None
        parsed = _parse_floats(raw, ",", key)
        if len(parsed) != 3:
            raise ParseError(f"Ожидалось три числа, получено '{raw}'", key)
        return tuple(parsed)

    if values['passed'] not in ("true", "false"):
        raise ParseError(f"passed должно быть true/false: '{values['passed']}'", 'passed')
    evolution = []
    if values['time_evolution'] not in ("", "none"):
        for chunk in values['time_evolution'].split(";"):
            point = _parse_floats(chunk.strip(), ":", 'time_evolution')
            if len(point) != 3:
                raise ParseError(f"Точка эволюции '{chunk}' не из трёх чисел", 'time_evolution')
            evolution.append(tuple(point))
    return SimulationReport(
        delta=scalar('delta'),
        eta_measured=scalar('eta_measured'),
        eps_measured=scalar('eps_measured'),
        eps_operator=scalar('eps_operator'),
        eta_bound=scalar('eta_bound'),
        rank=int(scalar('rank')),
        multiplicity=int(scalar('multiplicity')),
        requested_eps=scalar('requested_eps'),
        requested_eta=scalar('requested_eta'),
        passed=values['passed'] == "true",
        per_eigenvalue_errors=_parse_floats(values['per_eigenvalue_errors'], ",", 'per_eigenvalue_errors'),
        partition=triple('partition'),
        time_evolution=evolution,
        noise=triple('noise'),
    )
