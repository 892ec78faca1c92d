"""
ham_io/reports.py

Текстовые выводы команд: спектр, отчёт проверки, план компиляции, таблицы.
Формат фиксирован, одинаковый вход даёт побайтно одинаковый текст.
"""

from typing import Iterable, List, Sequence

import numpy as np

from hamcore.config import DEFAULT_TOLERANCES
from pipeline.plan import CompilationPlan
from simcheck.report import SimulationReport


def format_number(x: float) -> str:
    """12 значащих цифр; -0 печатается как 0."""
    text = f"{float(x):.12g}"
    return "0" if text == "-0" else text


def format_spectrum(values: Sequence[float], tol: float = DEFAULT_TOLERANCES.tol_eig) -> str:
    """
    Собственные значения по одному в строке.

    Значения меньше tol·max(1, max|λ|) по модулю печатаются как 0,
    чтобы шум разложения не менял текст.
    """
    values = np.asarray(values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    lines = [format_number(0.0 if abs(v) <= tol * scale else v) for v in values]
    return "\n".join(lines) + ("\n" if lines else "")


def write_text(text: str, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)


def write_plan(plan: CompilationPlan, path: str) -> None:
    write_text(plan.to_text(), path)


def write_report(report: SimulationReport, path: str) -> None:
    write_text(report.to_text(), path)


def format_table(rows: Iterable, title: str) -> str:
    """Заголовок и строки таблицы (str каждой строки)."""
    lines: List[str] = [title]
    lines.extend(str(row) for row in rows)
    return "\n".join(lines) + "\n"
