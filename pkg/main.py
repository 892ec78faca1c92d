#!/usr/bin/env python3
"""
main.py

Точка входа hamforge: компиляция и сертификация гамильтоновых симуляций.

Использование:
    python main.py spectrum h.json -k 3
    python main.py compile h.json --family no_y_pauli --certify --out sim.json
    python main.py verify h.json sim.json enc.json --delta 50 --beta 1 --times 0.5 1 2
    python main.py classify set.json
    python main.py tables --interaction xy

Коды выхода: 0 — успех, 2 — сертификация или проверка не прошла,
3 — ошибка разбора или использования.
"""

import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from hamcore import assemble, diagonalize
from hamcore.errors import (
    CapExceeded, DimensionCap, HamforgeError, Only1Local, ParseError, UnsupportedFamily,
)
from gadgets.heisenberg import first_order_table, second_order_table
from ham_io import (
    format_spectrum, format_table, load_encoding, load_hamiltonian, load_interaction_set,
    save_encoding, save_hamiltonian, write_plan, write_report,
)
from pipeline import COMPILE_FAMILIES, classify, compile_hamiltonian
from simcheck import partition_check, time_evolution_check, verify_simulation

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_USAGE = 3

logger = logging.getLogger("hamforge")


class _Parser(argparse.ArgumentParser):
    """argparse с кодом выхода 3 для ошибок использования."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: ошибка: {message}\n")


def positive_float(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидалось число, получено '{raw}'")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"значение должно быть положительным: {raw}")
    return value


def product_state(dim: int) -> np.ndarray:
    """Детерминированное начальное состояние: равная суперпозиция базиса."""
    psi = np.ones(dim, dtype=complex) / np.sqrt(dim)
    return np.outer(psi, psi.conj())


# ---------------------------------------------------------------------------
# Команды
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    h = load_hamiltonian(args.path)
    values = diagonalize(assemble(h)).eigenvalues
    k = len(values) if args.k is None else min(args.k, len(values))
    sys.stdout.write(format_spectrum(values[:k]))
    return EXIT_OK


def cmd_compile(args) -> int:
    h = load_hamiltonian(args.path)
    logger.info("Компиляция %s в семейство %s", h, args.family)
    try:
        h_sim, encoding, plan = compile_hamiltonian(
            h, args.family, args.eps, args.eta, lattice=args.lattice, certify=args.certify,
            spacing=args.spacing, verbose=args.verbose,
        )
    except CapExceeded as exc:
        print(f"Сертификация невозможна: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.out:
        save_hamiltonian(h_sim, args.out)
    if args.encoding_out:
        if encoding is None:
            print("Кодирование не построено: симулятор больше dim_cap", file=sys.stderr)
        else:
            save_encoding(encoding, args.encoding_out)
    if args.report:
        write_plan(plan, args.report)
    else:
        sys.stdout.write(plan.to_text())
    if args.certify and not plan.certified:
        print("Сертификация не пройдена", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_verify(args) -> int:
    h = load_hamiltonian(args.target)
    h_sim = load_hamiltonian(args.sim)
    e = load_encoding(args.encoding)
    try:
        report = verify_simulation(h, h_sim, e, args.delta, args.eps, args.eta)
        if args.beta is not None:
            check = partition_check(h, h_sim, e, args.delta, args.beta, eps=report.eps_certified)
            report.partition = check.as_triple()
        if args.times:
            points = time_evolution_check(
                h, h_sim, e, product_state(h.dim), args.times,
                eps=report.eps_certified, eta=report.eta_measured,
            )
            report.time_evolution = [(p.t, p.distance, p.bound) for p in points]
    except ParseError:
        raise
    except HamforgeError as exc:
        if isinstance(exc, DimensionCap):
            raise
        print(f"Проверка не пройдена: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.report:
        write_report(report, args.report)
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.passed and report.bounds_hold() else EXIT_FAILED


def cmd_classify(args) -> int:
    s = load_interaction_set(args.path)
    print(classify(s))
    return EXIT_OK


def cmd_tables(args) -> int:
    sys.stdout.write(format_table(first_order_table(args.interaction), f"first order ({args.interaction})"))
    sys.stdout.write(format_table(second_order_table(args.interaction), f"second order ({args.interaction})"))
    return EXIT_OK


COMMANDS = {
    'spectrum': cmd_spectrum,
    'compile': cmd_compile,
    'verify': cmd_verify,
    'classify': cmd_classify,
    'tables': cmd_tables,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog='hamforge',
        description='Компилятор и сертификатор гамильтоновых симуляций',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Примеры:
  hamforge spectrum k4.json -k 3                      # три нижних уровня
  hamforge compile yy.json --family no_y_pauli --certify --out sim.json
  hamforge compile h.json --family real_2local_with_fields --lattice
  hamforge verify h.json sim.json enc.json --delta 64 --times 0.5 1 2
  hamforge classify tim.json                          # classical / stoquastic / universal
  hamforge tables --interaction xy

Переменная окружения HAMFORGE_DIM_CAP задаёт предел размерности (по умолчанию 16384).
        """
    )
    parser.add_argument('--verbose', '-v', action='store_true', help='Подробный вывод')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('spectrum', help='Нижние собственные значения')
    p.add_argument('path', help='Файл гамильтониана')
    p.add_argument('-k', type=int, default=None, help='Сколько значений вывести (по умолчанию все)')

    p = sub.add_parser('compile', help='Компиляция в целевое семейство')
    p.add_argument('path', help='Файл гамильтониана')
    p.add_argument('--family', required=True, choices=COMPILE_FAMILIES, help='Целевое семейство')
    p.add_argument('--eps', type=positive_float, default=0.1, help='Допуск ε (default: 0.1)')
    p.add_argument('--eta', type=positive_float, default=0.1, help='Допуск η (default: 0.1)')
    p.add_argument('--lattice', action='store_true', help='Раскладка на квадратную решётку')
    p.add_argument('--spacing', type=int, default=1, help='Шаг решётки для входов с geometry')
    p.add_argument('--certify', action='store_true', help='Сертифицировать каждую стадию')
    p.add_argument('--out', help='Файл симулятора')
    p.add_argument('--encoding-out', dest='encoding_out', help='Файл кодирования')
    p.add_argument('--report', help='Файл плана (иначе план печатается)')

    p = sub.add_parser('verify', help='Проверка (Δ, η, ε)-симуляции')
    p.add_argument('target', help='Файл целевого гамильтониана')
    p.add_argument('sim', help='Файл симулятора')
    p.add_argument('encoding', help='Файл кодирования')
    p.add_argument('--delta', type=positive_float, required=True, help='Порог Δ')
    p.add_argument('--eps', type=positive_float, default=None, help='Требуемое ε')
    p.add_argument('--eta', type=positive_float, default=None, help='Требуемое η')
    p.add_argument('--beta', type=positive_float, default=None, help='β для проверки статсуммы')
    p.add_argument('--times', type=float, nargs='*', default=[], help='Моменты t для эволюции')
    p.add_argument('--report', help='Файл отчёта')

    p = sub.add_parser('classify', help='Класс набора взаимодействий')
    p.add_argument('path', help='Файл набора взаимодействий')

    p = sub.add_parser('tables', help='Таблицы эффективных взаимодействий K4')
    p.add_argument('--interaction', choices=('heisenberg', 'xy'), default='heisenberg')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"Ошибка разбора: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimensionCap, UnsupportedFamily, Only1Local) as exc:
        print(f"Ошибка: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HamforgeError as exc:
        print(f"Ошибка: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
