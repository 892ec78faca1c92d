"""
hamcore/errors.py

Иерархия ошибок hamforge.

Все ошибки наследуют ValueError, поэтому код, который ловит ValueError
(как main.py), продолжает работать.
"""

from typing import Optional


class HamforgeError(ValueError):
    """Базовая ошибка библиотеки."""


class DimensionCap(HamforgeError):
    """Размерность d^n превышает dim_cap."""


class BadSupport(HamforgeError):
    """Носитель терма ссылается на несуществующий узел или не упорядочен."""


class NotQubit(HamforgeError):
    """Операция определена только для d = 2."""


class NotHermitian(HamforgeError):
    """Матрица не эрмитова в пределах tol_herm."""


class DegenerateCut(HamforgeError):
    """Порог Δ совпадает с собственным значением (некорректный разрез)."""


class DimMismatch(HamforgeError):
    """Несогласованные размерности операторов."""


class BadAncilla(HamforgeError):
    """Состояние анциллы не лежит в нужном проекторе."""


class DegenerateEncoding(HamforgeError):
    """Кодирование с p + q = 0."""


class BlockViolation(HamforgeError):
    """Нарушены блочные условия теории возмущений."""


class CapExceeded(HamforgeError):
    """Поиск Δ превысил delta_cap."""


class OverlapViolation(HamforgeError):
    """Пересечение носителей там, где требуется их непересечение."""


class OddYCount(HamforgeError):
    """Число букв Y в строке Паули нечётно или равно нулю."""


class BadOperand(HamforgeError):
    """Операнд гаджета имеет недопустимый вид."""


class BadPair(HamforgeError):
    """Недопустимая пара узлов K4."""


class BadForm(HamforgeError):
    """Взаимодействие не имеет требуемой канонической формы."""


class BadKind(HamforgeError):
    """Неизвестный или вырожденный вид подпространственного кодирования."""


class BadTopology(HamforgeError):
    """Топология цели не подходит для гаджета."""


class RankMismatch(HamforgeError):
    """Ранги проекторов не совпадают."""


class TooFar(HamforgeError):
    """Проекторы находятся на расстоянии >= 1."""


class SubspaceMismatch(HamforgeError):
    """Ранг низкоэнергетического проектора не равен (p+q)·dim(H)."""


class NotLocalEncoding(HamforgeError):
    """Кодирование не несёт структуры локальности."""


class RankPNotOne(HamforgeError):
    """Сильная форма требует rank(P) = 1."""


class BudgetViolation(HamforgeError):
    """Нарушены условия композиции симуляций."""


class Only1Local(HamforgeError):
    """Набор взаимодействий содержит только 1-локальные члены."""


class UnsupportedFamily(HamforgeError):
    """Целевое семейство или исходная форма не поддерживаются."""


class RoutingFailure(HamforgeError):
    """Не удалось проложить ребро на решётке."""


class FamilyViolation(HamforgeError):
    """Терм не принадлежит объявленному семейству взаимодействий."""


class ParseError(HamforgeError):
    """Ошибка разбора файла с указанием места."""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
