"""
hamcore/fast_pauli.py

Numba-ядро заполнения плотной матрицы строки Паули.

Строка Паули переставляет базисные векторы: столбец c переходит в строку
c ^ xmask со значением i^{ny} · (-1)^{popcount(c & zmask)}. Если numba
не установлена, то же ядро выполняется как обычная Python-функция.
"""

import numpy as np

try:
    from numba import jit
    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False

    # Заглушка для случая, когда numba не установлена
    def jit(*args, **kwargs):
        def decorator(func):
            return func
        return decorator


@jit(nopython=True, cache=True)
def _accumulate_pauli(out, xmask, zmask, coeff_re, coeff_im):
    """
    Прибавляет coeff · P к out на месте.

    Args:
        out: квадратная complex128 матрица 2^n x 2^n
        xmask: биты узлов с буквой X или Y
        zmask: биты узлов с буквой Z или Y
        coeff_re, coeff_im: вес, уже умноженный на i^{ny}
    """
    dim = out.shape[0]
    coeff = complex(coeff_re, coeff_im)
    for col in range(dim):
        v = col & zmask
        parity = 0
        while v:
            parity ^= 1
            v &= v - 1
        row = col ^ xmask
        if parity:
            out[row, col] -= coeff
        else:
            out[row, col] += coeff


def pauli_masks(n: int, sites, letters: str):
    """
    Возвращает (xmask, zmask, ny) для строки Паули на n кубитах.

    Узел s соответствует биту n-1-s (узел 0 — старший множитель).
    """
    xmask = 0
    zmask = 0
    ny = 0
    for s, letter in zip(sites, letters):
        bit = 1 << (n - 1 - s)
        if letter == 'X':
            xmask |= bit
        elif letter == 'Z':
            zmask |= bit
        elif letter == 'Y':
            xmask |= bit
            zmask |= bit
            ny += 1
    return xmask, zmask, ny


def accumulate_pauli_string(out: np.ndarray, n: int, sites, letters: str,
                            weight: complex = 1.0) -> None:
    """Прибавляет weight · (строка Паули) к матрице out."""
    xmask, zmask, ny = pauli_masks(n, sites, letters)
    coeff = complex(weight) * (1j ** ny)
    _accumulate_pauli(out, xmask, zmask, coeff.real, coeff.imag)
