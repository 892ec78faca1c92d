"""
ham_io - Файлы и текстовые выводы hamforge

Экспортирует:
- Файл гамильтониана (загрузка, запись, разбор с указанием места ошибки)
- Файл кодирования
- Файл набора взаимодействий
- Форматирование спектра, планов и таблиц
"""

from .hamfile import (
    SCHEMA_VERSION, load_hamiltonian, save_hamiltonian, hamiltonian_to_dict,
    hamiltonian_from_dict, dumps_hamiltonian, loads_hamiltonian,
)
from .encfile import load_encoding, save_encoding, encoding_to_dict, encoding_from_dict
from .interactions import load_interaction_set, interaction_set_from_dict
from .reports import format_number, format_spectrum, format_table, write_plan, write_report, write_text

__all__ = [
    'SCHEMA_VERSION',
    'load_hamiltonian',
    'save_hamiltonian',
    'hamiltonian_to_dict',
    'hamiltonian_from_dict',
    'dumps_hamiltonian',
    'loads_hamiltonian',
    'load_encoding',
    'save_encoding',
    'encoding_to_dict',
    'encoding_from_dict',
    'load_interaction_set',
    'interaction_set_from_dict',
    'format_number',
    'format_spectrum',
    'format_table',
    'write_plan',
    'write_report',
    'write_text',
]
