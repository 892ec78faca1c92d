"""
ham_io/interactions.py

Файл набора взаимодействий для классификации:

{"schema_version": 1, "label": "TIM",
 "interactions": [{"pauli": {"XX": 1.0}}, {"pauli": {"Z": 1.0}},
                  {"matrix": [[[re, im], ...], ...]}]}
"""

import json
from typing import Any

from hamcore.errors import HamforgeError, ParseError
from pipeline.classify import InteractionSet

from .hamfile import SCHEMA_VERSION, _is_number, pairs_to_matrix


def interaction_set_from_dict(data: Any) -> InteractionSet:
    if not isinstance(data, dict):
        raise ParseError("корень файла должен быть объектом", "root")
    if data.get('schema_version') != SCHEMA_VERSION:
        raise ParseError(f"неподдерживаемая schema_version {data.get('schema_version')!r}", "schema_version")
    items = data.get('interactions')
    if not isinstance(items, list) or not items:
        raise ParseError("поле 'interactions' должно быть непустым списком", "interactions")
    label = data.get('label')
    if label is not None and not isinstance(label, str):
        raise ParseError("поле 'label' должно быть строкой", "label")
    blocks = []
    for idx, raw in enumerate(items):
        location = f"interactions[{idx}]"
        if not isinstance(raw, dict) or ('pauli' in raw) == ('matrix' in raw):
            raise ParseError("нужно ровно одно из полей 'pauli' и 'matrix'", location)
        try:
            if 'pauli' in raw:
                words = raw['pauli']
                if (not isinstance(words, dict) or not words
                        or not all(isinstance(w, str) and _is_number(c) for w, c in words.items())):
                    raise ParseError("'pauli' — объект {строка Паули: число}", f"{location}.pauli")
                blocks.append(InteractionSet.from_pauli([words]).interactions[0])
            else:
                blocks.append(pairs_to_matrix(raw['matrix'], f"{location}.matrix"))
        except ParseError:
            raise
        except (HamforgeError, KeyError) as exc:
            raise ParseError(str(exc), location) from exc
    try:
        return InteractionSet(tuple(blocks), label)
    except ParseError:
        raise
    except HamforgeError as exc:
        raise ParseError(str(exc), "interactions") from exc


def load_interaction_set(path: str) -> InteractionSet:
    """
    Raises:
        ParseError: файл не читается или нарушает формат
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"некорректный JSON: {exc.msg}", f"строка {exc.lineno}") from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"не удалось прочитать файл: {exc}", path) from exc
    return interaction_set_from_dict(data)
