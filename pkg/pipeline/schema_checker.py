from typing import Any, Iterable, Set

from models.errors import SchemaError


def extract_keys(obj: Any) -> Set[str]:
    if isinstance(obj, dict):
        return set(obj.keys())
    if isinstance(obj, list) and obj and isinstance(obj[0], dict):
        return set(obj[0].keys())
    return set()


def require_keys(obj: Any, required: Iterable[str], name: str) -> None:
    """Raise SchemaError naming every missing key of a JSON object."""
    if not isinstance(obj, dict):
        raise SchemaError(f"{name} must be a JSON object, got {type(obj).__name__}.")

    missing = sorted(set(required) - extract_keys(obj))
    if missing:
        raise SchemaError(f"{name} is missing key(s): {', '.join(missing)}.")


def require_list(obj: Any, key: str, name: str) -> list:
    value = obj.get(key)
    if not isinstance(value, list):
        raise SchemaError(f"{name}.{key} must be a list.")
    return value


def check_records(records: list, required: Iterable[str], name: str) -> None:
    """Every element of a JSON array must be an object carrying the required keys."""
    for i, rec in enumerate(records):
        require_keys(rec, required, f"{name}[{i}]")
