"""
Utils for unpacking `--set key.path=value` overrides given on the command line into a
nested document that is merged over the loaded run configuration.
"""
import ast
from typing import Any

from dockvision import exceptions


def literal_eval(input_value: str) -> Any:
    """
    Wrapper for ast.literal eval that accounts for hex and bools which it normally
     coerces to int/string respectively.
    """
    if isinstance(input_value, str) and input_value.startswith('0x'):
        return input_value
    elif isinstance(input_value, str) and input_value.lower() in ('true', 'false'):
        return input_value.lower() == 'true'
    else:
        try:
            return ast.literal_eval(input_value)
        except (ValueError, SyntaxError):
            return input_value


def unpack_overrides(overrides: list[str] | None) -> dict:
    """Turn ['a.b=1', 'c=x'] into {'a': {'b': 1}, 'c': 'x'}."""
    output: dict = {}
    for item in overrides or []:
        if '=' not in item:
            raise exceptions.ConfigInvalid(
                f"The override `{item}` is malformed. Use --set key.path=value."
            )
        key_path, value = item.split('=', 1)
        keys = [k for k in key_path.strip().split('.') if k]
        if not keys:
            raise exceptions.ConfigInvalid(f"The override `{item}` has an empty key.")
        target = output
        for key in keys[:-1]:
            target = target.setdefault(key, {})
            if not isinstance(target, dict):
                raise exceptions.ConfigInvalid(
                    f"The override `{item}` conflicts with an earlier override."
                )
        target[keys[-1]] = literal_eval(value.strip())
    return output


def deep_merge(base: dict, update: dict) -> dict:
    """Recursively merge `update` into a copy of `base`."""
    merged = dict(base)
    for k, v in update.items():
        if isinstance(v, dict) and isinstance(merged.get(k), dict):
            merged[k] = deep_merge(merged[k], v)
        else:
            merged[k] = v
    return merged
