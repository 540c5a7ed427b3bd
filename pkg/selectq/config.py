"""
CONFIG

Helpers shared by the frozen configuration dataclasses. `from_dict` refuses
unknown keys and converts nested dictionaries and lists into the field types
declared by the class, so a JSON document maps onto one config object.
"""

from dataclasses import asdict, fields

from selectq.errors import ConfigError


class ConfigMixin:
    """Adds `from_dict` and `to_dict` to a frozen dataclass."""

    # field name -> config class, for nested sections.
    nested = {}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError(f"{cls.__name__} expects a JSON object, got {type(data).__name__}.")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"Unknown {cls.__name__} keys: {', '.join(unknown)}.")
        values = {}
        for key, value in data.items():
            if key in cls.nested and isinstance(value, dict):
                value = cls.nested[key].from_dict(value)
            elif isinstance(value, list):
                value = tuple(value)
            values[key] = value
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(f"Invalid {cls.__name__}: {exc}.") from exc

    def to_dict(self):
        return asdict(self)


def require(condition, message):
    """Raises ConfigError with `message` unless `condition` holds."""
    if not condition:
        raise ConfigError(message)
