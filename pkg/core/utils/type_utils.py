from types import UnionType
from typing import Any, Union
from typing import get_origin, get_args



def resolve_type(field_type: Any):
    """Resolves an annotation to the (base type, element type) pair used for coercion.

    `Optional[T]` and `T | None` unwrap to T. Homogeneous containers such as `list[float]`
    or `tuple[int, ...]` resolve to the container with its element type, so configuration
    values read from JSON or the command line can be cast element by element.

    Examples:
        Optional[int] -> (int, None)
        float | None -> (float, None)
        list[float] -> (list, float)
        tuple[str, ...] -> (tuple, str)
        str -> (str, None)

    Returns:
        resolved (tuple[Any, Any]): The base type and the element type, or None when the
            annotation is not a homogeneous container.
    """
    origin = get_origin(field_type)
    if origin in (Union, UnionType):
        non_none_args = [arg for arg in get_args(field_type) if arg is not type(None)]
        if len(non_none_args) == 1:
            return resolve_type(non_none_args[0])
        return field_type, None

    if origin in (list, tuple, set, frozenset):
        args = [arg for arg in get_args(field_type) if arg is not Ellipsis]
        return origin, args[0] if args else None

    return field_type, None


def coerce(value: Any, field_type: Any):
    """Casts `value` to the annotation `field_type`, element-wise for containers.

    None passes through unchanged; the caller decides whether it is allowed.

    Raises:
        TypeError: If the value cannot be cast.
    """
    if value is None:
        return None

    base, element = resolve_type(field_type)
    if base in (list, tuple, set, frozenset):
        if isinstance(value, (str, bytes)) or not hasattr(value, "__iter__"):
            value = [value]
        items = [coerce(item, element) if element is not None else item for item in value]
        return base(items)

    if base is bool:
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)
    if base in (int, float, str):
        if base is int and isinstance(value, float) and not value.is_integer():
            raise TypeError(f"Expected an integer, got {value!r}")
        try:
            return base(value)
        except (TypeError, ValueError):
            raise TypeError(f"Cannot convert {value!r} to {base.__name__}") from None

    return value
