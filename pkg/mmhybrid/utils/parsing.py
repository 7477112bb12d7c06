import math
import re

LIST_SPLIT_RE = re.compile(r"\s*,\s*")
TRUE_VALUES = {"1", "true", "yes", "on"}
FALSE_VALUES = {"0", "false", "no", "off"}


def split_list(value):
    """
    >>> split_list("1, 2 ,3")
    ['1', '2', '3']
    >>> split_list(" ")
    []
    """
    value = value.strip()
    if not value:
        return []
    return LIST_SPLIT_RE.split(value)


def parse_float_list(value):
    """
    >>> parse_float_list("-20, -15.5,0")
    [-20.0, -15.5, 0.0]
    """
    return [float(v) for v in split_list(value)]


def parse_int_list(value):
    """
    >>> parse_int_list("16,32, 64")
    [16, 32, 64]
    """
    return [int(v) for v in split_list(value)]


def parse_bool(value):
    """
    >>> parse_bool("Yes"), parse_bool("off")
    (True, False)
    """
    lowered = value.strip().lower()
    if lowered in TRUE_VALUES:
        return True
    if lowered in FALSE_VALUES:
        return False
    raise ValueError("Invalid boolean %r" % value)


def db_to_linear(value_db):
    """
    >>> db_to_linear(20.0)
    100.0
    """
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value, floor=0.0):
    """
    >>> linear_to_db(1000.0)
    30.0
    >>> linear_to_db(0.0, floor=1e-30)
    -300.0
    """
    return 10.0 * math.log10(max(value, floor))
