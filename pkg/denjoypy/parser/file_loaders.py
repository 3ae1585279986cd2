import os
from typing import Dict, Tuple

import pandas as pd
import pyparsing as pp
import sympy as sp

from denjoypy.exceptions.exceptions import ConfigFileError, GapTableError

DELTA_TOKEN = pp.Regex(r"\d*\.?\d+(/\d+)?")
TAIL_HEADER = (
    pp.Suppress(pp.Keyword("tail")) + pp.Suppress("=") + pp.Suppress(pp.Keyword("classical"))
    + pp.Suppress(":") + DELTA_TOKEN("delta") + pp.StringEnd()
)

CONFIG_KEY = pp.Word(pp.alphas + "_", pp.alphanums + "_-")
CONFIG_LINE = CONFIG_KEY("key") + pp.Suppress("=") + pp.Regex(r".*")("value") + pp.StringEnd()


def load_text(path: str) -> str:
    """
    Loads a file as raw text.

    Parameters
    ----------
    path : str
        File path.

    Returns
    -------
    str
        Raw text of the file.
    """

    with open(path, encoding="utf-8") as file:
        raw = file.read()
    return raw


def load_gap_table(path: str) -> Tuple[Dict[int, float], sp.Rational]:
    """
    Load an explicit gap table.

    The first line is ``tail=classical:DELTA``; the rest is a CSV with columns ``index`` and
    ``length`` covering every index in [-T, T] exactly once.

    Parameters
    ----------
    path : str
        File path to the table.

    Returns
    -------
    entries : dict of int to float
        Unnormalized lengths by index.
    tail_delta : sympy.Rational
        Class of the classical tail continuing the table.

    Raises
    ------
    GapTableError
        If the header, the columns or the values are malformed.
    """
    if not os.path.isfile(path):
        raise GapTableError(path, "no such file")

    with open(path, encoding="utf-8") as file:
        header = file.readline().strip()
        try:
            tail_delta = sp.Rational(TAIL_HEADER.parse_string(header)["delta"])
        except pp.ParseException:
            raise GapTableError(path, f"the first line '{header}' is not 'tail=classical:DELTA'")

        try:
            frame = pd.read_csv(file, skipinitialspace=True, comment="#")
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            raise GapTableError(path, f"the CSV body could not be read ({e})")

    frame.columns = [str(c).strip().lower() for c in frame.columns]
    if not {"index", "length"}.issubset(frame.columns):
        raise GapTableError(path, f"expected columns 'index,length', found {list(frame.columns)}")
    if frame.empty:
        raise GapTableError(path, "the table has no rows")

    indices = pd.to_numeric(frame["index"], errors="coerce")
    lengths = pd.to_numeric(frame["length"], errors="coerce")
    if indices.isna().any() or lengths.isna().any():
        raise GapTableError(path, "every index and length must be numeric")
    if (indices != indices.round()).any():
        raise GapTableError(path, "indices must be integers")
    if indices.duplicated().any():
        duplicated = indices[indices.duplicated()].astype(int).tolist()
        raise GapTableError(path, f"indices listed more than once: {duplicated[:5]}")
    if (lengths <= 0).any():
        raise GapTableError(path, "lengths must be positive")

    entries = {int(i): float(v) for i, v in zip(indices, lengths)}
    radius = max(abs(i) for i in entries)
    if len(entries) != 2 * radius + 1:
        raise GapTableError(path, f"the indices must cover [-{radius}, {radius}] without holes")

    return entries, tail_delta


def parse_config_text(text: str, path: str = "<string>") -> Dict[str, str]:
    """
    Parse ``key=value`` lines; blank lines and text after '#' are ignored. Dashes in keys become
    underscores so that keys can be written like the flags they mirror.
    """
    values = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            parsed = CONFIG_LINE.parse_string(line)
        except pp.ParseException:
            raise ConfigFileError(path, line_number, raw_line)

        key = parsed["key"].replace("-", "_")
        values[key] = parsed["value"].strip()

    return values


def load_config(path: str) -> Dict[str, str]:
    """
    Load a configuration file of ``key=value`` lines.

    Raises
    ------
    ConfigFileError
        On the first line that is not of the form key=value.
    """
    return parse_config_text(load_text(path), path)
