"""QAPLIB plain-text reader and writer.

Layout: the size n, then the flow matrix and the distance matrix as n*n
whitespace-separated numbers each (row-major). An optional third n*n block is
read as the linear allocation-cost matrix.
"""

import logging
from typing import Union

import numpy as np

from src.exceptions import InvalidSizeError, QaplibFormatError, QaplibParseError
from src.models.instance import QapInstance

logger = logging.getLogger(__name__)


def _parse_number(token: str, position: int) -> Union[int, float]:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise QaplibParseError(position, token) from None


def parse_qaplib(text: str, name: str = "") -> QapInstance:
    tokens = text.split()
    if not tokens:
        raise QaplibFormatError(expected=1, found=0)

    n = _parse_number(tokens[0], 0)
    if not isinstance(n, int):
        raise QaplibParseError(0, tokens[0])
    if n < 2:
        raise InvalidSizeError(f"instance size must be at least 2, got {n}")

    block = n * n
    expected = 1 + 2 * block
    if len(tokens) not in (expected, expected + block):
        raise QaplibFormatError(expected=expected, found=len(tokens))

    values = [_parse_number(token, position) for position, token in enumerate(tokens[1:], start=1)]
    dtype = np.int64 if all(isinstance(v, int) for v in values) else np.float64
    data = np.array(values, dtype=dtype)

    flow = data[:block].reshape(n, n)
    distance = data[block : 2 * block].reshape(n, n)
    linear_cost = data[2 * block :].reshape(n, n) if data.size == 3 * block else None

    logger.debug(f"Parsed QAPLIB instance {name or '<unnamed>'} with n={n}")
    return QapInstance(flow=flow, distance=distance, linear_cost=linear_cost, name=name)


def _format_block(matrix: np.ndarray) -> str:
    return "\n".join(" ".join(repr(v.item()) for v in row) for row in matrix)


def serialize_qaplib(inst: QapInstance) -> str:
    blocks = [str(inst.n), _format_block(inst.flow), _format_block(inst.distance)]
    if inst.linear_cost is not None:
        blocks.append(_format_block(inst.linear_cost))
    return "\n\n".join(blocks) + "\n"
