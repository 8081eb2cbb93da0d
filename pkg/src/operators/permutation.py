"""Permutation variation and selection operators shared by the solvers.

Every random operator takes an explicit ``numpy.random.Generator`` and never
mutates its inputs. Mutations are expressed as position rearrangements
(``new[q] = old[idx[q]]``) so that the same rearrangement can be applied to a
random-key vector.
"""

from collections.abc import Sequence
from enum import StrEnum
from typing import Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from src.exceptions import ContractViolationError
from src.models.instance import Assignment, Cost

ROULETTE_PRESSURE = 3.0

KeyVector = np.ndarray


class Mutation(StrEnum):
    INSERTION = "ism"
    INVERSION = "ivm"
    EXCHANGE = "em"


class Population(BaseModel):
    model_config = ConfigDict(frozen=True)

    members: list[Assignment]
    costs: list[Cost]

    @model_validator(mode="after")
    def _check_lengths(self) -> "Population":
        if not self.members or len(self.members) != len(self.costs):
            raise ValueError("population needs at least one member and one cost per member")
        return self


def _check_n(a: Assignment) -> None:
    if a.n < 2:
        raise ContractViolationError(f"mutation needs at least 2 facilities, got {a.n}")


def _rearrange(a: Assignment, idx: np.ndarray) -> Assignment:
    return Assignment.trusted(a.as_array()[idx])


# Deterministic rearrangements


def exchange_indices(n: int, i: int, j: int) -> np.ndarray:
    idx = np.arange(n)
    idx[i], idx[j] = j, i
    return idx


def insertion_indices(n: int, src: int, dst: int) -> np.ndarray:
    order = list(range(n))
    moved = order.pop(src)
    order.insert(dst, moved)
    return np.array(order, dtype=np.intp)


def inversion_indices(n: int, left: int, right: int) -> np.ndarray:
    idx = np.arange(n)
    idx[left : right + 1] = idx[left : right + 1][::-1]
    return idx


def exchange(a: Assignment, i: int, j: int) -> Assignment:
    return _rearrange(a, exchange_indices(a.n, i, j))


def insert(a: Assignment, src: int, dst: int) -> Assignment:
    """Remove the element at ``src`` and reinsert it at ``dst``."""
    return _rearrange(a, insertion_indices(a.n, src, dst))


def invert(a: Assignment, left: int, right: int) -> Assignment:
    return _rearrange(a, inversion_indices(a.n, left, right))


# Random mutations


def draw_rearrangement(kind: Mutation, n: int, rng: np.random.Generator) -> np.ndarray:
    if kind is Mutation.EXCHANGE:
        i, j = rng.choice(n, size=2, replace=False)
        return exchange_indices(n, int(i), int(j))
    if kind is Mutation.INSERTION:
        src = int(rng.integers(n))
        dst = int(rng.integers(n - 1))
        # dst ranges over the n-1 positions other than src
        if dst >= src:
            dst += 1
        return insertion_indices(n, src, dst)
    left, right = sorted(int(v) for v in rng.choice(n, size=2, replace=False))
    return inversion_indices(n, left, right)


def exchange_mutation(a: Assignment, rng: np.random.Generator) -> Assignment:
    _check_n(a)
    return _rearrange(a, draw_rearrangement(Mutation.EXCHANGE, a.n, rng))


def insertion_mutation(a: Assignment, rng: np.random.Generator) -> Assignment:
    _check_n(a)
    return _rearrange(a, draw_rearrangement(Mutation.INSERTION, a.n, rng))


def inversion_mutation(a: Assignment, rng: np.random.Generator) -> Assignment:
    _check_n(a)
    return _rearrange(a, draw_rearrangement(Mutation.INVERSION, a.n, rng))


def mutate(a: Assignment, kind: Mutation, rng: np.random.Generator) -> Assignment:
    _check_n(a)
    return _rearrange(a, draw_rearrangement(kind, a.n, rng))


# Crossover


def mox_merge(p1: Assignment, p2: Assignment, mask: Sequence[bool]) -> tuple[Assignment, Assignment]:
    """Meta-ordering crossover for a given interleaving mask.

    ``mask`` has length 2n with n True entries; True takes the next element of
    p1, False the next element of p2. Child 1 keeps the first occurrence of each
    element in the merged sequence, child 2 the last occurrence.
    """
    if p1.n != p2.n:
        raise ContractViolationError(f"parents differ in length: {p1.n} vs {p2.n}")
    n = p1.n
    if len(mask) != 2 * n or sum(bool(m) for m in mask) != n:
        raise ContractViolationError(f"interleaving mask must have length {2 * n} with {n} parent-1 slots")

    first, second = iter(p1.perm), iter(p2.perm)
    merged = [next(first) if take_first else next(second) for take_first in mask]

    child1 = list(dict.fromkeys(merged))
    child2 = list(dict.fromkeys(reversed(merged)))[::-1]
    return Assignment.trusted(child1), Assignment.trusted(child2)


def mox_crossover(p1: Assignment, p2: Assignment, rng: np.random.Generator) -> tuple[Assignment, Assignment]:
    if p1.n != p2.n:
        raise ContractViolationError(f"parents differ in length: {p1.n} vs {p2.n}")
    mask = rng.permutation(np.repeat([True, False], p1.n))
    return mox_merge(p1, p2, mask.tolist())


# Selection


def roulette_probabilities(costs: Sequence[Cost]) -> np.ndarray:
    """Selection probabilities from exp(-3 * normalized cost); uniform when all costs are equal."""
    z = np.asarray(costs, dtype=np.float64)
    if z.size == 0 or not np.all(np.isfinite(z)):
        raise ContractViolationError("roulette selection needs a non-empty list of finite costs")
    spread = z.max() - z.min()
    if spread == 0:
        return np.full(z.size, 1.0 / z.size)
    weights = np.exp(-ROULETTE_PRESSURE * (z - z.min()) / spread)
    return weights / weights.sum()


def roulette_select(pop: Union[Population, Sequence[Cost]], rng: np.random.Generator) -> int:
    costs = pop.costs if isinstance(pop, Population) else pop
    probabilities = roulette_probabilities(costs)
    return int(rng.choice(probabilities.size, p=probabilities))


# Random keys


def random_keys(n: int, rng: np.random.Generator) -> KeyVector:
    return rng.random(n)


def decode_keys_array(keys: KeyVector) -> np.ndarray:
    if not np.all(np.isfinite(keys)):
        raise ContractViolationError("key vector contains non-finite entries")
    return np.argsort(keys, kind="stable")


def decode_keys(keys: Union[KeyVector, Sequence[float]]) -> Assignment:
    """Rank facilities by ascending key; equal keys keep index order."""
    return Assignment.trusted(decode_keys_array(np.asarray(keys, dtype=np.float64)))


def reencode_keys(keys: KeyVector, target: np.ndarray) -> KeyVector:
    """Rearrange ``keys`` so that they decode to ``target``.

    The sorted key values are redistributed along the target order; when ties
    would make the decoding ambiguous, evenly spaced ranks are used instead.
    """
    ordered = np.sort(keys)
    encoded = np.empty_like(keys)
    encoded[target] = ordered
    if np.array_equal(decode_keys_array(encoded), target):
        return encoded
    encoded[target] = np.arange(target.size, dtype=np.float64) / target.size
    return encoded
