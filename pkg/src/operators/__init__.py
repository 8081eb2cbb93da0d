"""Variation and selection operators on permutations and random keys."""

from src.operators.permutation import (
    KeyVector,
    Mutation,
    Population,
    decode_keys,
    decode_keys_array,
    exchange,
    exchange_mutation,
    insert,
    insertion_mutation,
    invert,
    inversion_mutation,
    mox_crossover,
    mox_merge,
    mutate,
    random_keys,
    reencode_keys,
    roulette_probabilities,
    roulette_select,
)

__all__ = [
    "KeyVector",
    "Mutation",
    "Population",
    "decode_keys",
    "decode_keys_array",
    "exchange",
    "exchange_mutation",
    "insert",
    "insertion_mutation",
    "invert",
    "inversion_mutation",
    "mox_crossover",
    "mox_merge",
    "mutate",
    "random_keys",
    "reencode_keys",
    "roulette_probabilities",
    "roulette_select",
]
