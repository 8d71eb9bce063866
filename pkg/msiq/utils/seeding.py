"""
Seeds derived from gene identifiers.

Gene identifiers enter seeds through their FNV-1a hash. Unlike the builtin `hash`,
it does not depend on `PYTHONHASHSEED`, so every worker process derives the same streams.
"""

from functools import cache

import numpy as np

FNV_OFFSET_BASIS = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK_64 = 0xFFFFFFFFFFFFFFFF


@cache
def fnv1a_hash(string: str) -> int:
    """
    64-bit FNV-1a hash of a string.

    Example:
        >>> hex(fnv1a_hash("a"))
        '0xaf63dc4c8601ec8c'
    """
    value = FNV_OFFSET_BASIS
    for byte in string.encode("utf-8"):
        value = ((value ^ byte) * FNV_PRIME) & MASK_64
    return value


def gene_seed_sequence(seed: int, gene_id: str, *keys: int) -> np.random.SeedSequence:
    """
    Seed stream of one gene.

    Args:
        seed: master seed
        gene_id: gene identifier
        keys: further non-negative keys telling apart the streams of one gene
            (scenario, setting, replicate)
    """
    return np.random.SeedSequence([seed, fnv1a_hash(gene_id), *keys])


def chain_seed(seed: int, gene_id: str) -> int:
    """Gibbs chain seed of a gene: the master seed XOR the gene hash, on 64 bits."""
    return (seed ^ fnv1a_hash(gene_id)) & MASK_64
