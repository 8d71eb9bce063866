import numpy as np

from msiq.utils.seeding import FNV_OFFSET_BASIS, chain_seed, fnv1a_hash, gene_seed_sequence


def test_reference_values():
    assert fnv1a_hash("") == FNV_OFFSET_BASIS
    assert fnv1a_hash("a") == 0xAF63DC4C8601EC8C


def test_distinct_genes():
    hashes = {fnv1a_hash(f"gene{k:04d}") for k in range(1, 1001)}
    assert len(hashes) == 1000


def test_chain_seed():
    assert chain_seed(0, "gene0001") == fnv1a_hash("gene0001")
    assert chain_seed(3, "gene0001") == fnv1a_hash("gene0001") ^ 3
    assert 0 <= chain_seed(2**40, "gene0001") < 2**64


def test_gene_streams():
    first = np.random.default_rng(gene_seed_sequence(7, "gene0001", 2, 1, 0)).random(4)
    again = np.random.default_rng(gene_seed_sequence(7, "gene0001", 2, 1, 0)).random(4)
    np.testing.assert_array_equal(first, again)
    for other in (
        gene_seed_sequence(8, "gene0001", 2, 1, 0),
        gene_seed_sequence(7, "gene0002", 2, 1, 0),
        gene_seed_sequence(7, "gene0001", 2, 1, 1),
    ):
        assert not np.array_equal(np.random.default_rng(other).random(4), first)
