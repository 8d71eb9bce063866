import numpy as np

from msiq.models import Hyperparameters, ReeRow
from msiq.quant_sdk import ChainState


def span(first: int, last: int) -> list[int]:
    """Positions `first..last`, both included."""
    return list(range(first, last + 1))


def make_row(estimator: str, value: float, scenario: int = 2, setting: int = 1, gene: str = "g") -> ReeRow:
    return ReeRow(gene_id=gene, scenario=scenario, setting=setting, replicate=0, estimator=estimator, ree=value)


def random_instance(rng: np.random.Generator, sizes: list[int], n_isoforms: int, zero_prob: float = 0.3):
    """Random generating matrices (at least one positive entry per row) and a valid state."""
    H = []
    for n in sizes:
        h = rng.uniform(0.1, 1.0, size=(n, n_isoforms))
        zero = rng.random((n, n_isoforms)) < zero_prob
        zero[np.arange(n), rng.integers(n_isoforms, size=n)] = False
        h[zero] = 0.0
        H.append(h)
    Z = [[int(rng.choice(np.flatnonzero(row > 0))) for row in h] for h in H]
    E = rng.integers(0, 2, size=len(sizes))
    state = ChainState.from_assignments(Z, E, rng.uniform(0.05, 0.95), n_isoforms)
    hyper = Hyperparameters(lam=tuple(rng.uniform(0.5, 3.0, size=n_isoforms)), a=rng.uniform(0.5, 3), b=rng.uniform(0.5, 3))
    return H, state, hyper
