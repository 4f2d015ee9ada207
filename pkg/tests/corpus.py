"""Shared test corpus: 5 kernels x 10 triplets = 50 (kernel, law) pairs.

Chosen so every kernel sees point masses, Gaussian parts, finite- and
infinite-activity jumps, symmetric and skewed laws, and so the domain
verdicts across the corpus include strict gaps (member of the compensated
domain but not the plain one, and so on).
"""

import idcalc as ic
from idcalc.kernels import (
    exp_kernel,
    log_inverse_kernel,
    power_at_zero_kernel,
    power_tail_kernel,
)


def corpus_kernels():
    return [
        exp_kernel(),
        log_inverse_kernel(),
        power_tail_kernel(1.5),
        power_tail_kernel(0.7),
        power_at_zero_kernel(0.8),
    ]


def corpus_triplets():
    e1 = [1.0]
    sym2 = [[1.0], [-1.0]]
    return [
        ic.dirac([0.0]),
        ic.dirac([0.7]),
        ic.Triplet(1.0, None, [0.3]),
        ic.Triplet(0.0, ic.StableMeasure(0.6, sym2, [0.5, 0.5]), [0.0]),
        ic.Triplet(0.0, ic.StableMeasure(1.8, sym2, [0.5, 0.5]), [0.0]),
        ic.Triplet(0.0, ic.StableMeasure(0.8, [e1], [1.0]), [0.2]),
        ic.Triplet(0.0, ic.AtomicMeasure([[1.0], [-0.5]], [2.0, 1.0]), [0.2]),
        ic.Triplet(0.0, ic.AtomicMeasure([[0.8], [-0.8]], [1.0, 1.0]), [0.0]),
        ic.Triplet(0.0, ic.gamma_measure(1.0, 1.0, e1), [-0.1]),
        ic.Triplet(0.0, ic.SumMeasure([
            ic.StableMeasure(0.5, sym2, [0.2, 0.2]),
            ic.AtomicMeasure([[2.0]], [0.5]),
        ]), [0.1]),
    ]


def corpus_pairs():
    return [(k, t) for k in corpus_kernels() for t in corpus_triplets()]
