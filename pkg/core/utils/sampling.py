"""
Sampling module for the random inputs of property checks.

All draws come from a caller-supplied numpy generator (see SeedUtils.seed_rng), so a check
seeded with the same name and seed sees the same measures, fields and potentials.

Methods:
    - random_measure(rng) -> Measure1D: a probability measure mixing atoms and segments.
    - random_atomic(rng, size) -> Measure1D: a probability measure on distinct atoms.
    - random_field(rng, mu, radius) -> MeasureField: fibers with speeds bounded by radius.
    - random_potential(rng, size, step, p) -> GridPotential
    - random_submeasures(rng) -> (mu, alpha, beta): alpha, beta <= mu with equal masses.
    - random_interval_set(rng, count) -> IntervalSet
"""


import numpy as np

from ..models import GridPotential, IntervalSet, Measure1D, MeasureField



class Sampling:
    """Utility class drawing random lab inputs from a numpy generator."""

    @staticmethod
    def random_measure(rng: np.random.Generator, max_atoms: int=4, max_segments: int=3, scale: float=1.0):
        """Returns a random probability measure with atoms, segments, or both.

        Segments may overlap each other and the atoms; the result is canonical.
        """
        atoms = int(rng.integers(0, max_atoms + 1))
        segments = int(rng.integers(0, max_segments + 1))
        if atoms + segments == 0:
            atoms = 1

        ax = rng.uniform(-scale, scale, atoms)
        am = rng.uniform(0.1, 1.0, atoms)
        starts = rng.uniform(-scale, scale, segments)
        widths = rng.uniform(0.01, scale, segments)
        sm = rng.uniform(0.1, 1.0, segments)

        total = am.sum() + sm.sum()
        return Measure1D.canonical(ax, am / total, starts, starts + widths, sm / total)

    @staticmethod
    def random_atomic(rng: np.random.Generator, size: int, scale: float=1.0):
        """Returns a probability measure on `size` distinct random atoms."""
        xs = np.unique(rng.uniform(-scale, scale, size))
        masses = rng.uniform(0.1, 1.0, xs.size)
        return Measure1D(xs, masses / masses.sum(), [], [], [])

    @staticmethod
    def random_field(rng: np.random.Generator, mu: Measure1D, radius: float=1.0, max_fiber: int=4):
        """Returns a field over the atomic `mu` with velocities in [-radius, radius]."""
        fibers = []
        for _ in range(mu.atom_x.size):
            size = int(rng.integers(1, max_fiber + 1))
            velocities = rng.uniform(-radius, radius, size)
            probs = rng.uniform(0.1, 1.0, size)
            fibers.append(list(zip(velocities.tolist(), (probs / probs.sum()).tolist())))

        return MeasureField.from_fibers(mu.atom_x, mu.atom_mass, fibers)

    @staticmethod
    def random_potential(rng: np.random.Generator, size: int=201, step: float=0.01, p: float=1.0):
        """Returns a grid potential with independent uniform values of amplitude step * size."""
        values = rng.uniform(-1.0, 1.0, size) * step * size
        return GridPotential(start=-0.5 * step * (size - 1), step=step, values=values, p=p)

    @staticmethod
    def random_submeasures(rng: np.random.Generator):
        """Returns (mu, alpha, beta) with alpha, beta <= mu and alpha(R) = beta(R).

        alpha is mu scaled by c in [0.7, 1). beta scales every part of mu by its own factor
        in (0, 1], adjusted so its total matches alpha's.
        """
        mu = Sampling.random_measure(rng)
        c = float(rng.uniform(0.7, 1.0))
        alpha = mu.scaled(c)

        masses = np.concatenate((mu.atom_mass, mu.seg_mass))
        factors = rng.uniform(0.05, 1.0, masses.size)
        have, want, full = float(np.sum(factors * masses)), c * mu.total_mass, mu.total_mass
        if have >= want:
            factors *= want / have
        else:
            factors += (1.0 - factors) * (want - have) / (full - have)
        factors = np.minimum(factors, 1.0)

        k = mu.atom_x.size
        beta = Measure1D(mu.atom_x, mu.atom_mass * factors[:k], mu.seg_left, mu.seg_right, mu.seg_mass * factors[k:])
        return mu, alpha, beta

    @staticmethod
    def random_interval_set(rng: np.random.Generator, count: int=5, points: bool=False):
        """Returns `count` disjoint random intervals in [0, 1], or `count` points."""
        cuts = np.sort(rng.uniform(0.0, 1.0, 2 * count))
        if points:
            return IntervalSet.from_points(cuts[::2])
        return IntervalSet.from_intervals(list(zip(cuts[::2], cuts[1::2])))
