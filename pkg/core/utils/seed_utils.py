"""
Utility functions for reproducible randomness and configuration fingerprints.

Methods:
    - seed_rng(name: str, seed: int) -> np.random.Generator: A generator derived from
      the hash of a stream name and a base seed, so independent checks draw independent
      but reproducible streams.
    - config_hash(config: dict) -> str: The sha256 hex digest of a canonical JSON rendering.
"""


import hashlib
import json

import numpy as np



class SeedUtils:
    """Utility class for seeded generators and stable hashes."""

    @staticmethod
    def seed_rng(name: str, seed: int=0):
        """Returns a numpy generator seeded from `name` and `seed`.

        Hashes the pair so that two streams with different names never share draws, while
        the same pair always reproduces the same sequence.

        Args:
            name (str): The stream name, e.g. the acceptance criterion.
            seed (int): The base seed from the experiment configuration.

        Returns:
            np.random.Generator: The seeded generator.
        """
        hash_value = int(hashlib.sha256(f"{name}:{int(seed)}".encode("utf-8")).hexdigest(), 16)
        return np.random.default_rng(hash_value % (2 ** 128))

    @staticmethod
    def config_hash(config: dict):
        """Returns the sha256 hex digest of `config` rendered as canonical JSON."""
        text = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
