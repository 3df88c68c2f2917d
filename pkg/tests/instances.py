"""Valid random instances shared by the tests (general position, cleared, connected)."""

from functools import lru_cache

from pldg.experiment import ExperimentConfig, generate


@lru_cache(maxsize=None)
def instance(seed: int, n: int = 50, region: float = 3.0, generator: str = "uniform"):
    return generate(ExperimentConfig(seed=seed, n=n, region=region, generator=generator))


def instances(seed: int, count: int, n: int = 50, region: float = 3.0):
    return [instance(seed, n, region) if t == 0 else
            generate(ExperimentConfig(seed=seed, n=n, region=region), t) for t in range(count)]
