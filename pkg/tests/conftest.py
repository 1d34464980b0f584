import numpy as np
import pytest

from shepwm import SwitchingPattern


def random_valid_pattern(rng, k_choices=(1, 2, 4, 6)) -> SwitchingPattern:
    """Seeded random pattern: random K, compatible cell count, valid sign
    path (prefix level stays in [0, s]), ascending angles, random DC voltage."""
    k = int(k_choices[rng.integers(len(k_choices))])
    divisors = [s for s in range(1, k + 1) if k % s == 0]
    s = int(divisors[rng.integers(len(divisors))])
    signs = []
    level = 0
    for _ in range(k):
        options = [sg for sg in (1, -1) if 0 <= level + sg <= s]
        sg = options[rng.integers(len(options))]
        signs.append(sg)
        level += sg
    angles = np.sort(rng.random(k) * (np.pi / 2))
    vdc = float(50.0 + 450.0 * rng.random())
    return SwitchingPattern(tuple(angles), tuple(signs), s, vdc)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
