import numpy as np

from harmap import soliton


def soliton_draws(seed: int, n: int = 20):
    """Random valid one-soliton data cycling through K_N = -1, 0, +1."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        kN = (-1, 0, 1)[len(out) % 3]
        try:
            p = soliton.SolitonParams(
                kN, rng.uniform(1.0, 3.0), rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0),
                rng.uniform(-1.0, 1.0), rng.uniform(-1.5, 1.5),
            )
        except soliton.SolitonParameterError:
            continue
        out.append(p)
    return out


def soliton_window(p, cap: float, n: int = 1201):
    """Nodes of [Y0 - 3, Y0 + 3] on the regular branch with |omega| <= cap."""
    Y = np.linspace(p.Y0 - 3.0, p.Y0 + 3.0, n)
    w = soliton.omega(Y, p)
    return Y[np.isfinite(w) & (np.abs(w) <= cap)]
