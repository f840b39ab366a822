"""Monte Carlo check of the teleportation fidelity law.

For random d x d resources, compares the Haar-averaged fidelity of standard
teleportation (with and without the isotropic twirl) against (Fd + 1)/(d + 1)
and reports the deviation in standard errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from entact.linalg import BipartiteSpace
from entact.states import random_density
from entact.teleport import entanglement_fidelity, mc_average_fidelity, tele_fidelity_from_F


@dataclass
class McConfig:
    dims: tuple[int, ...] = (2, 3)
    resources: int = 10
    samples: int = 100_000
    seed: int = 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--dims", type=int, nargs="+", default=list(McConfig.dims))
    p.add_argument("--resources", type=int, default=McConfig.resources)
    p.add_argument("--samples", type=int, default=McConfig.samples)
    p.add_argument("--seed", type=int, default=McConfig.seed)
    args = p.parse_args(argv)
    cfg = McConfig(tuple(args.dims), args.resources, args.samples, args.seed)
    print(f"{'d':>2} {'F':>8} {'law':>8} {'mc (raw)':>9} {'stderr':>9} {'z':>6}")
    for d in cfg.dims:
        for k in range(cfg.resources):
            rho = random_density(d * d, cfg.seed * 1000 + k, BipartiteSpace(d, d))
            F = entanglement_fidelity(rho)
            law = tele_fidelity_from_F(F, d)
            mean, se = mc_average_fidelity(rho, d, cfg.samples, cfg.seed + k, twirl=False)
            print(f"{d:2d} {F:8.5f} {law:8.5f} {mean:9.5f} {se:9.2e} {(mean - law) / se:6.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
