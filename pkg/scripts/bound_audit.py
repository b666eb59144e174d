"""Compare the exhaustive optimum with both relocation-gain bounds on small instances.

Prints one line per instance where the oracle gain exceeds the literal U,
followed by totals for U and for the distinct-source bound.
"""

from __future__ import annotations

import argparse
import random
import sys

from interdep import netmodel
from interdep.cycles import find_marginal_arcs
from interdep.genlab import GeneratorConfig, generate_random
from interdep.restructure import delta_h, exhaustive_optimum
from interdep.survivability import upper_bound


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--instances", type=int, default=60)
    p.add_argument("--seed", type=int, default=5)
    p.add_argument("--show", action="store_true", help="print each offending network")
    args = p.parse_args(argv)
    rng = random.Random(args.seed)
    done = over_u = over_src = heur_over = 0
    while done < args.instances:
        n1, n2 = rng.randint(3, 8), rng.randint(3, 8)
        cfg = GeneratorConfig(n1, n2, 1, rng.choice((2, 3)), seed=rng.randrange(2**31),
                              topology=rng.choice(("uniform", "growth")))
        net = generate_random(cfg)
        mas = find_marginal_arcs(net)
        if not 1 <= len(mas) <= 4:
            continue
        done += 1
        ub = upper_bound(net, mas)
        best = exhaustive_optimum(net).best_delta
        heur = delta_h(net, 1, 0, mode="exact")[1].delta
        heur_over += heur > best
        over_src += best > ub.source_bound
        if best > ub.U:
            over_u += 1
            print(f"instance {done}: optimum gain {best} > U={ub.U}  {ub.as_row()}")
            if args.show:
                print(netmodel.dumps(net))
    print(f"{done} instances: optimum > U on {over_u}, optimum > source bound on {over_src}, heuristic > optimum on {heur_over}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
