"""Measurement, then environment: how a pointer becomes classical.

A von Neumann pre-measurement correlates a qubit with a pointer without
choosing an outcome. Each environment unit that learns the pointer position
multiplies the pointer coherences by cos(theta), so a handful of units
leaves the system-apparatus pair practically diagonal in the pointer basis,
a classical mixture of "outcome 0, pointer 0" and "outcome 1, pointer 1".
"""

import argparse
import math

import numpy as np

from decolab import qstate, quantify
from decolab.envmodels import measurement as ms


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=math.pi / 4)
    ap.add_argument("--n-max", type=int, default=20)
    args = ap.parse_args()

    chain = ms.MeasurementChain(2, 2, (0, 1))
    joint = ms.pre_measurement(chain, qstate.normalize([1, 1]))
    print(f"after pre-measurement: Schmidt coefficients {ms.schmidt_coefficients(joint, (2, 2)).round(4)}")
    red = ms.von_neumann_reduce(joint, chain)
    print(f"von Neumann reduction keeps weight {1 - red.leakage:.3f} on correlated pairs")

    rho = qstate.pure_state(joint)
    print(f"\n n   |<00|rho|11>|   cos(theta)^n / 2   joint gap")
    for n in range(0, args.n_max + 1, 4):
        out = ms.dephase(rho, ms.DephasingEnvironment(n, args.theta), np.eye(2))
        gap = quantify.decoherence_gap(out, np.eye(4)).gap
        print(f"{n:3d}   {abs(out[0, 3]):.3e}        {0.5 * math.cos(args.theta) ** n:.3e}          {gap:.3e}")
    system = qstate.partial_trace(out, [2, 2], keep=[0])
    print(f"\nsystem marginal stays {np.real(np.diagonal(system)).round(3)}: outcomes keep their weights")


if __name__ == "__main__":
    main()
