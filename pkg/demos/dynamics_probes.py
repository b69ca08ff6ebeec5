#!/usr/bin/env python3
"""
dynamics_probes.py

Narrative check of the dynamical probes on the single-site drive that
alternates a z field with an x channel: stroboscopic accuracy of the
truncated generators, complete positivity along continuous time, the
stationary state, and feasibility of a quantum-jump unraveling.

The script:

  1. Builds the drive, expands the stroboscopic generator through order
     two, and compares exact and truncated evolution at period
     multiples; the worst trace distance must shrink as the order grows.
  2. Scans exp(generator * t) over a grid of times covering five
     periods and records the smallest Choi eigenvalue: the order-0
     truncation stays completely positive, while the order-2 truncation
     develops a clear negative Choi eigenvalue at this duration.
  3. Confirms the exact one-period propagator and its first twenty
     powers are completely positive, so the violation above is a
     property of the truncation alone.
  4. Locates the stationary state of the order-0 generator; it is the
     maximally mixed state, reached with a single zero mode.
  5. Diagonalizes the coefficient matrices into signed channels and
     tests jump-unraveling feasibility: the order-0 form is feasible,
     the order-2 form carries a non-negligible negative channel and is
     not.

The propagator-power scan runs in a thread pool.

Dependencies:
    - numpy
    - floquet_lindblad

Usage:
    python3 dynamics_probes.py [--tau T] [--h H] [--gamma1 G]
                               [--periods N]

Exit status:
    0 if all checks pass, 1 otherwise.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from floquet_lindblad import (
    ModelParams,
    Superoperator,
    bch_orders,
    build_model,
    canonical_decomposition,
    choi_min_eig,
    choi_min_eig_series,
    cp_grid_times,
    extract_dissipator,
    extract_hamiltonian,
    floquet_propagator,
    ness_report,
    random_density_matrix,
    stroboscopic_compare,
    trace_distance,
    trajectory_feasibility,
)


def main():
    parser = argparse.ArgumentParser(
        description=(
            "Probe stroboscopic accuracy, complete positivity, the "
            "stationary state, and unraveling feasibility of the "
            "field-plus-channel drive."
        )
    )
    parser.add_argument("--tau", type=float, default=0.3,
                        help="Segment duration. Default: 0.3.")
    parser.add_argument("--h", type=float, default=1.0,
                        help="Field strength. Default: 1.0.")
    parser.add_argument("--gamma1", type=float, default=0.9,
                        help="Channel rate. Default: 0.9.")
    parser.add_argument("--periods", type=int, default=20,
                        help="Stroboscopic periods to compare. Default: 20.")
    args = parser.parse_args()

    params = ModelParams(name="A", tau=args.tau, h=args.h,
                         gamma1=args.gamma1)
    drive = build_model(params)
    expansion = bch_orders(drive, 2)
    print(f"Drive A with tau={args.tau}, h={args.h}, gamma1={args.gamma1}, "
          f"period T={drive.period}")

    initial_state = random_density_matrix(drive.dim)
    strobo_maxima = []
    print("")
    print(f"Stroboscopic worst trace distance over {args.periods} periods:")
    for order in (0, 1, 2):
        comparison = stroboscopic_compare(
            drive, expansion.cumulative(order),
            num_periods=args.periods, initial_state=initial_state,
        )
        strobo_maxima.append(comparison.max_distance)
        print(f"  order {order}: max distance = "
              f"{comparison.max_distance:.3e}")
    strobo_improves = (
        strobo_maxima[0] > strobo_maxima[1] > strobo_maxima[2]
    )

    times = cp_grid_times(drive.period)
    cp_min_order0 = float(
        np.min(choi_min_eig_series(expansion.cumulative(0), times))
    )
    cp_min_order2 = float(
        np.min(choi_min_eig_series(expansion.cumulative(2), times))
    )
    print("")
    print(f"Smallest Choi eigenvalue of exp(generator * t) over "
          f"{len(times)} times up to 5T:")
    print(f"  order 0: {cp_min_order0:.3e}")
    print(f"  order 2: {cp_min_order2:.3e}")

    step = floquet_propagator(drive)
    workers = max(1, min(8, os.cpu_count() or 1))

    def power_min_eig(m):
        power = np.linalg.matrix_power(step.matrix, m)
        return choi_min_eig(Superoperator(power, drive.dim))

    with ThreadPoolExecutor(max_workers=workers) as ex:
        exact_min = min(ex.map(power_min_eig, range(1, 21)))
    print(f"  exact propagator powers 1..20: {exact_min:.3e}")

    stationary = ness_report(expansion.cumulative(0))
    mixed = np.eye(drive.dim) / drive.dim
    state_distance = (
        trace_distance(stationary.states[0], mixed)
        if stationary.states else float("inf")
    )
    print("")
    print("Stationary state of the order-0 generator:")
    print(f"  exists = {stationary.exists}, zero modes = "
          f"{stationary.zero_mode_count}")
    print(f"  distance from maximally mixed = {state_distance:.3e}")
    print(f"  trace-preservation residual   = "
          f"{stationary.trace_preservation_residual:.3e}")

    forms = {}
    for order in (0, 2):
        superop = expansion.cumulative(order)
        form = canonical_decomposition(
            extract_dissipator(superop), extract_hamiltonian(superop)
        )
        forms[order] = trajectory_feasibility(form)
    negative_norms = forms[2].negative_channel_norms
    print("")
    print("Jump-unraveling feasibility of the signed canonical forms:")
    print(f"  order 0: feasible = {forms[0].feasible}, "
          f"negative channels = {len(forms[0].negative_channel_norms)}")
    print(f"  order 2: feasible = {forms[2].feasible}, "
          f"negative channel norms = "
          f"{[f'{n:.3e}' for n in negative_norms]}")

    tol_cp = 1e-9
    tol_violation = 1e-6
    success = (
        strobo_improves
        and cp_min_order0 >= -tol_cp
        and cp_min_order2 < -tol_violation
        and exact_min >= -tol_cp
        and stationary.exists
        and stationary.zero_mode_count == 1
        and state_distance <= 1e-8
        and stationary.trace_preservation_residual <= 1e-10
        and forms[0].feasible
        and not forms[2].feasible
        and len(negative_norms) >= 1
    )

    print("")
    print("Summary:")
    print(f"  stroboscopic error shrinks with order? = {strobo_improves}")
    print(f"  order-0 flow completely positive?      = "
          f"{cp_min_order0 >= -tol_cp}")
    print(f"  order-2 flow violates positivity?      = "
          f"{cp_min_order2 < -tol_violation}")
    print(f"  exact flow completely positive?        = "
          f"{exact_min >= -tol_cp}")

    print("")
    if success:
        print("Dynamics probe check: PASS")
    else:
        print("Dynamics probe check: FAIL")
    return success


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
