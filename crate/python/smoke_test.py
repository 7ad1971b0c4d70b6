#!/usr/bin/env python3
"""Smoke test for the `_mpelab` extension module.

Run from the repository root after building the extension:

    cargo build -p mpelab-py --release --features extension-module
    cp target/release/lib_mpelab.so python/_mpelab.so
    python3 python/smoke_test.py
"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import _mpelab as mpe


def check(name, condition):
    status = "ok" if condition else "FAIL"
    print(f"  {status}  {name}")
    return bool(condition)


def main():
    print(f"_mpelab smoke test (rng = {mpe.RNG_ALGORITHM})")
    results = []

    # Kernel construction and basic accessors.
    k = mpe.Kernel.two_state(0.5)
    results.append(check("two-state kernel has 2 states", len(k) == 2))
    results.append(check("row 1 is (0.5, 0.5)", k.row(1) == [0.5, 0.5]))
    results.append(check("one-step mixing coefficient is 1/2", k.dobrushin(1) == 0.5))

    # Below the sharp threshold the equation solves to the zero eigenvalue...
    sub = mpe.solve(k, [0.0, math.log(1.9)])
    results.append(check("subcritical reward solves", sub["status"] == "Solved"))
    results.append(check("eigenvalue is 0", abs(sub["lambda"]) < 1e-8))
    results.append(check("residual is tiny", sub["residual"] < 1e-8))

    # ... and just above it the iteration diverges.
    sup = mpe.solve(k, [0.0, math.log(2.1)], span_cap=3.0, max_iter=10_000)
    results.append(check("supercritical reward diverges", sup["status"] == "Diverged"))

    # The sharp span bound for coefficient 1/2.
    bound = mpe.sharp_bound(0.5)
    results.append(check("sharp bound is -ln sqrt(1/2)", abs(bound - 0.5 * math.log(2.0)) < 1e-15))
    results.append(
        check(
            "existence certified below the bound",
            mpe.guaranteed_existence(k, [0.0, 0.99 * bound]) == 1,
        )
    )

    # The additive equation still solves where the multiplicative one
    # diverges.
    ape = mpe.solve_additive(k, [0.0, math.log(4.0)])
    results.append(check("additive eigenvalue is g at the absorbing state", abs(ape["lambda0"]) < 1e-12))
    results.append(check("additive residual is tiny", ape["residual"] < 1e-10))

    # Divergence witness from the classifier.
    verdict = mpe.classify(k)
    results.append(check("two-state kernel is NotAllG", verdict["verdict"] == "NotAllG"))
    witness = mpe.solve(k, verdict["witness"], span_cap=100.0)
    results.append(check("classifier witness diverges", witness["status"] == "Diverged"))
    results.append(
        check("cyclic kernel is AllG", mpe.classify(mpe.Kernel.cyclic_three())["verdict"] == "AllG")
    )

    # Monte Carlo vs the exact entropic average on the cyclic kernel.
    c3 = mpe.Kernel.cyclic_three()
    g = [0.3, -0.2, 0.7]
    exact = mpe.average(c3, g, 0, 12)
    est = mpe.simulate(c3, g, 0, 12, 20_000, 7)
    results.append(
        check(
            "monte carlo within 4 sigma of the exact average",
            abs(est["value"] - exact) <= 4.0 * est["sigma"],
        )
    )
    results.append(check("bootstrap interval is ordered", est["ci_low"] <= est["ci_high"]))

    # Exact partial-sum law: on the two-state chain started at the second
    # state, the 2-term sum of (0, 1) counts holds of that state.
    law = mpe.partial_sum_law(k, [0.0, 1.0], 1, 2)
    results.append(
        check(
            "2-step law is {1: 1/2, 2: 1/2}",
            law["values"] == [1.0, 2.0] and law["probabilities"] == [0.5, 0.5],
        )
    )
    results.append(
        check(
            "higher reward dominates",
            mpe.dominance(c3, [1.0, 1.0, 1.0], [0.0, 0.0, 0.0], 0, 5) == "Dominates",
        )
    )

    # Escape rates and taboo tails.
    esc = mpe.escape_test(k, [0], [0.9, 0.25])
    results.append(check("escape passes at rate 0.9", esc["passed_at"][0] == 1))
    results.append(check("escape fails at rate 0.25", esc["passed_at"][1] is None))
    results.append(check("taboo tail is lam^n", abs(mpe.taboo_tail(k, [0], 1, 3) - 0.125) < 1e-15))

    # Seeded sampling is reproducible.
    a = mpe.sample_paths(c3, 0, 16, 5, 123)
    b = mpe.sample_paths(c3, 0, 16, 5, 123)
    results.append(check("sampling is reproducible", a == b))
    results.append(check("paths have horizon+1 states", all(len(p) == 17 for p in a)))

    # File round trip.
    out = Path(__file__).resolve().parent / "_smoke_kernel.json"
    try:
        k.save(str(out))
        again = mpe.Kernel.load(str(out))
        results.append(check("kernel file round trip", again.matrix() == k.matrix()))
    finally:
        out.unlink(missing_ok=True)

    failed = results.count(False)
    total = len(results)
    print(f"{total - failed}/{total} checks passed")
    if failed:
        sys.exit(1)
    print("smoke test passed")


if __name__ == "__main__":
    main()
