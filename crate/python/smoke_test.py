#!/usr/bin/env python3
"""Smoke test for the schurq_py extension module.

Builds nothing itself: run `cargo build -p schurq-py --release` first. The
script locates the cdylib in target/, stages it under an importable name,
and exercises the main types and operations end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        REPO / "target" / "release" / "libschurq_py.so",
        REPO / "target" / "debug" / "libschurq_py.so",
        REPO / "target" / "release" / "libschurq_py.dylib",
        REPO / "target" / "debug" / "libschurq_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("no built extension found; run: cargo build -p schurq-py --release")
    stage = Path(tempfile.mkdtemp(prefix="schurq_py_"))
    shutil.copy2(built, stage / "schurq_py.so")
    sys.path.insert(0, str(stage))


stage_module()
import schurq_py as sq  # noqa: E402

checks = 0


def check(condition: bool, label: str) -> None:
    global checks
    checks += 1
    if not condition:
        sys.exit(f"FAILED: {label}")
    print(f"ok {checks:2d}: {label}")


# series arithmetic and exact coefficients
e31 = sq.series_e_product(3, 1, 40)
check(e31.coefficients()[:7] == [1, 1, 1, 1, 1, 2, 2], "distinct-parts series prefix")
check(
    all(e31.coefficient(n) == sq.count_schur(3, 1, 0, n) for n in range(41)),
    "series coefficients equal the gap-partition counts",
)
inv = e31.inverse()
check(e31.mul(inv).coefficients() == [1] + [0] * 40, "series times inverse is 1")

# Pochhammer products and the classical coincidences
poch = sq.pochhammer(-1, 1, 3, None, 6)
check(poch.coefficients() == [1, 1, 0, 0, 1, 1, 0], "infinite Pochhammer expansion")
check(
    all(
        sq.count_gap_partitions(2, 1, n) == sq.count_congruence_classes(5, [1, 4], n)
        for n in range(60)
    ),
    "gap-2 counts match residue classes 1,4 mod 5",
)

# theta: bilateral sum vs triple product, and the modular quotient
ts = sq.theta_sum_series(5, 2, 100)
tp = sq.theta_product_series(5, 2, 100)
check(ts == tp and ts.offset24 == -9, "theta sum equals triple product")
report = sq.verify_identity("theta-quotient", 3, 1, 150)
check(report["passed"], "theta/eta quotient reproduces the distinct-parts series")
report = sq.verify_identity("univ-factorization", 5, 2, 150)
check(report["passed"], "mock theta factorization of the bilateral series")
report = sq.verify_identity("andrews-c31", trunc=200)
check(report["passed"], "explicit (3,1) evaluation matches the bilateral route")

# big coefficients stay exact through the bindings
b = sq.exact_coefficients("B", 3, 1, 4000)
check(b[4000] > 10**37, "coefficient at n = 4000 is a large exact integer")
est = sq.estimate_log("B", 3, 1, 4000, 2)
check(abs(math.log(b[4000]) - est) < 1e-4, "two-term estimate is tight in log space")

# asymptotic constants
c = sq.asymptotic_constants(3, 1)
check(abs(c["alpha1"] - math.pi / math.sqrt(18)) < 1e-14, "leading constant")
check(abs(c["beta2"] - 7 * math.pi**2 / 648) < 1e-14, "second-order constant")

# crossover orientation: smaller r dominates within fixed d
check(sq.crossover("B", 5, 2, 5, 1, 600) == 329, "crossover index golden value")

# probability layer
pu = sq.exact_prob_u(3, 1, 0.5)
check(abs(pu - 0.8732639418837083) < 1e-12, "exact gap-event probability")
check(sq.g3_value(3, 1, 0.3) < 1 and abs(sq.g3_value(3, 1, 0.3) - 0.7062253986958344) < 1e-12,
      "mock theta value below 1")
report = sq.theorem_prob_check(3, 1, 0.3)
check(report["passed"], "conditional-probability identities hold at q = 0.3")
sim = sq.simulate(3, 1, 0.5, trials=50_000, seed=42)
check(all(abs(e["z"]) < 4 for e in sim["entries"]), "Monte Carlo within 4 sigma of targets")
sim2 = sq.simulate(3, 1, 0.5, trials=50_000, seed=42)
check(sim == sim2, "simulation is deterministic under a fixed seed")

# high-precision evaluation
ones = sq.series_g3(1, 3, 50)
decimal, tail = ones.eval_decimal(1, 2, 50)
value, _ = ones.eval(0.5)
check(abs(float(decimal) - value) < 1e-12, "50-digit evaluation agrees with f64")

# JSON round trip
back = sq.QSeries.from_json(e31.to_json())
check(back == e31, "series JSON round trip")

# validation errors surface as exceptions
try:
    sq.count_schur(4, 2, 0, 10)
    sys.exit("FAILED: invalid parameters were accepted")
except ValueError:
    check(True, "invalid parameters raise ValueError")

print(f"\nall {checks} smoke checks passed")
