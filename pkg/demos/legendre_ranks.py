"""Rank histograms of cubic twists of y^2 = x(x-1)(x-t) over F_5 and F_7."""

from twistfield import SweepJob, run_sweep

for p, d in [(7, 1), (7, 2), (7, 3), (5, 2)]:
    hist, rows = run_sweep(SweepJob("legendre", 3, p, d))
    print(f"p={p} d={d}: ranks {hist.as_tuple(3)}")

# the highest-rank twist at p = 7, d = 3
hist, rows = run_sweep(SweepJob("legendre", 3, 7, 3))
best = max(rows, key=lambda r: r["rank"])
print("rank", best["rank"], "conductor", best["conductor"], "exponents", best["exponents"])
