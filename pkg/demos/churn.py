"""Largest-component fraction under preferential churn, one run per rate."""
from p2pheal.churn import ChurnSpec, run_churn

for r in (0.02, 0.05, 0.11, 0.3):
    res = run_churn(ChurnSpec(n=2, r=r, steps=20000, seed=7, sample_every=5000))
    trace = " ".join(f"{g:.4f}" for _, g in res.series)
    print(f"r={r:<5} g={res.g:.4f}  deletions={res.deletions:5d}  trace: {trace}")
