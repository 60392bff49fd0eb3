"""When does a targeted attack dissolve the giant component?

Removing peers with probability m * k**-q turns a k**-theta law into one
decaying like k**-(theta + q).  Compare the exponent-shift rule, the
Molloy-Reed sum, the fixed-point prediction, and sampled graphs.
"""
from p2pheal.genfunc import (OccupationModel, combined_criterion, g0_from, powerlaw_pk, predicted_giant_fraction,
                             sample_occupied_graph)
from p2pheal.restore import giant_fraction

theta = 2.4
print("theta+q  shift-rule  MR-sum     predicted  sampled")
for q in (0.3, 0.5, 0.9, 1.1, 1.3, 1.6):
    crit = combined_criterion(theta, q)
    g0 = g0_from(powerlaw_pk(theta, 300), OccupationModel.power(1.0, q, 300))
    sampled = giant_fraction(sample_occupied_graph(g0, 50000, seed=0))
    print(f"{theta + q:<8.1f} {str(crit.giant_exists):<11} {crit.molloy_reed_sum:<10.4f} "
          f"{predicted_giant_fraction(g0):<10.4f} {sampled:.4f}")
