"""Cut the hubs off a power-law overlay, then let the survivors stretch back.

Prints the fitted exponent before the attack, after it, and after healing
with a few stretch factors.
"""
from p2pheal.attack import attack_top_degree
from p2pheal.experiment import percentile_cutoff
from p2pheal.graph import generate_powerlaw_config
from p2pheal.healing import HealSpec, heal_stretch
from p2pheal.powerlaw import fit_powerlaw

alpha = 2.4
g = generate_powerlaw_config(alpha, d_cap=300, n_peers=50000, seed=1)
print("before attack:", round(fit_powerlaw(g.histogram(), 1).exponent, 3), "max degree", g.max_degree())

k0 = percentile_cutoff(g, 99.5)
rep = attack_top_degree(g, k0)
d0 = g.max_degree()
print(f"removed {rep.removed_peers} peers above degree {k0}; pbar = {rep.pbar_empirical:.4f}")
print("after attack:", round(fit_powerlaw(g.histogram(), 1).exponent, 3), "max degree", d0)

for beta in (2, 8, 20):
    h = g.copy()
    hrep = heal_stretch(h, HealSpec(alpha, beta), seed=beta)
    fit = fit_powerlaw(h.histogram(), 1, beta * d0)
    print(f"beta={beta:<3} f={HealSpec(alpha, beta).f:.5f}  {hrep.compensating_peers:5d} peers stretched, "
          f"exponent {fit.exponent:.3f}, max degree {h.max_degree()}")
