"""Scratch smoke checks; deleted before delivery."""
import numpy as np
from semident import *
from semident.algebra import Poly, RatFn, sigma_poly

iv = MixedGraph(3, [(1, 2), (2, 3)], [(2, 3)])
verma = MixedGraph(4, [(1, 2), (2, 3), (3, 4), (1, 3)], [(2, 4)])
gadget = MixedGraph(4, [(1, 3), (2, 4)], [(1, 2), (1, 4), (2, 3)])
cyc5 = MixedGraph(5, [(1, 2), (2, 3), (3, 2), (3, 4), (4, 5)],
                  [(1, 2), (3, 4), (1, 4), (4, 5), (1, 5)])
star5 = MixedGraph(5, [(1, 2), (1, 3), (1, 4), (4, 5)],
                   [(1, 2), (1, 3), (1, 4), (1, 5)])
forced6 = MixedGraph(6, [(2, 3), (4, 5), (6, 1)],
                     [(1, 2), (2, 3), (3, 4), (4, 5), (1, 6), (3, 6), (2, 5), (5, 6)])

# --- identify fixtures
c = htc_identify(verma)
print("verma cert:", c.ordering, {v: sorted(s) for v, s in sorted(c.sets.items())})
assert all(set(c.sets[v]) == set(verma.parents(v)) for v in verma.vertices())
assert not has_subset_cycles(c)

cg = htc_identify(gadget)
print("gadget cert:", cg.ordering, {v: sorted(s) for v, s in sorted(cg.sets.items())})

assert htc_identify(star5) is None
print("star5 not identifiable OK")

c6 = htc_identify(forced6)
print("forced6:", {v: sorted(s) for v, s in sorted(c6.sets.items())})
assert sorted(c6.sets[1]) == [5] and sorted(c6.sets[3]) == [1] and sorted(c6.sets[5]) == [3]
assert has_subset_cycles(c6)
forced6b = MixedGraph(6, [(2, 3), (4, 5), (6, 1)],
                      [(1, 2), (2, 3), (3, 4), (4, 5), (1, 6), (3, 6), (2, 5), (5, 6), (1, 4)])
assert htc_identify(forced6b) is None
print("forced6 + extra edge rejected OK")

c5 = htc_identify(cyc5)
print("cyc5 cert:", c5.ordering, {v: sorted(s) for v, s in sorted(c5.sets.items())})

# --- symbolic IV
lam = recover_lambda_symbolic(iv, htc_identify(iv))
assert lam[(1, 2)] == RatFn(sigma_poly(1, 2), sigma_poly(1, 1))
assert lam[(2, 3)] == RatFn(sigma_poly(1, 3), sigma_poly(1, 2))
print("IV closed forms OK")

# --- cyc5 lambda45 check
lam5 = recover_lambda_symbolic(cyc5, c5)
s = sigma_poly
expect45 = RatFn(s(1, 2) * s(3, 5) - s(1, 3) * s(2, 5),
                 s(1, 2) * s(3, 4) - s(1, 3) * s(2, 4))
print("lambda45:", lam5[(4, 5)].render())
assert lam5[(4, 5)] == expect45
assert lam5[(2, 3)] == RatFn(s(1, 3), s(1, 2))
print("cyc5 symbolic OK")

# --- generators
cs_v = model_ideal_generators(verma, c)
assert len(cs_v) == 1 and cs_v.pairs == [(1, 4)]
f_verma = Poly.from_terms([
    (1,  [(sigma_var(1, 1), 1), (sigma_var(1, 3), 1), (sigma_var(2, 2), 1), (sigma_var(3, 4), 1)]),
    (-1, [(sigma_var(1, 2), 2), (sigma_var(1, 3), 1), (sigma_var(3, 4), 1)]),
    (-1, [(sigma_var(1, 1), 1), (sigma_var(1, 4), 1), (sigma_var(2, 2), 1), (sigma_var(3, 3), 1)]),
    (1,  [(sigma_var(1, 2), 2), (sigma_var(1, 4), 1), (sigma_var(3, 3), 1)]),
    (-1, [(sigma_var(1, 1), 1), (sigma_var(1, 3), 1), (sigma_var(2, 3), 1), (sigma_var(2, 4), 1)]),
    (1,  [(sigma_var(1, 1), 1), (sigma_var(1, 4), 1), (sigma_var(2, 3), 2)]),
    (1,  [(sigma_var(1, 2), 1), (sigma_var(1, 3), 2), (sigma_var(2, 4), 1)]),
    (-1, [(sigma_var(1, 2), 1), (sigma_var(1, 3), 1), (sigma_var(1, 4), 1), (sigma_var(2, 3), 1)]),
])
print("verma generator:", cs_v.generators[0].render())
assert cs_v.generators[0] == canonicalize_constraint(f_verma), "verma mismatch"
print("verma generator OK")

cs_g = model_ideal_generators(gadget, cg)
assert len(cs_g) == 1 and cs_g.pairs == [(3, 4)], cs_g.pairs
gadget_poly = Poly.from_terms([
    (1,  [(sigma_var(1, 1), 1), (sigma_var(2, 2), 1), (sigma_var(3, 4), 1)]),
    (-1, [(sigma_var(1, 3), 1), (sigma_var(1, 4), 1), (sigma_var(2, 2), 1)]),
    (1,  [(sigma_var(1, 2), 1), (sigma_var(1, 3), 1), (sigma_var(2, 4), 1)]),
    (-1, [(sigma_var(1, 1), 1), (sigma_var(2, 3), 1), (sigma_var(2, 4), 1)]),
])
print("gadget generator:", cs_g.generators[0].render())
assert cs_g.generators[0] == canonicalize_constraint(gadget_poly), "gadget mismatch"
print("gadget generator OK")

# --- star5 quadratic roots
lam_m = np.zeros((5, 5))
lam_m[0, 1] = 0.25
lam_m[0, 2] = 0.5
lam_m[0, 3] = 0.4
lam_m[3, 4] = 0.3
om = np.eye(5)
for j in range(1, 5):
    om[0, j] = om[j, 0] = 0.1
sig = simulate_sigma(star5, ParamPair(lam_m, om))
S = lambda i, j: sig[i - 1, j - 1]

def quad_roots(i3, i4):
    a = S(1, 1) ** 2 * S(i3, i4) - S(1, 1) * S(1, i3) * S(1, i4)
    b = 2 * S(1, 2) * S(1, i3) * S(1, i4) - 2 * S(1, 1) * S(1, 2) * S(i3, i4)
    c = (S(1, 2) ** 2 * S(i3, i4) - S(1, 2) * S(1, i3) * S(2, i4)
         - S(1, 2) * S(1, i4) * S(2, i3) + S(1, 1) * S(2, i3) * S(2, i4))
    disc = b * b - 4 * a * c
    r1 = (-b - np.sqrt(disc)) / (2 * a)
    r2 = (-b + np.sqrt(disc)) / (2 * a)
    return sorted([r1, r2])

roots34 = quad_roots(3, 4)
print("roots (3,4):", roots34)
assert abs(roots34[0] - 0.25) < 1e-9 and abs(roots34[1] - 0.45) < 1e-9, roots34

# (4,5) analogue: eliminate lambda14 and lambda45 from the equations for
# the pairs (4,2), (5,2), (5,4); the result is quadratic in lambda12.
def elim45(l):
    u = S(1, 2) - l * S(1, 1)
    v = S(2, 4) - l * S(1, 4)
    w = S(2, 5) - l * S(1, 5)
    return (S(4, 5) * u * v - S(4, 4) * w * u - S(1, 5) * v * v
            + S(1, 4) * w * v)

qa = (elim45(1.0) + elim45(-1.0)) / 2 - elim45(0.0)
qb = (elim45(1.0) - elim45(-1.0)) / 2
qc = elim45(0.0)
disc = qb * qb - 4 * qa * qc
roots45 = sorted([(-qb - np.sqrt(disc)) / (2 * qa), (-qb + np.sqrt(disc)) / (2 * qa)])
print("roots (4,5):", roots45)
assert abs(roots45[0] - 0.25) < 1e-9 and abs(roots45[1] - 0.354) < 5e-4, roots45

# --- numeric roundtrip on a few graphs
for g, name in [(iv, "iv"), (verma, "verma"), (gadget, "gadget"), (cyc5, "cyc5")]:
    cert = htc_identify(g)
    params, sigma = sample_model_instance(g, 7)
    lam_hat = recover_lambda_numeric(g, cert, sigma)
    om_hat = recover_omega(sigma, lam_hat)
    err = max(np.abs(lam_hat - params.lam).max(), np.abs(om_hat - params.omega).max())
    print(f"roundtrip {name}: {err:.2e}")
    assert err < 1e-7

# --- trek rule
params, sigma = sample_model_instance(verma, 3)
tsig = trek_rule_sigma(verma, params)
print("trek rule delta:", np.abs(tsig - sigma).max())
assert np.abs(tsig - sigma).max() < 1e-10 * max(1, np.abs(sigma).max())

print("ALL SMOKE CHECKS PASSED")
