"""Tour of the degrees-of-freedom region utilities.

Walks through membership testing, the brute-force oracle, and exact
linear programming over the region for a two-base-station network where
each station has one antenna and two users are heard by both.
"""

from fractions import Fraction

from sigma_align import DofPoint, SigmaConfig, region

cfg = SigmaConfig(n1=1, n2=1, la=0, lb=2, lc=0)
print(f"network: {cfg}")
print(f"messages: {cfg.num_messages}")

cons = region.enumerate_constraints(cfg)
print(f"\nthe region is cut out by {len(cons)} inequalities:")
for c in cons:
    print(f"  {c.label}: bound {c.bound}")

point = DofPoint.make(db1=["1/3", "1/3"], db2=["1/3", "1/3"])
res = region.check_point(cfg, point)
print(f"\nequal split 1/3 everywhere feasible? {res.feasible}")

too_much = DofPoint.make(db1=["1/2", "1/2"], db2=["1/2", "1/2"])
res = region.check_point(cfg, too_much)
print(f"equal split 1/2 feasible? {res.feasible}")
for c in res.violated:
    print(f"  violated: {c.label} ({c.value(too_much.as_vector())} > {c.bound})")

# the fast check and the exhaustive subset enumeration always agree
brute = region.check_point_bruteforce(cfg, too_much)
print(f"brute-force oracle agrees: {brute.feasible == res.feasible}")

value, argmax = region.max_sum_dof(cfg, [1] * cfg.num_messages)
print(f"\nmax sum DoF = {value} (expected 4/3), attained at {argmax}")
assert value == Fraction(4, 3)
