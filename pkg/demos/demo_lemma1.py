"""Full-rank property of random monomial matrices.

Square matrices whose (i, j) entry is a monomial in row-local random
variables are almost surely full rank whenever no row repeats an exponent
tuple. This demo samples valid and deliberately broken generators and
tallies the outcomes.
"""

import numpy as np

from sigma_align import verify

rng = np.random.default_rng(0)

print("valid random exponents (distinct tuples per row):")
for m, k in [(3, 1), (6, 2), (10, 3)]:
    full = sum(verify.lemma1_test(m, k, verify.random_valid_exponents,
                                  seed=int(rng.integers(1 << 31)))
               for _ in range(100))
    print(f"  m={m}, k={k}: {full}/100 full rank")

print("\nVandermonde-style exponents (column j -> power j+1):")
full = sum(verify.lemma1_test(5, 1, verify.vandermonde_exponents,
                              seed=int(rng.integers(1 << 31)))
           for _ in range(100))
print(f"  m=5: {full}/100 full rank")

print("\nnegative control (two identical exponent columns per row):")
full = sum(verify.lemma1_test(4, 2, verify.duplicate_column_exponents,
                              seed=int(rng.integers(1 << 31)),
                              claim_valid=False)
           for _ in range(100))
print(f"  m=4: {full}/100 full rank (expected 0)")

print("\nexact rational arithmetic gives the same verdicts:")
ok = verify.lemma1_test(6, 2, verify.random_valid_exponents, seed=1,
                        mode="rational")
print(f"  m=6, k=2 exact: full rank = {ok}")
