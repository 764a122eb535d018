"""The induced output law q(b^n): DP evaluation vs brute-force enumeration.

Run:  python demos/03_induced_measure.py
"""

import math

import numpy as np

from wordsource import (
    IIDSource,
    InducedMeasure,
    WordFunction,
    block_log_probability_table,
    joint_entropy_exact,
)
from wordsource.oracles import brute_force_induced_log_table

coin = IIDSource([0.5, 0.5])
wf = WordFunction(2, 2, ((0,), (1, 0)))
induced = InducedMeasure(coin, wf)

print("== q(b^n) for the fair coin encoded with {0, 10} ==")
for block in ([0], [1], [1, 0], [1, 1], [0, 1, 0]):
    lp = induced.cylinder_log_probability(block)
    q = math.exp(lp) if lp > float("-inf") else 0.0
    print(f"q({''.join(map(str, block))}) = {q}")
print("('11' never opens an encoded stream: every 1 is followed by 0)")

print()
print("== dynamic program vs direct enumeration over source tuples ==")
for n in (2, 4, 6, 8):
    dp = block_log_probability_table(induced, n)
    oracle = brute_force_induced_log_table(coin, wf, n)
    mask = dp > float("-inf")
    worst = np.abs(dp[mask] - oracle[mask]).max()
    print(f"n={n}: {mask.sum():3d} blocks with mass, "
          f"max |log q_DP - log q_enum| = {worst:.2e}")

print()
print("== a non-prefix-free codebook collapses the output ==")
all_zero = WordFunction(2, 2, ((0,), (0, 0)))
ind0 = InducedMeasure(coin, all_zero)
print("q(00000) =", math.exp(ind0.cylinder_log_probability([0] * 5)))

print()
print("== conditional block entropies approach the output entropy rate ==")
prev = None
for n in range(1, 15):
    h = joint_entropy_exact(induced, n)
    if prev is not None:
        print(f"H_{n:<2} - H_{n-1:<2} = {h - prev:.6f}")
    prev = h
print("limit 2/3       =", 2 / 3)
