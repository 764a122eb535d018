"""Per-path sample entropies against the entropy-rate / codeword-length bound.

Prefix-free codes hit the bound exactly; the all-zeros code falls strictly
below it; a mixture splits into one cluster per ergodic component.

Run:  python demos/04_aep_and_conservation.py
"""

from collections import Counter

from wordsource import (
    IIDSource,
    MixtureSource,
    WordFunction,
    aep_experiment,
    conservation_report,
)

coin = IIDSource([0.5, 0.5])
mix = MixtureSource([0.5, 0.5], [IIDSource([0.5, 0.5]), IIDSource([0.9, 0.1])])
prefix_free = WordFunction(2, 2, ((0,), (1, 0)))
all_zero = WordFunction(2, 2, ((0,), (0, 0)))

print("== fair coin with the prefix-free code {0, 10} ==")
reports = aep_experiment(coin, prefix_free, horizon=10_000, paths=8, seed=42)
print(f"bound = H / E[l] = {reports[0].bound:.6f}")
for r in reports[:5]:
    print(f"path {r.path_index}: output horizon {r.output_horizon}, "
          f"sample entropy {r.empirical_h:.6f}, verdict {r.verdict}")

print()
print("== fair coin with the non-prefix-free code {0, 00} ==")
reports = aep_experiment(coin, all_zero, horizon=2_000, paths=4, seed=42)
for r in reports:
    print(f"path {r.path_index}: sample entropy {r.empirical_h}, "
          f"bound {r.bound:.4f}, verdict {r.verdict}")

print()
print("== mixture: one cluster per ergodic component ==")
reports = aep_experiment(mix, prefix_free, horizon=10_000, paths=30, seed=7, tol=0.03)
table = reports[0].per_component
for i, row in enumerate(table):
    print(f"component {i}: weight {row.weight}, H = {row.entropy_rate:.4f}, "
          f"E[l] = {row.expected_length:.2f}, bound = {row.bound:.4f}")
counts = Counter(r.component_index for r in reports)
print("paths per component:", dict(counts))
for r in reports[:6]:
    print(f"path {r.path_index}: component {r.component_index}, "
          f"sample entropy {r.empirical_h:.4f} "
          f"(bound {table[r.component_index].bound:.4f})")

print()
print("== conservation of entropy ==")
for name, model, wf in (
    ("coin + {0,10}", coin, prefix_free),
    ("coin + {0,00}", coin, all_zero),
    ("mixture + {0,10}", mix, prefix_free),
):
    rep = conservation_report(model, wf, block_cap=14)
    note = "equality in the limit" if rep.prefix_free else "strict upper bound"
    print(f"{name:18} H14-H13 = {rep.empirical_entropy_rate:.4f}  "
          f"integral bound {rep.integral_bound:.4f}  ({note})")
