"""Two families of distinguished two-sided sequences and the checks that
tell them apart: concatenation limits lambda(a.b) pinned by eventually
fixed letter pairs, and the m0-style limits grown around a one-letter
chain of image positions."""

from adicshift import (ChainPrefix, core_membership, lambda_seeds,
                       lambda_window, m0_window, parse_substitution)

tm = parse_substitution("a -> ab\nb -> ba")

print("seeds for a -> ab, b -> ba")
for seed in lambda_seeds(tm):
    window = lambda_window(tm, seed, radius=12)
    check = core_membership(tm, window, 3)
    print(f"  {seed.left}.{seed.right}  period {seed.period}  "
          f"window {window}  consistent={check.consistent}")

# shifting the marker off the seam breaks membership immediately
window = lambda_window(tm, lambda_seeds(tm)[0], radius=12)
shifted = type(window)(window.letters, window.marker + 1)
print("shifted seam:", core_membership(tm, shifted, 3))

chacon = parse_substitution("0 -> 00s0\ns -> s\n1 -> 0110")

# the chain fixes, per level, which copy of the letter the origin sits in
chain = ChainPrefix(chacon, (("0", 0), ("0", 1), ("0", 1), ("0", 1)))
print("\nchain cut positions:", chain.cuts())
print("window around the origin:", m0_window(chacon, chain, radius=8))
