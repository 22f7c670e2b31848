"""A tour of the pipeline on the three-letter system 0 -> 00s0, s -> s,
1 -> 0110: classification, return words, the derived rule, both diagram
constructions, and a parsed window of the fixed point.

Run:  python demos/chacon_tour.py
"""

from adicshift import (box_matrix_text, build_j_symbol, classify_letters,
                       derivative_substitution, diagram_via_derivative,
                       expand, minimal_path, nesting_diagram,
                       parse_substitution, recognize_window, return_words,
                       short_block_bound, vershik_orbit_coding)

s = parse_substitution("0 -> 00s0\ns -> s\n1 -> 0110")

print("alphabet:", " ".join(s.alphabet))
kinds = classify_letters(s)
print("long:", kinds.long, " short:", kinds.short)
print("every all-short block is shorter than", short_block_bound(s))

# %% return words and the derived substitution

rs = return_words(s, scale=8)
print("\njunction pair:", rs.pairs[0])
for idx in rs.indices:
    print(f"  return word {idx} = {rs.word_text(idx)}")
tau = derivative_substitution(rs, s)
for idx in tau.alphabet:
    print(f"  tau({idx}) = {''.join(tau.image(idx))}")

# %% two routes to a stationary ordered diagram

nest = nesting_diagram(s)
print("\nnesting diagram:", len(nest.alphabet), "vertices per level")
deriv = diagram_via_derivative(s)
print("derivative diagram:", len(deriv.alphabet), "vertices per level,",
      "top multiplicities", deriv.top_counts)

# %% the adic action, coded at level 1, recovers the fixed point

coding = vershik_orbit_coding(deriv, minimal_path(deriv, 8, "1"), 30, level=1)
print("\nfirst 30 orbit codes:", " ".join(coding))
# one letter per orbit step: a tower of height h is crossed in h steps,
# spelling out its return word
heights = dict(zip(deriv.alphabet, deriv.top_counts))
letters, k = [], 0
while k < len(coding):
    v, run = coding[k], 1
    while (k + run < len(coding) and coding[k + run] == v
           and run < heights[v]):
        run += 1
    letters.extend(rs.phi(v)[:run])
    k += run
print("read through phi    :", "".join(letters))
print("fixed point         :", "".join(expand(s, ("0",), 3)))

# %% desubstitution: a central window parses uniquely three levels deep

text = expand(s, ("0",), 6)
window = text[500:565]
chain = recognize_window(s, window, 3)
print("\nwindow:", "".join(window))
for depth, level in enumerate(chain.levels, start=1):
    cuts = [b for b in level.bounds if b is not None]
    print(f"  level {depth} cuts at {cuts}")

# %% the box matrix of one tower

print("\ntower of letter 1, two levels:")
print(box_matrix_text(build_j_symbol(s, "1", 2)))
