# Walk the successor map on two stationary diagrams and look at the
# window codings that decide how far apart two tower columns can be told.

from adicshift import (StationaryOrderedDiagram, box_matrix_text,
                       diagram_via_derivative, enumerate_paths,
                       expansiveness_witness_search, minimal_path,
                       parse_substitution, path_window, vershik_successor)

odometer = StationaryOrderedDiagram(("v",), (("v", "v"),), (2,))

# all paths into level 3, in successor order
paths = enumerate_paths(odometer, 3, "v")
print("binary odometer, level 3:", len(paths), "paths")
p = minimal_path(odometer, 3, "v")
orbit = [p.indices]
while len(orbit) < len(paths):
    p = vershik_successor(odometer, p)
    orbit.append(p.indices)
print("successor order:", orbit)

# the window a path sees: columns of the level-3 tower around its rank
print()
print(box_matrix_text(path_window(odometer, paths[3], 3, radius=3)))

# distinct columns of the odometer tower separate at every depth
for i in (1, 2, 4, 8):
    w = expansiveness_witness_search(odometer, i, radius=32, budget=50_000)
    print(f"depth {i}: found pair at ranks within radius 32, via {w.via}")

# the diagram of the derived rule refuses: within this budget every
# candidate pair fails the depth-2 comparison
deriv = diagram_via_derivative(
    parse_substitution("0 -> 00s0\ns -> s\n1 -> 0110"))
verdict = expansiveness_witness_search(deriv, 2, radius=64, budget=100_000)
print("derived diagram at depth 2:", verdict)
