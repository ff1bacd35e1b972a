#!/usr/bin/env python3
"""Regenerates the hand-built fixtures in tests/fixtures.

The counterexample fixture is frozen output of `catmin-cli counterexample`."""
import json
import math
import pathlib
import sys

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures")
out.mkdir(parents=True, exist_ok=True)


def save(name, obj):
    (out / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cone(count, apex):
    # Vertex 0 is the apex; rim vertices 1..count.
    tris, lengths = [], []
    rim = 2.0 * math.sin(apex / 2.0)
    for k in range(count):
        a, b = 1 + k, 1 + (k + 1) % count
        tris.append([0, a, b])
        lengths.append([0, a, 1.0])
        lengths.append([a, b, rim])
    return {"version": 1, "target": {"kind": "polyhedral"},
            "polyhedral_disc": {"num_vertices": count + 1, "triangles": tris, "lengths": lengths}}


save("cone_5pi2.json", cone(10, math.pi / 4))
save("cone_3pi2.json", cone(6, math.pi / 4))
save("cone_five.json", cone(5, math.pi / 3))


def grid_disc(n, f):
    verts, images, tris = [], [], []
    for j in range(n):
        for i in range(n):
            x, y = -1 + 2 * i / (n - 1), -1 + 2 * j / (n - 1)
            verts.append([x, y])
            images.append(f(x, y))
    for j in range(n - 1):
        for i in range(n - 1):
            a, b, c, d = j * n + i, j * n + i + 1, (j + 1) * n + i + 1, (j + 1) * n + i
            tris += [[a, b, c], [a, c, d]]
    loop = [i for i in range(n)] + [j * n + n - 1 for j in range(1, n)]
    loop += [(n - 1) * n + i for i in range(n - 2, -1, -1)] + [j * n for j in range(n - 2, 0, -1)]
    return {"vertices": verts, "triangles": tris, "boundary_loop": loop, "images": images}


flat = grid_disc(4, lambda x, y: [x, y, 0.0])
save("flat.json", {"version": 1, "target": {"kind": "euclidean", "dimension": 3}, "mapped_disc": flat})

saddle = grid_disc(5, lambda x, y: [x, y, 0.5 * (x * x - y * y)])
save("saddle_grid.json", {"version": 1, "target": {"kind": "euclidean", "dimension": 3},
                          "mapped_disc": saddle, "F": [0, 2, 4, 14, 24, 22, 20, 10, 12]})

# Square with a free centre joined to all corners, centre placed off balance.
square = {"points": [[0, 0], [1, 0], [1, 1], [0, 1], [0.8, 0.3]],
          "edges": [[0, 1], [1, 2], [2, 3], [3, 0], [0, 4], [1, 4], [2, 4], [3, 4]],
          "pinned": [True, True, True, True, False],
          "param": [[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]]}
save("square_star.json", {"version": 1, "target": {"kind": "euclidean", "dimension": 2}, "graph": square})

bad = json.loads(json.dumps(flat))
bad["triangles"][3] = [0, 1, 40]
save("bad_index.json", {"version": 1, "target": {"kind": "euclidean", "dimension": 3}, "mapped_disc": bad,
                        "tolerances": {"zero": -1.0}})
