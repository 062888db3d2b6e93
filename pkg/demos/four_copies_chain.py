"""
Four copies, arbitrarily long diameters
=======================================

four_copies glues four labeled copies of a tree along a path through
two chosen leaves, quadrupling the vertex count and roughly
quadrupling the diameter.  Starting from the 4-vertex star and
iterating gives trees of diameter 3 * 4^c - 1 at every level c.
"""

from collections import deque

from setseq import Labeling, Tree, diameter, four_copies, verify_set_sequential


def farthest(tree, start):
    adj = tree.adjacency()
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return max(dist, key=lambda v: (dist[v], -v))


tree = Tree.of(4, [(0, 1), (0, 2), (0, 3)])
lab = Labeling.of(3, {0: "001", 1: "010", 2: "100", 3: "110"})
u, v = 1, 2

for level in range(3):
    print(
        f"level {level}: {tree.vertex_count} vertices, diameter {diameter(tree)}, "
        f"valid={verify_set_sequential(tree, lab).valid}"
    )
    tree, lab = four_copies(tree, lab, u, v)
    # The next gluing must run through the new longest path, so chase
    # its endpoints down with two breadth-first sweeps.
    u = farthest(tree, 0)
    v = farthest(tree, u)

print(
    f"level 3: {tree.vertex_count} vertices, diameter {diameter(tree)}, "
    f"valid={verify_set_sequential(tree, lab).valid}"
)
