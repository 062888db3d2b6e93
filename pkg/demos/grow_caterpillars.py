"""
Labeling caterpillars by induction
==================================

Two pipelines cover odd-degree caterpillars whose vertex count is a
power of two.  The small-diameter one (diameter up to 18) sheds leaves
down to a bundled base labeling and grows back up, doubling the vertex
count per level; an observer can watch each level go by.  The other
pipeline handles any diameter once the tree is large enough, at least
2^(diameter-1) vertices.
"""

from setseq import (
    CaterpillarSpec,
    diameter,
    label_large_caterpillar,
    label_small_diameter,
    verify_set_sequential,
)

spec = CaterpillarSpec.parse("T[23,21,23,21,21,23]")
print(f"{spec}: {spec.vertex_count} vertices, diameter {spec.diameter}")

steps = []
tree, lab = label_small_diameter(spec, observer=steps.append)
print("levels, innermost first:")
for step in steps:
    print(f"  {CaterpillarSpec(step.degrees)}  span dim {step.anchor_span_dim}")
print("valid:", verify_set_sequential(tree, lab).valid)
print()

# A squat one: diameter 5 but 256 vertices.  Way over 2^(5-1) = 16, so
# the large-caterpillar pipeline applies at any diameter.
squat = CaterpillarSpec((129, 43, 43, 43))
print(f"{squat}: {squat.vertex_count} vertices, diameter {squat.diameter}")
tree, lab = label_large_caterpillar(squat)
print("valid:", verify_set_sequential(tree, lab).valid)
print("diameter of the built tree:", diameter(tree))
