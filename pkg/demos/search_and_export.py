"""
Searching for labelings of arbitrary trees
==========================================

Trees outside the constructive pipelines go to randomized search; the
exhaustive strategy settles small cases for good, including negative
answers.  Labeled trees round-trip through JSON and render as DOT.
"""

from setseq import (
    SearchConfig,
    Tree,
    search_labeling,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
    verify_set_sequential,
)
from setseq.errors import Infeasible
from setseq.search import BACKTRACKING

# A spider: three legs of length 2 plus a pendant at the hub.
spider = Tree.of(
    8, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6), (0, 7)]
)
lab = search_labeling(spider, SearchConfig(seed=0, budget_seconds=10.0))
print("spider labeled, valid:", verify_set_sequential(spider, lab).valid)

text = tree_to_json(spider, lab)
back_tree, back_lab = tree_from_json(text)
print("JSON round-trip intact:", back_tree == spider and back_lab == lab)

print(tree_to_dot(spider, lab))

# The 4-vertex path admits no labeling at all; backtracking proves it.
path4 = Tree.of(4, [(0, 1), (1, 2), (2, 3)])
try:
    search_labeling(path4, SearchConfig(strategy=BACKTRACKING))
except Infeasible:
    print("4-vertex path: Infeasible, as expected")
