"""Hypothesis strategies for presented graphs."""

import random

from hypothesis import strategies as st

from graphpaths.fixtures import random_collapse, random_e_graph, random_row_finite

seeds = st.integers(min_value=0, max_value=2**32 - 1)

e_graphs = seeds.map(lambda s: random_e_graph(random.Random(s), max_vertices=5, max_families=2, max_edges=7))
row_finite_graphs = seeds.map(lambda s: random_row_finite(random.Random(s), max_vertices=4, max_edges=6))
collapses = seeds.map(lambda s: random_collapse(random.Random(s), max_vertices=3, max_families=2, max_edges=4))
