"""Follow the filtering decisions for a single point by hand."""
import numpy as np

from gkmeans import AssignState, OpCounters, classify_point, compute_neighbor_tables, dist

# Two clusters on a line; the point at 5.8 is still labelled 0 but has drifted
X = np.array([[0.0], [1.0], [5.8], [9.0], [10.0]])
centers = np.array([[1.5], [9.5]])
assign = np.array([0, 0, 0, 1, 1])
own = np.array([dist(x, centers[c]) for x, c in zip(X, assign)])
state = AssignState.build(X, assign, k=2, own_dist=own)

radii = np.array([own[assign == c].max() for c in range(2)])
tables = compute_neighbor_tables(centers, radii, OpCounters())
print("half gap to nearest other center:", tables.s)
print("neighbors of 0:", tables.neighbors(0), "neighbors of 1:", tables.neighbors(1))

# %% A point close to its centroid is settled without looking anywhere else
counters = OpCounters()
print(classify_point(X, 1, tables, state, counters))

# %% The point at 5.8 crossed the bisector, so it pays one distance and switches
print(classify_point(X, 2, tables, state, counters))
print("work spent:", counters.as_dict())
