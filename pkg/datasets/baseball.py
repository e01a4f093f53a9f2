"""Career totals of six baseball players and the reference matrices derived from them.

Rows of ``A`` are games, runs, hits, doubles, triples, home runs, runs batted in,
stolen bases and bases on balls; columns are players.
"""

import numpy as np

from ensemble.types import ClusteringResult, DataMatrix

PLAYERS = ["Rose", "Cobb", "Fisk", "Ott", "Ruth", "Mays"]
STATISTICS = ["G", "R", "H", "2B", "3B", "HR", "RBI", "SB", "BB"]

A = np.array(
    [
        [3562, 3034, 2499, 2730, 2503, 2992],
        [2165, 2246, 1276, 1859, 2174, 2062],
        [4256, 4189, 2356, 2876, 2873, 3283],
        [746, 724, 421, 488, 506, 523],
        [135, 295, 47, 72, 136, 140],
        [160, 117, 376, 511, 714, 660],
        [1314, 1938, 1330, 1860, 2213, 1903],
        [198, 897, 128, 89, 123, 338],
        [1566, 1249, 849, 1708, 2062, 1464],
    ],
    dtype=float,
)

# 50 NMF runs with k=2 plus 50 with k=3
S = np.array(
    [
        [100, 67, 73, 2, 0, 2],
        [67, 100, 50, 1, 2, 7],
        [73, 50, 100, 15, 9, 24],
        [2, 1, 15, 100, 92, 82],
        [0, 2, 9, 92, 100, 77],
        [2, 7, 24, 82, 77, 100],
    ],
    dtype=float,
)
ENSEMBLE_SIZE = 100

# Balanced S rounded to four places. Entry (Ruth, Cobb) is printed as 0.01082,
# inconsistent with its mirror (0.0082) and with the row sum; it is masked.
P_PRINTED = np.array(
    [
        [0.4131, 0.2935, 0.2786, 0.0075, 0.0, 0.0075],
        [0.2935, 0.4644, 0.2023, 0.0040, 0.0082, 0.0277],
        [0.2786, 0.2023, 0.3525, 0.0517, 0.0323, 0.0826],
        [0.0075, 0.0040, 0.0517, 0.3374, 0.3233, 0.2761],
        [0.0, 0.01082, 0.0323, 0.3233, 0.3660, 0.2701],
        [0.0075, 0.0277, 0.0826, 0.2761, 0.2701, 0.3361],
    ]
)
P_PRINTED_MASK = np.ones_like(P_PRINTED, dtype=bool)
P_PRINTED_MASK[4, 1] = False

EIGENVALUES = np.array([1.0000, 0.8670, 0.2078, 0.1095, 0.0598, 0.0254])

# x_t for t = 0..7 from a sample run, rounded to four places
X_TRACE = np.array(
    [
        [0.2334, 0.2595, 0.0364, 0.2617, 0.1812, 0.0279],
        [0.1848, 0.1997, 0.1520, 0.1592, 0.1618, 0.1425],
        [0.1795, 0.1836, 0.1707, 0.1554, 0.1557, 0.1550],
        [0.1779, 0.1787, 0.1732, 0.1565, 0.1561, 0.1576],
        [0.1765, 0.1765, 0.1729, 0.1578, 0.1574, 0.1589],
        [0.1752, 0.1751, 0.1722, 0.1590, 0.1586, 0.1600],
        [0.1741, 0.1739, 0.1715, 0.1600, 0.1597, 0.1609],
        [0.1731, 0.1729, 0.1709, 0.1609, 0.1606, 0.1616],
    ]
)

# Clusters reported for each row of X_TRACE
TRACE_CLUSTERS = [
    [{"Rose", "Cobb", "Ott", "Ruth"}, {"Fisk", "Mays"}],
    [{"Rose", "Cobb"}, {"Fisk", "Ott", "Ruth", "Mays"}],
] + [[{"Rose", "Cobb", "Fisk"}, {"Ott", "Ruth", "Mays"}]] * 6

FINAL_CLUSTERS = [{"Rose", "Cobb", "Fisk"}, {"Ott", "Ruth", "Mays"}]


def data_matrix() -> DataMatrix:
    return DataMatrix(values=A.copy(), attribute_names=list(STATISTICS), element_names=list(PLAYERS))


def named_clusters(C: ClusteringResult):
    """Clusters as sets of player names, in label order."""
    return [{PLAYERS[i] for i in members} for members in C.clusters()]
