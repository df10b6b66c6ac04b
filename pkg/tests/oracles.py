"""Independent reference implementations used only to check the package.

Deliberately naive: plain set-based boundary-matrix reduction with no
clearing and no per-degree shortcuts, and a direct quadratic matching
check.  Kept separate from the package so each route is computed twice by
different code.
"""

import math


def naive_diagrams(filtration):
    """All-degree diagrams by left-to-right reduction of the full boundary matrix."""
    simplices = list(filtration.simplices)
    values = list(filtration.values)
    index_of = {s: i for i, s in enumerate(simplices)}
    columns = []
    for s in simplices:
        if len(s) == 1:
            columns.append(set())
            continue
        faces = {index_of[s[:j] + s[j + 1:]] for j in range(len(s))}
        columns.append(faces)

    low_to_col = {}
    pairs = []
    for j, col in enumerate(columns):
        while col:
            low = max(col)
            if low not in low_to_col:
                low_to_col[low] = j
                pairs.append((low, j))
                break
            col ^= columns[low_to_col[low]]

    paired = {i for pair in pairs for i in pair}
    diagrams = {0: [], 1: [], 2: []}
    for i, j in pairs:
        k = len(simplices[i]) - 1
        if values[i] < values[j]:
            diagrams[k].append((values[i], values[j]))
    for i, s in enumerate(simplices):
        if i not in paired and not columns[i]:
            diagrams[len(s) - 1].append((values[i], math.inf))
    # unpaired simplices with nonzero reduced column cannot occur after full reduction
    return {k: sorted(v) for k, v in diagrams.items()}


def diagram_multiset(diagram):
    """Sorted (birth, death) list with multiplicity expanded."""
    return sorted(diagram.expanded())
