"""Functions for grouping consecutive labels into intervals"""

__all__ = [
    "group_runs",
]


def group_runs(labels):
    """Cluster consecutive equal labels into maximal runs

    Args:
        labels (list): sequence of hashable labels

    Returns:
        list: [(label, first_index, last_index), ], covering every position once
    """
    if len(labels) == 0:
        return []
    clustered = [[labels[0], 0, 0], ]
    for i, label in enumerate(labels[1:], start=1):
        if label != clustered[-1][0]:
            clustered.append([label, i, i])
        else:
            clustered[-1][2] = i
    return [tuple(x) for x in clustered]
