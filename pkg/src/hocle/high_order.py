"""High-order co-association families built from an ensemble.

Four constructions are provided:

``order1``
    the member co-association matrices themselves;
``order2_cluster``
    symmetrised products ``(S_i S_j + S_j S_i) / 2`` for every pair ``i < j``,
    counting shared samples between the clusters of two members;
``order2_pair``
    entrywise products ``S_i * S_j`` for every pair, keeping only sample
    pairs on which both members agree;
``order_m``
    the entrywise product of all members.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

ORDER1 = "order1"
ORDER2_CLUSTER = "order2_cluster"
ORDER2_PAIR = "order2_pair"
ORDER_M = "order_m"

#: CLI short names -> family tags, in pipeline order
ORDER_CODES = {"1": ORDER1, "2c": ORDER2_CLUSTER, "2p": ORDER2_PAIR, "m": ORDER_M}


@dataclass
class HighOrderFamily:
    order: str
    matrices: list = field(default_factory=list)
    #: set when the construction needed more members than were given
    too_few_members: bool = False

    @property
    def k(self):
        return len(self.matrices)


def order1(S_list):
    return HighOrderFamily(ORDER1, list(S_list))


def order2_cluster(S_list):
    S_list = list(S_list)
    if len(S_list) < 2:
        return HighOrderFamily(ORDER2_CLUSTER, [], too_few_members=True)
    mats = []
    for i, j in combinations(range(len(S_list)), 2):
        P = S_list[i] @ S_list[j]
        mats.append(0.5 * (P + P.T))
    return HighOrderFamily(ORDER2_CLUSTER, mats)


def order2_pair(S_list):
    S_list = list(S_list)
    if len(S_list) < 2:
        return HighOrderFamily(ORDER2_PAIR, [], too_few_members=True)
    mats = [S_list[i] * S_list[j]
            for i, j in combinations(range(len(S_list)), 2)]
    return HighOrderFamily(ORDER2_PAIR, mats)


def order_m(S_list):
    S_list = list(S_list)
    A = np.array(S_list[0], dtype=np.float64, copy=True)
    for S in S_list[1:]:
        A *= S
    return HighOrderFamily(ORDER_M, [A])


BUILDERS = {
    ORDER1: order1,
    ORDER2_CLUSTER: order2_cluster,
    ORDER2_PAIR: order2_pair,
    ORDER_M: order_m,
}


def build_family(order, S_list):
    """Dispatch on a family tag or CLI short code (``"1"``, ``"2c"``, ...)."""
    order = ORDER_CODES.get(order, order)
    return BUILDERS[order](S_list)
