from src.mapfunction.partition import (
    Partition,
    canonicalize,
    all_partitions,
    write_partition,
    read_partition,
)
from src.mapfunction.codelength import (
    CodelengthBreakdown,
    plogp,
    entropy,
    flow_matrix,
    community_flows,
    map_function,
    standard_map,
    adjacency_map,
    absorbing_map,
    pi0_for_equivalence,
)


__all__ = ['Partition', 'canonicalize', 'all_partitions', 'write_partition', 'read_partition',
           'CodelengthBreakdown', 'plogp', 'entropy', 'flow_matrix', 'community_flows', 'map_function',
           'standard_map', 'adjacency_map', 'absorbing_map', 'pi0_for_equivalence']
