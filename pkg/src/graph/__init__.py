from src.graph.digraph import (
    WeightedDigraph,
    AbsorptionConfig,
    ScaledRateVector,
    AbsorptionScaledGraph,
    out_degrees,
    scaled_rate_vector,
    absorption_scaled_graph,
    scaled_laplacian,
    absorption_leak,
    is_strongly_connected,
)


__all__ = ['WeightedDigraph', 'AbsorptionConfig', 'ScaledRateVector', 'AbsorptionScaledGraph',
           'out_degrees', 'scaled_rate_vector', 'absorption_scaled_graph', 'scaled_laplacian',
           'absorption_leak', 'is_strongly_connected']
