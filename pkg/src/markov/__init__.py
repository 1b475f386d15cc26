from src.markov.transitions import (
    TransitionMatrix,
    feasibility_bound,
    transition_linear,
    transition_exponential,
    p_delta,
    raw_transition,
    build_transition,
)
from src.markov.stationary import StationaryDistribution, is_regular, stationary, regular_fundamental
from src.markov.absorbing import (
    AbsorbingChain,
    FundamentalMatrix,
    absorbing_chain,
    fundamental,
    pi_delta_abs,
    chain_from_p_delta,
    self_transition_times,
)
from src.graph.digraph import absorption_leak


__all__ = ['TransitionMatrix', 'feasibility_bound', 'transition_linear', 'transition_exponential', 'p_delta',
           'raw_transition', 'build_transition', 'StationaryDistribution', 'is_regular', 'stationary',
           'regular_fundamental', 'AbsorbingChain', 'FundamentalMatrix', 'absorbing_chain', 'fundamental',
           'pi_delta_abs', 'chain_from_p_delta', 'self_transition_times', 'absorption_leak']
