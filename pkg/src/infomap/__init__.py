from src.infomap.optimizer import OptimizerConfig, OptimizationResult, GreedyMapOptimizer, minimize_map
from src.infomap.algorithms import (
    Plateau,
    SweepResult,
    algorithm1,
    algorithm2,
    markov_time_sweep,
    subcommunities,
)


__all__ = ['OptimizerConfig', 'OptimizationResult', 'GreedyMapOptimizer', 'minimize_map', 'Plateau',
           'SweepResult', 'algorithm1', 'algorithm2', 'markov_time_sweep', 'subcommunities']
