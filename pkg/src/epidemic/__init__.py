from src.epidemic.network import RingLatticeSpec, RingNetwork, build_network
from src.epidemic.schedule import StageParams, StageConfig, BridgeUpgrade, beta_balancing, stage_schedule
from src.epidemic.gillespie import OutbreakStats, EventLog, gillespie_sir
from src.epidemic.experiment import StagedOutbreakResult, simulate_stage, run_experiment, moving_average


__all__ = ['RingLatticeSpec', 'RingNetwork', 'build_network', 'StageParams', 'StageConfig', 'BridgeUpgrade',
           'beta_balancing', 'stage_schedule', 'OutbreakStats', 'EventLog', 'gillespie_sir',
           'StagedOutbreakResult', 'simulate_stage', 'run_experiment', 'moving_average']
