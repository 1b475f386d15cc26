from src.experiments.artifacts import ArtifactWriter, write_sidecar, read_sidecar
from src.experiments.runners import (
    RUNNERS,
    ExperimentDescriptor,
    ExperimentOutcome,
    coerce_param,
    execute,
)


__all__ = ['ArtifactWriter', 'write_sidecar', 'read_sidecar', 'RUNNERS', 'ExperimentDescriptor',
           'ExperimentOutcome', 'coerce_param', 'execute']
