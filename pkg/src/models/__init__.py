"""
Package initialization for models.
"""

from .state_models import (
    ComplexVector,
    ComplexMatrix,
    complex_to_pairs,
    StateVector,
    HermitianOperator,
    UnitaryOperator,
    Projector,
    BlochParameters
)

from .spectral_models import (
    MinimalPolynomialInfo,
    AlphaCoefficients
)

from .frame_models import (
    Frame,
    SpanningVerdict,
    HermitianBasisCoordinates,
    InjectivityStatus,
    InjectivityVerdict
)

from .measurement_models import MeasurementRecord

from .reconstruction_models import (
    LambdaMatrix,
    IntensityVector,
    ReconstructionMethod,
    ReconstructionDiagnostics,
    ReconstructionReport
)

from .experiment_models import (
    ProjectorSpec,
    AutoTimes,
    AutoTimesSpec,
    BlochSpec,
    TruthSpec,
    ValidationGrid,
    ExperimentConfig,
    Versions,
    RunReport
)

__all__ = [
    # State models
    'ComplexVector',
    'ComplexMatrix',
    'complex_to_pairs',
    'StateVector',
    'HermitianOperator',
    'UnitaryOperator',
    'Projector',
    'BlochParameters',
    # Spectral models
    'MinimalPolynomialInfo',
    'AlphaCoefficients',
    # Frame models
    'Frame',
    'SpanningVerdict',
    'HermitianBasisCoordinates',
    'InjectivityStatus',
    'InjectivityVerdict',
    # Measurement models
    'MeasurementRecord',
    # Reconstruction models
    'LambdaMatrix',
    'IntensityVector',
    'ReconstructionMethod',
    'ReconstructionDiagnostics',
    'ReconstructionReport',
    # Experiment models
    'ProjectorSpec',
    'AutoTimes',
    'AutoTimesSpec',
    'BlochSpec',
    'TruthSpec',
    'ValidationGrid',
    'ExperimentConfig',
    'Versions',
    'RunReport'
]
