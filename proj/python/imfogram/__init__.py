"""Fast Iterative Filtering decompositions and IMFogram time-frequency maps."""

from ._core import (
    ConservationReport,
    DomainError,
    Error,
    FifConfig,
    ImfSet,
    InvalidInput,
    PiecewiseImfogram,
    TfrMatrix,
    UnsupportedOperation,
    check_components,
    check_conservation,
    chirp_pair,
    compare_tfr,
    decompose,
    duffing_velocity,
    fast_chirp,
    hadamard_square,
    imfogram,
    instantaneous_amplitude,
    instantaneous_frequency,
    l1_fourier_energy,
    noisy_triple,
    norm2,
    periodogram,
    piecewise_imfogram,
    spectrogram,
)

__all__ = [
    "ConservationReport",
    "DomainError",
    "Error",
    "FifConfig",
    "ImfSet",
    "InvalidInput",
    "PiecewiseImfogram",
    "TfrMatrix",
    "UnsupportedOperation",
    "check_components",
    "check_conservation",
    "chirp_pair",
    "compare_tfr",
    "decompose",
    "duffing_velocity",
    "fast_chirp",
    "hadamard_square",
    "imfogram",
    "instantaneous_amplitude",
    "instantaneous_frequency",
    "l1_fourier_energy",
    "noisy_triple",
    "norm2",
    "periodogram",
    "piecewise_imfogram",
    "spectrogram",
]
