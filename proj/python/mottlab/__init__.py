"""Optical-lattice Bose-Hubbard parameters, on-site energies and ED spectra."""

from ._mottlab import (
    Criterion,
    Feshbach,
    GapMode,
    MottlabError,
    NumericalError,
    UModel,
    Units,
    __version__,
    analyze_site,
    bands,
    busch_energy,
    chain_eigenvalues,
    critical_depth,
    critical_ratio,
    ed_spectrum,
    fit_gaussians,
    fit_kink,
    hubbard,
    resonances,
    u2,
    u3_combination,
)

__all__ = [name for name in dir() if not name.startswith("_")]
