"""vortexlab: vortex tracking for the 2D Gross–Pitaevskii equation.

Provides:
- **core**: vortex configurations, polar grids and sampled fields.
- **spectral**: Fourier solvers for the boundary problems on the unit disk.
- **dynamics**: renormalized energy and the reduced point-vortex ODE.
- **profile**: the radial core profile and the constant gamma.
- **fields**: canonical harmonic maps, smoothed wave functions, diagnostics.
- **gp**: a desk-scale splitting solver for the full equation.
- **cli**: metrics, file formats and the ``vortexlab`` command.
"""

__all__ = ["__version__"]

__version__ = "0.1.0"
