"""Desk-scale simulations of the single-photon and two-pinhole benches:
Fock-state beam splitters, scalar wave optics with grid occlusion and lens
imaging, duality metrics, pilot-wave trajectories, and impulsive pointer
measurements."""

from ._backend import active_backend

__version__ = "0.1.0"
__all__ = ["active_backend", "__version__"]
