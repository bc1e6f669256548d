"""Desk-scale toolkit for spontaneous parametric down-conversion.

Four computational layers, each usable on its own:

* :mod:`spdclab.crystal` - dispersion and birefringence of uniaxial crystals
* :mod:`spdclab.phasematch` - collinear/noncollinear phase-matching solvers
  and emission-cone geometry
* :mod:`spdclab.threewave` - classical coupled-amplitude mixing (SHG,
  parametric gain)
* :mod:`spdclab.quantum` - truncated Fock-space pair statistics, HOM
  interference and polarization correlations

plus :mod:`spdclab.cli`, a deterministic CSV-emitting command line.
"""

__version__ = "0.1.0"
