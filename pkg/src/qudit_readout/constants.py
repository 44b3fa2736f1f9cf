"""Unit conversions. Energies are stored as E/h in GHz throughout."""

from scipy import constants as _c

#: Bohr magneton, GHz/T
MU_B = _c.physical_constants["Bohr magneton in Hz/T"][0] * 1e-9
#: nuclear magneton, GHz/T
MU_N = _c.physical_constants["nuclear magneton in MHz/T"][0] * 1e-3
#: Boltzmann constant, GHz/K
K_B = _c.physical_constants["Boltzmann constant in Hz/K"][0] * 1e-9

#: below this gap (GHz) two levels are reported as degenerate
DEGENERACY_TOL = 1e-9
#: resonant-denominator tolerance (GHz) for the Schrieffer-Wolff generator
RESONANCE_TOL = 1e-9
