"""
Mean square slope from a wave spectrum
======================================

The directional wave spectrum is integrated to a mean square slope and set
beside the empirical Cox-Munk slope variance.
"""

import numpy as np

from airsea_owc.eckv import EckvParams, cox_munk_variance, mean_square_slope, omnidirectional_spectrum, \
    significant_wave_height

for u in (5.0, 8.0, 10.0, 12.0, 15.0):
    p = EckvParams(u)
    mss = mean_square_slope(p)
    print(f"U = {u:4.1f}: mss = {mss:.4f}  Cox-Munk = {cox_munk_variance(u):.4f}  "
          f"ratio = {mss / cox_munk_variance(u):.3f}  Hs = {significant_wave_height(p):.2f} m")

###############################################################################
# The slope spectrum k^2 S(k) falls off far more slowly than S(k) above the
# energy peak, so short gravity and capillary waves carry much of the slope
# variance even though they hold almost no elevation variance.

p = EckvParams(10.0)
k = np.logspace(-2, 4, 13)
for kk, s in zip(k, k**2 * omnidirectional_spectrum(k, p)):
    print(f"k = {kk:9.3f} rad/m   k^2 S(k) = {s:.3e}")
