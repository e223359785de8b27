"""
Fitting candidate families to a tabulated tilt PDF
==================================================

A tilt-angle PDF sampled on a half-degree grid is fitted with six families
by least squares on the densities, and the families are ranked by error.
"""

import numpy as np
from scipy import stats

from airsea_owc.empirical import EmpiricalPdf
from airsea_owc.fitting import BLACK_SEA_WEIBULL_FITS, rank_families, regress_linear, regress_power

# Build a synthetic table from a known Weibull law so the answer is known.
angles = np.arange(0.0, 90.5, 0.5)
table = EmpiricalPdf(angles, stats.weibull_min(c=1.84, scale=15.61).pdf(angles))

for rank, fit in enumerate(rank_families(table), start=1):
    params = ", ".join(f"{name}={value:.4f}" for name, value in fit.param_dict.items())
    print(f"{rank}. {fit.family.value:<17s} MSE={fit.mse:.3e}  {params}")

###############################################################################
# The Weibull parameters fitted at three wind speeds are then regressed on
# wind speed. The linear law is an ordinary least-squares line. The power law
# is fitted in the original units, starting from the log-log line.

data = np.asarray(BLACK_SEA_WEIBULL_FITS)
for col, name in ((1, "k"), (2, "lambda")):
    pts = data[:, [0, col]]
    lin, pw = regress_linear(pts), regress_power(pts)
    print(f"{name:>6s}: linear {lin.a:.4f} + {lin.b:.4f} U   power {pw.a:.4f} U^{pw.b:.4f}")
