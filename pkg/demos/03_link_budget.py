"""
Deterministic link budget
=========================

Path loss, background light and noise for a vertical link that crosses
the sea surface halfway, with every quantity printed for inspection.
"""

from airsea_owc.channel import Environment, LinkGeometry, RxModel, TxModel, link_budget

tx = TxModel()
rx = RxModel(fov_deg=30.0)
env = Environment()

budget = link_budget(LinkGeometry.equal_split(20.0), tx, rx, env)
for key, value in budget.items():
    print(f"{key:>16s} = {value:.6g}")

###############################################################################
# Narrowing the field of view raises the concentrator gain and admits less
# background light, which is why a narrow receiver wins when it is aligned.

for fov in (10.0, 15.0, 30.0, 60.0):
    b = link_budget(LinkGeometry.equal_split(20.0), tx, RxModel(fov_deg=fov), env)
    print(f"FoV {fov:4.0f} deg: g = {b['g']:7.2f}  I_b = {b['I_b_A'] * 1e3:6.2f} mA  h_c = {b['h_c']:.3e}")
