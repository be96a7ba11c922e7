"""
Mesh refinement study: enclosure width for the eigenvalue 1 of the 1D model.

For elements of order r the enclosure width is expected to decrease like
h^(2r) -- twice the best-approximation rate, because both endpoints of
the enclosure converge at the squared-residual speed.  The table prints
the observed widths and the incremental log-log rates.
"""
import numpy as np

from eigenclose import assemble_1d, uniform_mesh, zm_enclosures

meshes = (10, 20, 40, 80)
window = (0.5, 1.5)

for order in (1, 2, 3):
    print(f"order r = {order}   (expected rate {2 * order})")
    print(f"{'n':>4} {'h':>12} {'width':>14} {'rate':>7}")
    prev = None
    log_h, log_w = [], []
    for n in meshes:
        h = np.pi / n
        forms = assemble_1d(uniform_mesh(n), order).forms
        enc = zm_enclosures(forms, window, j_max=1)[0]
        rate = ""
        if prev is not None and enc.width > 1e-12:
            rate = f"{np.log(prev[1] / enc.width) / np.log(prev[0] / h):7.3f}"
        if enc.width > 1e-12:
            log_h.append(np.log(h))
            log_w.append(np.log(enc.width))
            prev = (h, enc.width)
        print(f"{n:>4} {h:>12.6f} {enc.width:>14.3e} {rate:>7}")
    slope = np.polyfit(log_h, log_w, 1)[0]
    print(f"least-squares slope: {slope:.3f}")
    print()
