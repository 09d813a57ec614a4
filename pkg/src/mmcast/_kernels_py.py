"""Pure-Python fallback for the compiled kernels in ``_kernels.pyx``.

The operation order mirrors the Cython source line for line so both
backends produce identical floats.
"""
import math

import numpy as np


def beam_min_rates(base_dbm, dir_deg, boresight, theta3, half_ml, g0, gsl, noise_dbm, eta_w_hz):
    """For each beam, the rate of its worst-served target.

    ``base_dbm[t]`` is the target's received power excluding the transmit
    gain; ``dir_deg[t]`` the bearing from the transmitter to the target.
    Beam arrays are parallel and describe the transmit codebook.
    """
    fabs, fmod, log2 = math.fabs, math.fmod, math.log2
    targets = list(zip(base_dbm.tolist(), dir_deg.tolist()))
    out = np.empty(len(boresight), dtype=np.float64)
    beams = zip(boresight.tolist(), theta3.tolist(), half_ml.tolist(), g0.tolist(), gsl.tolist())
    for b, (bore, th3, hml, peak, side) in enumerate(beams):
        worst = 1e308
        for base, direction in targets:
            off = fabs(fmod(direction - bore, 360.0))
            if off > 180.0:
                off = 360.0 - off
            if off < hml:
                x = 2.0 * off / th3
                g = peak - 3.01 * x * x
            else:
                g = side
            p = base + g
            if p < worst:
                worst = p
        out[b] = eta_w_hz * log2(1.0 + 10.0 ** ((worst - noise_dbm) / 10.0))
    return out
