"""bslab: simulation and analysis lab for semi-coherent backscatter detection.

Subpackages:

* specfun   -- special-function kernels (Q, incomplete gamma, I0, 2F1)
* sigmodel  -- channels, signal blocks, frames, exact energy laws
* detectors -- energy-detection thresholds and the decision rule
* estimator -- semi-blind variance estimation from one frame
* theory    -- closed-form error rates
* fading    -- outage and floor-exceedance statistics over Rayleigh fading
* harness   -- deterministic parallel Monte Carlo sweeps
* csvio     -- the curve CSV schema
* cli       -- the `bsl` command-line front end
"""

__version__ = "0.1.0"
