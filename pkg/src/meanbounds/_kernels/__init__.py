"""Hot kernels: compiled ``_core`` when available, pure-Python otherwise.

Set ``MEANBOUNDS_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("MEANBOUNDS_PURE_PYTHON", "") not in ("", "0"):
    from ._fallback import (dft_direct, log_ratio_step, pair_gap,
                            power_mean_many, rado_mean_many, theta3_sum)
    BACKEND = "python"
else:
    try:
        from ._core import (dft_direct, log_ratio_step, pair_gap,
                            power_mean_many, rado_mean_many, theta3_sum)
        BACKEND = "compiled"
    except ImportError:
        from ._fallback import (dft_direct, log_ratio_step, pair_gap,
                                power_mean_many, rado_mean_many, theta3_sum)
        BACKEND = "python"

__all__ = ["BACKEND", "dft_direct", "log_ratio_step", "pair_gap",
           "power_mean_many", "rado_mean_many", "theta3_sum"]
