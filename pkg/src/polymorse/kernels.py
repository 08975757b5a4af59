"""Dispatch to the numba or numpy kernel backend (see :mod:`polymorse._accel`)."""
from ._accel import USE_NUMBA

if USE_NUMBA:
    from ._kernels_numba import (  # noqa: F401
        area_gradient,
        constraint_jacobian,
        constraint_values,
        fd_lagrangian_hessian,
        kkt_newton,
        lagrangian_gradient,
        lagrangian_hessian,
        multipliers,
        project_closure,
        scan_brackets,
    )
else:
    from ._kernels_numpy import (  # noqa: F401
        area_gradient,
        constraint_jacobian,
        constraint_values,
        fd_lagrangian_hessian,
        kkt_newton,
        lagrangian_gradient,
        lagrangian_hessian,
        multipliers,
        project_closure,
        scan_brackets,
    )
