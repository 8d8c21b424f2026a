from .engine import dp_step, reduce_set, solve_sfvs, solve_soct
from .signature import Signature, aux_forest, signature

__all__ = ["dp_step", "reduce_set", "solve_sfvs", "solve_soct", "Signature", "aux_forest", "signature"]
