"""Generators and checkers for the grid-based lower-bound instances."""

from .base import Attachment, Builder, GeneratedInstance, valid_for
from .generic import (
    GADGET_TABLE, WITNESS_WIDTH_CONSTANT, construct_lb_instance, generic_budget, witness_path_decomposition,
)
from .grid import VARIANTS, GridProblemInstance, all_grid_instances, allowed_pairs, gen_grid_instance
from .multiway import MWCParameters, construct_mwc_lb, construct_nmc_lb, mwc_parameters
from .verify import FAMILIES, VARIANT_COUNT, GadgetCheck, verify_gadget

__all__ = [
    "Attachment", "Builder", "FAMILIES", "GADGET_TABLE", "GadgetCheck", "GeneratedInstance", "VARIANT_COUNT",
    "GridProblemInstance", "MWCParameters", "VARIANTS", "WITNESS_WIDTH_CONSTANT", "all_grid_instances",
    "allowed_pairs", "construct_lb_instance", "construct_mwc_lb", "construct_nmc_lb", "gen_grid_instance",
    "generic_budget", "mwc_parameters", "valid_for", "verify_gadget", "witness_path_decomposition",
]
