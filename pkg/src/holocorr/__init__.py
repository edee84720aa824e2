"""Holomorphic correspondences on the Riemann sphere: fibers, preimage
measures, Birkhoff averages, and an exact finite model."""
from .chain import (BivarPoly, Chain, Component, Degrees, adjoint, chain_from_text, chain_to_text,
                    compose, graph, identity_chain, load_chain, maps_chain, rational_graph,
                    read_chain, topological_degree, validate, write_chain)
from .ergodic import (BirkhoffReport, DefectReport, TestFunction, birkhoff_exact, birkhoff_mc,
                      invariance_defect, parse_region, transfer_apply)
from .errors import (ChainError, ConstantPolynomial, DegeneracyDetected, DuplicateComponent,
                     HolocorrError, InfiniteAtomPresent, InterpolationIllConditioned,
                     LineComponent, NonConvergence, NotInvariant, OracleInconsistency,
                     ResultantDegenerate, TreeTooLarge, ZeroPolynomial)
from .fibers import backward_fiber, forward_fiber
from .measure import (AtomicMeasure, DensityGrid, bin_measure, estimate_moments,
                      exact_pullback_tree, pullback, sample_mu)
from .oracle import FiniteCorrespondence
from .roots import roots
from .sphere import Fiber, SpherePoint

__version__ = "0.1.0"

__all__ = [
    "BivarPoly", "Chain", "Component", "Degrees", "adjoint", "chain_from_text", "chain_to_text",
    "compose", "graph", "identity_chain", "load_chain", "maps_chain", "rational_graph",
    "read_chain", "topological_degree", "validate", "write_chain",
    "BirkhoffReport", "DefectReport", "TestFunction", "birkhoff_exact", "birkhoff_mc",
    "invariance_defect", "parse_region", "transfer_apply",
    "ChainError", "ConstantPolynomial", "DegeneracyDetected", "DuplicateComponent",
    "HolocorrError", "InfiniteAtomPresent", "InterpolationIllConditioned", "LineComponent",
    "NonConvergence", "NotInvariant", "OracleInconsistency", "ResultantDegenerate",
    "TreeTooLarge", "ZeroPolynomial",
    "backward_fiber", "forward_fiber",
    "AtomicMeasure", "DensityGrid", "bin_measure", "estimate_moments", "exact_pullback_tree",
    "pullback", "sample_mu", "FiniteCorrespondence", "roots", "Fiber", "SpherePoint",
]
