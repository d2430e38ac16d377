"""Braid stability laboratory for area-preserving annulus maps."""

__version__ = "0.1.0"

from .surface import (AnnulusPoint, FlowSettings, TimeHamiltonian,
                      TwistStage, HamiltonianStage, ExplicitStage,
                      SurfaceMap, flow_time_1, hofer_norm, hofer_norm_prime,
                      check_boundary_admissible, hamiltonian_vector_field,
                      AdmissibilityError, DomainError, FlowError)
from .orbits import (PeriodicOrbit, OrbitClass, OrbitSet, ContinuationTrace,
                     find_orbits, refine_newton, classify, degree,
                     continue_orbit, action_difference,
                     action_difference_cobordism, isolation_gap,
                     GapUndefinedError, ClassError)
from .braids import (Strand, AnnularBraid, BraidInvariants, extract_braid,
                     invariants, is_isotopic, transport_braid,
                     INDETERMINATE, ResolutionError)
from .dynnikov import DynnikovState
from .ech import (OrbitSymbol, RelClassData, positive_partition,
                  negative_partition, partitions_disjoint, conley_zehnder,
                  fredholm_index, ech_index, gluing_count, DegeneracyError,
                  ELLIPTIC, POS_HYP, NEG_HYP)
from .entropy import (EntropyEstimate, braid_entropy,
                      entropy_semicontinuity_run)
from .config import ExperimentConfig, ConfigError
from .sweep import stability_sweep, RunManifest
