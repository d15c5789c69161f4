"""twistlab: numerical experiments on the SU(2) character variety of a
closed surface -- twist flows, Dehn twist dynamics, and the Diophantine
twist-power sequences that drag one twist's effect along another's orbit."""

__version__ = "0.1.0"

from .su2 import (AxisAngle, CentralElementError, UnitQuaternion, axis_angle,
                  conj_by, flow_factor, from_axis_angle, haar_sample, inverse,
                  mul, power, theta)
from .words import Word, relator
from .surface import (Fingerprint, SurfaceRep, char_distance, evaluate,
                      fingerprint, gauge_normalize, has_dense_image,
                      is_irreducible, relator_defect, sample, solve_commutator)
from .mapping import (MappingClass, TwistGen, act_on_curve, apply, automorphism,
                      check_relator, commutator_element)
from .flow import (CurveHandle, FlowSingularError, F_map, f_function, theta_of,
                   twist_flow, twist_power)
from .diophantine import (ApproxSequence, ContinuedFraction, continued_fraction,
                          find_approx_sequence, frac_dist, from_quotients)
from .experiments import (CheckReport, DensityReport, LemmaReport, check_suite,
                          lemma_experiment, orbit_density, run_lemma_headline)
