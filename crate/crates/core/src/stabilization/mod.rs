//! Add-one costs of Betti numbers and the constructions used to study their
//! stabilization: traces over growing balls, probes with adversarial far-away
//! insertions, sphere configurations, and packing bounds.

mod add_one;
mod hypothesis;
mod packing;
mod probe;
mod sphere;
mod trace;

pub use add_one::{add_one_cost, AddOneCost, AddOneCostRecord};
pub use hypothesis::{variance_lowerbound_hypothesis_check, HypothesisReport};
pub use packing::{packing_lower_bound, PackingBound};
pub use probe::{
    adversarial_ring, default_subcritical_radius, is_subcritical_default, strong_stabilization_probe, ProbeOutcome,
    StrongProbe,
};
pub use sphere::{
    build_sphere_configuration, check_invariants, place_configuration, SphereCheck, SphereConfiguration, NET_RADIUS,
    THICKENING,
};
pub use trace::{weak_stabilization_trace, weak_trace_for_sample, StabilizationTrace, TraceStep};
