//! Classical and quantum de Finetti machinery: sampling without replacement,
//! conditional mutual information, conditioning selection, IC-POVMs and
//! separable approximations of qudit states on graphs.

mod decoupling;
mod joint;
mod pmf;
mod povm;
mod qudit;
mod separable;

pub use decoupling::{decoupling_select, weighted_cmi, DecouplingResult};
pub use joint::{shannon, JointDistribution, CONDITIONING_FLOOR};
pub use pmf::{
    ordered_tuples, product_renormalized_marginal_deviation, product_renormalized_pmf, swor_marginal_check,
    swor_pmf, swor_sample, Pmf,
};
pub use povm::{build_ic_povm, IcPovm};
pub use qudit::{
    condition_on, measure_and_condition, partial_trace, outcome_distribution, ConditionalState, QuditState, MAX_OUTCOME_TUPLES,
    MAX_STATE_BITS,
};
pub use separable::{build_separable_approx, ProductMember, SeparableApprox, Weighting, BOUND_SLACK};
