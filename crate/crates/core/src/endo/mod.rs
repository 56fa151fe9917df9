//! Contraction subgroups, stable images and the splitting results built on them.

mod builtin;
mod contraction;
mod lemmas;
mod regulation;
mod semigroup;

pub use builtin::{project_away, scale, scale_first};
pub use contraction::{
    contraction, eventually_in, verify_theorem_a, ContractionReport, TheoremAReport,
};
pub use lemmas::{
    all_homomorphisms, fewprimes_check, hom_search, hom_search_with_budget, lambdareslem_check,
    normend_check, shrinkind_check, FewPrimesReport, HomSearchReport, SimpleWitness,
    DEFAULT_SEARCH_BUDGET,
};
pub use regulation::{tfrelstab_ii_check, verify_regulation, RegulationReport, TfrelstabReport};
pub use semigroup::{
    literal_contraction, o_lambda, semigroup_contraction, semigroup_contraction_with,
    verify_splitthm, ContractionPath, EndoSemigroup, LiteralContraction, OLambdaReport,
    SemigroupContraction, SplitReport, MONOID_CAP,
};
