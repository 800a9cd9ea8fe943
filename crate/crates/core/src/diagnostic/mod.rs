//! Checks of the renormalized vorticity balance: pointwise residuals of the
//! self-similar system, the weak identity for `div(ρ f(ω/ρ) v)` with its
//! correction terms, the truncated quadratic family, and the boundary
//! functional `∫ ρ X² (v·ν)` on the curved shock.

mod field;
mod functional;
mod identity;
pub mod quad;
mod renorm;

pub use field::{pde_residuals, AnalyticField, ConstantField, Mode, PdeResiduals, TrigField};
pub use functional::{contradiction_functional, shock_functional, ContradictionReport, ShockSample, SHOCK_NODES};
pub use identity::{
    truncation_limit_study, weak_identity_refinement, weak_identity_residual, write_refinement_csv, write_truncation_csv,
    FnTest, RefinementRow, TestFunction, TruncationRow, Unit, WeakIdentityTerms,
};
pub use quad::QuadPatch;
pub use renorm::{renorm_pair_truncated, RenormPair, TruncatedQuadratic};
