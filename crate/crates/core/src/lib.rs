//! Jointly maximal infinite products for doubling weights in the unit disc.
//!
//! For a doubling weight `ω` the crate builds two products
//! `f_j(z) = ∏_k (1 + a_{2k+j} z^{n_{2k+j}}) / (1 + a_{2k+j}^{-1} z^{n_{2k+j}})`,
//! `j ∈ {0, 1}`, with `|f₀(z)| + |f₁(z)| ≍ ω(|z|)`, and provides the tooling to
//! check that and the related growth and value-distribution estimates on
//! finite grids.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod analysis;
pub mod bigint;
pub mod construction;
pub mod error;
pub mod hexfloat;
pub mod intervals;
pub mod logpos;
pub mod product;
pub mod quadrature;
pub mod scalar;
pub mod weight;

pub use analysis::{
    a_point_report, characteristic, circle_mean, counting_bound_check, counting_function, integrated_counting,
    integrated_counting_zero, jensen_check, jensen_radii, log_max_modulus, log_mean_power, max_usable_decade,
    verify_theorem, CountingBoundReport, GridSpec, JensenReport, Radius, RatioReport, TheoremReport,
};
pub use construction::{
    build_sequence, build_sequence_with_tol, delta_bound_from, select_gamma, validate_sequence, Check,
    Construction, ValidationReport, ValidationRow,
};
pub use error::{Error, Result};
pub use intervals::{
    covering_check, density_table, interval, intervals, lower_density_estimate, max_cover_index, CoverReport,
    CoverRow, DensityRow, Interval,
};
pub use num_bigint::BigUint;
pub use num_complex::Complex;

pub use logpos::{complement_from_ell, ell_from_complement, LogPos, SignedLog};
pub use quadrature::{MeanMode, QuadratureOptions};
pub use product::{DiscPoint, Factor, Product, RationalAngle, Truncation, ZeroCircle};
pub use scalar::Real;
pub use weight::{
    certify_doubling, certify_with_constant, check_envelope, check_envelope_eps, default_probe_grid,
    DoublingCertificate, Weight, WeightKind,
};

pub type Weight64 = Weight<f64>;
pub type Weight32 = Weight<f32>;
pub type Certificate64 = DoublingCertificate<f64>;
pub type Construction64 = Construction<f64>;
pub type Construction32 = Construction<f32>;
pub type LogPos64 = LogPos<f64>;
pub type Product64 = Product<f64>;
pub type DiscPoint64 = DiscPoint<f64>;
pub type Radius64 = Radius<f64>;
