pub mod lc;
pub mod numeric;
pub mod quadrature;
pub mod seq;

pub use lc::{Coefficient, FieldConfig, LcError, LcNumber, Magnitude};
pub use numeric::{NumericError, RatInterval};

/// Arbitrary-precision rational in lowest terms.
pub type Rational = num_rational::BigRational;

/// Levi-Civita numbers with exact rational coefficients.
pub type ExactLc = LcNumber<Rational>;

/// Levi-Civita numbers with certified interval coefficients.
pub type CertifiedLc = LcNumber<RatInterval>;
