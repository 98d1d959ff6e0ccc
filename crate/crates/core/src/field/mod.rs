//! Finite fields GF(p^m), the tower F_q ⊆ F_{q^d} ⊆ F_{q^n}, and linearized polynomials.

mod ext;
mod gf;
mod linearized;
pub(crate) mod matrix;
mod poly;

pub use ext::Extension;
pub use gf::{make_field, Elem, FieldSpec, GaloisField, DEFAULT_TABLE_CAP};
pub(crate) use linearized::fq_kernel_dim;
pub use linearized::{projection_polys, LinearizedPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field {p}^{m} is too large")]
    TooLarge { p: u32, m: u32 },
    #[error("modulus {0:?} is not monic of the requested degree over the prime field")]
    BadModulus(Vec<u32>),
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u32>),
    #[error("malformed field spec {0:?}")]
    BadSpec(String),
    #[error("base field size {q} is not a power of the characteristic {p}")]
    BadBaseField { p: u32, q: u32 },
    #[error("base field F_{q} is not a subfield of the ambient field")]
    NotASubfield { q: u32 },
    #[error("{d} does not divide the extension degree {n}")]
    NotADivisor { d: u32, n: u32 },
    #[error("element {0} is not in the field")]
    ForeignElement(u32),
    #[error("basis elements are linearly dependent")]
    DependentBasis,
    #[error("expected {expected} basis elements, got {got}")]
    WrongBasisSize { expected: usize, got: usize },
    #[error("the zero polynomial has the whole field as kernel")]
    ZeroPolynomial,
    #[error("twist exponents {0} and {1} are incompatible")]
    TwistMismatch(u32, u32),
    #[error("twist {s} is not coprime to the degree {d}")]
    TwistNotCoprime { s: u32, d: u32 },
    #[error("polynomials live over different fields")]
    FieldMismatch,
    #[error("kernel bound violated: dimension {dim} exceeds degree {degree}")]
    KernelBoundViolated { dim: usize, degree: usize },
    #[error("norm identity failed for a polynomial with maximal kernel")]
    NormIdentityFailed,
    #[error("subspaces do not form a direct sum of the whole field")]
    NotADecomposition,
}
