use thiserror::Error;

/// Errors raised by the numeric layer. Reports record failed checks as flags;
/// these variants are reserved for malformed or out-of-domain inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LemmaError {
    #[error("point {re}+{im}i lies outside the open unit disk")]
    Domain { re: f64, im: f64 },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("|f(z)| = {0:e} is below the zero tolerance")]
    ZeroValue(f64),
    #[error("|1 + q(z)| = {0:e} is below the zero tolerance (pole of the Cayley map)")]
    Pole(f64),
    #[error("map is not normalized: f(0) = {re}+{im}i")]
    NotNormalized { re: f64, im: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("z0*w'(z0)/w(z0) has imaginary part {imag:e}; z0 is not an extremal point of |w|")]
    NotExtremal { imag: f64 },
    #[error("|p(z0) - alpha| = {0:e} is within the degeneracy threshold (beta ~ 0)")]
    DegenerateContact(f64),
    #[error("corpus generation failed after {attempts} rejected draws")]
    Generation { attempts: u32 },
}

pub type Result<T, E = LemmaError> = std::result::Result<T, E>;
