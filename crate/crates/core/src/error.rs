use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("unsupported modulus {p}: {reason}")]
    UnsupportedModulus { p: u64, reason: &'static str },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SumError {
    #[error("excluded case: principal character with n divisible by p")]
    ExcludedCase,
    #[error("argument {0} must be coprime to p")]
    NotCoprime(&'static str),
    #[error("character must be nonprincipal")]
    PrincipalCharacter,
}
