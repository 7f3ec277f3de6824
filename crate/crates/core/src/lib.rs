//! Dirichlet characters mod p, Gauss and Kloosterman-type sums, and exact
//! verifiers for power-mean identities of the sum
//! `H(m, n, k, chi; p) = sum_a chi(m a + n/a) e(k a / p)`.

pub mod characters;
pub mod combinatorics;
pub mod csum;
pub mod error;
pub mod fp;
pub mod identities;

pub use characters::{enumerate_characters, DirichletCharacter};
pub use error::{FpError, SumError};
pub use fp::PrimeContext;
pub use identities::{IdentityId, Status, Tolerance, VerificationRecord, Workspace};
