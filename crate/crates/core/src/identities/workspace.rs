use std::sync::OnceLock;

use num_complex::Complex64;

use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::combinatorics;
use crate::csum::{tau, ComplexAccumulator, MomentTable, WeightedMomentTable};
use crate::error::SumError;
use crate::fp::PrimeContext;
use crate::identities::Tolerance;

/// Default ceiling for the `O(p^3)` exact integer routes.
pub const DEFAULT_MAX_CUBIC_PRIME: u32 = 199;

/// Which route produced the exact `T(p)` used in a right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TRoute {
    Direct,
    Delta,
}

/// Per-prime state for the verifiers: the arithmetic context, the chosen
/// `(n, k)`, and lazily built tables that several identities share.
#[derive(Debug)]
pub struct Workspace {
    ctx: PrimeContext,
    n: u32,
    k: u32,
    tolerance: Tolerance,
    max_cubic_prime: u32,
    characters: Vec<DirichletCharacter>,
    moments: OnceLock<MomentTable>,
    weighted: OnceLock<WeightedMomentTable>,
    taus: OnceLock<Vec<Complex64>>,
    t_value: OnceLock<(i64, TRoute)>,
    t_l: OnceLock<i64>,
}

impl Workspace {
    pub fn new(ctx: PrimeContext, n: u32, k: u32) -> Result<Self, SumError> {
        if n % ctx.p() == 0 {
            return Err(SumError::NotCoprime("n"));
        }
        if k % ctx.p() == 0 {
            return Err(SumError::NotCoprime("k"));
        }
        let characters = enumerate_characters(&ctx);
        let (n, k) = (n % ctx.p(), k % ctx.p());
        Ok(Self {
            ctx,
            n,
            k,
            tolerance: Tolerance::default(),
            max_cubic_prime: DEFAULT_MAX_CUBIC_PRIME,
            characters,
            moments: OnceLock::new(),
            weighted: OnceLock::new(),
            taus: OnceLock::new(),
            t_value: OnceLock::new(),
            t_l: OnceLock::new(),
        })
    }

    pub fn with_tolerance(mut self, tolerance: Tolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_cubic_prime(mut self, max_cubic_prime: u32) -> Self {
        self.max_cubic_prime = max_cubic_prime;
        self
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tolerance
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn character(&self, j: u32) -> DirichletCharacter {
        DirichletCharacter::new(&self.ctx, j)
    }

    pub fn legendre_index(&self) -> u32 {
        self.ctx.group_order() / 2
    }

    /// Whether the exact `O(p^3)` routes are allowed at this prime.
    pub fn cubic_allowed(&self) -> bool {
        self.p() <= self.max_cubic_prime
    }

    pub fn max_cubic_prime(&self) -> u32 {
        self.max_cubic_prime
    }

    pub fn moments(&self) -> &MomentTable {
        self.moments
            .get_or_init(|| MomentTable::build(&self.ctx, self.n, self.k).expect("n, k checked coprime"))
    }

    pub fn weighted(&self) -> &WeightedMomentTable {
        self.weighted
            .get_or_init(|| WeightedMomentTable::build(&self.ctx, self.moments()))
    }

    /// `tau(chi_j)` for every `j`.
    pub fn taus(&self) -> &[Complex64] {
        self.taus
            .get_or_init(|| self.characters.iter().map(|c| tau(&self.ctx, c)).collect())
    }

    pub fn tau_of(&self, chi: &DirichletCharacter) -> Complex64 {
        self.taus()[chi.exponent() as usize]
    }

    /// Exact `T(p)`: the literal triple sum when the cubic guard allows it,
    /// the `Delta` formula otherwise.
    pub fn t_exact(&self) -> (i64, TRoute) {
        *self.t_value.get_or_init(|| {
            if self.cubic_allowed() {
                (combinatorics::t_direct(&self.ctx), TRoute::Direct)
            } else {
                (combinatorics::t_via_delta(&self.ctx), TRoute::Delta)
            }
        })
    }

    pub fn t_l(&self) -> i64 {
        *self.t_l.get_or_init(|| combinatorics::t_l(&self.ctx))
    }

    /// `(-1 | p)`.
    pub fn legendre_minus_one(&self) -> i64 {
        self.ctx.legendre(-1) as i64
    }

    /// Literal `sum_{u,a} conj(psi)(u a - 1) psi(u a^{-1} - 1) psi^2(a - 1)`
    /// as a per-`u` vector (index `u - 1`).
    pub fn psi_triple_rows(&self, psi: &DirichletCharacter) -> Vec<Complex64> {
        let ctx = &self.ctx;
        let conj = psi.conj();
        let sq = psi.pow(2);
        ctx.units()
            .map(|u| {
                ctx.units()
                    .map(|a| {
                        conj.eval(ctx, ctx.sub(ctx.mul(u, a), 1))
                            * psi.eval(ctx, ctx.sub(ctx.mul(u, ctx.mod_inv(a)), 1))
                            * sq.eval(ctx, ctx.sub(a, 1))
                    })
                    .collect::<ComplexAccumulator>()
                    .value()
            })
            .collect()
    }
}
