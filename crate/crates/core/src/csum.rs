//! Gauss sums, Kloosterman sums and the companion sum
//! `H(m, n, k, chi; p) = sum_{a=1}^{p-1} chi(m a + n a^{-1}) e(k a / p)`,
//! plus their moments over `m`.
//!
//! Every accumulation goes through [`ComplexAccumulator`] (Neumaier-compensated
//! f64). Squared magnitudes are always `re^2 + im^2` of the compensated value.

use num_complex::Complex64;

use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::error::SumError;
use crate::fp::PrimeContext;

/// Neumaier-compensated running sum of `f64`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Complex value with independently compensated real and imaginary parts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexAccumulator {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn add_real(&mut self, x: f64) {
        self.re.add(x);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    /// `|z|^2` as `re^2 + im^2`.
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.value().norm_sqr()
    }

    #[inline]
    pub fn magnitude(&self) -> f64 {
        self.value().norm()
    }
}

impl FromIterator<Complex64> for ComplexAccumulator {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// `G(n, chi) = sum_{a=1}^{p} chi(a) e(n a / p)`. The `a = p` term is zero.
pub fn gauss_sum(ctx: &PrimeContext, chi: &DirichletCharacter, n: u32) -> Complex64 {
    ctx.units()
        .map(|a| chi.eval(ctx, a) * ctx.e_p(ctx.mul(n, a)))
        .collect::<ComplexAccumulator>()
        .value()
}

/// `tau(chi) = G(1, chi)`.
pub fn tau(ctx: &PrimeContext, chi: &DirichletCharacter) -> Complex64 {
    gauss_sum(ctx, chi, 1)
}

/// Both sides of the twist law `G(n, chi) = conj(chi)(n) tau(chi)`.
pub fn twist_check(
    ctx: &PrimeContext,
    chi: &DirichletCharacter,
    n: u32,
) -> Result<(Complex64, Complex64), SumError> {
    let n = n % ctx.p();
    if chi.is_principal() && n == 0 {
        return Err(SumError::ExcludedCase);
    }
    let lhs = gauss_sum(ctx, chi, n);
    let rhs = chi.conj().eval(ctx, n) * tau(ctx, chi);
    Ok((lhs, rhs))
}

/// `K(m, n, chi; p) = sum_{a=1}^{p} chi(a) e((m a + n a^{-1}) / p)`.
///
/// The `a = p` term vanishes since `chi(p) = 0`, so this is also the
/// `a = 1..p-1` sum used in the fourth-power-mean formula.
pub fn kloosterman(ctx: &PrimeContext, chi: &DirichletCharacter, m: u32, n: u32) -> Complex64 {
    ctx.units()
        .map(|a| {
            let phase = ctx.add(ctx.mul(m, a), ctx.mul(n, ctx.mod_inv(a)));
            chi.eval(ctx, a) * ctx.e_p(phase)
        })
        .collect::<ComplexAccumulator>()
        .value()
}

/// `H(m, n, k, chi; p)`. Terms with `p | m a + n a^{-1}` contribute zero.
pub fn h_sum(ctx: &PrimeContext, chi: &DirichletCharacter, m: u32, n: u32, k: u32) -> Complex64 {
    ctx.units()
        .map(|a| {
            let arg = ctx.add(ctx.mul(m, a), ctx.mul(n, ctx.mod_inv(a)));
            chi.eval(ctx, arg) * ctx.e_p(ctx.mul(k, a))
        })
        .collect::<ComplexAccumulator>()
        .value()
}

fn require_coprime(ctx: &PrimeContext, v: u32, name: &'static str) -> Result<(), SumError> {
    if v % ctx.p() == 0 {
        Err(SumError::NotCoprime(name))
    } else {
        Ok(())
    }
}

/// `sum_{m=1}^{p-1} |H(m, n, k, chi; p)|^2`.
pub fn second_moment_m(
    ctx: &PrimeContext,
    chi: &DirichletCharacter,
    n: u32,
    k: u32,
) -> Result<f64, SumError> {
    require_coprime(ctx, n, "n")?;
    require_coprime(ctx, k, "k")?;
    Ok(ctx
        .units()
        .map(|m| h_sum(ctx, chi, m, n, k).norm_sqr())
        .collect::<CompensatedSum>()
        .value())
}

/// `sum_{m=1}^{p-1} psi(m) |H(m, n, k, chi; p)|^2`.
pub fn psi_weighted_second_moment(
    ctx: &PrimeContext,
    chi: &DirichletCharacter,
    psi: &DirichletCharacter,
    n: u32,
    k: u32,
) -> Result<Complex64, SumError> {
    require_coprime(ctx, n, "n")?;
    require_coprime(ctx, k, "k")?;
    Ok(ctx
        .units()
        .map(|m| psi.eval(ctx, m) * h_sum(ctx, chi, m, n, k).norm_sqr())
        .collect::<ComplexAccumulator>()
        .value())
}

/// `|H(m, n, k, chi_j; p)|^2` for every character `j` and every `m` in `1..p`.
///
/// Row `j`, column `m - 1`. Built once per `(p, n, k)` and shared by all
/// moment identities.
#[derive(Debug, Clone)]
pub struct MomentTable {
    q: usize,
    values: Vec<f64>,
}

impl MomentTable {
    pub fn build(ctx: &PrimeContext, n: u32, k: u32) -> Result<Self, SumError> {
        require_coprime(ctx, n, "n")?;
        require_coprime(ctx, k, "k")?;
        let q = ctx.group_order() as usize;
        let mut values = Vec::with_capacity(q * q);
        for chi in enumerate_characters(ctx) {
            for m in ctx.units() {
                values.push(h_sum(ctx, &chi, m, n, k).norm_sqr());
            }
        }
        Ok(Self { q, values })
    }

    /// `|H(m, ...)|^2` for `m` in `1..p`.
    #[inline]
    pub fn get(&self, j: u32, m: u32) -> f64 {
        self.values[j as usize * self.q + (m as usize - 1)]
    }

    pub fn row(&self, j: u32) -> &[f64] {
        let s = j as usize * self.q;
        &self.values[s..s + self.q]
    }

    /// `sum_m |H|^2` for character `j`.
    pub fn second_moment(&self, j: u32) -> f64 {
        self.row(j).iter().copied().collect::<CompensatedSum>().value()
    }

    /// `sum_m |H|^4` for character `j`.
    pub fn fourth_moment(&self, j: u32) -> f64 {
        self.row(j).iter().map(|v| v * v).collect::<CompensatedSum>().value()
    }

    /// `sum_m psi(m) |H|^2` for character `j`.
    pub fn weighted(&self, ctx: &PrimeContext, j: u32, psi: &DirichletCharacter) -> Complex64 {
        self.row(j)
            .iter()
            .zip(ctx.units())
            .map(|(&v, m)| psi.eval(ctx, m) * v)
            .collect::<ComplexAccumulator>()
            .value()
    }
}

/// `W[j][s] = sum_m chi_s(m) |H(m, n, k, chi_j)|^2` for all character pairs.
#[derive(Debug, Clone)]
pub struct WeightedMomentTable {
    q: usize,
    values: Vec<Complex64>,
}

impl WeightedMomentTable {
    pub fn build(ctx: &PrimeContext, moments: &MomentTable) -> Self {
        let q = ctx.group_order() as usize;
        let chars = enumerate_characters(ctx);
        let mut values = Vec::with_capacity(q * q);
        for j in 0..q as u32 {
            for psi in &chars {
                values.push(moments.weighted(ctx, j, psi));
            }
        }
        Self { q, values }
    }

    #[inline]
    pub fn get(&self, j: u32, s: u32) -> Complex64 {
        self.values[j as usize * self.q + s as usize]
    }
}
