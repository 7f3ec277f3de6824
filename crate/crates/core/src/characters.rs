//! The group of Dirichlet characters mod p.
//!
//! With `g` the smallest primitive root, every character is `chi_j(g^t) =
//! e(j t / (p - 1))` for a unique exponent `j` in `0..p-1`. A character is
//! just that exponent plus a few structural flags; values come from the
//! shared root table in [`PrimeContext`].

use num_complex::Complex64;

use crate::fp::PrimeContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirichletCharacter {
    j: u32,
    group_order: u32,
}

impl DirichletCharacter {
    /// The character with exponent `j mod (p - 1)`.
    pub fn new(ctx: &PrimeContext, j: u32) -> Self {
        let q = ctx.group_order();
        Self { j: j % q, group_order: q }
    }

    pub fn principal(ctx: &PrimeContext) -> Self {
        Self::new(ctx, 0)
    }

    /// The Legendre symbol as a character.
    pub fn legendre(ctx: &PrimeContext) -> Self {
        Self::new(ctx, ctx.group_order() / 2)
    }

    #[inline]
    pub fn exponent(&self) -> u32 {
        self.j
    }

    #[inline]
    pub fn is_principal(&self) -> bool {
        self.j == 0
    }

    #[inline]
    pub fn is_legendre(&self) -> bool {
        self.j == self.group_order / 2
    }

    /// True for the two real characters, decided from the exponent alone.
    #[inline]
    pub fn is_real(&self) -> bool {
        self.is_principal() || self.is_legendre()
    }

    /// `chi(-1) = (-1)^j`.
    #[inline]
    pub fn parity(&self) -> i32 {
        if self.j % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Multiplicative order `(p - 1) / gcd(j, p - 1)`.
    pub fn order(&self) -> u32 {
        self.group_order / gcd(self.j, self.group_order)
    }

    pub fn conj(&self) -> Self {
        Self {
            j: (self.group_order - self.j) % self.group_order,
            group_order: self.group_order,
        }
    }

    /// Pointwise product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.group_order, other.group_order);
        Self {
            j: (self.j + other.j) % self.group_order,
            group_order: self.group_order,
        }
    }

    /// `self^e`, e.g. `psi.conj().pow(2)` for the square of the conjugate.
    pub fn pow(&self, e: u32) -> Self {
        Self {
            j: ((self.j as u64 * e as u64) % self.group_order as u64) as u32,
            group_order: self.group_order,
        }
    }

    /// Exponent of `chi(a)` as a power of `e(1/(p-1))`, or `None` when `p | a`.
    #[inline]
    pub fn log_value(&self, ctx: &PrimeContext, a: u32) -> Option<u64> {
        ctx.try_index(a)
            .map(|t| (self.j as u64 * t as u64) % self.group_order as u64)
    }

    /// `chi(a)` for a residue `a` in `0..p`.
    #[inline]
    pub fn eval(&self, ctx: &PrimeContext, a: u32) -> Complex64 {
        match self.log_value(ctx, a) {
            Some(t) => ctx.zeta(t),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `chi(a)` for any integer.
    pub fn eval_int(&self, ctx: &PrimeContext, a: i64) -> Complex64 {
        self.eval(ctx, ctx.reduce(a))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All `p - 1` characters in exponent order; entry 0 is the principal one.
pub fn enumerate_characters(ctx: &PrimeContext) -> Vec<DirichletCharacter> {
    (0..ctx.group_order())
        .map(|j| DirichletCharacter::new(ctx, j))
        .collect()
}

pub fn char_eval(ctx: &PrimeContext, chi: &DirichletCharacter, a: i64) -> Complex64 {
    chi.eval_int(ctx, a)
}

pub fn char_parity(chi: &DirichletCharacter) -> i32 {
    chi.parity()
}
