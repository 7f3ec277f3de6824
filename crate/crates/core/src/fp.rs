//! Exact arithmetic in the prime field F_p.
//!
//! [`PrimeContext`] is built once per modulus and holds everything the rest of
//! the crate reads on hot paths: the smallest primitive root, the index
//! (discrete-log) table, the inverse table with the convention `inv(0) = 0`,
//! and the two root-of-unity tables (orders `p` and `p - 1`).
//!
//! Residues are `u32` values in `0..p`; products go through `u64` before
//! reduction, so everything up to the trial-division limit stays exact.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::FpError;

/// Largest modulus accepted by [`PrimeContext::new`].
pub const MAX_MODULUS: u64 = 1_000_000;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut result = 1 % modulus;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Unit-circle table `table[t] = e(t / order)` for `t` in `0..order`.
///
/// Entries at quarter turns are snapped to exact `±1`, `±i`, so real
/// characters evaluate to exact integers.
fn unit_roots(order: usize) -> Vec<Complex64> {
    (0..order)
        .map(|t| {
            let quarter = 4 * t;
            if quarter % order == 0 {
                match quarter / order {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                let (s, c) = (TAU * t as f64 / order as f64).sin_cos();
                Complex64::new(c, s)
            }
        })
        .collect()
}

/// Immutable per-prime arithmetic workspace.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u32,
    g: u32,
    index: Vec<u32>,
    inv: Vec<u32>,
    additive_roots: Vec<Complex64>,
    multiplicative_roots: Vec<Complex64>,
}

impl PrimeContext {
    /// Builds the context for an odd prime `p >= 5`.
    pub fn new(p: u64) -> Result<Self, FpError> {
        if p > MAX_MODULUS {
            return Err(FpError::UnsupportedModulus {
                p,
                reason: "exceeds the trial-division limit",
            });
        }
        if p % 2 == 0 {
            return Err(FpError::UnsupportedModulus { p, reason: "even" });
        }
        if !is_prime(p) {
            return Err(FpError::UnsupportedModulus { p, reason: "not prime" });
        }
        if p < 5 {
            return Err(FpError::UnsupportedModulus {
                p,
                reason: "p must be at least 5",
            });
        }

        let q = p - 1;
        let factors = distinct_prime_factors(q);
        let g = (2..p)
            .find(|&c| factors.iter().all(|&f| pow_mod(c, q / f, p) != 1))
            .expect("every prime has a primitive root");

        let pu = p as usize;
        // index[0] is a sentinel equal to p
        let mut index = vec![p as u32; pu];
        let mut x = 1u64;
        for t in 0..q {
            index[x as usize] = t as u32;
            x = x * g % p;
        }

        let mut inv = vec![0u32; pu];
        inv[1] = 1;
        for a in 2..pu {
            // inv[a] = -(p / a) * inv[p mod a]
            let r = inv[pu % a] as u64;
            inv[a] = ((p - (p / a as u64)) * r % p) as u32;
        }

        Ok(Self {
            p: p as u32,
            g: g as u32,
            index,
            inv,
            additive_roots: unit_roots(pu),
            multiplicative_roots: unit_roots(q as usize),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Order of the multiplicative group, `p - 1`.
    #[inline]
    pub fn group_order(&self) -> u32 {
        self.p - 1
    }

    /// Smallest primitive root.
    #[inline]
    pub fn primitive_root(&self) -> u32 {
        self.g
    }

    /// Reduces any signed integer into `0..p`.
    #[inline]
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, a: u32, exp: u64) -> u32 {
        pow_mod(a as u64, exp, self.p as u64) as u32
    }

    /// Multiplicative inverse, with `mod_inv(0) = 0`.
    #[inline]
    pub fn mod_inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// Discrete log base `g`. Must not be called with `a = 0`.
    #[inline]
    pub fn index_of(&self, a: u32) -> u32 {
        debug_assert!(a != 0 && a < self.p, "index of {a} mod {}", self.p);
        self.index[a as usize]
    }

    /// Discrete log, or `None` for the zero residue.
    #[inline]
    pub fn try_index(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.index[a as usize])
        }
    }

    /// `e(t / p)` for `t` taken mod `p`.
    #[inline]
    pub fn e_p(&self, t: u32) -> Complex64 {
        self.additive_roots[(t % self.p) as usize]
    }

    /// `e(t / (p - 1))` for `t` taken mod `p - 1`.
    #[inline]
    pub fn zeta(&self, t: u64) -> Complex64 {
        self.multiplicative_roots[(t % (self.p as u64 - 1)) as usize]
    }

    /// Legendre symbol `(a | p)` read from the parity of the index.
    pub fn legendre(&self, a: i64) -> i32 {
        match self.reduce(a) {
            0 => 0,
            r if self.index[r as usize] % 2 == 0 => 1,
            _ => -1,
        }
    }

    /// Legendre symbol by Euler's criterion, independent of the index table.
    pub fn euler_criterion(&self, a: i64) -> i32 {
        let r = self.reduce(a);
        if r == 0 {
            return 0;
        }
        if self.pow(r, (self.p as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// `sum_{a=0}^{p-1} ((a^2 + m a + n) | p)` by direct summation.
    pub fn quad_legendre_sum(&self, m: u32, n: u32) -> i64 {
        (0..self.p)
            .map(|a| {
                let v = self.add(self.mul(a, self.add(a, m)), n);
                self.legendre(v as i64) as i64
            })
            .sum()
    }

    /// Closed form of [`quad_legendre_sum`](Self::quad_legendre_sum):
    /// `p - 1` when `p | m^2 - 4n`, otherwise `-1`.
    pub fn quad_legendre_closed_form(&self, m: u32, n: u32) -> i64 {
        let disc = self.sub(self.mul(m, m), self.mul(4, n));
        if disc == 0 {
            self.p as i64 - 1
        } else {
            -1
        }
    }

    /// Iterator over `F_p^×` as residues `1..p`.
    pub fn units(&self) -> std::ops::Range<u32> {
        1..self.p
    }
}

/// Free-function form of [`PrimeContext::new`].
pub fn build_context(p: u64) -> Result<PrimeContext, FpError> {
    PrimeContext::new(p)
}

/// Free-function form of [`PrimeContext::mod_inv`].
pub fn mod_inv(ctx: &PrimeContext, a: u32) -> u32 {
    ctx.mod_inv(a)
}

/// Free-function form of [`PrimeContext::legendre`].
pub fn legendre(ctx: &PrimeContext, a: i64) -> i32 {
    ctx.legendre(a)
}
