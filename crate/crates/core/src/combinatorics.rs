//! Exact counting behind the fourth power mean: the sets `S(N)`, `U`, `U_0`,
//! the quadratic congruence in `u` with discriminant `Delta(a, b)`, and the
//! integers `T(p)` (three independent routes) and `T_L(p)`.
//!
//! Integer arithmetic only. These values are the exact oracle layer for the
//! floating-point verifiers.

use crate::fp::PrimeContext;

/// Members of `S(N)` as a sorted list of `(u, a)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCensus {
    pub n: u32,
    pub members: Vec<(u32, u32)>,
}

impl SetCensus {
    fn from_members(n: u32, mut members: Vec<(u32, u32)>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { n, members }
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }
}

/// `(u a - 1)^{-1} (u a^{-1} - 1) (a - 1)^2`, with `0^{-1} = 0`.
#[inline]
fn s_value(ctx: &PrimeContext, u: u32, a: u32) -> u32 {
    let ua1 = ctx.sub(ctx.mul(u, a), 1);
    let uai1 = ctx.sub(ctx.mul(u, ctx.mod_inv(a)), 1);
    let a1 = ctx.sub(a, 1);
    ctx.mul(ctx.mul(ctx.mod_inv(ua1), uai1), ctx.mul(a1, a1))
}

#[inline]
fn s_admissible(ctx: &PrimeContext, u: u32, a: u32) -> bool {
    a != 1 && u != a && u != ctx.mod_inv(a)
}

/// `S(N)` by exhaustive scan of `F_p^× x (F_p^× \ {1})`.
pub fn s_set_direct(ctx: &PrimeContext, n: u32) -> SetCensus {
    let mut members = Vec::new();
    for u in ctx.units() {
        for a in 2..ctx.p() {
            if s_admissible(ctx, u, a) && s_value(ctx, u, a) == n {
                members.push((u, a));
            }
        }
    }
    SetCensus::from_members(n, members)
}

/// `S(N)` from the closed-form solution in `u` for each `a` not in `{0, ±1}`,
/// plus the extra line `{(u, -1) : u != -1}` when `N = 4`.
pub fn s_set_via_lemma(ctx: &PrimeContext, n: u32) -> SetCensus {
    let minus_one = ctx.p() - 1;
    let mut members = Vec::new();
    for a in 2..minus_one {
        let a1 = ctx.sub(a, 1);
        let a1_sq = ctx.mul(a1, a1);
        let ai1 = ctx.sub(ctx.mod_inv(a), 1);
        if a1_sq == n || ctx.mul(ai1, ai1) == n {
            continue;
        }
        let numerator = ctx.sub(a1_sq, n);
        let denominator = ctx.sub(ctx.mul(a1_sq, ctx.mod_inv(a)), ctx.mul(a, n));
        let u = ctx.mul(numerator, ctx.mod_inv(denominator));
        if u != 0 {
            members.push((u, a));
        }
    }
    if n == 4 % ctx.p() {
        members.extend((1..minus_one).map(|u| (u, minus_one)));
    }
    SetCensus::from_members(n, members)
}

/// `|S(N)|` for every `N` in one pass; index 0 is unused.
pub fn s_census(ctx: &PrimeContext) -> Vec<u64> {
    let mut counts = vec![0u64; ctx.p() as usize];
    for u in ctx.units() {
        for a in 2..ctx.p() {
            if s_admissible(ctx, u, a) {
                let v = s_value(ctx, u, a);
                if v != 0 {
                    counts[v as usize] += 1;
                }
            }
        }
    }
    counts[0] = 0;
    counts
}

/// Class count for `|S(N)|`: `p-5` (N=1), `2p-7` (N=4), `p-7` (other
/// residues), `p-3` (non-residues).
pub fn s_class_count(ctx: &PrimeContext, n: u32) -> i64 {
    let p = ctx.p() as i64;
    if n == 1 {
        p - 5
    } else if n == 4 % ctx.p() {
        2 * p - 7
    } else if ctx.legendre(n as i64) == 1 {
        p - 7
    } else {
        p - 3
    }
}

/// A point `(u, a, b)` of `(F_p^×)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CongruenceTriple {
    pub u: u32,
    pub a: u32,
    pub b: u32,
}

impl CongruenceTriple {
    pub fn new(u: u32, a: u32, b: u32) -> Self {
        Self { u, a, b }
    }

    /// `((u a - 1)(u b^{-1} - 1)(b - 1)^2, (u b - 1)(u a^{-1} - 1)(a - 1)^2)`.
    pub fn sides(&self, ctx: &PrimeContext) -> (u32, u32) {
        let Self { u, a, b } = *self;
        let left = ctx.mul(
            ctx.mul(ctx.sub(ctx.mul(u, a), 1), ctx.sub(ctx.mul(u, ctx.mod_inv(b)), 1)),
            ctx.mul(ctx.sub(b, 1), ctx.sub(b, 1)),
        );
        let right = ctx.mul(
            ctx.mul(ctx.sub(ctx.mul(u, b), 1), ctx.sub(ctx.mul(u, ctx.mod_inv(a)), 1)),
            ctx.mul(ctx.sub(a, 1), ctx.sub(a, 1)),
        );
        (left, right)
    }

    pub fn in_u(&self, ctx: &PrimeContext) -> bool {
        let (l, r) = self.sides(ctx);
        l == r
    }

    pub fn in_u0(&self, ctx: &PrimeContext) -> bool {
        self.sides(ctx) == (0, 0)
    }

    /// Which of the nine parametric families of `U_0` this triple belongs to:
    /// `(1,1,n) (n,1,n) (n,1,1) (1,n,1) (n,n,1) (-1,-1,n) (-1,n,-1) (n,n,n)
    /// (n,n^{-1},n^{-1})`, by position in that list.
    pub fn u0_family(&self, ctx: &PrimeContext) -> Option<usize> {
        let Self { u, a, b } = *self;
        let m1 = ctx.p() - 1;
        let ui = ctx.mod_inv(u);
        [
            u == 1 && a == 1,
            a == 1 && u == b,
            a == 1 && b == 1,
            u == 1 && b == 1,
            u == a && b == 1,
            u == m1 && a == m1,
            u == m1 && b == m1,
            u == a && a == b,
            a == ui && b == ui,
        ]
        .iter()
        .position(|&hit| hit)
    }
}

fn triples(ctx: &PrimeContext) -> impl Iterator<Item = CongruenceTriple> + '_ {
    ctx.units().flat_map(move |u| {
        ctx.units()
            .flat_map(move |a| ctx.units().map(move |b| CongruenceTriple::new(u, a, b)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct U0Census {
    pub count: u64,
    /// Members of `U_0` outside all nine parametric families.
    pub unmatched: u64,
}

/// Exhaustive count of `U_0`, with each member checked against the nine
/// parametric families.
pub fn u0_count(ctx: &PrimeContext) -> U0Census {
    let mut census = U0Census { count: 0, unmatched: 0 };
    for t in triples(ctx).filter(|t| t.in_u0(ctx)) {
        census.count += 1;
        if t.u0_family(ctx).is_none() {
            census.unmatched += 1;
        }
    }
    census
}

/// Exhaustive count of `U`.
pub fn u_count(ctx: &PrimeContext) -> u64 {
    triples(ctx).filter(|t| t.in_u(ctx)).count() as u64
}

/// `Delta(a, b) = (1 - a^2 b^2)^2 + 4ab(a + b - 2)(a + b - 2ab) mod p`.
pub fn delta(ctx: &PrimeContext, a: u32, b: u32) -> u32 {
    let ab = ctx.mul(a, b);
    let x = ctx.sub(1, ctx.mul(ab, ab));
    let s = ctx.add(a, b);
    let tail = ctx.mul(ctx.mul(4, ab), ctx.mul(ctx.sub(s, 2), ctx.sub(s, ctx.mul(2, ab))));
    ctx.add(ctx.mul(x, x), tail)
}

/// Discriminant of the quadratic in `u`, written from its coefficients:
/// `((1 + ab)(1 - ab))^2 - 4(a + b - 2ab) ab (2 - a - b)`.
pub fn delta_from_coefficients(ctx: &PrimeContext, a: u32, b: u32) -> u32 {
    let (lead, mid, constant) = quadratic_coefficients(ctx, a, b);
    ctx.sub(ctx.mul(mid, mid), ctx.mul(4, ctx.mul(lead, constant)))
}

/// `(a + b - 2ab, -(1 + ab)(1 - ab), ab(2 - a - b))`.
pub fn quadratic_coefficients(ctx: &PrimeContext, a: u32, b: u32) -> (u32, u32, u32) {
    let ab = ctx.mul(a, b);
    let s = ctx.add(a, b);
    let lead = ctx.sub(s, ctx.mul(2, ab));
    let mid = ctx.neg(ctx.mul(ctx.add(1, ab), ctx.sub(1, ab)));
    let constant = ctx.mul(ab, ctx.sub(2, s));
    (lead, mid, constant)
}

/// Number of `u` in `F_p` solving the quadratic congruence, by scan.
pub fn sol_count(ctx: &PrimeContext, a: u32, b: u32) -> u32 {
    let (lead, mid, constant) = quadratic_coefficients(ctx, a, b);
    (0..ctx.p())
        .filter(|&u| ctx.add(ctx.mul(ctx.add(ctx.mul(lead, u), mid), u), constant) == 0)
        .count() as u32
}

/// `T(p)` as the literal triple sum: triples where
/// `(a-1)^2(u a^{-1} - 1)(u b - 1) = (b-1)^2(u b^{-1} - 1)(u a - 1)` with the
/// common value nonzero.
pub fn t_direct(ctx: &PrimeContext) -> i64 {
    let mut total = 0i64;
    for u in ctx.units() {
        for a in ctx.units() {
            let a1 = ctx.sub(a, 1);
            let left_a = ctx.mul(ctx.mul(a1, a1), ctx.sub(ctx.mul(u, ctx.mod_inv(a)), 1));
            let right_a = ctx.sub(ctx.mul(u, a), 1);
            for b in ctx.units() {
                let b1 = ctx.sub(b, 1);
                let left = ctx.mul(left_a, ctx.sub(ctx.mul(u, b), 1));
                let right = ctx.mul(
                    ctx.mul(ctx.mul(b1, b1), ctx.sub(ctx.mul(u, ctx.mod_inv(b)), 1)),
                    right_a,
                );
                if left == right && left != 0 {
                    total += 1;
                }
            }
        }
    }
    total
}

/// Sum of `(Delta(a, b) | p)` over `a != b`, `a + b - 2ab != 0`.
pub fn delta_legendre_sum(ctx: &PrimeContext) -> i64 {
    let mut total = 0i64;
    for a in ctx.units() {
        for b in ctx.units() {
            if a == b || ctx.sub(ctx.add(a, b), ctx.mul(2, ctx.mul(a, b))) == 0 {
                continue;
            }
            total += ctx.legendre(delta(ctx, a, b) as i64) as i64;
        }
    }
    total
}

/// `T(p) = (p-5)(2p-5) - (2|p) + sum (Delta(a,b) | p)`. Quadratic cost.
pub fn t_via_delta(ctx: &PrimeContext) -> i64 {
    let p = ctx.p() as i64;
    (p - 5) * (2 * p - 5) - ctx.legendre(2) as i64 + delta_legendre_sum(ctx)
}

/// `T(p) = |U| - |U_0|`.
pub fn t_via_sets(ctx: &PrimeContext) -> i64 {
    u_count(ctx) as i64 - u0_count(ctx).count as i64
}

/// `sum_{a=1}^{p-1} ((u a - 1)(u a^{-1} - 1) | p)` for fixed `u`.
fn inner_legendre(ctx: &PrimeContext, u: u32, from: u32) -> i64 {
    (from..ctx.p())
        .map(|a| {
            let v = ctx.mul(ctx.sub(ctx.mul(u, a), 1), ctx.sub(ctx.mul(u, ctx.mod_inv(a)), 1));
            ctx.legendre(v as i64) as i64
        })
        .sum()
}

/// `T_L(p) = sum_u (sum_a ((u a - 1)(u a^{-1} - 1) | p))^2`.
pub fn t_l(ctx: &PrimeContext) -> i64 {
    ctx.units()
        .map(|u| {
            let s = inner_legendre(ctx, u, 1);
            s * s
        })
        .sum()
}

/// `sum_{a=2}^{p-1} ((u a - 1)(u a^{-1} - 1) | p)` for each `u` in `1..p`
/// (index `u - 1`).
pub fn legendre_inner_sums_from_two(ctx: &PrimeContext) -> Vec<i64> {
    ctx.units().map(|u| inner_legendre(ctx, u, 2)).collect()
}

/// `sum_{a=1}^{p-1} ((a - 1)(a^{-1} - 1) | p)`; equals `-(-1 | p)`.
pub fn lemma43a(ctx: &PrimeContext) -> i64 {
    inner_legendre(ctx, 1, 1)
}

/// `sum_u sum_a ((u a - 1)(u a^{-1} - 1) | p)`; equals 2.
pub fn lemma43b(ctx: &PrimeContext) -> i64 {
    ctx.units().map(|u| inner_legendre(ctx, u, 1)).sum()
}

/// The double sum of [`lemma43b`] rewritten as quadratic-polynomial sums in
/// `u` over all of `F_p`, minus the `u = 0` terms.
pub fn lemma43b_via_quadratic(ctx: &PrimeContext) -> i64 {
    let total: i64 = ctx
        .units()
        .map(|a| {
            let trace = ctx.add(a, ctx.mod_inv(a));
            ctx.quad_legendre_sum(ctx.neg(trace), 1)
        })
        .sum();
    total - (ctx.p() as i64 - 1)
}
