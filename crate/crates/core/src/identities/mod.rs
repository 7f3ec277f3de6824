//! One verifier per statement. Each returns a [`VerificationRecord`] built
//! from a family of [`Comparison`]s: an independently computed left-hand side
//! against the closed-form right-hand side, plus any second route.
//!
//! Right-hand sides are exact integers wherever the statement allows it;
//! left-hand sides come from the compensated float sums in [`crate::csum`].
//! Branches (principal / Legendre / other) are picked from character flags.

mod record;
mod workspace;

use std::time::Instant;

use num_complex::Complex64;

pub use record::{summarize, Comparison, IdentityId, Status, Tolerance, UnknownIdentity, VerificationRecord};
pub use workspace::{TRoute, Workspace, DEFAULT_MAX_CUBIC_PRIME};

use crate::characters::DirichletCharacter;
use crate::combinatorics;
use crate::csum::{gauss_sum, kloosterman, twist_check, CompensatedSum, ComplexAccumulator};
use crate::error::SumError;

/// Runs one identity family at the workspace prime, timing it.
pub fn verify(ws: &Workspace, id: IdentityId) -> VerificationRecord {
    if id.is_cubic_integer() && !ws.cubic_allowed() {
        return VerificationRecord::skipped(
            id,
            ws.p(),
            ws.n(),
            ws.k(),
            format!("p > max-cubic-prime {}", ws.max_cubic_prime()),
        );
    }
    let start = Instant::now();
    let comparisons = comparisons_for(ws, id);
    let mut record = finish(ws, id, &comparisons);
    record.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

/// All comparisons making up one identity family.
pub fn comparisons_for(ws: &Workspace, id: IdentityId) -> Vec<Comparison> {
    match id {
        IdentityId::Th1 => th1_comparisons(ws),
        IdentityId::Th2 => th2_comparisons(ws),
        IdentityId::TDelta => t_route_comparisons(ws),
        IdentityId::PsiIdentity => psi_identity_comparisons(ws),
        IdentityId::Th2_1 => ws.characters().iter().map(|c| th2_1_comparison(ws, c)).collect(),
        IdentityId::L3_1SCount => s_census_comparisons(ws),
        IdentityId::U0Count => u0_comparisons(ws),
        IdentityId::L4_1 => ws
            .characters()
            .iter()
            .filter(|c| !c.is_principal())
            .map(|psi| l4_1_comparison(ws, psi))
            .collect(),
        IdentityId::C4_1 => vec![c4_1_comparison(ws)],
        IdentityId::L4_2 => l4_2_family(ws),
        IdentityId::L4_3A => l4_3a_comparisons(ws),
        IdentityId::L4_3B => l4_3b_comparisons(ws),
        IdentityId::QuadLeg => quad_leg_comparisons(ws),
        IdentityId::C4_2A => vec![c4_2a_comparison(ws)],
        IdentityId::C4_2B => vec![c4_2b_comparison(ws)],
        IdentityId::ZhangK4 => ws.characters().iter().map(|c| zhang_comparison(ws, c)).collect(),
        IdentityId::Eq1_1 => twist_comparisons(ws),
        IdentityId::GaussMag => gauss_mag_comparisons(ws),
    }
}

fn finish(ws: &Workspace, id: IdentityId, comparisons: &[Comparison]) -> VerificationRecord {
    summarize(id, ws.p(), ws.n(), ws.k(), ws.tolerance(), comparisons)
}

fn pi(ws: &Workspace) -> i64 {
    ws.p() as i64
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn chi_label(chi: &DirichletCharacter) -> String {
    format!("j={}", chi.exponent())
}

// ---- second moments over m, and their squares ----

/// `2p - 5` for the principal character, else `p(p - 3 - conj(chi)(-1))`.
pub fn th2_1_rhs(p: i64, chi: &DirichletCharacter) -> i64 {
    if chi.is_principal() {
        2 * p - 5
    } else {
        p * (p - 3 - chi.conj().parity() as i64)
    }
}

fn th2_1_comparison(ws: &Workspace, chi: &DirichletCharacter) -> Comparison {
    Comparison::float(
        chi_label(chi),
        ws.moments().second_moment(chi.exponent()),
        th2_1_rhs(pi(ws), chi) as f64,
    )
}

pub fn verify_th2_1(ws: &Workspace, chi: &DirichletCharacter) -> VerificationRecord {
    finish(ws, IdentityId::Th2_1, &[th2_1_comparison(ws, chi)])
}

/// `(p-1)(p^4 - 7p^3 + 17p^2 - 5p - 25)`.
pub fn th1_rhs(p: i64) -> i64 {
    (p - 1) * (p.pow(4) - 7 * p.pow(3) + 17 * p * p - 5 * p - 25)
}

/// `(2p-5)^2 + (p-3)/2 (p(p-4))^2 + (p-1)/2 (p(p-2))^2`.
pub fn th1_assembly(p: i64) -> i64 {
    (2 * p - 5).pow(2) + (p - 3) / 2 * (p * (p - 4)).pow(2) + (p - 1) / 2 * (p * (p - 2)).pow(2)
}

fn th1_lhs(ws: &Workspace) -> f64 {
    let m = ws.moments();
    ws.characters()
        .iter()
        .map(|chi| m.second_moment(chi.exponent()).powi(2))
        .collect::<CompensatedSum>()
        .value()
}

fn th1_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let p = pi(ws);
    let lhs = th1_lhs(ws);
    let weighted: i64 = ws.characters().iter().map(|chi| th2_1_rhs(p, chi).pow(2)).sum();
    vec![
        Comparison::float("direct", lhs, th1_rhs(p) as f64),
        Comparison::exact("assembly", th1_assembly(p), th1_rhs(p)),
        Comparison::float("direct vs per-character closed forms", lhs, weighted as f64),
    ]
}

pub fn verify_th1(ws: &Workspace) -> VerificationRecord {
    finish(ws, IdentityId::Th1, &th1_comparisons(ws))
}

// ---- fourth power mean ----

/// `(p-1)(p^2 - 10p + 37 + p T - T_L)`.
pub fn th2_rhs(p: i64, t: i64, t_l: i64) -> i64 {
    (p - 1) * (p * p - 10 * p + 37 + p * t - t_l)
}

fn th2_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let p = pi(ws);
    let (t, route) = ws.t_exact();
    let t_l = ws.t_l();
    let rhs = th2_rhs(p, t, t_l);
    let m = ws.moments();
    let direct = ws
        .characters()
        .iter()
        .map(|chi| m.fourth_moment(chi.exponent()))
        .collect::<CompensatedSum>()
        .value();
    // (p-1) sum_chi sum_m |H|^4 = sum_chi sum_psi |sum_m psi(m)|H|^2|^2
    let w = ws.weighted();
    let q = ws.ctx().group_order();
    let via_psi = (0..q)
        .flat_map(|j| (0..q).map(move |s| w.get(j, s).norm_sqr()))
        .collect::<CompensatedSum>()
        .value()
        / (p - 1) as f64;
    let route_label = match route {
        TRoute::Direct => "T direct",
        TRoute::Delta => "T via Delta",
    };
    let assembled = th1_rhs(p) + c4_1_rhs(p) + c4_2a_rhs(p, ws.legendre_minus_one(), t_l)
        + c4_2b_rhs(p, ws.legendre_minus_one(), t, t_l);
    vec![
        Comparison::float(format!("direct ({route_label})"), direct, rhs as f64),
        Comparison::float(format!("psi-expansion ({route_label})"), via_psi, rhs as f64),
        Comparison::routes("direct vs psi-expansion", c(direct), c(via_psi)),
        Comparison::exact("assembly from corollaries", assembled, (p - 1) * rhs),
    ]
}

pub fn verify_th2(ws: &Workspace) -> VerificationRecord {
    finish(ws, IdentityId::Th2, &th2_comparisons(ws))
}

// ---- T(p) routes ----

fn t_route_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let ctx = ws.ctx();
    let p = pi(ws);
    let direct = combinatorics::t_direct(ctx);
    let via_delta = combinatorics::t_via_delta(ctx);
    let u = combinatorics::u_count(ctx) as i64;
    let u0 = combinatorics::u0_count(ctx).count as i64;
    let u_closed = 2 * p * p - 6 * p + 5 - ctx.legendre(2) as i64 + combinatorics::delta_legendre_sum(ctx);
    vec![
        Comparison::exact("direct vs Delta formula", direct, via_delta),
        Comparison::exact("|U|-|U0| vs Delta formula", u - u0, via_delta),
        Comparison::exact("|U| closed form", u, u_closed),
    ]
}

// ---- psi identity and the S(N) census ----

/// `(p-1)(p^3 - 8p^2 + 29p - 53)`.
pub fn psi_identity_rhs(p: i64) -> i64 {
    (p - 1) * (p.pow(3) - 8 * p * p + 29 * p - 53)
}

/// `sum_psi |sum_{u,a} conj(psi)(ua-1) psi(u/a-1) psi^2(a-1)|^2`, literally.
pub fn psi_identity_float(ws: &Workspace) -> f64 {
    ws.characters()
        .iter()
        .map(|psi| {
            ws.psi_triple_rows(psi)
                .into_iter()
                .collect::<ComplexAccumulator>()
                .norm_sqr()
        })
        .collect::<CompensatedSum>()
        .value()
}

/// `(p-1) sum_N |S(N)|^2` from the exact census.
pub fn psi_identity_census(ws: &Workspace) -> i64 {
    let counts = combinatorics::s_census(ws.ctx());
    (pi(ws) - 1) * counts.iter().map(|&c| (c * c) as i64).sum::<i64>()
}

fn psi_identity_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let p = pi(ws);
    let rhs = psi_identity_rhs(p);
    let float = psi_identity_float(ws);
    let census = psi_identity_census(ws);
    let classes = (p - 1)
        * ((p - 5).pow(2) + (2 * p - 7).pow(2) + (p - 5) / 2 * (p - 7).pow(2) + (p - 1) / 2 * (p - 3).pow(2));
    vec![
        Comparison::float("character sum", float, rhs as f64),
        Comparison::exact("census", census, rhs),
        Comparison::exact("class-count expansion", classes, rhs),
        Comparison::routes("character sum vs census", c(float), c(census as f64)),
    ]
}

pub fn verify_psi_identity(ws: &Workspace) -> VerificationRecord {
    finish(ws, IdentityId::PsiIdentity, &psi_identity_comparisons(ws))
}

fn s_census_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let ctx = ws.ctx();
    let mut out = Vec::new();
    for n in ctx.units() {
        let direct = combinatorics::s_set_direct(ctx, n);
        let lemma = combinatorics::s_set_via_lemma(ctx, n);
        let sym_diff = direct
            .members
            .iter()
            .filter(|m| lemma.members.binary_search(m).is_err())
            .count()
            + lemma
                .members
                .iter()
                .filter(|m| direct.members.binary_search(m).is_err())
                .count();
        out.push(Comparison::exact(
            format!("|S({n})|"),
            direct.cardinality() as i64,
            combinatorics::s_class_count(ctx, n),
        ));
        out.push(Comparison::exact(format!("S({n}) vs lemma set, symmetric difference"), sym_diff as i64, 0));
    }
    out
}

fn u0_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let census = combinatorics::u0_count(ws.ctx());
    vec![
        Comparison::exact("|U0|", census.count as i64, 9 * pi(ws) - 20),
        Comparison::exact("members outside the nine families", census.unmatched as i64, 0),
    ]
}

// ---- weighted moments at the principal character ----

/// `psi(-n k^2) (p - 4)` for the Legendre symbol, else
/// `psi(-n k^2) tau(conj(psi)^2) (2 + psi(4))`.
pub fn l4_1_rhs(ws: &Workspace, psi: &DirichletCharacter) -> Complex64 {
    let ctx = ws.ctx();
    let twist = psi.eval(ctx, ctx.neg(ctx.mul(ws.n(), ctx.mul(ws.k(), ws.k()))));
    if psi.is_legendre() {
        twist * (pi(ws) - 4) as f64
    } else {
        twist * ws.tau_of(&psi.conj().pow(2)) * (c(2.0) + psi.eval(ctx, 4 % ctx.p()))
    }
}

fn l4_1_comparison(ws: &Workspace, psi: &DirichletCharacter) -> Comparison {
    Comparison::complex(
        format!("psi {}", chi_label(psi)),
        ws.weighted().get(0, psi.exponent()),
        l4_1_rhs(ws, psi),
    )
}

pub fn verify_l4_1(ws: &Workspace, psi: &DirichletCharacter) -> Result<VerificationRecord, SumError> {
    if psi.is_principal() {
        return Err(SumError::PrincipalCharacter);
    }
    Ok(finish(ws, IdentityId::L4_1, &[l4_1_comparison(ws, psi)]))
}

pub fn c4_1_rhs(p: i64) -> i64 {
    6 * p * p - 31 * p + 16
}

fn c4_1_comparison(ws: &Workspace) -> Comparison {
    let w = ws.weighted();
    let lhs = (1..ws.ctx().group_order())
        .map(|s| w.get(0, s).norm_sqr())
        .collect::<CompensatedSum>()
        .value();
    Comparison::float("sum over psi != chi0", lhs, c4_1_rhs(pi(ws)) as f64)
}

pub fn verify_c4_1(ws: &Workspace) -> VerificationRecord {
    finish(ws, IdentityId::C4_1, &[c4_1_comparison(ws)])
}

// ---- weighted moments at nonprincipal characters ----

/// Per-`psi` data for the two independent right-hand sides of `L4_2`.
struct L42Rows {
    psi: DirichletCharacter,
    prefactor: Complex64,
    /// Branch form: integer Legendre inner sums or the literal triple rows
    /// (already multiplied by `tau(conj(psi)^2)`).
    branch: Vec<Complex64>,
    /// Proof form: `sum_a conj(psi)(ua-1) psi(u/a-1) G(a-1, conj(psi)^2)`.
    gauss_form: Vec<Complex64>,
}

impl L42Rows {
    fn new(ws: &Workspace, psi: DirichletCharacter) -> Self {
        let ctx = ws.ctx();
        let p = ws.p();
        let conj = psi.conj();
        let conj_sq = conj.pow(2);
        let twist = psi.eval(ctx, ctx.mul(ws.n(), ctx.mul(ws.k(), ws.k())));
        let prefactor = twist * ws.tau_of(&psi) * ws.tau_of(&conj) / p as f64;

        let branch = if psi.is_legendre() {
            combinatorics::legendre_inner_sums_from_two(ctx)
                .into_iter()
                .map(|s| c(s as f64))
                .collect()
        } else {
            let scale = ws.tau_of(&conj_sq);
            ws.psi_triple_rows(&psi).into_iter().map(|z| z * scale).collect()
        };

        let gauss: Vec<Complex64> = (0..p).map(|t| gauss_sum(ctx, &conj_sq, t)).collect();
        let gauss_form = ctx
            .units()
            .map(|u| {
                ctx.units()
                    .map(|a| {
                        conj.eval(ctx, ctx.sub(ctx.mul(u, a), 1))
                            * psi.eval(ctx, ctx.sub(ctx.mul(u, ctx.mod_inv(a)), 1))
                            * gauss[ctx.sub(a, 1) as usize]
                    })
                    .collect::<ComplexAccumulator>()
                    .value()
            })
            .collect();
        Self { psi, prefactor, branch, gauss_form }
    }

    fn twisted(ws: &Workspace, chi: &DirichletCharacter, rows: &[Complex64]) -> Complex64 {
        let ctx = ws.ctx();
        let conj = chi.conj();
        ctx.units()
            .zip(rows)
            .map(|(u, &r)| conj.eval(ctx, u) * r)
            .collect::<ComplexAccumulator>()
            .value()
    }

    fn rhs(&self, ws: &Workspace, chi: &DirichletCharacter) -> Complex64 {
        let inner = Self::twisted(ws, chi, &self.branch);
        if self.psi.is_legendre() {
            self.prefactor * (c(-((ws.p() - 1) as f64)) - inner)
        } else {
            self.prefactor * inner
        }
    }

    fn gauss_route(&self, ws: &Workspace, chi: &DirichletCharacter) -> Complex64 {
        self.prefactor * Self::twisted(ws, chi, &self.gauss_form)
    }

    fn comparisons(&self, ws: &Workspace, chi: &DirichletCharacter) -> [Comparison; 3] {
        let label = format!("chi {}, psi {}", chi_label(chi), chi_label(&self.psi));
        let lhs = ws.weighted().get(chi.exponent(), self.psi.exponent());
        let rhs = self.rhs(ws, chi);
        let second = self.gauss_route(ws, chi);
        [
            Comparison::complex(label.clone(), lhs, rhs),
            Comparison::complex(format!("{label}, Gauss-sum form"), lhs, second),
            Comparison::routes(format!("{label}, branch vs Gauss-sum form"), rhs, second),
        ]
    }
}

fn l4_2_family(ws: &Workspace) -> Vec<Comparison> {
    let mut out = Vec::new();
    for psi in ws.characters().iter().filter(|c| !c.is_principal()) {
        let rows = L42Rows::new(ws, *psi);
        for chi in ws.characters().iter().filter(|c| !c.is_principal()) {
            out.extend(rows.comparisons(ws, chi));
        }
    }
    out
}

pub fn verify_l4_2(
    ws: &Workspace,
    chi: &DirichletCharacter,
    psi: &DirichletCharacter,
) -> Result<VerificationRecord, SumError> {
    if chi.is_principal() || psi.is_principal() {
        return Err(SumError::PrincipalCharacter);
    }
    let rows = L42Rows::new(ws, *psi);
    Ok(finish(ws, IdentityId::L4_2, &rows.comparisons(ws, chi)))
}

// ---- Legendre sums ----

fn l4_3a_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let ctx = ws.ctx();
    let closed = -(ctx.euler_criterion(-1) as i64);
    vec![Comparison::exact("sum_a ((a-1)(1/a-1)|p)", combinatorics::lemma43a(ctx), closed)]
}

fn l4_3b_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let ctx = ws.ctx();
    vec![
        Comparison::exact("double sum", combinatorics::lemma43b(ctx), 2),
        Comparison::exact("via quadratic sums", combinatorics::lemma43b_via_quadratic(ctx), 2),
    ]
}

fn quad_leg_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let ctx = ws.ctx();
    let mut out = Vec::with_capacity((ctx.p() * ctx.p()) as usize);
    for m in 0..ctx.p() {
        for n in 0..ctx.p() {
            out.push(Comparison::exact(
                format!("m={m}, n={n}"),
                ctx.quad_legendre_sum(m, n),
                ctx.quad_legendre_closed_form(m, n),
            ));
        }
    }
    out
}

// ---- summed weighted moments, real and complex psi ----

/// `(p^3 - 2p^2 - 4p - 4) - 2p(p-1)(-1|p) + (p-1) T_L`.
pub fn c4_2a_rhs(p: i64, leg_minus_one: i64, t_l: i64) -> i64 {
    (p.pow(3) - 2 * p * p - 4 * p - 4) - 2 * p * (p - 1) * leg_minus_one + (p - 1) * t_l
}

/// `-p(p^4 - 9p^3 + 37p^2 - 76p + 29) + 2p(p-1)(-1|p) - p(p-1) T_L + p(p-1)^2 T`.
pub fn c4_2b_rhs(p: i64, leg_minus_one: i64, t: i64, t_l: i64) -> i64 {
    -p * (p.pow(4) - 9 * p.pow(3) + 37 * p * p - 76 * p + 29) + 2 * p * (p - 1) * leg_minus_one
        - p * (p - 1) * t_l
        + p * (p - 1).pow(2) * t
}

fn c4_2a_comparison(ws: &Workspace) -> Comparison {
    let w = ws.weighted();
    let legendre = ws.legendre_index();
    let lhs = (1..ws.ctx().group_order())
        .map(|j| w.get(j, legendre).norm_sqr())
        .collect::<CompensatedSum>()
        .value();
    let rhs = c4_2a_rhs(pi(ws), ws.legendre_minus_one(), ws.t_l());
    Comparison::float("sum over chi != chi0, psi = Legendre", lhs, rhs as f64)
}

pub fn verify_c4_2a(ws: &Workspace) -> VerificationRecord {
    finish(ws, IdentityId::C4_2A, &[c4_2a_comparison(ws)])
}

fn c4_2b_comparison(ws: &Workspace) -> Comparison {
    let w = ws.weighted();
    let q = ws.ctx().group_order();
    let legendre = ws.legendre_index();
    let lhs = (1..q)
        .flat_map(|j| (1..q).filter(move |&s| s != legendre).map(move |s| (j, s)))
        .map(|(j, s)| w.get(j, s).norm_sqr())
        .collect::<CompensatedSum>()
        .value();
    let (t, _) = ws.t_exact();
    let rhs = c4_2b_rhs(pi(ws), ws.legendre_minus_one(), t, ws.t_l());
    Comparison::float("sum over chi != chi0, psi not real", lhs, rhs as f64)
}

pub fn verify_c4_2b(ws: &Workspace) -> VerificationRecord {
    finish(ws, IdentityId::C4_2B, &[c4_2b_comparison(ws)])
}

// ---- Kloosterman fourth power mean ----

/// `2p^3 - 3p^2 - 3p - 1`, `3p^3 - 8p^2`, or `p^2(2p - 7)` by branch.
pub fn zhang_rhs(p: i64, chi: &DirichletCharacter) -> i64 {
    if chi.is_principal() {
        2 * p.pow(3) - 3 * p * p - 3 * p - 1
    } else if chi.is_legendre() {
        3 * p.pow(3) - 8 * p * p
    } else {
        p * p * (2 * p - 7)
    }
}

/// `sum_{m=1}^{p-1} |K(m, n, chi; p)|^4`.
pub fn kloosterman_fourth_moment(ws: &Workspace, chi: &DirichletCharacter) -> f64 {
    let ctx = ws.ctx();
    ctx.units()
        .map(|m| kloosterman(ctx, chi, m, ws.n()).norm_sqr().powi(2))
        .collect::<CompensatedSum>()
        .value()
}

fn zhang_comparison(ws: &Workspace, chi: &DirichletCharacter) -> Comparison {
    Comparison::float(
        chi_label(chi),
        kloosterman_fourth_moment(ws, chi),
        zhang_rhs(pi(ws), chi) as f64,
    )
}

pub fn verify_zhang_k4(ws: &Workspace, chi: &DirichletCharacter) -> VerificationRecord {
    finish(ws, IdentityId::ZhangK4, &[zhang_comparison(ws, chi)])
}

// ---- Gauss sum properties ----

fn twist_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let ctx = ws.ctx();
    let mut out = Vec::new();
    for chi in ws.characters() {
        for n in ctx.units() {
            let (lhs, rhs) = twist_check(ctx, chi, n).expect("n is a unit");
            out.push(Comparison::complex(format!("{}, n={n}", chi_label(chi)), lhs, rhs));
        }
    }
    out
}

fn gauss_mag_comparisons(ws: &Workspace) -> Vec<Comparison> {
    let root_p = (ws.p() as f64).sqrt();
    ws.characters()
        .iter()
        .filter(|c| !c.is_principal())
        .map(|chi| Comparison::float(chi_label(chi), ws.tau_of(chi).norm(), root_p))
        .collect()
}
