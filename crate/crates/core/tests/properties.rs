use approx::assert_relative_eq;
use charmean_core::combinatorics::s_census;
use charmean_core::csum::{h_sum, second_moment_m, CompensatedSum, ComplexAccumulator};
use charmean_core::fp::is_prime;
use charmean_core::{enumerate_characters, DirichletCharacter, PrimeContext};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select((5u64..200).filter(|&n| is_prime(n)).collect::<Vec<_>>())
}

fn tol(rhs: f64) -> f64 {
    f64::max(1e-6, 1e-9 * rhs.abs())
}

proptest! {
    #[test]
    fn inverse_is_an_involution(p in small_prime(), a in 1u32..10_000) {
        let ctx = PrimeContext::new(p).unwrap();
        let a = a % ctx.p();
        prop_assume!(a != 0);
        let ai = ctx.mod_inv(a);
        prop_assert_eq!(ctx.mul(a, ai), 1);
        prop_assert_eq!(ctx.mod_inv(ai), a);
    }

    #[test]
    fn legendre_is_multiplicative(p in small_prime(), a in -5000i64..5000, b in -5000i64..5000) {
        let ctx = PrimeContext::new(p).unwrap();
        prop_assert_eq!(ctx.legendre(a * b), ctx.legendre(a) * ctx.legendre(b));
        prop_assert_eq!(ctx.legendre(a), ctx.euler_criterion(a));
    }

    #[test]
    fn legendre_is_balanced(p in small_prime()) {
        let ctx = PrimeContext::new(p).unwrap();
        let s: i32 = ctx.units().map(|a| ctx.legendre(a as i64)).sum();
        prop_assert_eq!(s, 0);
    }

    #[test]
    fn characters_are_multiplicative(p in small_prime(), j in 0u32..1000, a in 1u32..1000, b in 1u32..1000) {
        let ctx = PrimeContext::new(p).unwrap();
        let chi = DirichletCharacter::new(&ctx, j % ctx.group_order());
        let (a, b) = (a % ctx.p(), b % ctx.p());
        let lhs = chi.eval(&ctx, ctx.mul(a, b));
        let rhs = chi.eval(&ctx, a) * chi.eval(&ctx, b);
        prop_assert!((lhs - rhs).norm() < 1e-12);
        if a != 0 {
            prop_assert!((chi.eval(&ctx, a).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonality_over_the_group(p in small_prime(), j in 0u32..1000, s in 0u32..1000) {
        let ctx = PrimeContext::new(p).unwrap();
        let q = ctx.group_order();
        let (chi, psi) = (DirichletCharacter::new(&ctx, j % q), DirichletCharacter::new(&ctx, s % q));
        let sum: ComplexAccumulator = ctx.units().map(|a| chi.eval(&ctx, a) * psi.eval(&ctx, a).conj()).collect();
        let want = if chi == psi { q as f64 } else { 0.0 };
        prop_assert!((sum.value() - want).norm() < 1e-9);
    }

    #[test]
    fn accumulator_cancels_its_negation(xs in prop::collection::vec(-1e12f64..1e12, 1..200)) {
        let s: CompensatedSum = xs.iter().copied().chain(xs.iter().map(|x| -x)).collect();
        prop_assert_eq!(s.value(), 0.0);
    }

    #[test]
    fn h_sum_conjugation(p in small_prime(), j in 0u32..1000, m in 1u32..1000, n in 1u32..1000, k in 1u32..1000) {
        prop_assume!(p <= 97);
        let ctx = PrimeContext::new(p).unwrap();
        let chi = DirichletCharacter::new(&ctx, j % ctx.group_order());
        let (m, n, k) = (m % ctx.p(), n % ctx.p(), k % ctx.p());
        prop_assume!(m != 0 && n != 0 && k != 0);
        let h = h_sum(&ctx, &chi, m, n, k);
        let mirrored = h_sum(&ctx, &chi.conj(), m, n, ctx.p() - k);
        prop_assert!((h.conj() - mirrored).norm() < 1e-9);
    }

    #[test]
    fn second_moment_ignores_n_and_k(p in small_prime(), j in 0u32..1000, n in 1u32..1000, k in 1u32..1000) {
        prop_assume!(p <= 61);
        let ctx = PrimeContext::new(p).unwrap();
        let chi = DirichletCharacter::new(&ctx, j % ctx.group_order());
        let (n, k) = (n % ctx.p(), k % ctx.p());
        prop_assume!(n != 0 && k != 0);
        let base = second_moment_m(&ctx, &chi, 1, 1).unwrap();
        let other = second_moment_m(&ctx, &chi, n, k).unwrap();
        prop_assert!((base - other).abs() <= tol(base));
    }
}

#[test]
fn conjugate_characters_reindex() {
    for p in [5u64, 7, 11, 13, 17] {
        let ctx = PrimeContext::new(p).unwrap();
        let q = ctx.group_order();
        for chi in enumerate_characters(&ctx) {
            assert_eq!(chi.conj().exponent(), (q - chi.exponent()) % q);
            for a in ctx.units() {
                let d = chi.conj().eval(&ctx, a) - chi.eval(&ctx, a).conj();
                assert!(d.norm() < 1e-12);
            }
        }
    }
}

#[test]
fn census_sums() {
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let ctx = PrimeContext::new(p).unwrap();
        let census = s_census(&ctx);
        // (u, a) pairs with a != 1 and u not in {a, a^{-1}}, less those with value 0
        let total: u64 = census.iter().sum();
        let squares: u64 = census.iter().map(|s| s * s).sum();
        assert_eq!(squares, p.pow(3) + 29 * p - 8 * p * p - 53, "p={p}");
        assert!(total <= (p - 1) * (p - 2));
    }
}

#[test]
fn accumulator_beats_naive_summation() {
    let xs = [1e16, 1.0, -1e16, 1.0];
    let s: CompensatedSum = xs.iter().copied().collect();
    assert_relative_eq!(s.value(), 2.0);
    let z: ComplexAccumulator = xs.iter().map(|&x| Complex64::new(x, -x)).collect();
    assert_relative_eq!(z.value().re, 2.0);
    assert_relative_eq!(z.value().im, -2.0);
}
