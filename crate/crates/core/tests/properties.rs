use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use sdof_core::alignment::{aligned_space, canonicalize};
use sdof_core::chansim::gaussian_channels;
use sdof_core::matcore::{self, gsvd};
use sdof_core::precoder::{construct, random_invertible, randomize, right_multiply};
use sdof_core::region::{self, AntennaConfig};
use sdof_core::verifier::{log2det_hpd, membership, rates, sdof_of};
use sdof_core::ComplexMatrix;

fn crandn(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

fn low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, r: usize) -> ComplexMatrix {
    crandn(rng, rows, r) * crandn(rng, r, cols)
}

fn config() -> impl Strategy<Value = AntennaConfig> {
    (1usize..=5, 1usize..=5, 1usize..=5, 1usize..=5, 1usize..=5)
        .prop_map(|(a, b, c, d, e)| AntennaConfig::new(a, b, c, d, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gsvd_blocks_reconstruct(seed: u64, n in 1usize..=9, m in 1usize..=9, k in 1usize..=9) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = crandn(&mut g, n, m);
        let b = crandn(&mut g, n, k);
        let out = gsvd(&a, &b).unwrap();
        prop_assert_eq!(out.r + out.s + out.p, out.k);
        prop_assert_eq!(out.k, (m + k).min(n));
        let scale = a.norm() + b.norm();
        prop_assert!((&a * out.psi13()).norm() <= 1e-10 * scale);
        prop_assert!((&b * out.psi21()).norm() <= 1e-10 * scale);
        prop_assert!((&a * out.psi11() - out.x1()).norm() <= 1e-10 * scale);
        prop_assert!((&b * out.psi23() - out.x3()).norm() <= 1e-10 * scale);
        prop_assert!((&a * out.shared_a() - &b * out.shared_b()).norm() <= 1e-10 * scale * (1.0 + out.x2().norm()));
        for (l1, l2) in out.lambda1.iter().zip(&out.lambda2) {
            prop_assert!((l1 * l1 + l2 * l2 - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn quotient_plus_intersection_is_rank(seed: u64, n in 1usize..=8, m in 1usize..=6, k in 1usize..=6, ra in 0usize..=6) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = low_rank(&mut g, n, m, ra.min(m).min(n));
        let b = crandn(&mut g, n, k);
        prop_assert_eq!(
            matcore::dim_quotient(&a, &b) + matcore::dim_intersection(&a, &b),
            matcore::rank(&a)
        );
    }

    #[test]
    fn rank_survives_invertible_factors(seed: u64, n in 1usize..=8, m in 1usize..=8, r in 0usize..=8) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let r = r.min(n).min(m);
        let a = low_rank(&mut g, n, m, r);
        let p = random_invertible(&mut g, n);
        let q = random_invertible(&mut g, m);
        prop_assert_eq!(matcore::rank(&a), r);
        prop_assert_eq!(matcore::rank(&(p * &a * q)), r);
    }

    #[test]
    fn null_basis_is_orthonormal_kernel(seed: u64, n in 1usize..=8, m in 1usize..=8, r in 0usize..=8) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = low_rank(&mut g, n, m, r.min(n).min(m));
        let z = matcore::null_basis(&a);
        prop_assert_eq!(z.ncols(), m - matcore::rank(&a));
        prop_assert!((&a * &z).norm() <= 1e-10 * a.norm().max(1.0));
        let gram = z.adjoint() * &z;
        prop_assert!((gram - ComplexMatrix::identity(z.ncols(), z.ncols())).norm() <= 1e-10);
    }

    #[test]
    fn aligned_pairs_match(seed: u64, n in 1usize..=7, m in 1usize..=7, k in 1usize..=7) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = crandn(&mut g, n, m);
        let b = crandn(&mut g, n, k);
        let sp = aligned_space(&a, &b).unwrap();
        let ys = crandn(&mut g, sp.shared_width, 2);
        let y1 = crandn(&mut g, sp.null_width_a(), 2);
        let y2 = crandn(&mut g, sp.null_width_b(), 2);
        let (v, w) = sp.pair(&ys, &y1, &y2);
        prop_assert!((&a * v - &b * w).norm() <= 1e-10 * (a.norm() + b.norm()) * (1.0 + ys.norm()));
        prop_assert_eq!(matcore::rank(&sp.phi1), sp.independent_count);
    }

    #[test]
    fn canonical_form_keeps_span(seed: u64, cols in 1usize..=3) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let g1 = crandn(&mut g, 4, 5);
        let g2 = crandn(&mut g, 4, 6);
        let sp = aligned_space(&g1, &g2).unwrap();
        let ys = crandn(&mut g, sp.shared_width, cols);
        let (v, w) = sp.pair(
            &ys,
            &crandn(&mut g, sp.null_width_a(), cols),
            &crandn(&mut g, sp.null_width_b(), cols),
        );
        let mixed = &w * random_invertible(&mut g, cols);
        let (v2, w2) = canonicalize(&v, &mixed, &g1, &g2).unwrap();
        prop_assert_eq!(&v2, &v);
        let lead = w2.columns(0, cols).into_owned();
        prop_assert!((&g1 * &v - &g2 * lead).norm() <= 1e-9 * (&g1 * &v).norm());
        prop_assert_eq!(matcore::dim_intersection(&w2, &w), matcore::rank(&w));
        prop_assert_eq!(matcore::rank(&w2), matcore::rank(&w));
    }

    #[test]
    fn boundary_constructions_hit_target(cfg in config(), seed: u64, pick: usize) {
        let reg = region::boundary(&cfg);
        prop_assume!(!reg.strict_boundary.is_empty());
        let t = reg.strict_boundary[pick % reg.strict_boundary.len()];
        let ch = gaussian_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(ch.is_full_rank());
        let pair = construct(&ch, t, 3.0).unwrap();
        prop_assert_eq!(sdof_of(&ch, &pair).unwrap(), t);
        let mem = membership(&ch, &pair).unwrap();
        prop_assert!(mem.in_i && mem.in_ibar && mem.in_ihat);
        let scaled_rank = |h: &ComplexMatrix, x: &ComplexMatrix| {
            matcore::rank_tol(&(h * x), Some(1e-9 * h.norm() * x.norm()))
        };
        let h11v = scaled_rank(&ch.h11, &pair.v_tx());
        let h12w = scaled_rank(&ch.h12, &pair.w_tx());
        prop_assert!(h11v + h12w <= cfg.nd1);
    }

    #[test]
    fn randomized_pairs_keep_sdof(cfg in config(), seed: u64) {
        let reg = region::boundary(&cfg);
        let t = reg.e1;
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let ch = gaussian_channels(&cfg, &mut g);
        prop_assume!(ch.is_full_rank());
        let pair = construct(&ch, t, 1.0).unwrap();
        let mixed = randomize(&pair, &mut g);
        prop_assert_eq!(sdof_of(&ch, &mixed).unwrap(), sdof_of(&ch, &pair).unwrap());
        prop_assert!(membership(&ch, &mixed).unwrap().in_ibar);
        let same = right_multiply(
            &pair,
            &ComplexMatrix::identity(pair.kv(), pair.kv()),
            &ComplexMatrix::identity(pair.kw(), pair.kw()),
        ).unwrap();
        prop_assert_eq!(same, pair);
    }

    #[test]
    fn rates_are_finite_and_user_two_nonnegative(cfg in config(), seed: u64, p in 0.1f64..1e4) {
        let reg = region::boundary(&cfg);
        let ch = gaussian_channels(&cfg, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(ch.is_full_rank());
        let pair = construct(&ch, reg.e2, p).unwrap();
        let r = rates(&ch, &pair).unwrap();
        prop_assert!(r.rd1.is_finite() && r.rd2.is_finite() && r.re.is_finite());
        prop_assert!(r.rs2() >= 0.0);
        prop_assert!(r.rd1 >= 0.0 && r.re >= 0.0);
    }

    #[test]
    fn logdet_of_shifted_gram_is_nonnegative(seed: u64, n in 1usize..=6, m in 0usize..=6) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let x = crandn(&mut g, n, m);
        let gram = &x * x.adjoint() + ComplexMatrix::identity(n, n);
        let ld = log2det_hpd(&gram).unwrap();
        prop_assert!(ld >= -1e-12);
        let direct = gram.determinant().re.log2();
        prop_assert!((ld - direct).abs() <= 1e-8 * direct.abs().max(1.0));
    }
}
