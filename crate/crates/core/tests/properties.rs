use num_complex::Complex64;
use proptest::prelude::*;

use aolab::algebraic;
use aolab::criteria;
use aolab::generators::{self, Extra, InstanceSpec, Kind};
use aolab::random;
use aolab::spectrum::{self, operator_norm};
use aolab::stability;
use aolab::CMatrix;

fn gaussian(seed: u64, dim: usize) -> CMatrix {
    random::gaussian_matrix(&mut random::rng(seed), dim, dim)
}

fn spec(kind: Kind, dim: usize, seed: u64) -> InstanceSpec {
    InstanceSpec { kind, dim, eigenvalues: vec![], seed, extra: Extra::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operator_norm_is_unitarily_invariant(seed in any::<u64>(), dim in 1usize..=8) {
        let a = gaussian(seed, dim);
        let mut rng = random::rng(seed ^ 1);
        let (u, v) = (random::unitary(&mut rng, dim), random::unitary(&mut rng, dim));
        let n = operator_norm(&a).unwrap();
        prop_assert!((operator_norm(&u.matmul(&a).matmul(&v)).unwrap() - n).abs() <= 1e-10 * n.max(1.0));
    }

    #[test]
    fn spectral_radius_is_at_most_the_norm(seed in any::<u64>(), dim in 1usize..=8) {
        let a = gaussian(seed, dim);
        let s = spectrum::spectrum(&a).unwrap();
        prop_assert!(s.spectral_radius <= operator_norm(&a).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn rank_plus_nullity_is_dim(seed in any::<u64>(), dim in 1usize..=8, r in 0usize..=8) {
        let r = r.min(dim);
        let mut rng = random::rng(seed);
        let a = random::gaussian_matrix(&mut rng, dim, r).matmul(&random::gaussian_matrix(&mut rng, r, dim));
        let rank = spectrum::rank(&a, 0.0).unwrap();
        prop_assert_eq!(rank, r);
        prop_assert_eq!(rank + spectrum::nullity(&a).unwrap(), dim);
    }

    #[test]
    fn upper_triangular_spectrum_is_the_diagonal(seed in any::<u64>(), dim in 1usize..=6) {
        let mut rng = random::rng(seed);
        let diag = random::unimodular_set(&mut rng, dim, 0.3);
        let mut a = random::gaussian_matrix(&mut rng, dim, dim);
        for i in 0..dim {
            for j in 0..i {
                a[(i, j)] = Complex64::new(0.0, 0.0);
            }
            a[(i, i)] = diag[i] * 0.8;
        }
        let s = spectrum::spectrum(&a).unwrap();
        prop_assert_eq!(s.eigenvalues.len(), dim);
        for z in &diag {
            prop_assert!(s.values().any(|w| (w - z * 0.8).norm() <= 1e-8));
        }
    }

    #[test]
    fn planted_decompositions_round_trip(seed in any::<u64>(), dim in 1usize..=8) {
        let p = generators::gen_planted_jordan(dim, None, 100.0, seed).unwrap();
        let a = &p.matrix;
        let (mp, d) = algebraic::analyze(a).unwrap();
        prop_assert!(mp.degree <= dim);
        let sum = d.blocks.iter().fold(CMatrix::zeros(dim, dim), |acc, b| &acc + &a.matmul(&b.projection));
        prop_assert!((&sum - a).frobenius_norm() <= 1e-8 * operator_norm(a).unwrap());
        prop_assert_eq!(mp.degree, p.roots.iter().map(|r| r.index).sum::<usize>());
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), dim in 3usize..=6, k in 0usize..6) {
        let s = spec(Kind::ALL[k], dim, seed);
        prop_assert_eq!(generators::generate(&s).unwrap(), generators::generate(&s).unwrap());
    }

    #[test]
    fn root_limit_never_exceeds_the_spectral_radius(seed in any::<u64>(), dim in 1usize..=6) {
        let p = generators::gen_planted_jordan(dim, None, 100.0, seed).unwrap();
        let (mp, d) = algebraic::analyze(&p.matrix).unwrap();
        let h = random::unit_vector(&mut random::rng(seed ^ 2), dim);
        let r = stability::orbit_root_limit_from(&p.matrix, &d, &h, 2000).unwrap();
        prop_assert!(r.empirical <= mp.spectral_radius() + 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Each generator delivers the structure it advertises.
    #[test]
    fn generators_meet_their_predicates(seed in any::<u64>(), dim in 3usize..=6) {
        let u = generators::generate(&spec(Kind::UnitaryFiniteSpectrum, dim, seed)).unwrap();
        prop_assert!(criteria::is_unitary(&u));

        let mut s = spec(Kind::ObliqueDiagonalizable, dim, seed);
        s.extra.require_oblique = true;
        let o = generators::generate(&s).unwrap();
        prop_assert!(!criteria::is_unitary(&o));
        prop_assert!(criteria::is_power_bounded(&o).unwrap());

        let j = generators::generate(&spec(Kind::JordanPerturbation, dim, seed)).unwrap();
        prop_assert!(!criteria::is_power_bounded(&j).unwrap());

        let n = generators::generate(&spec(Kind::NormaloidNonnormal, dim, seed)).unwrap();
        prop_assert!(criteria::is_normaloid(&n));
        let comm = &n.adjoint().matmul(&n) - &n.matmul(&n.adjoint());
        prop_assert!(comm.frobenius_norm() > 1e-6);
    }

    /// A mixing probe `h_k + h_l` converges only when `<h_k, h_l> = 0`.
    #[test]
    fn mixing_probes_detect_oblique_pairs(seed in any::<u64>(), dim in 2usize..=6, oblique in any::<bool>()) {
        let mut s = spec(if oblique { Kind::ObliqueDiagonalizable } else { Kind::UnitaryFiniteSpectrum }, dim, seed);
        s.extra.require_oblique = oblique;
        let a = generators::generate(&s).unwrap();
        let (_, d) = algebraic::analyze(&a).unwrap();
        for k in 0..d.blocks.len() {
            for l in k + 1..d.blocks.len() {
                let (hk, hl) = (d.blocks[k].basis.column(0), d.blocks[l].basis.column(0));
                let rec = criteria::orbit_analyze(&a, &(&hk + &hl), 2000).unwrap();
                if rec.classification.is_convergent() {
                    prop_assert!(hk.inner(&hl).norm() <= 1e-6);
                }
            }
        }
    }
}
