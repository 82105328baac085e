use std::f64::consts::PI;

use modvar::experiments::{comb_state, moment_deltas, GratingConfig};
use modvar::measurement::{weak_value, HermitianOp};
use modvar::modular::{ellipse_check, modular_momentum_distribution, parity_expectation};
use modvar::wavespace::{make_two_lump, translation_expectation, Grid, LumpSpec, PotentialSpec};
use modvar::C64;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::for_separation(1.0).unwrap()
}

fn lump() -> impl Strategy<Value = LumpSpec> {
    prop_oneof![
        (0.05..0.45f64).prop_map(|w| LumpSpec::bump(0.0, w)),
        (0.02..0.07f64).prop_map(|s| LumpSpec::gaussian(0.0, s)),
    ]
}

fn hermitian(dim: usize) -> impl Strategy<Value = DMatrix<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |v| {
        let m = DMatrix::from_iterator(dim, dim, v.into_iter().map(|(a, b)| C64::new(a, b)));
        (&m + m.adjoint()) * C64::new(0.5, 0.0)
    })
}

fn state(dim: usize) -> impl Strategy<Value = DVector<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim).prop_filter_map("zero vector", move |v| {
        let v = DVector::from_iterator(dim, v.into_iter().map(|(a, b)| C64::new(a, b)));
        let n = v.norm();
        (n > 1e-3).then(|| v / C64::new(n, 0.0))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_reads_relative_phase(spec in lump(), alpha in 0.0..2.0 * PI) {
        let psi = make_two_lump(&grid(), &spec, 1.0, alpha).unwrap();
        let t = translation_expectation(&psi, 1.0).unwrap();
        prop_assert!((t - C64::from_polar(0.5, -alpha)).norm() < 1e-10);
    }

    #[test]
    fn parity_is_cosine_of_phase(spec in lump(), alpha in 0.0..2.0 * PI) {
        let psi = make_two_lump(&grid(), &spec, 1.0, alpha).unwrap();
        prop_assert!((parity_expectation(&psi).unwrap() - alpha.cos()).norm() < 1e-10);
    }

    #[test]
    fn modular_momentum_first_harmonic(spec in lump(), alpha in 0.0..2.0 * PI) {
        let psi = make_two_lump(&grid(), &spec, 1.0, alpha).unwrap();
        let dist = modular_momentum_distribution(&psi, 1.0).unwrap();
        prop_assert!((dist.total() - 1.0).abs() < 1e-12);
        prop_assert!((dist.coefficient(1) - C64::from_polar(0.5, -alpha)).norm() < 1e-10);
        prop_assert!(dist.coefficient(2).norm() < 1e-10);
    }

    #[test]
    fn weak_values_average_to_expectation(
        a in hermitian(3),
        psi in state(3),
        basis in hermitian(3),
    ) {
        let a = HermitianOp::new(a).unwrap();
        let eig = nalgebra::SymmetricEigen::try_new(basis, f64::EPSILON, 100_000).unwrap();
        let mut sum = C64::new(0.0, 0.0);
        for col in eig.eigenvectors.column_iter() {
            let fin = col.into_owned();
            let p = fin.dotc(&psi).norm_sqr();
            if p > 1e-9 {
                sum += weak_value(&a, &psi, &fin).unwrap() * p;
            }
        }
        // dropped near-orthogonal outcomes carry at most 3e-9 of weight each
        prop_assert!((sum - a.expectation(&psi)).norm() < 1e-7);
    }

    #[test]
    fn ellipse_holds_for_any_transfer(
        p1 in -50.0..50.0f64, p2 in -50.0..50.0f64, d in -20.0..20.0f64, p0 in 0.1..5.0f64,
    ) {
        let c = ellipse_check(p1, p2, p1 + d, p2 - d, p0).unwrap();
        prop_assert!(c.residual < 1e-10);
    }

    #[test]
    fn flux_is_periodic(f in 0.0..1.0f64) {
        let g = grid();
        let cfg = GratingConfig::default();
        let a = comb_state(&g, &cfg, f).unwrap();
        let b = comb_state(&g, &cfg, f + 1.0).unwrap();
        let diff = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn moments_ignore_phase_while_disjoint(
        sigma in 0.03..0.05f64,
        alpha in 0.0..2.0 * PI,
        beta in 0.0..2.0 * PI,
    ) {
        let g = grid();
        let rows = moment_deltas(
            &g,
            &LumpSpec::gaussian(0.0, sigma),
            1.0,
            &[alpha, beta],
            &PotentialSpec::zero(&g),
            1.0,
            2e-5,
            0.002,
            4,
            4,
        )
        .unwrap();
        for r in rows {
            prop_assert!(r.overlap < 1e-12);
            prop_assert!(r.max_delta < 1e-8, "{r:?}");
        }
    }
}
