use deformed_spectra::bands::{detect_bands, GapThreshold};
use deformed_spectra::builders::{build_momentum_operator, build_position_operator};
use deformed_spectra::eigen::{
    eigenpair_inverse_iteration, eigenvalues_bisection, eigenvalues_dense_oracle, sturm_count,
};
use deformed_spectra::output::{format_value, round_significant};
use deformed_spectra::unitary::{build_transform, verify_translation_relations};
use deformed_spectra::{
    sweep_grid, Boundary, BoundaryKind, DeformationParams, GridPoint, Omega, OperatorKind,
    TridiagonalOperator, Truncation,
};
use proptest::prelude::*;

fn tridiagonal(max_dim: usize) -> impl Strategy<Value = TridiagonalOperator> {
    (1..=max_dim).prop_flat_map(|d| {
        (
            prop::collection::vec(-5.0..5.0f64, d),
            prop::collection::vec(prop_oneof![4 => -3.0..3.0f64, 1 => Just(0.0)], d - 1),
        )
            .prop_map(|(diag, off)| {
                TridiagonalOperator::new(diag, off, Boundary::Open, "random").unwrap()
            })
    })
}

fn zero_diagonal(max_dim: usize) -> impl Strategy<Value = TridiagonalOperator> {
    (2..=max_dim).prop_flat_map(|d| {
        prop::collection::vec(-2.0..2.0f64, d - 1).prop_map(move |off| {
            TridiagonalOperator::new(vec![0.0; d], off, Boundary::Open, "chiral").unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bisection_matches_oracle(op in tridiagonal(60)) {
        let a = eigenvalues_bisection(&op, 1e-13).unwrap();
        let b = eigenvalues_dense_oracle(&op).unwrap();
        prop_assert!(a.max_abs_difference(&b).unwrap() < 1e-9);
    }

    #[test]
    fn sturm_count_matches_oracle(op in tridiagonal(40), x in -8.0..8.0f64) {
        let oracle = eigenvalues_dense_oracle(&op).unwrap();
        let near = oracle.eigenvalues().iter().any(|v| (v - x).abs() < 1e-9);
        prop_assume!(!near);
        prop_assert_eq!(sturm_count(&op, x).unwrap(), oracle.count_below(x));
    }

    #[test]
    fn block_spectra_merge(a in tridiagonal(20), b in tridiagonal(20)) {
        let mut diag = a.diag().to_vec();
        diag.extend_from_slice(b.diag());
        let mut off = a.offdiag().to_vec();
        off.push(0.0);
        off.extend_from_slice(b.offdiag());
        let joined = TridiagonalOperator::new(diag, off, Boundary::Open, "joined").unwrap();
        let mut union = eigenvalues_bisection(&a, 1e-13).unwrap().into_eigenvalues();
        union.extend(eigenvalues_bisection(&b, 1e-13).unwrap().into_eigenvalues());
        union.sort_by(f64::total_cmp);
        let whole = eigenvalues_bisection(&joined, 1e-13).unwrap();
        for (x, y) in whole.eigenvalues().iter().zip(&union) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_diagonal_spectrum_is_symmetric(op in zero_diagonal(50)) {
        let s = eigenvalues_bisection(&op, 1e-13).unwrap();
        let v = s.eigenvalues();
        for i in 0..v.len() {
            prop_assert!((v[i] + v[v.len() - 1 - i]).abs() < 1e-10);
        }
        let bands = detect_bands(&s, GapThreshold::Auto, None).unwrap();
        prop_assert!(bands.is_symmetric(1e-10));
    }

    #[test]
    fn bands_partition_the_spectrum(op in tridiagonal(60), q in 1u64..8) {
        let s = eigenvalues_bisection(&op, 1e-13).unwrap();
        let b = detect_bands(&s, GapThreshold::Auto, Some(q)).unwrap();
        prop_assert_eq!(b.eigenvalue_count(), s.dimension());
        for x in s.eigenvalues() {
            let in_bands = b.bands.iter().filter(|band| band.lo <= *x && *x <= band.hi).count();
            let in_gap = b.in_gap.iter().any(|g| (g.value - x).abs() <= 1e-12 * 20.0);
            prop_assert!(in_bands + usize::from(in_gap) == 1);
        }
        for w in b.bands.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }

    #[test]
    fn inverse_iteration_contract(op in tridiagonal(40), pick in 0.0..1.0f64) {
        let s = eigenvalues_bisection(&op, 1e-13).unwrap();
        let i = ((s.dimension() - 1) as f64 * pick).round() as usize;
        let pair = eigenpair_inverse_iteration(&op, s.eigenvalues()[i]).unwrap();
        let norm = pair.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        prop_assert!(pair.residual <= 1e-8 * op.norm_bound().max(f64::MIN_POSITIVE));
        let tv = op.apply(&pair.vector);
        let r = tv.iter().zip(&pair.vector).map(|(a, b)| (a - pair.value * b).powi(2)).sum::<f64>().sqrt();
        prop_assert!(r <= pair.residual * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn transform_is_phase_only(w in -4.0..4.0f64, nu in -3.0..3.0f64, k0 in -10i64..10) {
        let t = build_transform(Omega::radians(w).unwrap(), nu, &Truncation::new(25, k0, k0 + 6).unwrap()).unwrap();
        for r in 0..t.rows() {
            for z in t.state(r) {
                prop_assert!((z.norm() * t.normalization() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn translation_relations_are_exact_inside(w in -3.0..3.0f64, nu in -3.0..3.0f64, n_max in 6usize..60) {
        let trunc = Truncation::new(n_max, -4, 4).unwrap();
        let r = verify_translation_relations(Omega::radians(w).unwrap(), nu, &trunc).unwrap();
        prop_assert!(r.max_interior_residual() < 1e-10);
    }

    #[test]
    fn position_and_momentum_are_isospectral(w in -4.0..4.0f64, n_max in 2usize..80) {
        let p = DeformationParams::ergodic(Omega::radians(w).unwrap()).unwrap();
        let t = Truncation::with_dimension(n_max).unwrap();
        let x = eigenvalues_bisection(&build_position_operator(&p, &t).unwrap(), 1e-13).unwrap();
        let m = eigenvalues_bisection(&build_momentum_operator(&p, &t).unwrap(), 1e-13).unwrap();
        prop_assert!(x.max_abs_difference(&m).unwrap() < 1e-10);
    }

    #[test]
    fn decimal_round_trip(x in prop::num::f64::NORMAL) {
        let r = round_significant(x);
        let parsed: f64 = format_value(x).parse().unwrap();
        prop_assert_eq!(parsed, r);
        prop_assert_eq!(round_significant(r), r);
    }
}

#[test]
fn sweep_is_identical_across_thread_counts() {
    let grid: Vec<GridPoint> = (1..=24).map(|p| GridPoint { p, q: 24 }).collect();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                sweep_grid(&grid, OperatorKind::Xnu { nu: 0.3 }, 48, BoundaryKind::Open).unwrap()
            })
    };
    let one = run(1);
    let many = run(4);
    assert_eq!(one, many);
}

#[test]
fn periodic_ring_has_cosine_spectrum() {
    let n = 12;
    let op = TridiagonalOperator::new(
        vec![0.0; n],
        vec![1.0; n - 1],
        Boundary::Periodic { corner: 1.0 },
        "ring",
    )
    .unwrap();
    let s = eigenvalues_dense_oracle(&op).unwrap();
    let mut expected: Vec<f64> = (0..n)
        .map(|j| 2.0 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    expected.sort_by(f64::total_cmp);
    for (a, b) in s.eigenvalues().iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}
