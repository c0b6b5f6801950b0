mod common;

use common::*;
use fourtangle::numkernel::{
    herm_eig, partial_trace, pfaffian, psd_sqrt, AntisymmetricMatrix, ComplexMatrix, RealMatrix,
    C64,
};
use proptest::prelude::*;
use rand::Rng;

/// Pfaffian by expansion along the first row, summing over perfect matchings.
fn pfaffian_by_matchings(a: &RealMatrix, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != idx[k]).collect();
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a.row(first)[idx[k]] * pfaffian_by_matchings(a, &rest);
    }
    total
}

/// Product of row norms; bounds `|det|`.
fn hadamard_bound(a: &RealMatrix) -> f64 {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| x * x).sum::<f64>().sqrt())
        .product()
}

proptest! {
    #![proptest_config(proptest_config(1000))]

    #[test]
    fn pfaffian_squared_is_determinant(half in 1usize..=6, case in any::<u64>()) {
        let mut r = rng(case);
        let a = random_antisymmetric(&mut r, 2 * half);
        let pf = pfaffian(&a).unwrap();
        let det = a.as_matrix().determinant();
        let scale = det.abs().max(1e-6 * hadamard_bound(a.as_matrix()));
        prop_assert!((pf * pf - det).abs() <= 1e-8 * scale, "pf^2 {} det {}", pf * pf, det);
    }

    #[test]
    fn psd_sqrt_reconstructs(n in 1usize..=16, rank_frac in 0.0f64..1.0, case in any::<u64>()) {
        let mut r = rng(case);
        let rank = ((rank_frac * n as f64) as usize).max(1);
        let b = ComplexMatrix::from_fn(n, rank, |_, _| complex(&mut r));
        let m = b.matmul(&b.adjoint()).hermitian_part();
        let s = psd_sqrt(&m).unwrap();
        let scale = m.max_abs().max(1.0);
        prop_assert!(s.matmul(&s).max_abs_diff(&m) <= 1e-9 * scale);
        prop_assert!(s.max_abs_diff(&s.adjoint()) <= 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(proptest_config(200))]

    #[test]
    fn pfaffian_congruence(half in 1usize..=5, case in any::<u64>()) {
        let mut r = rng(case);
        let n = 2 * half;
        let a = random_antisymmetric(&mut r, n);
        let b = random_real(&mut r, n);
        let bab = b.matmul(a.as_matrix()).matmul(&b.transpose());
        // symmetrize rounding before the antisymmetry check
        let bab = RealMatrix::from_fn(n, n, |i, j| 0.5 * (bab.row(i)[j] - bab.row(j)[i]));
        let lhs = pfaffian(&AntisymmetricMatrix::new(bab).unwrap()).unwrap();
        let rhs = b.determinant() * pfaffian(&a).unwrap();
        let scale = rhs.abs().max(1e-6 * hadamard_bound(&b) * hadamard_bound(a.as_matrix()).sqrt());
        prop_assert!((lhs - rhs).abs() <= 1e-8 * scale, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn pfaffian_matches_matching_sum(half in 0usize..=3, case in any::<u64>()) {
        let mut r = rng(case);
        let n = 2 * half;
        let a = random_antisymmetric(&mut r, n);
        let idx: Vec<usize> = (0..n).collect();
        let oracle = pfaffian_by_matchings(a.as_matrix(), &idx);
        prop_assert!((pfaffian(&a).unwrap() - oracle).abs() <= 1e-12);
    }

    #[test]
    fn hermitian_eigen_decomposition(n in 1usize..=12, case in any::<u64>()) {
        let mut r = rng(case);
        let m = random_hermitian(&mut r, n);
        let eig = herm_eig(&m).unwrap();
        let v = &eig.vectors;
        prop_assert!(v.adjoint().matmul(v).max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12);
        prop_assert!(eig.reconstruct_with(|x| x).max_abs_diff(&m) <= 1e-12);
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        let u = random_unitary(&mut r, n);
        let rotated = herm_eig(&u.matmul(&m).matmul(&u.adjoint()).hermitian_part()).unwrap();
        for (x, y) in eig.values.iter().zip(&rotated.values) {
            prop_assert!((x - y).abs() <= 1e-11);
        }
    }

    #[test]
    fn partial_trace_in_two_steps(case in any::<u64>()) {
        let mut r = rng(case);
        let rho = random_density(&mut r, 4, 3);
        let direct = partial_trace(rho.matrix(), &[1, 3]).unwrap();
        let step = partial_trace(rho.matrix(), &[0, 1, 3]).unwrap();
        let two = partial_trace(&step, &[1, 2]).unwrap();
        prop_assert!(direct.max_abs_diff(&two) <= 1e-14);
        prop_assert!((direct.trace() - C64::new(1.0, 0.0)).norm() <= 1e-13);
    }
}

#[test]
fn pfaffian_of_odd_size_is_an_error() {
    let a = random_antisymmetric(&mut rng(1), 5);
    assert!(pfaffian(&a).is_err());
}

#[test]
fn sixteen_by_sixteen_residuals() {
    let mut r = rng(2);
    for _ in 0..20 {
        let m = random_hermitian(&mut r, 16);
        let eig = herm_eig(&m).unwrap();
        let scale = m.frobenius_norm();
        assert!(eig.reconstruct_with(|x| x).max_abs_diff(&m) <= 1e-13 * scale);
        let shift: f64 = r.gen_range(0.0..1.0);
        let psd = eig.reconstruct_with(|x| (x - eig.values[15]) * shift);
        let s = psd_sqrt(&psd.hermitian_part()).unwrap();
        assert!(s.matmul(&s).max_abs_diff(&psd) <= 1e-9 * psd.max_abs().max(1.0));
    }
}
