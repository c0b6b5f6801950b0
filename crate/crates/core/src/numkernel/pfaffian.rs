//! Pfaffian of a real antisymmetric matrix.

use super::matrix::AntisymmetricMatrix;
use crate::error::{Error, Result};

/// `Pf(A)` by skew-symmetric Parlett-Reid elimination with partial pivoting,
/// `O(n^3)`. Sign convention: `Pf([[0, a], [-a, 0]]) = a`.
pub fn pfaffian(a: &AntisymmetricMatrix) -> Result<f64> {
    let n = a.size();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let mut m = a.as_matrix().as_slice().to_vec();
    Ok(pfaffian_in_place(&mut m, n))
}

/// Same as [`pfaffian`] on a scratch row-major buffer that is overwritten.
/// The caller guarantees antisymmetry and even `n`.
pub(crate) fn pfaffian_in_place(m: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(m.len(), n * n);
    if n == 0 {
        return 1.0;
    }
    let mut pf = 1.0;
    let mut tau = vec![0.0; n];
    let mut col = vec![0.0; n];
    for k in (0..n - 1).step_by(2) {
        // pivot: largest |A[i][k]| for i > k
        let mut kp = k + 1;
        let mut best = m[(k + 1) * n + k].abs();
        for i in k + 2..n {
            let v = m[i * n + k].abs();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in k..n {
                m.swap((k + 1) * n + j, kp * n + j);
            }
            for i in k..n {
                m.swap(i * n + k + 1, i * n + kp);
            }
            pf = -pf;
        }
        let akk1 = m[k * n + k + 1];
        if m[(k + 1) * n + k] == 0.0 {
            return 0.0;
        }
        pf *= akk1;
        if k + 2 < n {
            for j in k + 2..n {
                tau[j] = m[k * n + j] / akk1;
                col[j] = m[j * n + k + 1];
            }
            for i in k + 2..n {
                let (ti, ci) = (tau[i], col[i]);
                let row = &mut m[i * n..(i + 1) * n];
                for j in k + 2..n {
                    row[j] += ti * col[j] - ci * tau[j];
                }
            }
        }
    }
    pf
}
