//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant (Higham 2005).

use nalgebra::DMatrix;

use super::Mat;

const THETA_13: f64 = 5.371920351148152;

const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn expm(a: &Mat<f64>) -> Mat<f64> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return a.clone();
    }
    let m = DMatrix::from_row_slice(n, n, a.data());
    let norm = one_norm(&m);
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a = &m / 2f64.powi(s);

    let ident = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * B[13] + &a4 * B[11] + &a2 * B[9]) + &a6 * B[7] + &a4 * B[5] + &a2 * B[3] + &ident * B[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * B[12] + &a4 * B[10] + &a2 * B[8]) + &a6 * B[6] + &a4 * B[4] + &a2 * B[2] + &ident * B[0];

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is singular");
    for _ in 0..s {
        r = &r * &r;
    }
    Mat::from_fn(n, n, |i, j| r[(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor(a: &Mat<f64>, terms: usize) -> Mat<f64> {
        let mut acc = Mat::identity(a.rows());
        let mut term = Mat::identity(a.rows());
        for k in 1..terms {
            term = term.mul(a).scale(&(1.0 / k as f64));
            acc = acc.add(&term);
        }
        acc
    }

    #[test]
    fn rotation_generator() {
        let t = 0.7_f64;
        let a = Mat::from_rows(vec![vec![0.0, -t], vec![t, 0.0]]);
        let e = expm(&a);
        assert!((e[(0, 0)] - t.cos()).abs() < 1e-15);
        assert!((e[(1, 0)] - t.sin()).abs() < 1e-15);
    }

    #[test]
    fn matches_taylor_series_for_moderate_norms() {
        let a = Mat::from_fn(4, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 * 0.4 - 0.8);
        let e = expm(&a);
        let t = taylor(&a, 60);
        for i in 0..4 {
            for j in 0..4 {
                assert!((e[(i, j)] - t[(i, j)]).abs() < 1e-12 * (1.0 + t[(i, j)].abs()));
            }
        }
    }

    #[test]
    fn large_norm_uses_squaring() {
        let a = Mat::from_rows(vec![vec![10.0, 0.0], vec![0.0, -10.0]]);
        let e = expm(&a);
        assert!((e[(0, 0)] / 10f64.exp() - 1.0).abs() < 1e-13);
        assert!((e[(1, 1)] / (-10f64).exp() - 1.0).abs() < 1e-13);
    }
}
