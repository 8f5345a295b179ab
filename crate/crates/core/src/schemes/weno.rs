//! One-sided derivative kernels in Hamilton-Jacobi form.
//!
//! Both kernels take point values ordered from upwind to downwind and return
//! the left-biased derivative at the fourth value. Right-biased derivatives
//! come from the reversed stencil with the sign flipped.

const WENO5_EPS: f64 = 1e-6;

const CU6_EPS: f64 = 1e-40;
const CU6_C: f64 = 20.0;

#[inline]
fn diffs<const N: usize>(phi: &[f64], h: f64) -> [f64; N] {
    std::array::from_fn(|k| (phi[k + 1] - phi[k]) / h)
}

#[inline]
fn candidates(v: &[f64]) -> [f64; 3] {
    [
        (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0,
        (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0,
        (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0,
    ]
}

#[inline]
fn jiang_shu(v: &[f64]) -> [f64; 3] {
    let b = |a: f64, b: f64, c: f64, w1: f64, w2: f64, w3: f64| {
        13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (w1 * a + w2 * b + w3 * c).powi(2)
    };
    [
        b(v[0], v[1], v[2], 1.0, -4.0, 3.0),
        b(v[1], v[2], v[3], 1.0, 0.0, -1.0),
        b(v[2], v[3], v[4], 3.0, -4.0, 1.0),
    ]
}

/// Fifth-order WENO derivative from `phi[0..6] = phi_{i-3} .. phi_{i+2}`.
#[inline]
pub fn weno5_biased(phi: &[f64; 6], h: f64) -> f64 {
    let v: [f64; 5] = diffs(phi, h);
    let q = candidates(&v);
    let beta = jiang_shu(&v);
    let d = [0.1, 0.6, 0.3];
    let mut a = [0.0; 3];
    for k in 0..3 {
        a[k] = d[k] / (WENO5_EPS + beta[k]).powi(2);
    }
    let s = a[0] + a[1] + a[2];
    (a[0] * q[0] + a[1] * q[1] + a[2] * q[2]) / s
}

/// Smoothness of the full six-difference stencil.
#[inline]
fn beta6(f: &[f64; 6]) -> f64 {
    let [a, b, c, d, e, g] = *f;
    (271779.0 * a * a
        + a * (-2380800.0 * b + 4086352.0 * c - 3462252.0 * d + 1458762.0 * e - 245620.0 * g)
        + b * (5653317.0 * b - 20427884.0 * c + 17905032.0 * d - 7727988.0 * e + 1325006.0 * g)
        + c * (19510972.0 * c - 35817664.0 * d + 15929912.0 * e - 2792660.0 * g)
        + d * (17195652.0 * d - 15880404.0 * e + 2863984.0 * g)
        + e * (3824847.0 * e - 1429976.0 * g)
        + 139633.0 * g * g)
        / 120960.0
}

/// Sixth-order central-upwind WENO derivative from
/// `phi[0..7] = phi_{i-3} .. phi_{i+3}`.
#[inline]
pub fn weno_cu6_biased(phi: &[f64; 7], h: f64) -> f64 {
    let v: [f64; 6] = diffs(phi, h);
    let q3 = (11.0 * v[3] - 7.0 * v[4] + 2.0 * v[5]) / 6.0;
    let [q0, q1, q2] = candidates(&v);
    let [b0, b1, b2] = jiang_shu(&v);
    let b6 = beta6(&v);
    let tau = (b6 - (b0 + 4.0 * b1 + b2) / 6.0).abs();
    let d = [0.05, 0.45, 0.45, 0.05];
    let beta = [b0, b1, b2, b6];
    let mut a = [0.0; 4];
    for k in 0..4 {
        a[k] = d[k] * (CU6_C + tau / (beta[k] + CU6_EPS));
    }
    let s = a.iter().sum::<f64>();
    (a[0] * q0 + a[1] * q1 + a[2] * q2 + a[3] * q3) / s
}
