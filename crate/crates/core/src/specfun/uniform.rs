//! Debye polynomials `u_k(p)` of the uniform large-order expansion.

use std::sync::OnceLock;

pub(crate) const TERMS: usize = 20;

/// Coefficients of `u_k(p)` in ascending powers of `p`, for `k < TERMS`.
pub(crate) fn debye_polynomials() -> &'static [Vec<f64>] {
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        let mut polys: Vec<Vec<f64>> = vec![vec![1.0]];
        for k in 0..TERMS - 1 {
            let u = &polys[k];
            let mut next = vec![0.0; u.len() + 3];
            // (1/2) p^2 (1 - p^2) u'(p)
            for (j, &c) in u.iter().enumerate().skip(1) {
                let d = c * j as f64;
                // d p^(j-1) times (p^2 - p^4) / 2
                next[j + 1] += 0.5 * d;
                next[j + 3] -= 0.5 * d;
            }
            // (1/8) int_0^p (1 - 5 t^2) u(t) dt
            for (j, &c) in u.iter().enumerate() {
                next[j + 1] += c / (8.0 * (j + 1) as f64);
                next[j + 3] -= 5.0 * c / (8.0 * (j + 3) as f64);
            }
            polys.push(next);
        }
        polys
    })
}

pub(crate) fn eval(poly: &[f64], p: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_polynomials() {
        let u = debye_polynomials();
        let p: f64 = 0.37;
        let u1 = (3.0 * p - 5.0 * p.powi(3)) / 24.0;
        let u2 = (81.0 * p.powi(2) - 462.0 * p.powi(4) + 385.0 * p.powi(6)) / 1152.0;
        assert!((eval(&u[1], p) - u1).abs() < 1e-16);
        assert!((eval(&u[2], p) - u2).abs() < 1e-16);
    }

    #[test]
    fn stirling_limit() {
        // u_k(1) are the coefficients of the Stirling-type series: u_1(1) = -1/12,
        // u_2(1) = 1/288.
        let u = debye_polynomials();
        assert!((eval(&u[1], 1.0) + 1.0 / 12.0).abs() < 1e-16);
        assert!((eval(&u[2], 1.0) - 1.0 / 288.0).abs() < 1e-16);
    }
}
