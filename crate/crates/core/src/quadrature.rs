//! Gauss-Legendre and Gauss-Hermite rules.
//!
//! Nodes are found by Newton iteration on the three-term recurrences, the
//! classical approach. Orders used here stay well below the point where the
//! initial guesses degrade (radial rules up to a few hundred nodes).

use std::f64::consts::PI;

const MAX_NEWTON_ITER: usize = 100;

/// Gauss-Legendre nodes and weights on (-1, 1). Weights sum to 2.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be >= 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root of P_n.
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for iter in 0..=MAX_NEWTON_ITER {
            assert!(iter < MAX_NEWTON_ITER, "Legendre Newton did not converge");
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss-Hermite nodes and weights for the weight function exp(-x^2).
/// Weights sum to sqrt(pi).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be >= 1");
    // pi^(-1/4), normalization of the orthonormal Hermite recurrence.
    const PIM4: f64 = 0.7511255444649425;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0;
    let mut z_prev = 0.0;
    let mut z_prev2 = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * z_prev2,
            3 => 1.91 * z - 0.91 * z_prev2,
            _ => 2.0 * z - z_prev2,
        };
        let mut pp = 0.0;
        for iter in 0..=MAX_NEWTON_ITER {
            assert!(iter < MAX_NEWTON_ITER, "Hermite Newton did not converge");
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-14 {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        let w = 2.0 / (pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
        z_prev2 = z_prev;
        z_prev = z;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(nodes: &[f64], weights: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        nodes.iter().zip(weights).map(|(&x, &w)| w * f(x)).sum()
    }

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 32, 128] {
            let (_, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: sum={s}");
            assert!(w.iter().all(|&wi| wi > 0.0));
        }
    }

    #[test]
    fn legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(4);
        // degree 6 <= 2n-1
        assert!((integrate(&x, &w, |t| t.powi(6)) - 2.0 / 7.0).abs() < 1e-14);
        assert!(integrate(&x, &w, |t| t.powi(5)).abs() < 1e-15);
    }

    #[test]
    fn legendre_order_one_is_midpoint() {
        let (x, w) = gauss_legendre(1);
        assert_eq!(x[0], 0.0);
        assert_eq!(w[0], 2.0);
    }

    #[test]
    fn hermite_weights_sum_to_sqrt_pi() {
        for n in [1, 2, 8, 33, 64] {
            let (_, w) = gauss_hermite(n);
            let s: f64 = w.iter().sum();
            assert!((s - PI.sqrt()).abs() < 1e-12, "n={n}: sum={s}");
            assert!(w.iter().all(|&wi| wi > 0.0));
        }
    }

    #[test]
    fn hermite_moments() {
        let (x, w) = gauss_hermite(6);
        assert!((integrate(&x, &w, |t| t * t) - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!((integrate(&x, &w, |t| t.powi(4)) - 0.75 * PI.sqrt()).abs() < 1e-12);
        assert!(integrate(&x, &w, |t| t.powi(3)).abs() < 1e-13);
    }

    #[test]
    fn hermite_order_one_is_origin() {
        let (x, w) = gauss_hermite(1);
        assert_eq!(x[0], 0.0);
        assert!((w[0] - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        for n in [7, 8, 16] {
            let (x, _) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            let (h, _) = gauss_hermite(n);
            assert!(h.windows(2).all(|p| p[0] > p[1]));
            for i in 0..n {
                assert!((h[i] + h[n - 1 - i]).abs() < 1e-12);
                assert!((x[i] + x[n - 1 - i]).abs() < 1e-12);
            }
        }
    }
}
