//! Gauss–Hermite and Gauss–Legendre rules computed by Newton iteration on the
//! orthogonal-polynomial recurrences; Hermite roots are seeded by Golub–Welsch.

use crate::error::{Error, Result};
use crate::linalg::RMat;

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Maps a rule on `[-1, 1]` to `[a, b]`.
    pub fn rescaled(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

const MAX_NEWTON: usize = 100;

/// Nodes and weights for `∫ e^{−x²} f(x) dx`.
pub fn gauss_hermite(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature order must be positive".into()));
    }
    // Golub–Welsch eigenvalues seed Newton on the orthonormal recurrence.
    let jacobi = RMat::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { (i.max(j) as f64 / 2.0).sqrt() } else { 0.0 });
    let mut seeds: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    seeds.sort_by(|a, b| b.total_cmp(a));
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = seeds[i];
        let mut pp = 0.0;
        for _ in 0..MAX_NEWTON {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = (j + 1) as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            z = 0.0;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // Ascending order.
    nodes.reverse();
    weights.reverse();
    Ok(Rule { nodes, weights })
}

/// Nodes and weights for `∫_{−1}^{1} f(x) dx`.
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature order must be positive".into()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..MAX_NEWTON {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    Ok(Rule { nodes, weights })
}
