//! Gauss–Legendre rules and tensor-product grids over planar apertures.

use std::f64::consts::PI;

use crate::error::{Result, SimError};

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `points`-point Gauss–Legendre rule on `[lo, hi]`, exact for polynomials
/// up to degree `2·points − 1`. Roots are found by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre_rule(points: usize, lo: f64, hi: f64) -> Result<Rule> {
    if points == 0 {
        return Err(SimError::InvalidInput(
            "quadrature needs at least one point".into(),
        ));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(SimError::InvalidInput(format!("bad interval [{lo}, {hi}]")));
    }
    let n = points;
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; store in ascending order
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = mid;
    }
    Ok(Rule { nodes, weights })
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product rule over a rectangle in the x–z directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceRule {
    pub x: Rule,
    pub z: Rule,
}

impl SurfaceRule {
    pub fn new(points_x: usize, points_z: usize, side_x: f64, side_z: f64) -> Result<Self> {
        Ok(Self {
            x: gauss_legendre_rule(points_x, -side_x / 2.0, side_x / 2.0)?,
            z: gauss_legendre_rule(points_z, -side_z / 2.0, side_z / 2.0)?,
        })
    }

    /// `(offset_x, offset_z, weight)` for every node pair.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.x
            .nodes
            .iter()
            .zip(&self.x.weights)
            .flat_map(move |(&x, &wx)| {
                self.z
                    .nodes
                    .iter()
                    .zip(&self.z.weights)
                    .map(move |(&z, &wz)| (x, z, wx * wz))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_rules() {
        let r1 = gauss_legendre_rule(1, -1.0, 1.0).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);

        let r2 = gauss_legendre_rule(2, -1.0, 1.0).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.nodes[0] + s).abs() < 1e-15 && (r2.nodes[1] - s).abs() < 1e-15);
        assert!((r2.weights[0] - 1.0).abs() < 1e-15 && (r2.weights[1] - 1.0).abs() < 1e-15);

        let r = gauss_legendre_rule(2, 0.0, 1.0).unwrap();
        let integral: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
        assert!((integral - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        for n in 1..=24 {
            let r = gauss_legendre_rule(n, -0.3, 1.7).unwrap();
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            assert!(r.nodes.iter().all(|&x| x > -0.3 && x < 1.7));
            assert!(r.weights.iter().all(|&w| w > 0.0));
            let deg = 2 * n - 1;
            let got: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum();
            let want =
                (1.7f64.powi(deg as i32 + 1) - (-0.3f64).powi(deg as i32 + 1)) / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_legendre_rule(0, 0.0, 1.0).is_err());
        assert!(gauss_legendre_rule(3, 1.0, 1.0).is_err());
    }
}
