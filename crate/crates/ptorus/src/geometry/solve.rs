use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::triangulation::{Corner, Term, Triangulation};
use super::GeometryError;

#[derive(Debug, Clone, Serialize)]
pub struct ShapeSolution {
    pub shapes: Vec<Complex64>,
    pub log_shapes: Vec<Complex64>,
    /// max |defect| over the edge and completeness equations
    pub residual: f64,
    pub iterations: usize,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// log of the corner parameter, principal branches (arguments in (0, π) when Im z > 0).
pub fn log_corner(corner: Corner, w: Complex64) -> Complex64 {
    let z = w.exp();
    match corner {
        Corner::Z => w,
        Corner::ZPrime => -(Complex64::new(1.0, 0.0) - z).ln(),
        Corner::ZDoublePrime => (z - 1.0).ln() - w,
    }
}

/// d log(corner) / d log z.
pub fn dlog_corner(corner: Corner, w: Complex64) -> Complex64 {
    let z = w.exp();
    match corner {
        Corner::Z => Complex64::new(1.0, 0.0),
        Corner::ZPrime => z / (1.0 - z),
        Corner::ZDoublePrime => 1.0 / (z - 1.0),
    }
}

pub fn corner_value(corner: Corner, z: Complex64) -> Complex64 {
    match corner {
        Corner::Z => z,
        Corner::ZPrime => 1.0 / (1.0 - z),
        Corner::ZDoublePrime => (z - 1.0) / z,
    }
}

fn equations(tri: &Triangulation) -> Vec<(&[Term], Complex64)> {
    let mut eqs: Vec<(&[Term], Complex64)> =
        tri.edge_classes.iter().map(|c| (c.as_slice(), 2.0 * PI * I)).collect();
    eqs.push((tri.completeness.as_slice(), 3.0 * PI * I));
    eqs
}

fn residuals(tri: &Triangulation, w: &[Complex64]) -> Vec<Complex64> {
    equations(tri)
        .iter()
        .map(|(terms, target)| {
            terms.iter().map(|t| t.coefficient as f64 * log_corner(t.corner, w[t.tet])).sum::<Complex64>() - target
        })
        .collect()
}

/// Max defect of the gluing and completeness equations at the given shapes.
pub fn gluing_residual(tri: &Triangulation, shapes: &[Complex64]) -> f64 {
    let w: Vec<Complex64> = shapes.iter().map(|z| z.ln()).collect();
    residuals(tri, &w).iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// Newton iteration in w = log z from z = e^{iπ/3}, with least-squares steps
/// and step halving to stay in the upper half plane.
pub fn solve_shapes(tri: &Triangulation, tol: f64, max_iter: usize) -> Result<ShapeSolution, GeometryError> {
    let p = tri.p;
    let mut w = vec![I * (PI / 3.0); p];
    let eqs = equations(tri);
    let mut r = residuals(tri, &w);
    let mut res = r.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut it = 0;
    while res > tol {
        if it == max_iter {
            return Err(GeometryError::NoConvergence { iterations: it, residual: res });
        }
        it += 1;
        let mut jac = DMatrix::<Complex64>::zeros(eqs.len(), p);
        for (row, (terms, _)) in eqs.iter().enumerate() {
            for t in *terms {
                jac[(row, t.tet)] += t.coefficient as f64 * dlog_corner(t.corner, w[t.tet]);
            }
        }
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|x| -x));
        let step = jac
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| GeometryError::Degenerate(format!("least-squares step failed: {e}")))?;
        let mut scale = 1.0;
        loop {
            let trial: Vec<Complex64> = w.iter().zip(step.iter()).map(|(a, b)| a + b * scale).collect();
            if trial.iter().all(|x| x.exp().im > 0.0) {
                let rt = residuals(tri, &trial);
                let rest = rt.iter().map(|x| x.norm()).fold(0.0, f64::max);
                if rest < res || scale < 1e-3 {
                    w = trial;
                    r = rt;
                    res = rest;
                    break;
                }
            }
            scale *= 0.5;
            if scale < 1e-12 {
                return Err(GeometryError::LeftUpperHalfPlane { iteration: it });
            }
        }
    }
    Ok(ShapeSolution { shapes: w.iter().map(|x| x.exp()).collect(), log_shapes: w, residual: res, iterations: it })
}
