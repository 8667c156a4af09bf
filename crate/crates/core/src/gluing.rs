//! Shape parameters from the gluing equations, solved by Newton's method in
//! logarithmic form.
//!
//! Edge equations read `sum eps_t log(param) = 2 pi i` over the incidences of
//! an edge class; each cusp path contributes `sum sense eps_t log(param) = 0`.
//! All logarithms are principal.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{IdealSimplexShape, FLAT_TOLERANCE};
use crate::triangulation::Triangulation;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100;
pub const DEFAULT_INITIAL_SHAPE: Complex64 = Complex64::new(0.5, 0.8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationKind {
    Edge(usize),
    Cusp(usize),
}

/// `sum coeff * log(param_{edge_type}(z_tet)) = target`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluingEquation {
    pub kind: EquationKind,
    /// `(tet, edge type, coefficient)`
    pub terms: Vec<(usize, usize, i64)>,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub target: Complex64,
}

impl GluingEquation {
    pub fn residual(&self, shapes: &[IdealSimplexShape]) -> Result<Complex64> {
        let mut sum = -self.target;
        for &(t, ty, c) in &self.terms {
            sum += shapes[t].log_parameter(ty)? * c as f64;
        }
        Ok(sum)
    }

    /// Integer coefficient row over the `3 n` unknowns `log param_{t, type}`.
    pub fn exponent_row(&self, tets: usize) -> Vec<i64> {
        let mut row = vec![0; 3 * tets];
        for &(t, ty, c) in &self.terms {
            row[3 * t + ty] += c;
        }
        row
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GluingSystem {
    pub tets: usize,
    pub equations: Vec<GluingEquation>,
    /// No cusp paths were supplied; only edge equations are present.
    pub edge_equations_only: bool,
}

impl GluingSystem {
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.equations.iter().map(|e| e.exponent_row(self.tets)).collect()
    }

    pub fn residuals(&self, shapes: &[IdealSimplexShape]) -> Result<Vec<Complex64>> {
        self.equations.iter().map(|e| e.residual(shapes)).collect()
    }
}

pub fn gluing_equations(t: &Triangulation) -> Result<GluingSystem> {
    let eps = t.orientation_signs()?;
    let mut equations = Vec::new();
    for (i, class) in t.edge_classes().iter().enumerate() {
        let terms = class
            .incidences
            .iter()
            .map(|inc| (inc.tet, inc.edge_type(), eps[inc.tet]))
            .collect();
        equations.push(GluingEquation {
            kind: EquationKind::Edge(i),
            terms,
            target: Complex64::new(0.0, 2.0 * PI),
        });
    }
    let paths = t.cusp_paths.as_deref().unwrap_or(&[]);
    for (i, path) in paths.iter().enumerate() {
        let terms = t
            .path_passes(path, None)?
            .into_iter()
            .map(|p| (p.tet, p.edge_type, p.sense * eps[p.tet]))
            .collect();
        equations.push(GluingEquation {
            kind: EquationKind::Cusp(i),
            terms,
            target: Complex64::new(0.0, 0.0),
        });
    }
    Ok(GluingSystem {
        tets: t.len(),
        equations,
        edge_equations_only: paths.is_empty(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeSolution {
    #[serde(serialize_with = "serialize_shapes")]
    pub shapes: Vec<Complex64>,
    pub iterations: usize,
    /// Max-norm of the equation residuals at the returned shapes.
    pub residual: f64,
    /// Every simplex is positively oriented in the orientation of the complex.
    pub geometric: bool,
    pub warnings: Vec<String>,
}

fn serialize_shapes<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|r| r.norm()).fold(0.0, f64::max)
}

fn shapes_of(z: &[Complex64]) -> Result<Vec<IdealSimplexShape>> {
    z.iter().map(|&z| IdealSimplexShape::new(z)).collect()
}

fn is_flat(z: &[Complex64]) -> bool {
    z.iter().any(|z| z.im.abs() < FLAT_TOLERANCE)
}

/// `d log(param_type(z)) / dz`
fn log_derivative(z: Complex64, ty: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match ty {
        0 => one / z,
        1 => one / (one - z),
        _ => one / (z * (z - one)),
    }
}

/// `0.5 + 0.8i`, mirrored into the lower half plane for a simplex whose
/// ordering disagrees with the orientation of the complex.
fn oriented_default(sign: i64) -> Complex64 {
    if sign < 0 {
        DEFAULT_INITIAL_SHAPE.conj()
    } else {
        DEFAULT_INITIAL_SHAPE
    }
}

/// Newton iteration with step halving; overdetermined steps by least squares.
///
/// Starting shapes are `initial`, else the shapes stored in the document, else
/// `0.5 + 0.8i` for every tetrahedron (conjugated where the sign is `-1`).
pub fn solve_shapes(
    t: &Triangulation,
    initial: Option<&[Complex64]>,
    opts: SolveOptions,
) -> Result<ShapeSolution> {
    let system = gluing_equations(t)?;
    let n = t.len();
    let mut z: Vec<Complex64> = match initial {
        Some(v) => v.to_vec(),
        None => match t.shape_hints() {
            Some(hints) => hints,
            None => t
                .orientation_signs()?
                .iter()
                .map(|&e| oriented_default(e))
                .collect(),
        },
    };
    if z.len() != n {
        return Err(Error::Contract(format!("{} initial shapes for {n} tetrahedra", z.len())));
    }
    if is_flat(&z) {
        return Err(Error::Degenerate(
            "initial shapes must lie off the real line".into(),
        ));
    }
    let mut res = system.residuals(&shapes_of(&z)?)?;
    let mut norm = max_norm(&res);
    let mut iterations = 0;
    while norm >= opts.tolerance {
        if iterations == opts.max_iter {
            return Err(Error::NoConvergence { iterations, residual: norm });
        }
        iterations += 1;
        let m = system.equations.len();
        let mut jac = DMatrix::<Complex64>::zeros(m, n);
        for (i, eq) in system.equations.iter().enumerate() {
            for &(tet, ty, c) in &eq.terms {
                jac[(i, tet)] += log_derivative(z[tet], ty) * c as f64;
            }
        }
        let rhs = DVector::from_iterator(m, res.iter().map(|r| -r));
        let step = jac
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::Degenerate(format!("Newton step failed: {e}")))?;
        let mut alpha = 1.0;
        let mut accepted = None;
        let mut saw_flat = false;
        while alpha > 1e-6 {
            let trial: Vec<Complex64> = z.iter().zip(step.iter()).map(|(z, d)| z + d * alpha).collect();
            if is_flat(&trial) {
                saw_flat = true;
            } else if let Ok(shapes) = shapes_of(&trial) {
                let r = system.residuals(&shapes)?;
                let nr = max_norm(&r);
                if nr < norm {
                    accepted = Some((trial, r, nr));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((trial, r, nr)) => {
                z = trial;
                res = r;
                norm = nr;
            }
            None if saw_flat => {
                return Err(Error::Degenerate(
                    "Newton iterate reached a flat simplex".into(),
                ))
            }
            None => return Err(Error::NoConvergence { iterations, residual: norm }),
        }
    }
    let eps = t.orientation_signs()?;
    let geometric = z.iter().zip(&eps).all(|(z, &e)| z.im * e as f64 > 0.0);
    let mut warnings = Vec::new();
    if !geometric {
        warnings.push("some simplices are negatively oriented; solution is not geometric".into());
    }
    if system.edge_equations_only {
        warnings.push("no cusp paths supplied; completeness equations were not imposed".into());
    }
    Ok(ShapeSolution {
        shapes: z,
        iterations,
        residual: norm,
        geometric,
        warnings,
    })
}

/// Errors unless `shapes` satisfy every gluing equation within `tol`.
pub fn check_solution(t: &Triangulation, shapes: &[Complex64], tol: f64) -> Result<()> {
    let system = gluing_equations(t)?;
    let res = system.residuals(&shapes_of(shapes)?)?;
    for (eq, r) in system.equations.iter().zip(&res) {
        if r.norm() > tol {
            return Err(Error::NotSolved(format!("{:?} has residual {:e}", eq.kind, r.norm())));
        }
    }
    Ok(())
}
