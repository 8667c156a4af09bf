//! Combinatorial flattenings of a solved triangulation and the element of the
//! extended pre-Bloch group they define.
//!
//! The integer chain complex `C0 -> C1 -> J -> C1 -> C0` carries the
//! bookkeeping: `C0` is spanned by ideal vertices, `C1` by edge classes, and
//! `J` by two generators `e0, e1` per tetrahedron (with `e2 = -e0 - e1`).

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::bloch::{EBElement, ExtendedParam, Mode, SymbolBasis};
use crate::error::{Error, Result};
use crate::geometry::{edge_type, five_point_simplex, flatten, IdealSimplexShape, SIMPLEX_EDGES};
use crate::bloch::{nu_symbolic, r_of_element, FiveTermTuple};
use crate::intmat::{gf2_rank, rank, smith_invariants, solve_integer, IntMatrix, IntegerSolution};
use crate::polylog::{ModPiSquared, PI_SQUARED};
use crate::triangulation::{edge_index, NormalPath, Triangulation};

const I_PI: Complex64 = Complex64::new(0.0, PI);
const INTEGRALITY_TOL: f64 = 1e-9;

/// `e0, e1, e2` as coordinates over the basis `(e0, e1)`.
const J_TYPE: [[i64; 2]; 3] = [[1, 0], [0, 1], [-1, -1]];

#[derive(Debug, Clone)]
pub struct JComplex {
    pub vertices: usize,
    pub edges: usize,
    pub tets: usize,
    pub signs: Vec<i64>,
    /// `C0 -> C1`, a vertex to its incident edges (twice for a loop).
    pub alpha: IntMatrix,
    /// `C1 -> J`, an edge class to the sum of its tetrahedron edges.
    pub beta: IntMatrix,
    /// `J -> C1`
    pub beta_star: IntMatrix,
    /// `C1 -> C0`, an edge to the sum of its endpoints.
    pub alpha_star: IntMatrix,
    edge_map: Vec<[usize; 6]>,
}

/// Tetrahedron edges of each type: `e_i` and `e_{i+3}`.
fn edges_of_type(ty: usize) -> [(usize, usize); 2] {
    match ty {
        0 => [(0, 1), (2, 3)],
        1 => [(0, 3), (1, 2)],
        _ => [(0, 2), (1, 3)],
    }
}

pub fn build_j_complex(t: &Triangulation) -> Result<JComplex> {
    let signs = t.orientation_signs()?;
    let edge_map = t.edge_class_map();
    let vertex_map = t.vertex_class_map();
    let classes = t.edge_classes();
    let n = t.len();
    let ne = classes.len();
    let nv = vertex_map.iter().flatten().max().map_or(0, |m| m + 1);

    let mut alpha_star = IntMatrix::zeros(nv, ne);
    for (e, class) in classes.iter().enumerate() {
        let inc = class.incidences[0];
        alpha_star.add_to(vertex_map[inc.tet][inc.from], e, 1);
        alpha_star.add_to(vertex_map[inc.tet][inc.to], e, 1);
    }
    let alpha = alpha_star.transpose();

    let mut beta = IntMatrix::zeros(2 * n, ne);
    for (e, class) in classes.iter().enumerate() {
        for inc in &class.incidences {
            let [a, b] = J_TYPE[inc.edge_type()];
            beta.add_to(2 * inc.tet, e, a as i128);
            beta.add_to(2 * inc.tet + 1, e, b as i128);
        }
    }

    // beta*(e_i) = eps (j(e_{i+1}) - j(e_{i+2}) + j(e_{i+4}) - j(e_{i+5}))
    let mut beta_star = IntMatrix::zeros(ne, 2 * n);
    for tet in 0..n {
        for i in 0..2 {
            for (ty, sign) in [((i + 1) % 3, 1), ((i + 2) % 3, -1)] {
                for (a, b) in edges_of_type(ty) {
                    let e = edge_map[tet][edge_index(a, b)];
                    beta_star.add_to(e, 2 * tet + i, (sign * signs[tet]) as i128);
                }
            }
        }
    }
    Ok(JComplex {
        vertices: nv,
        edges: ne,
        tets: n,
        signs,
        alpha,
        beta,
        beta_star,
        alpha_star,
        edge_map,
    })
}

impl JComplex {
    /// `beta alpha`, `beta* beta`, `alpha* beta*`.
    pub fn composites(&self) -> Result<[IntMatrix; 3]> {
        Ok([
            self.beta.mul(&self.alpha)?,
            self.beta_star.mul(&self.beta)?,
            self.alpha_star.mul(&self.beta_star)?,
        ])
    }

    pub fn is_chain_complex(&self) -> Result<bool> {
        Ok(self.composites()?.iter().all(IntMatrix::is_zero))
    }

    /// Skew form on `J`: `<e0, e1> = <e1, e2> = <e2, e0> = 1` on each tetrahedron.
    pub fn form(&self, x: &[i128], y: &[i128]) -> i128 {
        (0..self.tets)
            .map(|t| x[2 * t] * y[2 * t + 1] - x[2 * t + 1] * y[2 * t])
            .sum()
    }

    /// Edge class of edge `(a, b)` of tetrahedron `tet`.
    pub fn edge_class(&self, tet: usize, a: usize, b: usize) -> usize {
        self.edge_map[tet][edge_index(a, b)]
    }
}

/// A finitely generated abelian group `Z^r + Z/d1 + Z/d2 + ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn cyclic(order: u64) -> Self {
        AbelianGroup { free_rank: 0, torsion: vec![order] }
    }

    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn homology_at(dim: usize, incoming: Option<&IntMatrix>, outgoing: Option<&IntMatrix>) -> Result<AbelianGroup> {
    let rank_out = outgoing.map(rank).transpose()?.unwrap_or(0);
    let (rank_in, torsion) = match incoming {
        Some(f) => {
            let inv = smith_invariants(f)?;
            let torsion = inv
                .iter()
                .filter(|&&d| d > 1)
                .map(|&d| u64::try_from(d).map_err(|_| Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
            (inv.len(), torsion)
        }
        None => (0, Vec::new()),
    };
    Ok(AbelianGroup {
        free_rank: dim - rank_out - rank_in,
        torsion,
    })
}

/// Homology of `C0 -> C1 -> J -> C1 -> C0`, listed as `[H5, H4, H3, H2, H1]`.
pub fn homology_of_j(jc: &JComplex) -> Result<[AbelianGroup; 5]> {
    Ok([
        homology_at(jc.vertices, None, Some(&jc.alpha))?,
        homology_at(jc.edges, Some(&jc.alpha), Some(&jc.beta))?,
        homology_at(2 * jc.tets, Some(&jc.beta), Some(&jc.beta_star))?,
        homology_at(jc.edges, Some(&jc.beta_star), Some(&jc.alpha_star))?,
        homology_at(jc.vertices, Some(&jc.alpha_star), None)?,
    ])
}

/// Dimension of `H1(K; Z/2)` for the cell complex of the triangulation with
/// its ideal vertices included.
pub fn h1_mod2_of_complex(t: &Triangulation) -> usize {
    let vmap = t.vertex_class_map();
    let emap = t.edge_class_map();
    let classes = t.edge_classes();
    let nv = vmap.iter().flatten().max().map_or(0, |m| m + 1);
    let ne = classes.len();
    let mut d1 = IntMatrix::zeros(nv, ne);
    for (e, class) in classes.iter().enumerate() {
        let inc = class.incidences[0];
        d1.add_to(vmap[inc.tet][inc.from], e, 1);
        d1.add_to(vmap[inc.tet][inc.to], e, 1);
    }
    // one column per glued face pair
    let mut faces = Vec::new();
    for tet in 0..t.len() {
        for f in 0..4 {
            let g = t.gluing(tet, f);
            if (tet, f) <= (g.tet, g.perm[f]) {
                faces.push((tet, f));
            }
        }
    }
    let mut d2 = IntMatrix::zeros(ne, faces.len());
    for (j, &(tet, f)) in faces.iter().enumerate() {
        let verts: Vec<usize> = (0..4).filter(|&v| v != f).collect();
        for (a, b) in [(verts[0], verts[1]), (verts[0], verts[2]), (verts[1], verts[2])] {
            d2.add_to(emap[tet][edge_index(a, b)], j, 1);
        }
    }
    ne - gf2_rank(&d1) - gf2_rank(&d2)
}

/// Per-tetrahedron coefficients `(a, b)` of `a e0 + b e1`, namely
/// `xi(l(z; 0, 0)) = w1 e0 - w0 e1`.
pub fn omega(shapes: &[Complex64]) -> Result<Vec<[Complex64; 2]>> {
    shapes
        .iter()
        .map(|&z| {
            let w = flatten(&ExtendedParam::new(z, 0, 0)?)?;
            Ok([w.w1(), -w.w0()])
        })
        .collect()
}

/// `beta*(omega) / (pi i)`, rounded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralDefect {
    pub values: Vec<i64>,
    pub valences: Vec<usize>,
    /// Largest distance to the nearest integer before rounding.
    pub rounding_error: f64,
}

pub fn integral_defect(t: &Triangulation, jc: &JComplex, omega: &[[Complex64; 2]]) -> Result<IntegralDefect> {
    let mut values = Vec::with_capacity(jc.edges);
    let mut rounding_error: f64 = 0.0;
    for e in 0..jc.edges {
        let mut sum = Complex64::new(0.0, 0.0);
        for (tet, w) in omega.iter().enumerate() {
            for (i, wi) in w.iter().enumerate() {
                sum += wi * jc.beta_star.get(e, 2 * tet + i) as f64;
            }
        }
        let v = sum / I_PI;
        let r = v.re.round();
        let err = (v - Complex64::new(r, 0.0)).norm();
        rounding_error = rounding_error.max(err);
        if err > INTEGRALITY_TOL {
            return Err(Error::NotSolved(format!(
                "edge {e}: beta*(omega)/(pi i) = {v} is not an integer"
            )));
        }
        values.push(r as i64);
    }
    let valences = t.edge_classes().iter().map(|c| c.valence()).collect();
    Ok(IntegralDefect {
        values,
        valences,
        rounding_error,
    })
}

/// Index coefficients `(dp, dq)` of the log-parameter at an edge of type `ty`.
fn index_coeffs(ty: usize) -> (i64, i64) {
    match ty {
        0 => (1, 0),
        1 => (0, 1),
        _ => (-1, -1),
    }
}

/// Parity offset of the principal flattening: `w_ty(l(z; 0, 0)) = Log(param) + r pi i`.
fn parity_offset(z: Complex64, ty: usize) -> Result<i64> {
    let w = flatten(&ExtendedParam::new(z, 0, 0)?)?.get(ty);
    let l = IdealSimplexShape::new(z)?.log_parameter(ty)?;
    Ok(((w - l) / I_PI).re.round() as i64)
}

/// The integer system whose solutions are the admissible flattenings.
///
/// Unknowns are `(p_0, q_0, ..., p_{n-1}, q_{n-1})` followed by one auxiliary
/// integer per cusp path that lifts the parity condition to `Z`.
#[derive(Debug, Clone)]
pub struct FlatteningSystem {
    pub shapes: Vec<Complex64>,
    pub signs: Vec<i64>,
    pub matrix: IntMatrix,
    pub rhs: Vec<i128>,
    pub solution: IntegerSolution,
    pub defect: IntegralDefect,
    edge_loops: Vec<NormalPath>,
    cusp_paths: Vec<NormalPath>,
    triangulation: Triangulation,
}

fn principal_path_sum(t: &Triangulation, path: &NormalPath, shapes: &[Complex64], eps: &[i64]) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for p in t.path_passes(path, None)? {
        let w = flatten(&ExtendedParam::new(shapes[p.tet], 0, 0)?)?;
        sum += w.get(p.edge_type) * (p.sense * eps[p.tet]) as f64;
    }
    Ok(sum)
}

pub fn flattening_system(t: &Triangulation, shapes: &[Complex64]) -> Result<FlatteningSystem> {
    let n = t.len();
    if shapes.len() != n {
        return Err(Error::Contract(format!("{} shapes for {n} tetrahedra", shapes.len())));
    }
    let jc = build_j_complex(t)?;
    let defect = integral_defect(t, &jc, &omega(shapes)?)?;
    if let Some(e) = defect.values.iter().position(|v| v % 2 != 0) {
        return Err(Error::Consistency(format!(
            "integral defect {} at edge {e} is odd",
            defect.values[e]
        )));
    }
    let eps = jc.signs.clone();
    let cusp_paths = t.cusp_paths.clone().unwrap_or_default();
    let cols = 2 * n + cusp_paths.len();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs: Vec<i128> = Vec::new();

    for (e, class) in t.edge_classes().iter().enumerate() {
        let mut row = vec![0i64; cols];
        for inc in &class.incidences {
            let (dp, dq) = index_coeffs(inc.edge_type());
            row[2 * inc.tet] += eps[inc.tet] * dp;
            row[2 * inc.tet + 1] += eps[inc.tet] * dq;
        }
        rows.push(row);
        rhs.push(-(defect.values[e] as i128));
    }
    for (i, path) in cusp_paths.iter().enumerate() {
        let passes = t.path_passes(path, None)?;
        let v = principal_path_sum(t, path, shapes, &eps)? / I_PI;
        let c = v.re.round();
        if (v - Complex64::new(c, 0.0)).norm() > INTEGRALITY_TOL {
            return Err(Error::NotSolved(format!(
                "cusp path {i}: principal log-parameter / (pi i) = {v} is not an integer"
            )));
        }
        let mut log_row = vec![0i64; cols];
        let mut parity_row = vec![0i64; cols];
        let mut offset = 0i64;
        for p in &passes {
            let (dp, dq) = index_coeffs(p.edge_type);
            let s = p.sense * eps[p.tet];
            log_row[2 * p.tet] += s * dp;
            log_row[2 * p.tet + 1] += s * dq;
            parity_row[2 * p.tet] += dp;
            parity_row[2 * p.tet + 1] += dq;
            offset += parity_offset(shapes[p.tet], p.edge_type)?;
        }
        parity_row[2 * n + i] = -2;
        rows.push(log_row);
        rhs.push(-(c as i128));
        rows.push(parity_row);
        rhs.push(-(offset as i128));
    }
    let matrix = IntMatrix::from_rows_with_cols(&rows, cols);
    let solution = solve_integer(&matrix, &rhs)?;
    let edge_loops = t.edge_classes().iter().map(|c| t.edge_loop(c)).collect();
    Ok(FlatteningSystem {
        shapes: shapes.to_vec(),
        signs: eps,
        matrix,
        rhs,
        solution,
        defect,
        edge_loops,
        cusp_paths,
        triangulation: t.clone(),
    })
}

/// Diagnostics for one closed normal path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    /// Log-parameter divided by `pi i`.
    #[serde(serialize_with = "crate::serialize_complex")]
    pub log_parameter: Complex64,
    pub parity: i64,
}

impl PathReport {
    pub fn is_zero(&self, tol: f64) -> bool {
        self.log_parameter.norm() <= tol && self.parity == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatteningAssignment {
    #[serde(skip)]
    pub params: Vec<ExtendedParam>,
    pub indices: Vec<(i64, i64)>,
    pub signs: Vec<i64>,
    pub edge_loops: Vec<PathReport>,
    pub cusp_paths: Vec<PathReport>,
    /// Exact integer residual of every row of the integer system.
    pub system_residuals: Vec<i64>,
    /// Only edge conditions were imposed because no cusp paths were given.
    pub edge_flattened_only: bool,
}

impl FlatteningAssignment {
    pub fn max_log_residual(&self) -> f64 {
        self.edge_loops
            .iter()
            .chain(&self.cusp_paths)
            .map(|r| r.log_parameter.norm())
            .fold(0.0, f64::max)
    }

    pub fn all_conditions_hold(&self, tol: f64) -> bool {
        self.system_residuals.iter().all(|&r| r == 0)
            && self.edge_loops.iter().chain(&self.cusp_paths).all(|r| r.is_zero(tol))
    }
}

impl FlatteningSystem {
    pub fn kernel(&self) -> &[Vec<i128>] {
        &self.solution.kernel
    }

    /// The particular solution plus `sum coeffs[k] * kernel[k]`.
    pub fn solution_with(&self, coeffs: &[i64]) -> Result<Vec<i128>> {
        let mut x = self.solution.particular.clone();
        for (k, &c) in self.solution.kernel.iter().zip(coeffs) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += c as i128 * ki;
            }
        }
        Ok(x)
    }

    pub fn particular(&self) -> Result<FlatteningAssignment> {
        self.assignment(&self.solution.particular)
    }

    /// Assignment and diagnostics for an integer vector of unknowns.
    pub fn assignment(&self, x: &[i128]) -> Result<FlatteningAssignment> {
        let n = self.shapes.len();
        let mut params = Vec::with_capacity(n);
        let mut indices = Vec::with_capacity(n);
        for t in 0..n {
            let p = i64::try_from(x[2 * t]).map_err(|_| Error::Overflow)?;
            let q = i64::try_from(x[2 * t + 1]).map_err(|_| Error::Overflow)?;
            params.push(ExtendedParam::new(self.shapes[t], p, q)?);
            indices.push((p, q));
        }
        let ax = self.matrix.mul_vec(x)?;
        let system_residuals = ax
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| i64::try_from(a - b).map_err(|_| Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        let report = |path: &NormalPath| -> Result<PathReport> {
            let mut log = Complex64::new(0.0, 0.0);
            let mut parity = 0i64;
            for p in self.triangulation.path_passes(path, None)? {
                let w = flatten(&params[p.tet])?.get(p.edge_type);
                log += w * (p.sense * self.signs[p.tet]) as f64;
                let (dp, dq) = index_coeffs(p.edge_type);
                parity += dp * params[p.tet].p + dq * params[p.tet].q
                    + parity_offset(self.shapes[p.tet], p.edge_type)?;
            }
            Ok(PathReport {
                log_parameter: log / I_PI,
                parity: parity.rem_euclid(2),
            })
        };
        let edge_loops = self.edge_loops.iter().map(report).collect::<Result<_>>()?;
        let cusp_paths = self.cusp_paths.iter().map(report).collect::<Result<_>>()?;
        Ok(FlatteningAssignment {
            params,
            indices,
            signs: self.signs.clone(),
            edge_loops,
            cusp_paths,
            system_residuals,
            edge_flattened_only: self.cusp_paths.is_empty(),
        })
    }
}

/// Particular solution of the flattening system for solved shapes.
pub fn solve_flattenings(t: &Triangulation, shapes: &[Complex64]) -> Result<FlatteningAssignment> {
    flattening_system(t, shapes)?.particular()
}

/// `sum_i eps_i [z_i, p_i, q_i]` (EP).
pub fn fundamental_element(a: &FlatteningAssignment) -> Result<EBElement> {
    let mut e = EBElement::zero(Mode::Ep);
    for (param, &s) in a.params.iter().zip(&a.signs) {
        e.add(*param, s)?;
    }
    Ok(e)
}

/// `vol` and `cs` from `R = i (vol + i cs)` modulo `pi^2` (or `2 pi^2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexVolume {
    pub volume: f64,
    /// `cs` reduced to `(-m/2, m/2]`.
    pub cs: f64,
    pub modulus: f64,
}

impl ComplexVolume {
    pub fn from_r(r: &ModPiSquared) -> Self {
        let v = r.symmetric();
        let m = r.modulus().value();
        // -Re R, folded back into (-m/2, m/2]
        let mut cs = -v.re;
        if cs <= -m / 2.0 {
            cs += m;
        }
        ComplexVolume {
            volume: v.im,
            cs: cs + 0.0,
            modulus: m,
        }
    }

    /// Distance of `cs` values in `R / m Z` together with the volume difference.
    pub fn distance(&self, other: &ComplexVolume) -> f64 {
        let d = self.cs - other.cs;
        let m = self.modulus;
        let dc = d - m * (d / m).round();
        dc.abs().max((self.volume - other.volume).abs())
    }
}

pub fn complex_volume(e: &EBElement) -> Result<ComplexVolume> {
    Ok(ComplexVolume::from_r(&r_of_element(e)?))
}

/// One simplex in a cycle around an edge `E`, with the types of `E` and of
/// the top and bottom edges `T_j`, `B_j` of its face shared with the next simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSimplex {
    pub param: ExtendedParam,
    pub sign: i64,
    pub edge_type: usize,
    pub top_type: usize,
    pub bottom_type: usize,
}

impl CycleSimplex {
    /// The flattening with `sign pi i` added at the top edges and removed at
    /// the bottom edges, as a point of the cover.
    pub fn primed(&self) -> ExtendedParam {
        let ind = |ty: usize, k: usize| i64::from(ty == k);
        let dp = self.sign * (ind(self.top_type, 0) - ind(self.bottom_type, 0));
        let dq = self.sign * (ind(self.top_type, 1) - ind(self.bottom_type, 1));
        self.param.with_indices(self.param.p + dp, self.param.q + dq)
    }
}

#[derive(Debug, Clone)]
pub struct CycleCheck {
    pub unprimed: EBElement,
    pub primed: EBElement,
    pub r_difference: f64,
    pub nu_equal: bool,
}

impl CycleCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.r_difference <= tol && self.nu_equal
    }
}

/// Compares `sum eps_j [w_j]` with `sum eps_j [w_j']` under `R` and `nu`.
pub fn cycle_relation_check(simplices: &[CycleSimplex], basis: &SymbolBasis) -> Result<CycleCheck> {
    let mut around = Complex64::new(0.0, 0.0);
    for s in simplices {
        around += flatten(&s.param)?.get(s.edge_type) * s.sign as f64;
    }
    if around.norm() > INTEGRALITY_TOL {
        return Err(Error::Contract(format!(
            "signed log-parameter sum around the edge is {around}, not 0"
        )));
    }
    let mut unprimed = EBElement::zero(Mode::Ep);
    let mut primed = EBElement::zero(Mode::Ep);
    for s in simplices {
        unprimed.add(s.param, s.sign)?;
        primed.add(s.primed(), s.sign)?;
    }
    let r_difference = r_of_element(&unprimed)?.distance(&r_of_element(&primed)?);
    let nu_equal = nu_symbolic(&unprimed, basis)? == nu_symbolic(&primed, basis)?;
    Ok(CycleCheck {
        unprimed,
        primed,
        r_difference,
        nu_equal,
    })
}

/// The three simplices of a five-term configuration around edge `z_a z_b`,
/// with `top` one of `a, b`; `forward` picks the cyclic direction.
pub fn five_point_cycle(
    tuple: &FiveTermTuple,
    edge: (usize, usize),
    top: usize,
    forward: bool,
) -> Result<Vec<CycleSimplex>> {
    let (a, b) = edge;
    if a == b || a > 4 || b > 4 || (top != a && top != b) {
        return Err(Error::Contract(format!("bad edge {a}{b} with top {top}")));
    }
    let bottom = if top == a { b } else { a };
    let mut others: Vec<usize> = (0..5).filter(|&v| v != a && v != b).collect();
    if !forward {
        others.swap(1, 2);
    }
    let params = tuple.params()?;
    let local = |omit: usize, u: usize, v: usize| -> Result<usize> {
        let verts = five_point_simplex(omit);
        let pos = |x: usize| verts.iter().position(|&y| y == x).unwrap();
        edge_type(pos(u), pos(v))
    };
    (0..3)
        .map(|j| {
            let omit = others[j];
            let next = others[(j + 1) % 3];
            let shared = others.iter().copied().find(|&v| v != omit && v != next).unwrap();
            Ok(CycleSimplex {
                param: params[omit],
                sign: if omit.is_multiple_of(2) { 1 } else { -1 },
                edge_type: local(omit, a, b)?,
                top_type: local(omit, top, shared)?,
                bottom_type: local(omit, bottom, shared)?,
            })
        })
        .collect()
}

/// Two copies of one ordered simplex folded onto each other along edge `(a, b)`
/// with signs `(+1, -1)`. The second copy's indices differ by `shift` in the
/// direction that keeps the log-parameter at the edge fixed.
pub fn folded_cycle(
    z: Complex64,
    edge: (usize, usize),
    top: usize,
    indices: (i64, i64),
    shift: i64,
) -> Result<Vec<CycleSimplex>> {
    let (a, b) = edge;
    let ty = edge_type(a, b)?;
    if top != a && top != b {
        return Err(Error::Contract(format!("top {top} is not on edge {a}{b}")));
    }
    let bottom = if top == a { b } else { a };
    let (p, q) = indices;
    let second = match ty {
        0 => (p, q + shift),
        1 => (p + shift, q),
        _ => (p + shift, q - shift),
    };
    let mut rest = (0..4).filter(|&v| v != a && v != b);
    let c = rest.next().unwrap();
    let d = rest.next().unwrap();
    // first simplex passes to the second through face (a, b, c), back through (a, b, d)
    Ok(vec![
        CycleSimplex {
            param: ExtendedParam::new(z, p, q)?,
            sign: 1,
            edge_type: ty,
            top_type: edge_type(top, c)?,
            bottom_type: edge_type(bottom, c)?,
        },
        CycleSimplex {
            param: ExtendedParam::new(z, second.0, second.1)?,
            sign: -1,
            edge_type: ty,
            top_type: edge_type(top, d)?,
            bottom_type: edge_type(bottom, d)?,
        },
    ])
}

/// `SIMPLEX_EDGES` re-exported for callers enumerating folded configurations.
pub const TETRAHEDRON_EDGES: [(usize, usize); 6] = SIMPLEX_EDGES;

/// `pi^2`, the modulus of complex volumes in the EP pipeline.
pub const CS_MODULUS: f64 = PI_SQUARED;
