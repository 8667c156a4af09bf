use std::fmt::Write as _;

use ebloch::bloch::Mode;
use ebloch::flattening::{AbelianGroup, FlatteningAssignment, IntegralDefect, PathReport};
use ebloch::pipeline::{CvolReport, Residuals};
use ebloch::triangulation::Triangulation;
use ebloch::verify::SuiteReport;
use num_complex::Complex64;
use serde::Serialize;

fn pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Serialize)]
pub struct Cvol {
    pub volume: f64,
    pub cs_mod_pi2: f64,
    pub flattenings: Vec<(i64, i64)>,
    pub shapes: Vec<[f64; 2]>,
    pub residuals: Residuals,
    pub mode: Mode,
    pub warnings: Vec<String>,
}

impl Cvol {
    pub fn new(r: &CvolReport) -> Self {
        Cvol {
            volume: r.volume,
            cs_mod_pi2: r.cs,
            flattenings: r.assignment.indices.clone(),
            shapes: pairs(&r.shapes.shapes),
            residuals: r.residuals.clone(),
            mode: r.mode,
            warnings: r.warnings.clone(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "volume      {:.15}", self.volume);
        let _ = writeln!(s, "cs          {:.15}", self.cs_mod_pi2);
        let _ = writeln!(s, "mode        {}", serde_json::to_value(self.mode).unwrap_or_default().as_str().unwrap_or(""));
        for (i, ((p, q), z)) in self.flattenings.iter().zip(&self.shapes).enumerate() {
            let _ = writeln!(s, "tet {i:<4}    z = {:+.15} {:+.15}i   (p, q) = ({p}, {q})", z[0], z[1]);
        }
        let r = &self.residuals;
        let _ = writeln!(
            s,
            "residuals   gluing {:.1e}, log-parameters {:.1e}, integer system {}, odd parities {}",
            r.gluing, r.log_parameters, r.integer_system, r.odd_parities
        );
        for w in &self.warnings {
            let _ = writeln!(s, "warning     {w}");
        }
        s
    }
}

#[derive(Serialize)]
pub struct Flatten {
    pub flattenings: Vec<(i64, i64)>,
    pub signs: Vec<i64>,
    pub shapes: Vec<[f64; 2]>,
    pub defect: IntegralDefect,
    pub edge_loops: Vec<PathReport>,
    pub cusp_paths: Vec<PathReport>,
    pub system_residuals: Vec<i64>,
    pub edge_flattened_only: bool,
    pub warnings: Vec<String>,
}

impl Flatten {
    pub fn new(shapes: &[Complex64], a: &FlatteningAssignment, defect: IntegralDefect, warnings: Vec<String>) -> Self {
        Flatten {
            flattenings: a.indices.clone(),
            signs: a.signs.clone(),
            shapes: pairs(shapes),
            defect,
            edge_loops: a.edge_loops.clone(),
            cusp_paths: a.cusp_paths.clone(),
            system_residuals: a.system_residuals.clone(),
            edge_flattened_only: a.edge_flattened_only,
            warnings,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tet  sign       p       q");
        for (i, ((p, q), e)) in self.flattenings.iter().zip(&self.signs).enumerate() {
            let _ = writeln!(s, "{i:<4} {e:+4} {p:7} {q:7}");
        }
        let _ = writeln!(s, "defect / (pi i) per edge: {:?} (valences {:?})", self.defect.values, self.defect.valences);
        let path = |p: &PathReport| format!("log/(pi i) = {:.1e}, parity {}", p.log_parameter.norm(), p.parity);
        for (i, p) in self.edge_loops.iter().enumerate() {
            let _ = writeln!(s, "edge loop {i}: {}", path(p));
        }
        for (i, p) in self.cusp_paths.iter().enumerate() {
            let _ = writeln!(s, "cusp path {i}: {}", path(p));
        }
        let _ = writeln!(s, "integer system residuals: {:?}", self.system_residuals);
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

#[derive(Serialize)]
pub struct Homology {
    pub groups: Vec<(String, AbelianGroup, String)>,
    pub chain_complex: bool,
    pub h1_mod2_of_complex: usize,
}

impl Homology {
    pub fn new(h: &[AbelianGroup; 5], chain_complex: bool, h1_mod2: usize) -> Self {
        let names = ["H5", "H4", "H3", "H2", "H1"];
        Homology {
            groups: names
                .iter()
                .zip(h)
                .map(|(n, g)| (n.to_string(), g.clone(), g.to_string()))
                .collect(),
            chain_complex,
            h1_mod2_of_complex: h1_mod2,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for (name, _, shown) in &self.groups {
            let _ = writeln!(s, "{name} = {shown}");
        }
        let _ = writeln!(s, "chain complex: {}", self.chain_complex);
        let _ = writeln!(s, "dim H1(K; Z/2) = {}", self.h1_mod2_of_complex);
        s
    }
}

#[derive(Serialize)]
pub struct EdgeClassReport {
    pub valence: usize,
    /// `(tet, a, b)` for each tetrahedron edge in the class.
    pub incidences: Vec<(usize, usize, usize)>,
}

#[derive(Serialize)]
pub struct VertexReport {
    pub corners: usize,
    pub link_euler_characteristic: i64,
}

#[derive(Serialize)]
pub struct Edges {
    pub edge_classes: Vec<EdgeClassReport>,
    pub vertices: Vec<VertexReport>,
    pub orientation_signs: Vec<i64>,
    pub order_preserving: bool,
}

impl Edges {
    pub fn new(t: &Triangulation) -> ebloch::Result<Self> {
        Ok(Edges {
            edge_classes: t
                .edge_classes()
                .iter()
                .map(|c| EdgeClassReport {
                    valence: c.valence(),
                    incidences: c.incidences.iter().map(|i| (i.tet, i.from, i.to)).collect(),
                })
                .collect(),
            vertices: t
                .vertex_classes()
                .iter()
                .map(|v| VertexReport {
                    corners: v.corners.len(),
                    link_euler_characteristic: v.link_euler_characteristic,
                })
                .collect(),
            orientation_signs: t.orientation_signs()?,
            order_preserving: t.is_order_preserving(),
        })
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.edge_classes.iter().enumerate() {
            let members: Vec<String> = c.incidences.iter().map(|(t, a, b)| format!("{t}:{a}{b}")).collect();
            let _ = writeln!(s, "edge {i}: valence {}  [{}]", c.valence, members.join(" "));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(
                s,
                "vertex {i}: {} corners, link Euler characteristic {}",
                v.corners, v.link_euler_characteristic
            );
        }
        let _ = writeln!(s, "orientation signs: {:?}", self.orientation_signs);
        let _ = writeln!(s, "order-preserving gluings: {}", self.order_preserving);
        s
    }
}

#[derive(Serialize)]
pub struct Verify {
    pub seed: u64,
    pub count: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl Verify {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.suites {
            let _ = writeln!(
                s,
                "{:<16} {:>6} instances  max R residual {:.2e}  {}",
                r.suite,
                r.instances,
                r.max_r_residual,
                if r.passed() { "ok".to_string() } else { format!("{} FAILED", r.failures) }
            );
            for c in &r.counterexamples {
                let _ = writeln!(
                    s,
                    "    #{} {}  R residual {:.2e}, nu exact {}, exact checks {}{}",
                    c.index,
                    c.input,
                    c.r_residual,
                    c.nu_exact,
                    c.exact,
                    c.error.as_deref().map(|e| format!(", error: {e}")).unwrap_or_default()
                );
            }
        }
        let _ = writeln!(s, "{}", if self.passed { "all suites passed" } else { "some suites FAILED" });
        s
    }
}
