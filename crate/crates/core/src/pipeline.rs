//! Triangulation to complex volume: shapes, flattenings, fundamental element
//! and its lifted Rogers value.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::bloch::{EBElement, Mode};
use crate::error::Error;
use crate::flattening::{
    complex_volume, flattening_system, fundamental_element, ComplexVolume, FlatteningAssignment,
};
use crate::gluing::{solve_shapes, ShapeSolution, SolveOptions};
use crate::polylog::PI_SQUARED;
use crate::triangulation::{parse_triangulation, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Parse,
    Shapes,
    Flattenings,
    Evaluation,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Parse => "parse",
            Stage::Shapes => "shape solve",
            Stage::Flattenings => "flattening solve",
            Stage::Evaluation => "evaluation",
        })
    }
}

#[derive(Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub source: Error,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.stage, self.source)
    }
}

impl std::error::Error for PipelineError {}

fn at(stage: Stage) -> impl FnOnce(Error) -> PipelineError {
    move |source| PipelineError { stage, source }
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub solve: SolveOptions,
    pub mode: Mode,
    pub initial: Option<Vec<Complex64>>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            solve: SolveOptions::default(),
            mode: Mode::Ep,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    /// Max-norm of the gluing equation residuals at the solved shapes.
    pub gluing: f64,
    /// Largest |log-parameter| / pi over edge loops and cusp paths.
    pub log_parameters: f64,
    /// Largest |entry| of the integer system residual (0 for a solution).
    pub integer_system: i64,
    /// Number of edge loops and cusp paths with odd parity.
    pub odd_parities: usize,
    /// Distance of `beta*(omega) / (pi i)` to the integers before rounding.
    pub defect_rounding: f64,
}

#[derive(Debug, Clone)]
pub struct CvolReport {
    pub volume: f64,
    /// `cs` in `(-m/2, m/2]` for the modulus `m` below.
    pub cs: f64,
    pub modulus: f64,
    pub mode: Mode,
    pub shapes: ShapeSolution,
    pub assignment: FlatteningAssignment,
    pub element: EBElement,
    pub residuals: Residuals,
    pub warnings: Vec<String>,
}

pub fn run_document(document: &str, opts: &PipelineOptions) -> Result<CvolReport, PipelineError> {
    let t = parse_triangulation(document).map_err(at(Stage::Parse))?;
    run(&t, opts)
}

/// The same element read in EEP mode, available when every index is even.
fn eep_element(e: &EBElement) -> Option<EBElement> {
    if e.terms().all(|(g, _)| g.p % 2 == 0 && g.q % 2 == 0) {
        let mut out = EBElement::zero(Mode::Eep);
        for (g, c) in e.terms() {
            out.add(*g, c).ok()?;
        }
        Some(out)
    } else {
        None
    }
}

pub fn run(t: &Triangulation, opts: &PipelineOptions) -> Result<CvolReport, PipelineError> {
    let shapes = solve_shapes(t, opts.initial.as_deref(), opts.solve).map_err(at(Stage::Shapes))?;
    let system = flattening_system(t, &shapes.shapes).map_err(at(Stage::Flattenings))?;
    let assignment = system.particular().map_err(at(Stage::Flattenings))?;
    let mut warnings = shapes.warnings.clone();
    if assignment.edge_flattened_only {
        warnings.push("edge-flattened only, unverified: cs is not determined without cusp paths".into());
    }
    if !t.is_order_preserving() {
        warnings.push(
            "face gluings do not preserve vertex order; the parity condition is not meaningful and cs is only reliable mod pi^2/6"
                .into(),
        );
    }
    let element = fundamental_element(&assignment).map_err(at(Stage::Evaluation))?;
    let cv: ComplexVolume = match opts.mode {
        Mode::Ep => complex_volume(&element),
        Mode::Eep => match eep_element(&element) {
            Some(e) => complex_volume(&e),
            None => {
                warnings.push("flattening has odd indices; EEP value unavailable, reporting cs mod pi^2".into());
                complex_volume(&element)
            }
        },
    }
    .map_err(at(Stage::Evaluation))?;
    let paths = assignment.edge_loops.iter().chain(&assignment.cusp_paths);
    let residuals = Residuals {
        gluing: shapes.residual,
        log_parameters: paths.clone().map(|r| r.log_parameter.norm()).fold(0.0, f64::max),
        integer_system: assignment.system_residuals.iter().map(|r| r.abs()).max().unwrap_or(0),
        odd_parities: paths.filter(|r| r.parity != 0).count(),
        defect_rounding: system.defect.rounding_error,
    };
    Ok(CvolReport {
        volume: cv.volume,
        cs: cv.cs,
        modulus: cv.modulus,
        mode: if cv.modulus > PI_SQUARED * 1.5 { Mode::Eep } else { Mode::Ep },
        shapes,
        assignment,
        element,
        residuals,
        warnings,
    })
}
