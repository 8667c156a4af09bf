//! Randomized identity suites checked through the computable homomorphisms
//! `R` (mod `pi^2` or `2 pi^2`), `nu` (exact wedge symbols) and `epsilon`.
//!
//! Every instance draws from its own ChaCha stream keyed by the seed, the
//! suite and the instance index, so results do not depend on scheduling.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bloch::{
    chi, chi_hat, epsilon_parity, five_term_instance, kappa_element, nu_symbolic, r_of_element,
    super_transfer_rhs, transfer_instance, EBElement, FiveTermTuple, Mode, SymbolBasis,
};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::flattening::{cycle_relation_check, five_point_cycle, folded_cycle, TETRAHEDRON_EDGES};
use crate::geometry::{five_point_relation_matrix, v_family_vector};
use crate::intmat::{integer_kernel, smith_invariants, IntMatrix};
use crate::polylog::{principal_log, reduce_mod, ModPiSquared, Modulus, PI_SQUARED};
use crate::wedge::{wedge, SymbolVector, WedgeExpr, PI_I};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_COUNT: usize = 100;
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    FiveTerm,
    FiveTermEep,
    Transfer,
    SuperTransfer,
    ThreeEquations,
    Homo,
    OneMinusX,
    Chi,
    ChiHat,
    Parity,
    Kappa,
    EdgeKernel,
    CycleThree,
    CycleFolded,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::FiveTerm,
        Suite::FiveTermEep,
        Suite::Transfer,
        Suite::SuperTransfer,
        Suite::ThreeEquations,
        Suite::Homo,
        Suite::OneMinusX,
        Suite::Chi,
        Suite::ChiHat,
        Suite::Parity,
        Suite::Kappa,
        Suite::EdgeKernel,
        Suite::CycleThree,
        Suite::CycleFolded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FiveTerm => "five_term",
            Suite::FiveTermEep => "five_term_eep",
            Suite::Transfer => "transfer",
            Suite::SuperTransfer => "super_transfer",
            Suite::ThreeEquations => "three_equations",
            Suite::Homo => "homo",
            Suite::OneMinusX => "one_minus_x",
            Suite::Chi => "chi",
            Suite::ChiHat => "chi_hat",
            Suite::Parity => "parity",
            Suite::Kappa => "kappa",
            Suite::EdgeKernel => "edge_kernel",
            Suite::CycleThree => "cycle_three",
            Suite::CycleFolded => "cycle_folded",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Instance RNG; independent of the order in which instances run.
    pub fn rng(self, seed: u64, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((self as u64) << 40) | index as u64);
        rng
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub count: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub execution: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            count: DEFAULT_COUNT,
            seed: 0,
            tolerance: DEFAULT_TOLERANCE,
            execution: Execution::default(),
        }
    }
}

/// Result of one randomized instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub index: usize,
    pub input: String,
    /// Distance of the `R` image from its expected value.
    pub r_residual: f64,
    /// `nu` image equals its expected value exactly.
    pub nu_exact: bool,
    /// Suite-specific exact checks (parity, lattice membership, ...).
    pub exact: bool,
    pub error: Option<String>,
}

impl Outcome {
    pub fn passed(&self, tol: f64) -> bool {
        self.error.is_none() && self.r_residual <= tol && self.nu_exact && self.exact
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: usize,
    pub failures: usize,
    pub max_r_residual: f64,
    pub counterexamples: Vec<Outcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Check {
    input: String,
    r_residual: f64,
    nu_exact: bool,
    exact: bool,
}

impl Check {
    fn new(input: String) -> Self {
        Check {
            input,
            r_residual: 0.0,
            nu_exact: true,
            exact: true,
        }
    }

    fn r(mut self, got: &ModPiSquared, expected: &ModPiSquared) -> Self {
        self.r_residual = self.r_residual.max(got.distance(expected));
        self
    }

    fn r_zero(self, e: &EBElement) -> Result<Self> {
        let got = r_of_element(e)?;
        Ok(self.r(&got, &ModPiSquared::zero(got.modulus())))
    }

    fn nu(mut self, got: &WedgeExpr, expected: &WedgeExpr) -> Self {
        self.nu_exact &= got == expected;
        self
    }

    fn nu_zero(self, e: &EBElement, basis: &SymbolBasis) -> Result<Self> {
        let got = nu_symbolic(e, basis)?;
        Ok(self.nu(&got, &WedgeExpr::zero()))
    }

    fn exact(mut self, ok: bool) -> Self {
        self.exact &= ok;
        self
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A non-real point in the box `[-2, 2] x [-2, 2]`, away from the real axis.
fn random_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let im = rng.gen_range(0.05..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    c(rng.gen_range(-2.0..2.0), im)
}

pub fn random_five_term_tuple(rng: &mut ChaCha8Rng, bound: i64) -> FiveTermTuple {
    loop {
        let y = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
        let s: f64 = rng.gen_range(0.02..0.96);
        let t: f64 = rng.gen_range(0.02..0.96);
        if s + t > 0.98 {
            continue;
        }
        let x = c(s, 0.0) + y * t;
        let offsets = [0; 5].map(|_| rng.gen_range(-bound..=bound));
        let tuple = FiveTermTuple::new(x, y, offsets);
        if tuple.in_ft_plus() {
            return tuple;
        }
    }
}

fn point_basis(z: Complex64) -> Result<SymbolBasis> {
    SymbolBasis::new().with_value("log_z", z)?.with_value("log_1mz", ONE - z)
}

fn index(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-4..=4)
}

fn instance(suite: Suite, rng: &mut ChaCha8Rng) -> Result<Check> {
    match suite {
        Suite::FiveTerm | Suite::FiveTermEep => {
            let t = random_five_term_tuple(rng, 3);
            let mode = if suite == Suite::FiveTerm { Mode::Ep } else { Mode::Eep };
            let e = five_term_instance(&t, mode)?;
            let basis = SymbolBasis::five_term(t.x, t.y)?;
            let offsets = [t.p0, t.p1, t.q0, t.q1, t.q2];
            let parity_ok = epsilon_parity(&e) == 0;
            Check::new(format!("x={} y={} offsets={offsets:?}", t.x, t.y))
                .r_zero(&e)?
                .nu_zero(&e, &basis)
                .map(|c| c.exact(parity_ok))
        }
        Suite::Transfer => {
            let z = random_point(rng);
            let (p, q, p2, q2) = (index(rng), index(rng), index(rng), index(rng));
            let e = transfer_instance(z, p, q, p2, q2, Mode::Ep)?;
            Check::new(format!("z={z} p={p} q={q} p'={p2} q'={q2}"))
                .r_zero(&e)?
                .nu_zero(&e, &point_basis(z)?)
        }
        Suite::SuperTransfer => {
            let z = random_point(rng);
            let (p, q) = (index(rng), index(rng));
            let mut e = super_transfer_rhs(z, p, q)?;
            e.add_point(z, p, q, -1)?;
            Check::new(format!("z={z} p={p} q={q}"))
                .r_zero(&e)?
                .nu_zero(&e, &point_basis(z)?)
        }
        Suite::ThreeEquations => {
            let z = random_point(rng);
            let (p, q, p2, q2, s) = (index(rng), index(rng), index(rng), index(rng), index(rng));
            let mut e = EBElement::zero(Mode::Ep);
            // [x,p,q]-[x,p,q'] = [x,p,q-1]-[x,p,q'-1]
            for (pp, qq, k) in [(p, q, 1), (p, q2, -1), (p, q - 1, -1), (p, q2 - 1, 1)] {
                e.add_point(z, pp, qq, k)?;
            }
            let mut f = EBElement::zero(Mode::Ep);
            // [x,p,q]-[x,p',q] = [x,p-1,q]-[x,p'-1,q]
            for (pp, qq, k) in [(p, q, 1), (p2, q, -1), (p - 1, q, -1), (p2 - 1, q, 1)] {
                f.add_point(z, pp, qq, k)?;
            }
            let mut g = EBElement::zero(Mode::Ep);
            // [x,p,q]-[x,p+s,q-s] = [x,p+1,q-1]-[x,p+s+1,q-s-1]
            for (pp, qq, k) in [(p, q, 1), (p + s, q - s, -1), (p + 1, q - 1, -1), (p + s + 1, q - s - 1, 1)] {
                g.add_point(z, pp, qq, k)?;
            }
            let basis = point_basis(z)?;
            Check::new(format!("z={z} p={p} q={q} p'={p2} q'={q2} s={s}"))
                .r_zero(&e)?
                .r_zero(&f)?
                .r_zero(&g)?
                .nu_zero(&e, &basis)?
                .nu_zero(&f, &basis)?
                .nu_zero(&g, &basis)
        }
        Suite::Homo => {
            let t = random_five_term_tuple(rng, 3);
            let (p0, p1) = (index(rng), index(rng));
            let p2 = p1 - p0;
            let (q0, q1, q2) = (index(rng), index(rng), index(rng));
            let yx = t.y / t.x;
            let mut e = EBElement::zero(Mode::Ep);
            for (z, p, q, k) in [(t.x, p0, q0, 1), (t.y, p1, q1, -1), (yx, p2, q2, 1)] {
                e.add_point(z, p, q, k)?;
                e.add_point(z, p, q - 1, -k)?;
            }
            Check::new(format!("x={} y={} p=({p0},{p1},{p2}) q=({q0},{q1},{q2})", t.x, t.y))
                .r_zero(&e)?
                .nu_zero(&e, &SymbolBasis::five_term(t.x, t.y)?)
        }
        Suite::OneMinusX => {
            let z = random_point(rng);
            let (p, q) = (index(rng), index(rng));
            let mut e = EBElement::zero(Mode::Ep);
            e.add_point(z, p, q, 1)?;
            e.add_point(ONE - z, -q, -p, 1)?;
            let mut rhs = EBElement::zero(Mode::Ep);
            rhs.add_point(c(0.5, 0.0), 0, 0, 2)?;
            let basis = point_basis(z)?.with_value("log_2", c(2.0, 0.0))?;
            let expected = reduce_mod(c(-PI_SQUARED / 6.0, 0.0), Modulus::PiSquared);
            Check::new(format!("z={z} p={p} q={q}"))
                .r(&r_of_element(&e)?, &expected)
                .r(&r_of_element(&rhs)?, &expected)
                .nu_zero(&e.minus(&rhs)?, &basis)
        }
        Suite::Chi => {
            let z = random_point(rng);
            let e = chi(z)?;
            let i_pi = c(0.0, PI);
            let expected = reduce_mod(i_pi / 2.0 * principal_log(z)?, Modulus::PiSquared);
            let nu_expected = wedge(&SymbolVector::symbol("log_z"), &SymbolVector::symbol(PI_I));
            Ok(Check::new(format!("z={z}"))
                .r(&r_of_element(&e)?, &expected)
                .nu(&nu_symbolic(&e, &point_basis(z)?)?, &nu_expected))
        }
        Suite::ChiHat => {
            let z = random_point(rng);
            let e = chi_hat(z)?;
            let log_z = principal_log(z)?;
            let i_pi = c(0.0, PI);
            let expected = reduce_mod(i_pi * log_z, Modulus::TwoPiSquared);
            // EEP -> EP compatibility: chi_hat(z) mod pi^2 agrees with chi(z^2)
            let squared = r_of_element(&chi(z * z)?)?;
            let compat = r_of_element(&e)?.to_pi_squared();
            let two_nu = wedge(&SymbolVector::from_terms([("log_z", 2)]), &SymbolVector::symbol(PI_I));
            Ok(Check::new(format!("z={z}"))
                .r(&r_of_element(&e)?, &expected)
                .r(&compat, &squared)
                .nu(&nu_symbolic(&e, &point_basis(z)?)?, &two_nu))
        }
        Suite::Parity => {
            let t = random_five_term_tuple(rng, 3);
            let z = random_point(rng);
            let (p, q) = (index(rng), index(rng));
            let mut single = EBElement::zero(Mode::Ep);
            single.add_point(z, p, q, 1)?;
            let ok = epsilon_parity(&five_term_instance(&t, Mode::Ep)?) == 0
                && epsilon_parity(&kappa_element(z)?) == 1
                && i64::from(epsilon_parity(&single)) == (p * q).rem_euclid(2);
            Ok(Check::new(format!("x={} y={} z={z} p={p} q={q}", t.x, t.y)).exact(ok))
        }
        Suite::Kappa => {
            let z = random_point(rng);
            let w = random_point(rng);
            let k = kappa_element(z)?;
            let diff = k.minus(&kappa_element(w)?)?;
            let basis = point_basis(z)?
                .with_value("log_w", w)?
                .with_value("log_1mw", ONE - w)?;
            Check::new(format!("z={z} w={w}"))
                .r_zero(&k)?
                .r_zero(&diff)?
                .nu_zero(&diff, &basis)
        }
        Suite::EdgeKernel => {
            let m = IntMatrix::from_rows(&five_point_relation_matrix());
            let free = [0; 5].map(|_| rng.gen_range(-6..=6i64));
            let v = v_family_vector(free);
            let in_kernel = m.mul_vec(&v.map(i128::from))?.iter().all(|&x| x == 0);
            // an arbitrary kernel element is recovered from its free coordinates
            let kernel = integer_kernel(&m)?;
            let mut w = vec![0i128; 10];
            for k in &kernel {
                let coeff = rng.gen_range(-5..=5i128);
                for (wi, ki) in w.iter_mut().zip(k) {
                    *wi += coeff * ki;
                }
            }
            let wi = |i: usize| i64::try_from(w[i]).map_err(|_| Error::Overflow);
            let rebuilt = v_family_vector([wi(0)?, wi(1)?, wi(5)?, wi(6)?, wi(7)?]);
            let recovered = rebuilt.iter().zip(&w).all(|(&a, &b)| a as i128 == b);
            Ok(Check::new(format!("free={free:?} kernel combination={w:?}"))
                .exact(in_kernel && recovered && kernel.len() == 5))
        }
        Suite::CycleThree => {
            let t = random_five_term_tuple(rng, 3);
            let a = rng.gen_range(0..5);
            let mut b = rng.gen_range(0..4);
            if b >= a {
                b += 1;
            }
            let (a, b) = (a.min(b), a.max(b));
            let top = if rng.gen_bool(0.5) { a } else { b };
            let forward = rng.gen_bool(0.5);
            let cyc = five_point_cycle(&t, (a, b), top, forward)?;
            let check = cycle_relation_check(&cyc, &SymbolBasis::five_term(t.x, t.y)?)?;
            let mut out = Check::new(format!(
                "x={} y={} offsets={:?} edge={a}{b} top={top} forward={forward}",
                t.x,
                t.y,
                [t.p0, t.p1, t.q0, t.q1, t.q2]
            ));
            out.r_residual = check.r_difference;
            out.nu_exact = check.nu_equal;
            Ok(out)
        }
        Suite::CycleFolded => {
            let z = random_point(rng);
            let (a, b) = TETRAHEDRON_EDGES[rng.gen_range(0..6)];
            let top = if rng.gen_bool(0.5) { a } else { b };
            let ind = (index(rng), index(rng));
            let shift = index(rng);
            let cyc = folded_cycle(z, (a, b), top, ind, shift)?;
            let check = cycle_relation_check(&cyc, &point_basis(z)?)?;
            let mut out = Check::new(format!("z={z} edge={a}{b} top={top} indices={ind:?} shift={shift}"));
            out.r_residual = check.r_difference;
            out.nu_exact = check.nu_equal;
            Ok(out)
        }
    }
}

/// Runs instance `index` of `suite`.
pub fn run_instance(suite: Suite, seed: u64, index: usize) -> Outcome {
    let mut rng = suite.rng(seed, index);
    match instance(suite, &mut rng) {
        Ok(c) => Outcome {
            index,
            input: c.input,
            r_residual: c.r_residual,
            nu_exact: c.nu_exact,
            exact: c.exact,
            error: None,
        },
        Err(e) => Outcome {
            index,
            input: String::new(),
            r_residual: f64::INFINITY,
            nu_exact: false,
            exact: false,
            error: Some(e.to_string()),
        },
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let outcomes = map_indexed(cfg.execution, cfg.count, |i| run_instance(suite, cfg.seed, i));
    let failed: Vec<Outcome> = outcomes.iter().filter(|o| !o.passed(cfg.tolerance)).cloned().collect();
    SuiteReport {
        suite,
        instances: outcomes.len(),
        failures: failed.len(),
        max_r_residual: outcomes.iter().map(|o| o.r_residual).fold(0.0, f64::max),
        counterexamples: failed.into_iter().take(MAX_COUNTEREXAMPLES).collect(),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect()
}

/// The integer solutions of the ten edge relations of the five-point
/// configuration form exactly the lattice spanned by the V family.
pub fn edge_kernel_equals_v() -> Result<bool> {
    let m = IntMatrix::from_rows(&five_point_relation_matrix());
    let basis: Vec<[i64; 10]> = (0..5)
        .map(|k| {
            let mut free = [0; 5];
            free[k] = 1;
            v_family_vector(free)
        })
        .collect();
    let v = IntMatrix::from_rows(&basis).transpose();
    let annihilated = m.mul(&v)?.is_zero();
    let kernel_rank = integer_kernel(&m)?.len();
    let inv = smith_invariants(&v)?;
    // V sits inside the saturated kernel; equal rank and unit invariants force equality
    Ok(annihilated && kernel_rank == 5 && inv.len() == 5 && inv.iter().all(|&d| d == 1))
}
