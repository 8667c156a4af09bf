//! Formal elements of the extended pre-Bloch group and the computable maps on
//! them: the lifted Rogers function `R`, the symbolic `nu` into `C ^ C`, and the
//! parity homomorphism `[z,p,q] -> pq mod 2`.
//!
//! Two variants share this code. [`Mode::Ep`] allows all integer indices and
//! evaluates `R` modulo `pi^2`; [`Mode::Eep`] requires even indices and works
//! modulo `2 pi^2`.
//!
//! Nothing here decides equality in the group itself. Identities are checked
//! through `R`, `nu`, and the parity map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::five_point_shapes;
use crate::polylog::{self, reduce_mod, ModPiSquared, Modulus};
use crate::wedge::{wedge, SymbolVector, WedgeExpr, PI_I};

/// Offset used to evaluate a generator sitting on one side of a real cut.
pub const CUT_SIDE_DELTA: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Ep,
    Eep,
}

impl Mode {
    pub fn modulus(self) -> Modulus {
        match self {
            Mode::Ep => Modulus::PiSquared,
            Mode::Eep => Modulus::TwoPiSquared,
        }
    }

    fn check(self, p: i64, q: i64) -> Result<()> {
        if self == Mode::Eep && (p % 2 != 0 || q % 2 != 0) {
            return Err(Error::Contract(format!(
                "EEP generators need even indices, got p={p}, q={q}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutSide {
    /// `r + 0i`
    Upper,
    /// `r - 0i`
    Lower,
}

/// A point `(z; p, q)` of the cover.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedParam {
    pub z: Complex64,
    pub p: i64,
    pub q: i64,
    pub cut_side: Option<CutSide>,
}

fn on_real_cut(z: Complex64) -> bool {
    z.im == 0.0 && (z.re < 0.0 || z.re > 1.0)
}

impl ExtendedParam {
    /// A point off the real cuts `(-inf, 0)` and `(1, inf)`.
    pub fn new(z: Complex64, p: i64, q: i64) -> Result<Self> {
        if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
            return Err(Error::domain("ExtendedParam", z, "z must avoid 0 and 1"));
        }
        if on_real_cut(z) {
            return Err(Error::domain(
                "ExtendedParam",
                z,
                "real z outside [0, 1] needs a cut side",
            ));
        }
        Ok(ExtendedParam {
            z,
            p,
            q,
            cut_side: None,
        })
    }

    /// A point on a real cut, tagged `r + 0i` or `r - 0i`.
    pub fn on_cut(r: f64, p: i64, q: i64, side: CutSide) -> Result<Self> {
        let z = Complex64::new(r, 0.0);
        if !on_real_cut(z) {
            return Err(Error::domain(
                "ExtendedParam",
                z,
                "cut side only applies to real z outside [0, 1]",
            ));
        }
        Ok(ExtendedParam {
            z,
            p,
            q,
            cut_side: Some(side),
        })
    }

    pub fn with_indices(&self, p: i64, q: i64) -> Self {
        ExtendedParam { p, q, ..*self }
    }

    /// Where numeric functions are evaluated: `z` itself, or `z +- i delta`
    /// for tagged points on a cut.
    pub fn evaluation_point(&self) -> Result<Complex64> {
        match self.cut_side {
            Some(CutSide::Upper) => Ok(self.z + Complex64::new(0.0, CUT_SIDE_DELTA)),
            Some(CutSide::Lower) => Ok(self.z - Complex64::new(0.0, CUT_SIDE_DELTA)),
            None if polylog::on_rogers_cut(self.z) => Err(Error::domain(
                "ExtendedParam",
                self.z,
                "on a branch cut without a side tag",
            )),
            None => Ok(self.z),
        }
    }

    fn sort_key(&self) -> (u64, u64, i64, i64, Option<CutSide>) {
        (
            self.z.re.to_bits(),
            self.z.im.to_bits(),
            self.p,
            self.q,
            self.cut_side,
        )
    }
}

impl PartialEq for ExtendedParam {
    fn eq(&self, other: &Self) -> bool {
        self.sort_key() == other.sort_key()
    }
}

impl Eq for ExtendedParam {}

impl PartialOrd for ExtendedParam {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedParam {
    fn cmp(&self, other: &Self) -> Ordering {
        self.z
            .re
            .total_cmp(&other.z.re)
            .then(self.z.im.total_cmp(&other.z.im))
            .then(self.p.cmp(&other.p))
            .then(self.q.cmp(&other.q))
            .then(self.cut_side.cmp(&other.cut_side))
    }
}

impl fmt::Display for ExtendedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.cut_side {
            Some(CutSide::Upper) => "+0i",
            Some(CutSide::Lower) => "-0i",
            None => "",
        };
        write!(f, "[{}{}, {}, {}]", self.z, side, self.p, self.q)
    }
}

/// Integer combination of generators `[z, p, q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EBElement {
    mode: Mode,
    terms: BTreeMap<ExtendedParam, i64>,
}

impl EBElement {
    pub fn zero(mode: Mode) -> Self {
        EBElement {
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(param: ExtendedParam, mode: Mode) -> Result<Self> {
        let mut e = Self::zero(mode);
        e.add(param, 1)?;
        Ok(e)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn add(&mut self, param: ExtendedParam, coeff: i64) -> Result<()> {
        self.mode.check(param.p, param.q)?;
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(param).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&param);
        }
        Ok(())
    }

    /// Shorthand for `add(ExtendedParam::new(z, p, q)?, coeff)`.
    pub fn add_point(&mut self, z: Complex64, p: i64, q: i64, coeff: i64) -> Result<()> {
        self.add(ExtendedParam::new(z, p, q)?, coeff)
    }

    pub fn add_element(&mut self, other: &EBElement, coeff: i64) -> Result<()> {
        if other.mode != self.mode {
            return Err(Error::Contract("mixing EP and EEP elements".into()));
        }
        for (param, c) in &other.terms {
            self.add(*param, coeff * c)?;
        }
        Ok(())
    }

    pub fn minus(&self, other: &EBElement) -> Result<EBElement> {
        let mut out = self.clone();
        out.add_element(other, -1)?;
        Ok(out)
    }

    /// Formally zero (all coefficients cancel); says nothing about the relations.
    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtendedParam, i64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for EBElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (param, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{param}")?;
        }
        Ok(())
    }
}

/// Base point `(x, y)` of the five-term family plus the five free offsets.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FiveTermTuple {
    #[serde(serialize_with = "crate::serialize_complex")]
    pub x: Complex64,
    #[serde(serialize_with = "crate::serialize_complex")]
    pub y: Complex64,
    pub p0: i64,
    pub p1: i64,
    pub q0: i64,
    pub q1: i64,
    pub q2: i64,
}

impl FiveTermTuple {
    pub fn new(x: Complex64, y: Complex64, offsets: [i64; 5]) -> Self {
        let [p0, p1, q0, q1, q2] = offsets;
        FiveTermTuple {
            x,
            y,
            p0,
            p1,
            q0,
            q1,
            q2,
        }
    }

    /// `Im y > 0` and `x` strictly inside the triangle `0, 1, y`.
    pub fn in_ft_plus(&self) -> bool {
        if self.y.im <= 0.0 || self.x.im <= 0.0 {
            return false;
        }
        // barycentric coordinates with respect to (0, 1, y)
        let t = self.x.im / self.y.im;
        let s = self.x.re - t * self.y.re;
        t > 0.0 && s > 0.0 && s + t < 1.0
    }

    /// Derived `(p2, p3, q3, p4, q4)`.
    pub fn derived(&self) -> [i64; 5] {
        let (p0, p1, q0, q1, q2) = (self.p0, self.p1, self.q0, self.q1, self.q2);
        [
            p1 - p0,
            p1 - p0 + q1 - q0,
            q2 - q1,
            q1 - q0,
            q2 - q1 - p0,
        ]
    }

    /// The five `(p_i, q_i)` pairs in order.
    pub fn indices(&self) -> [(i64, i64); 5] {
        let [p2, p3, q3, p4, q4] = self.derived();
        [
            (self.p0, self.q0),
            (self.p1, self.q1),
            (p2, self.q2),
            (p3, q3),
            (p4, q4),
        ]
    }

    pub fn params(&self) -> Result<[ExtendedParam; 5]> {
        let shapes = five_point_shapes(self.x, self.y)?;
        let idx = self.indices();
        let mut out = [ExtendedParam::new(shapes[0], idx[0].0, idx[0].1)?; 5];
        for i in 1..5 {
            out[i] = ExtendedParam::new(shapes[i], idx[i].0, idx[i].1)?;
        }
        Ok(out)
    }
}

/// `sum_i (-1)^i [x_i, p_i, q_i]`; in EEP mode every index is doubled.
pub fn five_term_instance(t: &FiveTermTuple, mode: Mode) -> Result<EBElement> {
    if !t.in_ft_plus() {
        return Err(Error::domain(
            "five_term_instance",
            t.x,
            "(x, y) is not in FT+ (Im y > 0, x inside triangle 0, 1, y)",
        ));
    }
    let scale = if mode == Mode::Eep { 2 } else { 1 };
    let mut e = EBElement::zero(mode);
    for (i, param) in t.params()?.into_iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        e.add(param.with_indices(scale * param.p, scale * param.q), sign)?;
    }
    Ok(e)
}

/// `[z,p,q] + [z,p',q'] - [z,p,q'] - [z,p',q]`.
pub fn transfer_instance(
    z: Complex64,
    p: i64,
    q: i64,
    p2: i64,
    q2: i64,
    mode: Mode,
) -> Result<EBElement> {
    let mut e = EBElement::zero(mode);
    e.add_point(z, p, q, 1)?;
    e.add_point(z, p2, q2, 1)?;
    e.add_point(z, p, q2, -1)?;
    e.add_point(z, p2, q, -1)?;
    Ok(e)
}

/// `chi(z) = [z,0,1] - [z,0,0]` (EP).
pub fn chi(z: Complex64) -> Result<EBElement> {
    let mut e = EBElement::zero(Mode::Ep);
    e.add_point(z, 0, 1, 1)?;
    e.add_point(z, 0, 0, -1)?;
    Ok(e)
}

/// `chi_hat(z) = [z,0,2] - [z,0,0]` (EEP).
pub fn chi_hat(z: Complex64) -> Result<EBElement> {
    let mut e = EBElement::zero(Mode::Eep);
    e.add_point(z, 0, 2, 1)?;
    e.add_point(z, 0, 0, -1)?;
    Ok(e)
}

/// `kappa = [z,1,1] + [z,0,0] - [z,1,0] - [z,0,1]` (EP).
pub fn kappa_element(z: Complex64) -> Result<EBElement> {
    let mut e = EBElement::zero(Mode::Ep);
    e.add_point(z, 1, 1, 1)?;
    e.add_point(z, 0, 0, 1)?;
    e.add_point(z, 1, 0, -1)?;
    e.add_point(z, 0, 1, -1)?;
    Ok(e)
}

/// `pq[z,1,1] - (pq-p)[z,1,0] - (pq-q)[z,0,1] + (pq-p-q+1)[z,0,0]` (EP).
pub fn super_transfer_rhs(z: Complex64, p: i64, q: i64) -> Result<EBElement> {
    let pq = p * q;
    let mut e = EBElement::zero(Mode::Ep);
    e.add_point(z, 1, 1, pq)?;
    e.add_point(z, 1, 0, -(pq - p))?;
    e.add_point(z, 0, 1, -(pq - q))?;
    e.add_point(z, 0, 0, pq - p - q + 1)?;
    Ok(e)
}

/// Sum of `coeff * R(generator)`, reduced by the element's modulus.
pub fn r_of_element(e: &EBElement) -> Result<ModPiSquared> {
    let modulus = e.mode.modulus();
    let mut total = ModPiSquared::zero(modulus);
    for (param, c) in e.terms() {
        let raw = polylog::lifted_rogers_raw(param.evaluation_point()?, param.p, param.q)?;
        total = total + reduce_mod(raw * c as f64, modulus);
    }
    Ok(total)
}

/// `sum coeff * p q mod 2`.
pub fn epsilon_parity(e: &EBElement) -> u8 {
    let s: i64 = e
        .terms()
        .map(|(param, c)| (c.rem_euclid(2) * param.p.rem_euclid(2) * param.q.rem_euclid(2)) % 2)
        .sum();
    (s % 2) as u8
}

/// Named base values whose logarithms form the symbol basis for `nu`.
#[derive(Debug, Clone)]
pub struct SymbolBasis {
    names: Vec<String>,
    logs: Vec<Complex64>,
}

/// Largest exponent tried per basis value when factoring a generator.
const MAX_EXPONENT: i32 = 2;
pub const MAX_BASIS_SIZE: usize = 8;

/// Exponent tables shared by every basis of the same size.
static CANDIDATES: [OnceLock<Vec<Vec<i32>>>; MAX_BASIS_SIZE + 1] = [const { OnceLock::new() }; MAX_BASIS_SIZE + 1];

/// Exponent vectors in `[-MAX_EXPONENT, MAX_EXPONENT]^n`, simplest first.
fn candidates(n: usize) -> &'static [Vec<i32>] {
    CANDIDATES[n].get_or_init(|| {
        let mut all: Vec<Vec<i32>> = vec![Vec::new()];
        for _ in 0..n {
            all = all
                .into_iter()
                .flat_map(|v| {
                    (-MAX_EXPONENT..=MAX_EXPONENT).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        all.sort_by_key(|v| (v.iter().map(|e| e.abs()).sum::<i32>(), v.clone()));
        all
    })
}
const FACTOR_REL_TOL: f64 = 1e-9;
const ROUNDING_TOL: f64 = 1e-6;

impl SymbolBasis {
    pub fn new() -> Self {
        SymbolBasis {
            names: Vec::new(),
            logs: Vec::new(),
        }
    }

    /// `log x, log(1-x), log y, log(1-y), log(x-y)` under the names
    /// `log_x, log_1mx, log_y, log_1my, log_xmy`.
    pub fn five_term(x: Complex64, y: Complex64) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        SymbolBasis::new()
            .with_value("log_x", x)?
            .with_value("log_1mx", one - x)?
            .with_value("log_y", y)?
            .with_value("log_1my", one - y)?
            .with_value("log_xmy", x - y)
    }

    /// Adds `log(value)` as a basis symbol.
    pub fn with_value(mut self, name: &str, value: Complex64) -> Result<Self> {
        if self.names.len() == MAX_BASIS_SIZE {
            return Err(Error::Contract(format!("symbol basis is limited to {MAX_BASIS_SIZE} values")));
        }
        let l = polylog::principal_log(value)?;
        self.names.push(name.to_owned());
        self.logs.push(l);
        Ok(self)
    }

    /// Express `log w` (principal) as `sum e_k log b_k + c pi i`, choosing the
    /// exponent vector of least total size when several fit.
    pub fn express_log(&self, w: Complex64) -> Result<SymbolVector> {
        let target = polylog::principal_log(w)?;
        let scale = 1.0 + target.re.abs() + self.logs.iter().map(|v| v.re.abs()).sum::<f64>();
        for exps in candidates(self.names.len()) {
            let sum: Complex64 = exps
                .iter()
                .zip(&self.logs)
                .map(|(&e, l)| *l * e as f64)
                .sum();
            if (sum.re - target.re).abs() > FACTOR_REL_TOL * scale {
                continue;
            }
            let c = (target - sum).im / std::f64::consts::PI;
            let rounded = c.round();
            if (c - rounded).abs() > ROUNDING_TOL {
                continue;
            }
            let mut v = SymbolVector::new();
            for (name, &e) in self.names.iter().zip(exps) {
                v.add_term(name, BigInt::from(e));
            }
            v.add_term(PI_I, BigInt::from(rounded as i64));
            return Ok(v);
        }
        Err(Error::Consistency(format!(
            "{w} is not a product of basis values with exponents up to {MAX_EXPONENT}"
        )))
    }
}

impl Default for SymbolBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// `nu[z,p,q] = (log z + p pi i) ^ (-log(1-z) + q pi i)` summed over the element,
/// with every logarithm resolved over `basis`.
pub fn nu_symbolic(e: &EBElement, basis: &SymbolBasis) -> Result<WedgeExpr> {
    let one = Complex64::new(1.0, 0.0);
    let mut cache: HashMap<(u64, u64), SymbolVector> = HashMap::new();
    let mut resolve = |w: Complex64| -> Result<SymbolVector> {
        let key = (w.re.to_bits(), w.im.to_bits());
        if let Some(v) = cache.get(&key) {
            return Ok(v.clone());
        }
        let v = basis.express_log(w)?;
        cache.insert(key, v.clone());
        Ok(v)
    };
    let mut total = WedgeExpr::zero();
    for (param, c) in e.terms() {
        let z = param.evaluation_point()?;
        let log_z = resolve(z)?;
        let log_1mz = resolve(one - z)?;
        let mut left = log_z;
        left.add_term(PI_I, BigInt::from(param.p));
        let mut right = -&log_1mz;
        right.add_term(PI_I, BigInt::from(param.q));
        total.add_scaled(&BigInt::from(c), &wedge(&left, &right));
    }
    Ok(total)
}
