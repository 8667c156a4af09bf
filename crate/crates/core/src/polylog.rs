//! Principal-branch logarithms, the dilogarithm, the Rogers dilogarithm and its
//! lift to the cover of `C - {0,1}`, and the Bloch-Wigner function.
//!
//! Branch convention everywhere: `arg` in `(-pi, pi]`. Arguments lying exactly
//! on a cut are rejected; callers that need a side of the cut go through
//! [`ExtendedParam`](crate::bloch::ExtendedParam), which carries a side tag.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::bloch::{ExtendedParam, Mode};
use crate::error::{Error, Result};

pub const PI_SQUARED: f64 = PI * PI;

/// Default absolute tolerance for comparing values modulo `pi^2` or `2 pi^2`.
pub const DEFAULT_MOD_TOLERANCE: f64 = 1e-9;

const I_PI: Complex64 = Complex64::new(0.0, PI);

/// `B_n / (n+1)!` for the nonzero Bernoulli numbers, `B_1 = -1/2`.
/// `Li2(z) = sum_n c_n u^(n+1)` with `u = -log(1-z)`.
const BERNOULLI_LI2: [(i32, f64); 20] = [
    (0, 1.0),
    (1, -0.25),
    (2, 0.027777777777777776),
    (4, -0.0002777777777777778),
    (6, 4.72411186696901e-06),
    (8, -9.185773074661964e-08),
    (10, 1.8978869988971e-09),
    (12, -4.0647616451442256e-11),
    (14, 8.921691020456452e-13),
    (16, -1.9939295860721074e-14),
    (18, 4.518980029619918e-16),
    (20, -1.0356517612181247e-17),
    (22, 2.395218621026187e-19),
    (24, -5.581785874325009e-21),
    (26, 1.3091507554183213e-22),
    (28, -3.0874198024267403e-24),
    (30, 7.315975652702203e-26),
    (32, -1.740845657234001e-27),
    (34, 4.1576356446139e-29),
    (36, -9.962148488284622e-31),
];

fn on_real_axis(z: Complex64) -> bool {
    z.im == 0.0
}

/// `true` when `z` lies on `(-inf, 0]` or `[1, inf)`.
pub fn on_rogers_cut(z: Complex64) -> bool {
    on_real_axis(z) && (z.re <= 0.0 || z.re >= 1.0)
}

pub fn principal_log(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::domain("principal_log", z, "log of zero"));
    }
    // Complex64::ln uses atan2, which maps the negative real axis to +pi.
    let mut w = z.ln();
    if w.im == -PI {
        w.im = PI;
    }
    Ok(w)
}

/// `log` for arguments already known to be nonzero.
fn log(z: Complex64) -> Complex64 {
    let mut w = z.ln();
    if w.im == -PI {
        w.im = PI;
    }
    w
}

/// The dilogarithm `Li2(z) = -int_0^z log(1-t)/t dt` on its principal branch.
pub fn dilog(z: Complex64) -> Result<Complex64> {
    if on_real_axis(z) && z.re >= 1.0 {
        return Err(Error::domain("dilog", z, "on the branch cut [1, inf)"));
    }
    Ok(dilog_unchecked(z))
}

fn dilog_unchecked(z: Complex64) -> Complex64 {
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.norm() > 1.0 {
        // Li2(z) + Li2(1/z) = -pi^2/6 - log^2(-z)/2, valid off (0, 1].
        let l = log(-z);
        return Complex64::new(-PI_SQUARED / 6.0, 0.0) - 0.5 * l * l - dilog_unit_disc(z.inv());
    }
    dilog_unit_disc(z)
}

/// `|z| <= 1`.
fn dilog_unit_disc(z: Complex64) -> Complex64 {
    if z.re > 0.5 {
        // Li2(z) + Li2(1-z) = pi^2/6 - log z log(1-z); `1-z` lands in |w| < 1, Re w < 1/2.
        let w = Complex64::new(1.0, 0.0) - z;
        return Complex64::new(PI_SQUARED / 6.0, 0.0) - log(z) * log(w) - dilog_left_disc(w);
    }
    dilog_left_disc(z)
}

/// `|z| <= 1`, `Re z <= 1/2`.
fn dilog_left_disc(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        return dilog_maclaurin(z);
    }
    // |u| <= ~1.26 here, well inside the radius 2 pi of the Bernoulli series.
    let u = -log(Complex64::new(1.0, 0.0) - z);
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut power = u; // u^(n+1) for even n, starting at n = 0
    for &(n, c) in BERNOULLI_LI2.iter().skip(2) {
        debug_assert!(n % 2 == 0);
        power *= u2;
        let term = c * power;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn dilog_maclaurin(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = z;
    for k in 1..200 {
        let kf = k as f64;
        let term = power / (kf * kf);
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(f64::MIN_POSITIVE) {
            break;
        }
        power *= z;
    }
    sum
}

/// Rogers dilogarithm `R(z) = log(z) log(1-z)/2 + Li2(z)`.
pub fn rogers(z: Complex64) -> Result<Complex64> {
    if on_rogers_cut(z) {
        return Err(Error::domain(
            "rogers",
            z,
            "on a branch cut (-inf, 0] or [1, inf)",
        ));
    }
    Ok(rogers_unchecked(z))
}

fn rogers_unchecked(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    0.5 * log(z) * log(one - z) + dilog_unchecked(z)
}

/// The lifted Rogers function
/// `R(z; p, q) = R(z) + (pi i / 2)(p log(1-z) + q log z) - pi^2/6`,
/// reduced modulo `pi^2` (EP) or `2 pi^2` (EEP).
pub fn lifted_rogers(param: &ExtendedParam, mode: Mode) -> Result<ModPiSquared> {
    if mode == Mode::Eep && (param.p % 2 != 0 || param.q % 2 != 0) {
        return Err(Error::Contract(format!(
            "EEP generator needs even indices, got ({}; {}, {})",
            param.z, param.p, param.q
        )));
    }
    let raw = lifted_rogers_raw(param.evaluation_point()?, param.p, param.q)?;
    Ok(reduce_mod(raw, mode.modulus()))
}

/// Unreduced `R(z; p, q)` at a point off the cuts.
pub fn lifted_rogers_raw(z: Complex64, p: i64, q: i64) -> Result<Complex64> {
    let base = rogers(z)?;
    let one = Complex64::new(1.0, 0.0);
    let correction = 0.5 * I_PI * (p as f64 * log(one - z) + q as f64 * log(z));
    Ok(base + correction - Complex64::new(PI_SQUARED / 6.0, 0.0))
}

/// Bloch-Wigner function `D(z) = Im Li2(z) + arg(1-z) log|z|`.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(Error::domain("bloch_wigner", z, "z is 0 or 1"));
    }
    if on_real_axis(z) {
        return Ok(0.0);
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(dilog_unchecked(z).im + (one - z).arg() * z.norm().ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Modulus {
    PiSquared,
    TwoPiSquared,
}

impl Modulus {
    pub fn value(self) -> f64 {
        match self {
            Modulus::PiSquared => PI_SQUARED,
            Modulus::TwoPiSquared => 2.0 * PI_SQUARED,
        }
    }
}

/// A complex number modulo the real lattice `m Z`, `m` one of `pi^2`, `2 pi^2`.
/// The stored representative has real part in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModPiSquared {
    value: Complex64,
    modulus: Modulus,
}

impl ModPiSquared {
    pub fn zero(modulus: Modulus) -> Self {
        ModPiSquared {
            value: Complex64::new(0.0, 0.0),
            modulus,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Representative with real part in `(-m/2, m/2]`.
    pub fn symmetric(&self) -> Complex64 {
        let m = self.modulus.value();
        let mut re = self.value.re;
        if re > m / 2.0 {
            re -= m;
        }
        Complex64::new(re, self.value.im)
    }

    /// Distance from `self - other` to the lattice.
    pub fn distance(&self, other: &ModPiSquared) -> f64 {
        debug_assert_eq!(self.modulus, other.modulus);
        let m = self.modulus.value();
        let d = self.value - other.value;
        let re = d.re - m * (d.re / m).round();
        re.hypot(d.im)
    }

    pub fn approx_eq(&self, other: &ModPiSquared, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Distance to zero in the quotient.
    pub fn norm(&self) -> f64 {
        self.distance(&ModPiSquared::zero(self.modulus))
    }

    /// Reduce an EEP value to the coarser EP quotient.
    pub fn to_pi_squared(&self) -> ModPiSquared {
        reduce_mod(self.value, Modulus::PiSquared)
    }
}

impl std::ops::Add for ModPiSquared {
    type Output = ModPiSquared;
    fn add(self, rhs: ModPiSquared) -> ModPiSquared {
        debug_assert_eq!(self.modulus, rhs.modulus);
        reduce_mod(self.value + rhs.value, self.modulus)
    }
}

impl fmt::Display for ModPiSquared {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.modulus {
            Modulus::PiSquared => "pi^2",
            Modulus::TwoPiSquared => "2pi^2",
        };
        write!(f, "{} (mod {})", self.value, m)
    }
}

pub fn reduce_mod(value: Complex64, modulus: Modulus) -> ModPiSquared {
    let m = modulus.value();
    let mut re = value.re.rem_euclid(m);
    // rem_euclid can return m itself for tiny negative inputs.
    if re >= m {
        re -= m;
    }
    ModPiSquared {
        value: Complex64::new(re, value.im),
        modulus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    /// Composite Gauss-Legendre quadrature of `-int_0^z log(1-t)/t dt` along
    /// the segment `t = s z`. Independent of the series code above.
    fn dilog_quadrature(z: Complex64) -> Complex64 {
        const NODES: [(f64, f64); 8] = [
            (-0.9602898564975363, 0.1012285362903763),
            (-0.7966664774136267, 0.2223810344533745),
            (-0.525532409916329, 0.3137066458778873),
            (-0.1834346424956498, 0.362683783378362),
            (0.1834346424956498, 0.362683783378362),
            (0.525532409916329, 0.3137066458778873),
            (0.7966664774136267, 0.2223810344533745),
            (0.9602898564975363, 0.1012285362903763),
        ];
        let panels = 400;
        let h = 1.0 / panels as f64;
        let mut sum = c(0.0, 0.0);
        for k in 0..panels {
            let a = k as f64 * h;
            for &(x, w) in &NODES {
                let s = a + 0.5 * h * (x + 1.0);
                let t = s * z;
                // log(1 - t)/t dt with dt = z ds
                let f = (c(1.0, 0.0) - t).ln() / s;
                sum += 0.5 * h * w * f;
            }
        }
        -sum
    }

    #[test]
    fn principal_log_examples() {
        assert_eq!(principal_log(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(close(principal_log(c(-1.0, 0.0)).unwrap(), c(0.0, PI), 1e-15));
        assert!(close(principal_log(c(-1.0, -0.0)).unwrap(), c(0.0, PI), 1e-15));
        assert!(close(
            principal_log(c(0.0, 2.0)).unwrap(),
            c(LN_2, PI / 2.0),
            1e-15
        ));
        assert!(matches!(
            principal_log(c(0.0, 0.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn dilog_examples() {
        assert_eq!(dilog(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let half = dilog_quadrature(c(0.5, 0.0));
        assert!((half.re - 0.5822405264650125).abs() < 1e-12);
        assert!(close(dilog(c(0.5, 0.0)).unwrap(), c(0.5822405264650125, 0.0), 1e-14));
        let alt: f64 = (1..200_000)
            .map(|k| {
                let k = k as f64;
                let sign = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
                sign / (k * k)
            })
            .sum();
        assert!((alt + 0.8224670334241132).abs() < 1e-9);
        assert!(close(
            dilog(c(-1.0, 0.0)).unwrap(),
            c(-0.8224670334241132, 0.0),
            1e-14
        ));
        assert!(dilog(c(1.0, 0.0)).is_err());
        assert!(dilog(c(3.0, 0.0)).is_err());
    }

    #[test]
    fn dilog_matches_quadrature_across_regions() {
        let points = [
            c(0.3, 0.1),
            c(-0.4, 0.3),
            c(0.6, -0.7),
            c(0.5, 0.8660254037844386),
            c(0.9, 0.2),
            c(-0.7, -0.6),
            c(1.5, 0.5),
            c(-3.0, 2.0),
            c(0.2, 4.0),
            c(-0.95, 0.0),
        ];
        for z in points {
            let a = dilog(z).unwrap();
            let b = dilog_quadrature(z);
            assert!(close(a, b, 1e-12), "z={z}: series {a}, quadrature {b}");
        }
    }

    #[test]
    fn rogers_examples() {
        let r = rogers(c(0.5, 0.0)).unwrap();
        assert!(close(r, c(PI_SQUARED / 12.0, 0.0), 1e-14));
        // oracle: quadrature-based dilog plus the log product
        let oracle = 0.5 * LN_2 * LN_2 * c(1.0, 0.0) + dilog_quadrature(c(0.5, 0.0));
        assert!(close(r, oracle, 1e-12));

        assert!(rogers(c(1e-8, 0.0)).unwrap().norm() < 1e-6);

        let refl = rogers(c(0.3, 0.0)).unwrap() + rogers(c(0.7, 0.0)).unwrap();
        assert!(close(refl, c(PI_SQUARED / 6.0, 0.0), 1e-14));
        let oracle = |x: f64| {
            0.5 * x.ln() * (1.0 - x).ln() + dilog_quadrature(c(x, 0.0)).re
        };
        assert!((oracle(0.3) + oracle(0.7) - PI_SQUARED / 6.0).abs() < 1e-12);

        assert!(rogers(c(-0.5, 0.0)).is_err());
        assert!(rogers(c(2.0, 0.0)).is_err());
        assert!(rogers(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn lifted_rogers_examples() {
        let half = ExtendedParam::new(c(0.5, 0.0), 0, 0).unwrap();
        let r = lifted_rogers(&half, Mode::Ep).unwrap();
        let expect = reduce_mod(c(-PI_SQUARED / 12.0, 0.0), Modulus::PiSquared);
        assert!(r.approx_eq(&expect, 1e-12));
        assert!((r.value().re - 11.0 * PI_SQUARED / 12.0).abs() < 1e-12);

        let z = c(0.3, 0.4);
        let diff = lifted_rogers_raw(z, 2, -1).unwrap() - lifted_rogers_raw(z, 0, 0).unwrap();
        let one = c(1.0, 0.0);
        let expect = 0.5 * I_PI * (2.0 * (one - z).ln() - z.ln());
        assert!(close(diff, expect, 1e-14));

        let odd = ExtendedParam::new(z, 1, 0).unwrap();
        assert!(matches!(lifted_rogers(&odd, Mode::Eep), Err(Error::Contract(_))));
    }

    #[test]
    fn monodromy_around_zero() {
        // Continue R(z; p, q) along a small anticlockwise loop around 0 by
        // tracking log z and log(1-z) continuously; Li2 has no monodromy there.
        let z0 = c(0.2, 0.05);
        let (p, q) = (1_i64, 3_i64);
        let steps = 2000;
        let mut log_z = z0.ln();
        let mut log_1mz = (c(1.0, 0.0) - z0).ln();
        let mut prev = z0;
        for k in 1..=steps {
            let t = 2.0 * PI * k as f64 / steps as f64;
            let zk = z0 * Complex64::from_polar(1.0, t);
            log_z += (zk / prev).ln();
            log_1mz += ((c(1.0, 0.0) - zk) / (c(1.0, 0.0) - prev)).ln();
            prev = zk;
        }
        let continued = 0.5 * log_z * log_1mz
            + dilog(prev).unwrap()
            + 0.5 * I_PI * (p as f64 * log_1mz + q as f64 * log_z)
            - c(PI_SQUARED / 6.0, 0.0);
        let expect = lifted_rogers_raw(z0, p + 2, q).unwrap() - c(q as f64 * PI_SQUARED, 0.0);
        assert!(close(continued, expect, 1e-10));

        let a = reduce_mod(lifted_rogers_raw(z0, p + 2, q).unwrap(), Modulus::PiSquared);
        let b = reduce_mod(
            lifted_rogers_raw(z0, p, q).unwrap() + I_PI * (c(1.0, 0.0) - z0).ln(),
            Modulus::PiSquared,
        );
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn bloch_wigner_examples() {
        assert_eq!(bloch_wigner(c(0.7, 0.0)).unwrap(), 0.0);
        let w = Complex64::from_polar(1.0, PI / 3.0);
        // series oracle: Im Li2(e^{i pi/3}) = sum sin(k pi/3)/k^2, log|z| = 0
        let series: f64 = (1..2_000_000)
            .map(|k| (k as f64 * PI / 3.0).sin() / (k as f64 * k as f64))
            .sum();
        assert!((series - 1.0149416064096536).abs() < 1e-6);
        assert!((bloch_wigner(w).unwrap() - 1.0149416064096536).abs() < 1e-14);
        let z = c(0.2, 0.9);
        assert!((bloch_wigner(z.conj()).unwrap() + bloch_wigner(z).unwrap()).abs() < 1e-15);
        assert!(bloch_wigner(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn reduce_mod_examples() {
        let r = reduce_mod(c(PI_SQUARED + 1.0, 0.0), Modulus::PiSquared);
        assert!((r.value().re - 1.0).abs() < 1e-14);
        let r = reduce_mod(c(-PI_SQUARED / 12.0, 0.0), Modulus::PiSquared);
        assert!((r.value().re - 11.0 * PI_SQUARED / 12.0).abs() < 1e-14);
        let a = reduce_mod(c(0.0, 0.0), Modulus::PiSquared);
        let b = reduce_mod(c(PI_SQUARED * 1e-15, 0.0), Modulus::PiSquared);
        assert!(a.approx_eq(&b, DEFAULT_MOD_TOLERANCE));
        let r = reduce_mod(c(-1e-300, 0.0), Modulus::PiSquared);
        assert!(r.value().re >= 0.0 && r.value().re < PI_SQUARED);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn off_cut() -> impl Strategy<Value = Complex64> {
            (-20.0f64..20.0, -20.0f64..20.0)
                .prop_filter("off the real axis", |(_, im)| im.abs() > 1e-6)
                .prop_map(|(re, im)| c(re, im))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(2000))]

            #[test]
            fn exp_log_roundtrip(z in off_cut()) {
                let w = principal_log(z).unwrap();
                prop_assert!(w.im > -PI && w.im <= PI);
                prop_assert!((w.exp() - z).norm() <= 1e-14 * z.norm());
            }

            #[test]
            fn reduce_is_idempotent(re in -100.0f64..100.0, im in -5.0f64..5.0) {
                let r = reduce_mod(c(re, im), Modulus::TwoPiSquared);
                let rr = reduce_mod(r.value(), Modulus::TwoPiSquared);
                prop_assert_eq!(r, rr);
                prop_assert!(r.value().re >= 0.0 && r.value().re < 2.0 * PI_SQUARED);
            }
        }
    }
}
