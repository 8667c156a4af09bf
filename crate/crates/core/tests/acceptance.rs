mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use ebloch::flattening::{
    build_j_complex, complex_volume, flattening_system, fundamental_element, h1_mod2_of_complex,
    homology_of_j, integral_defect, omega, AbelianGroup, ComplexVolume,
};
use ebloch::gluing::SolveOptions;
use ebloch::pipeline::{run, PipelineOptions};
use ebloch::triangulation::Triangulation;
use ebloch::verify::{edge_kernel_equals_v, run_instance, run_suite, Suite, VerifyConfig};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const VOLUME: f64 = 2.029883212819307;
const SEED: u64 = 20240601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn five_term_outcomes() -> (Vec<ebloch::verify::Outcome>, Duration) {
    let start = Instant::now();
    let out = (0..200).map(|i| run_instance(Suite::FiveTerm, SEED, i)).collect();
    (out, start.elapsed())
}

fn criterion_1() -> Verdict {
    let (out, elapsed) = five_term_outcomes();
    let max = out.iter().map(|o| o.r_residual).fold(0.0, f64::max);
    let errors = out.iter().filter(|o| o.error.is_some()).count();
    verdict(
        max < TOL && errors == 0 && elapsed < Duration::from_secs(5),
        format!("200 instances, max |sum R| mod pi^2 = {max:.2e}, {errors} errors, {elapsed:.2?}"),
    )
}

fn criterion_2() -> Verdict {
    let (out, _) = five_term_outcomes();
    let nonzero = out.iter().filter(|o| !o.nu_exact || o.error.is_some()).count();
    verdict(nonzero == 0, format!("200 instances, {nonzero} with nonzero nu"))
}

fn criterion_3() -> Verdict {
    let lattice = edge_kernel_equals_v().unwrap_or(false);
    let cfg = VerifyConfig { count: 100, seed: SEED, ..VerifyConfig::default() };
    let r = run_suite(Suite::EdgeKernel, &cfg);
    verdict(
        lattice && r.passed(),
        format!("kernel lattice equals V: {lattice}; {} random membership checks, {} failures", r.instances, r.failures),
    )
}

fn criterion_4() -> Verdict {
    let cfg = VerifyConfig { count: 100, seed: SEED, ..VerifyConfig::default() };
    let suites = [
        Suite::Transfer,
        Suite::ThreeEquations,
        Suite::Homo,
        Suite::SuperTransfer,
        Suite::OneMinusX,
        Suite::Chi,
        Suite::ChiHat,
        Suite::Parity,
        Suite::Kappa,
    ];
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s, &cfg)).collect();
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.to_string()).collect();
    let max = reports.iter().map(|r| r.max_r_residual).fold(0.0, f64::max);
    verdict(
        failed.is_empty(),
        format!("{} suites x 100 instances, max R residual {max:.2e}, failing: {failed:?}", suites.len()),
    )
}

fn regular_for(sign: i64) -> Complex64 {
    let z = Complex64::from_polar(1.0, PI / 3.0);
    if sign < 0 {
        z.conj()
    } else {
        z
    }
}

fn criterion_5() -> Verdict {
    let t = common::figure8();
    let start = Instant::now();
    let report = match run(&t, &PipelineOptions::default()) {
        Ok(r) => r,
        Err(e) => return verdict(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let shape_err = report
        .shapes
        .shapes
        .iter()
        .zip(&report.assignment.signs)
        .map(|(z, &s)| (z - regular_for(s)).norm())
        .fold(0.0, f64::max);
    let vol_err = (report.volume - VOLUME).abs();
    let exact = report.residuals.integer_system == 0 && report.residuals.odd_parities == 0;
    verdict(
        shape_err < 1e-10 && vol_err < TOL && report.cs.abs() < TOL && exact && elapsed < Duration::from_secs(1),
        format!(
            "shape error {shape_err:.1e}, vol {:.15} (error {vol_err:.1e}), cs {:.1e}, integer residuals zero: {exact}, {elapsed:.2?}",
            report.volume, report.cs
        ),
    )
}

fn criterion_6() -> Verdict {
    let t = common::figure8();
    let check = || -> ebloch::Result<(bool, String)> {
        let jc = build_j_complex(&t)?;
        let composites_zero = jc.is_chain_complex()?;
        let shapes = ebloch::gluing::solve_shapes(&t, None, SolveOptions::default())?.shapes;
        let defect = integral_defect(&t, &jc, &omega(&shapes)?)?;
        let even = defect.values.iter().all(|v| v % 2 == 0);
        let h = homology_of_j(&jc)?;
        let k = h1_mod2_of_complex(&t);
        let h2_ok = h[3].free_rank == 0 && h[3].torsion == vec![2; k];
        let ok = composites_zero
            && even
            && h[0] == AbelianGroup::trivial()
            && h[1] == AbelianGroup::cyclic(2)
            && h[4] == AbelianGroup::cyclic(2)
            && h2_ok;
        Ok((
            ok,
            format!(
                "composites zero: {composites_zero}; defect {:?}; H5 = {}, H4 = {}, H2 = {} vs H1(K;Z/2) of dim {k}, H1 = {}",
                defect.values, h[0], h[1], h[3], h[4]
            ),
        ))
    };
    match check() {
        Ok((ok, detail)) => verdict(ok, detail),
        Err(e) => verdict(false, e.to_string()),
    }
}

fn trial(t: &Triangulation, rng: &mut ChaCha8Rng) -> ebloch::Result<ComplexVolume> {
    let mut perm: Vec<usize> = (0..t.len()).collect();
    perm.shuffle(rng);
    let r = t.relabeled(&perm)?;
    let signs = r.orientation_signs()?;
    let initial: Vec<Complex64> = signs
        .iter()
        .map(|&s| regular_for(s) + Complex64::from_polar(rng.gen_range(0.0..0.3), rng.gen_range(-PI..PI)))
        .collect();
    let shapes = ebloch::gluing::solve_shapes(&r, Some(&initial), SolveOptions::default())?.shapes;
    let sys = flattening_system(&r, &shapes)?;
    let coeffs: Vec<i64> = sys.kernel().iter().map(|_| rng.gen_range(-5..=5)).collect();
    let a = sys.assignment(&sys.solution_with(&coeffs)?)?;
    complex_volume(&fundamental_element(&a)?)
}

fn criterion_7() -> Verdict {
    let t = common::figure8();
    let base = match run(&t, &PipelineOptions::default()) {
        Ok(r) => ComplexVolume { volume: r.volume, cs: r.cs, modulus: r.modulus },
        Err(e) => return verdict(false, e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    let trials = 25;
    for _ in 0..trials {
        match trial(&t, &mut rng) {
            Ok(cv) => worst = worst.max(base.distance(&cv)),
            Err(_) => errors += 1,
        }
    }
    verdict(
        worst < TOL && errors == 0,
        format!("{trials} trials (relabeling, initial point, kernel shift), max deviation {worst:.1e}, {errors} errors"),
    )
}

fn criterion_8() -> Verdict {
    let cfg = VerifyConfig { count: 50, seed: SEED, ..VerifyConfig::default() };
    let three = run_suite(Suite::CycleThree, &cfg);
    let folded = run_suite(Suite::CycleFolded, &cfg);
    verdict(
        three.passed() && folded.passed(),
        format!(
            "n=3: {} instances, {} failures, max R diff {:.1e}; n=2: {} instances, {} failures, max R diff {:.1e}",
            three.instances, three.failures, three.max_r_residual, folded.instances, folded.failures, folded.max_r_residual
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("lifted five-term relation under R", criterion_1),
        ("nu vanishes on five-term instances", criterion_2),
        ("edge-relation kernel equals V", criterion_3),
        ("identity suite through (R, nu, epsilon)", criterion_4),
        ("figure-eight end to end", criterion_5),
        ("chain complex, defect and homology", criterion_6),
        ("invariance of (vol, cs)", criterion_7),
        ("cycle relation", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("criterion {} [{}] {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
