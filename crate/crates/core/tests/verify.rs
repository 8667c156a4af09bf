use ebloch::exec::Execution;
use ebloch::verify::*;

fn cfg(count: usize, seed: u64) -> VerifyConfig {
    VerifyConfig { count, seed, ..VerifyConfig::default() }
}

#[test]
fn every_suite_passes() {
    for r in run_all(&cfg(200, 1)) {
        println!("{:<16} {:>4} instances, max R residual {:.2e}, failures {}", r.suite, r.instances, r.max_r_residual, r.failures);
        assert!(r.passed(), "{r:#?}");
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for suite in [Suite::FiveTerm, Suite::CycleThree, Suite::Chi] {
        let mut c = cfg(40, 9);
        c.execution = Execution::Sequential;
        let a = run_suite(suite, &c);
        c.execution = Execution::Parallel;
        let b = run_suite(suite, &c);
        assert_eq!(a, b);
    }
}

#[test]
fn seeds_change_instances() {
    let a = run_instance(Suite::Transfer, 1, 0);
    let b = run_instance(Suite::Transfer, 2, 0);
    assert_ne!(a.input, b.input);
}

#[test]
fn loose_tolerance_does_not_hide_errors() {
    // a non-identity is caught: drop one term of a five-term instance
    use ebloch::bloch::{five_term_instance, r_of_element, Mode};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let t = random_five_term_tuple(&mut rng, 3);
    let mut e = five_term_instance(&t, Mode::Ep).unwrap();
    let (first, coeff) = e.terms().next().map(|(g, c)| (*g, c)).unwrap();
    e.add(first, -coeff).unwrap();
    assert!(r_of_element(&e).unwrap().norm() > 1e-6);
}
