//! Acceptance gate: every validation criterion must pass at its stated
//! tolerance. Each test prints one `PASS name: details` / `FAIL name: details`
//! line (visible with `--nocapture`, and always on failure).

use nclab::validation;

const SEED: u64 = 0;

fn check(name: &str) {
    let report = validation::run(name, SEED).expect("known criterion name");
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    println!("{verdict} {}: {}", report.name, report.details);
    assert!(report.passed, "{}: {}", report.name, report.details);
}

macro_rules! criterion {
    ($test:ident, $name:literal) => {
        #[test]
        fn $test() {
            check($name);
        }
    };
}

criterion!(riemann_soundness, "riemann-soundness");
criterion!(classical_limit, "classical-limit");
criterion!(zero_dissipation, "zero-dissipation");
criterion!(front_tracking_v, "front-tracking-v");
criterion!(entropy_conservation, "entropy-conservation");
criterion!(scheme_order, "scheme-order");
criterion!(tw_asymptotics, "tw-asymptotics");
criterion!(tw_linearity_phalf, "tw-linearity-phalf");
criterion!(tw_dissipation_identity, "tw-dissipation-identity");
criterion!(kinetic_extraction, "kinetic-extraction");
criterion!(regularization_sensitivity, "regularization-sensitivity");
