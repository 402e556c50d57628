//! The acceptance criteria, one line each. Exits non-zero if any fails.

use std::process::ExitCode;

use krivine_lab::verify::{Verifier, VerifyConfig};

const CRITERIA: [(&str, &str); 11] = [
    ("golden example: (\\x.(x)x)\\y.y takes 9 head steps, trace as tabulated", "golden-example"),
    ("Church numerals: l_h((n)I) = 4(n+1), n = 1..6", "church-numerals"),
    ("l_h = least derivation size, closed terms <= 9 nodes", "theorem-head"),
    ("l_beta = least exact derivation size, normalizing terms", "theorem-normal"),
    ("extracted derivations are valid, sized by steps, 1-typed", "extraction"),
    ("divergent terms untypable to 20, head-normalizing ones typable", "qualitative"),
    ("steps <= 2|a| + |alpha| + 2 on unifiable pairs", "semantic-bound"),
    ("predictor equals machine steps on all normal pairs <= 7 nodes", "predictor"),
    ("non-idempotency witness for \\z.\\x.(z)x", "non-idempotency"),
    ("the relational semantics is not a lambda-model", "not-lambda-model"),
    ("type sizes: |g| = 1, 2n+3 family, size = aux on derived typings", "size-function"),
];

fn main() -> ExitCode {
    let verifier = Verifier::new(VerifyConfig::default());
    let mut failed = 0;
    for (i, (label, suite)) in CRITERIA.iter().enumerate() {
        let o = verifier.run(suite).expect("known suite");
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark}  {label}  [{} checks, {:.2?}] {}", i + 1, o.checked, o.elapsed, o.summary);
        for f in &o.failures {
            println!("    - {f}");
        }
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
