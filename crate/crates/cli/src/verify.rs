//! Digit-exact reproduction of the worked n = 10, r = 4 examples.
//!
//! Reference values are written here in the bottom-right layout in which
//! they are usually displayed, and flipped to ascending indices before
//! comparison.

use dcwalk::chain::{
    chi_square, convergence_report, is_complete_spectrum, is_reversible, stationary,
    step_distribution, tv_distance, verify_eigenvalue, Distribution, RationalChain,
};
use dcwalk::exact::{format_rational, parse_rational, pow, Rational};
use dcwalk::linalg::Matrix;
use dcwalk::shuffle::{
    binomial_mixture_weights, check_antidiagonal_property, from_bottom_right, mixture_matrix,
    predicted_spectrum, simultaneous_spectra, skewed_matrix, type_s_matrix, ShuffleError,
};
use num_traits::Zero;
use serde_json::{json, Value};

const N: usize = 10;
const R: usize = 4;

/// Displayed matrix of the skewed shuffle, `(0,0)` bottom-right.
const SKEWED: [[&str; 5]; 5] = [
    ["0", "0", "0", "0", "1"],
    ["0", "0", "0", "2/3", "1/3"],
    ["0", "0", "2/5", "8/15", "1/15"],
    ["0", "1/5", "3/5", "1/5", "0"],
    ["1/15", "8/15", "2/5", "0", "0"],
];

/// Displayed type-1, type-2 and type-3 matrices, `(0,0)` bottom-right.
const TYPED: [[[&str; 5]; 5]; 3] = [
    [
        ["0", "1", "0", "0", "0"],
        ["1/24", "1/3", "5/8", "0", "0"],
        ["0", "1/6", "1/2", "1/3", "0"],
        ["0", "0", "3/8", "1/2", "1/8"],
        ["0", "0", "0", "2/3", "1/3"],
    ],
    [
        ["0", "0", "1", "0", "0"],
        ["0", "1/6", "1/2", "1/3", "0"],
        ["1/90", "2/15", "13/30", "16/45", "1/15"],
        ["0", "1/10", "2/5", "2/5", "1/10"],
        ["0", "0", "2/5", "8/15", "1/15"],
    ],
    [
        ["0", "0", "0", "1", "0"],
        ["0", "0", "3/8", "1/2", "1/8"],
        ["0", "1/10", "2/5", "2/5", "1/10"],
        ["1/80", "3/20", "9/20", "7/20", "3/80"],
        ["0", "1/5", "3/5", "1/5", "0"],
    ],
];

/// Eigenvalues in the order `x = r, …, 0`.
const SKEWED_EIGENVALUES: [&str; 5] = ["1", "-2/3", "2/5", "-1/5", "1/15"];
const TYPED_EIGENVALUES: [[&str; 5]; 3] = [
    ["1", "7/12", "1/4", "0", "-1/6"],
    ["1", "1/6", "-1/10", "-1/15", "1/15"],
    ["1", "-1/4", "-1/20", "1/10", "-1/20"],
];
const MIXTURE_EIGENVALUES: [&str; 5] = ["1", "1/6", "1/10", "1/20", "3/80"];

/// Stationary law and starting law, listed `x = r, …, 0`.
const STATIONARY: [&str; 5] = ["1/210", "24/210", "90/210", "80/210", "15/210"];
const THETA: [&str; 5] = ["1/35", "4/35", "2/7", "4/7", "0"];

/// Where the checked matrices come from; tests swap in corrupted ones.
#[derive(Clone, Copy)]
pub struct Sources {
    pub skewed: fn(usize, usize) -> Result<RationalChain, ShuffleError>,
    pub typed: fn(usize, usize, usize) -> Result<RationalChain, ShuffleError>,
}

impl Default for Sources {
    fn default() -> Self {
        Sources {
            skewed: skewed_matrix,
            typed: type_s_matrix,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
    pub diff: Vec<String>,
}

impl Check {
    fn new(name: &str, passed: bool, expected: String, actual: String, diff: Vec<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            expected,
            actual,
            diff,
        }
    }

    fn error(name: &str, err: impl std::fmt::Display) -> Self {
        Check::new(name, false, "a result".into(), format!("error: {err}"), vec![err.to_string()])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "expected": self.expected,
            "actual": self.actual,
            "diff": self.diff,
        })
    }
}

fn parse_all(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| parse_rational(s).expect("reference value")).collect()
}

fn displayed(m: &[[&str; 5]; 5]) -> Matrix {
    from_bottom_right(&m.iter().map(|row| parse_all(row)).collect())
}

fn show(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

fn show_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = m.iter().map(|r| show(r)).collect();
    format!("[{}]", rows.join("; "))
}

fn compare_matrix(name: &str, expected: &Matrix, actual: &Matrix) -> Check {
    let mut diff = Vec::new();
    for (x, (e, a)) in expected.iter().zip(actual).enumerate() {
        for (z, (ev, av)) in e.iter().zip(a).enumerate() {
            if ev != av {
                diff.push(format!(
                    "entry p({x},{z}): expected {}, got {}",
                    format_rational(ev),
                    format_rational(av)
                ));
            }
        }
    }
    if expected.len() != actual.len() {
        diff.push(format!("dimension: expected {}, got {}", expected.len(), actual.len()));
    }
    Check::new(name, diff.is_empty(), show_matrix(expected), show_matrix(actual), diff)
}

fn compare_vec(name: &str, expected: &[Rational], actual: &[Rational]) -> Check {
    let mut diff: Vec<String> = expected
        .iter()
        .zip(actual)
        .enumerate()
        .filter(|(_, (e, a))| e != a)
        .map(|(i, (e, a))| format!("position {i}: expected {}, got {}", format_rational(e), format_rational(a)))
        .collect();
    if expected.len() != actual.len() {
        diff.push(format!("length: expected {}, got {}", expected.len(), actual.len()));
    }
    Check::new(name, diff.is_empty(), show(expected), show(actual), diff)
}

fn flag(name: &str, passed: bool, expected: &str, actual: String) -> Check {
    let diff = if passed { vec![] } else { vec![format!("expected {expected}, got {actual}")] };
    Check::new(name, passed, expected.to_string(), actual, diff)
}

pub fn run_checks(sources: Sources) -> Vec<Check> {
    let mut checks = Vec::new();
    let q = match (sources.skewed)(N, R) {
        Ok(q) => q,
        Err(e) => return vec![Check::error("skewed.matrix", e)],
    };
    checks.push(compare_matrix("skewed.matrix", &displayed(&SKEWED), q.matrix()));

    // spectrum
    let expected_eigs = parse_all(&SKEWED_EIGENVALUES);
    match predicted_spectrum(N, R) {
        Ok(p) => checks.push(compare_vec("skewed.eigenvalues.closed_form", &expected_eigs, &p.eigenvalues_descending())),
        Err(e) => checks.push(Check::error("skewed.eigenvalues.closed_form", e)),
    }
    let certified: Vec<String> = expected_eigs
        .iter()
        .filter(|l| !verify_eigenvalue(&q, l))
        .map(format_rational)
        .collect();
    checks.push(flag(
        "skewed.eigenvalues.certified",
        certified.is_empty(),
        "det(Q − λI) = 0 for every listed λ",
        if certified.is_empty() { "all certified".into() } else { format!("not eigenvalues: {}", certified.join(", ")) },
    ));
    let complete = is_complete_spectrum(&q, &expected_eigs).unwrap_or(false);
    checks.push(flag(
        "skewed.eigenvalues.complete",
        complete,
        "characteristic polynomial = Π(x − λ)",
        complete.to_string(),
    ));
    let anti = check_antidiagonal_property(&q);
    checks.push(flag(
        "skewed.antidiagonal_property",
        anti.holds,
        "zero pattern and anti-diagonal eigenvalues",
        format!("zero_pattern={}, certified={}, complete={}", anti.zero_pattern, anti.certified, anti.complete),
    ));
    let second = predicted_spectrum(N, R).ok().and_then(|p| p.second_largest());
    let expected_second = Rational::new((-(R as i64)).into(), ((N - R) as i64).into());
    checks.push(flag(
        "skewed.second_eigenvalue",
        second.as_ref() == Some(&expected_second),
        &format_rational(&expected_second),
        second.map(|s| format_rational(&s)).unwrap_or_else(|| "none".into()),
    ));

    // stationary law and reversibility
    let expected_pi: Vec<Rational> = parse_all(&STATIONARY).into_iter().rev().collect();
    let pi = stationary(&q);
    match &pi {
        Ok(pi) => {
            checks.push(compare_vec("skewed.stationary", &expected_pi, pi.probabilities()));
            let rev = is_reversible(&q, pi);
            checks.push(flag(
                "skewed.detailed_balance",
                rev.reversible,
                "π_x p(x,y) = π_y p(y,x)",
                match rev.witness {
                    None => "holds".into(),
                    Some((x, y)) => format!("fails at ({x},{y})"),
                },
            ));
        }
        Err(e) => checks.push(Check::error("skewed.stationary", e)),
    }

    // convergence from θ
    let theta = Distribution::new(parse_all(&THETA).into_iter().rev().collect()).expect("θ is a distribution");
    match convergence_report(&q, &theta) {
        Ok(rep) => {
            let nonzero: Vec<(Rational, Rational)> =
                rep.coefficients().into_iter().filter(|(_, c)| !c.is_zero()).collect();
            let coeffs: Vec<String> = nonzero
                .iter()
                .map(|(l, c)| format!("{}: {}", format_rational(l), format_rational(c)))
                .collect();
            let single = nonzero == vec![(Rational::new((-1).into(), 5.into()), Rational::new(1.into(), 3.into()))];
            checks.push(flag("skewed.theta_decomposition", single, "-1/5: 1/3", coeffs.join(", ")));
            let pi = rep.stationary.clone();
            let mut bad = Vec::new();
            for t in 0..=6u32 {
                let lhs = chi_square(&step_distribution(&q, &theta, t), &pi);
                let rhs = pow(&Rational::new(1.into(), 25.into()), t) / Rational::from_integer(3.into());
                if lhs != rhs || rep.chi_square_at(t) != rhs {
                    bad.push(format!("t={t}: lhs {} rhs {}", format_rational(&lhs), format_rational(&rhs)));
                }
            }
            checks.push(Check::new(
                "skewed.chi_square_identity",
                bad.is_empty(),
                "Σ(θQ^t − π)²/π = 5^(−2t)/3 for t = 0..6".into(),
                if bad.is_empty() { "exact equality".into() } else { bad.join("; ") },
                bad,
            ));
            let mut bad = Vec::new();
            for t in 0..=10u32 {
                let tv = tv_distance(&step_distribution(&q, &theta, t), &pi);
                let bound_sq = Rational::new(5.into(), 12.into()) * pow(&Rational::new(1.into(), 25.into()), t);
                if &tv * &tv > bound_sq || !rep.bound_holds(&tv, t) {
                    bad.push(format!("t={t}: tv {}", format_rational(&tv)));
                }
            }
            checks.push(Check::new(
                "skewed.tv_bound",
                bad.is_empty(),
                "tv(θQ^t, π) ≤ (√5/(2√3))·5^(−t) for t = 0..10".into(),
                if bad.is_empty() { "bound holds".into() } else { bad.join("; ") },
                bad,
            ));
        }
        Err(e) => checks.push(Check::error("skewed.convergence", e)),
    }

    // type-s shuffles
    let mut typed = Vec::new();
    for (i, display) in TYPED.iter().enumerate() {
        let s = i + 1;
        let name = format!("typed.s{s}.matrix");
        match (sources.typed)(N, R, s) {
            Ok(m) => {
                checks.push(compare_matrix(&name, &displayed(display), m.matrix()));
                typed.push(Some(m));
            }
            Err(e) => {
                checks.push(Check::error(&name, e));
                typed.push(None);
            }
        }
    }
    let all: Vec<RationalChain> = (0..=R)
        .filter_map(|s| if s == R { Some(q.clone()) } else { (sources.typed)(N, R, s).ok() })
        .collect();
    let mut noncommuting = Vec::new();
    for (a, qa) in all.iter().enumerate() {
        for (b, qb) in all.iter().enumerate().skip(a + 1) {
            if !qa.commutes_with(qb) {
                noncommuting.push(format!("Q_{a} Q_{b}"));
            }
        }
    }
    checks.push(Check::new(
        "typed.commute",
        noncommuting.is_empty() && all.len() == R + 1,
        "Q_s Q_t = Q_t Q_s for all s, t".into(),
        if noncommuting.is_empty() { "all pairs commute".into() } else { noncommuting.join(", ") },
        noncommuting,
    ));
    match simultaneous_spectra(N, R) {
        Ok(sp) => {
            for (i, list) in TYPED_EIGENVALUES.iter().enumerate() {
                let s = i + 1;
                checks.push(compare_vec(&format!("typed.s{s}.eigenvalues"), &parse_all(list), &sp.eigenvalues[s]));
            }
            checks.push(compare_vec("typed.s4.eigenvalues", &expected_eigs, &sp.eigenvalues[R]));
        }
        Err(e) => checks.push(Check::error("typed.eigenvalues", e)),
    }
    let mix_expected = parse_all(&MIXTURE_EIGENVALUES);
    match mixture_matrix(N, R, &binomial_mixture_weights(R)) {
        Ok(mix) => {
            let ok = mix_expected.iter().all(|l| verify_eigenvalue(&mix, l))
                && is_complete_spectrum(&mix, &mix_expected).unwrap_or(false);
            checks.push(flag(
                "mixture.eigenvalues",
                ok,
                &show(&mix_expected),
                if ok { show(&mix_expected) } else { "spectrum differs".into() },
            ));
        }
        Err(e) => checks.push(Check::error("mixture.eigenvalues", e)),
    }
    checks
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub fn render_text(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{mark}  {}  {}\n", c.name, c.actual));
        for d in &c.diff {
            out.push_str(&format!("      {d}\n"));
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
    out
}

pub fn render_json(checks: &[Check]) -> Value {
    json!({
        "passed": all_passed(checks),
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    })
}
