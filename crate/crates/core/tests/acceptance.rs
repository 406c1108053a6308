//! One PASS/FAIL line per acceptance criterion. Runs as its own binary
//! (`harness = false`) and exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{ascending, partitions, q, qs, subset_action_oracle};
use dcwalk::chain::{
    char_poly, convergence_report, is_reversible, lump, rational_spectrum, stationary,
    step_distribution, tv_distance, verify_eigenvalue, Distribution,
};
use dcwalk::cosets::{double_cosets, SubgroupSpec};
use dcwalk::exact::{pow, to_f64, Rational};
use dcwalk::linalg::{determinant, shift};
use dcwalk::poly::Polynomial;
use dcwalk::perm::{generate_group, GroupElements, GroupSpec, Permutation};
use dcwalk::shuffle::{
    binomial_mixture_weights, check_antidiagonal_property, epsilon_bar, involutory_walk,
    mixture_matrix, predicted_spectrum, simultaneous_spectra, skewed_matrix, type_s_matrix,
    ShuffleParams,
};
use dcwalk::sim::{empirical_matrix, simulate, SimConfig};
use dcwalk::weights::{check_lumping_hk, full_walk, lumped_matrix, weight_class_function, WeightFunction};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const N: usize = 10;
const R: usize = 4;

/// Reference values, rows and columns listed `x = r, …, 0`.
const SKEWED: [[&str; 5]; 5] = [
    ["0", "0", "0", "0", "1"],
    ["0", "0", "0", "2/3", "1/3"],
    ["0", "0", "2/5", "8/15", "1/15"],
    ["0", "1/5", "3/5", "1/5", "0"],
    ["1/15", "8/15", "2/5", "0", "0"],
];
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
const SKEWED_EIGENVALUES: [&str; 5] = ["1", "-2/3", "2/5", "-1/5", "1/15"];
const TYPED_EIGENVALUES: [[&str; 5]; 3] = [
    ["1", "7/12", "1/4", "0", "-1/6"],
    ["1", "1/6", "-1/10", "-1/15", "1/15"],
    ["1", "-1/4", "-1/20", "1/10", "-1/20"],
];
const MIXTURE_EIGENVALUES: [&str; 5] = ["1", "1/6", "1/10", "1/20", "3/80"];
const STATIONARY_NUMERATORS: [i64; 5] = [1, 24, 90, 80, 15];
const THETA: [&str; 5] = ["1/35", "4/35", "2/7", "4/7", "0"];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn reversed<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().rev().cloned().collect()
}

fn sorted(mut v: Vec<Rational>) -> Vec<Rational> {
    v.sort();
    v
}

fn spectrum_multiset(chain: &dcwalk::chain::RationalChain) -> Vec<Rational> {
    sorted(
        rational_spectrum(chain)
            .unwrap()
            .into_iter()
            .flat_map(|(l, m)| std::iter::repeat_n(l, m))
            .collect(),
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let chain = skewed_matrix(N, R).unwrap();
    let elapsed = start.elapsed();
    let expected = ascending(&SKEWED);
    let bad: Vec<String> = (0..=R)
        .flat_map(|x| (0..=R).map(move |z| (x, z)))
        .filter(|&(x, z)| chain.entry(x, z) != &expected[x][z])
        .map(|(x, z)| format!("p({x},{z})"))
        .collect();
    let fast = elapsed < Duration::from_millis(1);
    outcome(
        bad.is_empty() && fast,
        format!("25/25 entries exact: {}, mismatched {bad:?}, {elapsed:?} (< 1 ms)", bad.is_empty()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let prediction = predicted_spectrum(N, R).unwrap();
    let chain = skewed_matrix(N, R).unwrap();
    let listed = prediction.eigenvalues_descending();
    let certified = listed
        .iter()
        .all(|l| determinant(&shift(chain.matrix(), l)).is_zero());
    // det(λI − Q) = Π(λ − λ_i): the listed values are all the roots,
    // with multiplicity
    let exact_roots = char_poly(&chain).unwrap() == Polynomial::from_roots(&listed);
    let elapsed = start.elapsed();
    let matches = listed == qs(&SKEWED_EIGENVALUES);
    let fast = elapsed < Duration::from_millis(10);
    outcome(
        matches && certified && exact_roots && fast,
        format!(
            "listed {matches}, det(Q−λI)=0 {certified}, char_poly roots exactly these {exact_roots}, {elapsed:?} (< 10 ms)"
        ),
    )
}

fn criterion_3() -> Outcome {
    let chain = skewed_matrix(N, R).unwrap();
    let pi = stationary(&chain).unwrap();
    let expected: Vec<Rational> = STATIONARY_NUMERATORS
        .iter()
        .rev()
        .map(|&k| Rational::new(k.into(), 210.into()))
        .collect();
    let equal = pi.probabilities() == expected.as_slice();
    let balanced = is_reversible(&chain, &pi).reversible;
    outcome(equal && balanced, format!("π = (1,24,90,80,15)/210 {equal}, detailed balance {balanced}"))
}

fn criterion_4() -> Outcome {
    let chain = skewed_matrix(N, R).unwrap();
    let theta = Distribution::new(reversed(&qs(&THETA))).unwrap();
    let report = convergence_report(&chain, &theta).unwrap();
    let coefficients: Vec<(Rational, Rational)> =
        report.coefficients().into_iter().filter(|(_, c)| !c.is_zero()).collect();
    let single = coefficients == vec![(q("-1/5"), q("1/3"))];
    let pi = stationary(&chain).unwrap();
    let identity = (0..=6u32).all(|t| {
        let mu = step_distribution(&chain, &theta, t);
        let lhs: Rational = mu
            .probabilities()
            .iter()
            .zip(pi.probabilities())
            .map(|(m, p)| (m - p) * (m - p) / p)
            .sum();
        lhs == pow(&q("1/25"), t) / q("3") && lhs == report.chi_square_at(t)
    });
    // tv ≤ (√5 / (2√3))·5^{−t}  ⇔  tv² ≤ (5/12)·25^{−t}
    let bounded = (0..=10u32).all(|t| {
        let tv = tv_distance(&step_distribution(&chain, &theta, t), &pi);
        &tv * &tv <= q("5/12") * pow(&q("1/25"), t)
    });
    outcome(
        single && identity && bounded,
        format!("single c²=1/3 on −1/5 {single}, χ² identity t=0..6 {identity}, TV bound t=0..10 {bounded}"),
    )
}

fn criterion_5() -> Outcome {
    let typed: Vec<_> = (1..=3).map(|s| type_s_matrix(N, R, s).unwrap()).collect();
    let matrices = (0..3).all(|i| typed[i].matrix() == &ascending(&TYPED[i]));
    let spectra = simultaneous_spectra(N, R).unwrap();
    let mut lists = vec![(skewed_matrix(N, R).unwrap(), qs(&SKEWED_EIGENVALUES), &spectra.eigenvalues[R])];
    for s in 1..=3 {
        lists.push((typed[s - 1].clone(), qs(&TYPED_EIGENVALUES[s - 1]), &spectra.eigenvalues[s]));
    }
    let eigen = lists.iter().all(|(chain, expected, simultaneous)| {
        *simultaneous == expected
            && spectrum_multiset(chain) == sorted(expected.clone())
            && expected.iter().all(|l| verify_eigenvalue(chain, l))
    });
    let mut five: Vec<_> = (0..=R).map(|s| type_s_matrix(N, R, s).unwrap()).collect();
    five[R] = skewed_matrix(N, R).unwrap();
    let commute = (0..five.len()).all(|i| (i + 1..five.len()).all(|j| five[i].commutes_with(&five[j])));
    let mixture = mixture_matrix(N, R, &binomial_mixture_weights(R)).unwrap();
    let mixture_ok = spectrum_multiset(&mixture) == sorted(qs(&MIXTURE_EIGENVALUES));
    outcome(
        matrices && eigen && commute && mixture_ok,
        format!(
            "three matrices {matrices}, four eigenvalue lists {eigen}, pairwise commuting {commute}, binomial mixture spectrum {mixture_ok}"
        ),
    )
}

/// Young subgroups for every partition plus cyclic subgroups.
fn catalog(n: usize) -> Vec<(String, GroupSpec)> {
    let mut out: Vec<(String, GroupSpec)> = partitions(n)
        .into_iter()
        .map(|p| (format!("young{p:?}"), GroupSpec::young(&p).unwrap()))
        .collect();
    let full: String = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let mut cyclic = vec![format!("({full})"), "(1 2)".to_string()];
    if n >= 3 {
        cyclic.push("(1 2 3)".into());
    }
    if n >= 4 {
        cyclic.push("(1 2)(3 4)".into());
        cyclic.push("(1 2 3 4)".into());
    }
    if n >= 5 {
        cyclic.push("(1 2 3)(4 5)".into());
    }
    cyclic.sort();
    cyclic.dedup();
    out.extend(
        cyclic
            .into_iter()
            .map(|c| (format!("cyclic{c}"), GroupSpec::parse(n, &[c.as_str()]).unwrap())),
    );
    out
}

/// Three families in rotation: sparse random weights, random class
/// functions, and random weights averaged over conjugation by `K`.
fn random_weight(
    rng: &mut ChaCha8Rng,
    i: usize,
    spec: &GroupSpec,
    group: &GroupElements,
    k: &SubgroupSpec,
) -> WeightFunction {
    let n = group.degree();
    let elements = group.elements();
    let pick = |rng: &mut ChaCha8Rng| elements[rng.random_range(0..elements.len() as u64) as usize].clone();
    match i % 3 {
        0 => {
            let size = rng.random_range(1..=4u64);
            let mut entries = std::collections::BTreeMap::new();
            for _ in 0..size {
                entries.insert(pick(rng), Rational::from_integer(rng.random_range(1..=5i64).into()));
            }
            WeightFunction::new(n, entries).unwrap()
        }
        1 => {
            let values: Vec<(Permutation, Rational)> = elements
                .iter()
                .map(|g| (g.clone(), Rational::from_integer(rng.random_range(0..=3i64).into())))
                .collect();
            // one value per class via the first listed member
            let classes = dcwalk::weights::conjugacy_classes(group, spec.generators());
            let mut seen = std::collections::BTreeSet::new();
            let reps: Vec<(Permutation, Rational)> = values
                .into_iter()
                .zip(&classes)
                .filter(|(_, c)| seen.insert(**c))
                .map(|((g, v), _)| (g, if v.is_zero() { Rational::one() } else { v }))
                .collect();
            weight_class_function(spec, group, &reps).unwrap()
        }
        _ => {
            let g = pick(rng);
            let v = Rational::from_integer(rng.random_range(1..=5i64).into());
            let h = pick(rng);
            let mut entries = std::collections::BTreeMap::<Permutation, Rational>::new();
            for kk in k.elements().iter() {
                for (x, val) in [(&g, &v), (&h, &Rational::one())] {
                    let conj = kk.inverse().then(x).then(kk);
                    *entries.entry(conj).or_insert_with(Rational::zero) += val;
                }
            }
            WeightFunction::new(n, entries).unwrap()
        }
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    agree: usize,
    lumpable: usize,
    disagreements: Vec<String>,
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for n in 2..=5usize {
        let spec = GroupSpec::symmetric(n).unwrap();
        let group = generate_group(&spec, 1000).unwrap();
        let subgroups: Vec<(String, SubgroupSpec)> = catalog(n)
            .into_iter()
            .map(|(name, s)| (name, SubgroupSpec::generate(&s, 1000).unwrap()))
            .collect();
        for hi in 0..subgroups.len() {
            for ki in 0..subgroups.len() {
                jobs.push((n, spec.clone(), group.clone(), subgroups[hi].clone(), subgroups[ki].clone()));
            }
        }
    }
    let tallies: Vec<Tally> = jobs
        .par_iter()
        .enumerate()
        .map(|(j, (n, spec, group, (hn, h), (kn, k)))| {
            let mut rng = ChaCha8Rng::seed_from_u64(6);
            rng.set_stream(j as u64);
            let decomposition = double_cosets(group, h, k).unwrap();
            let parts = decomposition.parts();
            let mut tally = Tally::default();
            for i in 0..20 {
                let w = random_weight(&mut rng, i, spec, group, k);
                let verdict = check_lumping_hk(group, h, k, &w).unwrap();
                let walk = full_walk(group, &w).unwrap();
                let quotient = lump(&walk, &parts);
                let same_matrix = match (&quotient, verdict.lumps) {
                    (Ok(qc), true) => lumped_matrix(group, h, k, &w).unwrap().matrix() == qc.matrix(),
                    (Err(_), false) => true,
                    _ => false,
                };
                tally.cases += 1;
                tally.lumpable += usize::from(verdict.lumps);
                if same_matrix {
                    tally.agree += 1;
                } else {
                    tally.disagreements.push(format!("Sym{n} H={hn} K={kn} weight#{i}"));
                }
            }
            tally
        })
        .collect();
    let elapsed = start.elapsed();
    let total = tallies.iter().fold(Tally::default(), |mut acc, t| {
        acc.cases += t.cases;
        acc.agree += t.agree;
        acc.lumpable += t.lumpable;
        acc.disagreements.extend(t.disagreements.iter().cloned());
        acc
    });
    let fast = elapsed < Duration::from_secs(60);
    outcome(
        total.agree == total.cases && fast,
        format!(
            "{}/{} verdicts agree ({} lumpable, {} not) over {} (H, K) pairs, {elapsed:.2?} (< 60 s){}",
            total.agree,
            total.cases,
            total.lumpable,
            total.cases - total.lumpable,
            jobs.len(),
            if total.disagreements.is_empty() {
                String::new()
            } else {
                format!("; first disagreements {:?}", &total.disagreements[..total.disagreements.len().min(3)])
            }
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in 1..=6usize {
        for n in 2 * r + 1..=14 {
            let walk = involutory_walk(&epsilon_bar(r, n - 2 * r, r).unwrap()).unwrap();
            checked += 1;
            if walk.matrix() != skewed_matrix(n, r).unwrap().matrix() {
                failures.push((n, r));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} (n, r) pairs equal exactly, failures {failures:?}"))
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 3..=12usize {
        for r in 1..=(n - 1) / 2 {
            checked += 1;
            let report = check_antidiagonal_property(&skewed_matrix(n, r).unwrap());
            if !(report.holds && report.certified && report.complete) {
                failures.push((n, r));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} (n, r) pairs certified, failures {failures:?}"))
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (n, r) in [(5, 2), (7, 3), (9, 4), (10, 4)] {
        for s in 0..=r {
            checked += 1;
            if type_s_matrix(n, r, s).unwrap().matrix() != &subset_action_oracle(n, r, s) {
                failures.push((n, r, s));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} (n, r, s) cases equal the oracle, failures {failures:?}"))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let params = ShuffleParams::skewed(N, R).unwrap();
    let config = SimConfig::shuffle(params, 1_000_000, 1, 1);
    let trajectory = simulate(&config).unwrap();
    let empirical = empirical_matrix(std::slice::from_ref(&trajectory), R);
    let elapsed = start.elapsed();
    let exact = skewed_matrix(N, R).unwrap();
    let outside = empirical.outside_sigma(&exact, 5.0);
    let pi = predicted_spectrum(N, R).unwrap().stationary;
    let occupation_error = empirical
        .occupation
        .iter()
        .zip(pi.probabilities())
        .map(|(o, p)| (o - to_f64(p)).abs())
        .fold(0.0, f64::max);
    let all_rows = empirical.estimates.iter().all(Option::is_some);
    let fast = elapsed < Duration::from_secs(30);
    let ok = outside.is_empty() && all_rows && occupation_error <= 0.005 && fast;
    outcome(
        ok,
        format!(
            "seed 1, 10^6 steps: entries beyond 5σ {outside:?}, max |p̂−p| {:.5}, max occupation error {occupation_error:.5} (≤ 0.005), {elapsed:.2?} (< 30 s)",
            empirical.max_abs_error(&exact)
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 skewed matrix n=10 r=4", criterion_1),
        ("2 skewed spectrum", criterion_2),
        ("3 stationary law", criterion_3),
        ("4 convergence", criterion_4),
        ("5 type-s matrices and mixture", criterion_5),
        ("6 lumping criterion vs quotient oracle", criterion_6),
        ("7 involutory walk identity", criterion_7),
        ("8 anti-diagonal eigenvalues", criterion_8),
        ("9 type-s formula vs subset oracle", criterion_9),
        ("10 Monte Carlo", criterion_10),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = check();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!result.passed);
        println!("{tag} criterion {name}: {}", result.detail);
    }
    println!("{}/{} criteria passed", 10 - failed, 10);
    if failed > 0 {
        std::process::exit(1);
    }
}
