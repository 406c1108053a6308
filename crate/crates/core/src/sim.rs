//! Seeded Monte Carlo simulation of group walks projected to types.
//!
//! Every replicate draws from its own ChaCha8 stream: the generator is
//! seeded with `seed_from_u64(seed)` and then moved to stream number
//! `replicate`, so replicate `i` is reproducible on its own and the streams
//! are independent. Indices are drawn with `random_range` on integers only,
//! so trajectories are bit-identical across platforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::chain::{
    convergence_report, step_distribution, tv_distance, ChainError, Distribution, RationalChain,
};
use crate::cosets::type_of_unchecked;
use crate::exact::{to_f64, Rational};
use crate::perm::Permutation;
use crate::shuffle::{shuffle_by_index, shuffle_set, skewed_matrix, type_s_matrix, ShuffleError, ShuffleParams};
use crate::weights::WeightFunction;

/// Fewest replicates accepted by [`empirical_tv`].
pub const MIN_TV_REPLICATES: usize = 10_000;

/// Largest `D_s` that is materialised up front rather than unranked per step.
const PRECOMPUTE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("steps must be at least 1")]
    NoSteps,
    #[error("replicates must be at least 1")]
    NoReplicates,
    #[error("empirical TV needs at least {MIN_TV_REPLICATES} replicates, got {0}")]
    TooFewReplicates(usize),
    #[error("start permutation has degree {got}, walk has degree {expected}")]
    StartDegree { expected: usize, got: usize },
    #[error("no permutation of type {x} with r = {r} in Sym_{n}")]
    NoTypeRepresentative { x: usize, r: usize, n: usize },
    #[error("start distribution has {got} entries, expected {expected}")]
    StartLength { expected: usize, got: usize },
    #[error("r = {r} exceeds the degree {n}")]
    BlockTooLarge { r: usize, n: usize },
    #[error("weights are too large to sample with 64-bit integers")]
    WeightOverflow,
    #[error("exact chain is only available for shuffle walks")]
    NoExactChain,
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// The step distribution of the walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Walk {
    /// Uniform on `D` or `D_s`; types are taken with the shuffle's `r`.
    Shuffle(ShuffleParams),
    /// `Q(g) = w(g)/w(G)`; types are `|{1..r}g ∩ {1..r}|`.
    Weighted { weight: WeightFunction, r: usize },
}

impl Walk {
    pub fn degree(&self) -> usize {
        match self {
            Walk::Shuffle(p) => p.n(),
            Walk::Weighted { weight, .. } => weight.degree(),
        }
    }

    pub fn r(&self) -> usize {
        match self {
            Walk::Shuffle(p) => p.r(),
            Walk::Weighted { r, .. } => *r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Start {
    Permutation(Permutation),
    /// A fixed representative of the given type.
    Type(usize),
    /// A type drawn from this law on `0..=r`, then its representative.
    Types(Distribution),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub walk: Walk,
    pub steps: usize,
    pub replicates: usize,
    pub seed: u64,
    pub start: Start,
}

impl SimConfig {
    pub fn shuffle(params: ShuffleParams, steps: usize, replicates: usize, seed: u64) -> Self {
        SimConfig {
            walk: Walk::Shuffle(params),
            steps,
            replicates,
            seed,
            start: Start::Permutation(Permutation::identity(params.n())),
        }
    }

    pub fn with_start(mut self, start: Start) -> Self {
        self.start = start;
        self
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.steps == 0 {
            return Err(SimError::NoSteps);
        }
        if self.replicates == 0 {
            return Err(SimError::NoReplicates);
        }
        let (n, r) = (self.walk.degree(), self.walk.r());
        if r > n {
            return Err(SimError::BlockTooLarge { r, n });
        }
        match &self.start {
            Start::Permutation(g) if g.degree() != n => Err(SimError::StartDegree {
                expected: n,
                got: g.degree(),
            }),
            Start::Type(x) => type_representative(n, r, *x).map(|_| ()),
            Start::Types(d) if d.len() != r + 1 => Err(SimError::StartLength {
                expected: r + 1,
                got: d.len(),
            }),
            _ => Ok(()),
        }
    }
}

/// Types `|{1..r}g_t ∩ {1..r}|` for `t = 0..=steps`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub types: Vec<usize>,
    pub seed: u64,
    pub replicate: u64,
}

impl Trajectory {
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.types.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Swaps `1..r−x` with `r+1..2r−x`; a permutation of type `x`.
pub fn type_representative(n: usize, r: usize, x: usize) -> Result<Permutation, SimError> {
    if x > r || 2 * r - x > n {
        return Err(SimError::NoTypeRepresentative { x, r, n });
    }
    let mut images: Vec<usize> = (1..=n).collect();
    for i in 0..r - x {
        images.swap(i, r + i);
    }
    Ok(Permutation::from_images(&images).expect("a transposition product"))
}

/// Samples an index with probability proportional to nonnegative rationals,
/// via integer cumulative weights.
#[derive(Debug, Clone)]
struct IntegerSampler {
    cumulative: Vec<u64>,
}

impl IntegerSampler {
    fn new<'a>(weights: impl IntoIterator<Item = &'a Rational>) -> Result<Self, SimError> {
        let weights: Vec<&Rational> = weights.into_iter().collect();
        let l = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut total = 0u64;
        for w in weights {
            let v = (w.numer() * (&l / w.denom())).to_u64().ok_or(SimError::WeightOverflow)?;
            total = total.checked_add(v).ok_or(SimError::WeightOverflow)?;
            cumulative.push(total);
        }
        Ok(IntegerSampler { cumulative })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("nonempty");
        let u = rng.random_range(0..total);
        self.cumulative.partition_point(|&c| c <= u)
    }
}

enum Stepper {
    Table(Vec<Permutation>),
    Unrank(ShuffleParams),
    Weighted(Vec<Permutation>, IntegerSampler),
}

impl Stepper {
    fn new(walk: &Walk) -> Result<Self, SimError> {
        Ok(match walk {
            Walk::Shuffle(p) if p.count() <= PRECOMPUTE_LIMIT => Stepper::Table(shuffle_set(p)?),
            Walk::Shuffle(p) => Stepper::Unrank(*p),
            Walk::Weighted { weight, .. } => {
                let (perms, values): (Vec<Permutation>, Vec<&Rational>) =
                    weight.support().map(|(g, v)| (g.clone(), v)).unzip();
                Stepper::Weighted(perms, IntegerSampler::new(values)?)
            }
        })
    }

    fn step(&self, g: &mut Permutation, rng: &mut ChaCha8Rng) {
        match self {
            Stepper::Table(d) => {
                let i = rng.random_range(0..d.len() as u64) as usize;
                g.then_assign(&d[i]);
            }
            Stepper::Unrank(p) => {
                let i = rng.random_range(0..p.count());
                g.then_assign(&shuffle_by_index(p, i).expect("index in range"));
            }
            Stepper::Weighted(perms, sampler) => g.then_assign(&perms[sampler.sample(rng)]),
        }
    }
}

/// The RNG of one replicate.
pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

fn run(config: &SimConfig, stepper: &Stepper, replicate: u64) -> Result<Trajectory, SimError> {
    let (n, r) = (config.walk.degree(), config.walk.r());
    let mut rng = replicate_rng(config.seed, replicate);
    let mut g = match &config.start {
        Start::Permutation(g) => g.clone(),
        Start::Type(x) => type_representative(n, r, *x)?,
        Start::Types(d) => {
            let x = IntegerSampler::new(d.probabilities())?.sample(&mut rng);
            type_representative(n, r, x)?
        }
    };
    let mut types = Vec::with_capacity(config.steps + 1);
    types.push(type_of_unchecked(&g, r));
    for _ in 0..config.steps {
        stepper.step(&mut g, &mut rng);
        types.push(type_of_unchecked(&g, r));
    }
    Ok(Trajectory {
        types,
        seed: config.seed,
        replicate,
    })
}

/// The first replicate: `g_{t+1} = g_t·d` with `d` drawn from the walk.
pub fn simulate(config: &SimConfig) -> Result<Trajectory, SimError> {
    config.validate()?;
    run(config, &Stepper::new(&config.walk)?, 0)
}

/// All replicates, run in parallel on independent streams.
pub fn simulate_replicates(config: &SimConfig) -> Result<Vec<Trajectory>, SimError> {
    config.validate()?;
    let stepper = Stepper::new(&config.walk)?;
    (0..config.replicates as u64)
        .into_par_iter()
        .map(|i| run(config, &stepper, i))
        .collect()
}

/// Transition counts and row-normalised estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMatrix {
    pub counts: Vec<Vec<u64>>,
    pub row_totals: Vec<u64>,
    /// `None` for rows never left.
    pub estimates: Vec<Option<Vec<f64>>>,
    /// `√(p̂(1−p̂)/N_row)`.
    pub std_errors: Vec<Option<Vec<f64>>>,
    /// Fraction of all recorded positions spent in each type.
    pub occupation: Vec<f64>,
}

impl EmpiricalMatrix {
    /// Largest `|p̂ − p|` over visited rows.
    pub fn max_abs_error(&self, exact: &RationalChain) -> f64 {
        self.deviations(exact).map(|(_, _, d, _)| d).fold(0.0, f64::max)
    }

    /// Entries with `|p̂ − p| > k·se`. A zero standard error (a row that
    /// always or never made this move) demands exact agreement.
    pub fn outside_sigma(&self, exact: &RationalChain, k: f64) -> Vec<(usize, usize)> {
        self.deviations(exact)
            .filter(|&(_, _, d, se)| if se == 0.0 { d != 0.0 } else { d > k * se })
            .map(|(x, z, _, _)| (x, z))
            .collect()
    }

    fn deviations<'a>(
        &'a self,
        exact: &'a RationalChain,
    ) -> impl Iterator<Item = (usize, usize, f64, f64)> + 'a {
        self.estimates
            .iter()
            .zip(&self.std_errors)
            .enumerate()
            .filter_map(|(x, (e, s))| Some((x, e.as_ref()?, s.as_ref()?)))
            .flat_map(move |(x, e, s)| {
                (0..e.len()).map(move |z| (x, z, (e[z] - to_f64(exact.entry(x, z))).abs(), s[z]))
            })
    }
}

/// Pools transitions of all trajectories over types `0..=r`.
pub fn empirical_matrix(trajectories: &[Trajectory], r: usize) -> EmpiricalMatrix {
    let dim = r + 1;
    let mut counts = vec![vec![0u64; dim]; dim];
    let mut visits = vec![0u64; dim];
    for t in trajectories {
        for &x in &t.types {
            visits[x] += 1;
        }
        for (x, z) in t.transitions() {
            counts[x][z] += 1;
        }
    }
    let row_totals: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();
    let estimates: Vec<Option<Vec<f64>>> = counts
        .iter()
        .zip(&row_totals)
        .map(|(row, &total)| {
            (total > 0).then(|| row.iter().map(|&c| c as f64 / total as f64).collect())
        })
        .collect();
    let std_errors = estimates
        .iter()
        .zip(&row_totals)
        .map(|(e, &total)| {
            e.as_ref().map(|row: &Vec<f64>| {
                row.iter()
                    .map(|&p| (p * (1.0 - p) / total as f64).sqrt())
                    .collect()
            })
        })
        .collect();
    let all: u64 = visits.iter().sum();
    let occupation = visits.iter().map(|&v| v as f64 / all.max(1) as f64).collect();
    EmpiricalMatrix {
        counts,
        row_totals,
        estimates,
        std_errors,
        occupation,
    }
}

/// The exact lumped chain of a shuffle walk.
pub fn exact_chain(walk: &Walk) -> Result<RationalChain, SimError> {
    match walk {
        Walk::Shuffle(p) if p.s() == p.r() => Ok(skewed_matrix(p.n(), p.r())?),
        Walk::Shuffle(p) => Ok(type_s_matrix(p.n(), p.r(), p.s())?),
        Walk::Weighted { .. } => Err(SimError::NoExactChain),
    }
}

/// The law of the starting type.
pub fn start_distribution(config: &SimConfig) -> Result<Distribution, SimError> {
    let dim = config.walk.r() + 1;
    Ok(match &config.start {
        Start::Permutation(g) => Distribution::point(dim, type_of_unchecked(g, config.walk.r())),
        Start::Type(x) => Distribution::point(dim, *x),
        Start::Types(d) => d.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvReport {
    pub t: usize,
    /// Empirical law of `M_t` over replicates.
    pub empirical: Vec<f64>,
    /// Exact `θQ^t`.
    pub exact: Distribution,
    /// `‖empirical − θQ^t‖_TV`.
    pub empirical_tv: f64,
    /// Exact `‖θQ^t − π‖_TV`.
    pub exact_tv_to_stationary: Rational,
    /// Whether the exact distance lies under the spectral bound; `None`
    /// when the chain admits no exact spectral report.
    pub bound_holds: Option<bool>,
    pub bound_decimal: Option<String>,
}

/// Compares the replicate distribution of `M_t` with the exact `θQ^t`,
/// and the exact distance to stationarity with the spectral bound.
pub fn empirical_tv(config: &SimConfig, t: usize) -> Result<TvReport, SimError> {
    if config.replicates < MIN_TV_REPLICATES {
        return Err(SimError::TooFewReplicates(config.replicates));
    }
    let chain = exact_chain(&config.walk)?;
    let theta = start_distribution(config)?;
    let run_config = SimConfig {
        steps: t.max(1),
        ..config.clone()
    };
    let trajectories = simulate_replicates(&run_config)?;
    let dim = chain.dim();
    let mut counts = vec![0u64; dim];
    for tr in &trajectories {
        counts[tr.types[t]] += 1;
    }
    let empirical: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / trajectories.len() as f64)
        .collect();
    let t_exp = u32::try_from(t).expect("t fits in u32");
    let exact = step_distribution(&chain, &theta, t_exp);
    let empirical_tv = 0.5
        * empirical
            .iter()
            .zip(exact.probabilities())
            .map(|(e, p)| (e - to_f64(p)).abs())
            .sum::<f64>();
    let report = convergence_report(&chain, &theta).ok();
    let pi = match &report {
        Some(r) => r.stationary.clone(),
        None => crate::chain::stationary(&chain)?,
    };
    let exact_tv_to_stationary = tv_distance(&exact, &pi);
    let bound_holds = report.as_ref().map(|r| r.bound_holds(&exact_tv_to_stationary, t_exp));
    let bound_decimal = report.as_ref().map(|r| r.tv_bound_decimal_at(t_exp, 12));
    Ok(TvReport {
        t,
        empirical,
        exact,
        empirical_tv,
        exact_tv_to_stationary,
        bound_holds,
        bound_decimal,
    })
}

/// Counts of `(previous, current) → next` over all trajectories.
pub fn second_order_counts(trajectories: &[Trajectory], r: usize) -> Vec<Vec<Vec<u64>>> {
    let dim = r + 1;
    let mut counts = vec![vec![vec![0u64; dim]; dim]; dim];
    for t in trajectories {
        for w in t.types.windows(3) {
            counts[w[0]][w[1]][w[2]] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};
    use crate::perm::{generate_group, GroupSpec};
    use crate::weights::weight_uniform_on_set;

    fn skewed(n: usize, r: usize) -> ShuffleParams {
        ShuffleParams::skewed(n, r).unwrap()
    }

    #[test]
    fn first_step_from_identity_is_type_zero() {
        let cfg = SimConfig::shuffle(skewed(10, 4), 5, 1, 3);
        let tr = simulate(&cfg).unwrap();
        assert_eq!(tr.types[0], 4);
        assert_eq!(tr.types[1], 0);
        assert_eq!(tr.types.len(), 6);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = SimConfig::shuffle(skewed(10, 4), 500, 4, 99);
        assert_eq!(simulate_replicates(&cfg).unwrap(), simulate_replicates(&cfg).unwrap());
        let other = SimConfig { seed: 100, ..cfg.clone() };
        assert_ne!(simulate(&cfg).unwrap().types, simulate(&other).unwrap().types);
        let reps = simulate_replicates(&cfg).unwrap();
        assert_ne!(reps[0].types, reps[1].types);
        assert_eq!(reps[0], simulate(&cfg).unwrap());
    }

    #[test]
    fn support_constraint_holds() {
        let cfg = SimConfig::shuffle(skewed(10, 4), 100_000, 1, 7);
        let tr = simulate(&cfg).unwrap();
        assert!(tr.transitions().all(|(x, z)| z <= 4 - x));
    }

    #[test]
    fn deterministic_row_is_exact() {
        let cfg = SimConfig::shuffle(skewed(10, 4), 20_000, 1, 1);
        let emp = empirical_matrix(&[simulate(&cfg).unwrap()], 4);
        assert_eq!(emp.estimates[4].as_ref().unwrap(), &vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn unvisited_rows_are_missing() {
        let tr = Trajectory {
            types: vec![0, 1, 0],
            seed: 0,
            replicate: 0,
        };
        let emp = empirical_matrix(&[tr], 2);
        assert!(emp.estimates[2].is_none());
        assert!(emp.std_errors[2].is_none());
        assert_eq!(emp.estimates[0].as_ref().unwrap(), &vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn config_errors() {
        let cfg = SimConfig::shuffle(skewed(10, 4), 0, 1, 1);
        assert_eq!(simulate(&cfg), Err(SimError::NoSteps));
        let cfg = SimConfig::shuffle(skewed(10, 4), 1, 0, 1);
        assert_eq!(simulate(&cfg), Err(SimError::NoReplicates));
        let cfg = SimConfig::shuffle(skewed(10, 4), 1, 1, 1).with_start(Start::Permutation(Permutation::identity(3)));
        assert!(matches!(simulate(&cfg), Err(SimError::StartDegree { .. })));
        let cfg = SimConfig::shuffle(skewed(10, 4), 1, 100, 1);
        assert_eq!(empirical_tv(&cfg, 1), Err(SimError::TooFewReplicates(100)));
    }

    #[test]
    fn typed_starts() {
        for x in 0..=4 {
            let cfg = SimConfig::shuffle(skewed(10, 4), 1, 1, 5).with_start(Start::Type(x));
            assert_eq!(simulate(&cfg).unwrap().types[0], x);
        }
        let theta = Distribution::new(vec![int(0), int(0), frac(1, 2), frac(1, 2), int(0)]).unwrap();
        let cfg = SimConfig::shuffle(skewed(10, 4), 1, 200, 5).with_start(Start::Types(theta));
        let starts: Vec<usize> = simulate_replicates(&cfg).unwrap().iter().map(|t| t.types[0]).collect();
        assert!(starts.iter().all(|&x| x == 2 || x == 3));
        assert!(starts.contains(&2) && starts.contains(&3));
    }

    #[test]
    fn shuffle_sampling_is_uniform() {
        let params = skewed(10, 4);
        let d = shuffle_set(&params).unwrap();
        let stepper = Stepper::new(&Walk::Shuffle(params)).unwrap();
        let mut rng = replicate_rng(11, 0);
        let draws = 1_000_000usize;
        let mut counts = vec![0u64; d.len()];
        for _ in 0..draws {
            let mut g = Permutation::identity(10);
            stepper.step(&mut g, &mut rng);
            counts[d.iter().position(|x| *x == g).unwrap()] += 1;
        }
        let p = 1.0 / 15.0;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * p).abs() < 5.0 * sigma, "{c}");
        }
    }

    #[test]
    fn unranking_path_matches_table() {
        let params = skewed(10, 4);
        let table = Stepper::new(&Walk::Shuffle(params)).unwrap();
        let unrank = Stepper::Unrank(params);
        let (mut a, mut b) = (replicate_rng(4, 2), replicate_rng(4, 2));
        let (mut g, mut h) = (Permutation::identity(10), Permutation::identity(10));
        for _ in 0..200 {
            table.step(&mut g, &mut a);
            unrank.step(&mut h, &mut b);
            assert_eq!(g, h);
        }
    }

    #[test]
    fn weighted_walk_matches_shuffle_walk_statistics() {
        let params = skewed(7, 3);
        let d = shuffle_set(&params).unwrap();
        let walk = Walk::Weighted {
            weight: weight_uniform_on_set(&d).unwrap(),
            r: 3,
        };
        let cfg = SimConfig {
            walk,
            steps: 200_000,
            replicates: 1,
            seed: 2,
            start: Start::Type(3),
        };
        let emp = empirical_matrix(&[simulate(&cfg).unwrap()], 3);
        let exact = skewed_matrix(7, 3).unwrap();
        assert!(emp.outside_sigma(&exact, 5.0).is_empty());
        assert!(matches!(exact_chain(&cfg.walk), Err(SimError::NoExactChain)));
    }

    #[test]
    fn projected_walk_is_empirically_markov() {
        // next-type frequencies given (previous, current) should not depend
        // on the previous type
        let cfg = SimConfig::shuffle(skewed(9, 3), 400_000, 1, 17);
        let tr = simulate(&cfg).unwrap();
        let counts = second_order_counts(&[tr], 3);
        let exact = skewed_matrix(9, 3).unwrap();
        for current in 0..=3 {
            for prev in 0..=3 {
                let row = &counts[prev][current];
                let total: u64 = row.iter().sum();
                if total < 1_000 {
                    continue;
                }
                for z in 0..=3 {
                    let p = to_f64(exact.entry(current, z));
                    let phat = row[z] as f64 / total as f64;
                    let se = (p * (1.0 - p) / total as f64).sqrt();
                    if se == 0.0 {
                        assert_eq!(phat, p);
                    } else {
                        assert!((phat - p).abs() < 5.0 * se, "prev {prev} cur {current} z {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_walk_on_small_group() {
        let spec = GroupSpec::symmetric(4).unwrap();
        let g = generate_group(&spec, 100).unwrap();
        let w = weight_uniform_on_set(g.elements()).unwrap();
        let cfg = SimConfig {
            walk: Walk::Weighted { weight: w, r: 2 },
            steps: 10,
            replicates: 3,
            seed: 0,
            start: Start::Type(2),
        };
        let reps = simulate_replicates(&cfg).unwrap();
        assert_eq!(reps.len(), 3);
        assert!(reps.iter().all(|t| t.types.iter().all(|&x| x <= 2)));
    }

    #[test]
    fn tv_at_time_zero_is_exact_for_point_start() {
        let cfg = SimConfig::shuffle(skewed(10, 4), 1, MIN_TV_REPLICATES, 3);
        let rep = empirical_tv(&cfg, 0).unwrap();
        assert_eq!(rep.empirical_tv, 0.0);
        assert_eq!(rep.empirical, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(rep.bound_holds, Some(true));
    }
}
