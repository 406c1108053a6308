//! Finite Markov chains with exact rational transition matrices.
//!
//! Covers strong lumping, stationary distributions, reversibility and
//! ergodicity, exact eigenvalue certification, and the chi-square identity
//! for reversible chains with a rational spectrum:
//!
//! ```text
//! Σ_x (θQ^t − π)_x² / π_x  =  Σ_{λ≠1} c_λ² λ^{2t}
//! ```
//!
//! where `c_λ²` is the squared length of the projection of `θ` onto the
//! `λ`-eigenspace of right multiplication by `Q`, measured in the inner
//! product `⟨u, v⟩ = Σ u_z v_z / π_z`.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{format_rational, pow, sqrt_decimal_upper, Rational};
use crate::linalg::{self, Matrix};
use crate::poly::Polynomial;

/// Largest dimension `char_poly` accepts.
pub const CHAR_POLY_MAX_DIM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("transition matrix must be square and non-empty ({rows} rows, row {row} has {cols} entries)")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("negative transition probability at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: String },
    #[error("{labels} labels for {states} states")]
    LabelCount { labels: usize, states: usize },
    #[error("distribution has a negative entry at {index}")]
    NegativeProbability { index: usize },
    #[error("distribution sums to {sum}, not 1")]
    DistributionSum { sum: String },
    #[error("distribution has {got} entries, chain has {expected} states")]
    DistributionLength { got: usize, expected: usize },
    #[error("partition is malformed: {0}")]
    BadPartition(String),
    #[error("not lumpable: states {x} and {y} share part {part} but move to part {target} with probabilities {px} and {py}")]
    NotLumpable {
        x: usize,
        y: usize,
        part: usize,
        target: usize,
        px: String,
        py: String,
    },
    #[error("chain is reducible; the invariant distribution is not unique")]
    Reducible,
    #[error("chain is not reversible: detailed balance fails for states {x} and {y}")]
    NotReversible { x: usize, y: usize },
    #[error("stationary distribution has a zero entry at {index}")]
    ZeroStationary { index: usize },
    #[error("dimension {dim} exceeds the limit of {max} for characteristic polynomials")]
    TooLarge { dim: usize, max: usize },
    #[error("spectrum is not fully rational ({found} of {dim} eigenvalues certified); use the approximate mode")]
    IrrationalSpectrum { found: usize, dim: usize },
    #[error("{value} is not an eigenvalue")]
    NotAnEigenvalue { value: String },
    #[error("eigenvalue {value} has geometric multiplicity {geometric} but algebraic multiplicity {algebraic}")]
    Defective {
        value: String,
        geometric: usize,
        algebraic: usize,
    },
}

/// A row-stochastic matrix of rationals with labelled states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalChain {
    labels: Vec<String>,
    matrix: Matrix,
}

impl RationalChain {
    pub fn new(labels: Vec<String>, matrix: Matrix) -> Result<Self, ChainError> {
        let n = matrix.len();
        if n == 0 {
            return Err(ChainError::NotSquare {
                rows: 0,
                row: 0,
                cols: 0,
            });
        }
        if labels.len() != n {
            return Err(ChainError::LabelCount {
                labels: labels.len(),
                states: n,
            });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(ChainError::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
            if let Some(j) = row.iter().position(Signed::is_negative) {
                return Err(ChainError::NegativeEntry { row: i, col: j });
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(ChainError::RowSum {
                    row: i,
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(RationalChain { labels, matrix })
    }

    /// For rows that are stochastic by construction; skips the row sums.
    pub(crate) fn new_unchecked(labels: Vec<String>, matrix: Matrix) -> Self {
        RationalChain { labels, matrix }
    }

    /// States labelled `0..n`.
    pub fn from_matrix(matrix: Matrix) -> Result<Self, ChainError> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::new(labels, matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn entry(&self, from: usize, to: usize) -> &Rational {
        &self.matrix[from][to]
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ChainError> {
        if labels.len() != self.dim() {
            return Err(ChainError::LabelCount {
                labels: labels.len(),
                states: self.dim(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// `Q^t`.
    pub fn power(&self, t: u32) -> Matrix {
        let mut result = linalg::identity(self.dim());
        let mut base = self.matrix.clone();
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                result = linalg::mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = linalg::mul(&base, &base);
            }
        }
        result
    }

    /// True when `self · other = other · self`.
    pub fn commutes_with(&self, other: &RationalChain) -> bool {
        self.dim() == other.dim()
            && linalg::mul(&self.matrix, &other.matrix) == linalg::mul(&other.matrix, &self.matrix)
    }
}

/// A probability vector over the states of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    probabilities: Vec<Rational>,
}

impl Distribution {
    pub fn new(probabilities: Vec<Rational>) -> Result<Self, ChainError> {
        if let Some(i) = probabilities.iter().position(Signed::is_negative) {
            return Err(ChainError::NegativeProbability { index: i });
        }
        let sum: Rational = probabilities.iter().sum();
        if !sum.is_one() {
            return Err(ChainError::DistributionSum {
                sum: format_rational(&sum),
            });
        }
        Ok(Distribution { probabilities })
    }

    /// Point mass at `state`.
    pub fn point(dim: usize, state: usize) -> Self {
        let mut p = vec![Rational::zero(); dim];
        p[state] = Rational::one();
        Distribution { probabilities: p }
    }

    pub fn uniform(dim: usize) -> Self {
        let u = Rational::new(1.into(), dim.into());
        Distribution {
            probabilities: vec![u; dim],
        }
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.probabilities[i]
    }
}

/// Quotient of `chain` by `partition` (Kemeny–Snell strong lumping).
///
/// Every state must lie in exactly one part. The quotient exists iff for
/// every pair of parts `P_i`, `P_j` the mass `p(x, P_j)` is the same for all
/// `x ∈ P_i`; otherwise the error names a violating pair.
pub fn lump(chain: &RationalChain, partition: &[Vec<usize>]) -> Result<RationalChain, ChainError> {
    let n = chain.dim();
    let mut part_of = vec![usize::MAX; n];
    for (p, part) in partition.iter().enumerate() {
        if part.is_empty() {
            return Err(ChainError::BadPartition(format!("part {p} is empty")));
        }
        for &s in part {
            if s >= n {
                return Err(ChainError::BadPartition(format!("state {s} out of range")));
            }
            if part_of[s] != usize::MAX {
                return Err(ChainError::BadPartition(format!("state {s} appears twice")));
            }
            part_of[s] = p;
        }
    }
    if let Some(s) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(ChainError::BadPartition(format!("state {s} is not covered")));
    }
    let k = partition.len();
    let masses = |x: usize| -> Vec<Rational> {
        let mut m = vec![Rational::zero(); k];
        for (y, q) in chain.matrix[x].iter().enumerate() {
            if !q.is_zero() {
                m[part_of[y]] += q;
            }
        }
        m
    };
    let mut rows = Vec::with_capacity(k);
    for (p, part) in partition.iter().enumerate() {
        let first = masses(part[0]);
        for &y in &part[1..] {
            let other = masses(y);
            if let Some(target) = (0..k).find(|&j| first[j] != other[j]) {
                return Err(ChainError::NotLumpable {
                    x: part[0],
                    y,
                    part: p,
                    target,
                    px: format_rational(&first[target]),
                    py: format_rational(&other[target]),
                });
            }
        }
        rows.push(first);
    }
    let labels = partition
        .iter()
        .map(|part| chain.labels[part[0]].clone())
        .collect();
    RationalChain::new(labels, rows)
}

/// Irreducibility and aperiodicity of the positive-entry digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ergodicity {
    pub irreducible: bool,
    /// Every state has period 1. A state with no return path has no
    /// period and makes this false.
    pub aperiodic: bool,
}

impl Ergodicity {
    pub fn is_ergodic(&self) -> bool {
        self.irreducible && self.aperiodic
    }
}

fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

pub fn is_ergodic(chain: &RationalChain) -> Ergodicity {
    let n = chain.dim();
    let adj: Vec<Vec<usize>> = chain
        .matrix
        .iter()
        .map(|row| (0..n).filter(|&j| !row[j].is_zero()).collect())
        .collect();
    let reach: Vec<Vec<bool>> = (0..n).map(|s| reachable(&adj, s)).collect();
    let irreducible = reach.iter().all(|r| r.iter().all(|&b| b));
    // Strongly connected component of each state, then the period of each
    // component from BFS levels: gcd over internal edges (u, v) of
    // level(u) + 1 - level(v).
    let mut aperiodic = true;
    let mut done = vec![false; n];
    for s in 0..n {
        if done[s] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&v| reach[s][v] && reach[v][s]).collect();
        for &v in &comp {
            done[v] = true;
        }
        let in_comp = |v: usize| reach[s][v] && reach[v][s];
        let mut level = vec![usize::MAX; n];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut period: usize = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !in_comp(v) {
                    continue;
                }
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    let diff = (level[u] + 1).abs_diff(level[v]);
                    period = period.gcd(&diff);
                }
            }
        }
        if period != 1 {
            aperiodic = false;
        }
    }
    Ergodicity {
        irreducible,
        aperiodic,
    }
}

/// The unique invariant distribution of an irreducible chain, by exact
/// elimination on `π(Q − I) = 0`, `Σπ = 1`.
pub fn stationary(chain: &RationalChain) -> Result<Distribution, ChainError> {
    if !is_ergodic(chain).irreducible {
        return Err(ChainError::Reducible);
    }
    let n = chain.dim();
    let mut a = linalg::transpose(&linalg::shift(&chain.matrix, &Rational::one()));
    a[n - 1] = vec![Rational::one(); n];
    let mut b = vec![Rational::zero(); n];
    b[n - 1] = Rational::one();
    let pi = linalg::solve(&a, &b).ok_or(ChainError::Reducible)?;
    Distribution::new(pi)
}

/// Result of a detailed-balance check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reversibility {
    pub reversible: bool,
    /// First pair `(x, y)` with `π_x Q_xy ≠ π_y Q_yx`.
    pub witness: Option<(usize, usize)>,
}

pub fn is_reversible(chain: &RationalChain, pi: &Distribution) -> Reversibility {
    let n = chain.dim();
    for x in 0..n {
        for y in x + 1..n {
            if &pi.probabilities[x] * &chain.matrix[x][y] != &pi.probabilities[y] * &chain.matrix[y][x] {
                return Reversibility {
                    reversible: false,
                    witness: Some((x, y)),
                };
            }
        }
    }
    Reversibility {
        reversible: true,
        witness: None,
    }
}

/// True iff `det(Q − λI) = 0`.
pub fn verify_eigenvalue(chain: &RationalChain, lambda: &Rational) -> bool {
    linalg::determinant(&linalg::shift(&chain.matrix, lambda)).is_zero()
}

/// `det(λI − Q)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly(chain: &RationalChain) -> Result<Polynomial, ChainError> {
    char_poly_of(&chain.matrix)
}

pub fn char_poly_of(a: &Matrix) -> Result<Polynomial, ChainError> {
    let n = a.len();
    if n > CHAR_POLY_MAX_DIM {
        return Err(ChainError::TooLarge {
            dim: n,
            max: CHAR_POLY_MAX_DIM,
        });
    }
    // coeffs[i] multiplies λ^i; coeffs[n] = 1.
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = linalg::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        m = linalg::mul(a, &m);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = linalg::mul(a, &m);
        coeffs[n - k] = -linalg::trace(&am) / Rational::from_integer(k.into());
    }
    Ok(Polynomial::new(coeffs))
}

/// Rational eigenvalues with algebraic multiplicities, from exact root
/// extraction on the characteristic polynomial. Errors if they do not
/// account for the whole spectrum.
pub fn rational_spectrum(chain: &RationalChain) -> Result<Vec<(Rational, usize)>, ChainError> {
    let p = char_poly(chain)?;
    let roots = p.rational_roots();
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    if found != chain.dim() {
        return Err(ChainError::IrrationalSpectrum {
            found,
            dim: chain.dim(),
        });
    }
    Ok(roots)
}

/// True when the multiset `eigenvalues` is exactly the spectrum of `chain`,
/// i.e. `Π (λ − λ_i)` equals the characteristic polynomial.
pub fn is_complete_spectrum(chain: &RationalChain, eigenvalues: &[Rational]) -> Result<bool, ChainError> {
    Ok(eigenvalues.len() == chain.dim() && char_poly(chain)? == Polynomial::from_roots(eigenvalues))
}

/// `θ Q^t`.
pub fn step_distribution(chain: &RationalChain, theta: &Distribution, t: u32) -> Distribution {
    let mut v = theta.probabilities.clone();
    for _ in 0..t {
        v = linalg::vec_mul(&v, &chain.matrix);
    }
    Distribution { probabilities: v }
}

/// Half the L¹ distance.
pub fn tv_distance(mu: &Distribution, nu: &Distribution) -> Rational {
    let s: Rational = mu
        .probabilities
        .iter()
        .zip(&nu.probabilities)
        .map(|(a, b)| (a - b).abs())
        .sum();
    s / Rational::from_integer(2.into())
}

/// `Σ_x (μ_x − π_x)² / π_x`.
pub fn chi_square(mu: &Distribution, pi: &Distribution) -> Rational {
    mu.probabilities
        .iter()
        .zip(&pi.probabilities)
        .map(|(m, p)| {
            let d = m - p;
            &d * &d / p
        })
        .sum()
}

/// `⟨u, v⟩ = Σ u_z v_z / π_z`.
pub fn inner(u: &[Rational], v: &[Rational], pi: &Distribution) -> Rational {
    u.iter()
        .zip(v)
        .zip(&pi.probabilities)
        .map(|((a, b), p)| a * b / p)
        .sum()
}

/// One eigenvalue's share of the decomposition `θ = π + Σ c_λ φ^(λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralComponent {
    pub eigenvalue: Rational,
    pub multiplicity: usize,
    /// Pairwise orthogonal row vectors spanning the eigenspace of right
    /// multiplication by `Q`. Not normalised; see `norms_squared`.
    pub eigenvectors: Vec<Vec<Rational>>,
    pub norms_squared: Vec<Rational>,
    /// `c_λ²`: squared norm of the projection of `θ` onto the eigenspace.
    pub coefficient_squared: Rational,
}

/// Stationary law, spectrum, and the closed-form chi-square and total
/// variation bounds for a reversible chain started from `θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub stationary: Distribution,
    pub theta: Distribution,
    /// Eigenvalues with multiplicity, in the order they were supplied or
    /// (for extracted spectra) decreasing.
    pub eigenvalues: Vec<Rational>,
    /// Non-unit eigenvalues only.
    pub components: Vec<SpectralComponent>,
    pub states: usize,
}

impl ConvergenceReport {
    /// `(λ, c_λ²)` for each non-unit eigenvalue.
    pub fn coefficients(&self) -> Vec<(Rational, Rational)> {
        self.components
            .iter()
            .map(|c| (c.eigenvalue.clone(), c.coefficient_squared.clone()))
            .collect()
    }

    pub fn coefficient(&self, lambda: &Rational) -> Option<&Rational> {
        self.components
            .iter()
            .find(|c| &c.eigenvalue == lambda)
            .map(|c| &c.coefficient_squared)
    }

    /// `Σ_{λ≠1} c_λ² λ^{2t}`.
    pub fn chi_square_at(&self, t: u32) -> Rational {
        self.components
            .iter()
            .map(|c| &c.coefficient_squared * pow(&c.eigenvalue, 2 * t))
            .sum()
    }

    /// Square of the total variation bound `√(states)/2 · √χ²(t)`.
    pub fn tv_bound_squared_at(&self, t: u32) -> Rational {
        Rational::new(self.states.into(), 4.into()) * self.chi_square_at(t)
    }

    /// The total variation bound rendered in decimal with `digits`
    /// significant digits, rounded up.
    pub fn tv_bound_decimal_at(&self, t: u32, digits: u32) -> String {
        sqrt_decimal_upper(&self.tv_bound_squared_at(t), digits)
    }

    /// Exact test of `tv ≤ bound(t)` via `tv² ≤ bound²`.
    pub fn bound_holds(&self, tv: &Rational, t: u32) -> bool {
        tv * tv <= self.tv_bound_squared_at(t)
    }
}

fn reversible_stationary(chain: &RationalChain) -> Result<Distribution, ChainError> {
    let pi = stationary(chain)?;
    if let Some(i) = pi.probabilities.iter().position(Zero::is_zero) {
        return Err(ChainError::ZeroStationary { index: i });
    }
    if let Some((x, y)) = is_reversible(chain, &pi).witness {
        return Err(ChainError::NotReversible { x, y });
    }
    Ok(pi)
}

/// Builds the report, extracting the spectrum from the characteristic
/// polynomial.
pub fn convergence_report(chain: &RationalChain, theta: &Distribution) -> Result<ConvergenceReport, ChainError> {
    reversible_stationary(chain)?;
    let spectrum = rational_spectrum(chain)?;
    let mut eigenvalues: Vec<Rational> = spectrum
        .iter()
        .flat_map(|(l, m)| std::iter::repeat_n(l.clone(), *m))
        .collect();
    eigenvalues.reverse();
    convergence_report_with_spectrum(chain, theta, &eigenvalues)
}

/// Builds the report from a caller-supplied spectrum (with multiplicity),
/// which is certified against the characteristic polynomial first.
pub fn convergence_report_with_spectrum(
    chain: &RationalChain,
    theta: &Distribution,
    eigenvalues: &[Rational],
) -> Result<ConvergenceReport, ChainError> {
    let n = chain.dim();
    if theta.len() != n {
        return Err(ChainError::DistributionLength {
            got: theta.len(),
            expected: n,
        });
    }
    let pi = reversible_stationary(chain)?;
    if !is_complete_spectrum(chain, eigenvalues)? {
        let found = eigenvalues
            .iter()
            .filter(|l| verify_eigenvalue(chain, l))
            .count();
        return Err(ChainError::IrrationalSpectrum { found, dim: n });
    }
    let mut distinct: Vec<Rational> = Vec::new();
    for l in eigenvalues {
        if !distinct.contains(l) {
            distinct.push(l.clone());
        }
    }
    let diff: Vec<Rational> = theta
        .probabilities
        .iter()
        .zip(&pi.probabilities)
        .map(|(a, b)| a - b)
        .collect();
    let mut components = Vec::new();
    for lambda in distinct.iter().filter(|l| !l.is_one()) {
        let algebraic = eigenvalues.iter().filter(|l| *l == lambda).count();
        // row eigenvectors: φ (Q − λI) = 0  ⇔  (Q − λI)ᵀ φᵀ = 0
        let basis = linalg::null_space(&linalg::transpose(&linalg::shift(&chain.matrix, lambda)));
        if basis.len() != algebraic {
            return Err(ChainError::Defective {
                value: format_rational(lambda),
                geometric: basis.len(),
                algebraic,
            });
        }
        let mut ortho: Vec<Vec<Rational>> = Vec::new();
        let mut norms: Vec<Rational> = Vec::new();
        for v in basis {
            let mut w = v;
            for (u, nu) in ortho.iter().zip(&norms) {
                let c = inner(&w, u, &pi) / nu;
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= &c * ui;
                }
            }
            let nw = inner(&w, &w, &pi);
            ortho.push(w);
            norms.push(nw);
        }
        let coefficient_squared = ortho
            .iter()
            .zip(&norms)
            .map(|(u, nu)| {
                let c = inner(&diff, u, &pi);
                &c * &c / nu
            })
            .sum();
        components.push(SpectralComponent {
            eigenvalue: lambda.clone(),
            multiplicity: algebraic,
            eigenvectors: ortho,
            norms_squared: norms,
            coefficient_squared,
        });
    }
    Ok(ConvergenceReport {
        stationary: pi,
        theta: theta.clone(),
        eigenvalues: eigenvalues.to_vec(),
        components,
        states: n,
    })
}
