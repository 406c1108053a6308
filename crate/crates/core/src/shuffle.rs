//! The skewed r-random-to-top shuffle and its type-s relatives.
//!
//! Matrices are indexed by type `x = 0..r` ascending in both rows and
//! columns. Layouts with `(0, 0)` in the bottom-right corner are a display
//! concern handled by [`to_bottom_right`] / [`from_bottom_right`].

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chain::{verify_eigenvalue, ChainError, Distribution, RationalChain};
use crate::exact::{binomial, binomial_q, format_rational, Rational};
use crate::linalg::{self, Matrix};
use crate::perm::{PermError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShuffleError {
    #[error("need n > 2r, got n = {n}, r = {r}")]
    DeckTooSmall { n: usize, r: usize },
    #[error("block size r must be positive")]
    ZeroBlock,
    #[error("type s = {s} exceeds r = {r}")]
    TypeOutOfRange { s: usize, r: usize },
    #[error("interval weight needs a ≥ r, got a = {a}, r = {r}")]
    WeightParameter { a: usize, r: usize },
    #[error("interval weight has no mass at x = {x}")]
    EmptyRow { x: usize },
    #[error("interval ({lo}, {hi}) is outside 0 ≤ lo ≤ hi ≤ {r}")]
    BadInterval { lo: usize, hi: usize, r: usize },
    #[error("negative interval weight at ({lo}, {hi})")]
    NegativeWeight { lo: usize, hi: usize },
    #[error("mixture weights must be nonnegative and not all zero")]
    BadMixture,
    #[error("shuffle index {index} out of range for {count} shuffles")]
    IndexOutOfRange { index: u64, count: u64 },
    #[error("Q_{s} and Q_{t} do not commute")]
    NotCommuting { s: usize, t: usize },
    #[error("basis vector {index} of Q_r is not an eigenvector of Q_{s}")]
    NotSimultaneous { s: usize, index: usize },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Deck size `n`, block size `r`, and an optional type `s` (absent means
/// the plain skewed shuffle, `s = r`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ShuffleParams {
    n: usize,
    r: usize,
    s: Option<usize>,
}

impl ShuffleParams {
    pub fn new(n: usize, r: usize, s: Option<usize>) -> Result<Self, ShuffleError> {
        if r == 0 {
            return Err(ShuffleError::ZeroBlock);
        }
        if n <= 2 * r {
            return Err(ShuffleError::DeckTooSmall { n, r });
        }
        if let Some(s) = s {
            if s > r {
                return Err(ShuffleError::TypeOutOfRange { s, r });
            }
        }
        Ok(ShuffleParams { n, r, s })
    }

    pub fn skewed(n: usize, r: usize) -> Result<Self, ShuffleError> {
        Self::new(n, r, None)
    }

    pub fn typed(n: usize, r: usize, s: usize) -> Result<Self, ShuffleError> {
        Self::new(n, r, Some(s))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of cards taken from below position `r`.
    pub fn s(&self) -> usize {
        self.s.unwrap_or(self.r)
    }

    /// `|D_s| = C(r, r−s)·C(n−r, s)`.
    pub fn count(&self) -> u64 {
        let (n, r, s) = (self.n as i64, self.r as i64, self.s() as i64);
        let c = binomial(r, r - s) * binomial(n - r, s);
        u64::try_from(c).expect("shuffle count fits in u64")
    }
}

/// The `idx`-th `k`-subset of `0..m` in lexicographic order.
fn unrank_combination(m: usize, k: usize, mut idx: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for remaining in (1..=k).rev() {
        loop {
            // subsets starting with `next`
            let with = u64::try_from(binomial((m - next - 1) as i64, (remaining - 1) as i64))
                .expect("fits in u64");
            if idx < with {
                out.push(next);
                next += 1;
                break;
            }
            idx -= with;
            next += 1;
        }
    }
    out
}

/// The shuffle moving the cards at `chosen` (1-based positions, any order)
/// to the top, preserving relative order, with the rest below in order.
pub fn shuffle_from_positions(n: usize, chosen: &[usize]) -> Result<Permutation, PermError> {
    let mut chosen = chosen.to_vec();
    chosen.sort_unstable();
    let mut images = vec![0; n];
    for (i, &pos) in chosen.iter().enumerate() {
        images[pos - 1] = i + 1;
    }
    let mut next = chosen.len() + 1;
    for img in images.iter_mut().filter(|v| **v == 0) {
        *img = next;
        next += 1;
    }
    Permutation::from_images(&images)
}

/// The `index`-th shuffle of `D_s`: the top block choice varies slowest.
/// Sampling a uniform index and unranking is exactly uniform on `D_s`.
pub fn shuffle_by_index(params: &ShuffleParams, index: u64) -> Result<Permutation, ShuffleError> {
    let count = params.count();
    if index >= count {
        return Err(ShuffleError::IndexOutOfRange { index, count });
    }
    let (n, r, s) = (params.n, params.r, params.s());
    let bottom_count = u64::try_from(binomial((n - r) as i64, s as i64)).expect("fits in u64");
    let top = unrank_combination(r, r - s, index / bottom_count);
    let bottom = unrank_combination(n - r, s, index % bottom_count);
    let chosen: Vec<usize> = top
        .into_iter()
        .map(|i| i + 1)
        .chain(bottom.into_iter().map(|i| i + r + 1))
        .collect();
    Ok(shuffle_from_positions(n, &chosen)?)
}

/// `D` (or `D_s`) as position permutations, in index order.
pub fn shuffle_set(params: &ShuffleParams) -> Result<Vec<Permutation>, ShuffleError> {
    (0..params.count())
        .map(|i| shuffle_by_index(params, i))
        .collect()
}

fn type_labels(r: usize) -> Vec<String> {
    (0..=r).map(|x| x.to_string()).collect()
}

fn c(n: usize, k: usize) -> Rational {
    binomial_q(n as i64, k as i64)
}

/// `c(n, k)` with a possibly negative `k`.
fn c_signed(n: usize, k: i64) -> Rational {
    binomial_q(n as i64, k)
}

/// Closed-form lumped chain of the skewed shuffle on types `0..r`:
/// `p(x, z) = C(r−x, z)·C(n−2r+x, r−z) / C(n−r, r)`.
pub fn skewed_matrix(n: usize, r: usize) -> Result<RationalChain, ShuffleError> {
    ShuffleParams::skewed(n, r)?;
    let denom = c(n - r, r);
    let rows = (0..=r)
        .map(|x| {
            (0..=r)
                .map(|z| c(r - x, z) * c(n - 2 * r + x, r - z) / &denom)
                .collect()
        })
        .collect();
    Ok(RationalChain::new(type_labels(r), rows)?)
}

/// Lumped chain of the type-`s` shuffle.
///
/// A shuffle with chosen positions `R` sends `X` to a set meeting the top
/// block in `|X ∩ R|` cards. Splitting `R` into `r−s` top and `s` bottom
/// positions, `i = |X ∩ R_top|` and `j = |X ∩ R_bottom|` are independent
/// hypergeometric counts, so
/// `p(x, z) = Σ_{i+j=z} C(x,i)·C(r−x, r−s−i)·C(r−x, j)·C(n−2r+x, s−j) / |D_s|`.
pub fn type_s_matrix(n: usize, r: usize, s: usize) -> Result<RationalChain, ShuffleError> {
    let params = ShuffleParams::typed(n, r, s)?;
    let denom = Rational::from_integer(params.count().into());
    let rows = (0..=r)
        .map(|x| {
            (0..=r)
                .map(|z| {
                    let mut acc = Rational::zero();
                    for i in 0..=z {
                        let j = z - i;
                        let term = c(x, i)
                            * c_signed(r - x, (r - s) as i64 - i as i64)
                            * c(r - x, j)
                            * c_signed(n - 2 * r + x, s as i64 - j as i64);
                        acc += term;
                    }
                    acc / &denom
                })
                .collect()
        })
        .collect();
    Ok(RationalChain::new(type_labels(r), rows)?)
}

/// A nonnegative weight on intervals `[lo, hi]` of the chain `0 < 1 < … < r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalWeight {
    r: usize,
    values: BTreeMap<(usize, usize), Rational>,
}

impl IntervalWeight {
    pub fn new(
        r: usize,
        values: impl IntoIterator<Item = ((usize, usize), Rational)>,
    ) -> Result<Self, ShuffleError> {
        let mut map = BTreeMap::new();
        for ((lo, hi), v) in values {
            if lo > hi || hi > r {
                return Err(ShuffleError::BadInterval { lo, hi, r });
            }
            if v.is_negative() {
                return Err(ShuffleError::NegativeWeight { lo, hi });
            }
            if !v.is_zero() {
                map.insert((lo, hi), v);
            }
        }
        Ok(IntervalWeight { r, values: map })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `γ_[lo, hi]`, zero if unset.
    pub fn get(&self, lo: usize, hi: usize) -> Rational {
        self.values.get(&(lo, hi)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Multiplies every interval with lower end `x` by `f(x)`.
    pub fn scale_lower(&self, f: impl Fn(usize) -> Rational) -> Result<Self, ShuffleError> {
        IntervalWeight::new(
            self.r,
            self.values.iter().map(|(&(lo, hi), v)| ((lo, hi), v * f(lo))),
        )
    }

    /// Multiplies every interval with upper end `x` by `f(x)`.
    pub fn scale_upper(&self, f: impl Fn(usize) -> Rational) -> Result<Self, ShuffleError> {
        IntervalWeight::new(
            self.r,
            self.values.iter().map(|(&(lo, hi), v)| ((lo, hi), v * f(hi))),
        )
    }

    /// `N(γ)_x = Σ_{y ≥ x} γ_[x, y]`, the up-step normaliser.
    pub fn up_total(&self, x: usize) -> Rational {
        (x..=self.r).map(|y| self.get(x, y)).sum()
    }

    /// `Σ_{y ≤ x} γ_[y, x]`, the down-step normaliser.
    pub fn down_total(&self, x: usize) -> Rational {
        (0..=x).map(|y| self.get(y, x)).sum()
    }
}

/// `ε̄^(a,b)_[x,y] = C(a, r−y)·C(b, y−x)`.
pub fn epsilon_bar(a: usize, b: usize, r: usize) -> Result<IntervalWeight, ShuffleError> {
    if a < r {
        return Err(ShuffleError::WeightParameter { a, r });
    }
    let values = (0..=r).flat_map(|x| (x..=r).map(move |y| ((x, y), c(a, r - y) * c(b, y - x))));
    IntervalWeight::new(r, values)
}

/// `ε^(a,b)_[y,x] = C(a, y)·C(b, x−y)`, the reflection of `ε̄` under
/// `x ↦ r − x`.
pub fn epsilon(a: usize, b: usize, r: usize) -> Result<IntervalWeight, ShuffleError> {
    if a < r {
        return Err(ShuffleError::WeightParameter { a, r });
    }
    let values = (0..=r).flat_map(|x| (0..=x).map(move |y| ((y, x), c(a, y) * c(b, x - y))));
    IntervalWeight::new(r, values)
}

/// Up-step involutory walk: from `x` pick `y ≥ x` with probability
/// `γ_[x,y]/N(γ)_x`, then jump to `r − y`.
pub fn involutory_walk(gamma: &IntervalWeight) -> Result<RationalChain, ShuffleError> {
    let r = gamma.r;
    let mut rows = linalg::zeros(r + 1, r + 1);
    for (x, row) in rows.iter_mut().enumerate() {
        let total = gamma.up_total(x);
        if total.is_zero() {
            return Err(ShuffleError::EmptyRow { x });
        }
        for y in x..=r {
            row[r - y] = gamma.get(x, y) / &total;
        }
    }
    Ok(RationalChain::new(type_labels(r), rows)?)
}

/// Down-step involutory walk: from `x` pick `y ≤ x` with probability
/// `γ_[y,x]/Σ_{y'≤x} γ_[y',x]`, then jump to `r − y`.
pub fn involutory_walk_down(gamma: &IntervalWeight) -> Result<RationalChain, ShuffleError> {
    let r = gamma.r;
    let mut rows = linalg::zeros(r + 1, r + 1);
    for (x, row) in rows.iter_mut().enumerate() {
        let total = gamma.down_total(x);
        if total.is_zero() {
            return Err(ShuffleError::EmptyRow { x });
        }
        for y in 0..=x {
            row[r - y] = gamma.get(y, x) / &total;
        }
    }
    Ok(RationalChain::new(type_labels(r), rows)?)
}

/// Closed-form spectrum and stationary law of `skewed_matrix(n, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumPrediction {
    /// `λ_x = (−1)^{r−x} C(r, x) / C(n−r, r−x)` for `x = 0..r`.
    pub eigenvalues: Vec<Rational>,
    /// `π_x = C(r, x)·C(n−r, r−x) / C(n, r)` for `x = 0..r`.
    pub stationary: Distribution,
    /// `C(n, r)`.
    pub normalizer: Rational,
}

impl SpectrumPrediction {
    /// Eigenvalues listed from `x = r` down to `0`; starts with 1.
    pub fn eigenvalues_descending(&self) -> Vec<Rational> {
        self.eigenvalues.iter().rev().cloned().collect()
    }

    /// Largest `|λ|` over `λ ≠ 1`, with its sign.
    pub fn second_largest(&self) -> Option<Rational> {
        self.eigenvalues
            .iter()
            .filter(|l| !l.is_one())
            .max_by(|a, b| a.abs().cmp(&b.abs()))
            .cloned()
    }
}

pub fn predicted_spectrum(n: usize, r: usize) -> Result<SpectrumPrediction, ShuffleError> {
    ShuffleParams::skewed(n, r)?;
    let eigenvalues = (0..=r)
        .map(|x| {
            let v = c(r, x) / c(n - r, r - x);
            if (r - x) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let normalizer = c(n, r);
    let stationary = Distribution::new(
        (0..=r)
            .map(|x| c(r, x) * c(n - r, r - x) / &normalizer)
            .collect(),
    )?;
    Ok(SpectrumPrediction {
        eigenvalues,
        stationary,
        normalizer,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntidiagonalReport {
    pub holds: bool,
    /// `(−1)^{r−j} A_{j, r−j}` for `j = 0..r`.
    pub eigenvalues: Vec<Rational>,
    pub zero_pattern: bool,
    pub certified: bool,
    /// The listed eigenvalues account for the whole characteristic
    /// polynomial, with multiplicity.
    pub complete: bool,
}

/// Checks `A_ij = 0` for `i + j > r`, then certifies each anti-diagonal
/// reading `(−1)^{r−j} A_{j, r−j}` as an exact eigenvalue.
///
/// With ascending indices the sign is `(−1)^{r−j}`: for `r = 1` a
/// stochastic `[[a, b], [1, 0]]` has eigenvalues `1` and `−b = −A_{0,1}`.
/// This agrees with `(−1)^j` when `r` is even.
pub fn check_antidiagonal_property(chain: &RationalChain) -> AntidiagonalReport {
    let dim = chain.dim();
    let r = dim.saturating_sub(1);
    let zero_pattern = (0..dim).all(|i| (0..dim).all(|j| i + j <= r || chain.entry(i, j).is_zero()));
    let eigenvalues: Vec<Rational> = (0..dim)
        .map(|j| {
            let a = chain.entry(j, r - j).clone();
            if (r - j) % 2 == 1 {
                -a
            } else {
                a
            }
        })
        .collect();
    let certified = eigenvalues.iter().all(|l| verify_eigenvalue(chain, l));
    let complete = crate::chain::is_complete_spectrum(chain, &eigenvalues).unwrap_or(false);
    AntidiagonalReport {
        holds: zero_pattern && certified && complete,
        eigenvalues,
        zero_pattern,
        certified,
        complete,
    }
}

/// `Σ_s w(s)·Q_s / Σ_s w(s)` over the type-`s` chains.
pub fn mixture_matrix(
    n: usize,
    r: usize,
    weights: &BTreeMap<usize, Rational>,
) -> Result<RationalChain, ShuffleError> {
    ShuffleParams::skewed(n, r)?;
    if weights.values().any(Signed::is_negative) {
        return Err(ShuffleError::BadMixture);
    }
    if let Some(&s) = weights.keys().find(|&&s| s > r) {
        return Err(ShuffleError::TypeOutOfRange { s, r });
    }
    let total: Rational = weights.values().sum();
    if total.is_zero() {
        return Err(ShuffleError::BadMixture);
    }
    let mut acc = linalg::zeros(r + 1, r + 1);
    for (&s, w) in weights {
        if w.is_zero() {
            continue;
        }
        let q = type_s_matrix(n, r, s)?;
        acc = linalg::add(&acc, &linalg::scale(q.matrix(), &(w / &total)));
    }
    Ok(RationalChain::new(type_labels(r), acc)?)
}

/// Weights `s ↦ C(r, s)`, which mix the type-`s` shuffles into the plain
/// r-random-to-top shuffle.
pub fn binomial_mixture_weights(r: usize) -> BTreeMap<usize, Rational> {
    (0..=r).map(|s| (s, c(r, s))).collect()
}

/// The common eigenbasis of `Q_0, …, Q_r` and each `Q_s`'s eigenvalues on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultaneousSpectra {
    /// Row eigenvectors of `Q_r`, ordered by `x = r, r−1, …, 0`.
    pub basis: Vec<Vec<Rational>>,
    /// `eigenvalues[s][k]`: eigenvalue of `Q_s` on `basis[k]`.
    pub eigenvalues: Vec<Vec<Rational>>,
}

/// Row eigenvectors `v Q = λ v` for a simple eigenvalue `λ`.
fn row_eigenvector(q: &Matrix, lambda: &Rational) -> Option<Vec<Rational>> {
    let ns = linalg::null_space(&linalg::transpose(&linalg::shift(q, lambda)));
    (ns.len() == 1).then(|| ns.into_iter().next().expect("one vector"))
}

pub fn simultaneous_spectra(n: usize, r: usize) -> Result<SimultaneousSpectra, ShuffleError> {
    let prediction = predicted_spectrum(n, r)?;
    let chains = (0..=r)
        .map(|s| type_s_matrix(n, r, s))
        .collect::<Result<Vec<_>, _>>()?;
    for s in 0..=r {
        for t in s + 1..=r {
            if !chains[s].commutes_with(&chains[t]) {
                return Err(ShuffleError::NotCommuting { s, t });
            }
        }
    }
    let qr = chains[r].matrix();
    let basis = prediction
        .eigenvalues_descending()
        .iter()
        .enumerate()
        .map(|(index, l)| {
            row_eigenvector(qr, l).ok_or(ShuffleError::NotSimultaneous { s: r, index })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let eigenvalues = chains
        .iter()
        .enumerate()
        .map(|(s, q)| {
            basis
                .iter()
                .enumerate()
                .map(|(index, v)| {
                    let image = linalg::vec_mul(v, q.matrix());
                    let pivot = v.iter().position(|e| !e.is_zero()).expect("nonzero eigenvector");
                    let mu = &image[pivot] / &v[pivot];
                    let expected: Vec<Rational> = v.iter().map(|e| e * &mu).collect();
                    if image == expected {
                        Ok(mu)
                    } else {
                        Err(ShuffleError::NotSimultaneous { s, index })
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SimultaneousSpectra { basis, eigenvalues })
}

/// A permutation of type `x`: swaps `1..r−x` with the first cards below
/// the top block.
pub fn type_representative(n: usize, r: usize, x: usize) -> Result<Permutation, ShuffleError> {
    ShuffleParams::skewed(n, r)?;
    if x > r {
        return Err(ShuffleError::TypeOutOfRange { s: x, r });
    }
    let mut images: Vec<usize> = (1..=n).collect();
    for i in 0..r - x {
        images.swap(i, r + i);
    }
    Ok(Permutation::from_images(&images)?)
}

/// Reorders an ascending-index matrix into the layout with `(0, 0)` at the
/// bottom-right.
pub fn to_bottom_right(m: &Matrix) -> Matrix {
    m.iter()
        .rev()
        .map(|row| row.iter().rev().cloned().collect())
        .collect()
}

/// Inverse of [`to_bottom_right`] (the map is an involution).
pub fn from_bottom_right(m: &Matrix) -> Matrix {
    to_bottom_right(m)
}

/// LaTeX `matrix` body in the bottom-right layout, zeros shown as `\cdot`.
pub fn latex_bottom_right(m: &Matrix) -> String {
    let mut out = String::from("\\left( \\begin{matrix}\n");
    let rows = to_bottom_right(m);
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|q| {
                if q.is_zero() {
                    "\\cdot".to_string()
                } else if q.is_integer() {
                    format_rational(q)
                } else {
                    let sign = if q.is_negative() { "-" } else { "" };
                    format!("{sign}\\frac{{{}}}{{{}}}", q.numer().abs(), q.denom())
                }
            })
            .collect();
        out.push_str("  ");
        out.push_str(&cells.join(" & "));
        if i + 1 < rows.len() {
            out.push_str(" \\\\");
        }
        out.push('\n');
    }
    out.push_str("\\end{matrix} \\right)");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::stationary;
    use crate::cosets::{r_subsets, type_of};
    use crate::exact::{frac, int};
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        crate::exact::parse_rational(s).unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    /// Counts `|Xd ∩ {1..r}|` over `d ∈ D_s` for one `X` of each type.
    fn subset_oracle(n: usize, r: usize, s: usize) -> Matrix {
        let d = shuffle_set(&ShuffleParams::typed(n, r, s).unwrap()).unwrap();
        let total = Rational::from_integer(d.len().into());
        let mut m = linalg::zeros(r + 1, r + 1);
        for (x, row) in m.iter_mut().enumerate() {
            let set: Vec<usize> = (1..=x).chain(r + 1..=2 * r - x).collect();
            for g in &d {
                let z = g.image_of_set(&set).iter().filter(|&&a| a <= r).count();
                row[z] += Rational::one() / &total;
            }
        }
        m
    }

    #[test]
    fn shuffle_counts() {
        let d = shuffle_set(&ShuffleParams::skewed(10, 4).unwrap()).unwrap();
        assert_eq!(d.len(), 15);
        let mut sorted = d.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 15);
        assert_eq!(shuffle_set(&ShuffleParams::typed(10, 4, 1).unwrap()).unwrap().len(), 24);
        let d0 = shuffle_set(&ShuffleParams::typed(10, 4, 0).unwrap()).unwrap();
        assert_eq!(d0, vec![Permutation::identity(10)]);
        assert!(d.iter().all(|g| type_of(g, 4).unwrap() == 0));
    }

    #[test]
    fn shuffle_moves_cards_to_top() {
        // chosen positions 6 and 8 of 5..8 come to the top in order
        let g = shuffle_from_positions(8, &[8, 6]).unwrap();
        assert_eq!(g.one_based(), vec![3, 4, 5, 6, 7, 1, 8, 2]);
        assert!(matches!(
            shuffle_by_index(&ShuffleParams::skewed(5, 2).unwrap(), 3),
            Err(ShuffleError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(ShuffleParams::skewed(8, 4), Err(ShuffleError::DeckTooSmall { .. })));
        assert!(matches!(ShuffleParams::skewed(7, 4), Err(ShuffleError::DeckTooSmall { .. })));
        assert!(matches!(ShuffleParams::typed(10, 4, 5), Err(ShuffleError::TypeOutOfRange { .. })));
        assert!(skewed_matrix(6, 3).is_err());
        assert!(matches!(epsilon_bar(3, 2, 4), Err(ShuffleError::WeightParameter { .. })));
    }

    #[test]
    fn example_34_matrix() {
        let m = skewed_matrix(10, 4).unwrap();
        assert_eq!(m.entry(0, 4), &frac(1, 15));
        assert_eq!(m.entry(0, 3), &frac(8, 15));
        assert_eq!(m.entry(0, 2), &frac(2, 5));
        assert_eq!(m.entry(4, 0), &int(1));
        assert_eq!(m.entry(2, 2), &frac(2, 5));
        assert_eq!(m.entry(2, 1), &frac(8, 15));
        assert_eq!(m.entry(2, 0), &frac(1, 15));
        for x in 0..=4 {
            for z in 0..=4 {
                let forced = z > 4 - x || 4 - z > 2 + x;
                assert_eq!(m.entry(x, z).is_zero(), forced, "({x},{z})");
            }
        }
        let row_sums = skewed_matrix(12, 3).unwrap();
        assert_eq!(row_sums.dim(), 4);
    }

    #[test]
    fn type_s_examples() {
        let q1 = type_s_matrix(10, 4, 1).unwrap();
        assert_eq!(q1.matrix()[1], qs(&["1/8", "1/2", "3/8", "0", "0"]));
        assert_eq!(type_s_matrix(10, 4, 2).unwrap().entry(2, 2), &frac(13, 30));
        assert_eq!(type_s_matrix(10, 4, 4).unwrap(), skewed_matrix(10, 4).unwrap());
        assert_eq!(type_s_matrix(10, 4, 0).unwrap().matrix(), &linalg::identity(5));
    }

    #[test]
    fn type_s_matches_subset_oracle() {
        for (n, r) in [(5, 2), (7, 3), (9, 4)] {
            for s in 0..=r {
                assert_eq!(type_s_matrix(n, r, s).unwrap().matrix(), &subset_oracle(n, r, s), "{n} {r} {s}");
            }
        }
    }

    #[test]
    fn type_representatives_have_their_type() {
        for x in 0..=4 {
            assert_eq!(type_of(&type_representative(10, 4, x).unwrap(), 4).unwrap(), x);
        }
    }

    #[test]
    fn involutory_identity() {
        for n in 3..=14 {
            for r in 1..=6 {
                if n > 2 * r {
                    let walk = involutory_walk(&epsilon_bar(r, n - 2 * r, r).unwrap()).unwrap();
                    assert_eq!(walk, skewed_matrix(n, r).unwrap(), "n={n} r={r}");
                }
            }
        }
    }

    #[test]
    fn epsilon_values() {
        let e = epsilon_bar(4, 2, 4).unwrap();
        assert_eq!(e.get(0, 2), int(6));
        for x in 0..=4 {
            assert_eq!(e.get(x, x), c(4, 4 - x));
        }
        assert_eq!(e.get(0, 3), int(0));
    }

    #[test]
    fn down_step_b1_family() {
        let (a, r) = (5, 3);
        let walk = involutory_walk_down(&epsilon(a, 1, r).unwrap()).unwrap();
        for x in 0..=r {
            assert_eq!(walk.entry(x, r - x), &frac((a - x + 1) as i64, (a + 1) as i64));
            if x > 0 {
                assert_eq!(walk.entry(x, r - (x - 1)), &frac(x as i64, (a + 1) as i64));
            }
        }
    }

    #[test]
    fn reflection_relates_up_and_down_walks() {
        let (a, b, r) = (4, 3, 4);
        let up = involutory_walk(&epsilon_bar(a, b, r).unwrap()).unwrap();
        let down = involutory_walk_down(&epsilon(a, b, r).unwrap()).unwrap();
        assert_eq!(up.matrix(), &to_bottom_right(down.matrix()));
    }

    #[test]
    fn empty_row_is_rejected() {
        let g = IntervalWeight::new(2, [((0, 1), int(1)), ((2, 2), int(1))]).unwrap();
        assert_eq!(involutory_walk(&g), Err(ShuffleError::EmptyRow { x: 1 }));
        assert!(matches!(
            IntervalWeight::new(2, [((2, 1), int(1))]),
            Err(ShuffleError::BadInterval { .. })
        ));
    }

    #[test]
    fn example_34_spectrum() {
        let p = predicted_spectrum(10, 4).unwrap();
        assert_eq!(p.eigenvalues_descending(), qs(&["1", "-2/3", "2/5", "-1/5", "1/15"]));
        let descending: Vec<Rational> = p.stationary.probabilities().iter().rev().cloned().collect();
        assert_eq!(descending, qs(&["1/210", "24/210", "90/210", "80/210", "15/210"]));
        assert_eq!(p.second_largest(), Some(frac(-2, 3)));
        assert_eq!(p.normalizer, int(210));
    }

    #[test]
    fn antidiagonal_examples() {
        let rep = check_antidiagonal_property(&skewed_matrix(10, 4).unwrap());
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.eigenvalues, predicted_spectrum(10, 4).unwrap().eigenvalues);
        let rep = check_antidiagonal_property(&skewed_matrix(8, 3).unwrap());
        assert!(rep.holds);
        assert_eq!(rep.eigenvalues, qs(&["-1/10", "3/10", "-3/5", "1"]));
        let id = RationalChain::from_matrix(linalg::identity(2)).unwrap();
        assert!(!check_antidiagonal_property(&id).zero_pattern);
    }

    #[test]
    fn stationary_matches_prediction() {
        for n in 3..=14 {
            for r in 1..=6 {
                if n > 2 * r {
                    let pi = stationary(&skewed_matrix(n, r).unwrap()).unwrap();
                    assert_eq!(pi, predicted_spectrum(n, r).unwrap().stationary);
                }
            }
        }
    }

    #[test]
    fn commutation_and_simultaneous_spectra() {
        let sp = simultaneous_spectra(10, 4).unwrap();
        assert_eq!(sp.eigenvalues[0], qs(&["1", "1", "1", "1", "1"]));
        assert_eq!(sp.eigenvalues[1], qs(&["1", "7/12", "1/4", "0", "-1/6"]));
        assert_eq!(sp.eigenvalues[2], qs(&["1", "1/6", "-1/10", "-1/15", "1/15"]));
        assert_eq!(sp.eigenvalues[3], qs(&["1", "-1/4", "-1/20", "1/10", "-1/20"]));
        assert_eq!(sp.eigenvalues[4], qs(&["1", "-2/3", "2/5", "-1/5", "1/15"]));
        assert!(simultaneous_spectra(9, 3).is_ok());
    }

    #[test]
    fn binomial_mixture() {
        let w = binomial_mixture_weights(4);
        let mix = mixture_matrix(10, 4, &w).unwrap();
        let expected = qs(&["1", "1/6", "1/10", "1/20", "3/80"]);
        for l in &expected {
            assert!(verify_eigenvalue(&mix, l));
        }
        assert!(crate::chain::is_complete_spectrum(&mix, &expected).unwrap());
        // additivity in the common basis
        let sp = simultaneous_spectra(10, 4).unwrap();
        let total: Rational = w.values().sum();
        let summed: Vec<Rational> = (0..5)
            .map(|k| w.iter().map(|(s, ws)| ws * &sp.eigenvalues[*s][k]).sum::<Rational>() / &total)
            .collect();
        assert_eq!(summed, expected);
    }

    #[test]
    fn mixture_edge_cases() {
        let single: BTreeMap<usize, Rational> = [(4, int(3))].into();
        assert_eq!(mixture_matrix(10, 4, &single).unwrap(), skewed_matrix(10, 4).unwrap());
        let zero: BTreeMap<usize, Rational> = [(1, int(0))].into();
        assert_eq!(mixture_matrix(10, 4, &zero), Err(ShuffleError::BadMixture));
    }

    #[test]
    fn latex_layout() {
        let tex = latex_bottom_right(skewed_matrix(10, 4).unwrap().matrix());
        let first = tex.lines().nth(1).unwrap();
        assert_eq!(first.trim(), "\\cdot & \\cdot & \\cdot & \\cdot & 1 \\\\");
        assert!(tex.contains("\\frac{1}{15} & \\frac{8}{15} & \\frac{2}{5}"));
    }

    proptest! {
        #[test]
        fn scaling_by_source_function_is_invisible(
            n in 3usize..=12,
            r in 1usize..=5,
            f in proptest::collection::vec(1i64..50, 6),
        ) {
            prop_assume!(n > 2 * r);
            let e = epsilon_bar(r, n - 2 * r, r).unwrap();
            let scaled = e.scale_lower(|x| int(f[x])).unwrap();
            prop_assert_eq!(involutory_walk(&scaled).unwrap(), involutory_walk(&e).unwrap());
        }

        #[test]
        fn zero_pattern(n in 3usize..=14, r in 1usize..=6) {
            prop_assume!(n > 2 * r);
            let m = skewed_matrix(n, r).unwrap();
            for x in 0..=r {
                for z in 0..=r {
                    // beyond the anti-diagonal is always zero; inside it the
                    // second binomial can still vanish when n − 2r < r
                    let forced = z > r - x || r - z > n - 2 * r + x;
                    prop_assert_eq!(m.entry(x, z).is_zero(), forced);
                }
            }
        }

        #[test]
        fn unranking_is_a_bijection(m in 1usize..9, k in 0usize..5) {
            prop_assume!(k <= m);
            let count = binomial(m as i64, k as i64);
            let count = u64::try_from(count).unwrap();
            let all: Vec<Vec<usize>> = (0..count).map(|i| unrank_combination(m, k, i)).collect();
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(&sorted, &all);
            if k > 0 {
                let expected: Vec<Vec<usize>> = r_subsets(m, k)
                    .into_iter()
                    .map(|s| s.into_iter().map(|a| a - 1).collect())
                    .collect();
                prop_assert_eq!(all, expected);
            }
        }
    }
}
