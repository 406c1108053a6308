//! Weight functions on permutation groups and the double coset lumping
//! criteria for the random walks they drive.
//!
//! A weight `w: G → ℚ≥0` with `w(G) > 0` drives the walk that steps from
//! `x` to `xg` with probability `w(g)/w(G)`. The walk lumps on `H\G/K`
//! exactly when `w(kxHyK) = w(xHyK)` for all `x, y ∈ G` and `k ∈ K`; in that
//! case the step `HxK → HyK` has probability `w(x⁻¹HyK)/w(G)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::chain::{ChainError, RationalChain};
use crate::cosets::{double_cosets, CosetError, DoubleCosetDecomposition, SubgroupSpec};
use crate::exact::{format_rational, Rational};
use crate::perm::{GroupElements, GroupSpec, PermError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("weight function must have positive total weight")]
    ZeroTotal,
    #[error("negative weight {value} on {element}")]
    Negative { element: String, value: String },
    #[error("{element} is listed twice")]
    Duplicate { element: String },
    #[error("weight is supported on {element}, which is not in the group")]
    OutsideGroup { element: String },
    #[error("conjugacy class of {element} has no assigned value")]
    UncoveredClass { element: String },
    #[error("{first} and {second} are conjugate but both carry a value")]
    ConflictingClass { first: String, second: String },
    #[error("the walk does not lump: {0}")]
    NotLumpable(Witness),
    #[error("action error: {0}")]
    Action(String),
    #[error("action is not transitive: {point} is not in the orbit of the base point")]
    Intransitive { point: String },
}

/// A nonnegative rational weight on a permutation group, stored by its
/// support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    degree: usize,
    support: BTreeMap<Permutation, Rational>,
    total: Rational,
}

impl WeightFunction {
    /// Zero entries are dropped; negative entries and duplicates are
    /// rejected, as is a zero total.
    pub fn new(
        degree: usize,
        entries: impl IntoIterator<Item = (Permutation, Rational)>,
    ) -> Result<Self, WeightError> {
        let mut support = BTreeMap::new();
        let mut total = Rational::zero();
        for (g, v) in entries {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                }
                .into());
            }
            if v.is_negative() {
                return Err(WeightError::Negative {
                    element: g.to_string(),
                    value: format_rational(&v),
                });
            }
            if support.contains_key(&g) {
                return Err(WeightError::Duplicate {
                    element: g.to_string(),
                });
            }
            if v.is_zero() {
                continue;
            }
            total += &v;
            support.insert(g, v);
        }
        if total.is_zero() {
            return Err(WeightError::ZeroTotal);
        }
        Ok(WeightFunction {
            degree,
            support,
            total,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `w(G)`.
    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn value(&self, g: &Permutation) -> Rational {
        self.support.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Q(g) = w(g)/w(G)`.
    pub fn probability(&self, g: &Permutation) -> Rational {
        self.value(g) / &self.total
    }

    pub fn support(&self) -> impl Iterator<Item = (&Permutation, &Rational)> {
        self.support.iter()
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    /// `c · w` for `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Result<Self, WeightError> {
        WeightFunction::new(
            self.degree,
            self.support.iter().map(|(g, v)| (g.clone(), v * c)),
        )
    }

    fn check_supported_on(&self, group: &GroupElements) -> Result<(), WeightError> {
        if self.degree != group.degree() {
            return Err(PermError::DegreeMismatch {
                left: group.degree(),
                right: self.degree,
            }
            .into());
        }
        match self.support.keys().find(|g| !group.contains(g)) {
            Some(g) => Err(WeightError::OutsideGroup {
                element: g.to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// Indicator weight of `set`: `w(g) = 1` on the set, 0 elsewhere.
pub fn weight_uniform_on_set(set: &[Permutation]) -> Result<WeightFunction, WeightError> {
    let Some(first) = set.first() else {
        return Err(WeightError::ZeroTotal);
    };
    WeightFunction::new(
        first.degree(),
        set.iter().map(|g| (g.clone(), Rational::from_integer(1.into()))),
    )
}

/// Conjugacy class index of each element of `group` (aligned with
/// `group.elements()`), by union-find under conjugation by generators.
pub fn conjugacy_classes(group: &GroupElements, generators: &[Permutation]) -> Vec<usize> {
    let n = group.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for (i, g) in group.iter().enumerate() {
        for s in generators {
            let c = s.inverse().then(g).then(s);
            let j = group.index_of(&c).expect("conjugate lies in the group");
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut out = vec![0; n];
    let mut next = 0;
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[i] = label[r];
    }
    out
}

/// A weight that is constant on conjugacy classes of `G`, given one value
/// per class through any representative.
pub fn weight_class_function(
    group_spec: &GroupSpec,
    group: &GroupElements,
    class_values: &[(Permutation, Rational)],
) -> Result<WeightFunction, WeightError> {
    let classes = conjugacy_classes(group, group_spec.generators());
    let count = classes.iter().max().map_or(0, |m| m + 1);
    let mut value: Vec<Option<(Rational, &Permutation)>> = vec![None; count];
    for (rep, v) in class_values {
        let idx = group.index_of(rep).ok_or_else(|| WeightError::OutsideGroup {
            element: rep.to_string(),
        })?;
        if v.is_negative() {
            return Err(WeightError::Negative {
                element: rep.to_string(),
                value: format_rational(v),
            });
        }
        let c = classes[idx];
        if let Some((_, prev)) = &value[c] {
            return Err(WeightError::ConflictingClass {
                first: prev.to_string(),
                second: rep.to_string(),
            });
        }
        value[c] = Some((v.clone(), rep));
    }
    if let Some(c) = value.iter().position(Option::is_none) {
        let i = classes.iter().position(|&k| k == c).expect("class is nonempty");
        return Err(WeightError::UncoveredClass {
            element: group.elements()[i].to_string(),
        });
    }
    WeightFunction::new(
        group.degree(),
        group
            .iter()
            .zip(&classes)
            .map(|(g, &c)| (g.clone(), value[c].as_ref().expect("covered").0.clone())),
    )
}

/// `w(S) = Σ_{s∈S} w(s)`.
pub fn weight_of_set(w: &WeightFunction, set: &[Permutation]) -> Rational {
    set.iter()
        .filter_map(|g| w.support.get(g))
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// Evidence that a lumping condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `w(k·x·HyK) ≠ w(x·HyK)`.
    TwoSided {
        k: Permutation,
        x: Permutation,
        y: Permutation,
        lhs: Rational,
        rhs: Rational,
    },
    /// `HxH = HyH` but `w(xH) ≠ w(yH)`.
    LeftCoset {
        x: Permutation,
        y: Permutation,
        lhs: Rational,
        rhs: Rational,
    },
    /// `β` and `γ` share an `H`-orbit but step to the base point with
    /// different probabilities.
    Orbit {
        beta: Vec<usize>,
        gamma: Vec<usize>,
        lhs: Rational,
        rhs: Rational,
    },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::TwoSided { k, x, y, lhs, rhs } => write!(
                f,
                "w(kxHyK) = {} but w(xHyK) = {} for k = {k}, x = {x}, y = {y}",
                format_rational(lhs),
                format_rational(rhs)
            ),
            Witness::LeftCoset { x, y, lhs, rhs } => write!(
                f,
                "w(xH) = {} but w(yH) = {} for x = {x}, y = {y} in the same double coset",
                format_rational(lhs),
                format_rational(rhs)
            ),
            Witness::Orbit {
                beta,
                gamma,
                lhs,
                rhs,
            } => write!(
                f,
                "p({beta:?} → α) = {} but p({gamma:?} → α) = {} in the same H-orbit",
                format_rational(lhs),
                format_rational(rhs)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumpingVerdict {
    pub lumps: bool,
    pub witness: Option<Witness>,
}

impl LumpingVerdict {
    fn pass() -> Self {
        LumpingVerdict {
            lumps: true,
            witness: None,
        }
    }

    fn fail(w: Witness) -> Self {
        LumpingVerdict {
            lumps: false,
            witness: Some(w),
        }
    }
}

/// Which elements `k ∈ K` the two-sided condition is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KRange {
    /// Generators of `K` only. Sufficient: if `w(kxHyK) = w(xHyK)` for every
    /// `x` and each generator `k`, then applying it to `x' = k₂x` gives the
    /// condition for `k₁k₂`, and so on for every word.
    #[default]
    Generators,
    /// Every element of `K`.
    AllElements,
}

/// Profiles `c ↦ w(x·D_c)` over double cosets `D_c`, one per `x ∈ G`,
/// held as integers scaled by `scale` so that summing avoids gcds.
struct Profiles {
    rows: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl Profiles {
    /// `w(x·D) = Σ_{g∈supp w} [x⁻¹g ∈ D] w(g)`: one pass over the support
    /// per `x`.
    fn new(group: &GroupElements, decomposition: &DoubleCosetDecomposition, w: &WeightFunction) -> Self {
        let scale = w
            .support()
            .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let support: Vec<(&Permutation, BigInt)> = w
            .support()
            .map(|(g, v)| (g, v.numer() * (&scale / v.denom())))
            .collect();
        let classes = decomposition.count();
        let rows = group
            .elements()
            .par_iter()
            .map(|x| {
                let xinv = x.inverse();
                let mut profile = vec![BigInt::zero(); classes];
                for (g, v) in &support {
                    let idx = group.index_of(&xinv.then(g)).expect("support lies in G");
                    profile[decomposition.class_of_index(idx)] += v;
                }
                profile
            })
            .collect();
        Profiles { rows, scale }
    }

    fn value(&self, i: usize, c: usize) -> Rational {
        Rational::new(self.rows[i][c].clone(), self.scale.clone())
    }
}

/// Decides whether the walk driven by `w` lumps on `H\G/K`, quantifying
/// `k` over the generators of `K`.
pub fn check_lumping_hk(
    group: &GroupElements,
    h: &SubgroupSpec,
    k: &SubgroupSpec,
    w: &WeightFunction,
) -> Result<LumpingVerdict, WeightError> {
    check_lumping_hk_with(group, h, k, w, KRange::Generators)
}

pub fn check_lumping_hk_with(
    group: &GroupElements,
    h: &SubgroupSpec,
    k: &SubgroupSpec,
    w: &WeightFunction,
    range: KRange,
) -> Result<LumpingVerdict, WeightError> {
    w.check_supported_on(group)?;
    let decomposition = double_cosets(group, h, k)?;
    let profiles = Profiles::new(group, &decomposition, w);
    let ks: &[Permutation] = match range {
        KRange::Generators => k.generators(),
        KRange::AllElements => k.elements().elements(),
    };
    for kk in ks {
        for (i, x) in group.iter().enumerate() {
            let j = group.index_of(&kk.then(x)).expect("K ≤ G");
            if let Some(c) = (0..decomposition.count()).find(|&c| profiles.rows[i][c] != profiles.rows[j][c]) {
                return Ok(LumpingVerdict::fail(Witness::TwoSided {
                    k: kk.clone(),
                    x: x.clone(),
                    y: decomposition.representatives()[c].clone(),
                    lhs: profiles.value(j, c),
                    rhs: profiles.value(i, c),
                }));
            }
        }
    }
    Ok(LumpingVerdict::pass())
}

/// The `K = H` criterion: `w(xH)` is constant on left cosets inside each
/// double coset `HxH`.
pub fn check_lumping_hh(
    group: &GroupElements,
    h: &SubgroupSpec,
    w: &WeightFunction,
) -> Result<LumpingVerdict, WeightError> {
    w.check_supported_on(group)?;
    let decomposition = double_cosets(group, h, h)?;
    let support: Vec<(&Permutation, &Rational)> = w.support().collect();
    // w(xH) = Σ_{g ∈ supp} [x⁻¹g ∈ H] w(g)
    let coset_weight = |x: &Permutation| -> Rational {
        let xinv = x.inverse();
        support
            .iter()
            .filter(|(g, _)| h.elements().contains(&xinv.then(g)))
            .fold(Rational::zero(), |acc, (_, v)| acc + *v)
    };
    let mut first: Vec<Option<(Permutation, Rational)>> = vec![None; decomposition.count()];
    for (i, y) in group.iter().enumerate() {
        let c = decomposition.class_of_index(i);
        let wy = coset_weight(y);
        match &first[c] {
            None => first[c] = Some((y.clone(), wy)),
            Some((x, wx)) if *wx != wy => {
                return Ok(LumpingVerdict::fail(Witness::LeftCoset {
                    x: x.clone(),
                    y: y.clone(),
                    lhs: wx.clone(),
                    rhs: wy,
                }))
            }
            Some(_) => {}
        }
    }
    Ok(LumpingVerdict::pass())
}

/// `(g, w(g)/w(G))` over the support.
fn normalized_support(w: &WeightFunction) -> Vec<(&Permutation, Rational)> {
    w.support().map(|(g, v)| (g, v / w.total())).collect()
}

/// The lumped chain on `H\G/K`, states labelled by their least
/// representative in cycle notation. Row `HxK` has entries
/// `w(x⁻¹HyK)/w(G)`.
pub fn lumped_matrix(
    group: &GroupElements,
    h: &SubgroupSpec,
    k: &SubgroupSpec,
    w: &WeightFunction,
) -> Result<RationalChain, WeightError> {
    let verdict = check_lumping_hk(group, h, k, w)?;
    if let Some(witness) = verdict.witness {
        return Err(WeightError::NotLumpable(witness));
    }
    let decomposition = double_cosets(group, h, k)?;
    let support = normalized_support(w);
    let rows = decomposition
        .representatives()
        .iter()
        .map(|x| {
            let mut row = vec![Rational::zero(); decomposition.count()];
            for (g, p) in &support {
                // x → xg lands in the class of xg
                let idx = group.index_of(&x.then(g)).expect("support lies in G");
                row[decomposition.class_of_index(idx)] += p;
            }
            row
        })
        .collect();
    let labels = decomposition
        .representatives()
        .iter()
        .map(ToString::to_string)
        .collect();
    Ok(RationalChain::new(labels, rows)?)
}

/// The walk on `G` itself: `p(x, xg) = w(g)/w(G)`, states in the order of
/// `group.elements()`.
pub fn full_walk(group: &GroupElements, w: &WeightFunction) -> Result<RationalChain, WeightError> {
    w.check_supported_on(group)?;
    let n = group.order();
    let support = normalized_support(w);
    let rows = group
        .iter()
        .map(|x| {
            let mut row = vec![Rational::zero(); n];
            for (g, p) in &support {
                // distinct g give distinct xg, so each entry is set once
                let j = group.index_of(&x.then(g)).expect("support lies in G");
                row[j] = p.clone();
            }
            row
        })
        .collect();
    let labels = group.iter().map(ToString::to_string).collect();
    // each row is a rearrangement of w(g)/w(G) over the support
    Ok(RationalChain::new_unchecked(labels, rows))
}

/// How a permutation acts on a point of `Ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    /// Unordered sets of points (images are sorted).
    Set,
    /// Ordered tuples of points.
    Tuple,
}

/// A finite set `Ω` of point-sets or point-tuples, acted on by permutations
/// from the right.
#[derive(Debug, Clone)]
pub struct PointAction {
    degree: usize,
    kind: PointKind,
    points: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl PointAction {
    pub fn new(degree: usize, kind: PointKind, points: Vec<Vec<usize>>) -> Result<Self, WeightError> {
        let mut normalized = Vec::with_capacity(points.len());
        let mut index = HashMap::new();
        for mut p in points {
            if p.iter().any(|&a| a == 0 || a > degree) {
                return Err(WeightError::Action(format!("{p:?} has a point outside 1..{degree}")));
            }
            if kind == PointKind::Set {
                p.sort_unstable();
            }
            if index.insert(p.clone(), normalized.len()).is_some() {
                return Err(WeightError::Action(format!("{p:?} is listed twice")));
            }
            normalized.push(p);
        }
        if normalized.is_empty() {
            return Err(WeightError::Action("Ω is empty".into()));
        }
        Ok(PointAction {
            degree,
            kind,
            points: normalized,
            index,
        })
    }

    /// All `r`-subsets of `{1..n}` in lexicographic order.
    pub fn r_subsets(n: usize, r: usize) -> Result<Self, WeightError> {
        Self::new(n, PointKind::Set, crate::cosets::r_subsets(n, r))
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, point: &[usize]) -> Option<usize> {
        let mut p = point.to_vec();
        if self.kind == PointKind::Set {
            p.sort_unstable();
        }
        self.index.get(&p).copied()
    }

    /// Index of `ωg`, or an error if `Ω` is not closed under `g`.
    pub fn act(&self, point: usize, g: &Permutation) -> Result<usize, WeightError> {
        let mut img: Vec<usize> = self.points[point].iter().map(|&a| g.image(a)).collect();
        if self.kind == PointKind::Set {
            img.sort_unstable();
        }
        self.index.get(&img).copied().ok_or_else(|| {
            WeightError::Action(format!("{:?}{g} = {img:?} is not in Ω", self.points[point]))
        })
    }

    fn orbits(&self, generators: &[Permutation]) -> Result<Vec<usize>, WeightError> {
        let n = self.len();
        let mut orbit = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if orbit[s] != usize::MAX {
                continue;
            }
            orbit[s] = next;
            let mut stack = vec![s];
            while let Some(p) = stack.pop() {
                for g in generators {
                    let q = self.act(p, g)?;
                    if orbit[q] == usize::MAX {
                        orbit[q] = next;
                        stack.push(q);
                    }
                }
            }
            next += 1;
        }
        Ok(orbit)
    }
}

/// The walk on `Ω` induced by the map `x ↦ αx`: `p(β, γ) = Σ_{βg=γ} w(g)/w(G)`.
pub fn induced_orbit_chain(action: &PointAction, w: &WeightFunction) -> Result<RationalChain, WeightError> {
    let n = action.len();
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for (g, v) in w.support() {
        for (beta, row) in rows.iter_mut().enumerate() {
            row[action.act(beta, g)?] += v / w.total();
        }
    }
    let labels = action.points.iter().map(|p| format!("{p:?}")).collect();
    Ok(RationalChain::new(labels, rows)?)
}

/// Checks whether the walk on `Ω` lumps further onto the `H`-orbits, where
/// `H` fixes the base point `α = Ω[base]`: the probability of stepping from
/// `β` to `α` must be constant on each `H`-orbit.
///
/// `group_generators` must act transitively on `Ω`; `h_generators` must fix
/// `α`.
pub fn check_orbit_condition(
    action: &PointAction,
    group_generators: &[Permutation],
    base: usize,
    h_generators: &[Permutation],
    w: &WeightFunction,
) -> Result<LumpingVerdict, WeightError> {
    if base >= action.len() {
        return Err(WeightError::Action(format!("base index {base} out of range")));
    }
    if let Some(g) = group_generators
        .iter()
        .chain(h_generators)
        .find(|g| g.degree() != action.degree)
    {
        return Err(PermError::DegreeMismatch {
            left: action.degree,
            right: g.degree(),
        }
        .into());
    }
    let g_orbits = action.orbits(group_generators)?;
    if let Some(p) = g_orbits.iter().position(|&o| o != g_orbits[base]) {
        return Err(WeightError::Intransitive {
            point: format!("{:?}", action.points[p]),
        });
    }
    for h in h_generators {
        if action.act(base, h)? != base {
            return Err(WeightError::Action(format!(
                "{h} does not fix the base point {:?}",
                action.points[base]
            )));
        }
    }
    // p(β, α) accumulates w(d) at β = α d⁻¹.
    let mut to_base = vec![Rational::zero(); action.len()];
    for (d, v) in w.support() {
        let beta = action.act(base, &d.inverse())?;
        to_base[beta] += v / w.total();
    }
    let h_orbits = action.orbits(h_generators)?;
    let mut first: HashMap<usize, usize> = HashMap::new();
    for (beta, &o) in h_orbits.iter().enumerate() {
        match first.get(&o) {
            None => {
                first.insert(o, beta);
            }
            Some(&b0) if to_base[b0] != to_base[beta] => {
                return Ok(LumpingVerdict::fail(Witness::Orbit {
                    beta: action.points[b0].clone(),
                    gamma: action.points[beta].clone(),
                    lhs: to_base[b0].clone(),
                    rhs: to_base[beta].clone(),
                }));
            }
            Some(_) => {}
        }
    }
    Ok(LumpingVerdict::pass())
}
