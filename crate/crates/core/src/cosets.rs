//! Left cosets, double cosets `H\G/K`, transversals, and the type map for
//! the Young subgroup `Sym_r × Sym_{n-r}`.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::perm::{generate_group, GroupElements, GroupSpec, PermError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("subgroup {which} is not contained in the group (element {element} missing)")]
    NotASubgroup { which: &'static str, element: String },
    #[error("r = {r} is outside 0..={degree}")]
    TypeOutOfRange { r: usize, degree: usize },
    #[error("set is not a union of left cosets of H: {element} is in it but {missing} is not")]
    NotCosetUnion { element: String, missing: String },
}

/// A subgroup given by generators, together with its enumerated elements.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    generators: Vec<Permutation>,
    elements: GroupElements,
}

impl SubgroupSpec {
    pub fn generate(spec: &GroupSpec, cap: usize) -> Result<Self, PermError> {
        Ok(SubgroupSpec {
            generators: spec.generators().to_vec(),
            elements: generate_group(spec, cap)?,
        })
    }

    /// The whole group viewed as a subgroup of itself.
    pub fn from_group(spec: &GroupSpec, elements: GroupElements) -> Self {
        SubgroupSpec {
            generators: spec.generators().to_vec(),
            elements,
        }
    }

    pub fn trivial(degree: usize) -> Result<Self, PermError> {
        Self::generate(&GroupSpec::trivial(degree)?, 1)
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &GroupElements {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.order()
    }

    pub fn degree(&self) -> usize {
        self.elements.degree()
    }
}

/// Partition of `G` into the double cosets `HxK`.
///
/// Classes are numbered in increasing order of their representative, which
/// is the lexicographically least image array in the class.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleCosetDecomposition {
    #[serde(rename = "reps")]
    representatives: Vec<Permutation>,
    #[serde(skip)]
    class_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl DoubleCosetDecomposition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn representatives(&self) -> &[Permutation] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Class index of the element at position `index` in `G.elements()`.
    pub fn class_of_index(&self, index: usize) -> usize {
        self.class_of[index]
    }

    /// Class index per element, aligned with `G.elements()`.
    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn class_of(&self, group: &GroupElements, g: &Permutation) -> Option<usize> {
        group.index_of(g).map(|i| self.class_of[i])
    }

    /// Element indices of each class, in increasing order.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.count()];
        for (i, &c) in self.class_of.iter().enumerate() {
            parts[c].push(i);
        }
        parts
    }

    /// Members of class `class` as permutations.
    pub fn members(&self, group: &GroupElements, class: usize) -> Vec<Permutation> {
        self.class_of
            .iter()
            .zip(group.iter())
            .filter(|(&c, _)| c == class)
            .map(|(_, g)| g.clone())
            .collect()
    }
}

fn check_contained(
    group: &GroupElements,
    sub: &SubgroupSpec,
    which: &'static str,
) -> Result<(), CosetError> {
    if sub.degree() != group.degree() {
        return Err(PermError::DegreeMismatch {
            left: group.degree(),
            right: sub.degree(),
        }
        .into());
    }
    if let Some(g) = sub.elements().iter().find(|g| !group.contains(g)) {
        return Err(CosetError::NotASubgroup {
            which,
            element: g.to_string(),
        });
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as root so roots are least elements
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Decomposes `group` into double cosets `HxK`.
///
/// Works by union-find over the two-sided action of the generators of `H`
/// (on the left) and `K` (on the right), so the cost is linear in `|G|`
/// times the number of generators.
pub fn double_cosets(
    group: &GroupElements,
    h: &SubgroupSpec,
    k: &SubgroupSpec,
) -> Result<DoubleCosetDecomposition, CosetError> {
    check_contained(group, h, "H")?;
    check_contained(group, k, "K")?;
    let n = group.order();
    let mut uf = UnionFind::new(n);
    for (i, g) in group.iter().enumerate() {
        for s in h.generators() {
            let j = group.index_of(&s.then(g)).expect("H ≤ G");
            uf.union(i, j);
        }
        for s in k.generators() {
            let j = group.index_of(&g.then(s)).expect("K ≤ G");
            uf.union(i, j);
        }
    }
    // Elements are sorted, so the root (least index) of each class is its
    // lexicographically least member; number classes by first appearance.
    let mut class_of = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    let mut root_class = vec![usize::MAX; n];
    for i in 0..n {
        let root = uf.find(i);
        if root_class[root] == usize::MAX {
            root_class[root] = representatives.len();
            representatives.push(group.elements()[root].clone());
            sizes.push(0);
        }
        class_of[i] = root_class[root];
        sizes[class_of[i]] += 1;
    }
    Ok(DoubleCosetDecomposition {
        representatives,
        class_of,
        sizes,
    })
}

/// `|{1..r}g ∩ {1..r}|`, the index of the double coset of
/// `Sym_r × Sym_{n-r}` containing `g`.
pub fn type_of(g: &Permutation, r: usize) -> Result<usize, CosetError> {
    if r > g.degree() {
        return Err(CosetError::TypeOutOfRange {
            r,
            degree: g.degree(),
        });
    }
    Ok(type_of_unchecked(g, r))
}

#[inline]
pub(crate) fn type_of_unchecked(g: &Permutation, r: usize) -> usize {
    g.images()[..r].iter().filter(|&&a| (a as usize) < r).count()
}

/// One representative (the least element) for each left coset `yH`
/// contained in `set`, in increasing order.
pub fn left_coset_transversal(
    set: &[Permutation],
    h: &SubgroupSpec,
) -> Result<Vec<Permutation>, CosetError> {
    let members: HashSet<&Permutation> = set.iter().collect();
    let mut sorted: Vec<&Permutation> = members.iter().copied().collect();
    sorted.sort_unstable();
    let mut covered: HashSet<Permutation> = HashSet::new();
    let mut reps = Vec::new();
    for y in sorted {
        if covered.contains(y) {
            continue;
        }
        let mut least = y.clone();
        for hh in h.elements().iter() {
            let yh = y.then(hh);
            if !members.contains(&yh) {
                return Err(CosetError::NotCosetUnion {
                    element: y.to_string(),
                    missing: yh.to_string(),
                });
            }
            if yh < least {
                least = yh.clone();
            }
            covered.insert(yh);
        }
        reps.push(least);
    }
    reps.sort_unstable();
    Ok(reps)
}

/// Lists the `r`-subsets of `{1..n}` in lexicographic order.
pub fn r_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for p in start..=n {
            if n - p + 1 < r - cur.len() {
                break;
            }
            cur.push(p);
            rec(p + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(1, n, r, &mut cur, &mut out);
    out
}
