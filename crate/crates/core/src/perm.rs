//! Permutations of `{1..n}` under the right action, and bounded enumeration
//! of the groups they generate.
//!
//! A permutation is stored as a dense image array. Composition follows the
//! right-action convention used everywhere in this crate: `p.compose(&q)`
//! first applies `p`, then `q`, so the point `a` goes to `q(p(a))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Default upper bound on the number of elements `generate_group` will
/// enumerate before giving up.
pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("not a permutation of 1..{degree}: {images:?}")]
    NotBijective { degree: usize, images: Vec<usize> },
    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("group has more than {cap} elements (enumerated {reached} before stopping)")]
    CapExceeded { reached: usize, cap: usize },
    #[error("a group needs at least one generator")]
    NoGenerators,
}

/// A bijection of `{1..n}`.
///
/// Internally 0-based; all public constructors and accessors that talk about
/// points use 1-based labels unless the name says otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[p - 1]` is the
    /// image of point `p`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::ZeroDegree);
        }
        if images.iter().any(|&i| i == 0) {
            return Err(PermError::NotBijective {
                degree: images.len(),
                images: images.to_vec(),
            });
        }
        let zero: Vec<usize> = images.iter().map(|&i| i - 1).collect();
        Self::from_zero_based(&zero).map_err(|_| PermError::NotBijective {
            degree: images.len(),
            images: images.to_vec(),
        })
    }

    /// Builds a permutation from 0-based images.
    pub fn from_zero_based(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective {
                    degree: n,
                    images: images.iter().map(|&i| i + 1).collect(),
                });
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&i| i as u32).collect(),
        })
    }

    /// Parses cycle notation such as `"(1 2)(3 4 5)"`. Whitespace is free,
    /// commas are accepted as separators inside a cycle, and `"()"` (or an
    /// empty string) is the identity.
    pub fn parse_cycles(input: &str, degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let err = |reason: String| PermError::Parse {
            input: input.to_string(),
            reason,
        };
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = input.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(err("expected '('".into()));
            }
            let close = rest.find(')').ok_or_else(|| err("unclosed '('".into()))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let point: usize = tok
                    .parse()
                    .map_err(|_| err(format!("bad point {tok:?}")))?;
                if point == 0 || point > degree {
                    return Err(err(format!("point {point} outside 1..{degree}")));
                }
                if cycle.contains(&(point - 1)) {
                    return Err(err(format!("point {point} repeated in a cycle")));
                }
                cycle.push(point - 1);
            }
            // Cycles are composed left to right, like any other product.
            if cycle.len() > 1 {
                let mut step: Vec<u32> = (0..degree as u32).collect();
                for (i, &a) in cycle.iter().enumerate() {
                    step[a] = cycle[(i + 1) % cycle.len()] as u32;
                }
                images = images.iter().map(|&a| step[a as usize]).collect();
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `point`.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    /// 0-based image array.
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image array, as in `from_images`.
    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &a)| i as u32 == a)
    }

    /// `self` followed by `other`: the point `a` goes to `other(self(a))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked composition for hot loops. Panics on a degree mismatch.
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&a| other.images[a as usize])
                .collect(),
        }
    }

    /// In-place `self = self.then(other)`, reusing the buffer.
    #[inline]
    pub fn then_assign(&mut self, other: &Permutation) {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        for a in self.images.iter_mut() {
            *a = other.images[*a as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &a) in self.images.iter().enumerate() {
            inv[a as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// Image of a set of 1-based points, sorted.
    pub fn image_of_set(&self, points: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = points.iter().map(|&p| self.image(p)).collect();
        out.sort_unstable();
        out
    }

    /// Disjoint cycles of length ≥ 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut a = self.images[start] as usize;
            while a != start {
                seen[a] = true;
                cycle.push(a + 1);
                a = self.images[a] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted cycle lengths including fixed points; labels the conjugacy
    /// class in the symmetric group.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Serialized in cycle notation.
impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

/// Generators for a permutation group of a fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    degree: usize,
    generators: Vec<Permutation>,
}

impl GroupSpec {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        if generators.is_empty() {
            return Err(PermError::NoGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        Ok(GroupSpec { degree, generators })
    }

    /// Parses one generator per cycle-notation string.
    pub fn parse(degree: usize, generators: &[&str]) -> Result<Self, PermError> {
        let gens = generators
            .iter()
            .map(|s| Permutation::parse_cycles(s, degree))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(degree, gens)
    }

    /// The trivial group, generated by the identity.
    pub fn trivial(degree: usize) -> Result<Self, PermError> {
        Self::new(degree, vec![Permutation::identity(degree)])
    }

    /// `Sym_n`, generated by `(1 2)` and `(1 2 … n)`.
    pub fn symmetric(degree: usize) -> Result<Self, PermError> {
        if degree == 1 {
            return Self::trivial(1);
        }
        let transposition = Permutation::parse_cycles("(1 2)", degree)?;
        let long: Vec<usize> = (2..=degree).chain(std::iter::once(1)).collect();
        Self::new(degree, vec![transposition, Permutation::from_images(&long)?])
    }

    /// The Young subgroup `Sym_{b1} × Sym_{b2} × …` stabilising the blocks
    /// `{1..b1}`, `{b1+1..b1+b2}`, … . Generated by adjacent transpositions
    /// inside each block.
    pub fn young(blocks: &[usize]) -> Result<Self, PermError> {
        let degree: usize = blocks.iter().sum();
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut gens = Vec::new();
        let mut start = 1;
        for &b in blocks {
            for p in start..start + b.saturating_sub(1) {
                let mut img: Vec<usize> = (1..=degree).collect();
                img.swap(p - 1, p);
                gens.push(Permutation::from_images(&img)?);
            }
            start += b;
        }
        if gens.is_empty() {
            gens.push(Permutation::identity(degree));
        }
        Self::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }
}

/// The full element list of a finite permutation group, sorted by image
/// array so the identity comes first.
#[derive(Debug, Clone)]
pub struct GroupElements {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl GroupElements {
    /// Wraps an element list. The caller is responsible for closure; the
    /// list is deduplicated and sorted.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = elements.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        elements.sort_unstable();
        elements.dedup();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        Ok(GroupElements {
            degree,
            elements,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.elements.iter()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index.contains_key(g)
    }

    /// Position of `g` in `elements()`.
    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// True when every element of `other` lies in `self`.
    pub fn contains_all(&self, other: &GroupElements) -> bool {
        other.iter().all(|g| self.contains(g))
    }
}

/// Breadth-first closure of the generators under right multiplication.
///
/// Fails with `CapExceeded` as soon as more than `cap` distinct elements are
/// found.
pub fn generate_group(spec: &GroupSpec, cap: usize) -> Result<GroupElements, PermError> {
    let identity = Permutation::identity(spec.degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    seen.insert(identity.clone(), ());
    let mut queue = VecDeque::from([identity]);
    while let Some(g) = queue.pop_front() {
        for s in &spec.generators {
            let h = g.then(s);
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), ());
                if seen.len() > cap {
                    return Err(PermError::CapExceeded {
                        reached: seen.len(),
                        cap,
                    });
                }
                queue.push_back(h);
            }
        }
    }
    GroupElements::from_elements(spec.degree, seen.into_keys().collect())
}
