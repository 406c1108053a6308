//! Brute-force oracles and small helpers shared by the integration tests.
//! Nothing here calls the shuffle module, so agreement is a real check.

#![allow(dead_code)]

use dcwalk::exact::{parse_rational, Rational};
use dcwalk::linalg::{zeros, Matrix};
use dcwalk::perm::Permutation;

pub fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

pub fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| q(s)).collect()
}

/// Rows listed `x = r, …, 0` with columns `z = r, …, 0` into ascending
/// indices: reverse both axes.
pub fn ascending<const N: usize>(m: &[[&str; N]; N]) -> Matrix {
    m.iter().rev().map(|row| row.iter().rev().map(|s| q(s)).collect()).collect()
}

/// All `k`-subsets of `items`, in lexicographic order.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    out.extend(subsets(&items[1..], k));
    out
}

/// Images `1..=n` of the shuffle that lifts the cards at positions
/// `chosen` (sorted) to the top and keeps the others in order below.
pub fn lift_to_top(n: usize, chosen: &[usize]) -> Vec<usize> {
    let mut images = vec![0; n + 1];
    let mut next = 1;
    for &p in chosen {
        images[p] = next;
        next += 1;
    }
    for img in images.iter_mut().skip(1).filter(|v| **v == 0) {
        *img = next;
        next += 1;
    }
    images
}

/// `D_s`: lift `r − s` cards of the top block and `s` of the rest.
pub fn d_s(n: usize, r: usize, s: usize) -> Vec<Vec<usize>> {
    let top: Vec<usize> = (1..=r).collect();
    let bottom: Vec<usize> = (r + 1..=n).collect();
    let mut out = Vec::new();
    for a in subsets(&top, r - s) {
        for b in subsets(&bottom, s) {
            let chosen: Vec<usize> = a.iter().chain(&b).copied().collect();
            out.push(lift_to_top(n, &chosen));
        }
    }
    out
}

/// Transition matrix of `|X ∩ {1..r}|` when an `r`-set `X` is moved by a
/// uniform element of `D_s`, averaged over every `X` of each type.
pub fn subset_action_oracle(n: usize, r: usize, s: usize) -> Matrix {
    let shuffles = d_s(n, r, s);
    let all: Vec<usize> = (1..=n).collect();
    let mut counts = vec![vec![0u64; r + 1]; r + 1];
    let mut per_type = vec![0u64; r + 1];
    for x_set in subsets(&all, r) {
        let x = x_set.iter().filter(|&&a| a <= r).count();
        per_type[x] += 1;
        for d in &shuffles {
            let z = x_set.iter().filter(|&&a| d[a] <= r).count();
            counts[x][z] += 1;
        }
    }
    let mut m = zeros(r + 1, r + 1);
    for x in 0..=r {
        let total = per_type[x] * shuffles.len() as u64;
        for z in 0..=r {
            m[x][z] = Rational::new(counts[x][z].into(), total.into());
        }
    }
    m
}

pub fn perm(images: &[usize]) -> Permutation {
    Permutation::from_images(images).unwrap()
}

/// All partitions of `n` as descending block lists.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for b in (1..=n.min(max)).rev() {
            acc.push(b);
            go(n - b, b, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
