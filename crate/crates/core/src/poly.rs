//! Univariate polynomials with rational coefficients, and exact extraction
//! of their rational roots.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{format_rational, Rational};

/// Coefficients in increasing degree: `coeffs[i]` multiplies `x^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::new(vec![Rational::one()])
    }

    /// `x - root`.
    pub fn linear(root: &Rational) -> Self {
        Polynomial::new(vec![-root.clone(), Rational::one()])
    }

    /// Monic polynomial with the given roots (with repetition).
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        roots
            .into_iter()
            .fold(Polynomial::one(), |acc, r| acc.mul(&Polynomial::linear(r)))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + d] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(d);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer polynomial with the same roots and coprime coefficients.
    fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Multiplicity of `root` as a root of `self`.
    pub fn multiplicity(&self, root: &Rational) -> usize {
        let lin = Polynomial::linear(root);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    /// All rational roots with multiplicity, in increasing order.
    ///
    /// Real roots of the square-free part are isolated with a Sturm sequence
    /// and bisection; an isolating interval is then narrowed until it can
    /// contain at most one rational whose denominator divides the leading
    /// coefficient, and that candidate (the simplest rational in the
    /// interval) is tested exactly.
    pub fn rational_roots(&self) -> Vec<(Rational, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sq = self.div_rem(&self.gcd(&self.derivative())).0;
        let ints = sq.primitive_integer();
        let lead = ints.last().expect("nonzero").abs();
        // Two rationals with denominators ≤ lead differ by at least 1/lead².
        let resolution = Rational::new(BigInt::one(), &lead * &lead);
        let sturm = sturm_sequence(&sq);
        let bound = cauchy_bound(&sq);
        let mut stack = vec![(-bound.clone(), bound)];
        let mut roots = Vec::new();
        while let Some((a, b)) = stack.pop() {
            let count = sign_changes(&sturm, &a) - sign_changes(&sturm, &b);
            if count == 0 {
                continue;
            }
            if count > 1 {
                let mid = (&a + &b) / Rational::from_integer(2.into());
                stack.push((a, mid.clone()));
                stack.push((mid, b));
                continue;
            }
            if sq.sign_at(&b) == 0 {
                roots.push(b);
                continue;
            }
            // exactly one root in the open interval (a, b)
            let (mut lo, mut hi) = (a, b);
            while &hi - &lo >= resolution {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                if sq.sign_at(&mid) == 0 {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                let c = sign_changes(&sturm, &lo) - sign_changes(&sturm, &mid);
                if c == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let candidate = if lo == hi {
                lo
            } else {
                simplest_between(&lo, &hi)
            };
            if sq.eval(&candidate).is_zero() {
                roots.push(candidate);
            }
        }
        roots.sort();
        roots
            .into_iter()
            .map(|r| {
                let m = self.multiplicity(&r);
                (r, m)
            })
            .collect()
    }
}

fn sturm_sequence(p: &Polynomial) -> Vec<Polynomial> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-Rational::one()));
    }
    seq
}

fn sign_changes(seq: &[Polynomial], x: &Rational) -> i64 {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// All real roots lie in `(-B, B)`.
fn cauchy_bound(p: &Polynomial) -> Rational {
    let lead = p.leading().abs();
    let max = p.coeffs[..p.coeffs.len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    max + Rational::one() + Rational::one()
}

/// The rational with the smallest denominator strictly between `lo < hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo < hi);
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if &next < hi {
        // prefer the integer of least magnitude in the interval
        if lo.is_negative() && hi.is_positive() {
            return Rational::zero();
        }
        if hi.is_negative() || hi.is_zero() {
            let c = hi.ceil() - Rational::one();
            return if &c > lo { c } else { next };
        }
        return next;
    }
    let a = lo - &fl;
    let b = hi - &fl;
    if a.is_zero() {
        // x = fl + 1/y with y > 1/b
        let y = b.recip().floor() + Rational::one();
        return fl + y.recip();
    }
    fl + simplest_between(&b.recip(), &a.recip()).recip()
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("({})x", format_rational(c)),
                _ => format!("({})x^{}", format_rational(c), i),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}
