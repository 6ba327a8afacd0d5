use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Q;

/// Dense univariate polynomial over the rationals, coefficients stored low degree first.
/// The coefficient vector never ends in a zero, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Q>,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn constant(c: Q) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// x - a
    pub fn linear_root(a: &Q) -> Self {
        Poly::from_coeffs(vec![-a.clone(), Q::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&v| q(v)).collect())
    }

    /// Product of (x - a)^k over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = (&'a Q, u32)>) -> Self {
        let mut p = Poly::one();
        for (a, k) in roots {
            p = &p * &Poly::linear_root(a).pow(k);
        }
        p
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        self.scale(&(Q::one() / l))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Poly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len();
        if rem.len() < dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = Q::one() / d.lead();
        let mut quo = vec![Q::zero(); rem.len() - dd + 1];
        for i in (0..quo.len()).rev() {
            let c = &rem[i + dd - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[i + j] -= t;
            }
            quo[i] = c;
        }
        rem.truncate(dd - 1);
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (qt, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        qt
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of a as a root; the zero polynomial is rejected.
    pub fn root_multiplicity(&self, a: &Q) -> u32 {
        assert!(!self.is_zero());
        let lin = Poly::linear_root(a);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (qt, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return k;
            }
            p = qt;
            k += 1;
        }
    }

    /// p(x + a).
    pub fn shift(&self, a: &Q) -> Poly {
        // Horner in the shifted variable.
        let mut acc = Poly::zero();
        let xa = Poly::from_coeffs(vec![a.clone(), Q::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &xa) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Coefficient of t^k in p(t + a).
    pub fn taylor_coeff(&self, a: &Q, k: usize) -> Q {
        // Repeated synthetic division by (x - a).
        let mut p = self.coeffs.clone();
        for step in 0..=k {
            if p.is_empty() {
                return Q::zero();
            }
            let n = p.len();
            let mut quo = vec![Q::zero(); n.saturating_sub(1)];
            let mut carry = Q::zero();
            for i in (0..n).rev() {
                let v = &p[i] + &carry * a;
                if i == 0 {
                    if step == k {
                        return v;
                    }
                } else {
                    quo[i - 1] = v.clone();
                }
                carry = v;
            }
            p = quo;
        }
        Q::zero()
    }

    /// Polynomial with integer coefficients and the same roots, content removed.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    /// Rational roots with multiplicity, found by the rational root test.
    /// Coefficients too large to factor by trial division are skipped, so the result may be partial.
    pub fn rational_roots(&self) -> Vec<(Q, u32)> {
        let mut out = Vec::new();
        if self.degree() < 1 {
            return out;
        }
        let mut p = self.clone();
        // zero roots first
        let z = p.root_multiplicity(&Q::zero());
        if z > 0 {
            out.push((Q::zero(), z));
            p = p.exact_div(&Poly::x().pow(z));
        }
        if p.degree() < 1 {
            return out;
        }
        let ints = p.primitive_integer();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let (Some(num_divs), Some(den_divs)) = (small_divisors(&a0), small_divisors(&an)) else {
            return out;
        };
        let mut cands: Vec<Q> = Vec::new();
        for pn in &num_divs {
            for qd in &den_divs {
                let c = Q::new(BigInt::from(*pn), BigInt::from(*qd));
                cands.push(c.clone());
                cands.push(-c);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            if p.degree() < 1 {
                break;
            }
            if p.eval(&c).is_zero() {
                let k = p.root_multiplicity(&c);
                p = p.exact_div(&Poly::linear_root(&c).pow(k));
                out.push((c, k));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + o.coeff(i));
        }
        Poly::from_coeffs(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - o.coeff(i));
        }
        Poly::from_coeffs(v)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            first = false;
            let unit = a.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", fmt_q(&a))?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", fmt_q(&a))?,
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}
