use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{fmt_q, Poly};
use super::ratfunc::RatFunc;
use crate::error::Error;
use crate::Q;

/// A rational point of the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Q),
    Infinity,
}

impl Point {
    pub fn int(n: i64) -> Point {
        Point::Finite(Q::from_integer(BigInt::from(n)))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "{}", fmt_q(a)),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("not an exact rational: {:?}", s));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else {
        Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

impl FromStr for Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Point::Infinity),
            t => Ok(Point::Finite(parse_rational(t)?)),
        }
    }
}

/// Divisor on the projective line over the rationals.
///
/// The finite part is stored as a pair of coprime monic polynomials (zeros over poles), so points
/// of the support need not be rational. The coefficient at infinity is kept separately.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointDivisor {
    num: Poly,
    den: Poly,
    inf: i64,
}

impl Default for PointDivisor {
    fn default() -> Self {
        PointDivisor::zero()
    }
}

impl PointDivisor {
    pub fn zero() -> Self {
        PointDivisor { num: Poly::one(), den: Poly::one(), inf: 0 }
    }

    pub fn from_parts(num: Poly, den: Poly, inf: i64) -> Self {
        assert!(!num.is_zero() && !den.is_zero());
        let g = Poly::gcd(&num, &den);
        PointDivisor { num: num.exact_div(&g).monic(), den: den.exact_div(&g).monic(), inf }
    }

    pub fn point(p: &Point, k: i64) -> Self {
        match p {
            Point::Infinity => PointDivisor { inf: k, ..PointDivisor::zero() },
            Point::Finite(a) => {
                let lin = Poly::linear_root(a).pow(k.unsigned_abs() as u32);
                if k >= 0 {
                    PointDivisor { num: lin, den: Poly::one(), inf: 0 }
                } else {
                    PointDivisor { num: Poly::one(), den: lin, inf: 0 }
                }
            }
        }
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (&'a Point, i64)>) -> Self {
        let mut d = PointDivisor::zero();
        for (p, k) in terms {
            d = d.add(&PointDivisor::point(p, k));
        }
        d
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn inf(&self) -> i64 {
        self.inf
    }

    pub fn add(&self, o: &PointDivisor) -> PointDivisor {
        PointDivisor::from_parts(&self.num * &o.num, &self.den * &o.den, self.inf + o.inf)
    }

    pub fn neg(&self) -> PointDivisor {
        PointDivisor { num: self.den.clone(), den: self.num.clone(), inf: -self.inf }
    }

    pub fn sub(&self, o: &PointDivisor) -> PointDivisor {
        self.add(&o.neg())
    }

    pub fn times(&self, k: i64) -> PointDivisor {
        if k >= 0 {
            PointDivisor { num: self.num.pow(k as u32), den: self.den.pow(k as u32), inf: self.inf * k }
        } else {
            self.neg().times(-k)
        }
    }

    pub fn degree(&self) -> i64 {
        self.num.degree() - self.den.degree() + self.inf
    }

    pub fn is_zero(&self) -> bool {
        self.inf == 0 && self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_effective(&self) -> bool {
        self.inf >= 0 && self.den.is_constant()
    }

    /// self >= o
    pub fn ge(&self, o: &PointDivisor) -> bool {
        self.sub(o).is_effective()
    }

    pub fn ord_at(&self, p: &Point) -> i64 {
        match p {
            Point::Infinity => self.inf,
            Point::Finite(a) => {
                self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
            }
        }
    }

    /// The rational function prod (x - a)^{ord_a}: sections s of O(D) are exactly the
    /// functions with s * h a polynomial of degree at most deg D.
    pub fn h(&self) -> RatFunc {
        RatFunc::new(self.num.clone(), self.den.clone())
    }

    /// Part of the divisor supported on the given points.
    pub fn restrict(&self, points: &[Point]) -> PointDivisor {
        let mut seen = Vec::new();
        let mut out = PointDivisor::zero();
        for p in points {
            if seen.contains(&p) {
                continue;
            }
            seen.push(p);
            out = out.add(&PointDivisor::point(p, self.ord_at(p)));
        }
        out
    }

    /// Rational points with their coefficients, plus the leftover part (as zeros and poles
    /// polynomials) whose roots were not found to be rational.
    pub fn terms(&self) -> (BTreeMap<Point, i64>, Poly, Poly) {
        let mut out = BTreeMap::new();
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (a, k) in self.num.rational_roots() {
            num = num.exact_div(&Poly::linear_root(&a).pow(k));
            out.insert(Point::Finite(a), k as i64);
        }
        for (a, k) in self.den.rational_roots() {
            den = den.exact_div(&Poly::linear_root(&a).pow(k));
            out.insert(Point::Finite(a), -(k as i64));
        }
        if self.inf != 0 {
            out.insert(Point::Infinity, self.inf);
        }
        (out, num.monic(), den.monic())
    }
}

impl fmt::Display for PointDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (terms, rn, rd) = self.terms();
        let mut parts: Vec<String> = terms
            .iter()
            .map(|(p, k)| if *k == 1 { format!("[{}]", p) } else { format!("{}*[{}]", k, p) })
            .collect();
        if !rn.is_constant() {
            parts.push(format!("[roots of {}]", rn));
        }
        if !rd.is_constant() {
            parts.push(format!("-[roots of {}]", rd));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for PointDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointDivisor({})", self)
    }
}

/// Convenience for tests and fixtures: a divisor from integer points.
pub fn divisor_of(pairs: &[(Point, i64)]) -> PointDivisor {
    PointDivisor::from_terms(pairs.iter().map(|(p, k)| (p, *k)))
}

impl PointDivisor {
    pub fn is_one_poly(p: &Poly) -> bool {
        p.is_constant() && p.coeff(0).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p1::poly::q;

    #[test]
    fn arithmetic_and_orders() {
        let p = Point::int(0);
        let r = Point::int(2);
        let d = divisor_of(&[(p.clone(), 1), (r.clone(), -1), (Point::Infinity, 2)]);
        assert_eq!(d.degree(), 2);
        assert_eq!(d.ord_at(&p), 1);
        assert_eq!(d.ord_at(&r), -1);
        assert!(!d.is_effective());
        let e = d.add(&PointDivisor::point(&r, 1));
        assert!(e.is_effective());
        assert_eq!(e.sub(&e), PointDivisor::zero());
        assert_eq!(d.to_string(), "[0] + -1*[2] + 2*[inf]");
    }

    #[test]
    fn irrational_support_is_residual() {
        let d = PointDivisor::from_parts(Poly::from_ints(&[-2, 0, 1]), Poly::one(), 0);
        assert_eq!(d.degree(), 2);
        assert_eq!(d.ord_at(&Point::Finite(q(1))), 0);
        let (t, rn, _) = d.terms();
        assert!(t.is_empty());
        assert_eq!(rn, Poly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn parse_points() {
        assert_eq!("inf".parse::<Point>().unwrap(), Point::Infinity);
        assert_eq!("-3/6".parse::<Point>().unwrap(), Point::Finite(Q::new((-1).into(), 2.into())));
        assert!("x".parse::<Point>().is_err());
    }
}
