use std::fmt;

use num_traits::{One, Zero};

use super::point::{Point, PointDivisor};
use super::poly::Poly;
use crate::Q;

/// Rational function num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let n = num.exact_div(&g);
        let d = den.exact_div(&g);
        let l = d.lead();
        let inv = Q::one() / l;
        RatFunc { num: n.scale(&inv), den: d.scale(&inv) }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::constant(Q::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by the zero function");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, k: i64) -> RatFunc {
        if k >= 0 {
            RatFunc::new(self.num.pow(k as u32), self.den.pow(k as u32))
        } else {
            RatFunc::new(self.den.pow((-k) as u32), self.num.pow((-k) as u32))
        }
    }

    /// Value at a point; None means a pole.
    pub fn eval(&self, p: &Point) -> Option<Q> {
        match p {
            Point::Finite(a) => {
                let d = self.den.eval(a);
                if d.is_zero() {
                    None
                } else {
                    Some(self.num.eval(a) / d)
                }
            }
            Point::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                if self.num.is_zero() || dn < dd {
                    Some(Q::zero())
                } else if dn == dd {
                    Some(self.num.lead() / self.den.lead())
                } else {
                    None
                }
            }
        }
    }

    /// Vanishing order at a point. The zero function has no order; callers must not ask.
    pub fn ord_at(&self, p: &Point) -> i64 {
        assert!(!self.is_zero(), "order of the zero function");
        match p {
            Point::Finite(a) => {
                self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
            }
            Point::Infinity => self.den.degree() - self.num.degree(),
        }
    }

    /// Principal divisor, including the point at infinity.
    pub fn divisor(&self) -> PointDivisor {
        assert!(!self.is_zero(), "divisor of the zero function");
        PointDivisor::from_parts(
            self.num.monic(),
            self.den.clone(),
            self.den.degree() - self.num.degree(),
        )
    }
}

fn wrap(p: &Poly) -> String {
    if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({})", p)
    } else {
        p.to_string()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // den is monic, so a constant den is exactly 1
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}
