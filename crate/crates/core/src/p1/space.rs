use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::linalg::{self, Matrix};
use super::point::{Point, PointDivisor};
use super::poly::Poly;
use super::pool::ConstantPool;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::Q;

/// A projective line attached at a vertex, with one marked point per incident edge and
/// optionally some further named points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedComponent {
    pub vertex: String,
    pub marked: BTreeMap<String, Point>,
    pub named: BTreeMap<String, Point>,
}

impl MarkedComponent {
    pub fn new(
        vertex: impl Into<String>,
        marked: BTreeMap<String, Point>,
        named: BTreeMap<String, Point>,
    ) -> Result<Self> {
        let c = MarkedComponent { vertex: vertex.into(), marked, named };
        let mut seen = BTreeSet::new();
        for p in c.marked.values().chain(c.named.values()) {
            if !seen.insert(p.clone()) {
                return Err(Error::Malformed(format!(
                    "point {} used twice on the component at {}",
                    p, c.vertex
                )));
            }
        }
        Ok(c)
    }

    /// Marked point of an incident edge.
    pub fn point(&self, edge: &str) -> Result<&Point> {
        self.marked
            .get(edge)
            .ok_or_else(|| Error::UnknownId(format!("no marked point for edge {} at {}", edge, self.vertex)))
    }

    pub fn all_points(&self) -> Vec<Point> {
        self.marked.values().chain(self.named.values()).cloned().collect()
    }

    /// The divisor sum_e k_e P_e of a formal combination of marked points.
    pub fn realize(&self, formal: &BTreeMap<String, i64>) -> Result<PointDivisor> {
        let mut d = PointDivisor::zero();
        for (e, k) in formal {
            d = d.add(&PointDivisor::point(self.point(e)?, *k));
        }
        Ok(d)
    }
}

/// A space of sections of O(D) on the projective line.
///
/// A rational function s is a section when div(s) + D >= 0, equivalently when s * h_D is a
/// polynomial of degree at most deg D, where h_D = prod (x - a)^{ord_a D}. Sections are stored
/// through these polynomials, which makes every vanishing condition a linear condition on
/// polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionSpace {
    divisor: PointDivisor,
    basis: Vec<RatFunc>,
    polys: Vec<Poly>,
}

impl FunctionSpace {
    pub fn new(divisor: PointDivisor, basis: Vec<RatFunc>) -> Result<Self> {
        let polys = basis
            .iter()
            .map(|s| section_poly(s, &divisor))
            .collect::<Result<Vec<_>>>()?;
        let sp = FunctionSpace { divisor, basis, polys };
        if linalg::rank(&sp.coord_matrix()) != sp.basis.len() {
            return Err(Error::Malformed("basis is linearly dependent".into()));
        }
        Ok(sp)
    }

    /// All of H^0(O(D)).
    pub fn complete(divisor: PointDivisor) -> Self {
        let d = divisor.degree();
        let h = divisor.h();
        let basis: Vec<RatFunc> = (0..=d.max(-1))
            .map(|k| RatFunc::from_poly(Poly::x().pow(k as u32)).div(&h))
            .collect();
        FunctionSpace::new(divisor, basis).expect("monomials form a basis")
    }

    pub fn divisor(&self) -> &PointDivisor {
        &self.divisor
    }

    pub fn basis(&self) -> &[RatFunc] {
        &self.basis
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rows are basis elements, columns the coefficients of x^0 .. x^{deg D}.
    pub fn coord_matrix(&self) -> Matrix {
        let n = (self.divisor.degree() + 1).max(0) as usize;
        self.polys.iter().map(|p| (0..n).map(|k| p.coeff(k)).collect()).collect()
    }

    pub fn contains(&self, s: &RatFunc) -> bool {
        let Ok(p) = section_poly(s, &self.divisor) else {
            return false;
        };
        let mut m = self.coord_matrix();
        let n = (self.divisor.degree() + 1).max(0) as usize;
        m.push((0..n).map(|k| p.coeff(k)).collect());
        linalg::rank(&m) == self.dim()
    }

    /// Function for a coefficient vector in the basis.
    pub fn element(&self, coeffs: &[Q]) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (c, s) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&s.scale(c));
            }
        }
        acc
    }

    fn combos(&self, kernel: &Matrix) -> FunctionSpace {
        let basis: Vec<RatFunc> = kernel.iter().map(|c| self.element(c)).collect();
        let polys = basis.iter().map(|s| section_poly(s, &self.divisor).unwrap()).collect();
        FunctionSpace { divisor: self.divisor.clone(), basis, polys }
    }

    /// V(-E): sections whose zero divisor div(s) + D contains the effective divisor E.
    pub fn vanishing(&self, e: &PointDivisor) -> FunctionSpace {
        assert!(e.is_effective(), "vanishing requirement must be effective");
        let dd = self.divisor.degree();
        let cap = dd - e.inf();
        let en = e.num();
        let width = (dd + 1).max(0) as usize;
        // one row per linear condition, one column per basis element
        let mut cond: Vec<Vec<Q>> = Vec::new();
        let rems: Vec<Poly> = self.polys.iter().map(|p| p.rem(en)).collect();
        for k in 0..en.degree().max(0) as usize {
            cond.push(rems.iter().map(|r| r.coeff(k)).collect());
        }
        for k in (cap + 1).max(0) as usize..width {
            cond.push(self.polys.iter().map(|p| p.coeff(k)).collect());
        }
        if cond.is_empty() {
            return self.clone();
        }
        let ker = linalg::kernel(&cond, self.dim());
        self.combos(&ker)
    }

    /// Rows: basis elements. Columns: the coefficient of order k_P of div0 at each point P,
    /// i.e. the leading coefficient of a section vanishing to order at least k_P there.
    /// The coordinate at infinity uses the local parameter 1/x.
    pub fn leading_coeff_map(&self, points: &[(Point, i64)]) -> Matrix {
        let dd = self.divisor.degree();
        self.polys
            .iter()
            .map(|p| {
                points
                    .iter()
                    .map(|(pt, k)| match pt {
                        Point::Finite(a) => {
                            if *k < 0 {
                                Q::zero()
                            } else {
                                p.taylor_coeff(a, *k as usize)
                            }
                        }
                        Point::Infinity => {
                            let deg = dd - k;
                            if deg < 0 {
                                Q::zero()
                            } else {
                                p.coeff(deg as usize)
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The same space with the basis replaced by the reduced row echelon basis.
    pub fn echelon(&self) -> FunctionSpace {
        let (r, _) = linalg::rref(&self.coord_matrix());
        let h = self.divisor.h();
        let basis: Vec<RatFunc> = r
            .iter()
            .map(|row| RatFunc::from_poly(Poly::from_coeffs(row.clone())).div(&h))
            .collect();
        FunctionSpace::new(self.divisor.clone(), basis).expect("echelon rows are independent")
    }

    /// Degree of the line bundle and the echelon form of the space inside H^0(O(deg)).
    /// Two spaces with linearly equivalent divisors are the same series exactly when these agree.
    pub fn normal_form(&self) -> (i64, Matrix) {
        (self.divisor.degree(), linalg::rref(&self.coord_matrix()).0)
    }
}

/// s * h_D, checked to be a polynomial of degree at most deg D.
pub fn section_poly(s: &RatFunc, d: &PointDivisor) -> Result<Poly> {
    if s.is_zero() {
        return Err(Error::NotSection("the zero function".into()));
    }
    let t = s.mul(&d.h());
    if !t.den().is_constant() || t.num().degree() > d.degree() {
        return Err(Error::NotSection(format!("{} is not a section of O({})", s, d)));
    }
    Ok(t.num().scale(&t.den().coeff(0).recip()))
}

/// div(s) + D, which is effective exactly when s is a section of O(D).
pub fn div0(s: &RatFunc, d: &PointDivisor) -> Result<PointDivisor> {
    section_poly(s, d)?;
    Ok(s.divisor().add(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// Values at these points are pairwise distinct (a pole counts as the value infinity).
    DistinctValues(Vec<Point>),
    /// Finite and nonzero at each of these points.
    NonVanishing(Vec<Point>),
}

impl Predicate {
    pub fn holds(&self, f: &RatFunc) -> bool {
        match self {
            Predicate::DistinctValues(ps) => {
                let vals: Vec<Option<Q>> = ps.iter().map(|p| f.eval(p)).collect();
                (0..vals.len()).all(|i| (i + 1..vals.len()).all(|j| vals[i] != vals[j]))
            }
            Predicate::NonVanishing(ps) => {
                ps.iter().all(|p| f.eval(p).is_some_and(|v| !v.is_zero()))
            }
        }
    }

    fn points(&self) -> &[Point] {
        match self {
            Predicate::DistinctValues(ps) | Predicate::NonVanishing(ps) => ps,
        }
    }
}

/// Options for [`construct_function`].
#[derive(Clone, Debug, Default)]
pub struct ConstructOptions {
    /// When the listed orders sum to more than zero and infinity is listed, the balance has to
    /// be made up by free poles; this allows them.
    pub allow_free_poles: bool,
    /// Further points where free zeros or poles must not be placed.
    pub avoid: Vec<Point>,
    /// Offset into the pool for the first attempt.
    pub pool_offset: usize,
}

const ATTEMPTS: usize = 64;

/// A rational function with exactly the prescribed orders at the listed points.
///
/// If infinity is not listed it absorbs the total. Otherwise the balance is placed as free
/// zeros (or poles, when allowed) at pool constants away from every listed or avoided point,
/// retrying with later constants until all predicates hold.
pub fn construct_function(
    orders: &BTreeMap<Point, i64>,
    predicates: &[Predicate],
    pool: &ConstantPool,
    opts: &ConstructOptions,
) -> Result<RatFunc> {
    let mut base = RatFunc::one();
    let mut total = 0;
    for (p, k) in orders {
        if let Point::Finite(a) = p {
            base = base.mul(&RatFunc::from_poly(Poly::linear_root(a)).pow(*k));
        }
        total += k;
    }
    let free = if orders.contains_key(&Point::Infinity) { -total } else { 0 };
    if free < 0 && !opts.allow_free_poles {
        return Err(Error::Unsatisfiable(format!(
            "orders sum to {} with infinity prescribed and no free poles allowed",
            total
        )));
    }
    let mut avoid: Vec<Q> = Vec::new();
    for p in orders.keys().chain(opts.avoid.iter()).chain(predicates.iter().flat_map(|p| p.points())) {
        if let Point::Finite(a) = p {
            avoid.push(a.clone());
        }
    }
    let attempts = if free == 0 { 1 } else { ATTEMPTS };
    for t in 0..attempts {
        let consts = pool.take_avoiding(opts.pool_offset + t, free.unsigned_abs() as usize, &avoid);
        let mut f = base.clone();
        for c in &consts {
            f = f.mul(&RatFunc::from_poly(Poly::linear_root(c)).pow(free.signum()));
        }
        if predicates.iter().all(|p| p.holds(&f)) {
            debug_assert!(orders.iter().all(|(p, k)| f.ord_at(p) == *k));
            return Ok(f);
        }
    }
    Err(Error::Unsatisfiable("no choice of free points meets the predicates".into()))
}
