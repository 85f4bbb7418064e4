//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! Terms are kept sorted in descending weighted-grevlex order, so the
//! leading term is always the first entry and never needs recomputing.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cyc::CycNum;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, PolyRing, Var};
use crate::rat::Rat;
use crate::ring::Ring;

/// A ring whose zero/one need no context; coefficient rings of `Poly`.
pub trait ScalarRing: Ring {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    /// `(negative, magnitude)` used by the canonical text form.
    fn display_parts(&self) -> (bool, String);
}

impl ScalarRing for Rat {
    fn ring_zero() -> Self {
        Rat::zero()
    }

    fn ring_one() -> Self {
        Rat::one()
    }

    fn display_parts(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl ScalarRing for CycNum {
    fn ring_zero() -> Self {
        CycNum::zero()
    }

    fn ring_one() -> Self {
        CycNum::one()
    }

    fn display_parts(&self) -> (bool, String) {
        match self.as_rational() {
            Some(r) => r.display_parts(),
            None => (false, format!("({self})")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C: ScalarRing> {
    ring: Arc<PolyRing>,
    /// Sorted descending in the ring's order; no zero coefficients.
    terms: Vec<(Monomial, C)>,
}

impl<C: ScalarRing> Poly<C> {
    pub fn zero(ring: Arc<PolyRing>) -> Self {
        Poly {
            ring,
            terms: vec![],
        }
    }

    pub fn constant(ring: Arc<PolyRing>, c: C) -> Self {
        let one = ring.one();
        Poly::from_terms(ring, vec![(one, c)])
    }

    pub fn one(ring: Arc<PolyRing>) -> Self {
        Poly::constant(ring, C::ring_one())
    }

    pub fn var(ring: Arc<PolyRing>, v: Var) -> Result<Self> {
        let m = ring.var_monomial(v)?;
        Ok(Poly::from_terms(ring, vec![(m, C::ring_one())]))
    }

    pub fn term(ring: Arc<PolyRing>, m: Monomial, c: C) -> Self {
        Poly::from_terms(ring, vec![(m, c)])
    }

    pub fn from_terms(ring: Arc<PolyRing>, terms: Vec<(Monomial, C)>) -> Self {
        let mut p = Poly { ring, terms };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let ring = self.ring.clone();
        self.terms.sort_by(|a, b| ring.cmp_monomials(&b.0, &a.0));
        let mut merged: Vec<(Monomial, C)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        self.terms = merged;
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms
            .iter()
            .find(|(tm, _)| tm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::ring_zero)
    }

    /// Coefficient of the constant monomial.
    pub fn constant_coeff(&self) -> C {
        self.coeff(&self.ring.one())
    }

    pub fn assert_same_ring(&self, other: &Self) {
        assert_eq!(
            self.ring, other.ring,
            "polynomial rings differ: {} vs {}",
            self.ring, other.ring
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly::from_terms(self.ring.clone(), terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.ring.clone());
        }
        let mut acc: HashMap<Monomial, C> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_terms(self.ring.clone(), acc.into_iter().collect())
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(m), tc.mul(c)))
                .filter(|(_, tc)| !tc.is_zero())
                .collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Poly::zero(self.ring.clone());
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(r)))
                .collect(),
        }
    }

    pub fn mul_scalar(&self, s: &C) -> Self {
        if s.is_zero() {
            return Poly::zero(self.ring.clone());
        }
        Poly::from_terms(
            self.ring.clone(),
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.ring.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coeffs<D: ScalarRing>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(
            self.ring.clone(),
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        )
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Result<Self> {
        let i = self.ring.var_index(v).ok_or_else(|| {
            Error::InvalidParameter(format!("variable {v} not in ring {}", self.ring))
        })?;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] = e - 1;
            terms.push((
                self.ring.monomial(&exps)?,
                c.scale(&Rat::from_int(e as i64)),
            ));
        }
        Ok(Poly::from_terms(self.ring.clone(), terms))
    }

    /// Substitute zero for `v`.
    pub fn set_var_zero(&self, v: Var) -> Result<Self> {
        let i = self.ring.var_index(v).ok_or_else(|| {
            Error::InvalidParameter(format!("variable {v} not in ring {}", self.ring))
        })?;
        Ok(Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(i) == 0)
                .cloned()
                .collect(),
        })
    }

    /// Re-express in `target`, which must contain every variable that
    /// actually occurs.
    pub fn project(&self, target: Arc<PolyRing>) -> Result<Poly<C>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.nvars()];
            for (j, v) in self.ring.vars().iter().enumerate() {
                let e = m.exp(j);
                if e == 0 {
                    continue;
                }
                match target.var_index(*v) {
                    Some(k) => exps[k] = e,
                    None => {
                        return Err(Error::RingMismatch {
                            left: self.ring.to_string(),
                            right: target.to_string(),
                        })
                    }
                }
            }
            terms.push((target.monomial(&exps)?, c.clone()));
        }
        Ok(Poly::from_terms(target, terms))
    }

    /// Evaluate by substituting `assign[i]` for the i-th variable, lifting
    /// coefficients through `lift`. `proto` supplies the target ring context.
    pub fn eval_map<T: Ring>(&self, lift: impl Fn(&C) -> T, assign: &[T], proto: &T) -> T {
        assert_eq!(assign.len(), self.ring.nvars());
        let mut acc = proto.zero_like();
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&assign[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Weighted degree of the leading term.
    pub fn degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| self.ring.degree(m))
    }

    /// `Some(d)` when every term has weighted degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.degree()?;
        self.terms
            .iter()
            .all(|(m, _)| self.ring.degree(m) == d)
            .then_some(d)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Option<Self> {
        let (_, lc) = self.leading()?;
        let inv = lc.inv_unit()?;
        Some(self.mul_scalar(&inv))
    }
}

impl<C: ScalarRing> Ring for Poly<C> {
    fn zero_like(&self) -> Self {
        Poly::zero(self.ring.clone())
    }

    fn one_like(&self) -> Self {
        Poly::one(self.ring.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        Poly::neg(self)
    }

    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }

    fn scale(&self, r: &Rat) -> Self {
        Poly::scale(self, r)
    }

    fn inv_unit(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = &self.terms[0];
        if !m.is_one() {
            return None;
        }
        Some(Poly::constant(self.ring.clone(), c.inv_unit()?))
    }
}

impl<C: ScalarRing> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = c.display_parts();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{}", m.display(&self.ring))?;
            } else {
                write!(f, "{mag}*{}", m.display(&self.ring))?;
            }
        }
        Ok(())
    }
}

impl<C: ScalarRing + Serialize> Serialize for Poly<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a, C> {
            exponents: std::collections::BTreeMap<String, u32>,
            coefficient: &'a C,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            let exponents = self
                .ring
                .vars()
                .iter()
                .zip(m.exps())
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (v.to_string(), e))
                .collect();
            seq.serialize_element(&Term {
                exponents,
                coefficient: c,
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(ring: &Arc<PolyRing>) -> Poly<Rat> {
        Poly::var(ring.clone(), Var::Alpha(2)).unwrap()
    }

    fn b2(ring: &Arc<PolyRing>) -> Poly<Rat> {
        Poly::var(ring.clone(), Var::Beta(2)).unwrap()
    }

    #[test]
    fn product_of_variables() {
        let r = PolyRing::quotient3();
        let p = a2(&r).mul(&a2(&r));
        assert_eq!(p.to_string(), "a2^2");
    }

    #[test]
    fn difference_of_squares() {
        // b2^2 has weighted degree 8 and leads a2^2 (degree 4).
        let r = PolyRing::quotient3();
        let p = a2(&r).add(&b2(&r)).mul(&a2(&r).sub(&b2(&r)));
        assert_eq!(p.to_string(), "-b2^2 + a2^2");
        assert_eq!(p, a2(&r).pow(2).sub(&b2(&r).pow(2)));
    }

    #[test]
    fn leading_term_order() {
        // a2*b2 + a3^2: both degree 8, (1,0,1) vs (0,2,0): rightmost nonzero
        // of difference (1,-2,1) is 1 => a3^2 is greater.
        let r = PolyRing::quotient3();
        let a3 = Poly::<Rat>::var(r.clone(), Var::Alpha(3)).unwrap();
        let p = a2(&r).mul(&b2(&r)).add(&a3.mul(&a3));
        let (lt, _) = p.leading().unwrap();
        assert_eq!(lt, &r.monomial(&[0, 2, 0]).unwrap());
        assert_eq!(p.to_string(), "a3^2 + a2*b2");
    }

    #[test]
    fn canonical_text() {
        let r = PolyRing::quotient3();
        let a3 = Poly::<Rat>::var(r.clone(), Var::Alpha(3)).unwrap();
        let p = a2(&r)
            .mul(&a2(&r))
            .mul(&b2(&r))
            .sub(&a3.scale(&Rat::new(3, 2)));
        assert_eq!(p.to_string(), "a2^2*b2 - 3/2*a3");
    }

    #[test]
    fn derivative() {
        let r = PolyRing::quotient3();
        let p = a2(&r).pow(3).add(&b2(&r));
        let d = p.derivative(Var::Alpha(2)).unwrap();
        assert_eq!(d.to_string(), "3*a2^2");
    }

    #[test]
    fn projection_and_kill() {
        let r4 = PolyRing::rank(3);
        let p = Poly::<Rat>::var(r4.clone(), Var::Beta(3))
            .unwrap()
            .add(&Poly::var(r4.clone(), Var::Alpha(2)).unwrap());
        let killed = p.set_var_zero(Var::Beta(3)).unwrap();
        let q = killed.project(PolyRing::quotient3()).unwrap();
        assert_eq!(q.to_string(), "a2");
        assert!(p.project(PolyRing::quotient3()).is_err());
    }

    #[test]
    fn homogeneity() {
        let r = PolyRing::quotient3();
        let p = a2(&r).pow(2).add(&b2(&r));
        assert_eq!(p.homogeneous_degree(), Some(4));
        let q = a2(&r).add(&b2(&r));
        assert_eq!(q.homogeneous_degree(), None);
    }
}
