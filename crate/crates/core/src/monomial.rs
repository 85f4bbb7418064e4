//! Variables, monomials and the weighted graded-revlex order.
//!
//! The generator `alpha_r` has weighted degree `2r - 2` and `beta_r` has
//! weighted degree `2r`; the deformation variables `t2, t3` have degree 1.
//! Monomials of the same weighted degree are compared reverse
//! lexicographically: the right-most nonzero entry of the exponent
//! difference decides, negative meaning greater.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A polynomial variable. The derived `Ord` fixes the canonical variable
/// sequence: alphas ascending, then betas ascending, then `t2, t3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Alpha(u8),
    Beta(u8),
    T2,
    T3,
}

impl Var {
    pub fn weight(self) -> u32 {
        match self {
            Var::Alpha(r) => 2 * r as u32 - 2,
            Var::Beta(r) => 2 * r as u32,
            Var::T2 | Var::T3 => 1,
        }
    }

    /// The index `r` of `alpha_r`/`beta_r`; used by the dual sign flip.
    pub fn generator_index(self) -> Option<u32> {
        match self {
            Var::Alpha(r) | Var::Beta(r) => Some(r as u32),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Alpha(r) => write!(f, "a{r}"),
            Var::Beta(r) => write!(f, "b{r}"),
            Var::T2 => write!(f, "t2"),
            Var::T3 => write!(f, "t3"),
        }
    }
}

/// An ordered list of variables with their weights; shared by every
/// polynomial of a ring via `Arc`.
#[derive(PartialEq, Eq, Debug)]
pub struct PolyRing {
    vars: Vec<Var>,
}

impl PolyRing {
    /// Variables must be listed in the canonical (ascending) sequence.
    pub fn new(vars: Vec<Var>) -> Arc<Self> {
        assert!(
            vars.windows(2).all(|w| w[0] < w[1]),
            "variables must be strictly ascending: {vars:?}"
        );
        Arc::new(PolyRing { vars })
    }

    /// `Q[a2, a3]`, the ring of the small relation families.
    pub fn small() -> Arc<Self> {
        PolyRing::new(vec![Var::Alpha(2), Var::Alpha(3)])
    }

    /// `Q[a2, a3, b2]`, the ring of the quotient census.
    pub fn quotient3() -> Arc<Self> {
        PolyRing::new(vec![Var::Alpha(2), Var::Alpha(3), Var::Beta(2)])
    }

    /// `Q[a2..aN, b2..bN]`, the mod-psi generator ring for rank `n`.
    pub fn rank(n: u8) -> Arc<Self> {
        assert!(n >= 2);
        let mut vars: Vec<Var> = (2..=n).map(Var::Alpha).collect();
        vars.extend((2..=n).map(Var::Beta));
        PolyRing::new(vars)
    }

    /// `[t2, t3]`, coefficients of deformed eigenvalue relations.
    pub fn deformation() -> Arc<Self> {
        PolyRing::new(vec![Var::T2, Var::T3])
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    pub fn one(&self) -> Monomial {
        Monomial {
            exps: SmallVec::from_elem(0, self.nvars()),
        }
    }

    pub fn var_monomial(&self, v: Var) -> Result<Monomial> {
        let i = self
            .var_index(v)
            .ok_or_else(|| Error::InvalidParameter(format!("variable {v} not in ring {self}")))?;
        let mut m = self.one();
        m.exps[i] = 1;
        Ok(m)
    }

    pub fn monomial(&self, exps: &[u32]) -> Result<Monomial> {
        if exps.len() != self.nvars() {
            return Err(Error::RingMismatch {
                left: self.to_string(),
                right: format!("{} exponents", exps.len()),
            });
        }
        Ok(Monomial {
            exps: SmallVec::from_slice(exps),
        })
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.exps
            .iter()
            .zip(&self.vars)
            .map(|(&e, v)| e * v.weight())
            .sum()
    }

    /// Weighted graded-revlex comparison.
    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.exps.len(), self.nvars());
        debug_assert_eq!(b.exps.len(), self.nvars());
        match self.degree(a).cmp(&self.degree(b)) {
            Ordering::Equal => {
                for (x, y) in a.exps.iter().zip(b.exps.iter()).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        // right-most nonzero difference negative => greater
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            other => other,
        }
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Exponent vector relative to a [`PolyRing`]'s variable sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[u32; 6]>,
}

impl Monomial {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn try_div(&self, divisor: &Monomial) -> Option<Monomial> {
        divisor.divides(self).then(|| Monomial {
            exps: self
                .exps
                .iter()
                .zip(&divisor.exps)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|a| a * e).collect(),
        }
    }

    pub fn display<'a>(&'a self, ring: &'a PolyRing) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, ring }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    ring: &'a PolyRing,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (v, &e) in self.ring.vars().iter().zip(self.m.exps.iter()) {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, "*")?;
            }
            wrote = true;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// The spec-level comparison entry point: errors on mismatched variable
/// sets instead of panicking.
pub fn monomial_compare(ring: &PolyRing, a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.exps.len() != ring.nvars() || b.exps.len() != ring.nvars() {
        return Err(Error::RingMismatch {
            left: format!("{} exponents / {} exponents", a.exps.len(), b.exps.len()),
            right: ring.to_string(),
        });
    }
    Ok(ring.cmp_monomials(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Arc<PolyRing> {
        PolyRing::quotient3()
    }

    #[test]
    fn weights() {
        assert_eq!(Var::Alpha(2).weight(), 2);
        assert_eq!(Var::Alpha(3).weight(), 4);
        assert_eq!(Var::Beta(2).weight(), 4);
        assert_eq!(Var::Beta(3).weight(), 6);
    }

    #[test]
    fn revlex_same_degree() {
        let r = q3();
        // a3 vs b2, both degree 4: difference (0,1,-1), rightmost nonzero -1
        let a3 = r.monomial(&[0, 1, 0]).unwrap();
        let b2 = r.monomial(&[0, 0, 1]).unwrap();
        assert_eq!(r.cmp_monomials(&a3, &b2), Ordering::Greater);

        // a2^2 vs a3, both degree 4: difference (2,-1,0)
        let a2sq = r.monomial(&[2, 0, 0]).unwrap();
        assert_eq!(r.cmp_monomials(&a2sq, &a3), Ordering::Greater);
    }

    #[test]
    fn degree_dominates() {
        let r = q3();
        let a2cubed = r.monomial(&[3, 0, 0]).unwrap();
        let b2 = r.monomial(&[0, 0, 1]).unwrap();
        assert_eq!(r.cmp_monomials(&a2cubed, &b2), Ordering::Greater);
    }

    #[test]
    fn compare_rejects_wrong_arity() {
        let r = q3();
        let small = PolyRing::small();
        let a = small.monomial(&[1, 0]).unwrap();
        let b = r.monomial(&[1, 0, 0]).unwrap();
        assert!(monomial_compare(&r, &a, &b).is_err());
    }

    #[test]
    fn division_and_lcm() {
        let r = q3();
        let m = r.monomial(&[2, 1, 0]).unwrap();
        let d = r.monomial(&[1, 0, 0]).unwrap();
        assert_eq!(m.try_div(&d), Some(r.monomial(&[1, 1, 0]).unwrap()));
        assert_eq!(d.try_div(&m), None);
        let n = r.monomial(&[0, 2, 1]).unwrap();
        assert_eq!(m.lcm(&n), r.monomial(&[2, 2, 1]).unwrap());
        assert!(!m.coprime(&n));
        assert!(d.coprime(&n));
    }
}
