//! A minimal commutative-ring interface shared by coefficients.
//!
//! Every ring in this crate is a Q-algebra, and zero/one are minted from an
//! existing element (`zero_like`) because polynomial rings carry their
//! variable context with them.

use crate::cyc::CycNum;
use crate::rat::Rat;

pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    /// Scalar action of Q.
    fn scale(&self, r: &Rat) -> Self;

    /// Multiplicative inverse, when the element is a unit.
    fn inv_unit(&self) -> Option<Self>;

    /// True when powers of the element eventually vanish exactly (truncated
    /// series with no scalar constant term). Controls termination of the
    /// series exp/log loops.
    fn topo_nilpotent(&self) -> bool {
        self.is_zero()
    }
}

impl Ring for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }

    fn one_like(&self) -> Self {
        Rat::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }

    fn scale(&self, r: &Rat) -> Self {
        self * r
    }

    fn inv_unit(&self) -> Option<Self> {
        self.recip().ok()
    }
}

impl Ring for CycNum {
    fn zero_like(&self) -> Self {
        CycNum::zero()
    }

    fn one_like(&self) -> Self {
        CycNum::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }

    fn scale(&self, r: &Rat) -> Self {
        CycNum::scale(self, r)
    }

    fn inv_unit(&self) -> Option<Self> {
        self.inv().ok()
    }
}
