//! Exact arithmetic in the cyclotomic field Q(zeta_12).
//!
//! Elements are stored as `c0 + c1*x + c2*x^2 + c3*x^3` in
//! `Q[x]/(x^4 - x^2 + 1)`, where `x = e^{i*pi/6}` is a primitive 12th root
//! of unity. This single degree-4 extension contains every constant we
//! need: `sqrt(3) = 2x - x^3`, `i = x^3`, `zeta_3 = x^2 - 1`,
//! `sqrt(-3) = 2x^2 - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycNum {
    /// Coordinates on the power basis `1, x, x^2, x^3`.
    c: [Rat; 4],
}

/// Names accepted by [`CycNum::constant`].
pub const CONSTANT_NAMES: [&str; 5] = ["sqrt3", "i", "sqrtm3", "zeta3", "zeta6"];

impl CycNum {
    pub fn new(c: [Rat; 4]) -> Self {
        CycNum { c }
    }

    pub fn zero() -> Self {
        CycNum::default()
    }

    pub fn one() -> Self {
        CycNum::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        CycNum {
            c: [r, Rat::zero(), Rat::zero(), Rat::zero()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        CycNum::from_rat(Rat::from_int(n))
    }

    pub fn coords(&self) -> &[Rat; 4] {
        &self.c
    }

    /// Named field constants. `sqrt3` and `sqrtm3` are the principal roots,
    /// `zeta3 = e^{2*pi*i/3}`, `zeta6 = e^{pi*i/3}`.
    pub fn constant(name: &str) -> Result<Self> {
        let q = |a: i64, b: i64, c: i64, d: i64| {
            CycNum::new([
                Rat::from_int(a),
                Rat::from_int(b),
                Rat::from_int(c),
                Rat::from_int(d),
            ])
        };
        match name {
            "sqrt3" => Ok(q(0, 2, 0, -1)),
            "i" => Ok(q(0, 0, 0, 1)),
            "sqrtm3" => Ok(q(-1, 0, 2, 0)),
            "zeta3" => Ok(q(-1, 0, 1, 0)),
            "zeta6" => Ok(q(0, 0, 1, 0)),
            other => Err(Error::UnknownConstant(other.to_string())),
        }
    }

    pub fn sqrt3() -> Self {
        CycNum::constant("sqrt3").unwrap()
    }

    pub fn i() -> Self {
        CycNum::constant("i").unwrap()
    }

    pub fn sqrtm3() -> Self {
        CycNum::constant("sqrtm3").unwrap()
    }

    pub fn zeta3() -> Self {
        CycNum::constant("zeta3").unwrap()
    }

    pub fn zeta6() -> Self {
        CycNum::constant("zeta6").unwrap()
    }

    /// `zeta_3^k` for any integer `k`.
    pub fn zeta3_pow(k: i64) -> Self {
        CycNum::zeta3().pow_u(k.rem_euclid(3) as u64)
    }

    /// `zeta_6^k` for any integer `k`.
    pub fn zeta6_pow(k: i64) -> Self {
        CycNum::zeta6().pow_u(k.rem_euclid(6) as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.c[0])
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycNum {
            c: [
                &self.c[0] * r,
                &self.c[1] * r,
                &self.c[2] * r,
                &self.c[3] * r,
            ],
        }
    }

    /// Complex conjugation, the field automorphism `x -> x^{-1} = x - x^3`.
    /// Fixes `sqrt3`, negates `i`.
    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        CycNum {
            c: [c0 + c2, c1.clone(), -c2, -&(c1 + c3)],
        }
    }

    /// The Galois map `x -> x^5 = x^3 - x`.
    fn sigma5(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        CycNum {
            c: [c0 + c2, -c1, -c2, c1 + c3],
        }
    }

    /// The Galois map `x -> x^7 = -x`.
    fn sigma7(&self) -> Self {
        let [c0, c1, c2, c3] = &self.c;
        CycNum {
            c: [c0.clone(), -c1, c2.clone(), -c3],
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // a^{-1} = (product of the other Galois conjugates) / Norm(a).
        let cof = &(&self.sigma5() * &self.sigma7()) * &self.conj();
        let norm = self * &cof;
        let n = norm.as_rational().cloned().ok_or_else(|| {
            Error::InternalConsistency(format!("norm of {self} is not rational: {norm}"))
        })?;
        Ok(cof.scale(&n.recip()?))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow_u(&self, e: u64) -> Self {
        let mut acc = CycNum::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_u(e as u64))
        } else {
            Ok(self.inv()?.pow_u((-e) as u64))
        }
    }

    /// Coordinates on the basis `1, sqrt3, i, i*sqrt3` (all rational).
    pub fn radical_coords(&self) -> [Rat; 4] {
        // x = (sqrt3 + i)/2, x^2 = (1 + i*sqrt3)/2, x^3 = i.
        let half = Rat::new(1, 2);
        let [c0, c1, c2, c3] = &self.c;
        [
            c0 + &(&half * c2),
            &half * c1,
            &(&half * c1) + c3,
            &half * c2,
        ]
    }

    /// `Some((p, q))` with value `p + q*sqrt3` when the element is real.
    pub fn real_sqrt3_parts(&self) -> Option<(Rat, Rat)> {
        let [one, s3, i, is3] = self.radical_coords();
        (i.is_zero() && is3.is_zero()).then_some((one, s3))
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        CycNum {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        // Schoolbook product, then reduce by x^4 = x^2 - 1 (so x^5 = x^3 - x,
        // x^6 = -1).
        let mut raw = [
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
        ];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += &(a * b);
            }
        }
        let mut c = [
            raw[0].clone(),
            raw[1].clone(),
            raw[2].clone(),
            raw[3].clone(),
        ];
        // x^4 = x^2 - 1
        c[2] += &raw[4];
        c[0] -= &raw[4];
        // x^5 = x^3 - x
        c[3] += &raw[5];
        c[1] -= &raw[5];
        // x^6 = -1
        c[0] -= &raw[6];
        CycNum { c }
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, coeff) in self.c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = if first { coeff.clone() } else { coeff.abs() };
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.c.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Rat>::deserialize(deserializer)?;
        let c: [Rat; 4] = v
            .try_into()
            .map_err(|_| D::Error::custom("expected exactly 4 rational coordinates"))?;
        Ok(CycNum::new(c))
    }
}
