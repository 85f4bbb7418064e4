//! The eigenvalue lattice, its root-of-unity action, deformed eigenvalue
//! modules, and the assembly of the quotient-dimension census against the
//! eigenvalue count.

use std::collections::HashSet;

use crate::cyc::CycNum;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, standard_monomials, BuchbergerOpts, Census};
use crate::monomial::{PolyRing, Var};
use crate::mumford::ideal_generators;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::ring::Ring;
use crate::series::{exp_linear2, series2_d_inner, Series, Series2, SeriesVar};

/// The lattice diamond `{(a, b) : |a| + |b| <= 2g - 2, a = b mod 2}`,
/// sorted.
pub fn c_lattice(g: u32) -> Vec<(i64, i64)> {
    assert!(g >= 1, "genus must be at least 1");
    let r = 2 * g as i64 - 2;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -(r - a.abs())..=(r - a.abs()) {
            if (a - b) % 2 == 0 {
                out.push((a, b));
            }
        }
    }
    out.sort_unstable();
    out
}

/// A simultaneous eigenvalue 4-tuple (components for `a2, a3, b2, b3`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EigenTuple {
    components: [CycNum; 4],
}

impl EigenTuple {
    /// `(sqrt3 z^k a, sqrt(-3) z^{2k} b, 3 z^{2k}, 0)` with `z = zeta_3`.
    pub fn from_lattice(k: u8, a: i64, b: i64) -> Self {
        let zk = CycNum::zeta3_pow(k as i64);
        let z2k = CycNum::zeta3_pow(2 * k as i64);
        EigenTuple {
            components: [
                CycNum::sqrt3().mul(&zk).scale(&Rat::from_int(a)),
                CycNum::sqrtm3().mul(&z2k).scale(&Rat::from_int(b)),
                z2k.scale(&Rat::from_int(3)),
                CycNum::zero(),
            ],
        }
    }

    pub fn new(components: [CycNum; 4]) -> Self {
        EigenTuple { components }
    }

    pub fn components(&self) -> &[CycNum; 4] {
        &self.components
    }
}

/// Exact enumeration of the eigenvalue set for genus `g` and admissible
/// degree `d` (coprime to 3). Its size is verified structurally.
pub fn eigenvalue_set(g: u32, d: i64) -> Result<Vec<EigenTuple>> {
    if g < 1 {
        return Err(Error::InvalidParameter("genus must be at least 1".into()));
    }
    if d.rem_euclid(3) == 0 {
        return Err(Error::InvalidParameter(format!(
            "degree {d} is not admissible: it must be coprime to 3"
        )));
    }
    let lattice = c_lattice(g);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(3 * lattice.len());
    for k in 0..3u8 {
        for &(a, b) in &lattice {
            let t = EigenTuple::from_lattice(k, a, b);
            if !seen.insert(t.clone()) {
                return Err(Error::InternalConsistency(format!(
                    "duplicate eigenvalue tuple at k={k}, (a,b)=({a},{b})"
                )));
            }
            out.push(t);
        }
    }
    Ok(out)
}

/// Componentwise scaling by powers of a 2N-th root of unity:
/// `(z l1, z^2 l2, z^2 l3, z^3 l4)` at N = 3, where `z = zeta_6^root_index`.
pub fn evaction(t: &EigenTuple, n: u8, root_index: u32) -> Result<EigenTuple> {
    if n != 3 {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue action implemented for N = 3 only, got {n}"
        )));
    }
    let z = CycNum::zeta6_pow(root_index as i64);
    let z2 = z.pow_u(2);
    let z3 = z.pow_u(3);
    let c = &t.components;
    Ok(EigenTuple {
        components: [c[0].mul(&z), c[1].mul(&z2), c[2].mul(&z2), c[3].mul(&z3)],
    })
}

/// Ring of coefficients of deformed relations: polynomials in `t2, t3`
/// over the cyclotomic field.
fn tt_poly(c: CycNum) -> Poly<CycNum> {
    Poly::constant(PolyRing::deformation(), c)
}

/// The rank-one deformed eigenvalue module attached to `(k, a, b)`: the
/// four relations pin the generators to
/// `a2 = sqrt3 z^k a + z^{2k} t2`, `a3 = sqrt(-3) z^{2k} b - 2 z^k t3`,
/// `b2 = 3 z^{2k}`, `b3 = 0`.
#[derive(Clone, Debug)]
pub struct DeformedModule {
    pub k: u8,
    pub a: i64,
    pub b: i64,
}

impl DeformedModule {
    pub fn new(k: u8, a: i64, b: i64) -> Result<Self> {
        if k > 2 {
            return Err(Error::InvalidParameter(format!(
                "k must lie in {{0, 1, 2}}, got {k}"
            )));
        }
        Ok(DeformedModule { k, a, b })
    }

    /// Values assigned to `(a2, a3, b2, b3)`, as polynomials in `t2, t3`.
    pub fn relations(&self) -> [Poly<CycNum>; 4] {
        let ring = PolyRing::deformation();
        let zk = CycNum::zeta3_pow(self.k as i64);
        let z2k = CycNum::zeta3_pow(2 * self.k as i64);
        let t2 = Poly::<CycNum>::var(ring.clone(), Var::T2).unwrap();
        let t3 = Poly::<CycNum>::var(ring.clone(), Var::T3).unwrap();
        let a2 = tt_poly(CycNum::sqrt3().mul(&zk).scale(&Rat::from_int(self.a)))
            .add(&t2.mul_scalar(&z2k));
        let a3 = tt_poly(CycNum::sqrtm3().mul(&z2k).scale(&Rat::from_int(self.b)))
            .sub(&t3.mul_scalar(&zk.scale(&Rat::from_int(2))));
        let b2 = tt_poly(z2k.scale(&Rat::from_int(3)));
        let b3 = Poly::zero(ring);
        [a2, a3, b2, b3]
    }

    /// Substitute the relations into a polynomial in `a2, a3, b2, b3`.
    pub fn eval(&self, p: &Poly<Rat>) -> Result<Poly<CycNum>> {
        let expected = PolyRing::rank(3);
        if p.ring().vars() != expected.vars() {
            return Err(Error::RingMismatch {
                left: p.ring().to_string(),
                right: expected.to_string(),
            });
        }
        let rel = self.relations();
        let assign = rel.to_vec();
        let proto = Poly::<CycNum>::zero(PolyRing::deformation());
        Ok(p.eval_map(|r| tt_poly(CycNum::from_rat(r.clone())), &assign, &proto))
    }

    /// Setting `t2 = t3 = 0` recovers the eigenvalue tuple.
    pub fn at_zero(&self) -> EigenTuple {
        EigenTuple::from_lattice(self.k, self.a, self.b)
    }

    /// The epsilon operator acts on this module by `zeta_3^{b + d k}`.
    pub fn epsilon_eigenvalue(&self, d: i64) -> CycNum {
        CycNum::zeta3_pow(self.b + d * self.k as i64)
    }

    /// Formal check that `exp((sqrt3 a + t2) s2 + (sqrt(-3) b - 2 t3) s3)`
    /// is annihilated by
    /// `(d/ds2 - (sqrt3 a + t2)) (d/ds3 - (sqrt(-3) b - 2 t3))`,
    /// expanded to the stated series order in `s2, s3`.
    pub fn annihilator_check(&self, order: usize) -> Result<bool> {
        if order < 2 {
            return Err(Error::InvalidParameter("order must be at least 2".into()));
        }
        let ring = PolyRing::deformation();
        let t2 = Poly::<CycNum>::var(ring.clone(), Var::T2).unwrap();
        let t3 = Poly::<CycNum>::var(ring.clone(), Var::T3).unwrap();
        let c2 = tt_poly(CycNum::sqrt3().scale(&Rat::from_int(self.a))).add(&t2);
        let c3 = tt_poly(CycNum::sqrtm3().scale(&Rat::from_int(self.b)))
            .sub(&t3.scale(&Rat::from_int(2)));

        let e: Series2<Poly<CycNum>> =
            exp_linear2(SeriesVar::S2, SeriesVar::S3, order, order, &c2, &c3);

        let const2 = |p: &Poly<CycNum>, s: &Series2<Poly<CycNum>>| {
            Series::constant(
                SeriesVar::S2,
                s.trunc(),
                Series::constant(SeriesVar::S3, s.proto().trunc(), p.clone()),
            )
        };

        // innermost operator first: d/ds3 - c3
        let step1 = series2_d_inner(&e).sub(&e.mul(&const2(&c3, &e)));
        // then d/ds2 - c2
        let step2 = step1.derivative().sub(&step1.mul(&const2(&c2, &step1)));
        Ok(step2.is_zero())
    }
}

/// Outcome of the dimension census for one genus.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub g: u32,
    pub window_used: u32,
    pub census: u64,
    pub expected: u64,
    pub eigenvalue_count: u64,
    /// `3 * census`, the epsilon-extended upper bound.
    pub bound: u64,
    pub matched: bool,
}

/// Run the standard-monomial census of the relation ideal, escalating the
/// generator window until the count stabilizes, and compare `3 * census`
/// with the eigenvalue count.
pub fn simple_type_census(g: u32, window_start: u32) -> Result<CensusReport> {
    let expected = ((2 * g - 1) * (2 * g - 1)) as u64;
    let eigenvalue_count = eigenvalue_set(g, 1)?.len() as u64;
    let mut window = window_start;
    let mut prev: Option<u64> = None;
    loop {
        let gens = ideal_generators(g, window)?;
        let gb = buchberger(&gens, BuchbergerOpts::default())?;
        let count = match standard_monomials(gb.lt_ideal()) {
            Census::Finite { count, .. } => Some(count),
            Census::Infinite { .. } => None,
        };
        if let Some(count) = count {
            if count < expected {
                // would contradict the eigenvalue lower bound
                return Err(Error::InternalConsistency(format!(
                    "census {count} at g = {g} fell below the eigenvalue bound {expected}"
                )));
            }
            if prev == Some(count) {
                return Ok(CensusReport {
                    g,
                    window_used: window,
                    census: count,
                    expected,
                    eigenvalue_count,
                    bound: 3 * count,
                    matched: 3 * count == eigenvalue_count,
                });
            }
            prev = Some(count);
        } else {
            prev = None;
        }
        window += 1;
        if window > window_start + 12 {
            return Err(Error::WindowExhausted { window });
        }
    }
}
