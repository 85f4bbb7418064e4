//! Buchberger-style Groebner bases in the weighted graded-revlex order,
//! leading-term ideals, standard-monomial censuses, and the lattice-count
//! function behind the quotient dimension bound.
//!
//! The coefficient field is a type parameter, but everything here is
//! exercised over `Q`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, PolyRing, Var};
use crate::poly::{Poly, ScalarRing};

/// A monomial ideal, kept as its unique minimal generating set.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialIdeal {
    ring: Arc<PolyRing>,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(ring: Arc<PolyRing>, gens: Vec<Monomial>) -> Self {
        let mut minimal: Vec<Monomial> = Vec::new();
        let mut sorted = gens;
        // Ascending order makes each kept generator minimal so far.
        sorted.sort_by(|a, b| ring.cmp_monomials(a, b));
        sorted.dedup();
        for m in sorted {
            if !minimal.iter().any(|g| g.divides(&m)) {
                minimal.push(m);
            }
        }
        MonomialIdeal {
            ring,
            gens: minimal,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }
}

/// Reduced Groebner basis plus its leading-term data.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<C: ScalarRing> {
    ring: Arc<PolyRing>,
    basis: Vec<Poly<C>>,
    lt_ideal: MonomialIdeal,
}

impl<C: ScalarRing> GroebnerBasis<C> {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn basis(&self) -> &[Poly<C>] {
        &self.basis
    }

    pub fn lt_ideal(&self) -> &MonomialIdeal {
        &self.lt_ideal
    }

    pub fn reduce(&self, p: &Poly<C>) -> Poly<C> {
        reduce(p, &self.basis)
    }

    pub fn contains(&self, p: &Poly<C>) -> bool {
        self.reduce(p).is_zero()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuchbergerOpts {
    /// Abort with a diagnostic if an S-pair's lcm exceeds this weighted
    /// degree. `None` means no cap.
    pub degree_cap: Option<u32>,
}

/// Full normal form of `p` against `basis`: no monomial of the result is
/// divisible by any basis leading monomial, and `p - result` lies in the
/// ideal generated by `basis`.
pub fn reduce<C: ScalarRing>(p: &Poly<C>, basis: &[Poly<C>]) -> Poly<C> {
    let reducers: Vec<(&Monomial, C, &Poly<C>)> = basis
        .iter()
        .filter_map(|g| {
            g.leading()
                .map(|(m, c)| (m, c.inv_unit().expect("field coefficient"), g))
        })
        .collect();
    let mut work = p.clone();
    let mut remainder: Vec<(Monomial, C)> = Vec::new();
    'outer: while let Some((lm, lc)) = work.leading() {
        for (gm, gc_inv, g) in &reducers {
            if let Some(q) = lm.try_div(gm) {
                let factor = lc.mul(gc_inv);
                work = work.sub(&g.mul_term(&q, &factor));
                continue 'outer;
            }
        }
        // Leading term irreducible: move it to the remainder.
        remainder.push((lm.clone(), lc.clone()));
        let lt = Poly::term(p.ring().clone(), lm.clone(), lc.clone());
        work = work.sub(&lt);
    }
    Poly::from_terms(p.ring().clone(), remainder)
}

fn s_poly<C: ScalarRing>(f: &Poly<C>, g: &Poly<C>) -> Poly<C> {
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let qf = l.try_div(fm).unwrap();
    let qg = l.try_div(gm).unwrap();
    let f_scaled = f.mul_term(&qf, &fc.inv_unit().expect("field coefficient"));
    let g_scaled = g.mul_term(&qg, &gc.inv_unit().expect("field coefficient"));
    f_scaled.sub(&g_scaled)
}

/// Reduced Groebner basis of the ideal generated by `gens`.
///
/// Deterministic: the input is canonically sorted first and the reduced
/// basis is unique for the fixed order, so equal inputs produce
/// bit-identical output.
pub fn buchberger<C: ScalarRing>(
    gens: &[Poly<C>],
    opts: BuchbergerOpts,
) -> Result<GroebnerBasis<C>> {
    let first = gens
        .iter()
        .find(|p| !p.is_zero())
        .ok_or_else(|| Error::InvalidParameter("no nonzero generators".into()))?;
    let ring = first.ring().clone();

    let mut basis: Vec<Poly<C>> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            p.assert_same_ring(first);
            p.monic().expect("field coefficient")
        })
        .collect();
    basis.sort_by(|a, b| {
        let (am, _) = a.leading().unwrap();
        let (bm, _) = b.leading().unwrap();
        ring.cmp_monomials(am, bm)
            .then_with(|| a.num_terms().cmp(&b.num_terms()))
    });
    basis.dedup();

    // Pair queue ordered by weighted degree of the lcm (normal selection).
    let mut pairs: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    fn push_pairs<C: ScalarRing>(
        ring: &PolyRing,
        pairs: &mut BinaryHeap<Reverse<(u32, usize, usize)>>,
        basis: &[Poly<C>],
        k: usize,
    ) {
        let (km, _) = basis[k].leading().unwrap();
        for (i, b) in basis.iter().enumerate().take(k) {
            let (im, _) = b.leading().unwrap();
            let deg = ring.degree(&im.lcm(km));
            pairs.push(Reverse((deg, i, k)));
        }
    }
    for k in 0..basis.len() {
        push_pairs(&ring, &mut pairs, &basis, k);
    }

    let mut processed: Vec<(usize, usize)> = Vec::new();
    while let Some(Reverse((deg, i, j))) = pairs.pop() {
        if let Some(cap) = opts.degree_cap {
            if deg > cap {
                return Err(Error::DegreeCapExceeded { cap, reached: deg });
            }
        }
        processed.push((i, j));
        let (im, _) = basis[i].leading().unwrap();
        let (jm, _) = basis[j].leading().unwrap();
        // Buchberger's first criterion.
        if im.coprime(jm) {
            continue;
        }
        // Chain criterion: skip when some k divides the lcm and both
        // sub-pairs were already handled.
        let l = im.lcm(jm);
        let chained = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (km, _) = basis[k].leading().unwrap();
            if !km.divides(&l) {
                return false;
            }
            let pi = (i.min(k), i.max(k));
            let pj = (j.min(k), j.max(k));
            processed.contains(&pi) && processed.contains(&pj)
        });
        if chained {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            basis.push(r.monic().expect("field coefficient"));
            push_pairs(&ring, &mut pairs, &basis, basis.len() - 1);
        }
    }

    // Minimalize: drop generators whose LT is divisible by another LT.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (im, _) = basis[i].leading().unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (jm, _) = basis[j].leading().unwrap();
            if jm.divides(im) && (jm != im || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Poly<C>> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();

    // Inter-reduce tails for the unique reduced basis.
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<Poly<C>> = minimal
                .iter()
                .enumerate()
                .filter_map(|(j, p)| (j != i).then(|| p.clone()))
                .collect();
            let r = reduce(&minimal[i], &others)
                .monic()
                .expect("nonzero in reduced basis");
            if r != minimal[i] {
                minimal[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    minimal.sort_by(|a, b| {
        let (am, _) = a.leading().unwrap();
        let (bm, _) = b.leading().unwrap();
        ring.cmp_monomials(bm, am)
    });

    let lt_gens = minimal
        .iter()
        .map(|p| p.leading().unwrap().0.clone())
        .collect();
    Ok(GroebnerBasis {
        lt_ideal: MonomialIdeal::new(ring.clone(), lt_gens),
        ring,
        basis: minimal,
    })
}

/// Result of a standard-monomial census.
#[derive(Clone, Debug, PartialEq)]
pub enum Census {
    Finite {
        /// Ascending in the monomial order.
        monomials: Vec<Monomial>,
        count: u64,
    },
    /// The complement is infinite; `witness` is a variable none of whose
    /// pure powers lies in the ideal.
    Infinite { witness: Var },
}

impl Census {
    pub fn count(&self) -> Option<u64> {
        match self {
            Census::Finite { count, .. } => Some(*count),
            Census::Infinite { .. } => None,
        }
    }
}

/// Monomials outside the leading-term ideal (a vector-space basis of the
/// quotient).
pub fn standard_monomials(lt: &MonomialIdeal) -> Census {
    let ring = lt.ring().clone();
    let nv = ring.nvars();
    let mut bounds = vec![0u32; nv];
    for (i, v) in ring.vars().iter().enumerate() {
        let bound = lt
            .gens()
            .iter()
            .filter(|g| (0..nv).all(|j| j == i || g.exp(j) == 0))
            .map(|g| g.exp(i))
            .min();
        match bound {
            Some(b) => bounds[i] = b,
            None => return Census::Infinite { witness: *v },
        }
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; nv];
    'enumerate: loop {
        let m = ring.monomial(&exps).unwrap();
        if !lt.contains(&m) {
            out.push(m);
        }
        // odometer over the box [0, bounds)
        let mut i = 0;
        loop {
            if i == nv {
                break 'enumerate;
            }
            exps[i] += 1;
            if exps[i] < bounds[i].max(1) {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
    out.sort_by(|a, b| ring.cmp_monomials(a, b));
    let count = out.len() as u64;
    Census::Finite {
        monomials: out,
        count,
    }
}

/// Per-generator divisibility report of `target` against the computed
/// leading-term ideal.
#[derive(Clone, Debug)]
pub struct ContainmentReport {
    pub results: Vec<(Monomial, bool)>,
    pub all_contained: bool,
}

pub fn lt_contains<C: ScalarRing>(
    gb: &GroebnerBasis<C>,
    target: &MonomialIdeal,
) -> ContainmentReport {
    let results: Vec<(Monomial, bool)> = target
        .gens()
        .iter()
        .map(|m| (m.clone(), gb.lt_ideal().contains(m)))
        .collect();
    let all_contained = results.iter().all(|(_, ok)| *ok);
    ContainmentReport {
        results,
        all_contained,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    ClosedForm,
    BruteForce,
}

/// `f(n) = #{(i, j) >= 0 : 2i + 3j < n}`, by the mod-6 closed form or by
/// enumeration.
pub fn lattice_count(n: u32, mode: CountMode) -> u64 {
    match mode {
        CountMode::BruteForce => {
            let mut count = 0;
            let mut j = 0;
            while 3 * j < n {
                // i ranges over 2i < n - 3j
                count += ((n - 3 * j - 1) / 2 + 1) as u64;
                j += 1;
            }
            count
        }
        CountMode::ClosedForm => {
            let r = n % 6;
            let base = match r {
                0 => 0,
                1 => 1,
                _ => (r - 1) as u64,
            };
            if n == r {
                return base;
            }
            let sq = (n as u64) * (n as u64) - (r as u64) * (r as u64);
            sq / 12 + 2 * (n as u64 / 6) + base
        }
    }
}

/// The closing display of the dimension count:
/// `f(4g-2) + f(4g-4) + f(4g-6) = (2g-1)^2`. Negative arguments count an
/// empty set and contribute 0 (only `g = 1` hits this).
pub fn lattice_sum_identity(g: u32) -> bool {
    assert!(g >= 1);
    let sum: u64 = [4 * g as i64 - 2, 4 * g as i64 - 4, 4 * g as i64 - 6]
        .iter()
        .filter(|&&n| n > 0)
        .map(|&n| lattice_count(n as u32, CountMode::BruteForce))
        .sum();
    sum == ((2 * g - 1) * (2 * g - 1)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn vp(ring: &Arc<PolyRing>, v: Var) -> Poly<Rat> {
        Poly::var(ring.clone(), v).unwrap()
    }

    #[test]
    fn reduce_basics() {
        let r = PolyRing::quotient3();
        let a2 = vp(&r, Var::Alpha(2));
        let a3 = vp(&r, Var::Alpha(3));
        let b2 = vp(&r, Var::Beta(2));
        assert!(reduce(&a2.pow(2), &[a2.clone()]).is_zero());
        assert_eq!(reduce(&a3.add(&b2), &[a3.clone()]), b2);
    }

    #[test]
    fn variables_are_their_own_basis() {
        let r = PolyRing::quotient3();
        let gens = vec![
            vp(&r, Var::Alpha(2)),
            vp(&r, Var::Alpha(3)),
            vp(&r, Var::Beta(2)),
        ];
        let gb = buchberger(&gens, BuchbergerOpts::default()).unwrap();
        assert_eq!(gb.basis().len(), 3);
        match standard_monomials(gb.lt_ideal()) {
            Census::Finite { monomials, count } => {
                assert_eq!(count, 1);
                assert!(monomials[0].is_one());
            }
            other => panic!("expected finite census, got {other:?}"),
        }
    }

    #[test]
    fn single_generator() {
        let r = PolyRing::small();
        let a2 = vp(&r, Var::Alpha(2));
        let a3 = vp(&r, Var::Alpha(3));
        let g = a2.pow(2).sub(&a3);
        let gb = buchberger(&[g.clone()], BuchbergerOpts::default()).unwrap();
        assert_eq!(gb.basis(), &[g]);
        assert_eq!(gb.lt_ideal().gens(), &[r.monomial(&[2, 0]).unwrap()]);
        assert_eq!(
            standard_monomials(gb.lt_ideal()),
            Census::Infinite {
                witness: Var::Alpha(3)
            }
        );
    }

    #[test]
    fn buchberger_criterion_holds() {
        // All S-polynomials of the reduced basis reduce to zero.
        let r = PolyRing::quotient3();
        let a2 = vp(&r, Var::Alpha(2));
        let a3 = vp(&r, Var::Alpha(3));
        let b2 = vp(&r, Var::Beta(2));
        let gens = vec![
            a2.pow(2).sub(&a3),
            a3.mul(&b2).sub(&a2.pow(3)),
            b2.pow(2).add(&a2.mul(&a3)),
        ];
        let gb = buchberger(&gens, BuchbergerOpts::default()).unwrap();
        for i in 0..gb.basis().len() {
            for j in (i + 1)..gb.basis().len() {
                let s = s_poly(&gb.basis()[i], &gb.basis()[j]);
                assert!(gb.reduce(&s).is_zero(), "S({i},{j}) does not reduce to 0");
            }
        }
        // Explicit ideal combinations reduce to zero.
        let comb = gens[0].mul(&a3).add(&gens[1].mul(&b2.pow(2).add(&a2)));
        assert!(gb.contains(&comb));
    }

    #[test]
    fn membership_negative() {
        let r = PolyRing::small();
        let a2 = vp(&r, Var::Alpha(2));
        let a3 = vp(&r, Var::Alpha(3));
        let gb = buchberger(&[a2.pow(2).sub(&a3)], BuchbergerOpts::default()).unwrap();
        assert!(!gb.contains(&a2));
        assert!(gb.contains(&a2.pow(4).sub(&a3.pow(2))));
    }

    #[test]
    fn deterministic_output() {
        let r = PolyRing::quotient3();
        let a2 = vp(&r, Var::Alpha(2));
        let a3 = vp(&r, Var::Alpha(3));
        let b2 = vp(&r, Var::Beta(2));
        let g1 = a2.pow(2).sub(&b2);
        let g2 = a3.add(&a2.mul(&b2));
        let gb1 = buchberger(&[g1.clone(), g2.clone()], BuchbergerOpts::default()).unwrap();
        let gb2 = buchberger(&[g2, g1], BuchbergerOpts::default()).unwrap();
        assert_eq!(gb1.basis(), gb2.basis());
    }

    #[test]
    fn degree_cap_aborts() {
        let r = PolyRing::small();
        let a2 = vp(&r, Var::Alpha(2));
        let a3 = vp(&r, Var::Alpha(3));
        let res = buchberger(
            &[a2.pow(5).sub(&a3), a3.pow(3).sub(&a2)],
            BuchbergerOpts {
                degree_cap: Some(3),
            },
        );
        assert!(matches!(res, Err(Error::DegreeCapExceeded { .. })));
    }

    #[test]
    fn lattice_count_examples() {
        assert_eq!(lattice_count(0, CountMode::ClosedForm), 0);
        assert_eq!(lattice_count(1, CountMode::ClosedForm), 1);
        for (n, expected) in [(2u32, 1u64), (3, 2), (4, 3), (5, 4), (6, 5)] {
            assert_eq!(lattice_count(n, CountMode::ClosedForm), expected);
            assert_eq!(lattice_count(n, CountMode::BruteForce), expected);
        }
        let g2 = lattice_count(6, CountMode::BruteForce)
            + lattice_count(4, CountMode::BruteForce)
            + lattice_count(2, CountMode::BruteForce);
        assert_eq!(g2, 9);
    }

    #[test]
    fn lattice_modes_agree_widely() {
        for n in 0..=200 {
            assert_eq!(
                lattice_count(n, CountMode::ClosedForm),
                lattice_count(n, CountMode::BruteForce),
                "disagreement at n = {n}"
            );
        }
    }
}
