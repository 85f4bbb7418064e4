//! Truncated formal power series.
//!
//! A `Series<C>` tracks coefficients of `var^i` for `i < trunc`, exactly.
//! Binary operations take the minimum of the two truncation orders.
//! Two-variable series are nested one-variable series (outer `t2`, inner
//! `t3`), which the generic `Ring` implementation makes transparent.

use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::{PolyRing, Var};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::ring::Ring;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SeriesVar {
    T,
    T2,
    T3,
    S2,
    S3,
}

impl fmt::Display for SeriesVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesVar::T => "t",
            SeriesVar::T2 => "t2",
            SeriesVar::T3 => "t3",
            SeriesVar::S2 => "s2",
            SeriesVar::S3 => "s3",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct Series<C: Ring> {
    var: SeriesVar,
    trunc: usize,
    /// `coeffs[i]` is the coefficient of `var^i`; trailing zeros trimmed.
    coeffs: Vec<C>,
    /// Zero of the coefficient ring, kept for context.
    proto: C,
}

impl<C: Ring> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.var != other.var {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| self.coeff(i) == other.coeff(i))
    }
}

impl<C: Ring> Series<C> {
    pub fn zero(var: SeriesVar, trunc: usize, proto: C) -> Self {
        assert!(trunc >= 1, "truncation order must be at least 1");
        Series {
            var,
            trunc,
            coeffs: vec![],
            proto: proto.zero_like(),
        }
    }

    pub fn from_coeffs(var: SeriesVar, trunc: usize, proto: C, coeffs: Vec<C>) -> Self {
        let mut s = Series {
            var,
            trunc,
            coeffs,
            proto: proto.zero_like(),
        };
        s.trim();
        s
    }

    pub fn from_coeff_fn(var: SeriesVar, trunc: usize, proto: C, f: impl Fn(usize) -> C) -> Self {
        Series::from_coeffs(var, trunc, proto, (0..trunc).map(f).collect())
    }

    pub fn constant(var: SeriesVar, trunc: usize, c: C) -> Self {
        let proto = c.zero_like();
        Series::from_coeffs(var, trunc, proto, vec![c])
    }

    pub fn one(var: SeriesVar, trunc: usize, proto: C) -> Self {
        Series::constant(var, trunc, proto.one_like())
    }

    /// The series `c * var`.
    pub fn linear(var: SeriesVar, trunc: usize, c: C) -> Self {
        let proto = c.zero_like();
        Series::from_coeffs(var, trunc, proto.clone(), vec![proto, c])
    }

    fn trim(&mut self) {
        if self.coeffs.len() > self.trunc {
            self.coeffs.truncate(self.trunc);
        }
        while self.coeffs.last().is_some_and(Ring::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> SeriesVar {
        self.var
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn proto(&self) -> &C {
        &self.proto
    }

    /// Coefficient of `var^i`. Panics when `i` is at or beyond the
    /// truncation order, where the coefficient is unknown.
    pub fn coeff(&self, i: usize) -> C {
        assert!(
            i < self.trunc,
            "coefficient {i} requested beyond truncation order {}",
            self.trunc
        );
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.proto.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_var(&self, other: &Self) {
        assert_eq!(
            self.var, other.var,
            "series variable mismatch: {} vs {}",
            self.var, other.var
        );
    }

    pub fn truncate(&self, trunc: usize) -> Self {
        assert!(trunc >= 1);
        let mut s = self.clone();
        s.trunc = s.trunc.min(trunc);
        s.trim();
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_var(other);
        let trunc = self.trunc.min(other.trunc);
        let n = self.coeffs.len().max(other.coeffs.len()).min(trunc);
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i);
                let b = other.coeffs.get(i);
                match (a, b) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => self.proto.clone(),
                }
            })
            .collect();
        Series::from_coeffs(self.var, trunc, self.proto.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            var: self.var,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
            proto: self.proto.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_var(other);
        let trunc = self.trunc.min(other.trunc);
        let n = (self.coeffs.len() + other.coeffs.len())
            .saturating_sub(1)
            .min(trunc);
        let mut coeffs = vec![self.proto.clone(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= trunc {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Series::from_coeffs(self.var, trunc, self.proto.clone(), coeffs)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Series {
            var: self.var,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
            proto: self.proto.clone(),
        }
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        Series::from_coeffs(
            self.var,
            self.trunc,
            self.proto.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Multiply by `var^k` (exponents past the truncation order fall away).
    pub fn mul_var_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![self.proto.clone(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Series::from_coeffs(self.var, self.trunc, self.proto.clone(), coeffs)
    }

    /// The stored coefficient prefix (trailing zeros trimmed).
    pub fn known_coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn map_coeffs<D: Ring>(&self, proto: D, mut f: impl FnMut(&C) -> D) -> Series<D> {
        Series::from_coeffs(
            self.var,
            self.trunc,
            proto,
            self.coeffs.iter().map(|c| f(c)).collect(),
        )
    }

    /// d/dvar; one order of information is lost.
    pub fn derivative(&self) -> Self {
        assert!(self.trunc >= 2, "cannot differentiate below order 2");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&Rat::from_int(i as i64)))
            .collect();
        Series::from_coeffs(self.var, self.trunc - 1, self.proto.clone(), coeffs)
    }

    fn constant_term(&self) -> C {
        self.coeffs
            .get(0)
            .cloned()
            .unwrap_or_else(|| self.proto.clone())
    }

    fn describe_constant(&self) -> String {
        format!("{:?}", self.constant_term())
    }

    /// Geometric-style accumulation `sum_n f(n) * u^n`, valid because `u`
    /// has topologically nilpotent constant term so the loop terminates.
    fn accumulate_powers(u: &Self, mut f: impl FnMut(usize, &Self, &mut Self)) -> Self {
        let mut acc = Series::zero(u.var, u.trunc, u.proto.clone());
        let mut power = Series::one(u.var, u.trunc, u.proto.clone());
        let mut n = 0usize;
        loop {
            f(n, &power, &mut acc);
            power = power.mul(u);
            n += 1;
            if power.is_zero() {
                break;
            }
            assert!(
                n <= 4 * (u.trunc + 64),
                "series power loop failed to terminate"
            );
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv_unit().ok_or_else(|| Error::SeriesPrecondition {
            op: "reciprocal",
            requirement: "a unit constant term",
            constant_term: self.describe_constant(),
        })?;
        // 1/s = c0^{-1} * sum (-w)^n with w = s/c0 - 1.
        let w = self.mul_coeff(&c0_inv).sub(&self.one_like()).neg();
        debug_assert!(w.constant_term().is_zero());
        let geom = Series::accumulate_powers(&w, |_, p, acc| *acc = acc.add(p));
        Ok(geom.mul_coeff(&c0_inv))
    }

    /// `exp(s)`; the constant term must be (topologically) nilpotent.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().topo_nilpotent() {
            return Err(Error::SeriesPrecondition {
                op: "exp",
                requirement: "zero constant term",
                constant_term: self.describe_constant(),
            });
        }
        let mut nfac = Rat::one();
        Ok(Series::accumulate_powers(self, |n, p, acc| {
            if n > 0 {
                nfac = &nfac * &Rat::from_int(n as i64);
            }
            *acc = acc.add(&p.scale(&nfac.recip().unwrap()));
        }))
    }

    /// `log(s)`; requires `s - 1` to be (topologically) nilpotent.
    pub fn log(&self) -> Result<Self> {
        let u = self.sub(&self.one_like());
        if !u.constant_term().topo_nilpotent() {
            return Err(Error::SeriesPrecondition {
                op: "log",
                requirement: "unit constant term 1",
                constant_term: self.describe_constant(),
            });
        }
        // log(1+u) = sum_{n>=1} (-1)^{n+1} u^n / n
        let mut acc = Series::zero(self.var, u.trunc, self.proto.clone());
        let mut power = u.clone();
        let mut n = 1usize;
        while !power.is_zero() {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Rat::new(sign, n as i64)));
            power = power.mul(&u);
            n += 1;
            assert!(
                n <= 4 * (u.trunc + 64),
                "series log loop failed to terminate"
            );
        }
        Ok(acc)
    }

    /// `s^e` for rational `e`, as `exp(e*log(s))`.
    pub fn pow_rat(&self, e: &Rat) -> Result<Self> {
        self.log()?.scale(e).exp()
    }

    fn one_like(&self) -> Self {
        Series::one(self.var, self.trunc, self.proto.clone())
    }
}

impl<C: Ring> Ring for Series<C> {
    fn zero_like(&self) -> Self {
        Series::zero(self.var, self.trunc, self.proto.clone())
    }

    fn one_like(&self) -> Self {
        Series::one(self.var, self.trunc, self.proto.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        Series::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Series::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Series::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        Series::neg(self)
    }

    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }

    fn scale(&self, r: &Rat) -> Self {
        Series::scale(self, r)
    }

    fn inv_unit(&self) -> Option<Self> {
        self.reciprocal().ok()
    }

    fn topo_nilpotent(&self) -> bool {
        self.constant_term().topo_nilpotent()
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            if i == 0 {
                write!(f, "({c})")?;
            } else if i == 1 {
                write!(f, "({c})*{}", self.var)?;
            } else {
                write!(f, "({c})*{}^{i}", self.var)?;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.trunc)
    }
}

/// Two-variable series: outer `t2` (or `s2`), inner `t3` (or `s3`).
pub type Series2<C> = Series<Series<C>>;

/// Zero bivariate series with outer/inner variables and truncations.
pub fn series2_zero<C: Ring>(
    outer: SeriesVar,
    inner: SeriesVar,
    trunc_outer: usize,
    trunc_inner: usize,
    proto: C,
) -> Series2<C> {
    let inner_proto = Series::zero(inner, trunc_inner, proto);
    Series::zero(outer, trunc_outer, inner_proto)
}

pub fn series2_one<C: Ring>(
    outer: SeriesVar,
    inner: SeriesVar,
    trunc_outer: usize,
    trunc_inner: usize,
    proto: C,
) -> Series2<C> {
    let inner_proto = Series::zero(inner, trunc_inner, proto);
    Series::one(outer, trunc_outer, inner_proto)
}

/// Coefficient of `outer^i * inner^j`.
pub fn series2_coeff<C: Ring>(s: &Series2<C>, i: usize, j: usize) -> C {
    s.coeff(i).coeff(j)
}

pub fn series2_from_fn<C: Ring>(
    outer: SeriesVar,
    inner: SeriesVar,
    trunc_outer: usize,
    trunc_inner: usize,
    proto: C,
    f: impl Fn(usize, usize) -> C,
) -> Series2<C> {
    let inner_proto = Series::zero(inner, trunc_inner, proto.clone());
    Series::from_coeff_fn(outer, trunc_outer, inner_proto.clone(), |i| {
        Series::from_coeff_fn(inner, trunc_inner, proto.clone(), |j| f(i, j))
    })
}

/// `exp(a*outer + b*inner)` built directly from the closed form
/// `coeff(m, n) = a^m b^n / (m! n!)`.
pub fn exp_linear2<C: Ring>(
    outer: SeriesVar,
    inner: SeriesVar,
    trunc_outer: usize,
    trunc_inner: usize,
    a: &C,
    b: &C,
) -> Series2<C> {
    let mut a_pows = Vec::with_capacity(trunc_outer);
    let mut b_pows = Vec::with_capacity(trunc_inner);
    a_pows.push(a.one_like());
    for m in 1..trunc_outer {
        let next = a_pows[m - 1].mul(a);
        a_pows.push(next);
    }
    b_pows.push(b.one_like());
    for n in 1..trunc_inner {
        let next = b_pows[n - 1].mul(b);
        b_pows.push(next);
    }
    series2_from_fn(
        outer,
        inner,
        trunc_outer,
        trunc_inner,
        a.zero_like(),
        |m, n| {
            let fac = &Rat::factorial(m as u32) * &Rat::factorial(n as u32);
            a_pows[m].mul(&b_pows[n]).scale(&fac.recip().unwrap())
        },
    )
}

/// Differentiate each coefficient with respect to the inner variable.
pub fn series2_d_inner<C: Ring>(s: &Series2<C>) -> Series2<C> {
    let proto = s.proto().derivative();
    s.map_coeffs(proto, |c| c.derivative())
}

/// Multiply every base coefficient of a bivariate series by `c`.
pub fn series2_mul_scalar<C: Ring>(s: &Series2<C>, c: &C) -> Series2<C> {
    let proto = s.proto().clone();
    s.map_coeffs(proto, |inner| inner.mul_coeff(c))
}

/// The series `sum_{n>=1} (-t)^{n-1} p_n t^{n-1}`-style bookkeeping for the
/// power sums of `(0, b_2, ..., b_N, 0, ...)`: returns
/// `S(t) = (sum_i i b_i t^{i-1}) / (sum_i b_i t^i)` with `b_0 = 1`, so that
/// `(-1)^{n-1}` times the coefficient of `t^{n-1}` is the Newton power sum
/// `p_n`. (`p_0 = N` is not part of the series.)
pub fn power_sum_series(n: u8, order: usize) -> Result<Series<Poly<Rat>>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "rank must be at least 2, got {n}"
        )));
    }
    if order < 1 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    let ring = PolyRing::rank(n);
    let proto = Poly::<Rat>::zero(ring.clone());
    let mut numer = Series::zero(SeriesVar::T, order, proto.clone());
    let mut denom = Series::zero(SeriesVar::T, order, proto.clone());
    denom = denom.add(&Series::constant(
        SeriesVar::T,
        order,
        Poly::one(ring.clone()),
    ));
    for i in 2..=n {
        let bi = Poly::<Rat>::var(ring.clone(), Var::Beta(i))?;
        let i_us = i as usize;
        if i_us - 1 < order {
            let mut term = vec![proto.clone(); i_us - 1];
            term.push(bi.scale(&Rat::from_int(i as i64)));
            numer = numer.add(&Series::from_coeffs(
                SeriesVar::T,
                order,
                proto.clone(),
                term,
            ));
        }
        if i_us < order {
            let mut term = vec![proto.clone(); i_us];
            term.push(bi);
            denom = denom.add(&Series::from_coeffs(
                SeriesVar::T,
                order,
                proto.clone(),
                term,
            ));
        }
    }
    Ok(numer.mul(&denom.reciprocal()?))
}

/// Extract the Newton power sum `p_m` (for `m >= 1`) from
/// [`power_sum_series`] output.
pub fn power_sum(n: u8, m: usize) -> Result<Poly<Rat>> {
    if m == 0 {
        return Ok(Poly::constant(PolyRing::rank(n), Rat::from_int(n as i64)));
    }
    let s = power_sum_series(n, m + 1)?;
    let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
    Ok(s.coeff(m - 1).scale(&Rat::from_int(sign)))
}
