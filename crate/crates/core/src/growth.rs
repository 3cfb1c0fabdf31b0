//! Exact growth series. For a right-angled Coxeter group with clique
//! polynomial `C(x) = Σ c_k x^k` (`c_k` = number of `k`-cliques),
//! `1 / W(t) = C(-t / (1 + t))`, so with `d = deg C`
//!
//! ```text
//! W(t) = (1 + t)^d / Σ_k c_k (-t)^k (1 + t)^(d - k)
//! ```
//!
//! BFS sphere counts are the ground truth this is tested against.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{PatternName, SimpleGraph, VertexSet};

/// Integer polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}")?,
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `1 + t`
    fn one_plus_t() -> Self {
        Self::from_i64(&[1, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content, leaving a positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.leading();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading();
            r = r.scale(&lb).sub(&b.scale(&lr).shift(dr - db));
        }
        r
    }

    /// Primitive gcd over `ℤ[t]` (positive leading coefficient).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Exact division; `None` if `divisor` does not divide `self` in `ℤ[t]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let db = divisor.degree()?;
        let lb = divisor.leading();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (quot, rem) = r.leading().div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&divisor.scale(&quot).shift(dr - db));
            q[dr - db] = quot;
        }
        Some(Self::new(q))
    }
}

/// `numerator / denominator` as a formal power series, kept in lowest terms
/// with a positive constant term in the denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    numerator: IntPolynomial,
    denominator: IntPolynomial,
}

impl RationalSeries {
    pub fn new(numerator: IntPolynomial, denominator: IntPolynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if numerator.is_zero() {
            (IntPolynomial::zero(), IntPolynomial::one())
        } else {
            (
                numerator.div_exact(&g).expect("gcd divides numerator"),
                denominator.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let c = num.content().gcd(&den.content());
        if !c.is_zero() && !c.is_one() {
            num = num.div_exact(&IntPolynomial::new(vec![c.clone()])).unwrap();
            den = den.div_exact(&IntPolynomial::new(vec![c])).unwrap();
        }
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Precondition("denominator vanishes at t = 0".into()));
        }
        if d0.is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalSeries { numerator: num, denominator: den })
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.denominator
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        RationalSeries::new(
            self.numerator.mul(&other.numerator),
            self.denominator.mul(&other.denominator),
        )
    }

    /// Taylor coefficients `0..=n`, from the recurrence given by the denominator.
    pub fn coefficients(&self, n: usize) -> Result<Vec<BigInt>> {
        let d = &self.denominator;
        let d0 = d.coeff(0);
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.numerator.coeff(k);
            for j in 1..=k.min(d.degree().unwrap_or(0)) {
                acc -= &d.coeffs[j] * &out[k - j];
            }
            let (q, r) = acc.div_rem(&d0);
            if !r.is_zero() {
                return Err(Error::NonIntegralSeries(k));
            }
            out.push(q);
        }
        Ok(out)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

/// Coefficient `k` counts the `k`-cliques; the empty clique gives the constant 1.
pub fn clique_polynomial(graph: &SimpleGraph) -> IntPolynomial {
    fn extend(graph: &SimpleGraph, size: usize, candidates: VertexSet, counts: &mut Vec<u64>) {
        if counts.len() <= size {
            counts.resize(size + 1, 0);
        }
        counts[size] += 1;
        for v in candidates.iter() {
            // only larger vertices, so each clique is counted once
            let later = VertexSet::from_bits(candidates.bits() & !((2u64 << v).wrapping_sub(1)));
            extend(graph, size + 1, later.intersection(graph.neighbours(v)), counts);
        }
    }
    let mut counts = Vec::new();
    extend(graph, 0, graph.all(), &mut counts);
    IntPolynomial::new(counts.into_iter().map(BigInt::from).collect())
}

pub fn growth_series(graph: &SimpleGraph) -> RationalSeries {
    let clique = clique_polynomial(graph);
    let d = clique.degree().unwrap_or(0);
    let one_plus_t = IntPolynomial::one_plus_t();
    let minus_t = IntPolynomial::from_i64(&[0, -1]);
    let mut denominator = IntPolynomial::zero();
    for (k, c) in clique.coeffs().iter().enumerate() {
        let term = minus_t.pow(k).mul(&one_plus_t.pow(d - k)).scale(c);
        denominator = denominator.add(&term);
    }
    RationalSeries::new(one_plus_t.pow(d), denominator).expect("clique denominator is 1 at t = 0")
}

pub fn series_coefficients(series: &RationalSeries, n: usize) -> Result<Vec<BigInt>> {
    series.coefficients(n)
}

/// Exponential-growth threshold on the rate estimate.
pub const EXPONENTIAL_THRESHOLD: f64 = 1.05;
pub const MIN_PROBE_DEPTH: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthKind {
    Polynomial,
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub kind: GrowthKind,
    pub probe_depth: usize,
    /// `c_n` at the probe depth, in decimal.
    pub coefficient: String,
    /// `c_n^(1/n)`, reported for reference only.
    pub nth_root: f64,
    /// `(c_2n / c_n)^(1/n)`, the value compared with the threshold.
    pub rate_estimate: f64,
    /// What the induced `L` / `L⁺` criterion predicts.
    pub graph_prediction: GrowthKind,
}

fn ln_big(x: &BigInt) -> f64 {
    match x.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let bits = x.bits();
            let shift = bits.saturating_sub(60);
            let top = (x >> shift).to_f64().unwrap_or(1.0);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Decides polynomial vs exponential growth from the exact coefficients.
///
/// The rate estimate `(c_2n / c_n)^(1/n)` divides out polynomial factors: a
/// sphere count `~ C n^k λ^n` gives `λ · 2^(k/n)`. Exponential iff the estimate
/// exceeds [`EXPONENTIAL_THRESHOLD`]. A disagreement with the graph criterion
/// is returned as an error.
pub fn growth_type(graph: &SimpleGraph, n: usize) -> Result<GrowthReport> {
    if n < MIN_PROBE_DEPTH {
        return Err(Error::Precondition(format!("probe depth must be at least {MIN_PROBE_DEPTH}")));
    }
    let coeffs = growth_series(graph).coefficients(2 * n)?;
    let (cn, c2n) = (&coeffs[n], &coeffs[2 * n]);
    let (nth_root, rate_estimate) = if cn.is_zero() {
        (0.0, 0.0)
    } else {
        let ln_cn = ln_big(cn);
        let rate = if c2n.is_zero() { 0.0 } else { ((ln_big(c2n) - ln_cn) / n as f64).exp() };
        ((ln_cn / n as f64).exp(), rate)
    };
    let kind = if rate_estimate > EXPONENTIAL_THRESHOLD {
        GrowthKind::Exponential
    } else {
        GrowthKind::Polynomial
    };
    let graph_prediction = if graph.find_induced(PatternName::L).is_some() || graph.find_induced(PatternName::LPlus).is_some() {
        GrowthKind::Exponential
    } else {
        GrowthKind::Polynomial
    };
    if kind != graph_prediction {
        return Err(Error::GrowthDisagreement(format!(
            "estimate {rate_estimate:.4} at n = {n} says {kind:?}, graph says {graph_prediction:?}"
        )));
    }
    Ok(GrowthReport {
        kind,
        probe_depth: n,
        coefficient: cn.to_string(),
        nth_root,
        rate_estimate,
        graph_prediction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn clique_polynomial_examples() {
        assert_eq!(clique_polynomial(&corpus::d_infinity()), IntPolynomial::from_i64(&[1, 2]));
        assert_eq!(clique_polynomial(&corpus::k23()), IntPolynomial::from_i64(&[1, 5, 6]));
        assert_eq!(clique_polynomial(&corpus::complete(3)), IntPolynomial::from_i64(&[1, 3, 3, 1]));
    }

    #[test]
    fn growth_series_examples() {
        let z2 = SimpleGraph::new::<&str>(&["v"], &[]).unwrap();
        let s = growth_series(&z2);
        assert_eq!((s.numerator(), s.denominator()), (&IntPolynomial::from_i64(&[1, 1]), &IntPolynomial::one()));
        let s = growth_series(&corpus::d_infinity());
        assert_eq!(s.numerator(), &IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(s.denominator(), &IntPolynomial::from_i64(&[1, -1]));
        let s = growth_series(&corpus::k23());
        assert_eq!(s.numerator(), &IntPolynomial::from_i64(&[1, 2, 1]));
        assert_eq!(s.denominator(), &IntPolynomial::from_i64(&[1, -3, 2]));
    }

    #[test]
    fn coefficient_examples() {
        let s = growth_series(&corpus::d_infinity());
        assert_eq!(s.coefficients(4).unwrap(), ints(&[1, 2, 2, 2, 2]));
        let p = RationalSeries::new(IntPolynomial::from_i64(&[1, 1]), IntPolynomial::one()).unwrap();
        assert_eq!(p.coefficients(3).unwrap(), ints(&[1, 1, 0, 0]));
        assert_eq!(growth_series(&corpus::k23()).coefficients(2).unwrap(), ints(&[1, 5, 14]));
        let c4 = growth_series(&corpus::cycle(4)).coefficients(3).unwrap();
        assert_eq!(c4, ints(&[1, 4, 8, 12]));
    }

    #[test]
    fn lowest_terms_normalization() {
        // (2 - 2t^2) / (2t - 2) = -(1 + t)
        let s = RationalSeries::new(IntPolynomial::from_i64(&[2, 0, -2]), IntPolynomial::from_i64(&[-2, 2])).unwrap();
        assert_eq!(s.numerator(), &IntPolynomial::from_i64(&[-1, -1]));
        assert_eq!(s.denominator(), &IntPolynomial::from_i64(&[1]));
        let half = RationalSeries::new(IntPolynomial::from_i64(&[1]), IntPolynomial::from_i64(&[2])).unwrap();
        assert_eq!(half.coefficients(1), Err(Error::NonIntegralSeries(0)));
        assert!(RationalSeries::new(IntPolynomial::one(), IntPolynomial::from_i64(&[0, 1])).is_err());
    }

    #[test]
    fn gcd_and_division() {
        let a = IntPolynomial::from_i64(&[1, 0, -1]); // (1 - t)(1 + t)
        let b = IntPolynomial::from_i64(&[1, 2, 1]); // (1 + t)^2
        assert_eq!(a.gcd(&b), IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(b.div_exact(&IntPolynomial::from_i64(&[1, 1])), Some(IntPolynomial::from_i64(&[1, 1])));
        assert_eq!(b.div_exact(&IntPolynomial::from_i64(&[1, -1])), None);
    }

    #[test]
    fn growth_type_examples() {
        assert_eq!(growth_type(&corpus::complete(3), 20).unwrap().kind, GrowthKind::Polynomial);
        assert_eq!(growth_type(&corpus::cycle(4), 30).unwrap().kind, GrowthKind::Polynomial);
        assert_eq!(growth_type(&corpus::cycle(5), 30).unwrap().kind, GrowthKind::Exponential);
        assert!(growth_type(&corpus::cycle(5), 10).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[1, -3, 2]).to_string(), "1 - 3t + 2t^2");
        assert_eq!(IntPolynomial::from_i64(&[0, -1]).to_string(), "-t");
    }
}
