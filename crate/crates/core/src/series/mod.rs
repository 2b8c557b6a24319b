//! Truncated power series in weight variables s₁..s_m and a degree variable t,
//! plus the generating functions built from them: Poincaré series of
//! symmetric products, homological densities and Euler characteristics.

mod density;
mod euler;

pub use density::{
    check_density_coincidence, cup_products_vanish, density_series, sym_series,
    unstable_product_check, CoincidenceReport, ProductCheck, ProductRow,
};
pub use euler::{euler_series_lhs, euler_series_rhs};

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// Maximum total s-degree and maximum t-degree kept in a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub max_s: u32,
    pub max_t: u32,
}

impl Truncation {
    pub fn new(max_s: u32, max_t: u32) -> Self {
        Truncation { max_s, max_t }
    }

    fn keeps(&self, s: &[u32], t: u32) -> bool {
        t <= self.max_t && s.iter().sum::<u32>() <= self.max_s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    m: usize,
    trunc: Truncation,
    coeffs: BTreeMap<(Vec<u32>, u32), Q>,
}

impl TruncatedSeries {
    pub fn zero(m: usize, trunc: Truncation) -> Self {
        TruncatedSeries { m, trunc, coeffs: BTreeMap::new() }
    }

    pub fn one(m: usize, trunc: Truncation) -> Self {
        let mut s = Self::zero(m, trunc);
        s.add_term(vec![0; m], 0, Q::one());
        s
    }

    pub fn monomial(m: usize, trunc: Truncation, s: &[u32], t: u32, c: Q) -> Self {
        let mut out = Self::zero(m, trunc);
        out.add_term(s.to_vec(), t, c);
        out
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `c · s^s t^t`; terms beyond the truncation are dropped.
    pub fn add_term(&mut self, s: Vec<u32>, t: u32, c: Q) {
        assert_eq!(s.len(), self.m, "s-exponent has the wrong rank");
        if c.is_zero() || !self.trunc.keeps(&s, t) {
            return;
        }
        match self.coeffs.entry((s, t)) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn coeff(&self, s: &[u32], t: u32) -> Q {
        self.coeffs.get(&(s.to_vec(), t)).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of s^w as a polynomial in t (t-degree → coefficient).
    pub fn t_polynomial(&self, w: &[u32]) -> BTreeMap<u32, Q> {
        let lo = (w.to_vec(), 0);
        let hi = (w.to_vec(), u32::MAX);
        self.coeffs.range(lo..=hi).map(|((_, t), c)| (*t, c.clone())).collect()
    }

    /// Terms in graded lexicographic order: total s-degree, then s-exponents
    /// (larger leading exponent first), then t-degree.
    pub fn terms(&self) -> Vec<(&[u32], u32, &Q)> {
        let mut out: Vec<_> = self.coeffs.iter().map(|((s, t), c)| (s.as_slice(), *t, c)).collect();
        out.sort_by(|a, b| {
            let ta: u32 = a.0.iter().sum();
            let tb: u32 = b.0.iter().sum();
            ta.cmp(&tb).then_with(|| b.0.cmp(a.0)).then_with(|| a.1.cmp(&b.1))
        });
        out
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.m, other.m, "series over different variable sets");
        assert_eq!(self.trunc, other.trunc, "series with different truncations");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for ((s, t), c) in &other.coeffs {
            out.add_term(s.clone(), *t, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.m, self.trunc);
        for ((s, t), v) in &self.coeffs {
            out.add_term(s.clone(), *t, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.m, self.trunc);
        for ((sa, ta), ca) in &self.coeffs {
            let da: u32 = sa.iter().sum();
            for ((sb, tb), cb) in &other.coeffs {
                let db: u32 = sb.iter().sum();
                if da + db > self.trunc.max_s || ta + tb > self.trunc.max_t {
                    continue;
                }
                let s: Vec<u32> = sa.iter().zip(sb).map(|(x, y)| x + y).collect();
                out.add_term(s, ta + tb, ca * cb);
            }
        }
        out
    }

    /// (1 + c · s^w t^h)^e for any integer e, expanded by the generalized
    /// binomial theorem.
    pub fn binomial_power(m: usize, trunc: Truncation, w: &[u32], h: u32, c: &Q, e: i64) -> Self {
        let mut out = Self::one(m, trunc);
        let step_s: u32 = w.iter().sum();
        if step_s == 0 && h == 0 {
            panic!("binomial_power needs a non-constant monomial");
        }
        let mut binom = Q::one();
        let mut cj = Q::one();
        let mut j: u32 = 0;
        loop {
            j += 1;
            if step_s * j > trunc.max_s || h * j > trunc.max_t {
                break;
            }
            // binom(e, j) = binom(e, j-1) * (e - j + 1) / j
            binom = binom * Q::from_integer(BigInt::from(e - j as i64 + 1))
                / Q::from_integer(BigInt::from(j));
            if binom.is_zero() {
                break;
            }
            cj = &cj * c;
            let s: Vec<u32> = w.iter().map(|x| x * j).collect();
            out.add_term(s, h * j, &binom * &cj);
        }
        out
    }

    /// Sets t = 1, giving a series in s alone (t-truncation becomes 0).
    pub fn forget_t(&self) -> Self {
        let trunc = Truncation::new(self.trunc.max_s, 0);
        let mut out = Self::zero(self.m, trunc);
        for ((s, _), c) in &self.coeffs {
            out.add_term(s.clone(), 0, c.clone());
        }
        out
    }

    /// Re-truncates to a coarser truncation (dropping excess terms).
    pub fn truncate(&self, trunc: Truncation) -> Self {
        let mut out = Self::zero(self.m, trunc);
        for ((s, t), c) in &self.coeffs {
            out.add_term(s.clone(), *t, c.clone());
        }
        out
    }

    /// CSV with header `coeff,t,s1,...,sm`, rows in [`Self::terms`] order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("coeff,t");
        for i in 1..=self.m {
            out.push_str(&format!(",s{i}"));
        }
        out.push('\n');
        for (s, t, c) in self.terms() {
            out.push_str(&format!("{c},{t}"));
            for e in s {
                out.push_str(&format!(",{e}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    /// Sparse term list `coeff * t^i * s1^n1 ...`, omitting unit factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, t, c)) in terms.into_iter().enumerate() {
            let mut factors = Vec::new();
            if t > 0 {
                factors.push(if t == 1 { "t".to_string() } else { format!("t^{t}") });
            }
            for (i, e) in s.iter().enumerate() {
                let var = if self.m == 1 { "s".to_string() } else { format!("s{}", i + 1) };
                match e {
                    0 => {}
                    1 => factors.push(var),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            let mag = c.abs();
            let sep = if k == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            write!(f, "{sep}")?;
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join(" * "))?;
            } else {
                write!(f, "{mag} * {}", factors.join(" * "))?;
            }
        }
        Ok(())
    }
}
