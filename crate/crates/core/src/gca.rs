//! Free graded-commutative algebras on finite multigraded generator sets.
//!
//! Only the homological degree carries a Koszul sign; the weight grading in
//! ℕ^m is sign-free. Monomials are stored as exponent vectors over a fixed
//! generator order and carry no sign: signs appear when two monomials are
//! multiplied and the concatenation is sorted back into canonical order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::series::{Truncation, TruncatedSeries};
use crate::{Error, Result, Weight, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiDegree {
    pub weight: Weight,
    pub homdeg: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: MultiDegree,
}

impl Generator {
    pub fn new(label: impl Into<String>, weight: Weight, homdeg: u32) -> Self {
        Generator { label: label.into(), degree: MultiDegree { weight, homdeg } }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.homdeg % 2 == 1
    }
}

/// An ordered list of generators with weights in ℕ^m, each of nonzero weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpace {
    m: usize,
    gens: Vec<Generator>,
}

impl GeneratorSpace {
    pub fn new(m: usize, gens: Vec<Generator>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("weight rank m must be at least 1".into()));
        }
        for g in &gens {
            if g.degree.weight.len() != m {
                return Err(Error::InvalidParameter(format!(
                    "generator {} has weight of length {} instead of {}",
                    g.label,
                    g.degree.weight.len(),
                    m
                )));
            }
            if g.degree.weight.iter().all(|&x| x == 0) {
                return Err(Error::InvalidParameter(format!(
                    "generator {} has zero weight",
                    g.label
                )));
            }
        }
        Ok(GeneratorSpace { m, gens })
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn unit(&self) -> Monomial {
        Monomial { exps: vec![0; self.gens.len()] }
    }

    pub fn monomial_of(&self, i: usize) -> Monomial {
        let mut exps = vec![0; self.gens.len()];
        exps[i] = 1;
        Monomial { exps }
    }

    /// The same generators in a different order (`perm[new] = old`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        GeneratorSpace { m: self.m, gens: perm.iter().map(|&i| self.gens[i].clone()).collect() }
    }
}

/// Exponent vector over the generators of a [`GeneratorSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, g: &GeneratorSpace) -> MultiDegree {
        let mut weight = vec![0u32; g.m];
        let mut homdeg = 0u32;
        for (e, gen) in self.exps.iter().zip(&g.gens) {
            if *e == 0 {
                continue;
            }
            for (w, gw) in weight.iter_mut().zip(&gen.degree.weight) {
                *w += e * gw;
            }
            homdeg += e * gen.degree.homdeg;
        }
        MultiDegree { weight, homdeg }
    }

    pub fn homdeg(&self, g: &GeneratorSpace) -> u32 {
        self.exps.iter().zip(&g.gens).map(|(e, gen)| e * gen.degree.homdeg).sum()
    }

    pub fn display(&self, g: &GeneratorSpace) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    g.gens[i].label.clone()
                } else {
                    format!("{}^{}", g.gens[i].label, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of weight `w`, grouped by homological degree. Within a
/// group the order is lexicographic in the exponent vectors.
pub fn monomial_basis(g: &GeneratorSpace, w: &[u32]) -> BTreeMap<u32, Vec<Monomial>> {
    assert_eq!(w.len(), g.m, "weight has the wrong rank");
    let mut all = Vec::new();
    let mut exps = vec![0u32; g.gens.len()];
    let mut rest = w.to_vec();
    enumerate(g, 0, &mut rest, &mut exps, &mut all);
    let mut out: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
    for mono in all {
        out.entry(mono.homdeg(g)).or_default().push(mono);
    }
    out
}

fn enumerate(
    g: &GeneratorSpace,
    i: usize,
    rest: &mut Vec<u32>,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if rest.iter().all(|&r| r == 0) {
        out.push(Monomial { exps: exps.clone() });
        return;
    }
    if i == g.gens.len() {
        return;
    }
    let gw = &g.gens[i].degree.weight;
    let mut max_e = u32::MAX;
    for (r, x) in rest.iter().zip(gw) {
        if *x > 0 {
            max_e = max_e.min(r / x);
        }
    }
    if g.gens[i].is_odd() {
        max_e = max_e.min(1);
    }
    for e in 0..=max_e {
        for (r, x) in rest.iter_mut().zip(gw) {
            *r -= e * x;
        }
        exps[i] = e;
        enumerate(g, i + 1, rest, exps, out);
        for (r, x) in rest.iter_mut().zip(gw) {
            *r += e * x;
        }
    }
    exps[i] = 0;
}

/// Product of two monomials: `None` when an odd generator would be squared,
/// otherwise the sign (±1) and the canonical merged monomial.
pub fn multiply(g: &GeneratorSpace, a: &Monomial, b: &Monomial) -> Option<(i32, Monomial)> {
    let mut inversions = 0u32;
    let mut odd_in_a_after = 0u32;
    // walk generators from the top; an odd factor of b at position i must
    // move past every odd factor of a at a position > i
    for i in (0..g.gens.len()).rev() {
        if !g.gens[i].is_odd() {
            continue;
        }
        let ea = a.exps[i];
        let eb = b.exps[i];
        if ea + eb > 1 {
            return None;
        }
        if eb == 1 {
            inversions += odd_in_a_after;
        }
        if ea == 1 {
            odd_in_a_after += 1;
        }
    }
    let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((sign, Monomial { exps }))
}

/// A linear combination of monomials with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut e = Element::zero();
        e.add_term(m, Q::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, other: &Element, c: &Q) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn mul(&self, other: &Element, g: &GeneratorSpace) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = multiply(g, ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }
}

/// Product over generators of (1 + t^h s^w) for odd h and (1 − t^h s^w)^{-1}
/// for even h, truncated.
pub fn hilbert_series(g: &GeneratorSpace, trunc: Truncation) -> TruncatedSeries {
    hilbert_series_with(g, trunc, |gen| gen.degree.homdeg)
}

/// As [`hilbert_series`] but placing each generator at t-degree `t_of(gen)`.
/// Exterior versus polynomial is still decided by the homological parity.
pub fn hilbert_series_with(
    g: &GeneratorSpace,
    trunc: Truncation,
    t_of: impl Fn(&Generator) -> u32,
) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(g.m, trunc);
    for gen in &g.gens {
        let t = t_of(gen);
        let factor = if gen.is_odd() {
            TruncatedSeries::binomial_power(g.m, trunc, &gen.degree.weight, t, &Q::one(), 1)
        } else {
            TruncatedSeries::binomial_power(g.m, trunc, &gen.degree.weight, t, &-Q::one(), -1)
        };
        acc = acc.mul(&factor);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(gens: &[(&str, Vec<u32>, u32)]) -> GeneratorSpace {
        let m = gens[0].1.len();
        GeneratorSpace::new(
            m,
            gens.iter().map(|(l, w, h)| Generator::new(*l, w.clone(), *h)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn exterior_square_vanishes_in_basis() {
        let g = space(&[("a", vec![1], 1)]);
        assert!(monomial_basis(&g, &[2]).is_empty());
    }

    #[test]
    fn polynomial_cube() {
        let g = space(&[("b", vec![1], 2)]);
        let basis = monomial_basis(&g, &[3]);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[&6], vec![Monomial::from_exponents(vec![3])]);
    }

    #[test]
    fn r2_configuration_generators_weight_three() {
        let g = space(&[("v", vec![1], 4), ("w", vec![2], 7)]);
        let basis = monomial_basis(&g, &[3]);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[&12], vec![Monomial::from_exponents(vec![3, 0])]);
        assert_eq!(basis[&11], vec![Monomial::from_exponents(vec![1, 1])]);
    }

    #[test]
    fn unit_weight_has_unit_basis() {
        let g = space(&[("v", vec![1], 4), ("w", vec![2], 7)]);
        let basis = monomial_basis(&g, &[0]);
        assert_eq!(basis[&0], vec![g.unit()]);
    }

    #[test]
    fn rejects_zero_weight_generator() {
        assert!(GeneratorSpace::new(1, vec![Generator::new("z", vec![0], 1)]).is_err());
    }

    #[test]
    fn signs() {
        let g = space(&[("x", vec![1], 1), ("y", vec![1], 1), ("e", vec![1], 2)]);
        let x = g.monomial_of(0);
        let y = g.monomial_of(1);
        let e = g.monomial_of(2);
        assert!(multiply(&g, &x, &x).is_none());
        let (s, xy) = multiply(&g, &x, &y).unwrap();
        assert_eq!(s, 1);
        let (s2, yx) = multiply(&g, &y, &x).unwrap();
        assert_eq!(s2, -1);
        assert_eq!(xy, yx);
        assert_eq!(multiply(&g, &x, &e).unwrap().0, 1);
        assert_eq!(multiply(&g, &e, &x).unwrap().0, 1);
        assert_eq!(multiply(&g, &e, &e).unwrap().1.exponents(), &[0, 0, 2]);
    }

    #[test]
    fn hilbert_examples() {
        let tr = Truncation::new(6, 20);
        let odd = space(&[("a", vec![1], 1)]);
        let h = hilbert_series(&odd, tr);
        assert_eq!(h.coeff(&[0], 0), Q::one());
        assert_eq!(h.coeff(&[1], 1), Q::one());
        assert_eq!(h.num_terms(), 2);

        let even = space(&[("b", vec![1], 2)]);
        let h = hilbert_series(&even, tr);
        for n in 0..=6u32 {
            assert_eq!(h.coeff(&[n], 2 * n), Q::one());
        }
        assert_eq!(h.num_terms(), 7);

        let r2 = space(&[("v", vec![1], 4), ("w", vec![2], 7)]);
        let h = hilbert_series(&r2, tr);
        let s2 = h.t_polynomial(&[2]);
        assert_eq!(s2.len(), 2);
        assert_eq!(s2[&8], Q::one());
        assert_eq!(s2[&7], Q::one());
    }

    fn small_space() -> GeneratorSpace {
        space(&[
            ("p", vec![1, 0], 3),
            ("q", vec![1, 0], 2),
            ("r", vec![0, 1], 5),
            ("s", vec![1, 1], 4),
            ("u", vec![0, 1], 1),
        ])
    }

    fn basis_up_to(g: &GeneratorSpace, total: u32) -> Vec<Monomial> {
        crate::weights_up_to(g.rank(), total)
            .into_iter()
            .flat_map(|w| monomial_basis(g, &w).into_values().flatten())
            .collect()
    }

    #[test]
    fn multiplication_is_associative_and_graded_commutative() {
        let g = small_space();
        let monos = basis_up_to(&g, 4);
        for a in &monos {
            for b in &monos {
                let ab = multiply(&g, a, b);
                let ba = multiply(&g, b, a);
                match (&ab, &ba) {
                    (None, None) => {}
                    (Some((s1, m1)), Some((s2, m2))) => {
                        assert_eq!(m1, m2);
                        let koszul = (a.homdeg(&g) * b.homdeg(&g)) % 2;
                        assert_eq!(*s1 * *s2, if koszul == 1 { -1 } else { 1 });
                    }
                    _ => panic!("zero on one side only"),
                }
            }
        }
        let small = basis_up_to(&g, 2);
        for a in &small {
            for b in &small {
                for c in &small {
                    let left = multiply(&g, a, b)
                        .and_then(|(s, ab)| multiply(&g, &ab, c).map(|(t, m)| (s * t, m)));
                    let right = multiply(&g, b, c)
                        .and_then(|(s, bc)| multiply(&g, a, &bc).map(|(t, m)| (s * t, m)));
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn hilbert_matches_basis_counts() {
        let g = small_space();
        let tr = Truncation::new(5, 40);
        let h = hilbert_series(&g, tr);
        for w in crate::weights_up_to(2, 5) {
            let basis = monomial_basis(&g, &w);
            let poly = h.t_polynomial(&w);
            let mut expected: BTreeMap<u32, Q> = BTreeMap::new();
            for (deg, v) in &basis {
                expected.insert(*deg, Q::from_integer((v.len() as i64).into()));
            }
            assert_eq!(poly, expected, "weight {w:?}");
        }
    }

    #[test]
    fn basis_is_lexicographic_and_unique() {
        let g = small_space();
        for w in crate::weights_up_to(2, 4) {
            for monos in monomial_basis(&g, &w).values() {
                for pair in monos.windows(2) {
                    assert!(pair[0] < pair[1]);
                }
                for m in monos {
                    assert_eq!(m.degree(&g).weight, w);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn basis_sizes_invariant_under_relabeling(seed in 0u64..1000) {
            use rand::{seq::SliceRandom, SeedableRng};
            let g = small_space();
            let mut perm: Vec<usize> = (0..g.len()).collect();
            perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            let h = g.permuted(&perm);
            for w in crate::weights_up_to(2, 4) {
                let a: BTreeMap<u32, usize> =
                    monomial_basis(&g, &w).into_iter().map(|(k, v)| (k, v.len())).collect();
                let b: BTreeMap<u32, usize> =
                    monomial_basis(&h, &w).into_iter().map(|(k, v)| (k, v.len())).collect();
                prop_assert_eq!(a, b);
            }
        }
    }
}
