use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use super::{TruncatedSeries, Truncation};
use crate::complex::{build_generators, slice_from_assignment, ComplexSpec};
use crate::gca::{hilbert_series_with, Generator, GeneratorSpace};
use crate::linalg::homology_dims;
use crate::manifold::{ClassRef, Cochain, ManifoldData};
use crate::{weights_up_to, Error, Result, Weight, Q};

/// S^*(⊕ V1_i): one generator per twisted class and colour.
fn v1_space(man: &ManifoldData, m: usize) -> GeneratorSpace {
    let d = man.dim();
    let mut gens = Vec::new();
    for color in 0..m {
        for c in man.class_refs(1) {
            let class = man.class(c);
            let mut w = vec![0; m];
            w[color] = 1;
            gens.push(Generator::new(format!("v{}[{}]", color + 1, class.label), w, d + class.deg));
        }
    }
    GeneratorSpace::new(m, gens).expect("unit weights")
}

/// Poincaré series of the symmetric products Sym_{n⃗}(M), in cohomological
/// degree.
pub fn sym_series(man: &ManifoldData, m: usize, trunc: Truncation) -> TruncatedSeries {
    let d = man.dim();
    hilbert_series_with(&v1_space(man, m), trunc, |g| {
        let n: u32 = g.degree.weight.iter().sum();
        2 * d * n - g.degree.homdeg
    })
}

/// Whether every j-fold product of twisted classes is zero.
pub fn cup_products_vanish(man: &ManifoldData, j: u32) -> Result<bool> {
    if j < 2 {
        return Err(Error::Precondition(format!("cup_products_vanish needs j >= 2, got {j}")));
    }
    let classes: Vec<ClassRef> = man.class_refs(1).collect();
    fn nonzero(man: &ManifoldData, classes: &[ClassRef], left: u32, acc: &Cochain) -> bool {
        if left == 0 {
            return !acc.is_zero();
        }
        classes.iter().any(|&c| {
            let next = man.cup_cochains(acc, &Cochain::basis(c));
            !next.is_zero() && nonzero(man, classes, left - 1, &next)
        })
    }
    Ok(!classes.iter().any(|&c| nonzero(man, &classes, j - 1, &Cochain::basis(c))))
}

/// The generators of the free factor in the product formula: one per class of
/// H^q(M; twist^{mk−1}), at weight (k,…,k) and cohomological degree
/// d(mk−1) − 1 + q.
fn product_generators(man: &ManifoldData, m: u32, k: u32) -> Vec<(u32, Weight)> {
    let d = man.dim();
    let mk = m * k;
    let betti = man.ordinary_betti(((mk - 1) % 2) as u8);
    let mut out = Vec::new();
    for (q, &b) in betti.iter().enumerate() {
        for _ in 0..b {
            out.push((d * (mk - 1) - 1 + q as u32, vec![k; m as usize]));
        }
    }
    out
}

fn check_mk(m: u32, k: u32) -> Result<()> {
    if m == 0 || k == 0 || m * k < 2 {
        return Err(Error::InvalidParameter(format!("need m, k >= 1 with mk >= 2, got ({m},{k})")));
    }
    Ok(())
}

/// Homological density P_{Z^{m,k}}(t) / P_{Sym^m}(t) as a series in t alone.
pub fn density_series(man: &ManifoldData, m: u32, k: u32, max_t: u32) -> Result<TruncatedSeries> {
    check_mk(m, k)?;
    let trunc = Truncation::new(0, max_t);
    if man.dim() % 2 == 1 && k >= 2 {
        return Ok(TruncatedSeries::one(0, trunc));
    }
    if !cup_products_vanish(man, m * k)? {
        return Err(Error::DensityUndefined(m * k));
    }
    let mut acc = TruncatedSeries::one(0, trunc);
    for (t, _) in product_generators(man, m, k) {
        let factor = if t % 2 == 1 {
            TruncatedSeries::binomial_power(0, trunc, &[], t, &Q::one(), 1)
        } else if t == 0 {
            return Err(Error::Precondition(
                "density diverges: polynomial generator in degree 0".into(),
            ));
        } else {
            TruncatedSeries::binomial_power(0, trunc, &[], t, &-Q::one(), -1)
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct CoincidenceReport {
    pub series: Vec<((u32, u32), TruncatedSeries)>,
    pub coincide: bool,
}

impl CoincidenceReport {
    pub fn verdict(&self) -> &'static str {
        if self.coincide {
            "densities coincide"
        } else {
            "densities differ"
        }
    }
}

/// Compares the densities of all pairs sharing the same product mk.
pub fn check_density_coincidence(
    man: &ManifoldData,
    pairs: &[(u32, u32)],
    max_t: u32,
) -> Result<CoincidenceReport> {
    let series = pairs
        .iter()
        .map(|&(m, k)| Ok(((m, k), density_series(man, m, k, max_t)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut by_mk: BTreeMap<u32, &TruncatedSeries> = BTreeMap::new();
    let mut coincide = true;
    for ((m, k), s) in &series {
        match by_mk.get(&(m * k)) {
            Some(first) => coincide &= *first == s,
            None => {
                by_mk.insert(m * k, s);
            }
        }
    }
    Ok(CoincidenceReport { series, coincide })
}

#[derive(Clone, Debug)]
pub struct ProductRow {
    pub weight: Weight,
    /// cohomological degree → dim, from the Koszul slice
    pub slice: BTreeMap<u32, usize>,
    /// cohomological degree → dim, from Sym ⊗ S^*
    pub product: BTreeMap<u32, usize>,
}

impl ProductRow {
    pub fn equal(&self) -> bool {
        self.slice == self.product
    }
}

#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub rows: Vec<ProductRow>,
}

impl ProductCheck {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(ProductRow::equal)
    }
}

/// Checks H^*(Z^{m,k}) ≅ H^*(Sym) ⊗ S^*(free factor) weight by weight.
pub fn unstable_product_check(
    man: &ManifoldData,
    m: u32,
    k: u32,
    bound: u32,
) -> Result<ProductCheck> {
    let spec = ComplexSpec::new(man.clone(), m, k)?;
    if !spec.has_v2() {
        return Err(Error::Precondition(
            "product formula needs d even or k = 1".into(),
        ));
    }
    if !cup_products_vanish(man, m * k)? {
        return Err(Error::DensityUndefined(m * k));
    }
    let d = man.dim();
    let mu = m as usize;
    let trunc = Truncation::new(bound, 2 * d * bound);
    let free: Vec<Generator> = product_generators(man, m, k)
        .into_iter()
        .enumerate()
        .map(|(i, (t, w))| Generator::new(format!("z{i}"), w, t))
        .collect();
    let product = if free.is_empty() {
        sym_series(man, mu, trunc)
    } else {
        let space = GeneratorSpace::new(mu, free).expect("nonzero weights");
        sym_series(man, mu, trunc).mul(&hilbert_series_with(&space, trunc, |g| g.degree.homdeg))
    };
    let assignment = build_generators(&spec);
    let rows = weights_up_to(mu, bound)
        .into_par_iter()
        .map(|w| {
            let n: u32 = w.iter().sum();
            let slice = slice_from_assignment(&assignment, &w)?;
            let slice = homology_dims(&slice)?
                .into_iter()
                .map(|(h, dim)| (2 * d * n - h, dim))
                .collect();
            let product = product
                .t_polynomial(&w)
                .into_iter()
                .map(|(t, c)| (t, c.to_integer().try_into().expect("dimension fits")))
                .collect();
            Ok(ProductRow { weight: w, slice, product })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductCheck { rows })
}
