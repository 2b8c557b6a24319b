//! Tor over S^*(V2) via the reduced two-sided bar construction
//! B(S^*(V1), S^*(V2), ℚ), an independent check on the Koszul complex.
//!
//! A basis element is r[s_1|…|s_p] with r a monomial of R = S^*(V1) and each
//! s_i a monomial of positive weight in S = S^*(V2). Its degree is
//! |r| + Σ(|s_i| + 1), and
//!
//! d(r[s_1|…|s_p]) = (−1)^{|r|} rΔ(s_1)[s_2|…|s_p]
//!                 + Σ_i (−1)^{|r| + Σ_{j≤i}(|s_j|+1)} r[…|s_i s_{i+1}|…].

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::complex::{build_generators, slice_from_assignment, ComplexSpec, GeneratorAssignment};
use crate::gca::{monomial_basis, multiply, Element, GeneratorSpace, Monomial};
use crate::linalg::{check_square_zero, homology_dims, GradedComplex, SparseRationalMatrix};
use crate::{Error, Result, Q};

pub const DEFAULT_GUARD: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BarTensor {
    r: Monomial,
    s: Vec<Monomial>,
}

#[derive(Clone, Debug)]
pub struct BarSlice {
    weight: Vec<u32>,
    dims: BTreeMap<u32, usize>,
    diffs: BTreeMap<u32, SparseRationalMatrix>,
}

impl BarSlice {
    pub fn weight(&self) -> &[u32] {
        &self.weight
    }
}

impl GradedComplex for BarSlice {
    fn dims(&self) -> BTreeMap<u32, usize> {
        self.dims.clone()
    }

    fn differential(&self, j: u32) -> Option<&SparseRationalMatrix> {
        self.diffs.get(&j)
    }
}

struct BarContext {
    r_space: GeneratorSpace,
    s_space: GeneratorSpace,
    a: GeneratorAssignment,
    delta_cache: HashMap<Monomial, Element>,
}

impl BarContext {
    /// Δ extended multiplicatively to a monomial of S.
    fn delta(&mut self, s: &Monomial) -> Element {
        if let Some(e) = self.delta_cache.get(s) {
            return e.clone();
        }
        let mut acc = Element::from_monomial(self.r_space.unit());
        for (g, &e) in s.exponents().iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul(self.a.delta(g), &self.r_space);
            }
        }
        self.delta_cache.insert(s.clone(), acc.clone());
        acc
    }

    fn tensor_degree(&self, t: &BarTensor) -> u32 {
        t.r.homdeg(&self.r_space) + t.s.iter().map(|s| s.homdeg(&self.s_space) + 1).sum::<u32>()
    }

    fn boundary(&mut self, t: &BarTensor) -> Vec<(BarTensor, Q)> {
        let mut out = Vec::new();
        if t.s.is_empty() {
            return out;
        }
        let r_deg = t.r.homdeg(&self.r_space);
        let sign = |e: u32| if e % 2 == 0 { Q::one() } else { -Q::one() };
        let image = self.delta(&t.s[0]);
        let r = Element::from_monomial(t.r.clone());
        for (mono, c) in r.mul(&image, &self.r_space).terms() {
            out.push((
                BarTensor { r: mono.clone(), s: t.s[1..].to_vec() },
                sign(r_deg) * c,
            ));
        }
        let mut eps = r_deg;
        for i in 0..t.s.len() - 1 {
            eps += t.s[i].homdeg(&self.s_space) + 1;
            if let Some((sg, merged)) = multiply(&self.s_space, &t.s[i], &t.s[i + 1]) {
                let mut s = t.s[..i].to_vec();
                s.push(merged);
                s.extend_from_slice(&t.s[i + 2..]);
                let mut c = sign(eps);
                if sg < 0 {
                    c = -c;
                }
                out.push((BarTensor { r: t.r.clone(), s }, c));
            }
        }
        out
    }
}

fn sub(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

/// Ordered sequences of positive multiples summing to `total`.
fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn build_bar_slice(spec: &ComplexSpec, w: &[u32], guard: u32) -> Result<BarSlice> {
    let total: u32 = w.iter().sum();
    if total > guard {
        return Err(Error::GuardLimit { weight: total, limit: guard });
    }
    let a = build_generators(spec);
    let mut ctx = BarContext {
        r_space: a.v1_space(),
        s_space: a.v2_unsuspended_space(),
        a,
        delta_cache: HashMap::new(),
    };
    let m = w.len();
    let k = spec.k();
    let max_j = if ctx.s_space.is_empty() { 0 } else { w.iter().map(|x| x / k).min().unwrap_or(0) };
    let s_monos: Vec<Vec<Monomial>> = (0..=max_j)
        .map(|j| {
            if j == 0 || ctx.s_space.is_empty() {
                Vec::new()
            } else {
                monomial_basis(&ctx.s_space, &vec![j * k; m]).into_values().flatten().collect()
            }
        })
        .collect();

    let mut bases: BTreeMap<u32, Vec<BarTensor>> = BTreeMap::new();
    for j in 0..=max_j {
        let rest = sub(w, &vec![j * k; m]).expect("j bounded by w");
        let r_monos: Vec<Monomial> = monomial_basis(&ctx.r_space, &rest).into_values().flatten().collect();
        if r_monos.is_empty() {
            continue;
        }
        for comp in compositions(j) {
            let mut seqs: Vec<Vec<Monomial>> = vec![vec![]];
            for part in &comp {
                let mut next = Vec::new();
                for seq in &seqs {
                    for s in &s_monos[*part as usize] {
                        let mut v = seq.clone();
                        v.push(s.clone());
                        next.push(v);
                    }
                }
                seqs = next;
            }
            for seq in seqs {
                for r in &r_monos {
                    let t = BarTensor { r: r.clone(), s: seq.clone() };
                    bases.entry(ctx.tensor_degree(&t)).or_default().push(t);
                }
            }
        }
    }

    let index: HashMap<BarTensor, usize> = bases
        .values()
        .flat_map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)))
        .collect();
    let mut diffs = BTreeMap::new();
    for (&deg, basis) in &bases {
        if deg == 0 {
            continue;
        }
        let rows = bases.get(&(deg - 1)).map_or(0, |b| b.len());
        let mut mat = SparseRationalMatrix::zeros(rows, basis.len());
        for (col, t) in basis.iter().enumerate() {
            for (image, c) in ctx.boundary(t) {
                if c.is_zero() {
                    continue;
                }
                let row = *index.get(&image).expect("bar boundary stays in the basis");
                mat.add(row, col, c);
            }
        }
        if !mat.is_zero() {
            diffs.insert(deg, mat);
        }
    }
    let slice = BarSlice {
        weight: w.to_vec(),
        dims: bases.iter().map(|(d, b)| (*d, b.len())).collect(),
        diffs,
    };
    check_square_zero(&slice)?;
    Ok(slice)
}

/// Homology of the bar complex at weight `w`, by total degree.
pub fn tor_dims_via_bar(spec: &ComplexSpec, w: &[u32], guard: u32) -> Result<BTreeMap<u32, usize>> {
    homology_dims(&build_bar_slice(spec, w, guard)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub weight: Vec<u32>,
    pub koszul: BTreeMap<u32, usize>,
    pub bar: BTreeMap<u32, usize>,
}

impl OracleReport {
    pub fn equal(&self) -> bool {
        self.koszul == self.bar
    }
}

pub fn compare_oracle(spec: &ComplexSpec, w: &[u32], guard: u32) -> Result<OracleReport> {
    let bar = tor_dims_via_bar(spec, w, guard)?;
    let koszul = homology_dims(&slice_from_assignment(&build_generators(spec), w)?)?;
    Ok(OracleReport { weight: w.to_vec(), koszul, bar })
}
