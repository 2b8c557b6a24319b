//! Dimensions of Hom(ΣH̃_*(M⁺), S²(H̃_*(M⁺))/Δ_*), the vector group through
//! which the residual automorphisms act on H^*(C_n(M)) for orientable
//! even-dimensional M.

use std::collections::BTreeMap;

use crate::linalg::SparseRationalMatrix;
use crate::manifold::{ClassRef, ManifoldData};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualActionReport {
    /// q → dim Hom(H̃_q, (S²H̃/im Δ_*)_{q+1})
    pub per_degree: BTreeMap<u32, usize>,
    /// p → dim (S²H̃/im Δ_*)_p
    pub quotient: BTreeMap<u32, usize>,
    pub total: usize,
}

impl ResidualActionReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,dim\n");
        for (q, d) in &self.per_degree {
            out.push_str(&format!("{q},{d}\n"));
        }
        out
    }
}

pub fn residual_action_dims(man: &ManifoldData) -> Result<ResidualActionReport> {
    if !man.orientable() || man.dim() % 2 == 1 {
        return Err(Error::Precondition("requires orientable, even-dimensional M".into()));
    }
    let classes: Vec<ClassRef> = man.class_refs(0).collect();
    let deg = |c: ClassRef| man.class(c).deg;
    let mut h_dims: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &classes {
        *h_dims.entry(deg(c)).or_default() += 1;
    }
    // basis of S² by degree: unordered pairs, squares only of even classes
    let mut pairs: BTreeMap<u32, Vec<(ClassRef, ClassRef)>> = BTreeMap::new();
    for (i, &x) in classes.iter().enumerate() {
        for &y in &classes[i..] {
            if x == y && deg(x) % 2 == 1 {
                continue;
            }
            pairs.entry(deg(x) + deg(y)).or_default().push((x, y));
        }
    }
    // im Δ_* in degree p has the rank of the cup product S²(H_c)_p → H_c^p
    let mut quotient = BTreeMap::new();
    for (&p, ps) in &pairs {
        let targets: Vec<ClassRef> = classes.iter().copied().filter(|&z| deg(z) == p).collect();
        let mut mat = SparseRationalMatrix::zeros(targets.len(), ps.len());
        for (col, &(x, y)) in ps.iter().enumerate() {
            let prod = man.cup(x, y);
            for (row, z) in targets.iter().enumerate() {
                mat.add(row, col, prod.coeff(z.index));
            }
        }
        quotient.insert(p, ps.len() - mat.rank());
    }
    let per_degree: BTreeMap<u32, usize> = h_dims
        .iter()
        .map(|(&q, &h)| (q, h * quotient.get(&(q + 1)).copied().unwrap_or(0)))
        .collect();
    let total = per_degree.values().sum();
    Ok(ResidualActionReport { per_degree, quotient, total })
}
