//! Betti tables of unordered configuration spaces and the stabilization
//! ranges obtained from vanishing of the cone of σ.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complex::{build_cone_slice, build_generators, slice_from_assignment, ComplexSpec};
use crate::linalg::{euler_characteristic, homology_dims};
use crate::manifold::ManifoldData;
use crate::Result;

/// dim H^i(C_n(M); ℚ) for 0 ≤ n ≤ n_max and 0 ≤ i ≤ i_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub n_max: u32,
    pub i_max: u32,
    entries: BTreeMap<(u32, u32), usize>,
    /// n → description of the complex the row was read from
    provenance: BTreeMap<u32, String>,
}

impl BettiTable {
    pub fn get(&self, n: u32, i: u32) -> usize {
        self.entries.get(&(n, i)).copied().unwrap_or(0)
    }

    pub fn row(&self, n: u32) -> Vec<usize> {
        (0..=self.i_max).map(|i| self.get(n, i)).collect()
    }

    pub fn provenance(&self, n: u32) -> Option<&str> {
        self.provenance.get(&n).map(|s| s.as_str())
    }

    pub fn euler_char(&self, n: u32) -> i64 {
        let dims = (0..=self.i_max).map(|i| (i, self.get(n, i))).collect();
        euler_characteristic(&dims)
    }

    /// `n,i,dim` with every (n, i) in range, zeros included.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,i,dim\n");
        for n in 0..=self.n_max {
            for i in 0..=self.i_max {
                writeln!(out, "{n},{i},{}", self.get(n, i)).unwrap();
            }
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let width = self
            .entries
            .values()
            .map(|v| v.to_string().len())
            .chain([self.i_max.to_string().len(), 1])
            .max()
            .unwrap_or(1);
        let label = self.n_max.to_string().len().max(3);
        let mut out = format!("{:>label$} |", "n\\i");
        for i in 0..=self.i_max {
            write!(out, " {i:>width$}").unwrap();
        }
        out.push('\n');
        out.push_str(&"-".repeat(label + 2 + (width + 1) * (self.i_max as usize + 1)));
        out.push('\n');
        for n in 0..=self.n_max {
            write!(out, "{n:>label$} |").unwrap();
            for i in 0..=self.i_max {
                write!(out, " {:>width$}", self.get(n, i)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Cohomology of C_n(M) from the Koszul complex at weight n, reindexed by
/// i = 2dn − homdeg. Rows are computed in parallel.
pub fn config_betti(man: &ManifoldData, n_max: u32, i_max: u32) -> Result<BettiTable> {
    let spec = ComplexSpec::configurations(man.clone());
    let a = build_generators(&spec);
    let d = man.dim();
    let rows = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let slice = slice_from_assignment(&a, &[n])?;
            let h = homology_dims(&slice)?;
            Ok((n, h.into_iter().map(|(j, dim)| (2 * d * n - j, dim)).collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    for (n, row) in rows {
        for (i, dim) in row {
            if i <= i_max {
                entries.insert((n, i), dim);
            }
        }
        provenance.insert(n, format!("Koszul slice (m,k)=(1,2) weight {n}"));
    }
    Ok(BettiTable { n_max, i_max, entries, provenance })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRow {
    pub n: u32,
    /// cohomological degree i = 2dn − homdeg → dim
    pub dims: BTreeMap<u32, usize>,
    pub euler: i64,
}

impl ConeRow {
    /// Smallest i with nonzero cone homology.
    pub fn min_nonzero(&self) -> Option<u32> {
        self.dims.keys().next().copied()
    }

    /// Largest i with nonzero cone homology.
    pub fn max_nonzero(&self) -> Option<u32> {
        self.dims.keys().next_back().copied()
    }
}

/// Homology of the cone of σ for 0 ≤ n ≤ n_max.
pub fn cone_vanishing(man: &ManifoldData, n_max: u32) -> Result<Vec<ConeRow>> {
    let d = man.dim();
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let slice = build_cone_slice(man, n)?;
            let dims: BTreeMap<u32, usize> = homology_dims(&slice)?
                .into_iter()
                .map(|(j, dim)| (2 * d * n - j, dim))
                .collect();
            let euler = euler_characteristic(&dims);
            Ok(ConeRow { n, dims, euler })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RangeReport {
    pub table: BettiTable,
    pub cone: Vec<ConeRow>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl RangeReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Claimed ranges for H^i(C_{n−1}) → H^i(C_n): (surjective if i < s, isomorphism
/// if i < t), as predicates on (n, i).
fn claimed(d: u32, n: u32, i: u32) -> (bool, bool) {
    match d {
        1 => (false, false),
        2 => (2 * i < n, false),
        _ => (i < n, i + 1 < n),
    }
}

/// Checks cone vanishing and the dimension shadow of the stability maps.
pub fn verify_ranges(man: &ManifoldData, n_max: u32) -> Result<RangeReport> {
    let d = man.dim();
    let table = config_betti(man, n_max, 2 * d * n_max)?;
    let cone = cone_vanishing(man, n_max)?;
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    if d == 1 {
        notes.push("no stability range is claimed in dimension 1".to_string());
    }
    let mut running = 0i64;
    for row in &cone {
        let n = row.n;
        running += row.euler;
        if running != table.euler_char(n) {
            violations.push(format!(
                "n={n}: Euler characteristics of cones sum to {running}, table gives {}",
                table.euler_char(n)
            ));
        }
        if n == 0 {
            continue;
        }
        for (&i, &dim) in &row.dims {
            if claimed(d, n, i).0 {
                violations.push(format!("n={n}: cone homology of dim {dim} in degree i={i}"));
            }
        }
        for i in 0..=table.i_max {
            let (surj, iso) = claimed(d, n, i);
            let (prev, cur) = (table.get(n - 1, i), table.get(n, i));
            if iso && prev != cur {
                violations.push(format!("n={n}, i={i}: expected isomorphism, dims {prev} vs {cur}"));
            } else if surj && prev < cur {
                violations.push(format!("n={n}, i={i}: expected surjection, dims {prev} < {cur}"));
            }
        }
        if d == 2 {
            if let Some(lo) = row.min_nonzero() {
                notes.push(format!(
                    "n={n}: first nonzero cone degree i={lo} (claimed vanishing for i < {})",
                    n.div_ceil(2)
                ));
            }
        }
    }
    Ok(RangeReport { table, cone, violations, notes })
}
