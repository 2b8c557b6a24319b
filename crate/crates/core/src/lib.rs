//! Exact rational (co)homology of unordered configuration spaces and spaces of
//! 0-cycles of a manifold, computed from the compactly supported cohomology ring.
//!
//! The pipeline is: a [`manifold::ManifoldData`] description feeds a Koszul
//! complex ([`complex`]) built on a free graded-commutative algebra ([`gca`]);
//! its weight slices are reduced with exact sparse elimination ([`linalg`]).
//! The two-sided bar construction in [`bar`] is an independent route to the
//! same Tor groups and is used to certify the complex. Generating functions,
//! stability analysis and the residual automorphism action build on top.

pub mod autaction;
pub mod bar;
pub mod cli;
pub mod complex;
pub mod error;
pub mod gca;
pub mod linalg;
pub mod manifold;
pub mod series;
pub mod stability;

pub use error::{Error, Result};

/// Exact rational coefficients used throughout.
pub type Q = num_rational::BigRational;

/// A multidegree weight vector in ℕ^m.
pub type Weight = Vec<u32>;

/// All weight vectors of length `m` with total size at most `max_total`, in
/// graded lexicographic order (by total, then lexicographically descending
/// in the first coordinate).
pub fn weights_up_to(m: usize, max_total: u32) -> Vec<Weight> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        let mut cur = vec![0u32; m];
        compositions(total, 0, &mut cur, &mut out);
    }
    out
}

fn compositions(rest: u32, pos: usize, cur: &mut Weight, out: &mut Vec<Weight>) {
    let m = cur.len();
    if m == 0 {
        if rest == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == m - 1 {
        cur[pos] = rest;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for v in (0..=rest).rev() {
        cur[pos] = v;
        compositions(rest - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}
