//! Exact sparse matrices over ℚ and homology of finite graded complexes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result, Q};

/// Row-major sparse matrix with exact rational entries. Zero entries are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Q>>,
}

impl SparseRationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.add(i, i, Q::one());
        }
        m
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in entries {
            m.add(r, c, v);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.add(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Adds `v` to entry (r, c).
    pub fn add(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[r];
        let e = row.entry(c).or_insert_with(Q::zero);
        *e += v;
        if e.is_zero() {
            row.remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.data[c].insert(r, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    out.add(i, *j, a * b);
                }
            }
        }
        out
    }

    /// Rank over ℚ by fraction-free elimination: rows are scaled to
    /// primitive integer vectors, sparsest rows are used as pivots first,
    /// and every elimination step `b·row − a·pivot` is divided by its content.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<IntRow> = self
            .data
            .iter()
            .filter(|r| !r.is_empty())
            .map(primitive_row)
            .collect();
        rows.sort_by_key(|r| r.len());
        let mut pivots: BTreeMap<usize, IntRow> = BTreeMap::new();
        for mut row in rows {
            while let Some(&(lead, _)) = row.first() {
                match pivots.get(&lead) {
                    Some(p) => row = eliminate(&row, p),
                    None => {
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

type IntRow = Vec<(usize, BigInt)>;

fn primitive_row(row: &BTreeMap<usize, Q>) -> IntRow {
    let lcm = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: IntRow = row.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))).collect();
    normalize(ints)
}

fn normalize(mut row: IntRow) -> IntRow {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

/// `b·row − a·pivot` where a, b are the leading coefficients; the leading
/// entry cancels.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &row[0].1;
    let b = &pivot[0].1;
    let g = a.gcd(b);
    let a = a / &g;
    let b = b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        let (col, v) = if take_row {
            let r = (row[i].0, &b * &row[i].1);
            i += 1;
            r
        } else if take_piv {
            let r = (pivot[j].0, -(&a * &pivot[j].1));
            j += 1;
            r
        } else {
            let r = (row[i].0, &b * &row[i].1 - &a * &pivot[j].1);
            i += 1;
            j += 1;
            r
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    let mut out = normalize(out);
    if let Some((_, lead)) = out.first() {
        if lead.is_negative() {
            for (_, v) in out.iter_mut() {
                *v = -v.clone();
            }
        }
    }
    out
}

/// A finite complex graded by homological degree with differentials of
/// degree −1. `differential(j)` maps degree j to degree j − 1, with
/// rows indexed by the degree j − 1 basis.
pub trait GradedComplex {
    fn dims(&self) -> BTreeMap<u32, usize>;
    fn differential(&self, j: u32) -> Option<&SparseRationalMatrix>;
}

/// Checks ∂∘∂ = 0 in every degree.
pub fn check_square_zero<C: GradedComplex + ?Sized>(c: &C) -> Result<()> {
    for &j in c.dims().keys() {
        if j < 2 {
            continue;
        }
        if let (Some(dj), Some(dj1)) = (c.differential(j), c.differential(j - 1)) {
            if !dj1.mul(dj).is_zero() {
                return Err(Error::NotAComplex(j));
            }
        }
    }
    Ok(())
}

/// dim ker ∂_j − rank ∂_{j+1} for every degree with a nonzero chain group.
/// Degrees with zero homology are omitted.
pub fn homology_dims<C: GradedComplex + ?Sized>(c: &C) -> Result<BTreeMap<u32, usize>> {
    check_square_zero(c)?;
    let dims = c.dims();
    let ranks: BTreeMap<u32, usize> = dims
        .keys()
        .map(|&j| (j, c.differential(j).map_or(0, |d| d.rank())))
        .collect();
    let mut out = BTreeMap::new();
    for (&j, &n) in &dims {
        let out_rank = ranks.get(&j).copied().unwrap_or(0);
        let in_rank = ranks.get(&(j + 1)).copied().unwrap_or(0);
        let h = n - out_rank - in_rank;
        if h > 0 {
            out.insert(j, h);
        }
    }
    Ok(out)
}

/// Σ (−1)^j dim C_j.
pub fn euler_characteristic(dims: &BTreeMap<u32, usize>) -> i64 {
    dims.iter().map(|(j, n)| if j % 2 == 0 { *n as i64 } else { -(*n as i64) }).sum()
}


#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(SparseRationalMatrix::zeros(4, 7).rank(), 0);
        for n in 0..6 {
            assert_eq!(SparseRationalMatrix::identity(n).rank(), n);
        }
    }

    #[test]
    fn stored_entries_are_nonzero() {
        let m = SparseRationalMatrix::from_triplets(2, 2, vec![(0, 0, q(1)), (0, 0, q(-1)), (1, 1, q(0))]);
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn rational_entries() {
        let rows = vec![
            vec![Q::new(1.into(), 2.into()), Q::new(1.into(), 3.into())],
            vec![Q::new(3.into(), 2.into()), q(1)],
        ];
        assert_eq!(SparseRationalMatrix::from_dense(&rows).rank(), 1);
    }

    fn random_matrix(rng: &mut impl Rng) -> Vec<Vec<Q>> {
        let r = rng.gen_range(1..=8);
        let c = rng.gen_range(1..=8);
        (0..r)
            .map(|_| {
                (0..c)
                    .map(|_| match rng.gen_range(0..4) {
                        0 => q(1),
                        1 => q(-1),
                        _ => q(0),
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_matches_dense_oracle_on_random_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_matrix(&mut rng);
            let m = SparseRationalMatrix::from_dense(&a);
            let r = m.rank();
            assert_eq!(r, dense_oracle::rank(&a));
            assert_eq!(r, m.transpose().rank());
        }
    }

    #[test]
    fn rank_subadditive() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_matrix(&mut rng);
            let b: Vec<Vec<Q>> = a
                .iter()
                .map(|row| row.iter().map(|_| q(rng.gen_range(-2..=2))).collect())
                .collect();
            let sum: Vec<Vec<Q>> =
                a.iter().zip(&b).map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect()).collect();
            let ra = SparseRationalMatrix::from_dense(&a).rank();
            let rb = SparseRationalMatrix::from_dense(&b).rank();
            let rs = SparseRationalMatrix::from_dense(&sum).rank();
            assert!(rs <= ra + rb);
            assert_eq!(rs, dense_oracle::rank(&sum));
        }
    }

    struct Toy {
        dims: BTreeMap<u32, usize>,
        diffs: BTreeMap<u32, SparseRationalMatrix>,
    }

    impl GradedComplex for Toy {
        fn dims(&self) -> BTreeMap<u32, usize> {
            self.dims.clone()
        }
        fn differential(&self, j: u32) -> Option<&SparseRationalMatrix> {
            self.diffs.get(&j)
        }
    }

    #[test]
    fn homology_of_a_circle() {
        // two vertices, two edges
        let mut diffs = BTreeMap::new();
        diffs.insert(
            1,
            SparseRationalMatrix::from_triplets(
                2,
                2,
                vec![(0, 0, q(-1)), (1, 0, q(1)), (0, 1, q(1)), (1, 1, q(-1))],
            ),
        );
        let toy = Toy { dims: [(0, 2), (1, 2)].into_iter().collect(), diffs };
        let h = homology_dims(&toy).unwrap();
        assert_eq!(h, [(0, 1), (1, 1)].into_iter().collect());
        assert_eq!(euler_characteristic(&toy.dims()), euler_characteristic(&h));
    }

    #[test]
    fn detects_nonzero_square() {
        let mut diffs = BTreeMap::new();
        diffs.insert(2, SparseRationalMatrix::identity(1));
        diffs.insert(1, SparseRationalMatrix::identity(1));
        let toy = Toy { dims: [(0, 1), (1, 1), (2, 1)].into_iter().collect(), diffs };
        assert!(matches!(homology_dims(&toy), Err(Error::NotAComplex(2))));
    }
}
