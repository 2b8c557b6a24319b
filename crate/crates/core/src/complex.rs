//! Koszul complexes computing the homology of configuration spaces and
//! spaces of 0-cycles.
//!
//! For a manifold M of dimension d and parameters (m, k) the complex is the
//! free graded-commutative algebra on
//!
//! * `V1`: for each colour i, one generator per class of H_c^q(M; ℚ^{w1}),
//!   at weight 1_i and homological degree d + q;
//! * `ΣV2`: one generator per class of H_c^q(M; (ℚ^{w1})^{⊗mk}), at weight
//!   (k, …, k) and homological degree dmk + 1 + q. It is present only when d
//!   is even or k = 1; otherwise the symmetric group acts on the Thom class
//!   by the sign and this part vanishes.
//!
//! The differential kills `V1` and sends each `ΣV2` generator to the linear
//! dual of the mk-fold cup product, landing in S^k(V1_1) ⋯ S^k(V1_m); it is
//! extended to the whole algebra as a derivation. Configuration spaces are
//! (m, k) = (1, 2).

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::gca::{monomial_basis, Element, Generator, GeneratorSpace, Monomial};
use crate::linalg::{check_square_zero, GradedComplex, SparseRationalMatrix};
use crate::manifold::{ClassRef, Cochain, ManifoldData};
use crate::{Error, Result, Weight, Q};

#[derive(Clone, Debug)]
pub struct ComplexSpec {
    manifold: ManifoldData,
    m: u32,
    k: u32,
}

impl ComplexSpec {
    pub fn new(manifold: ManifoldData, m: u32, k: u32) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!("need m, k >= 1, got ({m},{k})")));
        }
        if (m, k) == (1, 1) {
            return Err(Error::InvalidParameter(
                "(m,k) = (1,1) is degenerate: the space is empty in positive weight".into(),
            ));
        }
        Ok(ComplexSpec { manifold, m, k })
    }

    /// Unordered configuration spaces.
    pub fn configurations(manifold: ManifoldData) -> Self {
        ComplexSpec { manifold, m: 1, k: 2 }
    }

    pub fn manifold(&self) -> &ManifoldData {
        &self.manifold
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn mk(&self) -> u32 {
        self.m * self.k
    }

    /// Whether the weight-(k,…,k) generators survive the Thom-class sign.
    pub fn has_v2(&self) -> bool {
        self.manifold.dim() % 2 == 0 || self.k == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    V1 { color: u32, class: ClassRef },
    V2 { class: ClassRef },
}

/// The generators of the Koszul complex together with the differential on
/// the `ΣV2` generators.
#[derive(Clone, Debug)]
pub struct GeneratorAssignment {
    m: usize,
    v1: Vec<(Generator, GeneratorKind)>,
    v2: Vec<(Generator, GeneratorKind)>,
    /// ∂ of each `ΣV2` generator, as an element of S^*(V1).
    deltas: Vec<Element>,
    dim: u32,
    mk: u32,
}

impl GeneratorAssignment {
    pub fn v1(&self) -> impl Iterator<Item = (&Generator, &GeneratorKind)> {
        self.v1.iter().map(|(g, k)| (g, k))
    }

    pub fn v2(&self) -> impl Iterator<Item = (&Generator, &GeneratorKind)> {
        self.v2.iter().map(|(g, k)| (g, k))
    }

    pub fn v1_len(&self) -> usize {
        self.v1.len()
    }

    pub fn v2_len(&self) -> usize {
        self.v2.len()
    }

    pub fn delta(&self, v2_index: usize) -> &Element {
        &self.deltas[v2_index]
    }

    /// S^*(V1) alone.
    pub fn v1_space(&self) -> GeneratorSpace {
        GeneratorSpace::new(self.m, self.v1.iter().map(|(g, _)| g.clone()).collect())
            .expect("V1 generators have nonzero weight")
    }

    /// V1 followed by ΣV2, the generators of the Koszul complex.
    pub fn koszul_space(&self) -> GeneratorSpace {
        let gens = self.v1.iter().chain(&self.v2).map(|(g, _)| g.clone()).collect();
        GeneratorSpace::new(self.m, gens).expect("generators have nonzero weight")
    }

    /// V2 without the suspension (homological degree lowered by one).
    pub fn v2_unsuspended_space(&self) -> GeneratorSpace {
        let gens = self
            .v2
            .iter()
            .map(|(g, _)| {
                Generator::new(g.label.clone(), g.degree.weight.clone(), g.degree.homdeg - 1)
            })
            .collect();
        GeneratorSpace::new(self.m, gens).expect("V2 generators have nonzero weight")
    }

    /// Removes the V1 generator dual to the fundamental class and projects
    /// the differential onto the quotient.
    fn quotient_by(&self, drop: usize) -> GeneratorAssignment {
        let keep: Vec<usize> = (0..self.v1.len()).filter(|&i| i != drop).collect();
        let v1 = keep.iter().map(|&i| self.v1[i].clone()).collect();
        let deltas = self
            .deltas
            .iter()
            .map(|e| {
                let mut out = Element::zero();
                for (mono, c) in e.terms() {
                    if mono.exponents()[drop] > 0 {
                        continue;
                    }
                    let exps = keep.iter().map(|&i| mono.exponents()[i]).collect();
                    out.add_term(Monomial::from_exponents(exps), c.clone());
                }
                out
            })
            .collect();
        GeneratorAssignment {
            m: self.m,
            v1,
            v2: self.v2.clone(),
            deltas,
            dim: self.dim,
            mk: self.mk,
        }
    }
}

fn unit_weight(m: usize, color: usize) -> Weight {
    let mut w = vec![0; m];
    w[color] = 1;
    w
}

pub fn build_generators(spec: &ComplexSpec) -> GeneratorAssignment {
    let man = &spec.manifold;
    let d = man.dim();
    let m = spec.m as usize;
    let mut v1 = Vec::new();
    for color in 0..m {
        for c in man.class_refs(1) {
            let class = man.class(c);
            let label = if m == 1 {
                format!("v[{}]", class.label)
            } else {
                format!("v{}[{}]", color + 1, class.label)
            };
            v1.push((
                Generator::new(label, unit_weight(m, color), d + class.deg),
                GeneratorKind::V1 { color: color as u32, class: c },
            ));
        }
    }
    let mut v2 = Vec::new();
    if spec.has_v2() {
        let parity = (spec.mk() % 2) as u8;
        for c in man.class_refs(parity) {
            let class = man.class(c);
            v2.push((
                Generator::new(
                    format!("w[{}]", class.label),
                    vec![spec.k; m],
                    d * spec.mk() + 1 + class.deg,
                ),
                GeneratorKind::V2 { class: c },
            ));
        }
    }
    let mut assignment =
        GeneratorAssignment { m, v1, v2, deltas: Vec::new(), dim: d, mk: spec.mk() };
    let v2_classes: Vec<ClassRef> = assignment
        .v2
        .iter()
        .map(|(_, kind)| match kind {
            GeneratorKind::V2 { class } => *class,
            GeneratorKind::V1 { .. } => unreachable!(),
        })
        .collect();
    assignment.deltas = v2_classes.iter().map(|&z| delta_on_generator(spec, &assignment, z)).collect();
    assignment
}

/// ∂ of the `ΣV2` generator dual to class `z`: the dual of the left-associated
/// mk-fold cup product, tensor factor j going to colour ⌊j/k⌋, multiplied out
/// in S^*(V1) with Koszul signs.
pub fn delta_on_generator(spec: &ComplexSpec, a: &GeneratorAssignment, z: ClassRef) -> Element {
    let man = &spec.manifold;
    let space = a.v1_space();
    let per_color = man.classes(1).len();
    let twisted: Vec<ClassRef> = man.class_refs(1).collect();
    let mut out = Element::zero();
    if twisted.is_empty() {
        return out;
    }
    let n = spec.mk() as usize;
    let mut tuple: Vec<usize> = Vec::with_capacity(n);
    expand_tuples(man, &twisted, n, &mut tuple, None, &mut |tuple, product| {
        let c = product.coeff(z.index);
        if c.is_zero() || product.twist != z.twist {
            return;
        }
        // Koszul sign for moving the suspensions Σ^d past earlier factors
        let mut susp = 0u32;
        let mut seen = 0u32;
        for &x in tuple.iter() {
            susp += spec.manifold.dim() * seen;
            seen += man.classes(1)[x].deg;
        }
        let mut coeff = c;
        if susp % 2 == 1 {
            coeff = -coeff;
        }
        let mut mono = space.unit();
        for (j, &x) in tuple.iter().enumerate() {
            let color = j / spec.k as usize;
            let gen = space.monomial_of(color * per_color + x);
            match crate::gca::multiply(&space, &mono, &gen) {
                Some((s, next)) => {
                    if s < 0 {
                        coeff = -coeff;
                    }
                    mono = next;
                }
                None => return,
            }
        }
        out.add_term(mono, coeff);
    });
    out
}

fn expand_tuples(
    man: &ManifoldData,
    classes: &[ClassRef],
    n: usize,
    tuple: &mut Vec<usize>,
    acc: Option<Cochain>,
    f: &mut dyn FnMut(&[usize], &Cochain),
) {
    if tuple.len() == n {
        if let Some(p) = &acc {
            f(tuple, p);
        }
        return;
    }
    for (i, &c) in classes.iter().enumerate() {
        let next = match &acc {
            None => Cochain::basis(c),
            Some(p) => man.cup_cochains(p, &Cochain::basis(c)),
        };
        if next.is_zero() {
            continue;
        }
        tuple.push(i);
        expand_tuples(man, classes, n, tuple, Some(next), f);
        tuple.pop();
    }
}

/// One weight of the Koszul complex.
#[derive(Clone, Debug)]
pub struct WeightSlice {
    weight: Weight,
    space: GeneratorSpace,
    bases: BTreeMap<u32, Vec<Monomial>>,
    diffs: BTreeMap<u32, SparseRationalMatrix>,
}

impl WeightSlice {
    pub fn weight(&self) -> &[u32] {
        &self.weight
    }

    pub fn space(&self) -> &GeneratorSpace {
        &self.space
    }

    pub fn basis(&self, homdeg: u32) -> &[Monomial] {
        self.bases.get(&homdeg).map_or(&[], |v| v.as_slice())
    }

    pub fn bases(&self) -> &BTreeMap<u32, Vec<Monomial>> {
        &self.bases
    }
}

impl GradedComplex for WeightSlice {
    fn dims(&self) -> BTreeMap<u32, usize> {
        self.bases.iter().map(|(j, b)| (*j, b.len())).collect()
    }

    fn differential(&self, j: u32) -> Option<&SparseRationalMatrix> {
        self.diffs.get(&j)
    }
}

pub fn build_slice(spec: &ComplexSpec, w: &[u32]) -> Result<WeightSlice> {
    let a = build_generators(spec);
    slice_from_assignment(&a, w)
}

/// The configuration-space complex with the fundamental-class generator
/// divided out; its homology is that of the mapping cone of stabilization.
pub fn build_cone_slice(manifold: &ManifoldData, n: u32) -> Result<WeightSlice> {
    let a = cone_assignment(manifold);
    slice_from_assignment(&a, &[n])
}

pub fn cone_assignment(manifold: &ManifoldData) -> GeneratorAssignment {
    let spec = ComplexSpec::configurations(manifold.clone());
    let a = build_generators(&spec);
    let f = manifold.fundamental_class();
    let drop = a
        .v1
        .iter()
        .position(|(_, kind)| matches!(kind, GeneratorKind::V1 { class, .. } if *class == f))
        .expect("fundamental class has a V1 generator");
    a.quotient_by(drop)
}

pub fn slice_from_assignment(a: &GeneratorAssignment, w: &[u32]) -> Result<WeightSlice> {
    let space = a.koszul_space();
    let bases = monomial_basis(&space, w);
    let n_v1 = a.v1.len();
    let index: HashMap<u32, HashMap<&Monomial, usize>> = bases
        .iter()
        .map(|(j, b)| (*j, b.iter().enumerate().map(|(i, m)| (m, i)).collect()))
        .collect();
    let deltas: Vec<Element> = a.deltas.iter().map(|e| embed(e, space.len())).collect();
    let mut diffs = BTreeMap::new();
    for (&j, basis) in &bases {
        if j == 0 {
            continue;
        }
        let target_len = bases.get(&(j - 1)).map_or(0, |b| b.len());
        let mut mat = SparseRationalMatrix::zeros(target_len, basis.len());
        for (col, mono) in basis.iter().enumerate() {
            let image = differential_of(&space, n_v1, &deltas, mono);
            for (t, c) in image.terms() {
                let row = index
                    .get(&(j - 1))
                    .and_then(|ix| ix.get(t))
                    .copied()
                    .expect("differential lands in the basis one degree down");
                mat.add(row, col, c.clone());
            }
        }
        if !mat.is_zero() {
            diffs.insert(j, mat);
        }
    }
    let slice = WeightSlice { weight: w.to_vec(), space, bases, diffs };
    check_square_zero(&slice)?;
    Ok(slice)
}

fn embed(e: &Element, len: usize) -> Element {
    let mut out = Element::zero();
    for (m, c) in e.terms() {
        let mut exps = m.exponents().to_vec();
        exps.resize(len, 0);
        out.add_term(Monomial::from_exponents(exps), c.clone());
    }
    out
}

/// Leibniz rule: ∂(A·g^e·B) = (−1)^{|A|} e · A · ∂g · g^{e−1}·B summed over
/// the ΣV2 generators g, where A collects the generators before g.
fn differential_of(
    space: &GeneratorSpace,
    n_v1: usize,
    deltas: &[Element],
    mono: &Monomial,
) -> Element {
    let exps = mono.exponents();
    let mut out = Element::zero();
    let mut prefix_deg = 0u32;
    for g in 0..exps.len() {
        let e = exps[g];
        if g >= n_v1 && e > 0 {
            let mut pre = vec![0u32; exps.len()];
            pre[..g].copy_from_slice(&exps[..g]);
            let mut post = exps.to_vec();
            for x in post.iter_mut().take(g) {
                *x = 0;
            }
            post[g] -= 1;
            let pre = Element::from_monomial(Monomial::from_exponents(pre));
            let post = Element::from_monomial(Monomial::from_exponents(post));
            let term = pre.mul(&deltas[g - n_v1], space).mul(&post, space);
            let mut c = Q::from_integer(e.into());
            if prefix_deg % 2 == 1 {
                c = -c;
            }
            out.add_scaled(&term, &c);
        }
        prefix_deg += e * space.generator(g).degree.homdeg;
    }
    out
}
