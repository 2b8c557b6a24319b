//! Manifold input data: compactly supported cohomology with twisted
//! coefficients, its cup products, and the invariants derived from it.
//!
//! Twists are tracked by parity only: parity 0 is rational coefficients,
//! parity 1 is the orientation local system. Classes inside a parity are
//! ordered by degree, then by order of appearance in the input.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Q};

/// Index of a basis class: twist parity plus position inside that parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassRef {
    pub twist: u8,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub label: String,
    pub deg: u32,
}

/// A linear combination of basis classes of a single twist parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub twist: u8,
    pub terms: BTreeMap<usize, Q>,
}

impl Cochain {
    pub fn basis(c: ClassRef) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(c.index, Q::one());
        Cochain { twist: c.twist, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Q {
        self.terms.get(&index).cloned().unwrap_or_else(Q::zero)
    }

    fn add_scaled(&mut self, index: usize, c: &Q) {
        let e = self.terms.entry(index).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }
}

/// Validated compactly supported cohomology ring of a manifold.
#[derive(Clone, Debug)]
pub struct ManifoldData {
    name: String,
    dim: u32,
    orientable: bool,
    classes: [Vec<BasisClass>; 2],
    cup: BTreeMap<(ClassRef, ClassRef), Vec<(usize, Q)>>,
    fundamental: ClassRef,
}

impl ManifoldData {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn classes(&self, twist: u8) -> &[BasisClass] {
        &self.classes[(twist & 1) as usize]
    }

    pub fn class(&self, c: ClassRef) -> &BasisClass {
        &self.classes[c.twist as usize][c.index]
    }

    pub fn class_refs(&self, twist: u8) -> impl Iterator<Item = ClassRef> + '_ {
        let twist = twist & 1;
        (0..self.classes[twist as usize].len()).map(move |index| ClassRef { twist, index })
    }

    /// The designated generator of H_c^d with orientation twist.
    pub fn fundamental_class(&self) -> ClassRef {
        self.fundamental
    }

    /// Cup product of two basis classes; the result lives in parity
    /// `x.twist + y.twist mod 2`.
    pub fn cup(&self, x: ClassRef, y: ClassRef) -> Cochain {
        let twist = (x.twist + y.twist) & 1;
        let terms = self
            .cup
            .get(&(x, y))
            .map(|v| v.iter().cloned().collect())
            .unwrap_or_default();
        Cochain { twist, terms }
    }

    pub fn cup_cochains(&self, a: &Cochain, b: &Cochain) -> Cochain {
        let mut out = Cochain { twist: (a.twist + b.twist) & 1, terms: BTreeMap::new() };
        for (&i, ci) in &a.terms {
            for (&j, cj) in &b.terms {
                let x = ClassRef { twist: a.twist, index: i };
                let y = ClassRef { twist: b.twist, index: j };
                if let Some(res) = self.cup.get(&(x, y)) {
                    let cij = ci * cj;
                    for (k, c) in res {
                        out.add_scaled(*k, &(&cij * c));
                    }
                }
            }
        }
        out
    }

    /// Left-associated iterated cup product `((x1 ∪ x2) ∪ x3) ∪ ...`.
    pub fn iterated_cup(&self, factors: &[ClassRef]) -> Cochain {
        let mut iter = factors.iter();
        let first = match iter.next() {
            Some(c) => Cochain::basis(*c),
            None => panic!("iterated_cup of an empty tuple"),
        };
        iter.fold(first, |acc, c| self.cup_cochains(&acc, &Cochain::basis(*c)))
    }

    /// dim H_c^q(M; twist) for 0 ≤ q ≤ d.
    pub fn hc_dims(&self, twist: u8) -> Vec<usize> {
        let mut dims = vec![0; self.dim as usize + 1];
        for c in self.classes(twist) {
            dims[c.deg as usize] += 1;
        }
        dims
    }

    /// dim H^q(M; twist) = dim H_c^{d−q}(M; twist + 1) by Poincaré–Lefschetz duality.
    pub fn ordinary_betti(&self, twist: u8) -> Vec<usize> {
        let hc = self.hc_dims((twist + 1) & 1);
        let d = self.dim as usize;
        (0..=d).map(|q| hc[d - q]).collect()
    }

    pub fn euler_char(&self, twist: u8) -> i64 {
        self.ordinary_betti(twist)
            .iter()
            .enumerate()
            .map(|(q, &b)| if q % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Checks every invariant; the first violation is reported.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        for twist in 0..2u8 {
            for c in self.classes(twist) {
                if c.deg > d {
                    return Err(Error::Validation(format!(
                        "class {} has degree {} > dimension {}",
                        c.label, c.deg, d
                    )));
                }
            }
        }
        let top = self.hc_dims(1)[d as usize];
        if top != 1 {
            return Err(Error::Validation(format!(
                "not connected: dim H_c^{d}(M; w1) = {top}, expected 1"
            )));
        }
        let f = self.fundamental;
        if f.twist != 1 || self.class(f).deg != d {
            return Err(Error::Validation(
                "fundamental class must be the twisted class of degree d".into(),
            ));
        }
        if self.orientable && self.classes[0] != self.classes[1] {
            return Err(Error::Validation(
                "orientable manifold but parity-1 classes differ from parity-0 classes".into(),
            ));
        }
        for (&(x, y), res) in &self.cup {
            let deg = self.class(x).deg + self.class(y).deg;
            let twist = (x.twist + y.twist) & 1;
            for (k, _) in res {
                let target = &self.classes[twist as usize][*k];
                if target.deg != deg {
                    return Err(Error::Validation(format!(
                        "cup({},{}) has a term {} of degree {} instead of {}",
                        self.class(x).label,
                        self.class(y).label,
                        target.label,
                        target.deg,
                        deg
                    )));
                }
            }
        }
        let all: Vec<ClassRef> = self.class_refs(0).chain(self.class_refs(1)).collect();
        for &x in &all {
            for &y in &all {
                let a = self.class(x).deg;
                let b = self.class(y).deg;
                let xy = self.cup(x, y);
                let mut yx = self.cup(y, x);
                if (a * b) % 2 == 1 {
                    for v in yx.terms.values_mut() {
                        *v = -v.clone();
                    }
                }
                if xy != yx {
                    return Err(Error::Validation(format!(
                        "cup not graded-commutative at ({},{})",
                        self.describe(x),
                        self.describe(y)
                    )));
                }
            }
        }
        for &x in &all {
            for &y in &all {
                let xy = self.cup(x, y);
                for &z in &all {
                    let left = self.cup_cochains(&xy, &Cochain::basis(z));
                    let yz = self.cup(y, z);
                    let right = self.cup_cochains(&Cochain::basis(x), &yz);
                    if left != right {
                        return Err(Error::Validation(format!(
                            "cup not associative at ({},{},{})",
                            self.describe(x),
                            self.describe(y),
                            self.describe(z)
                        )));
                    }
                }
            }
        }
        if self.orientable {
            for (&(x, y), res) in &self.cup {
                let x0 = ClassRef { twist: 0, ..x };
                let y0 = ClassRef { twist: 0, ..y };
                if self.cup.get(&(x0, y0)) != Some(res) {
                    return Err(Error::Validation(format!(
                        "orientable manifold but twisted cup({},{}) differs from untwisted",
                        self.describe(x),
                        self.describe(y)
                    )));
                }
            }
        }
        Ok(())
    }

    fn describe(&self, c: ClassRef) -> String {
        format!("{}@{}", self.class(c).label, c.twist)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ManifoldDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_document(doc: ManifoldDocument) -> Result<Self> {
        let d = doc.dim;
        if d == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        for key in doc.hc.keys() {
            if key != "0" && key != "1" {
                return Err(Error::Parse(format!("hc key `{key}` is not \"0\" or \"1\"")));
            }
        }
        let mut classes: [Vec<BasisClass>; 2] = [Vec::new(), Vec::new()];
        for twist in 0..2usize {
            let blocks = match doc.hc.get(&twist.to_string()) {
                Some(b) => b.clone(),
                None if twist == 1 && doc.orientable => {
                    doc.hc.get("0").cloned().unwrap_or_default()
                }
                None => Vec::new(),
            };
            let mut blocks = blocks;
            blocks.sort_by_key(|b| b.deg);
            for b in blocks {
                if b.deg > d {
                    return Err(Error::Validation(format!(
                        "H_c^{} listed but the dimension is {}",
                        b.deg, d
                    )));
                }
                for label in b.labels {
                    if classes[twist].iter().any(|c| c.label == label) {
                        return Err(Error::Validation(format!(
                            "duplicate label `{label}` in twist {twist}"
                        )));
                    }
                    classes[twist].push(BasisClass { label, deg: b.deg });
                }
            }
        }
        let lookup = |key: &ClassKey| -> Result<ClassRef> {
            if key.twist > 1 {
                return Err(Error::Parse(format!("twist {} is not 0 or 1", key.twist)));
            }
            let index = classes[key.twist as usize]
                .iter()
                .position(|c| c.label == key.label)
                .ok_or_else(|| {
                    Error::Validation(format!("unknown class `{}` in twist {}", key.label, key.twist))
                })?;
            if classes[key.twist as usize][index].deg != key.deg {
                return Err(Error::Validation(format!(
                    "class `{}` has degree {}, not {}",
                    key.label, classes[key.twist as usize][index].deg, key.deg
                )));
            }
            Ok(ClassRef { twist: key.twist, index })
        };

        let mut explicit: BTreeMap<(ClassRef, ClassRef), Vec<(usize, Q)>> = BTreeMap::new();
        for entry in &doc.cup {
            let mut x = lookup(&entry.x)?;
            let mut y = lookup(&entry.y)?;
            let deg = entry.x.deg + entry.y.deg;
            let twist = (x.twist + y.twist) & 1;
            let mut res: BTreeMap<usize, Q> = BTreeMap::new();
            for term in &entry.result {
                let c = parse_rational(&term.coeff)?;
                if c.is_zero() {
                    continue;
                }
                if deg > d {
                    return Err(Error::Validation(format!(
                        "cup({},{}) is nonzero but lands in degree {} > d = {}",
                        entry.x.label, entry.y.label, deg, d
                    )));
                }
                let k = classes[twist as usize]
                    .iter()
                    .position(|cl| cl.label == term.label)
                    .ok_or_else(|| {
                        Error::Validation(format!(
                            "cup({},{}) refers to unknown class `{}` in twist {}",
                            entry.x.label, entry.y.label, term.label, twist
                        ))
                    })?;
                if classes[twist as usize][k].deg != deg {
                    return Err(Error::Validation(format!(
                        "cup({},{}) has a term `{}` of degree {} instead of {}",
                        entry.x.label, entry.y.label, term.label, classes[twist as usize][k].deg, deg
                    )));
                }
                *res.entry(k).or_insert_with(Q::zero) += c;
            }
            res.retain(|_, v| !v.is_zero());
            let res: Vec<(usize, Q)> = res.into_iter().collect();
            if doc.orientable {
                // every parity combination carries the same product
                x.twist = 0;
                y.twist = 0;
            }
            if let Some(prev) = explicit.get(&(x, y)) {
                if *prev != res {
                    return Err(Error::Validation(format!(
                        "conflicting cup entries for ({},{})",
                        entry.x.label, entry.y.label
                    )));
                }
            }
            explicit.insert((x, y), res);
        }

        let mut cup = explicit.clone();
        for (&(x, y), res) in &explicit {
            if x == y || explicit.contains_key(&(y, x)) {
                continue;
            }
            let sign_odd = (classes[x.twist as usize][x.index].deg
                * classes[y.twist as usize][y.index].deg)
                % 2
                == 1;
            let swapped = res
                .iter()
                .map(|(k, c)| (*k, if sign_odd { -c.clone() } else { c.clone() }))
                .collect();
            cup.insert((y, x), swapped);
        }
        if doc.orientable {
            let base: Vec<_> = cup.iter().map(|(k, v)| (*k, v.clone())).collect();
            for ((x, y), res) in base {
                for tx in 0..2u8 {
                    for ty in 0..2u8 {
                        let key = (ClassRef { twist: tx, ..x }, ClassRef { twist: ty, ..y });
                        cup.insert(key, res.clone());
                    }
                }
            }
        }
        cup.retain(|_, v| !v.is_empty());

        let mut fundamental = lookup(&doc.fundamental_class)?;
        if doc.orientable {
            fundamental.twist = 1;
        }
        let m = ManifoldData {
            name: doc.name,
            dim: d,
            orientable: doc.orientable,
            classes,
            cup,
            fundamental,
        };
        m.validate()?;
        Ok(m)
    }

    /// Serialises back to the file format; cup products are listed for
    /// every ordered pair with a nonzero result.
    pub fn to_document(&self) -> ManifoldDocument {
        let mut hc = BTreeMap::new();
        for twist in 0..2u8 {
            let mut blocks: Vec<DegreeBlock> = Vec::new();
            for c in self.classes(twist) {
                match blocks.last_mut() {
                    Some(b) if b.deg == c.deg => b.labels.push(c.label.clone()),
                    _ => blocks.push(DegreeBlock { deg: c.deg, labels: vec![c.label.clone()] }),
                }
            }
            hc.insert(twist.to_string(), blocks);
        }
        let key = |c: ClassRef| ClassKey {
            twist: c.twist,
            deg: self.class(c).deg,
            label: self.class(c).label.clone(),
        };
        let cup = self
            .cup
            .iter()
            .map(|(&(x, y), res)| CupEntry {
                x: key(x),
                y: key(y),
                result: res
                    .iter()
                    .map(|(k, c)| Term {
                        label: self.classes[((x.twist + y.twist) & 1) as usize][*k].label.clone(),
                        coeff: c.to_string(),
                    })
                    .collect(),
            })
            .collect();
        ManifoldDocument {
            name: self.name.clone(),
            dim: self.dim,
            orientable: self.orientable,
            hc,
            cup,
            fundamental_class: key(self.fundamental),
        }
    }
}

fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(Error::Parse(format!("coefficient `{s}` is not a p/q rational")));
    }
    let q = Q::from_str(s).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    Ok(q)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ManifoldDocument {
    pub name: String,
    pub dim: u32,
    pub orientable: bool,
    pub hc: BTreeMap<String, Vec<DegreeBlock>>,
    #[serde(default)]
    pub cup: Vec<CupEntry>,
    pub fundamental_class: ClassKey,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegreeBlock {
    pub deg: u32,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassKey {
    pub twist: u8,
    pub deg: u32,
    pub label: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CupEntry {
    pub x: ClassKey,
    pub y: ClassKey,
    pub result: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub label: String,
    pub coeff: String,
}

/// The built-in example manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Euclidean(u32),
    Sphere(u32),
    PuncturedSurface(u32),
    ClosedSurface(u32),
    Moebius,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Euclidean(d) => write!(f, "euclidean:{d}"),
            Builtin::Sphere(d) => write!(f, "sphere:{d}"),
            Builtin::PuncturedSurface(g) => write!(f, "punctured_surface:{g}"),
            Builtin::ClosedSurface(g) => write!(f, "closed_surface:{g}"),
            Builtin::Moebius => write!(f, "moebius"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    /// Parses `name[:param]`, e.g. `sphere:4` or `moebius`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => {
                let v: i64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("`{p}` is not an integer")))?;
                (n.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        builtin_kind(name, param)
    }
}

fn builtin_kind(name: &str, param: Option<i64>) -> Result<Builtin> {
    let need = |what: &str, min: i64| -> Result<u32> {
        let v = param.ok_or_else(|| {
            Error::InvalidParameter(format!("{name} needs a parameter {what}"))
        })?;
        if v < min {
            return Err(Error::InvalidParameter(format!("{name}: {what} = {v} < {min}")));
        }
        u32::try_from(v).map_err(|_| Error::InvalidParameter(format!("{name}: {what} too large")))
    };
    match name {
        "euclidean" => Ok(Builtin::Euclidean(need("d", 1)?)),
        "sphere" => Ok(Builtin::Sphere(need("d", 1)?)),
        "punctured_surface" => Ok(Builtin::PuncturedSurface(need("g", 0)?)),
        "closed_surface" => Ok(Builtin::ClosedSurface(need("g", 0)?)),
        "moebius" => match param {
            None => Ok(Builtin::Moebius),
            Some(_) => Err(Error::InvalidParameter("moebius takes no parameter".into())),
        },
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}

/// `builtin("punctured_surface", Some(2))` and friends.
pub fn builtin(name: &str, param: Option<i64>) -> Result<ManifoldData> {
    builtin_kind(name, param)?.build()
}

impl Builtin {
    pub fn build(self) -> Result<ManifoldData> {
        ManifoldData::from_document(self.document())
    }

    fn document(self) -> ManifoldDocument {
        let key = |twist: u8, deg: u32, label: &str| ClassKey { twist, deg, label: label.into() };
        let one = |label: &str| vec![Term { label: label.into(), coeff: "1".into() }];
        let mut hc0: Vec<DegreeBlock> = Vec::new();
        let mut cup = Vec::new();
        let (dim, orientable, name) = match self {
            Builtin::Euclidean(d) => {
                hc0.push(DegreeBlock { deg: d, labels: vec!["mu".into()] });
                (d, true, format!("R^{d}"))
            }
            Builtin::Sphere(d) => {
                hc0.push(DegreeBlock { deg: 0, labels: vec!["1".into()] });
                hc0.push(DegreeBlock { deg: d, labels: vec!["mu".into()] });
                cup.push(CupEntry { x: key(0, 0, "1"), y: key(0, 0, "1"), result: one("1") });
                cup.push(CupEntry { x: key(0, 0, "1"), y: key(0, d, "mu"), result: one("mu") });
                (d, true, format!("S^{d}"))
            }
            Builtin::PuncturedSurface(g) | Builtin::ClosedSurface(g) => {
                let closed = matches!(self, Builtin::ClosedSurface(_));
                if closed {
                    hc0.push(DegreeBlock { deg: 0, labels: vec!["1".into()] });
                }
                let mut h1 = Vec::new();
                for i in 1..=g {
                    h1.push(format!("a{i}"));
                    h1.push(format!("b{i}"));
                }
                if !h1.is_empty() {
                    hc0.push(DegreeBlock { deg: 1, labels: h1 });
                }
                hc0.push(DegreeBlock { deg: 2, labels: vec!["mu".into()] });
                for i in 1..=g {
                    cup.push(CupEntry {
                        x: key(0, 1, &format!("a{i}")),
                        y: key(0, 1, &format!("b{i}")),
                        result: one("mu"),
                    });
                }
                if closed {
                    cup.push(CupEntry { x: key(0, 0, "1"), y: key(0, 0, "1"), result: one("1") });
                    cup.push(CupEntry { x: key(0, 0, "1"), y: key(0, 2, "mu"), result: one("mu") });
                    for i in 1..=g {
                        for l in [format!("a{i}"), format!("b{i}")] {
                            cup.push(CupEntry {
                                x: key(0, 0, "1"),
                                y: key(0, 1, &l),
                                result: one(&l),
                            });
                        }
                    }
                }
                let name = if closed {
                    format!("closed surface of genus {g}")
                } else {
                    format!("punctured surface of genus {g}")
                };
                (2, true, name)
            }
            Builtin::Moebius => {
                let mut hc = BTreeMap::new();
                hc.insert("0".to_string(), Vec::new());
                hc.insert(
                    "1".to_string(),
                    vec![
                        DegreeBlock { deg: 1, labels: vec!["e".into()] },
                        DegreeBlock { deg: 2, labels: vec!["mu".into()] },
                    ],
                );
                return ManifoldDocument {
                    name: "open Moebius band".into(),
                    dim: 2,
                    orientable: false,
                    hc,
                    cup: Vec::new(),
                    fundamental_class: key(1, 2, "mu"),
                };
            }
        };
        let mut hc = BTreeMap::new();
        hc.insert("0".to_string(), hc0.clone());
        hc.insert("1".to_string(), hc0);
        ManifoldDocument {
            name,
            dim,
            orientable,
            hc,
            cup,
            fundamental_class: key(1, dim, "mu"),
        }
    }
}

/// The builtin instances exercised by the test suites and the CLI sweeps.
pub fn standard_builtins() -> Vec<Builtin> {
    vec![
        Builtin::Euclidean(1),
        Builtin::Euclidean(2),
        Builtin::Euclidean(3),
        Builtin::Euclidean(4),
        Builtin::Sphere(1),
        Builtin::Sphere(2),
        Builtin::Sphere(3),
        Builtin::Sphere(4),
        Builtin::PuncturedSurface(0),
        Builtin::PuncturedSurface(1),
        Builtin::PuncturedSurface(2),
        Builtin::ClosedSurface(0),
        Builtin::ClosedSurface(1),
        Builtin::ClosedSurface(2),
        Builtin::Moebius,
    ]
}
