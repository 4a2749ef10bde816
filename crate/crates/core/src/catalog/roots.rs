use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};

use super::CatalogError;

/// A vector in the ambient space of a root system, with exact rational
/// coordinates. Roots and chamber rays always have integer coordinates;
/// reflected vectors may not.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootVector {
    coords: Vec<Rational>,
}

impl RootVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self { coords: arith::to_rational(coords) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![Rational::zero(); dim] }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RootVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in dot product");
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn scaled(&self, factor: Rational) -> RootVector {
        RootVector { coords: self.coords.iter().map(|x| x * factor).collect() }
    }

    pub fn sub(&self, other: &RootVector) -> RootVector {
        RootVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &RootVector) -> RootVector {
        RootVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    /// Integer coordinates, if every coordinate is integral.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// Primitive integer vector on the same ray (orientation preserved).
    pub fn primitive(&self) -> Vec<i64> {
        arith::primitive(&self.coords)
    }

    /// Primitive integer representative of the line through this vector,
    /// with positive leading coordinate.
    pub fn line_normal_form(&self) -> Vec<i64> {
        arith::sign_normalize(self.primitive())
    }

    /// Concatenate coordinates (direct sum of ambient spaces).
    pub fn concat(parts: &[RootVector]) -> RootVector {
        RootVector { coords: parts.iter().flat_map(|p| p.coords.iter().copied()).collect() }
    }

    pub fn slice(&self, start: usize, len: usize) -> RootVector {
        RootVector { coords: self.coords[start..start + len].to_vec() }
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Length class of a root within its irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitTag {
    Short,
    Middle,
    Long,
    Doubled,
}

impl fmt::Display for OrbitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbitTag::Short => "short",
            OrbitTag::Middle => "middle",
            OrbitTag::Long => "long",
            OrbitTag::Doubled => "doubled",
        };
        f.write_str(s)
    }
}

/// Cartan type of an irreducible (possibly non-reduced) root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    BC(usize),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl RootType {
    pub fn rank(self) -> usize {
        match self {
            RootType::A(n) | RootType::B(n) | RootType::C(n) | RootType::D(n) | RootType::BC(n) => n,
            RootType::E6 => 6,
            RootType::E7 => 7,
            RootType::E8 => 8,
            RootType::F4 => 4,
            RootType::G2 => 2,
        }
    }

    pub fn ambient_dim(self) -> usize {
        match self {
            RootType::A(n) => n + 1,
            RootType::B(n) | RootType::C(n) | RootType::D(n) | RootType::BC(n) => n,
            RootType::E6 | RootType::E7 | RootType::E8 => 8,
            RootType::F4 => 4,
            RootType::G2 => 3,
        }
    }

    /// Number of positive roots (counting both α and 2α for BC).
    pub fn positive_root_count(self) -> usize {
        match self {
            RootType::A(n) => n * (n + 1) / 2,
            RootType::B(n) | RootType::C(n) => n * n,
            RootType::BC(n) => n * n + n,
            RootType::D(n) => n * (n - 1),
            RootType::E6 => 36,
            RootType::E7 => 63,
            RootType::E8 => 120,
            RootType::F4 => 24,
            RootType::G2 => 6,
        }
    }

    pub fn is_reduced(self) -> bool {
        !matches!(self, RootType::BC(_))
    }

    pub fn label(self) -> String {
        match self {
            RootType::A(n) => format!("A{n}"),
            RootType::B(n) => format!("B{n}"),
            RootType::C(n) => format!("C{n}"),
            RootType::D(n) => format!("D{n}"),
            RootType::BC(n) => format!("BC{n}"),
            RootType::E6 => "E6".into(),
            RootType::E7 => "E7".into(),
            RootType::E8 => "E8".into(),
            RootType::F4 => "F4".into(),
            RootType::G2 => "G2".into(),
        }
    }

    fn unit(dim: usize, i: usize, scale: i64) -> Vec<i64> {
        let mut v = vec![0; dim];
        v[i] = scale;
        v
    }

    fn diff(dim: usize, i: usize, j: usize) -> Vec<i64> {
        let mut v = vec![0; dim];
        v[i] += 1;
        v[j] -= 1;
        v
    }

    /// Simple roots with integer coordinates. The E and F series are
    /// scaled by 2 to clear the half-integers of the usual realisation.
    pub fn simple_roots(self) -> Vec<Vec<i64>> {
        let d = self.ambient_dim();
        match self {
            RootType::A(n) => (0..n).map(|i| Self::diff(d, i, i + 1)).collect(),
            RootType::B(n) | RootType::BC(n) => {
                let mut s: Vec<_> = (0..n - 1).map(|i| Self::diff(d, i, i + 1)).collect();
                s.push(Self::unit(d, n - 1, 1));
                s
            }
            RootType::C(n) => {
                let mut s: Vec<_> = (0..n - 1).map(|i| Self::diff(d, i, i + 1)).collect();
                s.push(Self::unit(d, n - 1, 2));
                s
            }
            RootType::D(n) => {
                let mut s: Vec<_> = (0..n - 1).map(|i| Self::diff(d, i, i + 1)).collect();
                let mut last = vec![0; d];
                last[n - 2] = 1;
                last[n - 1] = 1;
                s.push(last);
                s
            }
            RootType::G2 => vec![vec![1, -1, 0], vec![-2, 1, 1]],
            RootType::F4 => vec![
                vec![0, 2, -2, 0],
                vec![0, 0, 2, -2],
                vec![0, 0, 0, 2],
                vec![1, -1, -1, -1],
            ],
            RootType::E6 | RootType::E7 | RootType::E8 => {
                let mut s = vec![
                    vec![1, -1, -1, -1, -1, -1, -1, 1],
                    vec![2, 2, 0, 0, 0, 0, 0, 0],
                ];
                for i in 0..6 {
                    let mut v = vec![0; 8];
                    v[i] = -2;
                    v[i + 1] = 2;
                    s.push(v);
                }
                s.truncate(self.rank());
                s
            }
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// One positive restricted root with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedRoot {
    pub vector: RootVector,
    /// Coefficients on the simple roots of the whole (possibly product) system.
    pub coefficients: Vec<i64>,
    pub multiplicity: u32,
    pub orbit_tag: OrbitTag,
    /// Irreducible component this root belongs to.
    pub component: usize,
}

impl RestrictedRoot {
    pub fn height(&self) -> i64 {
        self.coefficients.iter().sum()
    }

    pub fn eval(&self, v: &RootVector) -> Rational {
        self.vector.dot(v)
    }
}

/// Multiplicities of one irreducible component, keyed by length class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMultiplicities {
    pub root_type: RootType,
    pub by_tag: Vec<(OrbitTag, u32)>,
}

impl ComponentMultiplicities {
    pub fn uniform(root_type: RootType, m: u32) -> Self {
        let tags = tags_for(root_type);
        Self { root_type, by_tag: tags.into_iter().map(|t| (t, m)).collect() }
    }

    pub fn get(&self, tag: OrbitTag) -> Option<u32> {
        self.by_tag.iter().find(|(t, _)| *t == tag).map(|(_, m)| *m)
    }
}

/// Length classes present in a root type.
pub fn tags_for(root_type: RootType) -> Vec<OrbitTag> {
    match root_type {
        RootType::A(_) | RootType::D(_) | RootType::E6 | RootType::E7 | RootType::E8 => {
            vec![OrbitTag::Long]
        }
        RootType::B(1) | RootType::C(1) => vec![OrbitTag::Long],
        RootType::BC(1) => vec![OrbitTag::Short, OrbitTag::Doubled],
        RootType::BC(_) => vec![OrbitTag::Short, OrbitTag::Middle, OrbitTag::Doubled],
        RootType::B(_) | RootType::C(_) | RootType::F4 | RootType::G2 => {
            vec![OrbitTag::Short, OrbitTag::Long]
        }
    }
}

/// A restricted root system: positive roots in canonical order (height,
/// then lexicographic on simple-root coefficients), the simple roots, and
/// the simple reflections generating the Weyl group.
#[derive(Clone, Debug)]
pub struct RestrictedRootSystem {
    pub components: Vec<RootType>,
    pub rank: usize,
    pub ambient_dim: usize,
    pub positive_roots: Vec<RestrictedRoot>,
    /// Indices into `positive_roots`, one per simple root, in Dynkin order.
    pub simple_indices: Vec<usize>,
    simple: Vec<RootVector>,
    /// Inverse Gram matrix of the simple roots.
    gram_inverse: Vec<Vec<Rational>>,
    /// Component ranges: (ambient offset, ambient dim, simple offset, rank).
    blocks: Vec<(usize, usize, usize, usize)>,
}

impl RestrictedRootSystem {
    /// Build an irreducible system by reflection saturation of its simple
    /// roots, attaching multiplicities per length class.
    pub fn irreducible(mults: &ComponentMultiplicities) -> Result<Self, CatalogError> {
        Self::product(std::slice::from_ref(mults))
    }

    /// Direct sum of irreducible systems; root lists are concatenated in
    /// factor order, each factor in its own canonical order.
    pub fn product(parts: &[ComponentMultiplicities]) -> Result<Self, CatalogError> {
        let ambient_dim: usize = parts.iter().map(|p| p.root_type.ambient_dim()).sum();
        let rank: usize = parts.iter().map(|p| p.root_type.rank()).sum();
        let mut simple = Vec::with_capacity(rank);
        let mut positive_roots = Vec::new();
        let mut simple_indices = Vec::with_capacity(rank);
        let mut blocks = Vec::new();
        let (mut amb_off, mut simple_off) = (0, 0);
        for (component, part) in parts.iter().enumerate() {
            let t = part.root_type;
            let block_simple: Vec<Vec<i64>> = t.simple_roots();
            let roots = saturate(t, &block_simple)?;
            let embed = |v: &[i64]| {
                let mut full = vec![0i64; ambient_dim];
                full[amb_off..amb_off + v.len()].copy_from_slice(v);
                full
            };
            let tags = classify(t, &roots);
            let first = positive_roots.len();
            for ((root, coeffs), tag) in roots.iter().zip(tags) {
                let multiplicity = part.get(tag).ok_or_else(|| {
                    CatalogError::InconsistentCatalog(format!(
                        "no multiplicity for {tag} roots of {t}"
                    ))
                })?;
                if multiplicity == 0 {
                    return Err(CatalogError::InconsistentCatalog(format!(
                        "zero multiplicity for {tag} roots of {t}"
                    )));
                }
                let mut coefficients = vec![0i64; rank];
                coefficients[simple_off..simple_off + coeffs.len()].copy_from_slice(coeffs);
                positive_roots.push(RestrictedRoot {
                    vector: RootVector::from_ints(&embed(root)),
                    coefficients,
                    multiplicity,
                    orbit_tag: tag,
                    component,
                });
            }
            for s in &block_simple {
                let idx = positive_roots[first..]
                    .iter()
                    .position(|r| r.vector == RootVector::from_ints(&embed(s)))
                    .expect("simple root present after saturation");
                simple_indices.push(first + idx);
                simple.push(RootVector::from_ints(&embed(s)));
            }
            blocks.push((amb_off, t.ambient_dim(), simple_off, t.rank()));
            amb_off += t.ambient_dim();
            simple_off += t.rank();
        }
        let gram: Vec<Vec<Rational>> =
            simple.iter().map(|a| simple.iter().map(|b| a.dot(b)).collect()).collect();
        let gram_inverse = arith::invert(&gram).ok_or_else(|| {
            CatalogError::InconsistentCatalog("simple roots are linearly dependent".into())
        })?;
        Ok(Self {
            components: parts.iter().map(|p| p.root_type).collect(),
            rank,
            ambient_dim,
            positive_roots,
            simple_indices,
            simple,
            gram_inverse,
            blocks,
        })
    }

    pub fn type_label(&self) -> String {
        self.components.iter().map(|t| t.label()).collect::<Vec<_>>().join("×")
    }

    pub fn simple_roots(&self) -> &[RootVector] {
        &self.simple
    }

    /// Simple reflection `s_i(v) = v - 2<α_i,v>/<α_i,α_i> α_i`.
    pub fn reflect(&self, i: usize, v: &RootVector) -> RootVector {
        let a = &self.simple[i];
        let c = Rational::from_integer(2) * a.dot(v) / a.norm2();
        v.sub(&a.scaled(c))
    }

    /// Values `<α_j, v>` on the simple roots.
    pub fn simple_evaluations(&self, v: &RootVector) -> Vec<Rational> {
        self.simple.iter().map(|a| a.dot(v)).collect()
    }

    /// True when `v` lies in the real span of the roots.
    pub fn in_span(&self, v: &RootVector) -> bool {
        if v.dim() != self.ambient_dim {
            return false;
        }
        self.project(v) == *v
    }

    /// Orthogonal projection onto the span of the roots.
    pub fn project(&self, v: &RootVector) -> RootVector {
        let b = self.simple_evaluations(v);
        let mut out = RootVector::zero(self.ambient_dim);
        for (k, row) in self.gram_inverse.iter().enumerate() {
            let c: Rational = row.iter().zip(&b).map(|(g, x)| g * x).sum();
            if !c.is_zero() {
                out = out.add(&self.simple[k].scaled(c));
            }
        }
        out
    }

    /// Fundamental coweight `ω_i`: the vector in the root span with
    /// `<α_j, ω_i> = δ_ij`.
    pub fn fundamental_coweight(&self, i: usize) -> RootVector {
        let mut out = RootVector::zero(self.ambient_dim);
        for k in 0..self.rank {
            let c = self.gram_inverse[k][i];
            if !c.is_zero() {
                out = out.add(&self.simple[k].scaled(c));
            }
        }
        out
    }

    /// (ambient offset, ambient dim, simple offset, rank) of each factor.
    pub fn blocks(&self) -> &[(usize, usize, usize, usize)] {
        &self.blocks
    }

    /// Number of columns of an incidence matrix: `Σ multiplicities`.
    pub fn column_count(&self) -> usize {
        self.positive_roots.iter().map(|r| r.multiplicity as usize).sum()
    }

    /// Saturate `v` under the simple reflections.
    pub fn orbit(&self, v: &RootVector, cap: usize) -> Result<BTreeSet<RootVector>, CatalogError> {
        let mut seen: HashSet<RootVector> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(v.clone());
        queue.push_back(v.clone());
        while let Some(x) = queue.pop_front() {
            for i in 0..self.rank {
                let y = self.reflect(i, &x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(CatalogError::OrbitBudgetExceeded { cap });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// All positive roots of a reduced or BC type from its simple roots, with
/// their simple-root coefficients, in canonical order.
fn saturate(t: RootType, simple: &[Vec<i64>]) -> Result<Vec<(Vec<i64>, Vec<i64>)>, CatalogError> {
    let r = simple.len();
    let norms: Vec<i64> = simple.iter().map(|a| arith::dot_i64(a, a)).collect();
    let mut seen: HashSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for (i, a) in simple.iter().enumerate() {
            let num = 2 * arith::dot_i64(a, &x);
            if num % norms[i] != 0 {
                return Err(CatalogError::InconsistentCatalog(format!(
                    "non-integral Cartan number in {t}"
                )));
            }
            let c = num / norms[i];
            let y: Vec<i64> = x.iter().zip(a).map(|(xi, ai)| xi - c * ai).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let gram: Vec<Vec<Rational>> = simple
        .iter()
        .map(|a| simple.iter().map(|b| Rational::from_integer(arith::dot_i64(a, b))).collect())
        .collect();
    let inv = arith::invert(&gram).expect("simple roots independent");
    let coefficients = |x: &[i64]| -> Vec<i64> {
        let b: Vec<Rational> =
            simple.iter().map(|a| Rational::from_integer(arith::dot_i64(a, x))).collect();
        inv.iter()
            .map(|row| {
                let c: Rational = row.iter().zip(&b).map(|(g, y)| g * y).sum();
                assert!(c.is_integer(), "root with non-integral coefficients");
                c.to_integer()
            })
            .collect()
    };
    let mut positive: Vec<(Vec<i64>, Vec<i64>)> = seen
        .into_iter()
        .map(|x| {
            let c = coefficients(&x);
            (x, c)
        })
        .filter(|(_, c)| c.iter().all(|&k| k >= 0))
        .collect();
    if matches!(t, RootType::BC(_)) {
        let doubled: Vec<_> = positive
            .iter()
            .filter(|(x, _)| arith::dot_i64(x, x) == 1)
            .map(|(x, c)| (x.iter().map(|k| 2 * k).collect(), c.iter().map(|k| 2 * k).collect()))
            .collect();
        positive.extend(doubled);
    }
    positive.sort_by(|(_, a), (_, b)| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    if positive.len() != t.positive_root_count() || r != t.rank() {
        return Err(CatalogError::InconsistentCatalog(format!(
            "{t}: saturation produced {} positive roots, expected {}",
            positive.len(),
            t.positive_root_count()
        )));
    }
    Ok(positive)
}

fn classify(t: RootType, roots: &[(Vec<i64>, Vec<i64>)]) -> Vec<OrbitTag> {
    let lengths: BTreeSet<i64> = roots.iter().map(|(x, _)| arith::dot_i64(x, x)).collect();
    let lengths: Vec<i64> = lengths.into_iter().collect();
    roots
        .iter()
        .map(|(x, _)| {
            let l = arith::dot_i64(x, x);
            let pos = lengths.iter().position(|&k| k == l).unwrap();
            match (t, lengths.len()) {
                (_, 1) => OrbitTag::Long,
                (RootType::BC(_), 2) => [OrbitTag::Short, OrbitTag::Doubled][pos],
                (RootType::BC(_), _) => [OrbitTag::Short, OrbitTag::Middle, OrbitTag::Doubled][pos],
                _ => [OrbitTag::Short, OrbitTag::Long][pos],
            }
        })
        .collect()
}

impl Default for ComponentMultiplicities {
    fn default() -> Self {
        Self::uniform(RootType::A(1), 1)
    }
}
