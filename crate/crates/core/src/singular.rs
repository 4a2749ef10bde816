//! Maximally singular rays and lines, `dim Q_v`, the invariant `t_X`, and
//! reduction of arbitrary frames to frames of maximally singular lines.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, Rational};
use crate::catalog::{RestrictedRootSystem, RootVector, SpaceDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SingularError {
    #[error("zero vector")]
    ZeroVector,
    #[error("vector has dimension {got}, ambient dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector is not in the span of the roots")]
    NotInSpan,
    #[error("degree bound needs an irreducible rank-2 space, got rank {0}")]
    NotRankTwo(usize),
    #[error("frame has {got} vectors, rank is {rank}")]
    WrongFrameSize { rank: usize, got: usize },
    #[error("frame vectors are linearly dependent")]
    Dependent,
    #[error("no independent maximally singular line satisfies containment for vector {0}")]
    NoAdmissibleRay(usize),
    #[error("Weyl group exceeds {0} elements")]
    GroupTooLarge(usize),
}

/// A chamber ray: primitive integer vector on a 1-dimensional face of the
/// closed positive chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularRay {
    pub vector: Vec<i64>,
    /// The single simple root not vanishing on this ray.
    pub index: usize,
    pub vanishing_simple: Vec<usize>,
    #[serde(skip)]
    pub nonvanishing_roots: FixedBitSet,
    pub q_dim: usize,
}

impl SingularRay {
    pub fn root_vector(&self) -> RootVector {
        RootVector::from_ints(&self.vector)
    }
}

/// A maximally singular line: a Weyl image of a chamber ray, up to sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLine {
    /// Primitive, first nonzero coordinate positive.
    pub vector: Vec<i64>,
    /// Index of the chamber ray in whose orbit this line lies.
    pub ray_type: usize,
    /// Positive roots nonvanishing on the line.
    pub support: FixedBitSet,
    pub q_dim: usize,
    /// `<α_j, v>` on the simple roots; coordinates used for independence tests.
    pub simple_values: Vec<i64>,
}

impl SingularLine {
    pub fn root_vector(&self) -> RootVector {
        RootVector::from_ints(&self.vector)
    }
}

/// A list of `rank` linearly independent vectors in the span of the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub vectors: Vec<RootVector>,
}

impl Frame {
    pub fn new(desc: &SpaceDescriptor, vectors: Vec<RootVector>) -> Result<Frame, SingularError> {
        let sys = &desc.root_system;
        if vectors.len() != desc.rank {
            return Err(SingularError::WrongFrameSize { rank: desc.rank, got: vectors.len() });
        }
        for v in &vectors {
            check_vector(sys, v)?;
        }
        let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| sys.simple_evaluations(v)).collect();
        if arith::rank(&rows) != desc.rank {
            return Err(SingularError::Dependent);
        }
        Ok(Frame { vectors })
    }

    pub fn from_ints(desc: &SpaceDescriptor, vectors: &[Vec<i64>]) -> Result<Frame, SingularError> {
        Frame::new(desc, vectors.iter().map(|v| RootVector::from_ints(v)).collect())
    }

    /// Integer coordinates of each vector, scaled to primitive form.
    pub fn to_ints(&self) -> Vec<Vec<i64>> {
        self.vectors
            .iter()
            .map(|v| v.as_ints().unwrap_or_else(|| v.primitive()))
            .collect()
    }
}

fn check_vector(sys: &RestrictedRootSystem, v: &RootVector) -> Result<(), SingularError> {
    if v.dim() != sys.ambient_dim {
        return Err(SingularError::DimensionMismatch { expected: sys.ambient_dim, got: v.dim() });
    }
    if v.is_zero() {
        return Err(SingularError::ZeroVector);
    }
    if !sys.in_span(v) {
        return Err(SingularError::NotInSpan);
    }
    Ok(())
}

/// Positive roots nonvanishing on `v`, as a bitset over canonical root order.
pub fn support(sys: &RestrictedRootSystem, v: &RootVector) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(sys.positive_roots.len());
    for (i, r) in sys.positive_roots.iter().enumerate() {
        if !r.eval(v).is_zero() {
            bits.insert(i);
        }
    }
    bits
}

fn weight(sys: &RestrictedRootSystem, bits: &FixedBitSet) -> usize {
    bits.ones().map(|i| sys.positive_roots[i].multiplicity as usize).sum()
}

/// `dim Q_v`: total multiplicity of positive roots nonvanishing on `v`.
pub fn q_dim(desc: &SpaceDescriptor, v: &RootVector) -> Result<usize, SingularError> {
    check_vector(&desc.root_system, v)?;
    Ok(weight(&desc.root_system, &support(&desc.root_system, v)))
}

/// `dim (Q_v ∩ Q_w)`.
pub fn q_intersection_dim(
    desc: &SpaceDescriptor,
    v: &RootVector,
    w: &RootVector,
) -> Result<usize, SingularError> {
    let sys = &desc.root_system;
    check_vector(sys, v)?;
    check_vector(sys, w)?;
    let mut both = support(sys, v);
    both.intersect_with(&support(sys, w));
    Ok(weight(sys, &both))
}

/// The `rank` chamber rays, the `i`-th being the fundamental coweight dual
/// to the `i`-th simple root, scaled to a primitive integer vector.
/// True when the roots vanishing on `v` span a hyperplane of the flat.
pub fn is_maximally_singular(desc: &SpaceDescriptor, v: &RootVector) -> bool {
    let sys = &desc.root_system;
    let vanishing: Vec<Vec<Rational>> = sys
        .positive_roots
        .iter()
        .filter(|r| r.vector.dot(v).is_zero())
        .map(|r| r.vector.coords().to_vec())
        .collect();
    !v.is_zero() && arith::rank(&vanishing) + 1 == desc.rank
}

pub fn maximally_singular_rays(desc: &SpaceDescriptor) -> Vec<SingularRay> {
    let sys = &desc.root_system;
    (0..sys.rank)
        .map(|i| {
            let w = sys.fundamental_coweight(i);
            let vector = w.primitive();
            let rv = RootVector::from_ints(&vector);
            let nonvanishing_roots = support(sys, &rv);
            let q_dim = weight(sys, &nonvanishing_roots);
            SingularRay {
                vector,
                index: i,
                vanishing_simple: (0..sys.rank).filter(|&j| j != i).collect(),
                nonvanishing_roots,
                q_dim,
            }
        })
        .collect()
}

/// Minimum of `dim Q_v` over maximally singular rays.
pub fn min_q_dim(desc: &SpaceDescriptor) -> usize {
    maximally_singular_rays(desc).iter().map(|r| r.q_dim).min().unwrap_or(0)
}

/// `t_X = dim X - min dim Q_v`.
pub fn t_invariant(desc: &SpaceDescriptor) -> usize {
    desc.dim_x - min_q_dim(desc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub t_x: usize,
    pub bound: usize,
    /// True when `max(6, t_X + 2)` is not `t_X + 2`.
    pub exceptional: bool,
}

/// `max(6, t_X + 2)` for an irreducible rank-2 space.
pub fn degree_bound(desc: &SpaceDescriptor) -> Result<DegreeBound, SingularError> {
    if desc.rank != 2 || desc.is_product() {
        return Err(SingularError::NotRankTwo(desc.rank));
    }
    let t_x = t_invariant(desc);
    let bound = 6.max(t_x + 2);
    Ok(DegreeBound { t_x, bound, exceptional: bound != t_x + 2 })
}

/// All maximally singular lines, grouped by chamber ray and sorted within
/// each group lexicographically. A line reached from two chamber rays (as
/// when `-w_0` swaps them) is listed once, under the first. Fails if some
/// orbit exceeds `cap`.
pub fn singular_lines(desc: &SpaceDescriptor, cap: usize) -> Result<Vec<SingularLine>, SingularError> {
    let sys = &desc.root_system;
    let mut lines = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for ray in maximally_singular_rays(desc) {
        let orbit = sys
            .orbit(&ray.root_vector(), cap)
            .map_err(|_| SingularError::GroupTooLarge(cap))?;
        let mut group: Vec<Vec<i64>> = orbit.iter().map(|v| v.line_normal_form()).collect();
        group.sort();
        group.dedup();
        group.retain(|v| seen.insert(v.clone()));
        for vector in group {
            let rv = RootVector::from_ints(&vector);
            let support = support(sys, &rv);
            let simple_values = sys
                .simple_evaluations(&rv)
                .into_iter()
                .map(|x| x.to_integer())
                .collect();
            lines.push(SingularLine {
                q_dim: weight(sys, &support),
                vector,
                ray_type: ray.index,
                support,
                simple_values,
            });
        }
    }
    Ok(lines)
}

/// The Weyl group acting on `lines` by permutations (up to sign, so `-1`
/// acts trivially when it lies in the group). Elements are distinct
/// permutations; the identity comes first.
pub fn line_permutation_group(
    desc: &SpaceDescriptor,
    lines: &[SingularLine],
    cap: usize,
) -> Result<Vec<Vec<u16>>, SingularError> {
    let sys = &desc.root_system;
    let index: HashMap<&[i64], u16> =
        lines.iter().enumerate().map(|(i, l)| (l.vector.as_slice(), i as u16)).collect();
    let generators: Vec<Vec<u16>> = (0..sys.rank)
        .map(|g| {
            lines
                .iter()
                .map(|l| {
                    let image = sys.reflect(g, &l.root_vector()).line_normal_form();
                    *index.get(image.as_slice()).expect("lines are closed under reflections")
                })
                .collect()
        })
        .collect();
    let identity: Vec<u16> = (0..lines.len() as u16).collect();
    let mut seen: std::collections::HashSet<Vec<u16>> = std::collections::HashSet::new();
    seen.insert(identity.clone());
    let mut elements = vec![identity];
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        next += 1;
        for g in &generators {
            let composed: Vec<u16> = current.iter().map(|&i| g[i as usize]).collect();
            if seen.insert(composed.clone()) {
                if elements.len() >= cap {
                    return Err(SingularError::GroupTooLarge(cap));
                }
                elements.push(composed);
            }
        }
    }
    Ok(elements)
}

/// Result of reducing a frame to maximally singular lines.
#[derive(Clone, Debug)]
pub struct SingularizedFrame {
    pub frame: Frame,
    /// Index into [`singular_lines`] of each chosen line.
    pub lines: Vec<usize>,
    /// Whether `support(w_i) ⊆ support(v_i)` holds, per index.
    pub containment: Vec<bool>,
}

/// Replace each frame vector, in order, by a maximally singular line not in
/// the span of those already chosen. Among such lines, those whose
/// nonvanishing roots are contained in those of `v_i` are admissible; the
/// one with largest squared cosine to `v_i` wins, ties going to canonical
/// line order. The chosen line is oriented to have nonnegative inner
/// product with `v_i`.
pub fn singularize_frame(
    desc: &SpaceDescriptor,
    f: &Frame,
    cap: usize,
) -> Result<SingularizedFrame, SingularError> {
    let sys = &desc.root_system;
    let frame = Frame::new(desc, f.vectors.clone())?;
    let lines = singular_lines(desc, cap)?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::new();
    let mut containment = Vec::new();
    for (i, v) in frame.vectors.iter().enumerate() {
        let sv = support(sys, v);
        let vv = v.norm2();
        let mut best: Option<(usize, Rational)> = None;
        for (li, line) in lines.iter().enumerate() {
            if !line.support.is_subset(&sv) {
                continue;
            }
            let mut rows = chosen_rows.clone();
            rows.push(arith::to_rational(&line.simple_values));
            if arith::rank(&rows) != rows.len() {
                continue;
            }
            let lv = line.root_vector();
            let d = lv.dot(v);
            let cos2 = d * d / (lv.norm2() * vv);
            if best.as_ref().is_none_or(|(_, b)| cos2 > *b) {
                best = Some((li, cos2));
            }
        }
        let (li, _) = best.ok_or(SingularError::NoAdmissibleRay(i))?;
        let line = &lines[li];
        let mut w = line.root_vector();
        if w.dot(v) < Rational::zero() {
            w = w.scaled(Rational::from_integer(-1));
        }
        containment.push(line.support.is_subset(&sv));
        chosen_rows.push(arith::to_rational(&line.simple_values));
        chosen.push(li);
        out.push(w);
    }
    Ok(SingularizedFrame { frame: Frame { vectors: out }, lines: chosen, containment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    fn q(desc: &SpaceDescriptor, v: &[i64]) -> usize {
        q_dim(desc, &RootVector::from_ints(v)).unwrap()
    }

    #[test]
    fn sl6_rays_follow_the_closed_form() {
        let d = lookup("SL(6,R)").unwrap();
        let rays = maximally_singular_rays(&d);
        let n = 5i64;
        for (k, ray) in rays.iter().enumerate() {
            let i = k as i64 + 1;
            let expected: Vec<i64> = (0..6).map(|c| if c < n - i + 1 { i } else { i - n - 1 }).collect();
            let g = expected.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
            let expected: Vec<i64> = expected.iter().map(|x| x / g).collect();
            // The chamber orientation puts the positive block first.
            let flipped: Vec<i64> = expected.iter().rev().map(|x| -x).collect();
            assert!(ray.vector == expected || ray.vector == flipped, "{:?}", ray.vector);
            assert_eq!(ray.q_dim as i64, i * n - i * (i - 1));
        }
    }

    #[test]
    fn sp6_rays() {
        let d = lookup("Sp(6,R)").unwrap();
        let rays: Vec<_> = maximally_singular_rays(&d).into_iter().map(|r| r.vector).collect();
        assert_eq!(rays, vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        assert_eq!(q(&d, &[1, 1, 1]), 6);
    }

    #[test]
    fn so54_minimum() {
        let d = lookup("SO(5,4)").unwrap();
        assert_eq!(q(&d, &[1, 0, 0, 0]), 7);
        assert_eq!(min_q_dim(&d), 7);
    }

    #[test]
    fn intersections() {
        let d = lookup("SL(6,R)").unwrap();
        let a = RootVector::from_ints(&[5, -1, -1, -1, -1, -1]);
        let b = RootVector::from_ints(&[-1, 5, -1, -1, -1, -1]);
        assert_eq!(q_intersection_dim(&d, &a, &b).unwrap(), 1);
        assert_eq!(q_intersection_dim(&d, &a, &a).unwrap(), 5);
        let c = lookup("SL(4,C)").unwrap();
        let a = RootVector::from_ints(&[3, -1, -1, -1]);
        let b = RootVector::from_ints(&[-1, 3, -1, -1]);
        assert_eq!(q_intersection_dim(&c, &a, &b).unwrap(), 2);
        assert_eq!(q_dim(&d, &RootVector::zero(6)), Err(SingularError::ZeroVector));
    }

    #[test]
    fn t_and_degree_bounds() {
        let g2 = lookup("G2(2)").unwrap();
        assert_eq!(t_invariant(&g2), 3);
        let b = degree_bound(&g2).unwrap();
        assert_eq!((b.bound, b.exceptional), (6, true));
        let su = degree_bound(&lookup("SU(3,2)").unwrap()).unwrap();
        assert_eq!((su.t_x, su.bound, su.exceptional), (5, 7, false));
        let sl3 = degree_bound(&lookup("SL(3,R)").unwrap()).unwrap();
        assert_eq!((sl3.bound, sl3.exceptional), (6, true));
        assert_eq!(t_invariant(&lookup("SO(4,3)").unwrap()), 7);
        assert_eq!(t_invariant(&lookup("SO(5,1)").unwrap()), 1);
        assert!(matches!(degree_bound(&lookup("SL(4,R)").unwrap()), Err(SingularError::NotRankTwo(3))));
    }

    #[test]
    fn line_counts() {
        let d = lookup("Sp(4,R)").unwrap();
        let lines = singular_lines(&d, 10_000).unwrap();
        assert_eq!(lines.len(), 4);
        let d = lookup("SL(3,R)").unwrap();
        assert_eq!(singular_lines(&d, 10_000).unwrap().len(), 3);
        let d6 = lookup("SL(6,R)").unwrap();
        assert_eq!(singular_lines(&d6, 10_000).unwrap().len(), 31);
        let group = line_permutation_group(&d, &singular_lines(&d, 100).unwrap(), 100).unwrap();
        assert_eq!(group.len(), 6);
    }

    #[test]
    fn singularize_sl3_example() {
        let d = lookup("SL(3,R)").unwrap();
        let f = Frame::from_ints(&d, &[vec![10, 1, -11], vec![1, -2, 1]]).unwrap();
        let s = singularize_frame(&d, &f, 1000).unwrap();
        assert_eq!(s.frame.to_ints(), vec![vec![1, 1, -2], vec![1, -2, 1]]);
        assert!(s.containment.iter().all(|&c| c));
    }

    #[test]
    fn frame_validation() {
        let d = lookup("SL(3,R)").unwrap();
        assert_eq!(
            Frame::from_ints(&d, &[vec![1, -1, 0], vec![2, -2, 0]]),
            Err(SingularError::Dependent)
        );
        assert_eq!(
            Frame::from_ints(&d, &[vec![1, 0, 0], vec![0, 1, -1]]),
            Err(SingularError::NotInSpan)
        );
    }
}
