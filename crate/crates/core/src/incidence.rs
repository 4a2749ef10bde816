//! Incidence matrices of frames: one 0/1 row `u_v` per frame vector over a
//! basis of `a^⊥` made of root-space blocks. Also enumerates frames of
//! maximally singular lines up to Weyl symmetry, and splits frames of
//! product flats into factor frames.

use std::collections::HashSet;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, Rational};
use crate::catalog::{RootVector, SpaceDescriptor};
use crate::singular::{self, Frame, SingularError, SingularLine};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error("not a frame: {0}")]
    NotAFrame(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Columns of the incidence matrix: `(root_index, copy_index)` pairs, one
/// block of `multiplicity` copies per positive root, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnBasis {
    pub entries: Vec<(usize, usize)>,
    /// First column of each root's block.
    pub offsets: Vec<usize>,
}

impl ColumnBasis {
    pub fn new(desc: &SpaceDescriptor) -> ColumnBasis {
        let mut entries = Vec::new();
        let mut offsets = Vec::new();
        for (i, r) in desc.root_system.positive_roots.iter().enumerate() {
            offsets.push(entries.len());
            entries.extend((0..r.multiplicity as usize).map(|c| (i, c)));
        }
        ColumnBasis { entries, offsets }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Expand a root-support bitset into a column bitset.
    pub fn expand(&self, support: &FixedBitSet) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for r in support.ones() {
            let end = self.offsets.get(r + 1).copied().unwrap_or(self.len());
            bits.insert_range(self.offsets[r]..end);
        }
        bits
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceRow {
    pub bits: FixedBitSet,
    /// The frame vector this row belongs to; absent for hand-built matrices.
    pub owner: Option<Vec<i64>>,
}

impl IncidenceRow {
    pub fn popcount(&self) -> usize {
        self.bits.count_ones(..)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub space: Option<String>,
    pub rows: Vec<IncidenceRow>,
    pub n_cols: usize,
    pub demands: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    space: Option<String>,
    #[serde(default)]
    frame: Vec<Vec<i64>>,
    rows: Vec<Vec<u8>>,
    #[serde(default)]
    demands: Option<Vec<u32>>,
}

impl IncidenceMatrix {
    /// Build from dense 0/1 rows; demands default to 3.
    pub fn from_dense(rows: &[Vec<u8>], demands: Option<Vec<u32>>) -> Result<Self, IncidenceError> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(IncidenceError::MalformedMatrix(format!(
                    "row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            let mut bits = FixedBitSet::with_capacity(n_cols);
            for (c, &x) in row.iter().enumerate() {
                match x {
                    0 => {}
                    1 => bits.insert(c),
                    _ => {
                        return Err(IncidenceError::MalformedMatrix(format!(
                            "entry ({i},{c}) is {x}, expected 0 or 1"
                        )))
                    }
                }
            }
            out.push(IncidenceRow { bits, owner: None });
        }
        let demands = demands.unwrap_or_else(|| vec![3; rows.len()]);
        if demands.len() != rows.len() {
            return Err(IncidenceError::MalformedMatrix(format!(
                "{} demands for {} rows",
                demands.len(),
                rows.len()
            )));
        }
        if demands.contains(&0) {
            return Err(IncidenceError::MalformedMatrix("demands must be positive".into()));
        }
        Ok(IncidenceMatrix { space: None, rows: out, n_cols, demands })
    }

    pub fn dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.n_cols).map(|c| r.bits.contains(c) as u8).collect())
            .collect()
    }

    pub fn popcounts(&self) -> Vec<usize> {
        self.rows.iter().map(IncidenceRow::popcount).collect()
    }

    pub fn with_demands(mut self, demands: Vec<u32>) -> Self {
        assert_eq!(demands.len(), self.rows.len());
        self.demands = demands;
        self
    }

    /// Columns carrying a 1 in exactly one row, per row.
    pub fn private_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rows.len()];
        for c in 0..self.n_cols {
            let owners: Vec<usize> =
                (0..self.rows.len()).filter(|&i| self.rows[i].bits.contains(c)).collect();
            if let [only] = owners[..] {
                counts[only] += 1;
            }
        }
        counts
    }

    pub fn nonzero_columns(&self) -> usize {
        let mut any = FixedBitSet::with_capacity(self.n_cols);
        for r in &self.rows {
            any.union_with(&r.bits);
        }
        any.count_ones(..)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = MatrixJson {
            space: self.space.clone(),
            frame: self.rows.iter().filter_map(|r| r.owner.clone()).collect(),
            rows: self.dense(),
            demands: Some(self.demands.clone()),
        };
        serde_json::to_value(doc).expect("matrix serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, IncidenceError> {
        let doc: MatrixJson = serde_json::from_value(value.clone())
            .map_err(|e| IncidenceError::MalformedMatrix(e.to_string()))?;
        let mut m = IncidenceMatrix::from_dense(&doc.rows, doc.demands)?;
        if !doc.frame.is_empty() {
            if doc.frame.len() != m.rows.len() {
                return Err(IncidenceError::MalformedMatrix(format!(
                    "{} frame vectors for {} rows",
                    doc.frame.len(),
                    m.rows.len()
                )));
            }
            for (row, v) in m.rows.iter_mut().zip(doc.frame) {
                row.owner = Some(v);
            }
        }
        m.space = doc.space;
        Ok(m)
    }
}

/// `u_v`: the column indicator of `Q_v`.
pub fn row_vector(desc: &SpaceDescriptor, v: &RootVector) -> Result<IncidenceRow, IncidenceError> {
    let sys = &desc.root_system;
    singular::q_dim(desc, v)?;
    let basis = ColumnBasis::new(desc);
    let bits = basis.expand(&singular::support(sys, v));
    Ok(IncidenceRow { bits, owner: Some(v.as_ints().unwrap_or_else(|| v.primitive())) })
}

/// The `rank × (dim_x - rank)` matrix of a frame, rows in frame order,
/// demands all 3.
pub fn incidence_matrix(desc: &SpaceDescriptor, f: &Frame) -> Result<IncidenceMatrix, IncidenceError> {
    let f = Frame::new(desc, f.vectors.clone()).map_err(|e| IncidenceError::NotAFrame(e.to_string()))?;
    let rows = f
        .vectors
        .iter()
        .map(|v| row_vector(desc, v))
        .collect::<Result<Vec<_>, _>>()?;
    let n_cols = desc.column_count();
    let m = IncidenceMatrix { space: Some(desc.id.clone()), demands: vec![3; rows.len()], rows, n_cols };
    debug_assert_eq!(m.nonzero_columns(), n_cols, "frame matrix has a zero column");
    Ok(m)
}

/// Incidence matrix of a frame of singular lines given by index.
pub fn matrix_from_lines(
    desc: &SpaceDescriptor,
    basis: &ColumnBasis,
    lines: &[SingularLine],
    frame: &[usize],
) -> IncidenceMatrix {
    let rows = frame
        .iter()
        .map(|&i| IncidenceRow { bits: basis.expand(&lines[i].support), owner: Some(lines[i].vector.clone()) })
        .collect::<Vec<_>>();
    IncidenceMatrix { space: Some(desc.id.clone()), demands: vec![3; rows.len()], rows, n_cols: basis.len() }
}

/// Incremental row echelon form over the rationals, for independence tests.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    /// Reduce `v` against the stored rows; if independent, store it and
    /// return true.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut x = arith::to_rational(v);
        for (pivot, row) in &self.rows {
            if !x[*pivot].is_zero() {
                let f = x[*pivot] / row[*pivot];
                for (a, b) in x.iter_mut().zip(row) {
                    *a -= f * b;
                }
            }
        }
        match x.iter().position(|a| !a.is_zero()) {
            Some(p) => {
                self.rows.push((p, x));
                true
            }
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Options for [`enumerate_singular_frames`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    pub up_to_weyl: bool,
    /// Maximum number of frames yielded.
    pub budget: Option<u64>,
    /// Cap on Weyl orbit and group sizes.
    pub group_cap: usize,
    /// Number of independent lines per set; the rank when `None`.
    pub size: Option<usize>,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { up_to_weyl: true, budget: None, group_cap: 200_000, size: None }
    }
}

/// Frames of maximally singular lines, as sorted index lists into `lines`.
#[derive(Clone, Debug)]
pub struct FrameEnumeration {
    pub lines: Vec<SingularLine>,
    pub frames: Vec<Vec<usize>>,
    pub budget_exceeded: bool,
    /// Order of the Weyl group acting on lines (1 when not quotienting).
    pub group_order: usize,
}

impl FrameEnumeration {
    pub fn frame(&self, desc: &SpaceDescriptor, i: usize) -> Frame {
        let vectors = self.frames[i].iter().map(|&l| self.lines[l].root_vector()).collect();
        Frame::new(desc, vectors).expect("enumerated frames are independent")
    }
}

/// Walk unordered frames of maximally singular lines in lexicographic order
/// of line indices, calling `visit` on each. With `up_to_weyl`, only the
/// lexicographically least member of each Weyl orbit is visited; because
/// that property passes to every prefix, non-canonical prefixes are pruned.
pub fn for_each_singular_frame<F>(
    desc: &SpaceDescriptor,
    opts: EnumerationOptions,
    mut visit: F,
) -> Result<(Vec<SingularLine>, usize, bool), SingularError>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let lines = singular::singular_lines(desc, opts.group_cap)?;
    let group = if opts.up_to_weyl {
        singular::line_permutation_group(desc, &lines, opts.group_cap)?
    } else {
        Vec::new()
    };
    let order = group.len().max(1);
    let exhausted = {
        let mut state = Walk {
            lines: &lines,
            group: &group,
            rank: opts.size.unwrap_or(desc.rank).min(desc.rank),
            budget: opts.budget,
            yielded: 0,
            exhausted: false,
            current: Vec::with_capacity(desc.rank),
            image: Vec::with_capacity(desc.rank),
        };
        let _ = state.dfs(0, &Echelon::default(), &mut visit);
        state.exhausted
    };
    Ok((lines, order, exhausted))
}

struct Walk<'a> {
    lines: &'a [SingularLine],
    group: &'a [Vec<u16>],
    rank: usize,
    budget: Option<u64>,
    yielded: u64,
    exhausted: bool,
    current: Vec<usize>,
    image: Vec<u16>,
}

impl Walk<'_> {
    fn dfs<F>(&mut self, start: usize, echelon: &Echelon, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.current.len() == self.rank {
            if self.budget.is_some_and(|b| self.yielded >= b) {
                self.exhausted = true;
                return ControlFlow::Break(());
            }
            self.yielded += 1;
            return visit(&self.current);
        }
        let remaining = self.rank - self.current.len();
        for i in start..self.lines.len() {
            if self.lines.len() - i < remaining {
                break;
            }
            let mut next = echelon.clone();
            if !next.insert(&self.lines[i].simple_values) {
                continue;
            }
            self.current.push(i);
            if self.is_canonical() {
                self.dfs(i + 1, &next, visit)?;
            }
            self.current.pop();
        }
        ControlFlow::Continue(())
    }

    /// True when no group element maps the current set to a
    /// lexicographically smaller sorted set.
    fn is_canonical(&mut self) -> bool {
        let set = &self.current;
        for g in self.group.iter().skip(1) {
            self.image.clear();
            self.image.extend(set.iter().map(|&i| g[i]));
            self.image.sort_unstable();
            for (a, &b) in self.image.iter().zip(set) {
                match (*a as usize).cmp(&b) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => break,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }
}

/// Collect [`for_each_singular_frame`] into a list.
pub fn enumerate_singular_frames(
    desc: &SpaceDescriptor,
    opts: EnumerationOptions,
) -> Result<FrameEnumeration, SingularError> {
    let mut frames = Vec::new();
    let (lines, group_order, budget_exceeded) = for_each_singular_frame(desc, opts, |f| {
        frames.push(f.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(FrameEnumeration { lines, frames, budget_exceeded, group_order })
}

/// Find `τ` such that the first `n1` vectors (in `τ` order) project to a
/// frame of the first `n1` coordinates and the rest to a frame of the
/// remaining coordinates. Subsets are tried in lexicographic order; `τ`
/// lists the chosen subset then its complement, each ascending.
pub fn split_product_frame(vectors: &[Vec<i64>], n1: usize) -> Result<Vec<usize>, IncidenceError> {
    let n = vectors.len();
    if n1 > n || vectors.iter().any(|v| v.len() != n) {
        return Err(IncidenceError::NotAFrame(format!(
            "expected {n} vectors of length {n} with n1 ≤ {n}"
        )));
    }
    if arith::det_i64(vectors) == 0 {
        return Err(IncidenceError::NotAFrame("vectors are linearly dependent".into()));
    }
    for subset in arith::subsets(n, n1) {
        let rest: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
        let first: Vec<Vec<i64>> = subset.iter().map(|&i| vectors[i][..n1].to_vec()).collect();
        let second: Vec<Vec<i64>> = rest.iter().map(|&i| vectors[i][n1..].to_vec()).collect();
        if arith::det_i64(&first) != 0 && arith::det_i64(&second) != 0 {
            let mut tau = subset;
            tau.extend(rest);
            return Ok(tau);
        }
    }
    Err(IncidenceError::NotAFrame("no admissible split; vectors are dependent".into()))
}

/// Assign the vectors of a frame of a product flat to its factors, so that
/// each factor receives a frame of its own flat. Coordinates are the values
/// on the simple roots, which separate the factors.
pub fn split_descriptor_frame(desc: &SpaceDescriptor, f: &Frame) -> Result<Vec<Vec<usize>>, IncidenceError> {
    let sys = &desc.root_system;
    let coords: Vec<Vec<i64>> = f
        .vectors
        .iter()
        .map(|v| {
            let values = sys.simple_evaluations(v);
            arith::primitive(&values)
        })
        .collect();
    let mut remaining: Vec<usize> = (0..coords.len()).collect();
    let mut out = Vec::new();
    let mut offset = 0;
    for &(_, _, _, rank) in sys.blocks() {
        if remaining.len() == rank {
            out.push(remaining.clone());
            break;
        }
        let sub: Vec<Vec<i64>> = remaining.iter().map(|&i| coords[i][offset..].to_vec()).collect();
        let tau = split_product_frame(&sub, rank)?;
        out.push(tau[..rank].iter().map(|&t| remaining[t]).collect());
        remaining = tau[rank..].iter().map(|&t| remaining[t]).collect();
        offset += rank;
    }
    Ok(out)
}

/// The two-block expansion of the determinant of the matrix with columns
/// `a_1..a_n`:
/// `Σ_σ sign(σ) det[p1 a_σ(1) .. p1 a_σ(n1)] det[p2 a_σ(n1+1) .. p2 a_σ(n)]`,
/// normalized by `1/(n1! n2!)`.
pub fn det_expansion(matrix: &[Vec<i64>], n1: usize, n2: usize) -> Result<Ratio<i128>, IncidenceError> {
    let n = n1 + n2;
    if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(IncidenceError::DimensionMismatch(format!("expected a {n}×{n} matrix")));
    }
    let column = |j: usize| -> Vec<i64> { matrix.iter().map(|r| r[j]).collect() };
    let columns: Vec<Vec<i64>> = (0..n).map(column).collect();
    let mut total: i128 = 0;
    for (perm, sign) in arith::signed_permutations(n) {
        let top: Vec<Vec<i64>> = perm[..n1].iter().map(|&j| columns[j][..n1].to_vec()).collect();
        let bottom: Vec<Vec<i64>> = perm[n1..].iter().map(|&j| columns[j][n1..].to_vec()).collect();
        total += sign * arith::det_i64(&top) * arith::det_i64(&bottom);
    }
    Ok(Ratio::new(total, arith::factorial(n1) * arith::factorial(n2)))
}

/// Distinct frames as sets of line vectors, for deduplication in tests and
/// reports.
pub fn frame_key(lines: &[SingularLine], frame: &[usize]) -> Vec<Vec<i64>> {
    let mut key: Vec<Vec<i64>> = frame.iter().map(|&i| lines[i].vector.clone()).collect();
    key.sort();
    key
}

/// Number of distinct frames in `frames` (up to reordering).
pub fn distinct_frames(lines: &[SingularLine], frames: &[Vec<usize>]) -> usize {
    frames.iter().map(|f| frame_key(lines, f)).collect::<HashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    fn row(desc: &SpaceDescriptor, v: &[i64]) -> IncidenceRow {
        row_vector(desc, &RootVector::from_ints(v)).unwrap()
    }

    #[test]
    fn sp4_rows() {
        let d = lookup("Sp(4,R)").unwrap();
        assert_eq!(row(&d, &[1, 0]).popcount(), 3);
        assert_eq!(row(&d, &[1, 1]).popcount(), 3);
        assert_eq!(row(&d, &[3, 1]).popcount(), 4);
    }

    #[test]
    fn sl3c_matrix() {
        let d = lookup("SL(3,C)").unwrap();
        let f = Frame::from_ints(&d, &[vec![2, -1, -1], vec![1, 1, -2]]).unwrap();
        let m = incidence_matrix(&d, &f).unwrap();
        assert_eq!(m.popcounts(), vec![4, 4]);
        assert_eq!(m.n_cols, 6);
        assert_eq!(m.nonzero_columns(), 6);
        let shared = (0..6).filter(|&c| m.rows[0].bits.contains(c) && m.rows[1].bits.contains(c)).count();
        assert_eq!(shared, 2);
    }

    #[test]
    fn json_round_trip() {
        let m = IncidenceMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]], Some(vec![1, 2])).unwrap();
        let back = IncidenceMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        assert!(IncidenceMatrix::from_dense(&[vec![1, 0], vec![1]], None).is_err());
        assert!(IncidenceMatrix::from_dense(&[vec![2]], None).is_err());
    }

    #[test]
    fn enumeration_small_cases() {
        let d = lookup("SL(3,R)").unwrap();
        let e = enumerate_singular_frames(&d, EnumerationOptions::default()).unwrap();
        // Three lines, any two independent, S3 transitive on pairs.
        assert_eq!(e.frames.len(), 1);
        let all = enumerate_singular_frames(&d, EnumerationOptions { up_to_weyl: false, ..Default::default() })
            .unwrap();
        assert_eq!(all.frames.len(), 3);

        let d = lookup("Sp(4,R)").unwrap();
        let e = enumerate_singular_frames(&d, EnumerationOptions::default()).unwrap();
        assert_eq!(e.group_order, 4);
        for i in 0..e.frames.len() {
            assert_eq!(e.frame(&d, i).vectors.len(), 2);
        }

        let d = lookup("SO(4,1)").unwrap();
        let e = enumerate_singular_frames(&d, EnumerationOptions::default()).unwrap();
        assert_eq!(e.frames.len(), 1);
    }

    #[test]
    fn budget_stops_early() {
        let d = lookup("SL(5,R)").unwrap();
        let opts = EnumerationOptions { budget: Some(3), ..Default::default() };
        let e = enumerate_singular_frames(&d, opts).unwrap();
        assert_eq!(e.frames.len(), 3);
        assert!(e.budget_exceeded);
    }

    #[test]
    fn split_example() {
        let m = [vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
        let columns: Vec<Vec<i64>> = (0..3).map(|j| m.iter().map(|r| r[j]).collect()).collect();
        assert_eq!(split_product_frame(&columns, 2).unwrap(), vec![1, 2, 0]);
        let diag = vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]];
        assert_eq!(split_product_frame(&diag, 1).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn det_expansion_small() {
        assert_eq!(det_expansion(&[vec![1, 2], vec![3, 4]], 1, 1).unwrap(), Ratio::from_integer(-2));
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(det_expansion(&id, 2, 1).unwrap(), Ratio::from_integer(1));
        assert!(det_expansion(&id, 2, 2).is_err());
    }

    #[test]
    fn product_frame_split() {
        let d = lookup("SL(3,R)×Sp(4,R)").unwrap();
        let f = Frame::from_ints(
            &d,
            &[vec![1, -1, 0, 1, 0], vec![1, 1, -2, 0, 0], vec![0, 0, 0, 1, 1], vec![1, -1, 0, 0, 1]],
        )
        .unwrap();
        let parts = split_descriptor_frame(&d, &f).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].len() + parts[1].len(), 4);
    }
}
