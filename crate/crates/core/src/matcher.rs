//! The staged greedy 3-per-row column selection, with exchange repairs,
//! and its two-phase refinement for `SL(n+1,R)` driven by the z-basis.
//!
//! Every stage sorts the pending rows by their count of unremoved 1s
//! (stable on row index), takes the scarcest row, and removes `demand`
//! of its columns. Columns are picked by how few other pending rows
//! cover them, then by index, so a row's private columns go first.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::catalog::{Family, RootVector, SpaceDescriptor};
use crate::incidence::{self, IncidenceError, IncidenceMatrix};
use crate::singular::{self, Frame};

/// Exchange chains longer than this are not attempted in repair mode.
pub const REPAIR_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("vector {0} is neither a z-ray nor a sum of two z-rays")]
    NotZExpressible(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Faithful,
    Repair,
    Augmenting,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "faithful" => Ok(Mode::Faithful),
            "repair" => Ok(Mode::Repair),
            "augmenting" => Ok(Mode::Augmenting),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Matched,
    Failed,
}

/// One exchange: `row` gives up `released` and takes `taken`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Exchange {
    pub row: usize,
    pub released: usize,
    pub taken: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: usize,
    pub row: usize,
    pub columns: Vec<usize>,
    /// `(row, N(row, stage))` for every pending row at the start of the stage.
    pub remaining: Vec<(usize, usize)>,
    pub exchanges: Vec<Exchange>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: usize,
    pub row: usize,
    /// `N(row, stage)`: unremoved 1s of the starving row.
    pub remaining: usize,
    pub demand: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchResult {
    pub status: Status,
    pub mode: Mode,
    pub assignment: Vec<Vec<usize>>,
    pub trace: Vec<StageRecord>,
    pub failure: Option<StageFailure>,
    pub repairs: usize,
}

impl MatchResult {
    pub fn is_matched(&self) -> bool {
        self.status == Status::Matched
    }
}

pub(crate) fn validate(a: &IncidenceMatrix) -> Result<(), MatchError> {
    if a.rows.is_empty() {
        return Err(MatchError::MalformedMatrix("matrix has no rows".into()));
    }
    if a.demands.len() != a.rows.len() {
        return Err(MatchError::MalformedMatrix(format!(
            "{} demands for {} rows",
            a.demands.len(),
            a.rows.len()
        )));
    }
    if a.demands.contains(&0) {
        return Err(MatchError::MalformedMatrix("demands must be positive".into()));
    }
    if let Some(i) = a.rows.iter().position(|r| r.bits.len() != a.n_cols) {
        return Err(MatchError::MalformedMatrix(format!(
            "row {i} has length {}, expected {}",
            a.rows[i].bits.len(),
            a.n_cols
        )));
    }
    Ok(())
}

struct Engine<'a> {
    a: &'a IncidenceMatrix,
    assignment: Vec<Vec<usize>>,
    owner: Vec<Option<usize>>,
    trace: Vec<StageRecord>,
    repairs: usize,
}

impl<'a> Engine<'a> {
    fn new(a: &'a IncidenceMatrix) -> Self {
        Engine {
            a,
            assignment: vec![Vec::new(); a.rows.len()],
            owner: vec![None; a.n_cols],
            trace: Vec::new(),
            repairs: 0,
        }
    }

    fn available(&self, row: usize) -> Vec<usize> {
        self.a.rows[row].bits.ones().filter(|&c| self.owner[c].is_none()).collect()
    }

    fn coverage(&self, c: usize, pending: &[usize], me: usize) -> usize {
        pending.iter().filter(|&&r| r != me && self.a.rows[r].bits.contains(c)).count()
    }

    fn take(&mut self, row: usize, c: usize) {
        debug_assert!(self.owner[c].is_none());
        self.owner[c] = Some(row);
        self.assignment[row].push(c);
    }

    /// Run stages over `rows` until all are served. `preferred` optionally
    /// restricts Step-2 choices for a row to a column subset; when that
    /// subset runs short the remaining 1s of the row are used and
    /// `relaxed` is set.
    fn run(
        &mut self,
        rows: &[usize],
        mode: Mode,
        preferred: &dyn Fn(usize) -> Option<FixedBitSet>,
        relaxed: &mut bool,
    ) -> Result<(), StageFailure> {
        let mut pending = rows.to_vec();
        while !pending.is_empty() {
            let stage = self.trace.len() + 1;
            let mut counts: Vec<(usize, usize)> =
                pending.iter().map(|&r| (r, self.available(r).len())).collect();
            counts.sort_by_key(|&(r, n)| (n, r));
            pending = counts.iter().map(|&(r, _)| r).collect();
            let j = pending[0];
            let n_j = counts[0].1;
            let demand = self.a.demands[j] as usize;

            let mut candidates = self.available(j);
            candidates.sort_by_key(|&c| (self.coverage(c, &pending, j), c));
            if let Some(pref) = preferred(j) {
                let (inside, outside): (Vec<usize>, Vec<usize>) =
                    candidates.into_iter().partition(|&c| pref.contains(c));
                if inside.len() < demand {
                    *relaxed = true;
                }
                candidates = inside;
                candidates.extend(outside);
            }
            let chosen: Vec<usize> = candidates.into_iter().take(demand).collect();
            for &c in &chosen {
                self.take(j, c);
            }
            let mut exchanges = Vec::new();
            let depth = match mode {
                Mode::Faithful => 0,
                Mode::Repair => REPAIR_DEPTH,
                Mode::Augmenting => usize::MAX,
            };
            while self.assignment[j].len() < demand && depth > 0 {
                match self.augment(j, depth) {
                    Some(path) => {
                        self.repairs += 1;
                        exchanges.extend(path);
                    }
                    None => break,
                }
            }
            let served = self.assignment[j].len() >= demand;
            self.trace.push(StageRecord {
                stage,
                row: j,
                columns: self.assignment[j].clone(),
                remaining: counts,
                exchanges,
            });
            if !served {
                return Err(StageFailure { stage, row: j, remaining: n_j, demand: demand as u32 });
            }
            pending.remove(0);
        }
        Ok(())
    }

    /// Find an alternating chain of at most `max_depth` exchanges that
    /// frees one column of `start`'s support, and apply it. Rows are
    /// explored breadth first, columns in ascending order.
    fn augment(&mut self, start: usize, max_depth: usize) -> Option<Vec<Exchange>> {
        let n_rows = self.a.rows.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n_rows];
        let mut depth = vec![usize::MAX; n_rows];
        depth[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            for c in self.a.rows[r].bits.ones() {
                match self.owner[c] {
                    None if r != start => {
                        return Some(self.apply_chain(start, r, c, &parent));
                    }
                    Some(o) if o != r && depth[o] == usize::MAX && depth[r] < max_depth => {
                        depth[o] = depth[r] + 1;
                        parent[o] = Some((r, c));
                        queue.push_back(o);
                    }
                    _ => {}
                }
            }
        }
        None
    }

    /// `last` takes the free column `free`; each row on the chain hands the
    /// column that led to it to its predecessor; `start` gains one column.
    fn apply_chain(
        &mut self,
        start: usize,
        last: usize,
        free: usize,
        parent: &[Option<(usize, usize)>],
    ) -> Vec<Exchange> {
        let mut exchanges = Vec::new();
        let mut row = last;
        let mut incoming = free;
        while row != start {
            let (prev, released) = parent[row].expect("chain reaches start");
            let pos = self.assignment[row].iter().position(|&c| c == released).unwrap();
            self.assignment[row][pos] = incoming;
            self.owner[incoming] = Some(row);
            exchanges.push(Exchange { row, released, taken: incoming });
            incoming = released;
            row = prev;
        }
        self.owner[incoming] = Some(start);
        self.assignment[start].push(incoming);
        exchanges.reverse();
        exchanges
    }

    fn finish(self, mode: Mode, failure: Option<StageFailure>) -> MatchResult {
        let mut assignment = self.assignment;
        for a in assignment.iter_mut() {
            a.sort_unstable();
        }
        MatchResult {
            status: if failure.is_none() { Status::Matched } else { Status::Failed },
            mode,
            assignment,
            trace: self.trace,
            failure,
            repairs: self.repairs,
        }
    }
}

/// The staged greedy algorithm over all rows of `a`.
pub fn staged_greedy(a: &IncidenceMatrix, mode: Mode) -> Result<MatchResult, MatchError> {
    validate(a)?;
    let mut engine = Engine::new(a);
    let rows: Vec<usize> = (0..a.rows.len()).collect();
    let mut relaxed = false;
    let failure = engine.run(&rows, mode, &|_| None, &mut relaxed).err();
    Ok(engine.finish(mode, failure))
}

/// How a frame vector is written in the z-rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ZAssignment {
    Single { first: usize },
    Pair { first: usize, second: usize },
}

impl ZAssignment {
    pub fn first(self) -> usize {
        match self {
            ZAssignment::Single { first } | ZAssignment::Pair { first, .. } => first,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZDecomposition {
    /// `z_1..z_{n+1}`: `z_i` has `-n` at coordinate `n-i+2` (1-based), 1 elsewhere.
    pub base_rays: Vec<Vec<i64>>,
    /// Rows of the 0/1 matrix of z-coordinates of the vectors.
    pub coordinates: Vec<Vec<i64>>,
    /// Columns of a nonsingular square minor.
    pub minor_columns: Vec<usize>,
    pub assignment: Vec<ZAssignment>,
}

/// The z-rays of `SL(n+1,R)`, 0-based: `z[i]` has `-n` at index `n - i`.
pub fn z_rays(n: usize) -> Vec<Vec<i64>> {
    (0..=n)
        .map(|i| (0..=n).map(|k| if k == n - i { -(n as i64) } else { 1 }).collect())
        .collect()
}

fn sl_rank(desc: &SpaceDescriptor) -> Result<usize, MatchError> {
    if desc.family != Family::SlReal {
        return Err(MatchError::Unsupported(format!("{} is not SL(n+1,R)", desc.id)));
    }
    Ok(desc.rank)
}

/// Express each vector as a z-ray or a sum of two, up to sign and scale,
/// then pick first rays that are pairwise distinct through a nonsingular
/// minor of the coordinate matrix.
pub fn z_decompose(desc: &SpaceDescriptor, vectors: &[RootVector]) -> Result<ZDecomposition, MatchError> {
    let n = sl_rank(desc)?;
    let z = z_rays(n);
    let p = vectors.len();
    let mut coordinates = Vec::with_capacity(p);
    for (i, v) in vectors.iter().enumerate() {
        let target = v.line_normal_form();
        let same = |w: Vec<i64>| arith::sign_normalize(arith::primitive(&arith::to_rational(&w))) == target;
        let mut row = vec![0i64; n + 1];
        if let Some(a) = (0..=n).find(|&a| same(z[a].clone())) {
            row[a] = 1;
        } else if let Some((a, b)) = (0..=n)
            .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
            .find(|&(a, b)| same(z[a].iter().zip(&z[b]).map(|(x, y)| x + y).collect()))
        {
            row[a] = 1;
            row[b] = 1;
        } else {
            return Err(MatchError::NotZExpressible(i));
        }
        coordinates.push(row);
    }
    let minor_columns = arith::subsets(n + 1, p)
        .into_iter()
        .find(|cols| {
            let m: Vec<Vec<i64>> = coordinates.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            arith::det_i64(&m) != 0
        })
        .ok_or_else(|| MatchError::Unsupported("vectors are linearly dependent".into()))?;
    let (perm, _) = arith::signed_permutations(p)
        .into_iter()
        .find(|(perm, _)| (0..p).all(|i| coordinates[i][minor_columns[perm[i]]] == 1))
        .expect("a nonzero minor has a nonzero diagonal term");
    let assignment = (0..p)
        .map(|i| {
            let first = minor_columns[perm[i]];
            match (0..=n).find(|&k| k != first && coordinates[i][k] == 1) {
                Some(second) => ZAssignment::Pair { first, second },
                None => ZAssignment::Single { first },
            }
        })
        .collect();
    Ok(ZDecomposition { base_rays: z, coordinates, minor_columns, assignment })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoPhaseResult {
    pub result: MatchResult,
    /// Rows with popcount `n`, `2n-2`, and the rest.
    pub groups: [Vec<usize>; 3],
    pub z: Option<ZDecomposition>,
    /// Why the two-phase hypotheses do not apply, if they do not.
    pub hypothesis_failure: Option<String>,
    /// True when a constrained choice had to leave `Q_z`, or the phases
    /// failed and augmenting mode finished the job.
    pub escalated: bool,
}

/// The `SL(n+1,R)` algorithm: staged greedy on the popcount-`n` rows, then
/// constrained stages on the popcount-`2n-2` rows drawing from `Q_z` of
/// each row's first z-ray, then staged greedy on the rest; exchange
/// repairs throughout. Outside its hypotheses it runs augmenting mode.
pub fn sl_two_phase(desc: &SpaceDescriptor, f: &Frame) -> Result<TwoPhaseResult, MatchError> {
    let n = sl_rank(desc)?;
    let a = incidence::incidence_matrix(desc, f)?;
    let pops = a.popcounts();
    let mut groups: [Vec<usize>; 3] = Default::default();
    for (i, &p) in pops.iter().enumerate() {
        let g = if p == n { 0 } else if p == 2 * n - 2 { 1 } else { 2 };
        groups[g].push(i);
    }
    let fallback = |reason: String, groups| -> Result<TwoPhaseResult, MatchError> {
        Ok(TwoPhaseResult {
            result: staged_greedy(&a, Mode::Augmenting)?,
            groups,
            z: None,
            hypothesis_failure: Some(reason),
            escalated: true,
        })
    };
    if n < 5 {
        return fallback(format!("needs n ≥ 5, got n = {n}"), groups);
    }
    if let Some(i) = f.vectors.iter().position(|v| !singular::is_maximally_singular(desc, v)) {
        return fallback(format!("vector {i} is not maximally singular"), groups);
    }
    let low: Vec<usize> = groups[0].iter().chain(&groups[1]).copied().collect();
    let low_vectors: Vec<RootVector> = low.iter().map(|&i| f.vectors[i].clone()).collect();
    let z = match z_decompose(desc, &low_vectors) {
        Ok(z) => z,
        Err(e) => return fallback(e.to_string(), groups),
    };
    let basis = incidence::ColumnBasis::new(desc);
    let q_z: Vec<FixedBitSet> = z
        .base_rays
        .iter()
        .map(|ray| basis.expand(&singular::support(&desc.root_system, &RootVector::from_ints(ray))))
        .collect();
    let mut preferred_of: Vec<Option<FixedBitSet>> = vec![None; a.rows.len()];
    for (k, &row) in low.iter().enumerate() {
        if groups[1].contains(&row) {
            preferred_of[row] = Some(q_z[z.assignment[k].first()].clone());
        }
    }

    let mut engine = Engine::new(&a);
    let mut relaxed = false;
    let none = |_: usize| None;
    let constrained = |r: usize| preferred_of[r].clone();
    let failure = engine
        .run(&groups[0], Mode::Repair, &none, &mut relaxed)
        .and_then(|_| engine.run(&groups[1], Mode::Repair, &constrained, &mut relaxed))
        .and_then(|_| engine.run(&groups[2], Mode::Repair, &none, &mut relaxed))
        .err();
    let mut result = engine.finish(Mode::Repair, failure);
    let mut escalated = relaxed;
    if !result.is_matched() {
        let mut rescue = staged_greedy(&a, Mode::Augmenting)?;
        rescue.trace.splice(0..0, result.trace);
        result = rescue;
        escalated = true;
    }
    Ok(TwoPhaseResult { result, groups, z: Some(z), hypothesis_failure: None, escalated })
}
