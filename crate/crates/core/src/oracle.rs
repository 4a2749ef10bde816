//! Exact feasibility by maximum flow, Hall certificates, match
//! verification, and Property-E certification of whole spaces.

use std::collections::{BTreeMap, VecDeque};
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::SpaceDescriptor;
use crate::incidence::{self, ColumnBasis, EnumerationOptions, IncidenceError, IncidenceMatrix};
use crate::matcher::{self, MatchError, MatchResult, Mode, Status};
use crate::singular::{self, Frame, SingularError, SingularLine};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),
}

/// A row set whose neighbourhood is smaller than its total demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibilityCertificate {
    pub row_subset: Vec<usize>,
    pub neighborhood_size: usize,
    pub demand_sum: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Feasibility {
    Feasible(MatchResult),
    Infeasible { certificate: InfeasibilityCertificate },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: u64) -> usize {
        let e = self.to.len();
        self.adj[u].push(e);
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
        e
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn push(&mut self, u: usize, t: usize, limit: u64, level: &[usize], next: &mut [usize]) -> u64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let e = self.adj[u][next[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let pushed = self.push(v, t, limit.min(self.cap[e]), level, next);
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }

    /// Dinic's algorithm.
    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return flow;
            }
            let mut next = vec![0; self.adj.len()];
            loop {
                let pushed = self.push(s, t, u64::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
    }
}

/// Decide whether every row can receive `demand` distinct columns from
/// its support. Rows feed columns through uncapacitated edges, so the
/// rows left on the source side of a minimum cut form a Hall violator.
pub fn feasible_matching(a: &IncidenceMatrix) -> Result<Feasibility, MatchError> {
    matcher::validate(a)?;
    let (r, m) = (a.rows.len(), a.n_cols);
    let (s, t) = (0, r + m + 1);
    let mut net = Network::new(r + m + 2);
    let mut row_edges = Vec::with_capacity(r);
    for (i, row) in a.rows.iter().enumerate() {
        net.add_edge(s, 1 + i, a.demands[i] as u64);
        row_edges.push(row.bits.ones().map(|c| (c, net.add_edge(1 + i, 1 + r + c, u64::MAX))).collect::<Vec<_>>());
    }
    for c in 0..m {
        net.add_edge(1 + r + c, t, 1);
    }
    let total: u64 = a.demands.iter().map(|&d| d as u64).sum();
    if net.max_flow(s, t) == total {
        let assignment = row_edges
            .iter()
            .map(|edges| edges.iter().filter(|&&(_, e)| net.cap[e ^ 1] > 0).map(|&(c, _)| c).collect())
            .collect();
        return Ok(Feasibility::Feasible(MatchResult {
            status: Status::Matched,
            mode: Mode::Augmenting,
            assignment,
            trace: Vec::new(),
            failure: None,
            repairs: 0,
        }));
    }
    let level = net.levels(s);
    let row_subset: Vec<usize> = (0..r).filter(|&i| level[1 + i] != usize::MAX).collect();
    let certificate = certificate_for(a, row_subset);
    debug_assert!(certificate.neighborhood_size < certificate.demand_sum as usize);
    Ok(Feasibility::Infeasible { certificate })
}

fn certificate_for(a: &IncidenceMatrix, row_subset: Vec<usize>) -> InfeasibilityCertificate {
    let mut union = fixedbitset::FixedBitSet::with_capacity(a.n_cols);
    for &i in &row_subset {
        union.union_with(&a.rows[i].bits);
    }
    InfeasibilityCertificate {
        neighborhood_size: union.count_ones(..),
        demand_sum: row_subset.iter().map(|&i| a.demands[i] as u64).sum(),
        row_subset,
    }
}

/// Columns distinct, inside their row's support, and as many as demanded.
pub fn verify_match(a: &IncidenceMatrix, r: &MatchResult) -> bool {
    if r.status != Status::Matched || r.assignment.len() != a.rows.len() {
        return false;
    }
    let mut used = vec![false; a.n_cols];
    for (i, cols) in r.assignment.iter().enumerate() {
        if cols.len() != a.demands[i] as usize {
            return false;
        }
        for &c in cols {
            if c >= a.n_cols || used[c] || !a.rows[i].bits.contains(c) {
                return false;
            }
            used[c] = true;
        }
    }
    true
}

/// Recount the neighbourhood and demand of the certificate against `a`.
pub fn verify_certificate(a: &IncidenceMatrix, cert: &InfeasibilityCertificate) -> bool {
    let mut rows = cert.row_subset.clone();
    rows.sort_unstable();
    rows.dedup();
    if rows.len() != cert.row_subset.len() || rows.iter().any(|&i| i >= a.rows.len()) {
        return false;
    }
    let recount = certificate_for(a, rows);
    recount.neighborhood_size == cert.neighborhood_size
        && recount.demand_sum == cert.demand_sum
        && cert.neighborhood_size < cert.demand_sum as usize
}

/// Column counts of the largest standard Levi subsystems: entry `j` is the
/// maximum, over sets of `j` simple roots, of the multiplicity-weighted
/// number of positive roots in their span.
pub fn levi_column_counts(desc: &SpaceDescriptor) -> Vec<usize> {
    let sys = &desc.root_system;
    let r = sys.rank;
    let mut best = vec![0usize; r + 1];
    for mask in 0u32..(1 << r) {
        let j = mask.count_ones() as usize;
        let count = sys
            .positive_roots
            .iter()
            .filter(|root| root.coefficients.iter().enumerate().all(|(k, &c)| c == 0 || mask >> k & 1 == 1))
            .map(|root| root.multiplicity as usize)
            .sum::<usize>();
        best[j] = best[j].max(count);
    }
    best
}

/// Sufficient condition for every frame (singular or not) to be
/// 3-matchable: the roots vanishing on `k` independent vectors form a
/// Levi subsystem of rank at most `r - k`, so any `k` rows see at least
/// `m - P(r - k)` columns.
pub fn hall_counting_bound(desc: &SpaceDescriptor) -> bool {
    let r = desc.rank;
    let m = desc.column_count();
    let levi = levi_column_counts(desc);
    (1..=r).all(|k| m >= levi[r - k] + 3 * k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Certified,
    Refuted,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// `dim X < 4 rank X`: fewer than `3 rank` columns.
    Counting,
    RankOne,
    HallCounting,
    Exhaustive,
    Product,
    WeakMatching,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub frame: Vec<Vec<i64>>,
    pub certificate: InfeasibilityCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificationReport {
    pub space_id: String,
    pub status: CertStatus,
    pub method: Method,
    pub rank: usize,
    pub dim_x: usize,
    pub columns: usize,
    pub frames_examined: u64,
    pub feasible_frames: u64,
    pub greedy_successes: u64,
    /// Share of feasible frames on which repair-mode greedy also succeeds.
    pub greedy_agreement: Option<f64>,
    /// Feasible frames where repair-mode greedy failed.
    pub greedy_failures: Vec<Vec<Vec<i64>>>,
    pub counterexample: Option<Counterexample>,
    pub line_count: Option<usize>,
    pub group_order: Option<usize>,
    pub factors: Vec<CertificationReport>,
    /// For products: the factor split of a mixed frame.
    pub split: Option<Vec<Vec<usize>>>,
    pub facts: BTreeMap<String, i64>,
}

impl CertificationReport {
    fn new(desc: &SpaceDescriptor, status: CertStatus, method: Method) -> Self {
        CertificationReport {
            space_id: desc.id.clone(),
            status,
            method,
            rank: desc.rank,
            dim_x: desc.dim_x,
            columns: desc.column_count(),
            frames_examined: 0,
            feasible_frames: 0,
            greedy_successes: 0,
            greedy_agreement: None,
            greedy_failures: Vec::new(),
            counterexample: None,
            line_count: None,
            group_order: None,
            factors: Vec::new(),
            split: None,
            facts: BTreeMap::new(),
        }
    }

    fn close_agreement(&mut self) {
        if self.feasible_frames > 0 {
            self.greedy_agreement = Some(self.greedy_successes as f64 / self.feasible_frames as f64);
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Maximum number of frames examined.
    pub budget: Option<u64>,
    /// Skip the counting fast path and enumerate frames.
    pub exhaustive: bool,
    pub workers: usize,
    pub up_to_weyl: bool,
    pub group_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { budget: None, exhaustive: false, workers: 1, up_to_weyl: true, group_cap: 200_000 }
    }
}

/// Greedy failures kept in a report.
const KEPT_FAILURES: usize = 16;
const BATCH: usize = 2048;

enum Outcome {
    Feasible { greedy: bool },
    Infeasible(InfeasibilityCertificate),
}

fn examine(a: &IncidenceMatrix) -> Outcome {
    match feasible_matching(a).expect("enumerated matrices are well formed") {
        Feasibility::Feasible(_) => {
            let greedy = matcher::staged_greedy(a, Mode::Repair).expect("well formed");
            debug_assert!(!greedy.is_matched() || verify_match(a, &greedy));
            Outcome::Feasible { greedy: greedy.is_matched() }
        }
        Feasibility::Infeasible { certificate } => Outcome::Infeasible(certificate),
    }
}

/// Run the flow oracle on every enumerated set of `size` lines, in
/// batches processed on `workers` threads and merged in enumeration order.
fn scan(
    desc: &SpaceDescriptor,
    opts: &CertifyOptions,
    size: usize,
    report: &mut CertificationReport,
) -> Result<(), OracleError> {
    let lines = singular::singular_lines(desc, opts.group_cap)?;
    let basis = ColumnBasis::new(desc);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .expect("thread pool");
    let enum_opts = EnumerationOptions {
        up_to_weyl: opts.up_to_weyl,
        budget: opts.budget,
        group_cap: opts.group_cap,
        size: Some(size),
    };
    let mut batch: Vec<Vec<usize>> = Vec::with_capacity(BATCH);
    let mut done = false;
    let flush = |batch: &mut Vec<Vec<usize>>, report: &mut CertificationReport| {
        let outcomes: Vec<Outcome> = pool.install(|| {
            batch.par_iter().map(|f| examine(&incidence::matrix_from_lines(desc, &basis, &lines, f))).collect()
        });
        for (f, outcome) in batch.iter().zip(outcomes) {
            report.frames_examined += 1;
            match outcome {
                Outcome::Feasible { greedy } => {
                    report.feasible_frames += 1;
                    if greedy {
                        report.greedy_successes += 1;
                    } else if report.greedy_failures.len() < KEPT_FAILURES {
                        report.greedy_failures.push(frame_ints(&lines, f));
                    }
                }
                Outcome::Infeasible(certificate) => {
                    report.counterexample = Some(Counterexample { frame: frame_ints(&lines, f), certificate });
                    batch.clear();
                    return true;
                }
            }
        }
        batch.clear();
        false
    };
    let (_, group_order, exhausted) = incidence::for_each_singular_frame(desc, enum_opts, |f| {
        batch.push(f.to_vec());
        if batch.len() == BATCH && flush(&mut batch, report) {
            done = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    if !done && !batch.is_empty() {
        done = flush(&mut batch, report);
    }
    report.line_count = Some(lines.len());
    report.group_order = Some(group_order);
    report.status = if done {
        CertStatus::Refuted
    } else if exhausted {
        CertStatus::BudgetExhausted
    } else {
        CertStatus::Certified
    };
    report.close_agreement();
    Ok(())
}

fn frame_ints(lines: &[SingularLine], f: &[usize]) -> Vec<Vec<i64>> {
    f.iter().map(|&i| lines[i].vector.clone()).collect()
}

fn chamber_frame(desc: &SpaceDescriptor) -> Vec<Vec<i64>> {
    singular::maximally_singular_rays(desc).into_iter().map(|r| r.vector).collect()
}

/// Flow-check an explicit frame that is known to fail, as a counterexample.
fn refute_with(desc: &SpaceDescriptor, frame: Vec<Vec<i64>>) -> Result<Counterexample, OracleError> {
    let f = Frame::from_ints(desc, &frame)?;
    let a = incidence::incidence_matrix(desc, &f)?;
    match feasible_matching(&a)? {
        Feasibility::Infeasible { certificate } => Ok(Counterexample { frame, certificate }),
        Feasibility::Feasible(_) => unreachable!("refuting frame turned out feasible"),
    }
}

/// Decide Property E (every frame of maximally singular vectors admits
/// 3 distinct columns per row) for `desc`.
pub fn certify_property_e(desc: &SpaceDescriptor, opts: &CertifyOptions) -> Result<CertificationReport, OracleError> {
    if desc.dim_x < 4 * desc.rank {
        let mut report = CertificationReport::new(desc, CertStatus::Refuted, Method::Counting);
        report.facts.insert("demand_sum".into(), 3 * desc.rank as i64);
        report.counterexample = Some(refute_with(desc, chamber_frame(desc))?);
        report.frames_examined = 1;
        return Ok(report);
    }
    if desc.is_product() {
        return certify_product(desc, opts);
    }
    if desc.rank == 1 {
        let mut report = CertificationReport::new(desc, CertStatus::Certified, Method::RankOne);
        scan(desc, opts, 1, &mut report)?;
        report.method = Method::RankOne;
        return Ok(report);
    }
    if !opts.exhaustive && hall_counting_bound(desc) {
        let mut report = CertificationReport::new(desc, CertStatus::Certified, Method::HallCounting);
        let levi = levi_column_counts(desc);
        for (j, p) in levi.iter().enumerate() {
            report.facts.insert(format!("levi_columns[{j}]"), *p as i64);
        }
        return Ok(report);
    }
    let mut report = CertificationReport::new(desc, CertStatus::Certified, Method::Exhaustive);
    scan(desc, opts, desc.rank, &mut report)?;
    Ok(report)
}

fn certify_product(desc: &SpaceDescriptor, opts: &CertifyOptions) -> Result<CertificationReport, OracleError> {
    let factors = desc.irreducible_factors();
    let mut report = CertificationReport::new(desc, CertStatus::Certified, Method::Product);
    for f in &factors {
        report.factors.push(certify_property_e(f, opts)?);
    }
    let blocks = desc.root_system.blocks().to_vec();
    let ambient = desc.root_system.ambient_dim;
    let embed = |k: usize, v: &[i64]| {
        let mut out = vec![0i64; ambient];
        out[blocks[k].0..blocks[k].0 + blocks[k].1].copy_from_slice(v);
        out
    };
    let factor_frames: Vec<Vec<Vec<i64>>> = factors
        .iter()
        .zip(&report.factors)
        .map(|(f, r)| match &r.counterexample {
            Some(c) if r.status == CertStatus::Refuted => c.frame.clone(),
            _ => chamber_frame(f),
        })
        .collect();
    let frame: Vec<Vec<i64>> = factor_frames
        .iter()
        .enumerate()
        .flat_map(|(k, vs)| vs.iter().map(move |v| (k, v)))
        .map(|(k, v)| embed(k, v))
        .collect();
    report.frames_examined = report.factors.iter().map(|r| r.frames_examined).sum();
    if report.factors.iter().any(|r| r.status == CertStatus::Refuted) {
        report.status = CertStatus::Refuted;
        report.counterexample = Some(refute_with(desc, frame)?);
        return Ok(report);
    }
    if report.factors.iter().any(|r| r.status == CertStatus::BudgetExhausted) {
        report.status = CertStatus::BudgetExhausted;
        return Ok(report);
    }
    let mixed: Vec<Vec<i64>> = (0..frame.len())
        .map(|i| match frame.get(i + 1) {
            Some(next) => frame[i].iter().zip(next).map(|(a, b)| a + b).collect(),
            None => frame[i].clone(),
        })
        .collect();
    let mixed = Frame::from_ints(desc, &mixed)?;
    report.split = Some(incidence::split_descriptor_frame(desc, &mixed)?);
    Ok(report)
}

/// Demand profiles for the weak (2 per regular row) matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeakProfile {
    /// One regular row served by `W ∩ F^⊥`; the other `rank - 1` rows are
    /// maximally singular with demand 3.
    RegularRow,
    /// Every row regular (all ones) with demand 2.
    AllRegular,
}

impl std::str::FromStr for WeakProfile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "regular-row" => Ok(WeakProfile::RegularRow),
            "all-regular" => Ok(WeakProfile::AllRegular),
            _ => Err(format!("unknown profile `{s}`")),
        }
    }
}

pub fn certify_weak_matching(
    desc: &SpaceDescriptor,
    profile: WeakProfile,
    opts: &CertifyOptions,
) -> Result<CertificationReport, OracleError> {
    let m = desc.column_count();
    let r = desc.rank;
    let mut report = CertificationReport::new(desc, CertStatus::Certified, Method::WeakMatching);
    match profile {
        WeakProfile::AllRegular => {
            let rows = vec![vec![1u8; m]; r];
            let a = IncidenceMatrix::from_dense(&rows, Some(vec![2; r]))?;
            report.frames_examined = 1;
            report.facts.insert("demand_sum".into(), 2 * r as i64);
            if let Feasibility::Infeasible { certificate } = feasible_matching(&a)? {
                report.status = CertStatus::Refuted;
                report.counterexample = Some(Counterexample { frame: chamber_frame(desc), certificate });
            }
        }
        WeakProfile::RegularRow => {
            if desc.is_product() || r < 2 {
                return Err(OracleError::UnsupportedProfile(format!(
                    "regular-row needs an irreducible space of rank at least 2, got {}",
                    desc.id
                )));
            }
            let dim_w = desc.dim_x as i64 - 1;
            let f_perp = (desc.dim_x - r) as i64;
            report.facts.insert("dim_w".into(), dim_w);
            report.facts.insert("dim_f_perp".into(), f_perp);
            report.facts.insert("dim_w_cap_f_perp".into(), dim_w + f_perp - desc.dim_x as i64);
            report.facts.insert("dim_w_cap_p".into(), 3 + dim_w - desc.dim_x as i64);
            scan(desc, opts, r - 1, &mut report)?;
            report.facts.insert("min_nonzero_columns".into(), min_nonzero_columns(desc, opts, r - 1)? as i64);
            if report.facts["dim_w_cap_f_perp"] < 2 && report.status == CertStatus::Certified {
                report.status = CertStatus::Refuted;
            }
        }
    }
    Ok(report)
}

/// Least number of nonzero columns over enumerated sets of `size` lines.
pub fn min_nonzero_columns(desc: &SpaceDescriptor, opts: &CertifyOptions, size: usize) -> Result<usize, OracleError> {
    let lines = singular::singular_lines(desc, opts.group_cap)?;
    let basis = ColumnBasis::new(desc);
    let mut least = usize::MAX;
    let enum_opts = EnumerationOptions {
        up_to_weyl: opts.up_to_weyl,
        budget: opts.budget,
        group_cap: opts.group_cap,
        size: Some(size),
    };
    incidence::for_each_singular_frame(desc, enum_opts, |f| {
        least = least.min(incidence::matrix_from_lines(desc, &basis, &lines, f).nonzero_columns());
        ControlFlow::Continue(())
    })?;
    Ok(least)
}
