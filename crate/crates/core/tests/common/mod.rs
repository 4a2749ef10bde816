//! Independent reference computations for the integration tests. Roots
//! are written in the orthonormal ε-basis from explicit formulas, not by
//! reflection closure, and multiplicities come from closed forms.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

/// A restricted root system with multiplicities, up to sign.
#[derive(Clone, Debug)]
pub struct Model {
    pub rank: usize,
    pub dim_x: usize,
    /// One representative per pair `±α`, with its multiplicity.
    pub roots: Vec<(Vec<i64>, u32)>,
    /// A set of chamber rays (one per simple root).
    pub rays: Vec<Vec<i64>>,
}

impl Model {
    pub fn columns(&self) -> usize {
        self.roots.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn q_dim(&self, v: &[i64]) -> usize {
        self.roots.iter().filter(|(r, _)| dot(r, v) != 0).map(|(_, m)| *m as usize).sum()
    }

    pub fn ray_qdims(&self) -> Vec<usize> {
        let mut q: Vec<usize> = self.rays.iter().map(|v| self.q_dim(v)).collect();
        q.sort_unstable();
        q
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(n: usize, i: usize, s: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = s;
    v
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn ones_prefix(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k < i)).collect()
}

/// Multiplicities by squared length in the ε-basis: `(|α|² = 1, 2, 4)`.
#[derive(Clone, Copy, Debug)]
pub struct Mults {
    pub short: u32,
    pub middle: u32,
    pub doubled: u32,
}

/// Roots `e_i ± e_j` (middle), `e_i` (short) and `2e_i` (doubled), each
/// kept only when its multiplicity is positive.
fn bc_roots(n: usize, m: Mults, with_minus: bool) -> Vec<(Vec<i64>, u32)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((add(&unit(n, i, 1), &unit(n, j, -1)), m.middle));
            if with_minus {
                out.push((add(&unit(n, i, 1), &unit(n, j, 1)), m.middle));
            }
        }
        if m.short > 0 {
            out.push((unit(n, i, 1), m.short));
        }
        if m.doubled > 0 {
            out.push((unit(n, i, 2), m.doubled));
        }
    }
    out
}

pub fn type_a(n: usize, mult: u32, dim_x: usize) -> Model {
    let roots = bc_roots(n + 1, Mults { short: 0, middle: mult, doubled: 0 }, false);
    Model { rank: n, dim_x, roots, rays: (1..=n).map(|i| ones_prefix(n + 1, i)).collect() }
}

/// Types B, C and BC: the same rays; zero multiplicities drop a class.
pub fn type_bc(n: usize, m: Mults, dim_x: usize) -> Model {
    Model { rank: n, dim_x, roots: bc_roots(n, m, true), rays: (1..=n).map(|i| ones_prefix(n, i)).collect() }
}

pub fn type_d(n: usize, mult: u32, dim_x: usize) -> Model {
    let roots = bc_roots(n, Mults { short: 0, middle: mult, doubled: 0 }, true);
    let mut rays: Vec<Vec<i64>> = (1..=n - 2).map(|i| ones_prefix(n, i)).collect();
    rays.push(vec![1; n]);
    let mut last = vec![1; n];
    last[n - 1] = -1;
    rays.push(last);
    Model { rank: n, dim_x, roots, rays }
}

pub fn type_g2(short: u32, long: u32, dim_x: usize) -> Model {
    let roots = vec![
        (vec![1, -1, 0], short),
        (vec![1, 0, -1], short),
        (vec![0, 1, -1], short),
        (vec![2, -1, -1], long),
        (vec![-1, 2, -1], long),
        (vec![-1, -1, 2], long),
    ];
    Model { rank: 2, dim_x, roots, rays: vec![vec![1, 1, -2], vec![0, -1, 1]] }
}

/// F4 scaled by 2: short `2e_i` and `(±1,±1,±1,±1)`, long `2e_i ± 2e_j`.
pub fn type_f4(short: u32, long: u32, dim_x: usize) -> Model {
    let mut roots = Vec::new();
    for i in 0..4 {
        roots.push((unit(4, i, 2), short));
        for j in i + 1..4 {
            roots.push((add(&unit(4, i, 2), &unit(4, j, -2)), long));
            roots.push((add(&unit(4, i, 2), &unit(4, j, 2)), long));
        }
    }
    for signs in 0..8 {
        let v: Vec<i64> = std::iter::once(1).chain((0..3).map(|b| if signs >> b & 1 == 1 { -1 } else { 1 })).collect();
        roots.push((v, short));
    }
    let rays = vec![vec![1, 1, 0, 0], vec![2, 1, 1, 0], vec![3, 1, 1, 1], vec![1, 0, 0, 0]];
    Model { rank: 4, dim_x, roots, rays }
}

fn parse(id: &str) -> Option<(String, Vec<i64>, Option<char>)> {
    let open = id.find('(')?;
    let head = id[..open].to_string();
    let inner = id[open + 1..id.len() - 1].to_string();
    let mut nums = Vec::new();
    let mut field = None;
    for part in inner.split(',') {
        match part.trim() {
            "R" => field = Some('R'),
            "C" => field = Some('C'),
            "H" => field = Some('H'),
            p => nums.push(p.replace('−', "-").parse().ok()?),
        }
    }
    Some((head, nums, field))
}

/// The closed-form model of a classical or G2/F4 space, if covered.
pub fn model(id: &str) -> Option<Model> {
    let (head, p, field) = parse(id)?;
    let u = |x: i64| x as usize;
    let m = |short, middle, doubled| Mults { short, middle, doubled };
    Some(match (head.as_str(), field, p.as_slice()) {
        ("SL", Some('R'), [n]) => type_a(u(*n) - 1, 1, u(n * (n + 1) / 2 - 1)),
        ("SL", Some('C'), [n]) => type_a(u(*n) - 1, 2, u(n * n - 1)),
        ("SL", Some('H'), [n]) => type_a(u(*n) - 1, 4, u(2 * n * n - n - 1)),
        ("Sp", Some('R'), [n2]) => type_bc(u(n2 / 2), m(0, 1, 1), u((n2 / 2) * (n2 / 2 + 1))),
        ("Sp", Some('C'), [n2]) => type_bc(u(n2 / 2), m(0, 2, 2), u((n2 / 2) * (n2 + 1))),
        ("SO", Some('C'), [k]) if k % 2 == 1 => type_bc(u(k / 2), m(2, 2, 0), u(k * (k - 1) / 2)),
        ("SO", Some('C'), [k]) => type_d(u(k / 2), 2, u(k * (k - 1) / 2)),
        ("SU", None, [p, q]) if p > q => type_bc(u(*q), m(u32::try_from(2 * (p - q)).ok()?, 2, 1), u(2 * p * q)),
        ("SU", None, [p, q]) => type_bc(u(*q), m(0, 2, 1), u(2 * p * q)),
        ("SO", None, [p, q]) if q == &1 => type_bc(1, m(u32::try_from(p - 1).ok()?, 0, 0), u(*p)),
        ("SO", None, [p, q]) if p > q => type_bc(u(*q), m(u32::try_from(p - q).ok()?, 1, 0), u(p * q)),
        ("SO", None, [_, q]) => type_d(u(*q), 1, u(q * q)),
        ("Sp", None, [p, q]) if p > q => type_bc(u(*q), m(u32::try_from(4 * (p - q)).ok()?, 4, 3), u(4 * p * q)),
        ("Sp", None, [p, q]) => type_bc(u(*q), m(0, 4, 3), u(4 * p * q)),
        ("SO*", None, [n2]) => {
            let n = n2 / 2;
            if n % 2 == 0 {
                type_bc(u(n / 2), m(0, 4, 1), u(n * (n - 1)))
            } else {
                type_bc(u(n / 2), m(4, 4, 1), u(n * (n - 1)))
            }
        }
        ("G2", Some('C'), []) => type_g2(2, 2, 14),
        ("G2", None, [2]) => type_g2(1, 1, 8),
        ("F4", Some('C'), []) => type_f4(2, 2, 52),
        ("F4", None, [4]) => type_f4(1, 1, 28),
        ("F4", None, [-20]) => type_bc(1, m(8, 0, 7), 16),
        _ => return None,
    })
}

/// Positive root counts of the exceptional reduced systems.
pub fn exceptional_positive_roots(label: &str) -> Option<usize> {
    Some(match label {
        "E6" => 36,
        "E7" => 63,
        "E8" => 120,
        "F4" => 24,
        "G2" => 6,
        _ => return None,
    })
}

/// Solve `rank + Σ counts[c]·mult[c] = dim_x` for the one unknown class.
pub fn solve_multiplicity(rank: usize, dim_x: usize, known: &BTreeMap<&str, (usize, u32)>, unknown_count: usize) -> Option<u32> {
    let known_sum: usize = known.values().map(|&(c, m)| c * m as usize).sum();
    let rest = dim_x.checked_sub(rank + known_sum)?;
    (unknown_count > 0 && rest % unknown_count == 0).then(|| (rest / unknown_count) as u32)
}

/// Hall's condition over every row subset.
pub fn hall_feasible(rows: &[Vec<u8>], demands: &[u32]) -> bool {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    (1u32..(1 << n)).all(|mask| {
        let need: u32 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| demands[i]).sum();
        let seen = (0..m).filter(|&c| (0..n).any(|i| mask >> i & 1 == 1 && rows[i][c] == 1)).count();
        seen as u32 >= need
    })
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * cofactor_det(&minor)
        })
        .sum()
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_rows: usize, max_cols: usize) -> (Vec<Vec<u8>>, Vec<u32>) {
    let rows = rng.gen_range(1..=max_rows);
    let cols = rng.gen_range(1..=max_cols);
    let density = rng.gen_range(0.15..0.85);
    let m = (0..rows).map(|_| (0..cols).map(|_| u8::from(rng.gen_bool(density))).collect()).collect();
    let d = (0..rows).map(|_| rng.gen_range(1..=3)).collect();
    (m, d)
}
