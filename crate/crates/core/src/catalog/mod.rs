//! Restricted root systems with multiplicities and the table of irreducible
//! symmetric spaces of noncompact type, plus their products.
//!
//! A space is named by an id such as `SL(6,R)`, `SO(5,4)`, `Sp(2,2)`,
//! `E6(-14)` or `G2(C)`; products join ids with `×` (or ASCII `x`).
//! Low-rank coincidences are resolved by aliasing to one representative,
//! e.g. `SU(2,2)` resolves to `SO(4,2)`.

mod roots;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use roots::{
    tags_for, ComponentMultiplicities, OrbitTag, RestrictedRoot, RestrictedRootSystem, RootType,
    RootVector,
};

/// Largest rank accepted for the classical families.
pub const MAX_CLASSICAL_RANK: usize = 12;

/// Default cap on orbit sizes in [`weyl_orbit`].
pub const DEFAULT_ORBIT_CAP: usize = 500_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("inconsistent catalog entry: {0}")]
    InconsistentCatalog(String),
    #[error("orbit exceeds the cap of {cap} elements")]
    OrbitBudgetExceeded { cap: usize },
    #[error("vector is not in the span of the roots")]
    NotInSpan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Field {
    R,
    C,
    H,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    SlReal,
    SlComplex,
    SlQuaternion,
    SpReal,
    SpComplex,
    SoComplex,
    Su,
    So,
    SpIndefinite,
    SoStar,
    E6,
    E7,
    E8,
    F4,
    G2,
    Product,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::SlReal => "SL(R)",
            Family::SlComplex => "SL(C)",
            Family::SlQuaternion => "SL(H)",
            Family::SpReal => "Sp(R)",
            Family::SpComplex => "Sp(C)",
            Family::SoComplex => "SO(C)",
            Family::Su => "SU(p,q)",
            Family::So => "SO(p,q)",
            Family::SpIndefinite => "Sp(p,q)",
            Family::SoStar => "SO*",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
            Family::Product => "product",
        };
        f.write_str(s)
    }
}

/// The appendix's statement about the minimum of `dim Q_v` over maximally
/// singular rays: either an exact value or only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RecordedMinQdim {
    Exact(u32),
    AtLeast(u32),
}

impl RecordedMinQdim {
    pub fn value(self) -> u32 {
        match self {
            RecordedMinQdim::Exact(v) | RecordedMinQdim::AtLeast(v) => v,
        }
    }

    pub fn accepts(self, computed: u32) -> bool {
        match self {
            RecordedMinQdim::Exact(v) => computed == v,
            RecordedMinQdim::AtLeast(v) => computed >= v,
        }
    }

    fn combine(self, other: RecordedMinQdim) -> RecordedMinQdim {
        use RecordedMinQdim::*;
        let (a, b) = (self.value(), other.value());
        match (self, other) {
            (Exact(_), Exact(_)) => Exact(a.min(b)),
            (Exact(_), AtLeast(_)) if a <= b => Exact(a),
            (AtLeast(_), Exact(_)) if b <= a => Exact(b),
            _ => AtLeast(a.min(b)),
        }
    }
}

impl fmt::Display for RecordedMinQdim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordedMinQdim::Exact(v) => write!(f, "{v}"),
            RecordedMinQdim::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// A catalogued symmetric space.
#[derive(Clone, Debug)]
pub struct SpaceDescriptor {
    pub id: String,
    pub family: Family,
    pub params: Vec<i64>,
    pub rank: usize,
    /// Dimension of the symmetric space, from `dim G - dim K`.
    pub dim_x: usize,
    pub root_system: RestrictedRootSystem,
    pub recorded_min_qdim: RecordedMinQdim,
    /// Irreducible factors; empty for an irreducible space.
    pub factors: Vec<SpaceDescriptor>,
    /// The id as requested, when it resolved to a different representative.
    pub alias_of: Option<String>,
    multiplicities: Vec<ComponentMultiplicities>,
}

impl SpaceDescriptor {
    pub fn is_product(&self) -> bool {
        !self.factors.is_empty()
    }

    /// Irreducible factors, or the space itself when irreducible.
    pub fn irreducible_factors(&self) -> Vec<&SpaceDescriptor> {
        if self.factors.is_empty() {
            vec![self]
        } else {
            self.factors.iter().collect()
        }
    }

    /// Number of columns of an incidence matrix, `dim_x - rank` when consistent.
    pub fn column_count(&self) -> usize {
        self.root_system.column_count()
    }

    pub fn component_multiplicities(&self) -> &[ComponentMultiplicities] {
        &self.multiplicities
    }
}

/// Parse a space id and build its descriptor.
pub fn lookup(id: &str) -> Result<SpaceDescriptor, CatalogError> {
    let parts: Vec<&str> = id
        .split(['×', 'x'])
        .map(str::trim)
        .collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CatalogError::UnknownSpace(id.to_string()));
    }
    let mut factors = Vec::new();
    for p in &parts {
        let d = lookup_irreducible(p)?;
        if d.is_product() {
            factors.extend(d.factors);
        } else {
            factors.push(d);
        }
    }
    if factors.len() == 1 {
        return Ok(factors.pop().unwrap());
    }
    build_product(factors, Some(id.trim().to_string()))
}

fn build_product(
    factors: Vec<SpaceDescriptor>,
    requested: Option<String>,
) -> Result<SpaceDescriptor, CatalogError> {
    let id = factors.iter().map(|f| f.id.as_str()).collect::<Vec<_>>().join("×");
    let multiplicities: Vec<ComponentMultiplicities> =
        factors.iter().flat_map(|f| f.multiplicities.iter().cloned()).collect();
    let root_system = RestrictedRootSystem::product(&multiplicities)?;
    let recorded = factors
        .iter()
        .map(|f| f.recorded_min_qdim)
        .reduce(RecordedMinQdim::combine)
        .expect("product has factors");
    Ok(SpaceDescriptor {
        alias_of: requested.filter(|r| *r != id),
        id,
        family: Family::Product,
        params: Vec::new(),
        rank: factors.iter().map(|f| f.rank).sum(),
        dim_x: factors.iter().map(|f| f.dim_x).sum(),
        root_system,
        recorded_min_qdim: recorded,
        factors,
        multiplicities,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Arg {
    Int(i64),
    Ring(Field),
}

fn parse_id(id: &str) -> Result<(String, Vec<Arg>), CatalogError> {
    let unknown = || CatalogError::UnknownSpace(id.to_string());
    let normalized = id.replace('−', "-").replace(' ', "");
    let open = normalized.find('(').ok_or_else(unknown)?;
    if !normalized.ends_with(')') {
        return Err(unknown());
    }
    let head = normalized[..open].to_string();
    let args = normalized[open + 1..normalized.len() - 1]
        .split(',')
        .map(|a| match a {
            "R" => Ok(Arg::Ring(Field::R)),
            "C" => Ok(Arg::Ring(Field::C)),
            "H" => Ok(Arg::Ring(Field::H)),
            _ => a.parse::<i64>().map(Arg::Int).map_err(|_| unknown()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((head, args))
}

fn unsupported(msg: impl Into<String>) -> CatalogError {
    CatalogError::UnsupportedParams(msg.into())
}

fn check_rank(n: i64, id: &str) -> Result<usize, CatalogError> {
    if n < 1 || n as usize > MAX_CLASSICAL_RANK {
        return Err(unsupported(format!("{id}: rank {n} outside 1..={MAX_CLASSICAL_RANK}")));
    }
    Ok(n as usize)
}

fn lookup_irreducible(id: &str) -> Result<SpaceDescriptor, CatalogError> {
    if id == "R" {
        return Err(unsupported("the flat factor R has no restricted roots"));
    }
    let (head, args) = parse_id(id)?;
    let resolved = resolve_alias(&head, &args);
    if let Some(target) = resolved {
        let mut d = lookup(target)?;
        d.alias_of = Some(id.to_string());
        return Ok(d);
    }
    let mut d = build_irreducible(id, &head, &args)?;
    let canonical = canonical_id(&head, &args);
    if canonical != id {
        d.alias_of = Some(id.to_string());
    }
    d.id = canonical;
    Ok(d)
}

fn canonical_id(head: &str, args: &[Arg]) -> String {
    let args: Vec<String> = args
        .iter()
        .map(|a| match a {
            Arg::Int(n) => n.to_string(),
            Arg::Ring(f) => format!("{f:?}"),
        })
        .collect();
    format!("{head}({})", args.join(","))
}

/// Low-rank isomorphisms, resolved to a single representative.
fn resolve_alias(head: &str, args: &[Arg]) -> Option<&'static str> {
    use Arg::*;
        match (head, args) {
        ("SU", [Int(2), Int(2)]) => Some("SO(4,2)"),
        ("SU", [Int(1), Int(1)]) => Some("SL(2,R)"),
        ("SO", [Int(3), Int(2)]) => Some("Sp(4,R)"),
        ("SO", [Int(3), Int(3)]) => Some("SL(4,R)"),
        ("SO", [Int(2), Int(2)]) => Some("SL(2,R)×SL(2,R)"),
        ("SO", [Int(2), Int(1)]) => Some("SL(2,R)"),
        ("SO", [Int(3), Int(1)]) => Some("SL(2,C)"),
        ("SO", [Int(3), Ring(Field::C)]) => Some("SL(2,C)"),
        ("SO", [Int(4), Ring(Field::C)]) => Some("SL(2,C)×SL(2,C)"),
        ("SO", [Int(6), Ring(Field::C)]) => Some("SL(4,C)"),
        ("Sp", [Int(2), Ring(Field::R)]) => Some("SL(2,R)"),
        ("Sp", [Int(2), Ring(Field::C)]) => Some("SL(2,C)"),
        ("Sp", [Int(1), Int(1)]) => Some("SO(4,1)"),
        ("SO*", [Int(6)]) => Some("SU(3,1)"),
        ("SO*", [Int(8)]) => Some("SO(6,2)"),
        _ => None,
    }
}

struct Entry {
    family: Family,
    params: Vec<i64>,
    dim_x: usize,
    components: ComponentMultiplicities,
    recorded: RecordedMinQdim,
}

fn mult(t: RootType, pairs: &[(OrbitTag, u32)]) -> ComponentMultiplicities {
    ComponentMultiplicities { root_type: t, by_tag: pairs.to_vec() }
}

fn build_irreducible(id: &str, head: &str, args: &[Arg]) -> Result<SpaceDescriptor, CatalogError> {
    use Arg::*;
    use OrbitTag::*;
    use RecordedMinQdim::*;
    let entry = match (head, args) {
        ("SL", [Int(n1), Ring(field)]) => {
            let n = check_rank(n1 - 1, id)?;
            let m = (n + 1) * (n + 1);
            let (family, k, dim_x) = match field {
                Field::R => (Family::SlReal, 1, m - 1 - n * (n + 1) / 2),
                Field::C => (Family::SlComplex, 2, m - 1),
                Field::H => (Family::SlQuaternion, 4, (4 * m - 1) - (n + 1) * (2 * n + 3)),
            };
            Entry {
                family,
                params: vec![*n1],
                dim_x,
                components: ComponentMultiplicities::uniform(RootType::A(n), k),
                recorded: Exact(k * n as u32),
            }
        }
        ("Sp", [Int(two_n), Ring(field)]) if *field != Field::H => {
            if two_n % 2 != 0 {
                return Err(unsupported(format!("{id}: Sp needs an even degree")));
            }
            let n = check_rank(two_n / 2, id)?;
            let nu = n as u32;
            match field {
                Field::R => Entry {
                    family: Family::SpReal,
                    params: vec![*two_n],
                    dim_x: n * (n + 1),
                    components: ComponentMultiplicities::uniform(RootType::C(n), 1),
                    recorded: Exact(2 * nu - 1),
                },
                _ => Entry {
                    family: Family::SpComplex,
                    params: vec![*two_n],
                    dim_x: n * (2 * n + 1),
                    components: ComponentMultiplicities::uniform(RootType::C(n), 2),
                    recorded: Exact(4 * nu - 2),
                },
            }
        }
        ("SO", [Int(big_n), Ring(Field::C)]) => {
            let big = *big_n;
            let n = check_rank(big / 2, id)?;
            let nu = n as u32;
            let dim_x = (big * (big - 1) / 2) as usize;
            if big % 2 == 1 {
                Entry {
                    family: Family::SoComplex,
                    params: vec![big],
                    dim_x,
                    components: ComponentMultiplicities::uniform(RootType::B(n), 2),
                    recorded: Exact(4 * nu - 2),
                }
            } else {
                if n < 4 {
                    return Err(unsupported(format!("{id}: even complex orthogonal needs degree ≥ 8")));
                }
                Entry {
                    family: Family::SoComplex,
                    params: vec![big],
                    dim_x,
                    components: ComponentMultiplicities::uniform(RootType::D(n), 2),
                    recorded: Exact(4 * nu - 4),
                }
            }
        }
        ("SU", [Int(p), Int(q)]) => {
            let (p, q) = (*p, *q);
            if q > p {
                return Err(unsupported(format!("{id}: SU(m,n) requires m ≥ n")));
            }
            let n = check_rank(q, id)?;
            let (mu, nu) = (p as u32, q as u32);
            let components = if p == q {
                mult(RootType::C(n), &[(Short, 2), (Long, 1)])
            } else {
                mult(RootType::BC(n), &[(Short, 2 * (mu - nu)), (Middle, 2), (Doubled, 1)])
            };
            Entry {
                family: Family::Su,
                params: vec![p, q],
                dim_x: 2 * (p * q) as usize,
                components,
                recorded: Exact(2 * (mu + nu) - 3),
            }
        }
        ("SO", [Int(p), Int(q)]) => {
            let (p, q) = (*p, *q);
            if q > p {
                return Err(unsupported(format!("{id}: SO(m,n) requires m ≥ n")));
            }
            let n = check_rank(q, id)?;
            if p < 2 {
                return Err(unsupported(format!("{id}: SO(1,1) is the flat line")));
            }
            let components = if p == q {
                ComponentMultiplicities::uniform(RootType::D(n), 1)
            } else if n == 1 {
                ComponentMultiplicities::uniform(RootType::B(1), (p - 1) as u32)
            } else {
                mult(RootType::B(n), &[(Short, (p - q) as u32), (Long, 1)])
            };
            Entry {
                family: Family::So,
                params: vec![p, q],
                dim_x: (p * q) as usize,
                components,
                recorded: Exact((p + q - 2) as u32),
            }
        }
        ("Sp", [Int(p), Int(q)]) => {
            let (p, q) = (*p, *q);
            if q > p {
                return Err(unsupported(format!("{id}: Sp(m,n) requires m ≥ n")));
            }
            let n = check_rank(q, id)?;
            let (mu, nu) = (p as u32, q as u32);
            let components = if p == q {
                mult(RootType::C(n), &[(Short, 4), (Long, 3)])
            } else {
                mult(RootType::BC(n), &[(Short, 4 * (mu - nu)), (Middle, 4), (Doubled, 3)])
            };
            let recorded = if (p, q) == (2, 2) { AtLeast(10) } else { Exact(4 * (mu + nu) - 5) };
            Entry {
                family: Family::SpIndefinite,
                params: vec![p, q],
                dim_x: 4 * (p * q) as usize,
                components,
                recorded,
            }
        }
        ("SO*", [Int(two_n)]) => {
            let two_n = *two_n;
            if two_n % 2 != 0 || two_n < 10 {
                return Err(unsupported(format!("{id}: SO*(2n) needs even 2n ≥ 10")));
            }
            let big_n = two_n / 2;
            let k = check_rank(big_n / 2, id)?;
            let ku = k as u32;
            let (components, recorded) = if big_n % 2 == 0 {
                (mult(RootType::C(k), &[(Short, 4), (Long, 1)]), Exact(8 * ku - 7))
            } else {
                (
                    mult(RootType::BC(k), &[(Short, 4), (Middle, 4), (Doubled, 1)]),
                    AtLeast(3 * ku),
                )
            };
            Entry {
                family: Family::SoStar,
                params: vec![two_n],
                dim_x: (big_n * (big_n - 1)) as usize,
                components,
                recorded,
            }
        }
        _ => exceptional(head, args).ok_or_else(|| CatalogError::UnknownSpace(id.to_string()))?,
    };
    let rank = entry.components.root_type.rank();
    let root_system = RestrictedRootSystem::irreducible(&entry.components)?;
    let recorded = if rank == 1 {
        RecordedMinQdim::Exact(entry.dim_x as u32 - 1)
    } else {
        entry.recorded
    };
    Ok(SpaceDescriptor {
        id: id.to_string(),
        family: entry.family,
        params: entry.params,
        rank,
        dim_x: entry.dim_x,
        root_system,
        recorded_min_qdim: recorded,
        factors: Vec::new(),
        alias_of: None,
        multiplicities: vec![entry.components],
    })
}

fn exceptional(head: &str, args: &[Arg]) -> Option<Entry> {
    use OrbitTag::*;
    use RecordedMinQdim::*;
    let (family, root_type, dim_compact) = match head {
        "E6" => (Family::E6, RootType::E6, 78),
        "E7" => (Family::E7, RootType::E7, 133),
        "E8" => (Family::E8, RootType::E8, 248),
        "F4" => (Family::F4, RootType::F4, 52),
        "G2" => (Family::G2, RootType::G2, 14),
        _ => return None,
    };
    let entry = |params: Vec<i64>, dim_x: usize, components, recorded| Entry {
        family,
        params,
        dim_x,
        components,
        recorded,
    };
    match args {
        [Arg::Ring(Field::C)] => {
            let recorded = match root_type {
                RootType::E6 => 32,
                RootType::E7 => 66,
                RootType::E8 => 114,
                RootType::F4 => 30,
                _ => 10,
            };
            Some(entry(
                vec![],
                dim_compact,
                ComponentMultiplicities::uniform(root_type, 2),
                Exact(recorded),
            ))
        }
        [Arg::Int(sig)] => {
            // A real form has the dimension of the compact form; dim_x = dim G - dim K.
            let (dim_k, components, recorded) = match (head, sig) {
                ("E6", 6) => (36, ComponentMultiplicities::uniform(RootType::E6, 1), Exact(16)),
                ("E6", 2) => (38, mult(RootType::F4, &[(Long, 1), (Short, 2)]), AtLeast(15)),
                ("E6", -14) => (
                    46,
                    mult(RootType::BC(2), &[(Short, 8), (Middle, 6), (Doubled, 1)]),
                    AtLeast(9),
                ),
                ("E6", -26) => (52, ComponentMultiplicities::uniform(RootType::A(2), 8), AtLeast(12)),
                ("E7", 7) => (63, ComponentMultiplicities::uniform(RootType::E7, 1), Exact(33)),
                ("E7", -5) => (69, mult(RootType::F4, &[(Long, 1), (Short, 4)]), AtLeast(15)),
                ("E7", -25) => (79, mult(RootType::C(3), &[(Short, 8), (Long, 1)]), Exact(17)),
                ("E8", 8) => (120, ComponentMultiplicities::uniform(RootType::E8, 1), Exact(57)),
                ("E8", -24) => (136, mult(RootType::F4, &[(Long, 1), (Short, 8)]), AtLeast(27)),
                ("F4", 4) => (24, ComponentMultiplicities::uniform(RootType::F4, 1), Exact(15)),
                ("F4", -20) => (36, mult(RootType::BC(1), &[(Short, 8), (Doubled, 7)]), Exact(15)),
                ("G2", 2) => (6, ComponentMultiplicities::uniform(RootType::G2, 1), Exact(5)),
                _ => return None,
            };
            Some(entry(vec![*sig], dim_compact - dim_k, components, recorded))
        }
        _ => None,
    }
}

/// Positive roots in canonical order.
pub fn positive_roots(desc: &SpaceDescriptor) -> &[RestrictedRoot] {
    &desc.root_system.positive_roots
}

/// Multiplicity per length class, one map per irreducible factor, after
/// validating that multiplicities fill `dim_x - rank` and reproduce the
/// recorded minimum of `dim Q_v`.
pub fn multiplicity_table(
    desc: &SpaceDescriptor,
) -> Result<Vec<BTreeMap<OrbitTag, u32>>, CatalogError> {
    let mut tables = Vec::new();
    for factor in desc.irreducible_factors() {
        let total = factor.column_count();
        if factor.rank + total != factor.dim_x {
            return Err(CatalogError::InconsistentCatalog(format!(
                "{}: rank {} + multiplicities {} != dim {}",
                factor.id, factor.rank, total, factor.dim_x
            )));
        }
        let computed = crate::singular::min_q_dim(factor) as u32;
        if !factor.recorded_min_qdim.accepts(computed) {
            return Err(CatalogError::InconsistentCatalog(format!(
                "{}: minimum dim Q_v is {computed}, recorded {}",
                factor.id, factor.recorded_min_qdim
            )));
        }
        let mut table = BTreeMap::new();
        for root in &factor.root_system.positive_roots {
            let prev = table.insert(root.orbit_tag, root.multiplicity);
            if prev.is_some_and(|p| p != root.multiplicity) {
                return Err(CatalogError::InconsistentCatalog(format!(
                    "{}: multiplicity not constant on {} roots",
                    factor.id, root.orbit_tag
                )));
            }
        }
        tables.push(table);
    }
    Ok(tables)
}

/// Weyl orbit of `v` by breadth-first saturation under simple reflections.
pub fn weyl_orbit(
    desc: &SpaceDescriptor,
    v: &RootVector,
    cap: usize,
) -> Result<BTreeSet<RootVector>, CatalogError> {
    if !desc.root_system.in_span(v) {
        return Err(CatalogError::NotInSpan);
    }
    desc.root_system.orbit(v, cap)
}

#[derive(Serialize)]
struct RootJson {
    coords: Vec<i64>,
    mult: u32,
}

#[derive(Serialize)]
struct DescriptorJson<'a> {
    id: &'a str,
    family: String,
    params: &'a [i64],
    rank: usize,
    dim_x: usize,
    roots: Vec<RootJson>,
    simple_root_indices: &'a [usize],
}

pub fn to_json(desc: &SpaceDescriptor) -> serde_json::Value {
    let doc = DescriptorJson {
        id: &desc.id,
        family: desc.family.to_string(),
        params: &desc.params,
        rank: desc.rank,
        dim_x: desc.dim_x,
        roots: desc
            .root_system
            .positive_roots
            .iter()
            .map(|r| RootJson {
                coords: r.vector.as_ints().expect("roots have integer coordinates"),
                mult: r.multiplicity,
            })
            .collect(),
        simple_root_indices: &desc.root_system.simple_indices,
    };
    serde_json::to_value(doc).expect("descriptor serializes")
}

/// Ids of every catalogued space, sorted by (family, params): classical
/// families over a representative parameter range, all exceptional forms,
/// and the rank-one spaces.
pub fn catalog_ids() -> Vec<String> {
    let mut ids: Vec<String> = Vec::new();
    ids.extend((3..=9).map(|n| format!("SL({n},R)")));
    ids.extend((3..=7).map(|n| format!("SL({n},C)")));
    ids.extend((2..=5).map(|n| format!("SL({n},H)")));
    ids.extend((2..=6).map(|n| format!("Sp({},R)", 2 * n)));
    ids.extend((2..=6).map(|n| format!("Sp({},C)", 2 * n)));
    ids.extend((2..=6).map(|n| format!("SO({},C)", 2 * n + 1)));
    ids.extend((4..=6).map(|n| format!("SO({},C)", 2 * n)));
    for (p, q) in [(3, 2), (4, 2), (3, 3), (4, 3), (5, 3), (4, 4), (6, 4)] {
        ids.push(format!("SU({p},{q})"));
    }
    for (p, q) in [(4, 2), (5, 2), (4, 3), (5, 3), (6, 3), (4, 4), (5, 4), (5, 5), (6, 6), (7, 4)] {
        ids.push(format!("SO({p},{q})"));
    }
    for (p, q) in [(2, 2), (3, 2), (3, 3), (4, 2), (5, 3)] {
        ids.push(format!("Sp({p},{q})"));
    }
    ids.extend([10, 12, 14, 16, 18, 20].iter().map(|n| format!("SO*({n})")));
    ids.extend(
        ["E6(C)", "E6(6)", "E6(2)", "E6(-14)", "E6(-26)"]
            .iter()
            .chain(&["E7(C)", "E7(7)", "E7(-5)", "E7(-25)"])
            .chain(&["E8(C)", "E8(8)", "E8(-24)"])
            .chain(&["F4(C)", "F4(4)", "F4(-20)", "G2(C)", "G2(2)"])
            .map(|s| s.to_string()),
    );
    ids.extend(["SO(4,1)", "SO(5,1)", "SO(6,1)", "SU(2,1)", "SU(3,1)", "Sp(2,1)", "Sp(3,1)"].map(String::from));
    ids
}

/// Every catalogued space as a descriptor.
pub fn catalog() -> Vec<SpaceDescriptor> {
    catalog_ids().iter().map(|id| lookup(id).expect("catalog ids resolve")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_examples() {
        let d = lookup("SL(6,R)").unwrap();
        assert_eq!((d.rank, d.dim_x), (5, 20));
        assert_eq!(d.root_system.type_label(), "A5");
        assert!(d.root_system.positive_roots.iter().all(|r| r.multiplicity == 1));

        let d = lookup("Sp(4,R)").unwrap();
        assert_eq!((d.rank, d.dim_x, positive_roots(&d).len()), (2, 6, 4));

        let d = lookup("SL(2,H)").unwrap();
        assert_eq!((d.rank, d.dim_x), (1, 5));
        assert_eq!(positive_roots(&d)[0].multiplicity, 4);
    }

    #[test]
    fn aliases_resolve() {
        let d = lookup("SU(2,2)").unwrap();
        assert_eq!(d.id, "SO(4,2)");
        assert_eq!(d.alias_of.as_deref(), Some("SU(2,2)"));
        let d = lookup("SO(2,2)").unwrap();
        assert!(d.is_product());
        assert_eq!((d.rank, d.dim_x), (2, 4));
        assert_eq!(lookup("SO(6,C)").unwrap().id, "SL(4,C)");
    }

    #[test]
    fn products_concatenate() {
        let d = lookup("SL(3,R)×Sp(4,R)").unwrap();
        assert_eq!((d.rank, d.dim_x, d.column_count()), (4, 11, 7));
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.root_system.ambient_dim, 5);
        assert_eq!(lookup("SL(3,R) x SL(3,R)").unwrap().id, "SL(3,R)×SL(3,R)");
    }

    #[test]
    fn errors() {
        assert!(matches!(lookup("XYZ(3)"), Err(CatalogError::UnknownSpace(_))));
        assert!(matches!(lookup("SU(2,3)"), Err(CatalogError::UnsupportedParams(_))));
        assert!(matches!(lookup("SL(20,R)"), Err(CatalogError::UnsupportedParams(_))));
        assert!(matches!(lookup("R"), Err(CatalogError::UnsupportedParams(_))));
        assert!(matches!(lookup("SL(3,R)×"), Err(CatalogError::UnknownSpace(_))));
    }

    #[test]
    fn unicode_minus_accepted() {
        assert_eq!(lookup("E6(−14)").unwrap().id, "E6(-14)");
    }

    #[test]
    fn su32_multiplicity_table() {
        let t = multiplicity_table(&lookup("SU(3,2)").unwrap()).unwrap();
        assert_eq!(t[0][&OrbitTag::Middle], 2);
        assert_eq!(t[0][&OrbitTag::Short], 2);
        assert_eq!(t[0][&OrbitTag::Doubled], 1);
    }

    #[test]
    fn json_export_shape() {
        let j = to_json(&lookup("Sp(4,R)").unwrap());
        assert_eq!(j["roots"].as_array().unwrap().len(), 4);
        assert_eq!(j["simple_root_indices"], serde_json::json!([1, 0]));
    }

    #[test]
    fn orbit_c2() {
        let d = lookup("Sp(4,R)").unwrap();
        let o = weyl_orbit(&d, &RootVector::from_ints(&[1, 0]), 100).unwrap();
        assert_eq!(o.len(), 4);
        let bad = weyl_orbit(&lookup("SL(3,R)").unwrap(), &RootVector::from_ints(&[1, 0, 0]), 100);
        assert_eq!(bad, Err(CatalogError::NotInSpan));
    }
}
