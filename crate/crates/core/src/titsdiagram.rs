//! Tits diagrams with trivial automorphism group: relative rank, minimal
//! angle between vertices of isotropic type, and the built-in catalog.
//!
//! The minimal angle of a diagram is taken over its rank-one residues: for
//! each encircled node `i`, delete the other encircled nodes, keep the
//! connected component of `i`, and measure the smallest nonzero angle
//! between distinct vectors in the Weyl orbit of that residue's fundamental
//! weight for `i`. For a rank-one diagram the residue is the whole diagram.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, ExactCosine, NamedAngle, Rational, RationalVector};
use crate::rootsys::{
    AffineBond, DiagramSpec, Family, Realization, RootSystem, RootSystemError, DEFAULT_ORBIT_CAP,
};

pub const MINIMAL_ANGLE_DEFINITION: &str =
    "minimum over rank-one residues (other encircled nodes deleted) of the smallest angle between distinct vertices in the Weyl orbit of the encircled fundamental weight";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("encircled set is empty")]
    NothingEncircled,
    #[error("node label {label} outside 1..={rank}")]
    BadNode { label: usize, rank: usize },
    #[error("diagram has {0} encircled nodes; this check needs relative rank one")]
    NotRankOne(usize),
    #[error("only the trivial automorphism group is supported, got {0:?}")]
    NontrivialAutomorphisms(String),
    #[error("only Bourbaki node labels are supported, got {0:?}")]
    UnsupportedLabels(String),
    #[error("unknown catalog id {0:?}")]
    UnknownCatalogId(String),
}

/// A Coxeter diagram with a nonempty set of encircled (isotropic) nodes.
/// Node indices are 0-based Bourbaki positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TitsDiagram {
    pub spec: DiagramSpec,
    pub encircled: BTreeSet<usize>,
}

impl TitsDiagram {
    pub fn new(
        spec: DiagramSpec,
        encircled: impl IntoIterator<Item = usize>,
    ) -> Result<Self, DiagramError> {
        let spec = DiagramSpec::new(spec.family, spec.rank)?;
        let encircled: BTreeSet<usize> = encircled.into_iter().collect();
        if encircled.is_empty() {
            return Err(DiagramError::NothingEncircled);
        }
        if let Some(&i) = encircled.iter().find(|&&i| i >= spec.rank) {
            return Err(DiagramError::BadNode {
                label: i + 1,
                rank: spec.rank,
            });
        }
        Ok(TitsDiagram { spec, encircled })
    }

    /// Builds a diagram from 1-based Bourbaki labels.
    pub fn from_labels(
        family: Family,
        rank: usize,
        labels: &[usize],
    ) -> Result<Self, DiagramError> {
        let spec = DiagramSpec::new(family, rank)?;
        let mut nodes = Vec::with_capacity(labels.len());
        for &l in labels {
            if l == 0 || l > rank {
                return Err(DiagramError::BadNode { label: l, rank });
            }
            nodes.push(l - 1);
        }
        Self::new(spec, nodes)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.encircled.iter().map(|i| i + 1).collect()
    }

    /// The realization in which a single encircled node is long. Angles do
    /// not depend on this choice; the long-root check does.
    pub fn realization(&self) -> Realization {
        if self.spec.is_simply_laced() || self.encircled.len() != 1 {
            return Realization::Standard;
        }
        let i = *self.encircled.iter().next().expect("nonempty");
        let standard = RootSystem::build(self.spec).expect("validated spec");
        if standard.long_nodes().contains(&i) {
            Realization::Standard
        } else {
            Realization::Dual
        }
    }

    pub fn root_system(&self) -> RootSystem {
        RootSystem::with_realization(self.spec, self.realization()).expect("validated spec")
    }

    /// Nodes of the rank-one residue containing encircled node `i`.
    pub fn residue_nodes(&self, i: usize) -> Vec<usize> {
        let adjacency = |a: usize, b: usize| {
            self.spec
                .edges()
                .iter()
                .any(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
        };
        let mut seen = BTreeSet::from([i]);
        let mut stack = vec![i];
        while let Some(a) = stack.pop() {
            for b in 0..self.spec.rank {
                if !seen.contains(&b) && !self.encircled.contains(&b) && adjacency(a, b) {
                    seen.insert(b);
                    stack.push(b);
                }
            }
        }
        seen.into_iter().collect()
    }
}

impl fmt::Display for TitsDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(usize::to_string).collect();
        write!(f, "{} {{{}}}", self.spec, labels.join(","))
    }
}

/// On-disk form: `{"family":"E","rank":7,"encircled":[6],"labels":"bourbaki"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramJson {
    pub family: String,
    pub rank: usize,
    pub encircled: Vec<usize>,
    #[serde(default = "bourbaki")]
    pub labels: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism_group: Option<String>,
}

fn bourbaki() -> String {
    "bourbaki".to_string()
}

impl TryFrom<DiagramJson> for TitsDiagram {
    type Error = DiagramError;
    fn try_from(j: DiagramJson) -> Result<Self, Self::Error> {
        if !j.labels.eq_ignore_ascii_case("bourbaki") {
            return Err(DiagramError::UnsupportedLabels(j.labels));
        }
        if let Some(g) = j.automorphism_group {
            if !g.eq_ignore_ascii_case("trivial") {
                return Err(DiagramError::NontrivialAutomorphisms(g));
            }
        }
        let family: Family = j
            .family
            .parse()
            .map_err(|_| DiagramError::UnsupportedLabels(format!("family {}", j.family)))?;
        TitsDiagram::from_labels(family, j.rank, &j.encircled)
    }
}

impl From<&TitsDiagram> for DiagramJson {
    fn from(d: &TitsDiagram) -> Self {
        DiagramJson {
            family: d.spec.family.to_string(),
            rank: d.spec.rank,
            encircled: d.labels(),
            labels: bourbaki(),
            automorphism_group: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleReport {
    pub min_cos: ExactCosine,
    pub named: Option<NamedAngle>,
    /// Two orbit vectors realizing the minimum, in the simple-root basis of
    /// the full diagram (zero outside the residue).
    pub witness_pair: (RationalVector, RationalVector),
    /// 0-based encircled node whose residue realizes the minimum.
    pub witness_node: usize,
    pub residue_nodes: Vec<usize>,
    pub orbit_size: usize,
    pub relative_rank: usize,
    pub definition: String,
}

impl AngleReport {
    pub fn equals(&self, a: NamedAngle) -> bool {
        self.min_cos.is_angle(a)
    }

    /// Strictly smaller than `a`, i.e. strictly larger cosine.
    pub fn less_than(&self, a: NamedAngle) -> bool {
        self.min_cos > a.cosine()
    }

    pub fn greater_than(&self, a: NamedAngle) -> bool {
        self.min_cos < a.cosine()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Minimal angle strictly greater than pi/3.
    PartI,
    /// Relative rank one and minimal angle exactly pi/3.
    PartII,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applicability {
    pub verdict: Verdict,
    pub angle: AngleReport,
}

pub fn relative_rank(d: &TitsDiagram) -> usize {
    d.encircled.len()
}

/// Integer image of an orbit with a common denominator, together with the
/// integer Gram matrix, so the all-pairs scan stays in machine integers.
struct IntegerOrbit {
    vectors: Vec<Vec<i64>>,
    gram_times: Vec<Vec<i64>>,
    norm: i64,
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("orbit coordinates fit in i64")
}

impl IntegerOrbit {
    fn new(orbit: &[RationalVector], gram: &[Vec<Rational>]) -> Self {
        let d = exact::common_denominator(orbit.iter().flatten());
        let gd = exact::common_denominator(gram.iter().flatten());
        let scale = |x: &Rational, by: &BigInt| to_i64(&(x.numer() * (by / x.denom())));
        let g: Vec<Vec<i64>> = gram
            .iter()
            .map(|r| r.iter().map(|x| scale(x, &gd)).collect())
            .collect();
        let vectors: Vec<Vec<i64>> = orbit
            .iter()
            .map(|v| v.iter().map(|x| scale(x, &d)).collect())
            .collect();
        let gram_times: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| {
                g.iter()
                    .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        let norm = dot(&vectors[0], &gram_times[0]);
        IntegerOrbit {
            vectors,
            gram_times,
            norm,
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest inner product between two distinct members of a Weyl orbit (all
/// members share one norm), with the indices realizing it.
fn max_distinct_inner_product(orbit: &IntegerOrbit) -> Option<(i64, usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for i in 0..orbit.vectors.len() {
        for j in (i + 1)..orbit.vectors.len() {
            let ip = dot(&orbit.vectors[i], &orbit.gram_times[j]);
            if ip == orbit.norm {
                continue;
            }
            if best.is_none_or(|(b, _, _)| ip > b) {
                best = Some((ip, i, j));
            }
        }
    }
    best
}

/// Weyl orbit of the fundamental weight of encircled node `i` inside its
/// rank-one residue, embedded in full simple-root coordinates.
pub fn residue_orbit(
    d: &TitsDiagram,
    i: usize,
    orbit_cap: usize,
) -> Result<(Vec<usize>, Vec<RationalVector>), DiagramError> {
    let rs = d.root_system().with_orbit_cap(orbit_cap);
    let nodes = d.residue_nodes(i);
    let sub = rs.parabolic(&nodes)?;
    let local = nodes
        .iter()
        .position(|&x| x == i)
        .expect("residue contains its node");
    let orbit = sub.weyl_orbit(&sub.fundamental_weights[local])?;
    let n = d.spec.rank;
    let embedded = orbit
        .into_iter()
        .map(|v| {
            let mut full = vec![Rational::zero(); n];
            for (k, &node) in nodes.iter().enumerate() {
                full[node] = v[k].clone();
            }
            full
        })
        .collect();
    Ok((nodes, embedded))
}

pub fn minimal_angle(d: &TitsDiagram) -> Result<AngleReport, DiagramError> {
    minimal_angle_with_cap(d, DEFAULT_ORBIT_CAP)
}

pub fn minimal_angle_with_cap(
    d: &TitsDiagram,
    orbit_cap: usize,
) -> Result<AngleReport, DiagramError> {
    let rs = d.root_system();
    let mut best: Option<AngleReport> = None;
    for &i in &d.encircled {
        let (nodes, orbit) = residue_orbit(d, i, orbit_cap)?;
        let int_orbit = IntegerOrbit::new(&orbit, &rs.gram);
        let (ip, a, b) = match max_distinct_inner_product(&int_orbit) {
            Some(x) => x,
            // a one-point orbit cannot happen for a nonzero weight
            None => continue,
        };
        let cos = ExactCosine::from_inner_products(
            &Rational::from_integer(ip),
            &Rational::from_integer(int_orbit.norm),
            &Rational::from_integer(int_orbit.norm),
        );
        debug_assert_eq!(cos, rs.cos_between(&orbit[a], &orbit[b]).expect("nonzero"));
        if best.as_ref().is_none_or(|r| cos > r.min_cos) {
            best = Some(AngleReport {
                named: cos.named(),
                min_cos: cos,
                witness_pair: (orbit[a].clone(), orbit[b].clone()),
                witness_node: i,
                residue_nodes: nodes,
                orbit_size: orbit.len(),
                relative_rank: relative_rank(d),
                definition: MINIMAL_ANGLE_DEFINITION.to_string(),
            });
        }
    }
    best.ok_or(DiagramError::NothingEncircled)
}

/// True iff the affine node of the extended diagram is joined by a single
/// bond to the encircled node and to nothing else, i.e. the highest root is
/// a vertex of the encircled type.
pub fn long_root_vertex_check(d: &TitsDiagram) -> Result<bool, DiagramError> {
    if d.encircled.len() != 1 {
        return Err(DiagramError::NotRankOne(d.encircled.len()));
    }
    let i = *d.encircled.iter().next().expect("nonempty");
    let ext = d.root_system().extended_diagram();
    Ok(ext.affine_node_attachments == vec![(i, AffineBond::Single)])
}

pub fn classify_applicability(d: &TitsDiagram) -> Result<Applicability, DiagramError> {
    classify_applicability_with_cap(d, DEFAULT_ORBIT_CAP)
}

pub fn classify_applicability_with_cap(
    d: &TitsDiagram,
    orbit_cap: usize,
) -> Result<Applicability, DiagramError> {
    let angle = minimal_angle_with_cap(d, orbit_cap)?;
    let verdict = if angle.greater_than(NamedAngle::PiThird) {
        Verdict::PartI
    } else if angle.relative_rank == 1 && angle.equals(NamedAngle::PiThird) {
        Verdict::PartII
    } else {
        Verdict::Neither
    };
    Ok(Applicability { verdict, angle })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CatalogGroup {
    /// Rank-one diagrams with minimal angle exactly pi/3.
    Pi3List,
    /// Exceptional diagrams covered by neither main result.
    Problematic,
    /// Possible indices of intermediate forms for the problematic rank-one cases.
    Intermediate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub group: CatalogGroup,
    pub diagram: TitsDiagram,
}

fn entry(
    id: &str,
    group: CatalogGroup,
    family: Family,
    rank: usize,
    labels: &[usize],
) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        group,
        diagram: TitsDiagram::from_labels(family, rank, labels).expect("catalog entries are valid"),
    }
}

/// Ranks at which the classical members of the pi/3 list are instantiated.
pub const B_RANKS: std::ops::RangeInclusive<usize> = 3..=8;
pub const D_RANKS: std::ops::RangeInclusive<usize> = 4..=8;

/// `B_n` with node 2 encircled, long-root realization.
pub fn pi3_b(rank: usize) -> CatalogEntry {
    entry(
        &format!("B{rank}_pi3"),
        CatalogGroup::Pi3List,
        Family::B,
        rank,
        &[2],
    )
}

/// `D_n` with node 2 encircled.
pub fn pi3_d(rank: usize) -> CatalogEntry {
    entry(
        &format!("D{rank}_pi3"),
        CatalogGroup::Pi3List,
        Family::D,
        rank,
        &[2],
    )
}

/// The sixteen built-in diagrams. Classical families appear once, at a
/// representative rank; see [`pi3_family_instances`] for all ranks.
pub fn catalog() -> Vec<CatalogEntry> {
    use CatalogGroup::*;
    use Family::*;
    vec![
        pi3_b(4),
        pi3_d(5),
        entry("E6_pi3", Pi3List, E, 6, &[2]),
        entry("E7_adjoint", Pi3List, E, 7, &[1]),
        entry("E8_adjoint", Pi3List, E, 8, &[8]),
        entry("F4_pi3", Pi3List, F, 4, &[1]),
        entry("G2_pi3", Pi3List, G, 2, &[2]),
        entry("E7_problematic_rank1", Problematic, E, 7, &[6]),
        entry("E7_problematic_rank2", Problematic, E, 7, &[1, 6]),
        entry("E8_problematic_rank1", Problematic, E, 8, &[1]),
        entry("E8_problematic_rank2", Problematic, E, 8, &[1, 8]),
        entry("E7_intermediate_rank2", Intermediate, E, 7, &[1, 6]),
        entry("E7_intermediate_rank3", Intermediate, E, 7, &[1, 6, 7]),
        entry("E7_intermediate_rank4", Intermediate, E, 7, &[1, 3, 4, 6]),
        entry("E8_intermediate_rank2", Intermediate, E, 8, &[1, 8]),
        entry("E8_intermediate_rank4", Intermediate, E, 8, &[1, 6, 7, 8]),
    ]
}

/// Every pi/3-list diagram with the classical families at all supported ranks.
pub fn pi3_family_instances() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = B_RANKS.map(pi3_b).collect();
    out.extend(D_RANKS.map(pi3_d));
    out.extend(catalog().into_iter().filter(|e| {
        e.group == CatalogGroup::Pi3List && !matches!(e.diagram.spec.family, Family::B | Family::D)
    }));
    out
}

/// Looks up a catalog id, also accepting `B{n}_pi3` and `D{n}_pi3` for the
/// supported ranks.
pub fn lookup(id: &str) -> Result<CatalogEntry, DiagramError> {
    if let Some(e) = catalog().into_iter().find(|e| e.id == id) {
        return Ok(e);
    }
    pi3_family_instances()
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| DiagramError::UnknownCatalogId(id.to_string()))
}
