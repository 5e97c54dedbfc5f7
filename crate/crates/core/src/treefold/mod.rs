//! Trees with flat triangles: a finite family of lines between ends, glued
//! along half-lines, with one equilateral triangle per triple of ends.
//!
//! Every pair of ends spans one line with a rational chart whose coordinate
//! increases toward the lexicographically larger end. A triple `{p,q,r}`
//! carries a side length and, on each of its three lines, the positions of
//! its two corners on that line. The corner `(qpr)` is the vertex at `p`:
//! it sits on the lines `pq` and `pr`, nearer to `p` than the other corner.

mod classify;
mod fold;
mod gen;
mod retract;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Rational;

pub use classify::{classify_four_ends, matching_tags, ConfigClass, ConfigTag};
pub use fold::{
    fold_quotient, quotient_distance, verify_tree_axioms, AxiomCheck, AxiomReport, NodeId, QPoint,
    QuotientTree, QuotientTreeJson,
};
pub use gen::{
    cyclic_impossible_instance, gen_attach_end, gen_config1, gen_config2, gen_config3, gen_random,
    gen_tripod, random_template, TreeModel,
};
pub use retract::{
    busemann_retraction_offset, relative_distance, retraction, retraction_by_offset,
    retraction_invariance_check, RetractionReport,
};
pub use validate::{validate, ValidationReport};

/// Index of an end in the sorted name list of its instance.
pub type EndId = usize;

/// Unordered pair of ends, stored with the smaller id first.
pub type Line = (EndId, EndId);

pub fn line(a: EndId, b: EndId) -> Line {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// +1 if chart coordinates on `l` increase toward `end`, -1 otherwise.
pub fn sign_toward(l: Line, end: EndId) -> i8 {
    debug_assert!(end == l.0 || end == l.1);
    if end == l.1 {
        1
    } else {
        -1
    }
}

fn signed(s: i8, x: Rational) -> Rational {
    if s < 0 {
        -x
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeFoldError {
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("unknown end {0:?}")]
    UnknownEnd(String),
    #[error("triangle {triple:?} is not equilateral: {detail}")]
    EquilateralViolation { triple: [String; 3], detail: String },
    #[error("lines toward {end:?} do not comb consistently: {detail}")]
    CombingMismatch { end: String, detail: String },
    #[error("ends {ends:?} match none of the three admissible configurations")]
    ImpossibleConfiguration { ends: [String; 4] },
    #[error("ends {ends:?} match no configuration template")]
    NoTemplateMatch { ends: [String; 4] },
    #[error("folding produced inconsistent identifications: {0}")]
    FoldMismatch(String),
    #[error("point does not lie on the required line: {0}")]
    WrongLine(String),
    #[error("point cannot be resolved in the quotient: {0}")]
    UnknownPoint(String),
    #[error("bad template parameters: {0}")]
    BadTemplateParams(String),
}

impl TreeFoldError {
    /// Lower is more severe; used to pick the headline error of a report.
    pub fn precedence(&self) -> u8 {
        match self {
            TreeFoldError::Malformed(_) | TreeFoldError::UnknownEnd(_) => 0,
            TreeFoldError::EquilateralViolation { .. } => 1,
            TreeFoldError::ImpossibleConfiguration { .. }
            | TreeFoldError::NoTemplateMatch { .. } => 2,
            TreeFoldError::CombingMismatch { .. } => 3,
            TreeFoldError::FoldMismatch(_) => 4,
            _ => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TreeFoldError::Malformed(_) => "Malformed",
            TreeFoldError::UnknownEnd(_) => "UnknownEnd",
            TreeFoldError::EquilateralViolation { .. } => "EquilateralViolation",
            TreeFoldError::CombingMismatch { .. } => "CombingMismatch",
            TreeFoldError::ImpossibleConfiguration { .. } => "ImpossibleConfiguration",
            TreeFoldError::NoTemplateMatch { .. } => "NoTemplateMatch",
            TreeFoldError::FoldMismatch(_) => "FoldMismatch",
            TreeFoldError::WrongLine(_) => "WrongLine",
            TreeFoldError::UnknownPoint(_) => "UnknownPoint",
            TreeFoldError::BadTemplateParams(_) => "BadTemplateParams",
        }
    }
}

/// A point given by a line and a chart coordinate on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointRef {
    pub line: Line,
    pub coord: Rational,
}

impl PointRef {
    pub fn new(a: EndId, b: EndId, coord: Rational) -> Self {
        PointRef {
            line: line(a, b),
            coord,
        }
    }
}

fn sorted3(a: EndId, b: EndId, c: EndId) -> [EndId; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// A complete corner table over a set of named ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    names: Vec<String>,
    sides: BTreeMap<[EndId; 3], Rational>,
    /// `(v, o, t)`: coordinate on line `vo` of the vertex at `v` of the
    /// triangle `{v, o, t}`.
    corners: BTreeMap<(EndId, EndId, EndId), Rational>,
}

/// An instance under construction; see [`Instance::draft`].
#[derive(Debug, Clone)]
pub struct InstanceDraft {
    inner: Instance,
}

impl Instance {
    pub fn draft<S: AsRef<str>>(names: &[S]) -> Result<InstanceDraft, TreeFoldError> {
        let mut names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        if names.len() < 2 {
            return Err(TreeFoldError::Malformed("need at least two ends".into()));
        }
        if names.iter().any(String::is_empty) {
            return Err(TreeFoldError::Malformed("empty end name".into()));
        }
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(TreeFoldError::Malformed("duplicate end name".into()));
        }
        Ok(InstanceDraft {
            inner: Instance {
                names,
                sides: BTreeMap::new(),
                corners: BTreeMap::new(),
            },
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: EndId) -> &str {
        &self.names[e]
    }

    pub fn end_count(&self) -> usize {
        self.names.len()
    }

    pub fn end_id(&self, name: &str) -> Result<EndId, TreeFoldError> {
        self.names
            .binary_search_by(|n| n.as_str().cmp(name))
            .map_err(|_| TreeFoldError::UnknownEnd(name.to_string()))
    }

    pub fn ends(&self) -> std::ops::Range<EndId> {
        0..self.names.len()
    }

    pub fn lines(&self) -> Vec<Line> {
        let n = self.end_count();
        (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .collect()
    }

    pub fn triples(&self) -> Vec<[EndId; 3]> {
        self.sides.keys().copied().collect()
    }

    pub fn line_name(&self, l: Line) -> String {
        format!("{}{}", self.names[l.0], self.names[l.1])
    }

    pub fn side(&self, a: EndId, b: EndId, c: EndId) -> &Rational {
        &self.sides[&sorted3(a, b, c)]
    }

    /// Coordinate on line `vo` of the vertex at `v` of triangle `{v, o, t}`.
    pub fn corner(&self, v: EndId, o: EndId, t: EndId) -> &Rational {
        &self.corners[&(v, o, t)]
    }

    /// The corner written `(x y z)` (vertex at `y`) read on the line `y`–`w`,
    /// where `w` is `x` or `z`.
    pub fn corner_on(&self, x: EndId, y: EndId, z: EndId, w: EndId) -> &Rational {
        debug_assert!(w == x || w == z);
        let t = if w == x { z } else { x };
        self.corner(y, w, t)
    }

    /// The corner `(x y z)` as a point on line `y`–`w`.
    pub fn corner_point(&self, x: EndId, y: EndId, z: EndId, w: EndId) -> PointRef {
        PointRef::new(y, w, self.corner_on(x, y, z, w).clone())
    }

    /// Coordinate on line `l` re-expressed so that it increases toward `toward`.
    pub fn along(&self, l: Line, toward: EndId, coord: &Rational) -> Rational {
        signed(sign_toward(l, toward), coord.clone())
    }

    /// Coordinate on line `l` at signed distance `t` from `from` toward `toward`.
    pub fn step(&self, l: Line, from: &Rational, toward: EndId, t: &Rational) -> Rational {
        from + signed(sign_toward(l, toward), t.clone())
    }

    /// Corners and side midpoints of every triangle on the line, sorted and
    /// deduplicated.
    pub fn special_coords(&self, l: Line) -> Vec<Rational> {
        let (a, b) = l;
        let mut out = BTreeSet::new();
        for c in self.ends() {
            if c == a || c == b {
                continue;
            }
            let ca = self.corner(a, b, c);
            let cb = self.corner(b, a, c);
            out.insert((ca + cb).half());
            out.insert(ca.clone());
            out.insert(cb.clone());
        }
        out.into_iter().collect()
    }

    pub fn to_json(&self) -> InstanceJson {
        let corners = self
            .sides
            .iter()
            .map(|(t, side)| {
                let mut on_line = BTreeMap::new();
                for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                    let (a, b, c) = (t[i], t[j], t[k]);
                    let mut m = BTreeMap::new();
                    m.insert(
                        format!("toward_{}", self.names[a]),
                        self.corner(a, b, c).clone(),
                    );
                    m.insert(
                        format!("toward_{}", self.names[b]),
                        self.corner(b, a, c).clone(),
                    );
                    on_line.insert(format!("{}{}", self.names[a], self.names[b]), m);
                }
                TriangleJson {
                    triple: t.map(|e| self.names[e].clone()),
                    side: side.clone(),
                    on_line,
                }
            })
            .collect();
        InstanceJson {
            ends: self.names.clone(),
            corners,
        }
    }

    pub fn from_json(j: &InstanceJson) -> Result<Self, TreeFoldError> {
        let mut d = Instance::draft(&j.ends)?;
        for t in &j.corners {
            let ids = t
                .triple
                .iter()
                .map(|n| d.inner.end_id(n))
                .collect::<Result<Vec<_>, _>>()?;
            if sorted3(ids[0], ids[1], ids[2])
                .windows(2)
                .any(|w| w[0] == w[1])
            {
                return Err(TreeFoldError::Malformed(format!(
                    "repeated end in triple {:?}",
                    t.triple
                )));
            }
            d.set_side(ids[0], ids[1], ids[2], t.side.clone())?;
            if t.on_line.len() != 3 {
                return Err(TreeFoldError::Malformed(format!(
                    "triple {:?} needs three lines",
                    t.triple
                )));
            }
            for (key, coords) in &t.on_line {
                let (i, k) = resolve_line_key(&t.triple, key)?;
                let third = 3 - i - k;
                for (x, y) in [(i, k), (k, i)] {
                    let field = format!("toward_{}", t.triple[x]);
                    let c = coords.get(&field).ok_or_else(|| {
                        TreeFoldError::Malformed(format!("line {key:?} lacks {field:?}"))
                    })?;
                    d.set_corner(ids[x], ids[y], ids[third], c.clone())?;
                }
                if coords.len() != 2 {
                    return Err(TreeFoldError::Malformed(format!(
                        "line {key:?} needs exactly two corners"
                    )));
                }
            }
        }
        d.finish()
    }
}

/// Finds which two ends of `triple` a concatenated line key names; the
/// result is ordered as the names appear in the key.
pub fn resolve_line_key(triple: &[String; 3], key: &str) -> Result<(usize, usize), TreeFoldError> {
    let mut matches: Vec<(usize, usize)> = Vec::new();
    for i in 0..3 {
        for k in 0..3 {
            if i != k
                && format!("{}{}", triple[i], triple[k]) == key
                && !matches.iter().any(|&(a, b)| a == k && b == i)
            {
                matches.push((i, k));
            }
        }
    }
    match matches.as_slice() {
        [one] => Ok(*one),
        [] => Err(TreeFoldError::Malformed(format!(
            "line key {key:?} not in triple {triple:?}"
        ))),
        _ => Err(TreeFoldError::Malformed(format!(
            "line key {key:?} is ambiguous"
        ))),
    }
}

impl InstanceDraft {
    pub fn end_id(&self, name: &str) -> Result<EndId, TreeFoldError> {
        self.inner.end_id(name)
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn set_side(
        &mut self,
        a: EndId,
        b: EndId,
        c: EndId,
        side: Rational,
    ) -> Result<(), TreeFoldError> {
        if side.is_negative() {
            return Err(TreeFoldError::Malformed(format!(
                "negative side length {side}"
            )));
        }
        if self.inner.sides.insert(sorted3(a, b, c), side).is_some() {
            return Err(TreeFoldError::Malformed("triangle given twice".into()));
        }
        Ok(())
    }

    pub fn set_corner(
        &mut self,
        v: EndId,
        o: EndId,
        t: EndId,
        coord: Rational,
    ) -> Result<(), TreeFoldError> {
        if self.inner.corners.insert((v, o, t), coord).is_some() {
            return Err(TreeFoldError::Malformed("corner given twice".into()));
        }
        Ok(())
    }

    pub fn finish(self) -> Result<Instance, TreeFoldError> {
        let inst = self.inner;
        let n = inst.end_count();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    if !inst.sides.contains_key(&[a, b, c]) {
                        return Err(TreeFoldError::Malformed(format!(
                            "missing triangle {}{}{}",
                            inst.names[a], inst.names[b], inst.names[c]
                        )));
                    }
                    for (v, o, t) in [
                        (a, b, c),
                        (b, a, c),
                        (a, c, b),
                        (c, a, b),
                        (b, c, a),
                        (c, b, a),
                    ] {
                        if !inst.corners.contains_key(&(v, o, t)) {
                            return Err(TreeFoldError::Malformed(format!(
                                "missing corner of {}{}{} on line {}{}",
                                inst.names[a],
                                inst.names[b],
                                inst.names[c],
                                inst.names[v],
                                inst.names[o]
                            )));
                        }
                    }
                }
            }
        }
        Ok(inst)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "instance on ends {}", self.names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleJson {
    pub triple: [String; 3],
    pub side: Rational,
    pub on_line: BTreeMap<String, BTreeMap<String, Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub ends: Vec<String>,
    pub corners: Vec<TriangleJson>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_and_key_parsing() {
        let inst = gen_tripod(Rational::from_integer(2)).unwrap();
        let j = inst.to_json();
        let text = serde_json::to_string(&j).unwrap();
        assert!(
            text.contains(r#""pq":{"toward_p":"-1/1","toward_q":"1/1"}"#),
            "{text}"
        );
        let back: InstanceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Instance::from_json(&back).unwrap(), inst);
    }

    #[test]
    fn ambiguous_line_keys_rejected() {
        let t = ["a".to_string(), "ab".to_string(), "ba".to_string()];
        assert_eq!(resolve_line_key(&t, "aab").unwrap(), (0, 1));
        assert_eq!(resolve_line_key(&t, "baab").unwrap(), (2, 1));
        let err = resolve_line_key(&t, "aba").unwrap_err();
        assert!(err.to_string().contains("ambiguous"));
        assert!(resolve_line_key(&t, "zz").is_err());
    }

    #[test]
    fn incomplete_tables_rejected() {
        let d = Instance::draft(&["p", "q", "r"]).unwrap();
        assert!(matches!(d.finish(), Err(TreeFoldError::Malformed(_))));
        assert!(Instance::draft(&["p"]).is_err());
        assert!(Instance::draft(&["p", "p"]).is_err());
    }
}
