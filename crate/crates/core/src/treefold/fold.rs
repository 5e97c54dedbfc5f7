//! Folding an instance into its quotient tree, and checks on the result.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{line, sign_toward, signed, EndId, Instance, Line, PointRef, TreeFoldError};
use crate::exact::{self, Rational};

/// Upper bound on special points created while closing under the gluings.
pub const SPECIAL_POINT_CAP: usize = 200_000;

/// An isometric identification `a0 + a_dir*t  <->  b0 + b_dir*t` for
/// `t` in `[0, len]` (`len = None` for a half-line).
#[derive(Debug, Clone)]
pub(crate) struct Gluing {
    pub a: Line,
    pub a0: Rational,
    pub a_dir: i8,
    pub b: Line,
    pub b0: Rational,
    pub b_dir: i8,
    pub len: Option<Rational>,
    pub elementary: bool,
}

impl Gluing {
    fn map(
        from0: &Rational,
        from_dir: i8,
        to0: &Rational,
        to_dir: i8,
        len: &Option<Rational>,
        x: &Rational,
    ) -> Option<Rational> {
        let t = signed(from_dir, x - from0);
        if t.is_negative() || len.as_ref().is_some_and(|l| t > *l) {
            return None;
        }
        Some(to0 + signed(to_dir, t))
    }

    pub fn forward(&self, x: &Rational) -> Option<Rational> {
        Self::map(&self.a0, self.a_dir, &self.b0, self.b_dir, &self.len, x)
    }

    pub fn backward(&self, x: &Rational) -> Option<Rational> {
        Self::map(&self.b0, self.b_dir, &self.a0, self.a_dir, &self.len, x)
    }

    /// Image of a point on either side, with the line it lands on.
    pub fn image(&self, on: Line, x: &Rational) -> Option<(Line, Rational)> {
        if on == self.a {
            self.forward(x).map(|y| (self.b, y))
        } else if on == self.b {
            self.backward(x).map(|y| (self.a, y))
        } else {
            None
        }
    }
}

/// Shared half-lines toward each end, and the elementary identifications of
/// the two half-sides at every corner of every triangle.
pub(crate) fn gluings(inst: &Instance) -> Vec<Gluing> {
    let mut out = Vec::new();
    for m in inst.ends() {
        let others: Vec<EndId> = inst.ends().filter(|&x| x != m).collect();
        for (i, &x) in others.iter().enumerate() {
            for &y in &others[i + 1..] {
                let (a, b) = (line(m, x), line(m, y));
                out.push(Gluing {
                    a,
                    a0: inst.corner(m, x, y).clone(),
                    a_dir: sign_toward(a, m),
                    b,
                    b0: inst.corner(m, y, x).clone(),
                    b_dir: sign_toward(b, m),
                    len: None,
                    elementary: false,
                });
            }
        }
    }
    for [p, q, r] in inst.triples() {
        let half = inst.side(p, q, r).half();
        for (v, o1, o2) in [(p, q, r), (q, p, r), (r, p, q)] {
            let (a, b) = (line(v, o1), line(v, o2));
            out.push(Gluing {
                a,
                a0: inst.corner(v, o1, o2).clone(),
                a_dir: sign_toward(a, o1),
                b,
                b0: inst.corner(v, o2, o1).clone(),
                b_dir: sign_toward(b, o2),
                len: Some(half.clone()),
                elementary: true,
            });
        }
    }
    out
}

/// Special points per line: corners and side midpoints, closed under all
/// gluings. Lines without triangles get the origin.
pub(crate) fn special_points(
    inst: &Instance,
    glue: &[Gluing],
) -> Result<BTreeMap<Line, BTreeSet<Rational>>, TreeFoldError> {
    let mut pts: BTreeMap<Line, BTreeSet<Rational>> = BTreeMap::new();
    let mut queue: VecDeque<(Line, Rational)> = VecDeque::new();
    for l in inst.lines() {
        let mut s: BTreeSet<Rational> = inst.special_coords(l).into_iter().collect();
        if s.is_empty() {
            s.insert(Rational::zero());
        }
        for x in &s {
            queue.push_back((l, x.clone()));
        }
        pts.insert(l, s);
    }
    let mut by_line: BTreeMap<Line, Vec<usize>> = BTreeMap::new();
    for (i, g) in glue.iter().enumerate() {
        by_line.entry(g.a).or_default().push(i);
        by_line.entry(g.b).or_default().push(i);
    }
    let mut total: usize = pts.values().map(BTreeSet::len).sum();
    while let Some((l, x)) = queue.pop_front() {
        for &gi in by_line.get(&l).map(Vec::as_slice).unwrap_or(&[]) {
            if let Some((l2, y)) = glue[gi].image(l, &x) {
                if pts.get_mut(&l2).expect("known line").insert(y.clone()) {
                    total += 1;
                    if total > SPECIAL_POINT_CAP {
                        return Err(TreeFoldError::FoldMismatch(format!(
                            "special points do not close up (more than {SPECIAL_POINT_CAP})"
                        )));
                    }
                    queue.push_back((l2, y));
                }
            }
        }
    }
    Ok(pts)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.0[hi] = lo;
        true
    }
}

pub type NodeId = usize;

/// The folded tree: nodes, weighted edges, one ray per end, and for every
/// line the nodes its chart passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTree {
    pub end_names: Vec<String>,
    pub node_labels: Vec<String>,
    pub edges: Vec<(NodeId, NodeId, Rational)>,
    pub end_attachment: Vec<NodeId>,
    pub charts: BTreeMap<Line, Vec<(Rational, NodeId)>>,
    /// A stored distance table that overrides the one implied by the edges.
    pub stored_distances: Option<Vec<Vec<Rational>>>,
}

/// A point of the quotient: a node or the image of a chart point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QPoint {
    Node(NodeId),
    Point(PointRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Position {
    Node(NodeId),
    /// Interior of the edge `u -- v` at distance `from_u` from `u`, `u < v`.
    Edge(NodeId, NodeId, Rational, Rational),
    /// On the ray toward an end, at distance `beyond` past its attachment node.
    Ray(EndId, NodeId, Rational),
}

pub fn fold_quotient(inst: &Instance) -> Result<QuotientTree, TreeFoldError> {
    let glue = gluings(inst);
    let pts = special_points(inst, &glue)?;

    let mut index: BTreeMap<(Line, Rational), usize> = BTreeMap::new();
    let mut points: Vec<(Line, Rational)> = Vec::new();
    for (l, s) in &pts {
        for x in s {
            index.insert((*l, x.clone()), points.len());
            points.push((*l, x.clone()));
        }
    }
    let mut seg_index: BTreeMap<(Line, Rational), usize> = BTreeMap::new();
    let mut segments: Vec<(usize, usize, Rational)> = Vec::new();
    for (l, s) in &pts {
        let v: Vec<&Rational> = s.iter().collect();
        for w in v.windows(2) {
            seg_index.insert((*l, w[0].clone()), segments.len());
            segments.push((
                index[&(*l, w[0].clone())],
                index[&(*l, w[1].clone())],
                w[1] - w[0],
            ));
        }
    }

    let mut uf = UnionFind::new(points.len());
    let mut suf = UnionFind::new(segments.len());
    for g in &glue {
        let sa: Vec<&Rational> = pts[&g.a].iter().collect();
        for (k, x) in sa.iter().enumerate() {
            let Some(y) = g.forward(x) else { continue };
            let j = *index.get(&(g.b, y.clone())).ok_or_else(|| {
                TreeFoldError::FoldMismatch("image of a special point is not special".into())
            })?;
            uf.union(index[&(g.a, (*x).clone())], j);
            // the segment from x to the next special point, if it stays in the domain
            if let Some(next) = sa.get(k + 1) {
                if let Some(y2) = g.forward(next) {
                    let (lo, hi) = if y < y2 { (&y, &y2) } else { (&y2, &y) };
                    let after_lo = pts[&g.b]
                        .range((
                            std::ops::Bound::Excluded(lo.clone()),
                            std::ops::Bound::Unbounded,
                        ))
                        .next();
                    if after_lo != Some(hi) {
                        return Err(TreeFoldError::FoldMismatch(format!(
                            "identified segments on {} and {} are subdivided differently",
                            inst.line_name(g.a),
                            inst.line_name(g.b)
                        )));
                    }
                    suf.union(
                        seg_index[&(g.a, (*x).clone())],
                        seg_index[&(g.b, lo.clone())],
                    );
                }
            }
        }
    }

    let mut node_of_root: BTreeMap<usize, NodeId> = BTreeMap::new();
    let mut node_labels = Vec::new();
    let mut node_of_point = vec![0; points.len()];
    for (i, (l, x)) in points.iter().enumerate() {
        let root = uf.find(i);
        let id = *node_of_root.entry(root).or_insert_with(|| {
            node_labels.push(format!("{}@{}", inst.line_name(*l), x));
            node_labels.len() - 1
        });
        node_of_point[i] = id;
    }
    let mut seen_segments: BTreeSet<usize> = BTreeSet::new();
    let mut edges = Vec::new();
    for (k, (a, b, len)) in segments.iter().enumerate() {
        if !seen_segments.insert(suf.find(k)) {
            continue;
        }
        let (u, v) = (node_of_point[*a], node_of_point[*b]);
        if u == v {
            return Err(TreeFoldError::FoldMismatch(
                "a segment folds onto a loop".into(),
            ));
        }
        edges.push((u.min(v), u.max(v), len.clone()));
    }
    let n = node_labels.len();
    let mut conn = UnionFind::new(n);
    let mut merged = 0;
    for (u, v, _) in &edges {
        if conn.union(*u, *v) {
            merged += 1;
        }
    }
    if merged != edges.len() || merged + 1 != n {
        return Err(TreeFoldError::FoldMismatch(format!(
            "quotient is not a tree: {n} nodes, {} edges, {} components",
            edges.len(),
            n - merged
        )));
    }

    let mut charts = BTreeMap::new();
    for (l, s) in &pts {
        let chart: Vec<(Rational, NodeId)> = s
            .iter()
            .map(|x| (x.clone(), node_of_point[index[&(*l, x.clone())]]))
            .collect();
        charts.insert(*l, chart);
    }
    let mut end_attachment = Vec::with_capacity(inst.end_count());
    for e in inst.ends() {
        let mut attach: Option<NodeId> = None;
        for x in inst.ends().filter(|&x| x != e) {
            let chart: &Vec<(Rational, NodeId)> = &charts[&line(e, x)];
            let outer = if sign_toward(line(e, x), e) > 0 {
                chart.last()
            } else {
                chart.first()
            };
            let node = outer.expect("nonempty chart").1;
            match attach {
                None => attach = Some(node),
                Some(a) if a != node => {
                    return Err(TreeFoldError::FoldMismatch(format!(
                        "rays toward {} leave from different nodes",
                        inst.name(e)
                    )))
                }
                _ => {}
            }
        }
        end_attachment.push(attach.expect("at least two ends"));
    }
    Ok(QuotientTree {
        end_names: inst.names().to_vec(),
        node_labels,
        edges,
        end_attachment,
        charts,
        stored_distances: None,
    })
}

impl QuotientTree {
    pub fn node_count(&self) -> usize {
        self.node_labels.len()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        let edges = self
            .edges
            .iter()
            .filter(|(a, b, _)| *a == v || *b == v)
            .count();
        edges + self.end_attachment.iter().filter(|&&a| a == v).count()
    }

    /// Path distances along the edges.
    pub fn edge_distances(&self) -> Vec<Vec<Rational>> {
        let n = self.node_count();
        let mut adj: Vec<Vec<(NodeId, &Rational)>> = vec![Vec::new(); n];
        for (a, b, l) in &self.edges {
            adj[*a].push((*b, l));
            adj[*b].push((*a, l));
        }
        (0..n)
            .map(|s| {
                let mut d: Vec<Option<Rational>> = vec![None; n];
                d[s] = Some(Rational::zero());
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    let du = d[u].clone().expect("visited");
                    for &(v, l) in &adj[u] {
                        if d[v].is_none() {
                            d[v] = Some(&du + l);
                            stack.push(v);
                        }
                    }
                }
                d.into_iter().map(|x| x.expect("connected")).collect()
            })
            .collect()
    }

    /// The distance table used by every check: the stored one if present.
    pub fn distance_table(&self) -> Vec<Vec<Rational>> {
        self.stored_distances
            .clone()
            .unwrap_or_else(|| self.edge_distances())
    }

    /// A copy whose stored distance table has `d(u,v)` (and `d(v,u)`)
    /// shifted by `delta`, leaving the edges untouched.
    pub fn with_perturbed_distance(&self, u: NodeId, v: NodeId, delta: &Rational) -> QuotientTree {
        let mut t = self.clone();
        let mut d = self.distance_table();
        d[u][v] = &d[u][v] + delta;
        d[v][u] = d[u][v].clone();
        t.stored_distances = Some(d);
        t
    }

    fn resolve(&self, x: &QPoint) -> Result<Position, TreeFoldError> {
        let p = match x {
            QPoint::Node(n) if *n < self.node_count() => return Ok(Position::Node(*n)),
            QPoint::Node(n) => return Err(TreeFoldError::UnknownPoint(format!("node {n}"))),
            QPoint::Point(p) => p,
        };
        let chart = self
            .charts
            .get(&p.line)
            .ok_or_else(|| TreeFoldError::UnknownPoint(format!("line {:?}", p.line)))?;
        let k = chart.partition_point(|(c, _)| *c < p.coord);
        if let Some((c, n)) = chart.get(k) {
            if *c == p.coord {
                return Ok(Position::Node(*n));
            }
        }
        if k == 0 {
            let (c, n) = &chart[0];
            return Ok(Position::Ray(p.line.0, *n, c - &p.coord));
        }
        if k == chart.len() {
            let (c, n) = &chart[k - 1];
            return Ok(Position::Ray(p.line.1, *n, &p.coord - c));
        }
        let ((c0, n0), (c1, n1)) = (&chart[k - 1], &chart[k]);
        let len = c1 - c0;
        let from0 = &p.coord - c0;
        Ok(if n0 < n1 {
            Position::Edge(*n0, *n1, from0, len)
        } else {
            Position::Edge(*n1, *n0, &len - &from0, len)
        })
    }
}

fn anchors(p: &Position) -> Vec<(NodeId, Rational)> {
    match p {
        Position::Node(n) => vec![(*n, Rational::zero())],
        Position::Edge(u, v, o, len) => vec![(*u, o.clone()), (*v, len - o)],
        Position::Ray(_, n, d) => vec![(*n, d.clone())],
    }
}

/// Length of the tree path between two points of the quotient.
pub fn quotient_distance(
    t: &QuotientTree,
    x: &QPoint,
    y: &QPoint,
) -> Result<Rational, TreeFoldError> {
    let (px, py) = (t.resolve(x)?, t.resolve(y)?);
    match (&px, &py) {
        (Position::Edge(u1, v1, o1, _), Position::Edge(u2, v2, o2, _)) if u1 == u2 && v1 == v2 => {
            return Ok((o1 - o2).abs())
        }
        (Position::Ray(e1, _, d1), Position::Ray(e2, _, d2)) if e1 == e2 => {
            return Ok((d1 - d2).abs())
        }
        _ => {}
    }
    let d = t.distance_table();
    let mut best: Option<Rational> = None;
    for (a, da) in anchors(&px) {
        for (b, db) in anchors(&py) {
            let v = &da + &d[a][b] + db;
            best = Some(match best {
                Some(m) => m.min(v),
                None => v,
            });
        }
    }
    Ok(best.expect("anchors are nonempty"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn scaled_table(d: &[Vec<Rational>]) -> Option<Vec<Vec<i128>>> {
    let den = exact::common_denominator(d.iter().flatten());
    d.iter()
        .map(|row| {
            row.iter()
                .map(|x| (x.numer() * (&den / x.denom())).to_i128())
                .collect::<Option<Vec<i128>>>()
        })
        .collect()
}

/// The first node quadruple violating the four-point condition, with its
/// three pair sums.
fn four_point_witness(d: &[Vec<Rational>]) -> (usize, Option<String>) {
    let n = d.len();
    let mut checked = 0;
    if let Some(z) = scaled_table(d) {
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    for e in (c + 1)..n {
                        checked += 1;
                        let mut s = [z[a][b] + z[c][e], z[a][c] + z[b][e], z[a][e] + z[b][c]];
                        s.sort_unstable();
                        if s[1] != s[2] {
                            return (checked, Some(witness4(d, [a, b, c, e])));
                        }
                    }
                }
            }
        }
    } else {
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    for e in (c + 1)..n {
                        checked += 1;
                        let mut s = [
                            &d[a][b] + &d[c][e],
                            &d[a][c] + &d[b][e],
                            &d[a][e] + &d[b][c],
                        ];
                        s.sort();
                        if s[1] != s[2] {
                            return (checked, Some(witness4(d, [a, b, c, e])));
                        }
                    }
                }
            }
        }
    }
    (checked, None)
}

fn witness4(d: &[Vec<Rational>], [a, b, c, e]: [usize; 4]) -> String {
    format!(
        "nodes ({a},{b},{c},{e}): d{a}{b}+d{c}{e}={}, d{a}{c}+d{b}{e}={}, d{a}{e}+d{b}{c}={}",
        &d[a][b] + &d[c][e],
        &d[a][c] + &d[b][e],
        &d[a][e] + &d[b][c]
    )
}

pub fn verify_tree_axioms(inst: &Instance, t: &QuotientTree) -> AxiomReport {
    let d = t.distance_table();
    let n = t.node_count();
    let mut checks = Vec::new();
    let well_formed = d.len() == n
        && d.iter().all(|r| r.len() == n)
        && t.charts.values().flatten().all(|(_, v)| *v < n);
    if !well_formed {
        checks.push(AxiomCheck {
            name: "TREE".into(),
            passed: false,
            checked: 0,
            witness: Some("distance table or charts do not match the node set".into()),
        });
        return AxiomReport { checks };
    }

    // chart isometry
    let mut checked = 0;
    let mut witness = None;
    'a1: for (l, chart) in &t.charts {
        for i in 0..chart.len() {
            for j in (i + 1)..chart.len() {
                checked += 1;
                let ((ci, ni), (cj, nj)) = (&chart[i], &chart[j]);
                if d[*ni][*nj] != cj - ci {
                    witness = Some(format!(
                        "line {}: coordinates {ci} and {cj} are {} apart in the quotient",
                        inst.line_name(*l),
                        d[*ni][*nj]
                    ));
                    break 'a1;
                }
            }
        }
    }
    checks.push(AxiomCheck {
        name: "A1".into(),
        passed: witness.is_none(),
        checked,
        witness,
    });

    // intersections of chart images are intervals
    let mut checked = 0;
    let mut witness = None;
    let lines: Vec<&Line> = t.charts.keys().collect();
    let positions: Vec<BTreeMap<NodeId, usize>> = lines
        .iter()
        .map(|l| {
            t.charts[l]
                .iter()
                .enumerate()
                .map(|(i, (_, v))| (*v, i))
                .collect()
        })
        .collect();
    'a2: for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            checked += 1;
            let common: Vec<NodeId> = positions[i]
                .keys()
                .filter(|v| positions[j].contains_key(v))
                .copied()
                .collect();
            for pos in [&positions[i], &positions[j]] {
                let mut idx: Vec<usize> = common.iter().map(|v| pos[v]).collect();
                idx.sort_unstable();
                if idx.windows(2).any(|w| w[1] != w[0] + 1) {
                    witness = Some(format!(
                        "images of {} and {} meet in a disconnected set",
                        inst.line_name(*lines[i]),
                        inst.line_name(*lines[j])
                    ));
                    break 'a2;
                }
            }
        }
    }
    checks.push(AxiomCheck {
        name: "A2".into(),
        passed: witness.is_none(),
        checked,
        witness,
    });

    // any two nodes on a common chart image
    let mut checked = 0;
    let mut witness = None;
    let on_chart: Vec<Vec<bool>> = positions
        .iter()
        .map(|pos| (0..n).map(|v| pos.contains_key(&v)).collect())
        .collect();
    'a3: for u in 0..n {
        for v in (u + 1)..n {
            checked += 1;
            if !on_chart.iter().any(|c| c[u] && c[v]) {
                witness = Some(format!(
                    "nodes {} and {} share no chart",
                    t.node_labels[u], t.node_labels[v]
                ));
                break 'a3;
            }
        }
    }
    checks.push(AxiomCheck {
        name: "A3".into(),
        passed: witness.is_none(),
        checked,
        witness,
    });

    let (checked, witness) = four_point_witness(&d);
    checks.push(AxiomCheck {
        name: "TREE".into(),
        passed: witness.is_none(),
        checked,
        witness,
    });

    // ends biject with the ends of the instance, and each chart runs between its two rays
    let mut witness = None;
    let mut checked = 0;
    if t.end_names != inst.names() || t.end_attachment.len() != inst.end_count() {
        witness = Some("end sets differ".to_string());
    } else {
        for l in inst.lines() {
            checked += 1;
            match t.charts.get(&l) {
                Some(chart)
                    if chart[0].1 == t.end_attachment[l.0]
                        && chart[chart.len() - 1].1 == t.end_attachment[l.1] => {}
                _ => {
                    witness = Some(format!(
                        "line {} does not run between its ends",
                        inst.line_name(l)
                    ));
                    break;
                }
            }
        }
    }
    checks.push(AxiomCheck {
        name: "ENDS".into(),
        passed: witness.is_none(),
        checked,
        witness,
    });
    AxiomReport { checks }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QNodeJson {
    pub id: NodeId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEdgeJson {
    pub a: NodeId,
    pub b: NodeId,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QChartJson {
    pub line: [String; 2],
    pub points: Vec<(Rational, NodeId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientTreeJson {
    pub ends: Vec<String>,
    pub nodes: Vec<QNodeJson>,
    pub edges: Vec<QEdgeJson>,
    pub end_attachments: BTreeMap<String, NodeId>,
    pub charts: Vec<QChartJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<Rational>>>,
}

impl QuotientTree {
    pub fn to_json(&self) -> QuotientTreeJson {
        QuotientTreeJson {
            ends: self.end_names.clone(),
            nodes: self
                .node_labels
                .iter()
                .enumerate()
                .map(|(id, label)| QNodeJson {
                    id,
                    label: label.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, b, l)| QEdgeJson {
                    a: *a,
                    b: *b,
                    length: l.clone(),
                })
                .collect(),
            end_attachments: self
                .end_names
                .iter()
                .zip(&self.end_attachment)
                .map(|(n, v)| (n.clone(), *v))
                .collect(),
            charts: self
                .charts
                .iter()
                .map(|(l, pts)| QChartJson {
                    line: [self.end_names[l.0].clone(), self.end_names[l.1].clone()],
                    points: pts.clone(),
                })
                .collect(),
            distances: self.stored_distances.clone(),
        }
    }

    pub fn from_json(j: &QuotientTreeJson) -> Result<Self, TreeFoldError> {
        let mut names = j.ends.clone();
        names.sort();
        if names != j.ends {
            return Err(TreeFoldError::Malformed(
                "tree ends must be listed in sorted order".into(),
            ));
        }
        let id = |s: &str| {
            j.ends
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| TreeFoldError::UnknownEnd(s.to_string()))
        };
        if j.nodes.iter().enumerate().any(|(i, n)| n.id != i) {
            return Err(TreeFoldError::Malformed(
                "node ids must be 0..n in order".into(),
            ));
        }
        let n = j.nodes.len();
        if j.edges
            .iter()
            .any(|e| e.a >= n || e.b >= n || !e.length.is_positive())
        {
            return Err(TreeFoldError::Malformed(
                "edge with unknown node or nonpositive length".into(),
            ));
        }
        let mut end_attachment = Vec::new();
        for e in &j.ends {
            let v = *j
                .end_attachments
                .get(e)
                .ok_or_else(|| TreeFoldError::Malformed(format!("end {e:?} has no attachment")))?;
            if v >= n {
                return Err(TreeFoldError::Malformed(format!(
                    "end {e:?} attaches to unknown node"
                )));
            }
            end_attachment.push(v);
        }
        let mut charts = BTreeMap::new();
        for c in &j.charts {
            let l = line(id(&c.line[0])?, id(&c.line[1])?);
            if l.0 == l.1 || c.points.is_empty() || c.points.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(TreeFoldError::Malformed(
                    "chart points must be nonempty and increasing".into(),
                ));
            }
            charts.insert(l, c.points.clone());
        }
        Ok(QuotientTree {
            end_names: j.ends.clone(),
            node_labels: j.nodes.iter().map(|x| x.label.clone()).collect(),
            edges: j
                .edges
                .iter()
                .map(|e| (e.a.min(e.b), e.a.max(e.b), e.length.clone()))
                .collect(),
            end_attachment,
            charts,
            stored_distances: j.distances.clone(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph quotient {\n");
        for (i, l) in self.node_labels.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{i}: {l}\"];");
        }
        for (a, b, l) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b} [label=\"{l}\"];");
        }
        for (e, v) in self.end_names.iter().zip(&self.end_attachment) {
            let _ = writeln!(s, "  end_{e} [shape=plaintext, label=\"{e}\"];");
            let _ = writeln!(s, "  n{v} -- end_{e} [style=dashed];");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::super::gen::*;
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn single_triangle_is_a_star() {
        let inst = gen_tripod(r(2, 1)).unwrap();
        let t = fold_quotient(&inst).unwrap();
        assert_eq!(t.node_count(), 4);
        assert_eq!(t.edges.len(), 3);
        let centre = (0..4)
            .find(|&v| t.degree(v) == 3 && !t.end_attachment.contains(&v))
            .unwrap();
        for e in 0..3 {
            let corner = t.end_attachment[e];
            assert_eq!(
                quotient_distance(&t, &QPoint::Node(corner), &QPoint::Node(centre)).unwrap(),
                r(1, 1)
            );
        }
        let (a, b) = (t.end_attachment[0], t.end_attachment[1]);
        assert_eq!(
            quotient_distance(&t, &QPoint::Node(a), &QPoint::Node(b)).unwrap(),
            r(2, 1)
        );
        assert!(verify_tree_axioms(&inst, &t).all_passed());
    }

    #[test]
    fn trivial_tripod_and_single_line() {
        let t = fold_quotient(&gen_tripod(r(0, 1)).unwrap()).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.degree(0), 3);
        let line = Instance::draft(&["a", "b"]).unwrap().finish().unwrap();
        let t = fold_quotient(&line).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.end_attachment, vec![0, 0]);
        assert!(verify_tree_axioms(&line, &t).all_passed());
    }

    #[test]
    fn second_configuration_distances() {
        let inst = gen_config2(r(1, 1), r(3, 1)).unwrap();
        let t = fold_quotient(&inst).unwrap();
        let (p, q, rr) = (0, 1, 2);
        let a = QPoint::Point(inst.corner_point(q, p, rr, q));
        let b = QPoint::Point(inst.corner_point(p, q, rr, p));
        assert_eq!(quotient_distance(&t, &a, &b).unwrap(), r(3, 1));
        assert!(verify_tree_axioms(&inst, &t).all_passed());
    }

    #[test]
    fn points_on_edges_and_rays() {
        let inst = gen_tripod(r(2, 1)).unwrap();
        let t = fold_quotient(&inst).unwrap();
        let x = QPoint::Point(PointRef::new(0, 1, r(-5, 1)));
        let y = QPoint::Point(PointRef::new(0, 1, r(1, 2)));
        assert_eq!(quotient_distance(&t, &x, &y).unwrap(), r(11, 2));
        let z = QPoint::Point(PointRef::new(0, 2, r(1, 2)));
        // both half a unit from the centre, on different legs
        assert_eq!(quotient_distance(&t, &y, &z).unwrap(), r(1, 1));
        assert!(quotient_distance(&t, &QPoint::Node(99), &y).is_err());
    }

    #[test]
    fn perturbed_table_fails_four_point() {
        let inst = gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap();
        let t = fold_quotient(&inst).unwrap();
        assert!(verify_tree_axioms(&inst, &t).all_passed());
        let total: Rational = t.edges.iter().map(|e| e.2.clone()).sum();
        let bad = t.with_perturbed_distance(0, 1, &(total + r(1, 3)));
        let rep = verify_tree_axioms(&inst, &bad);
        let tree = rep.check("TREE").unwrap();
        assert!(!tree.passed);
        assert!(tree.witness.as_ref().unwrap().contains("nodes"));
    }

    #[test]
    fn json_roundtrip() {
        let inst = gen_config1(r(-3, 1), r(2, 1), r(0, 1), r(3, 1)).unwrap();
        let t = fold_quotient(&inst).unwrap();
        let j = serde_json::to_string(&t.to_json()).unwrap();
        let back: QuotientTreeJson = serde_json::from_str(&j).unwrap();
        assert_eq!(QuotientTree::from_json(&back).unwrap(), t);
        assert!(t.to_dot().starts_with("graph quotient {"));
    }
}
