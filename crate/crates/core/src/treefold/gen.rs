//! Instance generators: a tree model for the templates, end attachment, and
//! seeded random composition.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{sign_toward, signed, Instance, TreeFoldError};
use crate::exact::Rational;

/// A tree metric on the attachment points of the ends, a side length per
/// triple and a chart offset per line.
///
/// The triangle of `{x,y,z}` is centred at the median of the three
/// attachment points; its corner at `x` lies `side/2` from the median toward
/// `x` on the line `xy` (and on `xz`). On the line between `x` and `y`, with
/// `x` the lexicographically smaller name, the chart coordinate of a point at
/// distance `t` from the attachment point of `x` toward `y` is `t + anchor`.
#[derive(Debug, Clone)]
pub struct TreeModel {
    names: Vec<String>,
    dist: Vec<Vec<Rational>>,
    sides: BTreeMap<[usize; 3], Rational>,
    anchors: BTreeMap<(usize, usize), Rational>,
}

impl TreeModel {
    /// `dist` must be a tree metric (four-point condition) on the attachment points.
    pub fn new(names: &[&str], dist: Vec<Vec<Rational>>) -> Self {
        assert_eq!(names.len(), dist.len());
        TreeModel {
            names: names.iter().map(|s| s.to_string()).collect(),
            dist,
            sides: BTreeMap::new(),
            anchors: BTreeMap::new(),
        }
    }

    /// Ends attached at positions along a single path; `pos[i]` is the
    /// position of end `i` on that path.
    pub fn on_path(names: &[&str], pos: &[Rational]) -> Self {
        let dist = pos
            .iter()
            .map(|a| pos.iter().map(|b| (a - b).abs()).collect())
            .collect();
        Self::new(names, dist)
    }

    fn idx(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|n| n == name)
            .expect("known end")
    }

    pub fn set_side(&mut self, triple: [&str; 3], side: Rational) -> &mut Self {
        let mut t = triple.map(|n| self.idx(n));
        t.sort_unstable();
        self.sides.insert(t, side);
        self
    }

    /// Sets the chart coordinate of the attachment point of the
    /// lexicographically smaller end on the line between `a` and `b`.
    pub fn set_anchor(&mut self, a: &str, b: &str, value: Rational) -> &mut Self {
        let (i, j) = (self.idx(a), self.idx(b));
        self.anchors.insert((i.min(j), i.max(j)), value);
        self
    }

    fn side(&self, a: usize, b: usize, c: usize) -> Rational {
        let mut t = [a, b, c];
        t.sort_unstable();
        self.sides.get(&t).cloned().unwrap_or_else(Rational::zero)
    }

    /// Chart coordinate on line `x`–`y` of the vertex at `x` of triangle `{x,y,z}`.
    fn corner(&self, x: usize, y: usize, z: usize) -> Rational {
        let d = &self.dist;
        let to_median = (&d[x][y] + &d[x][z] - &d[y][z]).half();
        let from_x = to_median - self.side(x, y, z).half();
        let lo_is_x = self.names[x] < self.names[y];
        let (lo, hi) = if lo_is_x { (x, y) } else { (y, x) };
        let anchor = self
            .anchors
            .get(&(lo.min(hi), lo.max(hi)))
            .cloned()
            .unwrap_or_else(Rational::zero);
        let t = if lo_is_x { from_x } else { &d[x][y] - from_x };
        t + anchor
    }

    pub fn to_instance(&self) -> Result<Instance, TreeFoldError> {
        let mut draft = Instance::draft(&self.names)?;
        let n = self.names.len();
        let id = |i: usize| draft.end_id(&self.names[i]).expect("same names");
        let ids: Vec<usize> = (0..n).map(id).collect();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    draft.set_side(ids[a], ids[b], ids[c], self.side(a, b, c))?;
                    for (x, y, z) in [
                        (a, b, c),
                        (b, a, c),
                        (a, c, b),
                        (c, a, b),
                        (b, c, a),
                        (c, b, a),
                    ] {
                        draft.set_corner(ids[x], ids[y], ids[z], self.corner(x, y, z))?;
                    }
                }
            }
        }
        draft.finish()
    }
}

fn bad(msg: impl Into<String>) -> TreeFoldError {
    TreeFoldError::BadTemplateParams(msg.into())
}

/// Three ends meeting at one point, with a triangle of side `side`.
pub fn gen_tripod(side: Rational) -> Result<Instance, TreeFoldError> {
    if side.is_negative() {
        return Err(bad("side length must be nonnegative"));
    }
    let mut m = TreeModel::on_path(
        &["p", "q", "r"],
        &[Rational::zero(), Rational::zero(), Rational::zero()],
    );
    m.set_side(["p", "q", "r"], side);
    m.to_instance()
}

fn config1_named(
    names: [&str; 4],
    a1: &Rational,
    side_s: &Rational,
    a2: &Rational,
    side_r: &Rational,
) -> Result<Instance, TreeFoldError> {
    if side_s.is_negative() || side_r.is_negative() {
        return Err(bad("side lengths must be nonnegative"));
    }
    if a1 + side_s >= *a2 {
        return Err(bad(
            "the two triangles on pq must be disjoint with the s-triangle first",
        ));
    }
    let [p, q, r, s] = names;
    let centre_s = a1 + side_s.half();
    let centre_r = a2 + side_r.half();
    let mut m = TreeModel::on_path(
        &[p, q, r, s],
        &[
            centre_s.clone(),
            centre_r.clone(),
            centre_r.clone(),
            centre_s.clone(),
        ],
    );
    m.set_side([p, q, s], side_s.clone())
        .set_side([p, r, s], side_s.clone())
        .set_side([p, q, r], side_r.clone())
        .set_side([q, r, s], side_r.clone());
    anchor_pq(&mut m, p, q, &centre_s, &centre_r);
    m.to_instance()
}

/// On line `pq`, places the attachment point of `p` at `at_p` and that of `q`
/// at `at_q`, whatever the lexicographic order of the names.
fn anchor_pq(m: &mut TreeModel, p: &str, q: &str, at_p: &Rational, at_q: &Rational) {
    if p < q {
        m.set_anchor(p, q, at_p.clone());
    } else {
        // coordinates increase toward p, so the chart is reflected
        m.set_anchor(p, q, -at_q.clone());
    }
}

/// First configuration: on `pq` the triangle `pqs` occupies `[a1, a1+side_s]`
/// and `pqr` occupies `[a2, a2+side_r]`, strictly disjoint.
pub fn gen_config1(
    a1: Rational,
    side_s: Rational,
    a2: Rational,
    side_r: Rational,
) -> Result<Instance, TreeFoldError> {
    config1_named(["p", "q", "r", "s"], &a1, &side_s, &a2, &side_r)
}

fn config2_named(
    names: [&str; 4],
    u: &Rational,
    big: &Rational,
) -> Result<Instance, TreeFoldError> {
    if !u.is_positive() || u >= big {
        return Err(bad("need 0 < u < big side"));
    }
    let [p, q, r, s] = names;
    let zero = Rational::zero();
    let centre_r = big.half();
    let mut m = TreeModel::on_path(
        &[p, q, r, s],
        &[
            zero.clone(),
            centre_r.clone(),
            centre_r.clone(),
            zero.clone(),
        ],
    );
    let two_u = u + u;
    m.set_side([p, q, s], two_u.clone())
        .set_side([p, r, s], two_u)
        .set_side([p, q, r], big.clone())
        .set_side([q, r, s], big.clone());
    anchor_pq(&mut m, p, q, &zero, &centre_r);
    m.to_instance()
}

/// Second configuration: corners on `pq` at `-u, 0, u, big`.
pub fn gen_config2(u: Rational, big: Rational) -> Result<Instance, TreeFoldError> {
    config2_named(["p", "q", "r", "s"], &u, &big)
}

fn config3_named(
    names: [&str; 4],
    big: &Rational,
    side_s: &Rational,
    a: &Rational,
) -> Result<Instance, TreeFoldError> {
    if !big.is_positive() || side_s.is_negative() || a.is_negative() || a + side_s > *big {
        return Err(bad(
            "need big > 0, side_s >= 0, a >= 0 and a + side_s <= big",
        ));
    }
    let [p, q, r, s] = names;
    let centre_s = a + side_s.half();
    let centre_r = big.half();
    let e = &centre_s - &centre_r;
    let shrunk = big - (&e + &e).abs();
    let mut m;
    if !e.is_negative() {
        // p and r branch at the centre of pqr, q and s further toward q
        m = TreeModel::on_path(
            &[p, q, r, s],
            &[
                centre_r.clone(),
                centre_s.clone(),
                centre_r.clone(),
                centre_s.clone(),
            ],
        );
        m.set_side([p, q, r], big.clone())
            .set_side([p, r, s], big.clone())
            .set_side([p, q, s], side_s.clone())
            .set_side([q, r, s], shrunk);
        anchor_pq(&mut m, p, q, &centre_r, &centre_s);
    } else {
        m = TreeModel::on_path(
            &[p, q, r, s],
            &[
                centre_s.clone(),
                centre_r.clone(),
                centre_r.clone(),
                centre_s.clone(),
            ],
        );
        m.set_side([p, q, r], big.clone())
            .set_side([q, r, s], big.clone())
            .set_side([p, q, s], side_s.clone())
            .set_side([p, r, s], shrunk);
        anchor_pq(&mut m, p, q, &centre_s, &centre_r);
    }
    m.to_instance()
}

/// Third configuration: on `pq` the triangle `pqr` occupies `[0, big]` and
/// `pqs` occupies `[a, a+side_s]` inside it.
pub fn gen_config3(
    big: Rational,
    side_s: Rational,
    a: Rational,
) -> Result<Instance, TreeFoldError> {
    config3_named(["p", "q", "r", "s"], &big, &side_s, &a)
}

/// Adds a new end `name` branching off the ray toward `p`, at distance
/// `margin` beyond the outermost corner toward `p`. Triangles `{name,p,x}`
/// are trivial at the branch point; `{name,x,y}` copies `{p,x,y}`.
pub fn gen_attach_end(
    inst: &Instance,
    p: &str,
    margin: &Rational,
    name: &str,
) -> Result<Instance, TreeFoldError> {
    if !margin.is_positive() {
        return Err(bad("margin must be positive"));
    }
    let pid = inst.end_id(p)?;
    if inst.end_id(name).is_ok() {
        return Err(bad(format!("end {name:?} already exists")));
    }
    let others: Vec<usize> = inst.ends().filter(|&x| x != pid).collect();
    let x0 = others[0];
    // Busemann offsets toward p relative to the line p-x0
    let offset = |x: usize| -> Rational {
        if x == x0 {
            return Rational::zero();
        }
        let on_ref = inst.along(super::line(pid, x0), pid, inst.corner(pid, x0, x));
        let on_x = inst.along(super::line(pid, x), pid, inst.corner(pid, x, x0));
        on_ref - on_x
    };
    let mut outermost: Option<Rational> = None;
    for &x in &others {
        let l = super::line(pid, x);
        let o = offset(x);
        let coords = inst.special_coords(l);
        let local = coords
            .iter()
            .map(|c| inst.along(l, pid, c))
            .max()
            .unwrap_or_else(Rational::zero);
        let v = local + o;
        outermost = Some(match outermost {
            Some(m) => m.max(v),
            None => v,
        });
    }
    let cut_ref = outermost.expect("at least one other end") + margin;
    // chart coordinate of the branch point on line p-x
    let cut_on = |x: usize| -> Rational {
        let l = super::line(pid, x);
        signed(sign_toward(l, pid), &cut_ref - offset(x))
    };

    let mut names: Vec<String> = inst.names().to_vec();
    names.push(name.to_string());
    let mut draft = Instance::draft(&names)?;
    let nid = |e: usize| draft.end_id(inst.name(e)).expect("copied name");
    let map: Vec<usize> = inst.ends().map(nid).collect();
    let sid = draft.end_id(name)?;
    // moves a coordinate on line p-x to line s-x, keeping the distance toward x
    let to_sx = |x: usize, c: &Rational| -> Rational {
        let along_x = inst.along(super::line(pid, x), x, c);
        signed(sign_toward(super::line(sid, map[x]), map[x]), along_x)
    };

    for t in inst.triples() {
        let [a, b, c] = t;
        draft.set_side(map[a], map[b], map[c], inst.side(a, b, c).clone())?;
        for (v, o, w) in [
            (a, b, c),
            (b, a, c),
            (a, c, b),
            (c, a, b),
            (b, c, a),
            (c, b, a),
        ] {
            draft.set_corner(map[v], map[o], map[w], inst.corner(v, o, w).clone())?;
        }
    }
    for &x in &others {
        let (s, pp, xx) = (sid, map[pid], map[x]);
        let cut = cut_on(x);
        let cut_sx = to_sx(x, &cut);
        draft.set_side(s, pp, xx, Rational::zero())?;
        draft.set_corner(s, pp, xx, Rational::zero())?;
        draft.set_corner(pp, s, xx, Rational::zero())?;
        draft.set_corner(s, xx, pp, cut_sx.clone())?;
        draft.set_corner(xx, s, pp, cut_sx)?;
        draft.set_corner(pp, xx, s, cut.clone())?;
        draft.set_corner(xx, pp, s, cut)?;
    }
    for (i, &x) in others.iter().enumerate() {
        for &y in &others[i + 1..] {
            let (s, xx, yy) = (sid, map[x], map[y]);
            draft.set_side(s, xx, yy, inst.side(pid, x, y).clone())?;
            draft.set_corner(s, xx, yy, to_sx(x, inst.corner(pid, x, y)))?;
            draft.set_corner(s, yy, xx, to_sx(y, inst.corner(pid, y, x)))?;
            draft.set_corner(xx, s, yy, to_sx(x, inst.corner(x, pid, y)))?;
            draft.set_corner(yy, s, xx, to_sx(y, inst.corner(y, pid, x)))?;
            draft.set_corner(xx, yy, s, inst.corner(x, y, pid).clone())?;
            draft.set_corner(yy, xx, s, inst.corner(y, x, pid).clone())?;
        }
    }
    draft.finish()
}

/// The cyclic pattern on four ends: every corner pattern is equilateral, but
/// `(rps)`, `(qrs)` and `(pqs)` each sit strictly inside a side of `pqr` in
/// rotating order.
pub fn cyclic_impossible_instance() -> Instance {
    let mut d = Instance::draft(&["p", "q", "r", "s"]).expect("valid names");
    let (p, q, r, s) = (0, 1, 2, 3);
    let n = Rational::from_integer;
    d.set_side(p, q, r, n(4)).unwrap();
    d.set_side(p, q, s, n(3)).unwrap();
    d.set_side(p, r, s, n(3)).unwrap();
    d.set_side(q, r, s, n(3)).unwrap();
    let table = [
        // line pq
        ((p, q, r), 0),
        ((q, p, r), 4),
        ((q, p, s), 3),
        ((p, q, s), 0),
        // line pr
        ((p, r, q), 0),
        ((r, p, q), 4),
        ((p, r, s), 1),
        ((r, p, s), 4),
        // line qr
        ((q, r, p), 0),
        ((r, q, p), 4),
        ((r, q, s), 3),
        ((q, r, s), 0),
        // line ps
        ((p, s, q), 0),
        ((p, s, r), 1),
        ((s, p, q), 3),
        ((s, p, r), 4),
        // line qs
        ((q, s, r), 0),
        ((q, s, p), 1),
        ((s, q, r), 3),
        ((s, q, p), 4),
        // line rs
        ((r, s, p), 0),
        ((r, s, q), 1),
        ((s, r, p), 3),
        ((s, r, q), 4),
    ];
    for ((v, o, t), c) in table {
        d.set_corner(v, o, t, n(c)).unwrap();
    }
    d.finish().expect("complete table")
}

const NAME_POOL: [&str; 11] = ["p", "q", "r", "s", "t", "u", "v", "w", "x", "y", "z"];

fn end_name(i: usize) -> String {
    match NAME_POOL.get(i) {
        Some(n) => n.to_string(),
        None => format!("z{i}"),
    }
}

fn random_rational(rng: &mut ChaCha8Rng, max_numer: i64) -> Rational {
    let den = [1, 2, 3, 5][rng.gen_range(0..4)];
    Rational::new(rng.gen_range(0..=max_numer * den), den)
}

fn random_positive(rng: &mut ChaCha8Rng, max_numer: i64) -> Rational {
    let den = [1, 2, 3, 5][rng.gen_range(0..4)];
    Rational::new(rng.gen_range(1..=max_numer * den), den)
}

/// A fraction strictly between 0 and 1 (or in `[0, 1]` when `closed`).
fn random_fraction(rng: &mut ChaCha8Rng, closed: bool) -> Rational {
    let den = rng.gen_range(2..=7);
    let num = if closed {
        rng.gen_range(0..=den)
    } else {
        rng.gen_range(1..den)
    };
    Rational::new(num, den)
}

/// Random parameters for one of the three templates, with end names drawn
/// in a random order so charts of both orientations occur.
pub fn random_template(rng: &mut ChaCha8Rng, which: usize) -> Result<Instance, TreeFoldError> {
    let mut pool = ["p", "q", "r", "s"];
    for i in (1..4).rev() {
        pool.swap(i, rng.gen_range(0..=i));
    }
    match which {
        0 => {
            let a1 = random_rational(rng, 6) - Rational::from_integer(6);
            let side_s = random_rational(rng, 4);
            let gap = random_positive(rng, 3);
            let side_r = random_rational(rng, 4);
            let a2 = &a1 + &side_s + gap;
            config1_named(pool, &a1, &side_s, &a2, &side_r)
        }
        1 => {
            let big = random_positive(rng, 6);
            let u = &big * random_fraction(rng, false);
            config2_named(pool, &u, &big)
        }
        _ => {
            let big = random_positive(rng, 6);
            let side_s = &big * random_fraction(rng, true);
            let a = (&big - &side_s) * random_fraction(rng, true);
            config3_named(pool, &big, &side_s, &a)
        }
    }
}

/// A seeded random instance on `n` ends: a single line for `n = 2`, a tripod
/// for `n = 3`, otherwise a random template extended by end attachments.
pub fn gen_random(seed: u64, n: usize) -> Result<Instance, TreeFoldError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = match n {
        0 | 1 => return Err(bad("need at least two ends")),
        2 => Instance::draft(&["p", "q"])?.finish()?,
        3 => gen_tripod(random_rational(&mut rng, 4))?,
        _ => {
            let which = rng.gen_range(0..4);
            if which == 3 {
                let base = gen_tripod(random_rational(&mut rng, 4))?;
                gen_attach_end(
                    &base,
                    &end_name(rng.gen_range(0..3)),
                    &random_positive(&mut rng, 3),
                    "s",
                )?
            } else {
                random_template(&mut rng, which)?
            }
        }
    };
    for i in 4..n {
        let at = inst.names()[rng.gen_range(0..inst.end_count())].clone();
        inst = gen_attach_end(&inst, &at, &random_positive(&mut rng, 3), &end_name(i))?;
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn pq_corners(inst: &Instance) -> Vec<Rational> {
        let (p, q) = (inst.end_id("p").unwrap(), inst.end_id("q").unwrap());
        let mut v: Vec<Rational> = inst
            .ends()
            .filter(|&x| x != p && x != q)
            .flat_map(|x| [inst.corner(p, q, x).clone(), inst.corner(q, p, x).clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn sample_coordinates() {
        let c1 = gen_config1(r(-3, 1), r(2, 1), r(0, 1), r(3, 1)).unwrap();
        assert_eq!(pq_corners(&c1), vec![r(-3, 1), r(-1, 1), r(0, 1), r(3, 1)]);
        let c2 = gen_config2(r(1, 1), r(3, 1)).unwrap();
        assert_eq!(pq_corners(&c2), vec![r(-1, 1), r(0, 1), r(1, 1), r(3, 1)]);
        let c3 = gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap();
        assert_eq!(pq_corners(&c3), vec![r(0, 1), r(6, 5), r(16, 5), r(4, 1)]);
        let (q, rr, s) = (1, 2, 3);
        assert_eq!(c3.side(q, rr, s), &r(18, 5));
    }

    #[test]
    fn template_parameter_checks() {
        assert!(gen_config2(r(3, 1), r(3, 1)).is_err());
        assert!(gen_config2(r(0, 1), r(3, 1)).is_err());
        assert!(gen_config3(r(4, 1), r(3, 1), r(2, 1)).is_err());
        assert!(gen_config1(r(0, 1), r(2, 1), r(1, 1), r(1, 1)).is_err());
        assert!(gen_tripod(r(-1, 1)).is_err());
    }

    #[test]
    fn attach_copies_triangles() {
        let t = gen_tripod(r(2, 1)).unwrap();
        let four = gen_attach_end(&t, "p", &r(1, 1), "s").unwrap();
        assert_eq!(four.end_count(), 4);
        let (p, q, rr, s) = (0, 1, 2, 3);
        assert_eq!(four.side(s, q, rr), four.side(p, q, rr));
        assert!(four.side(s, p, q).is_zero());
        // the branch point lies one unit beyond the corner (qpr) at -1
        assert_eq!(four.corner(p, q, s), &r(-2, 1));
        assert!(gen_attach_end(&t, "p", &r(0, 1), "s").is_err());
        assert!(gen_attach_end(&t, "p", &r(1, 1), "q").is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(gen_random(7, 6).unwrap(), gen_random(7, 6).unwrap());
        assert_eq!(gen_random(7, 6).unwrap().end_count(), 6);
        assert_eq!(gen_random(1, 2).unwrap().end_count(), 2);
    }
}
