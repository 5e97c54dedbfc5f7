//! Relative distance toward an end, and the retraction onto a line by combing.

use serde::{Deserialize, Serialize};

use super::fold::{gluings, special_points};
use super::{line, sign_toward, signed, EndId, Instance, Line, PointRef, TreeFoldError};
use crate::exact::{Rational, Sqrt3Scalar};

fn other(l: Line, e: EndId) -> EndId {
    if l.0 == e {
        l.1
    } else {
        l.0
    }
}

/// Relative distance toward `p` of a point on a line `qr` not containing `p`,
/// measured from the corner `(qpr)`: zero outside the side of triangle `pqr`
/// on `qr`, and `sqrt(3)/2` times the distance to the nearer end of the side
/// inside it.
pub fn relative_distance(
    inst: &Instance,
    p: EndId,
    alpha: &PointRef,
) -> Result<Sqrt3Scalar, TreeFoldError> {
    let l = alpha.line;
    if l.0 == p || l.1 == p || l.0 == l.1 || l.1 >= inst.end_count() || p >= inst.end_count() {
        return Err(TreeFoldError::WrongLine(format!(
            "relative distance toward {} needs a line avoiding it",
            inst.names().get(p).map_or("?", String::as_str)
        )));
    }
    let (q, r) = l;
    let x = inst.along(l, r, &alpha.coord);
    let lo = inst.along(l, r, inst.corner(q, r, p));
    let hi = inst.along(l, r, inst.corner(r, q, p));
    if lo < x && x < hi {
        Ok(Sqrt3Scalar::half_sqrt3_times(&(&x - &lo).min(&hi - &x)))
    } else {
        Ok(Sqrt3Scalar::zero())
    }
}

/// `relative_distance / sqrt(3)`: how far the retraction from `p` moves a
/// point of a triangle side beyond its projection.
pub fn busemann_retraction_offset(
    inst: &Instance,
    p: EndId,
    alpha: &PointRef,
) -> Result<Sqrt3Scalar, TreeFoldError> {
    Ok(relative_distance(inst, p, alpha)?.div_sqrt3())
}

/// Moves a coordinate on line `m-x` to line `m-y` by the isometry that fixes
/// their common half-line toward `m`.
fn comb(inst: &Instance, m: EndId, from: Line, to: Line, coord: &Rational) -> Rational {
    let (x, y) = (other(from, m), other(to, m));
    if x == y {
        return coord.clone();
    }
    let a0 = inst.corner(m, x, y);
    let b0 = inst.corner(m, y, x);
    let t = signed(sign_toward(from, m), coord - a0);
    b0 + signed(sign_toward(to, m), t)
}

fn check_point(inst: &Instance, alpha: &PointRef) -> Result<(), TreeFoldError> {
    let (a, b) = alpha.line;
    if a >= b || b >= inst.end_count() {
        return Err(TreeFoldError::WrongLine(format!(
            "no line {:?}",
            alpha.line
        )));
    }
    Ok(())
}

/// Image of `alpha` under the retraction onto the line `pq` centred at `p`.
///
/// A point on a line through `p` is combed from `p`. On any other line `rs`
/// the midpoint of the side of triangle `prs` splits the line; the `r` half
/// is combed from `r` onto `rp` and then from `p` onto `pq`, likewise for `s`.
pub fn retraction(
    inst: &Instance,
    (p, q): (EndId, EndId),
    alpha: &PointRef,
) -> Result<PointRef, TreeFoldError> {
    check_point(inst, alpha)?;
    if p == q || q >= inst.end_count() {
        return Err(TreeFoldError::WrongLine(
            "target needs two distinct ends".into(),
        ));
    }
    let target = line(p, q);
    let l = alpha.line;
    if l == target {
        return Ok(alpha.clone());
    }
    if l.0 == p || l.1 == p {
        return Ok(PointRef {
            line: target,
            coord: comb(inst, p, l, target, &alpha.coord),
        });
    }
    let (r, s) = l;
    let mid = (inst.corner(r, s, p) + inst.corner(s, r, p)).half();
    let toward_r = inst.along(l, r, &alpha.coord) >= inst.along(l, r, &mid);
    let via = if toward_r { r } else { s };
    let on_vp = comb(inst, via, l, line(via, p), &alpha.coord);
    Ok(PointRef {
        line: target,
        coord: comb(inst, p, line(via, p), target, &on_vp),
    })
}

/// The same retraction computed from the relative distance: a point inside
/// the side of triangle `prs` lands `t/2 + d_p/sqrt(3)` beyond the image of
/// the nearer corner toward `p`, where `t` is its distance to that corner.
pub fn retraction_by_offset(
    inst: &Instance,
    (p, q): (EndId, EndId),
    alpha: &PointRef,
) -> Result<PointRef, TreeFoldError> {
    check_point(inst, alpha)?;
    let l = alpha.line;
    if l == line(p, q) || l.0 == p || l.1 == p {
        return retraction(inst, (p, q), alpha);
    }
    let (r, s) = l;
    let x = inst.along(l, s, &alpha.coord);
    let cr = inst.along(l, s, inst.corner(r, s, p));
    let cs = inst.along(l, s, inst.corner(s, r, p));
    if !(cr < x && x < cs) {
        return retraction(inst, (p, q), alpha);
    }
    let (near, t) = if &x - &cr <= &cs - &x {
        (r, &x - &cr)
    } else {
        (s, &cs - &x)
    };
    // the nearer corner, read on the line through p where it also lies
    let corner = PointRef::new(near, p, inst.corner(near, p, other(l, near)).clone());
    let base = retraction(inst, (p, q), &corner)?;
    let offset = busemann_retraction_offset(inst, p, alpha)?;
    if !offset.is_rational() {
        return Err(TreeFoldError::WrongLine("offset is not rational".into()));
    }
    let shift = t.half() + offset.rational;
    let target = line(p, q);
    Ok(PointRef {
        line: target,
        coord: inst.step(target, &base.coord, p, &shift),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractionReport {
    pub pairs_checked: usize,
    pub injectivity_checked: usize,
    pub counterexample: Option<String>,
}

impl RetractionReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// For every target line, identified special points must have equal images
/// (both for elementary identifications and shared half-lines), and distinct
/// special points of the target line must have distinct images.
pub fn retraction_invariance_check(inst: &Instance) -> Result<RetractionReport, TreeFoldError> {
    let glue = gluings(inst);
    let pts = special_points(inst, &glue)?;
    let mut pairs = Vec::new();
    for g in &glue {
        for x in &pts[&g.a] {
            if let Some(y) = g.forward(x) {
                pairs.push((
                    PointRef {
                        line: g.a,
                        coord: x.clone(),
                    },
                    PointRef {
                        line: g.b,
                        coord: y,
                    },
                    g.elementary,
                ));
            }
        }
    }
    let mut report = RetractionReport {
        pairs_checked: 0,
        injectivity_checked: 0,
        counterexample: None,
    };
    for a in inst.ends() {
        for b in inst.ends().filter(|&b| b != a) {
            for (x, y, elementary) in &pairs {
                report.pairs_checked += 1;
                let (rx, ry) = (retraction(inst, (a, b), x)?, retraction(inst, (a, b), y)?);
                if rx != ry {
                    report.counterexample = Some(format!(
                        "retraction onto {} from {}: {} {} on {} and {} on {} go to {} and {}",
                        inst.line_name(line(a, b)),
                        inst.name(a),
                        if *elementary {
                            "elementary pair"
                        } else {
                            "shared point"
                        },
                        x.coord,
                        inst.line_name(x.line),
                        y.coord,
                        inst.line_name(y.line),
                        rx.coord,
                        ry.coord
                    ));
                    return Ok(report);
                }
            }
            let own: Vec<&Rational> = pts[&line(a, b)].iter().collect();
            let mut images = Vec::with_capacity(own.len());
            for c in &own {
                report.injectivity_checked += 1;
                images.push(
                    retraction(
                        inst,
                        (a, b),
                        &PointRef {
                            line: line(a, b),
                            coord: (*c).clone(),
                        },
                    )?
                    .coord,
                );
            }
            images.dedup();
            if images.len() != own.len() {
                report.counterexample = Some(format!(
                    "distinct points of {} collide",
                    inst.line_name(line(a, b))
                ));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::super::gen::*;
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn relative_distance_shape() {
        let inst = gen_tripod(r(2, 1)).unwrap();
        let (p, q, rr) = (0, 1, 2);
        // side of pqr on qr is [-1, 1]
        let at = |c: Rational| relative_distance(&inst, p, &PointRef::new(q, rr, c)).unwrap();
        assert_eq!(at(r(-1, 1)), Sqrt3Scalar::zero());
        assert_eq!(at(r(0, 1)), Sqrt3Scalar::half_sqrt3_times(&r(1, 1)));
        assert_eq!(at(r(1, 2)), Sqrt3Scalar::half_sqrt3_times(&r(1, 2)));
        assert_eq!(at(r(3, 1)), Sqrt3Scalar::zero());
        assert_eq!(
            busemann_retraction_offset(&inst, p, &PointRef::new(q, rr, r(0, 1))).unwrap(),
            Sqrt3Scalar::from_rational(r(1, 2))
        );
        assert!(matches!(
            relative_distance(&inst, q, &PointRef::new(q, rr, r(0, 1))),
            Err(TreeFoldError::WrongLine(_))
        ));
        let flat = gen_tripod(r(0, 1)).unwrap();
        assert!(relative_distance(&flat, p, &PointRef::new(q, rr, r(0, 1)))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn retraction_basics() {
        let inst = gen_tripod(r(2, 1)).unwrap();
        let (p, q, rr) = (0, 1, 2);
        let on_pq = PointRef::new(p, q, r(7, 3));
        assert_eq!(retraction(&inst, (p, q), &on_pq).unwrap(), on_pq);
        let qpr = inst.corner_point(q, p, rr, rr);
        assert_eq!(
            retraction(&inst, (p, q), &qpr).unwrap(),
            inst.corner_point(q, p, rr, q)
        );
    }

    #[test]
    fn second_configuration_routes_agree() {
        let inst = gen_config2(r(1, 1), r(3, 1)).unwrap();
        let (p, q, rr, s) = (0, 1, 2, 3);
        let a = retraction(&inst, (p, q), &inst.corner_point(p, rr, s, s)).unwrap();
        let b = retraction(&inst, (p, q), &inst.corner_point(p, q, s, s)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn offset_route_matches_combing() {
        let inst = gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap();
        for a in inst.ends() {
            for b in inst.ends().filter(|&b| b != a) {
                for l in inst.lines() {
                    for c in inst.special_coords(l) {
                        let x = PointRef { line: l, coord: c };
                        assert_eq!(
                            retraction(&inst, (a, b), &x).unwrap(),
                            retraction_by_offset(&inst, (a, b), &x).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn invariance_on_templates() {
        for inst in [
            gen_tripod(r(2, 1)).unwrap(),
            gen_config1(r(-3, 1), r(2, 1), r(0, 1), r(3, 1)).unwrap(),
            gen_config2(r(1, 1), r(3, 1)).unwrap(),
            gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap(),
        ] {
            let rep = retraction_invariance_check(&inst).unwrap();
            assert!(rep.passed(), "{:?}", rep.counterexample);
            assert!(rep.pairs_checked > 0);
        }
    }
}
