//! Classification of four ends into the three admissible configurations.

use serde::{Deserialize, Serialize};

use super::{line, EndId, Instance, TreeFoldError};
use crate::exact::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigTag {
    C1,
    C2,
    C3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigClass {
    pub tag: ConfigTag,
    /// The ends in the roles `p, q, r, s` of the matching template.
    pub roles: [EndId; 4],
    /// Corners `(qpr), (pqr), (qps), (pqs)` on the line `pq`, measured
    /// increasing toward `q`.
    pub pq_corners: [Rational; 4],
    /// Side lengths of `pqr, pqs, prs, qrs`.
    pub sides: [Rational; 4],
}

/// Corner `(x y z)` on the line from `a` to `b`, measured increasing toward `b`.
/// The vertex `y` must be `a` or `b` and the other one must be `x` or `z`.
fn pos(inst: &Instance, a: EndId, b: EndId, (x, y, z): (EndId, EndId, EndId)) -> Rational {
    let w = if y == a { b } else { a };
    inst.along(line(a, b), b, inst.corner_on(x, y, z, w))
}

struct Roles<'a> {
    inst: &'a Instance,
    p: EndId,
    q: EndId,
    r: EndId,
    s: EndId,
}

impl Roles<'_> {
    fn side(&self, a: EndId, b: EndId, c: EndId) -> Rational {
        self.inst.side(a, b, c).clone()
    }

    fn pos(&self, a: EndId, b: EndId, c: (EndId, EndId, EndId)) -> Rational {
        pos(self.inst, a, b, c)
    }

    fn c1(&self) -> bool {
        let (p, q, r, s) = (self.p, self.q, self.r, self.s);
        let qpr = self.pos(p, q, (q, p, r));
        self.pos(p, q, (q, p, s)) < qpr
            && self.pos(p, q, (p, q, s)) < qpr
            && self.pos(p, s, (q, p, s)) == self.pos(p, s, (r, p, s))
            && self.side(s, q, r) == self.side(p, q, r)
            && self.pos(q, r, (p, q, r)) == self.pos(q, r, (s, q, r))
            && self.pos(r, q, (p, r, q)) == self.pos(r, q, (s, r, q))
            && self.side(p, s, r) == self.side(p, s, q)
            && self.pos(s, p, (p, s, r)) == self.pos(s, p, (p, s, q))
    }

    fn c2(&self) -> bool {
        let (p, q, r, s) = (self.p, self.q, self.r, self.s);
        let qpr = self.pos(p, q, (q, p, r));
        let pqr = self.pos(p, q, (p, q, r));
        let pqs = self.pos(p, q, (p, q, s));
        let on_pr_qpr = self.pos(p, r, (q, p, r));
        let on_pr_prs = self.pos(p, r, (p, r, s));
        let on_sq_psq = self.pos(s, q, (p, s, q));
        let on_sq_qsr = self.pos(s, q, (q, s, r));
        let on_sq_pqs = self.pos(s, q, (p, q, s));
        self.pos(p, q, (q, p, s)) < qpr
            && qpr <= pqs
            && pqs < pqr
            && self.pos(p, s, (q, p, s)) == self.pos(p, s, (r, p, s))
            && self.pos(q, r, (p, q, r)) == self.pos(q, r, (r, q, s))
            && self.pos(s, p, (p, s, q)) == self.pos(s, p, (p, s, r))
            && self.side(p, q, s) == self.side(p, r, s)
            && on_pr_qpr <= on_pr_prs
            && on_pr_prs < self.pos(p, r, (p, r, q))
            && self.pos(r, q, (p, r, q)) == self.pos(r, q, (q, r, s))
            && self.side(q, r, s) == self.side(p, q, r)
            && on_sq_psq < on_sq_qsr
            && on_sq_qsr <= on_sq_pqs
            && &on_pr_prs - &on_pr_qpr == &pqs - &qpr
            && &on_sq_pqs - &on_sq_qsr == &pqs - &qpr
    }

    fn c3(&self) -> bool {
        let (p, q, r, s) = (self.p, self.q, self.r, self.s);
        let qpr = self.pos(p, q, (q, p, r));
        let pqr = self.pos(p, q, (p, q, r));
        let pqs = self.pos(p, q, (p, q, s));
        let qps = self.pos(p, q, (q, p, s));
        let inside = |x: &Rational| qpr <= *x && *x <= pqr;
        let on_ps_psq = self.pos(p, s, (p, s, q));
        let on_ps_psr = self.pos(p, s, (p, s, r));
        inside(&pqs)
            && inside(&qps)
            && self.pos(q, r, (p, q, r)) == self.pos(q, r, (r, q, s))
            && self.pos(p, r, (q, p, r)) == self.pos(p, r, (r, p, s))
            && self.pos(r, p, (p, r, s)) == self.pos(r, p, (p, r, q))
            && self.side(p, r, s) == self.side(p, q, r)
            && on_ps_psq <= on_ps_psr
            && (self.pos(q, s, (p, q, s)) - self.pos(q, s, (r, q, s))).abs()
                == &on_ps_psr - &on_ps_psq
    }

    fn class(&self, tag: ConfigTag) -> ConfigClass {
        let (p, q, r, s) = (self.p, self.q, self.r, self.s);
        ConfigClass {
            tag,
            roles: [p, q, r, s],
            pq_corners: [
                self.pos(p, q, (q, p, r)),
                self.pos(p, q, (p, q, r)),
                self.pos(p, q, (q, p, s)),
                self.pos(p, q, (p, q, s)),
            ],
            sides: [
                self.side(p, q, r),
                self.side(p, q, s),
                self.side(p, r, s),
                self.side(q, r, s),
            ],
        }
    }
}

fn permutations(ends: [EndId; 4]) -> Vec<[EndId; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push([ends[a], ends[b], ends[c], ends[d]]);
                    }
                }
            }
        }
    }
    out
}

/// Matches four ends against the templates under every assignment of roles
/// in which `pqr` has maximal side. The search order depends only on the
/// set of ends, so the answer does not depend on how they are listed.
pub fn classify_four_ends(inst: &Instance, four: [EndId; 4]) -> Result<ConfigClass, TreeFoldError> {
    let mut sorted = four;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted[3] >= inst.end_count() {
        return Err(TreeFoldError::Malformed(
            "need four distinct ends of the instance".into(),
        ));
    }
    let perms = permutations(sorted);
    for tag in [ConfigTag::C1, ConfigTag::C2, ConfigTag::C3] {
        for &[p, q, r, s] in &perms {
            let roles = Roles { inst, p, q, r, s };
            let big = inst.side(p, q, r);
            if [inst.side(p, q, s), inst.side(p, r, s), inst.side(q, r, s)]
                .iter()
                .any(|x| *x > big)
            {
                continue;
            }
            let hit = match tag {
                ConfigTag::C1 => roles.c1(),
                ConfigTag::C2 => roles.c2(),
                ConfigTag::C3 => roles.c3(),
            };
            if hit {
                return Ok(roles.class(tag));
            }
        }
    }
    Err(TreeFoldError::NoTemplateMatch {
        ends: sorted.map(|e| inst.name(e).to_string()),
    })
}

/// Every tag matched by some role assignment; used to check that the
/// templates do not overlap.
pub fn matching_tags(inst: &Instance, four: [EndId; 4]) -> Vec<ConfigTag> {
    let mut tags = Vec::new();
    for [p, q, r, s] in permutations(four) {
        let roles = Roles { inst, p, q, r, s };
        let big = inst.side(p, q, r);
        if [inst.side(p, q, s), inst.side(p, r, s), inst.side(q, r, s)]
            .iter()
            .any(|x| *x > big)
        {
            continue;
        }
        for (tag, hit) in [
            (ConfigTag::C1, roles.c1()),
            (ConfigTag::C2, roles.c2()),
            (ConfigTag::C3, roles.c3()),
        ] {
            if hit && !tags.contains(&tag) {
                tags.push(tag);
            }
        }
    }
    tags.sort();
    tags
}
