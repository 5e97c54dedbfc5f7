//! Consistency checks on a corner table.

use super::classify::{classify_four_ends, ConfigClass};
use super::fold::fold_quotient;
use super::{line, EndId, Instance, TreeFoldError};
use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<TreeFoldError>,
    pub classes: Vec<ConfigClass>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// The most severe violation, in the order: equilaterality, impossible
    /// four-end configuration, combing, folding.
    pub fn primary_error(&self) -> Option<&TreeFoldError> {
        self.violations.iter().min_by_key(|e| e.precedence())
    }

    pub fn into_result(self) -> Result<Vec<ConfigClass>, TreeFoldError> {
        match self.primary_error() {
            Some(e) => Err(e.clone()),
            None => Ok(self.classes),
        }
    }
}

fn names3(inst: &Instance, t: [EndId; 3]) -> [String; 3] {
    t.map(|e| inst.name(e).to_string())
}

fn check_equilateral(inst: &Instance, out: &mut Vec<TreeFoldError>) {
    for t in inst.triples() {
        let side = inst.side(t[0], t[1], t[2]);
        for (a, b, c) in [(t[0], t[1], t[2]), (t[0], t[2], t[1]), (t[1], t[2], t[0])] {
            let l = line(a, b);
            let gap =
                inst.along(l, b, inst.corner(b, a, c)) - inst.along(l, b, inst.corner(a, b, c));
            if gap != *side {
                out.push(TreeFoldError::EquilateralViolation {
                    triple: names3(inst, t),
                    detail: format!(
                        "corners on {} are {gap} apart, side is {side}",
                        inst.line_name(l)
                    ),
                });
            }
        }
    }
}

/// For every end `m`, the lines toward `m` must comb consistently: the chart
/// shifts between them compose, and split heights form an ultrametric
/// (of three lines, two split off together and the third no later).
fn check_combing(inst: &Instance, out: &mut Vec<TreeFoldError>) {
    for m in inst.ends() {
        let others: Vec<EndId> = inst.ends().filter(|&x| x != m).collect();
        if others.len() < 2 {
            continue;
        }
        // height toward m of the split of lines mx and my, read on line mx
        let height = |x: EndId, y: EndId| inst.along(line(m, x), m, inst.corner(m, x, y));
        let shift = |x: EndId, y: EndId| height(y, x) - height(x, y);
        let x0 = others[0];
        let normalized = |x: EndId, y: EndId| {
            height(x, y)
                - if x == x0 {
                    Rational::zero()
                } else {
                    shift(x0, x)
                }
        };
        'outer: for (i, &x) in others.iter().enumerate() {
            for (j, &y) in others.iter().enumerate().skip(i + 1) {
                for &z in &others[j + 1..] {
                    if shift(x, y) + shift(y, z) != shift(x, z) {
                        out.push(TreeFoldError::CombingMismatch {
                            end: inst.name(m).to_string(),
                            detail: format!(
                                "chart shifts between lines {}, {}, {} do not compose",
                                inst.line_name(line(m, x)),
                                inst.line_name(line(m, y)),
                                inst.line_name(line(m, z))
                            ),
                        });
                        break 'outer;
                    }
                    let mut h = [normalized(x, y), normalized(x, z), normalized(y, z)];
                    h.sort();
                    if h[1] != h[2] {
                        out.push(TreeFoldError::CombingMismatch {
                            end: inst.name(m).to_string(),
                            detail: format!(
                                "lines {}, {}, {} split toward {} at three different places",
                                inst.line_name(line(m, x)),
                                inst.line_name(line(m, y)),
                                inst.line_name(line(m, z)),
                                inst.name(m)
                            ),
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
}

/// Runs every check and records all violations plus the class of every
/// four-end subset that matched.
pub fn validate(inst: &Instance) -> ValidationReport {
    let mut violations = Vec::new();
    check_equilateral(inst, &mut violations);
    let mut classes = Vec::new();
    let n = inst.end_count();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    match classify_four_ends(inst, [a, b, c, d]) {
                        Ok(k) => classes.push(k),
                        Err(TreeFoldError::NoTemplateMatch { ends }) => {
                            violations.push(TreeFoldError::ImpossibleConfiguration { ends })
                        }
                        Err(e) => violations.push(e),
                    }
                }
            }
        }
    }
    check_combing(inst, &mut violations);
    if let Err(e) = fold_quotient(inst) {
        violations.push(match e {
            TreeFoldError::FoldMismatch(_) => e,
            other => TreeFoldError::FoldMismatch(other.to_string()),
        });
    }
    ValidationReport {
        violations,
        classes,
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
    fn templates_validate() {
        for inst in [
            gen_tripod(r(0, 1)).unwrap(),
            gen_tripod(r(5, 2)).unwrap(),
            gen_config1(r(-3, 1), r(2, 1), r(0, 1), r(3, 1)).unwrap(),
            gen_config2(r(1, 1), r(3, 1)).unwrap(),
            gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap(),
        ] {
            let rep = validate(&inst);
            assert!(rep.is_valid(), "{:?}", rep.violations);
        }
    }

    #[test]
    fn cyclic_pattern_is_impossible() {
        let rep = validate(&cyclic_impossible_instance());
        assert!(matches!(
            rep.primary_error(),
            Some(TreeFoldError::ImpossibleConfiguration { .. })
        ));
    }

    #[test]
    fn broken_side_is_reported() {
        let inst = gen_tripod(r(2, 1)).unwrap();
        let mut j = inst.to_json();
        j.corners[0].side = r(3, 1);
        let bad = Instance::from_json(&j).unwrap();
        let rep = validate(&bad);
        assert!(matches!(
            rep.primary_error(),
            Some(TreeFoldError::EquilateralViolation { .. })
        ));
        assert_eq!(
            rep.violations
                .iter()
                .filter(|e| matches!(e, TreeFoldError::EquilateralViolation { .. }))
                .count(),
            3
        );
    }
}
