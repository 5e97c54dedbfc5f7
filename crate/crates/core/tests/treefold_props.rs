use buildings_core::exact::{Rational, Sqrt3Scalar};
use buildings_core::treefold::*;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn rational() -> impl Strategy<Value = Rational> {
    (0i64..=24, prop::sample::select(vec![1i64, 2, 3, 5])).prop_map(|(n, d)| r(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_instances_fold_to_trees(seed in any::<u64>(), n in 2usize..=6) {
        let inst = gen_random(seed, n).unwrap();
        let rep = validate(&inst);
        prop_assert!(rep.is_valid(), "{:?}", rep.violations);
        let t = fold_quotient(&inst).unwrap();
        let ax = verify_tree_axioms(&inst, &t);
        prop_assert!(ax.all_passed(), "{:?}", ax);
        let rr = retraction_invariance_check(&inst).unwrap();
        prop_assert!(rr.passed(), "{:?}", rr.counterexample);
    }

    #[test]
    fn equilateral_on_all_three_lines(seed in any::<u64>(), n in 3usize..=6) {
        let inst = gen_random(seed, n).unwrap();
        for [a, b, c] in inst.triples() {
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                let l = (x, y);
                let gap = inst.along(l, y, inst.corner(y, x, z)) - inst.along(l, y, inst.corner(x, y, z));
                prop_assert_eq!(&gap, inst.side(a, b, c));
            }
        }
    }

    #[test]
    fn relative_distance_is_a_tent(side in rational(), t in rational()) {
        let inst = gen_tripod(side.clone()).unwrap();
        let (p, q, rr) = (0, 1, 2);
        let start = inst.corner(q, rr, p).clone();
        let alpha = PointRef::new(q, rr, &start + &t - r(2, 1));
        let d = relative_distance(&inst, p, &alpha).unwrap();
        let x = &t - r(2, 1);
        let expected = if x.is_positive() && x < side {
            Sqrt3Scalar::half_sqrt3_times(&x.clone().min(&side - &x))
        } else {
            Sqrt3Scalar::zero()
        };
        prop_assert_eq!(d.clone(), expected);
        // never more than the distance to the corner (qpr) along the line
        if !x.is_negative() {
            prop_assert!(d <= Sqrt3Scalar::from_rational(x));
        }
    }

    #[test]
    fn midpoints_meet_in_one_node(seed in any::<u64>(), n in 3usize..=5) {
        let inst = gen_random(seed, n).unwrap();
        let t = fold_quotient(&inst).unwrap();
        for [a, b, c] in inst.triples() {
            let mids: Vec<QPoint> = [(a, b), (a, c), (b, c)]
                .iter()
                .map(|&(x, y)| {
                    let z = a + b + c - x - y;
                    QPoint::Point(PointRef::new(x, y, (inst.corner(x, y, z) + inst.corner(y, x, z)).half()))
                })
                .collect();
            for m in &mids[1..] {
                prop_assert!(quotient_distance(&t, &mids[0], m).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn charts_are_isometric(seed in any::<u64>(), n in 2usize..=5, s in rational(), u in rational()) {
        let inst = gen_random(seed, n).unwrap();
        let t = fold_quotient(&inst).unwrap();
        for l in inst.lines() {
            let a = QPoint::Point(PointRef { line: l, coord: &s - r(12, 1) });
            let b = QPoint::Point(PointRef { line: l, coord: &u - r(12, 1) });
            prop_assert_eq!(quotient_distance(&t, &a, &b).unwrap(), (&s - &u).abs());
        }
    }

    #[test]
    fn retraction_routes_agree(seed in any::<u64>(), n in 3usize..=5) {
        let inst = gen_random(seed, n).unwrap();
        for a in inst.ends() {
            for b in inst.ends().filter(|&b| b != a) {
                for l in inst.lines() {
                    for c in inst.special_coords(l) {
                        let x = PointRef { line: l, coord: c };
                        prop_assert_eq!(retraction(&inst, (a, b), &x).unwrap(), retraction_by_offset(&inst, (a, b), &x).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classification_ignores_argument_order(seed in any::<u64>(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let inst = gen_random(seed, 4).unwrap();
        let base = classify_four_ends(&inst, [0, 1, 2, 3]).unwrap();
        let shuffled = classify_four_ends(&inst, perm).unwrap();
        prop_assert_eq!(base.tag, shuffled.tag);
        prop_assert_eq!(matching_tags(&inst, [0, 1, 2, 3]), vec![base.tag]);
    }

    /// On four ends hung from two branch points, with arbitrary side lengths,
    /// the templates accept exactly the tables whose lines comb consistently.
    #[test]
    fn templates_match_exactly_the_combable_tables(d in 0i64..=4, sides in prop::array::uniform4(0i64..=6)) {
        let h = |x: i64| r(x, 2);
        let mut m = TreeModel::on_path(&["p", "q", "r", "s"], &[h(0), h(d), h(d), h(0)]);
        m.set_side(["p", "q", "s"], h(sides[0]))
            .set_side(["p", "r", "s"], h(sides[1]))
            .set_side(["p", "q", "r"], h(sides[2]))
            .set_side(["q", "r", "s"], h(sides[3]));
        let inst = m.to_instance().unwrap();
        let rep = validate(&inst);
        let combs = !rep.violations.iter().any(|e| matches!(e, TreeFoldError::CombingMismatch { .. }));
        let classified = !rep.violations.iter().any(|e| matches!(e, TreeFoldError::ImpossibleConfiguration { .. }));
        prop_assert_eq!(combs, classified);
        let t = fold_quotient(&inst).unwrap();
        prop_assert!(verify_tree_axioms(&inst, &t).all_passed());
    }
}

#[test]
fn attach_end_yields_first_configuration() {
    let base = gen_tripod(r(2, 1)).unwrap();
    let inst = gen_attach_end(&base, "p", &r(1, 2), "s").unwrap();
    let rep = validate(&inst);
    assert!(rep.is_valid());
    assert!(rep.classes.iter().all(|c| c.tag == ConfigTag::C1));
}

#[test]
fn third_configuration_sample_validates() {
    let inst = gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap();
    let rep = validate(&inst);
    assert!(rep.is_valid());
    assert_eq!(rep.classes.len(), 1);
    assert_eq!(rep.classes[0].tag, ConfigTag::C3);
    let (p, q, rr, s) = (0, 1, 2, 3);
    // (rqs) coincides with (pqr) on qr
    assert_eq!(inst.corner(q, rr, s), inst.corner(q, rr, p));
}

#[test]
fn retraction_on_second_configuration_sample() {
    let inst = gen_config2(r(1, 1), r(3, 1)).unwrap();
    let (p, q, rr, s) = (0, 1, 2, 3);
    let prs = inst.corner_point(p, rr, s, p);
    let pqs = inst.corner_point(p, q, s, p);
    assert_eq!(
        retraction(&inst, (p, q), &prs).unwrap(),
        retraction(&inst, (p, q), &pqs).unwrap()
    );
}

#[test]
fn elementary_pairs_have_equal_images() {
    let inst = gen_tripod(r(3, 1)).unwrap();
    let (p, q, rr) = (0, 1, 2);
    for k in 0..=3 {
        let x = r(k, 2);
        let on_pq = PointRef::new(p, q, inst.step((p, q), inst.corner(p, q, rr), q, &x));
        let on_pr = PointRef::new(p, rr, inst.step((p, rr), inst.corner(p, rr, q), rr, &x));
        for target in [(q, rr), (rr, q), (q, p), (rr, p)] {
            assert_eq!(
                retraction(&inst, target, &on_pq).unwrap(),
                retraction(&inst, target, &on_pr).unwrap()
            );
        }
    }
}
