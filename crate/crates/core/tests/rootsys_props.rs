use std::collections::BTreeSet;

use buildings_core::exact::{NamedAngle, Rational};
use buildings_core::rootsys::{classical_root_count, DiagramSpec, Family, Realization, RootSystem};
use buildings_core::titsdiagram::pi3_family_instances;
use proptest::prelude::*;

fn all_specs() -> Vec<DiagramSpec> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(DiagramSpec::new(Family::A, n).unwrap());
    }
    for n in 2..=8 {
        out.push(DiagramSpec::new(Family::B, n).unwrap());
        out.push(DiagramSpec::new(Family::C, n).unwrap());
    }
    for n in 4..=8 {
        out.push(DiagramSpec::new(Family::D, n).unwrap());
    }
    for (f, n) in [
        (Family::E, 6),
        (Family::E, 7),
        (Family::E, 8),
        (Family::F, 4),
        (Family::G, 2),
    ] {
        out.push(DiagramSpec::new(f, n).unwrap());
    }
    out
}

#[test]
fn root_counts_match_closed_forms() {
    // independent closed forms: A_n n(n+1), B_n and C_n 2n^2, D_n 2n(n-1)
    for spec in all_specs() {
        let n = spec.rank;
        let expected = match spec.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::E => [72, 126, 240][n - 6],
            Family::F => 48,
            Family::G => 12,
        };
        let rs = RootSystem::build(spec).unwrap();
        assert_eq!(rs.roots.len(), expected, "{spec}");
        assert_eq!(classical_root_count(&spec), expected, "{spec}");
    }
}

#[test]
fn equal_length_roots_form_allowed_angles() {
    let allowed = [
        NamedAngle::Zero,
        NamedAngle::PiThird,
        NamedAngle::PiHalf,
        NamedAngle::TwoPiThird,
        NamedAngle::Pi,
    ];
    for spec in all_specs()
        .into_iter()
        .filter(|s| s.rank <= 6 || s.family == Family::E)
    {
        let rs = RootSystem::build(spec).unwrap();
        let lengths: BTreeSet<Rational> = rs.roots.iter().map(|r| rs.norm2(r)).collect();
        for len in lengths {
            let same: Vec<_> = rs.roots.iter().filter(|r| rs.norm2(r) == len).collect();
            for u in &same {
                for v in &same {
                    let c = rs.cos_between(u, v).unwrap();
                    assert!(allowed.iter().any(|a| c.is_angle(*a)), "{spec}: {c}");
                }
            }
        }
    }
}

#[test]
fn encircled_orbit_is_the_long_roots() {
    for entry in pi3_family_instances() {
        let d = &entry.diagram;
        let rs = d.root_system();
        let i = *d.encircled.iter().next().unwrap();
        let orbit: BTreeSet<_> = rs
            .weyl_orbit(&rs.fundamental_weights[i])
            .unwrap()
            .into_iter()
            .collect();
        let long: BTreeSet<_> = rs.long_roots().into_iter().collect();
        // the weight is itself the highest root, so no rescaling is needed
        assert_eq!(orbit, long, "{}", entry.id);
    }
}

#[test]
fn opposition_is_an_involutive_automorphism() {
    for spec in all_specs() {
        let rs = RootSystem::build(spec).unwrap();
        let sigma = rs.opposition_involution();
        assert!(
            sigma.iter().enumerate().all(|(i, &j)| sigma[j] == i),
            "{spec}"
        );
        assert!(rs.is_diagram_automorphism(&sigma), "{spec}");
        if spec.rank <= 7 {
            assert_eq!(
                rs.opposition_involution_by_orbits().unwrap(),
                sigma,
                "{spec}"
            );
        }
    }
}

#[test]
fn dual_realization_swaps_lengths() {
    for (f, n) in [(Family::B, 4), (Family::F, 4), (Family::G, 2)] {
        let spec = DiagramSpec::new(f, n).unwrap();
        let std = RootSystem::with_realization(spec, Realization::Standard).unwrap();
        let dual = RootSystem::with_realization(spec, Realization::Dual).unwrap();
        let mut both: Vec<usize> = std.long_nodes();
        both.extend(dual.long_nodes());
        both.sort_unstable();
        assert_eq!(both, (0..n).collect::<Vec<_>>(), "{spec}");
    }
}

proptest! {
    #[test]
    fn reflections_preserve_the_root_set(idx in 0usize..24, node in 0usize..4) {
        let rs = RootSystem::build(DiagramSpec::new(Family::F, 4).unwrap()).unwrap();
        let root = &rs.roots[idx % rs.roots.len()];
        let image = rs.reflect(root, node);
        prop_assert!(rs.roots.contains(&image));
        prop_assert_eq!(rs.reflect(&image, node), root.clone());
        prop_assert_eq!(rs.norm2(&image), rs.norm2(root));
    }
}
