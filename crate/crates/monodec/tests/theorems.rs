//! Structure-theory verification at small degrees. The full sweeps at the
//! documented scale bounds live in the acceptance suite of the CLI crate.

use monodec::families::{enumerate, Family, FamilySpec};
use monodec::generation::{
    closure_default, factorize_reversing, rank_candidate, verify_rank, Semigroup,
};
use monodec::structure::{
    exhaustive_maximal_subsemigroups, greens, maximal_subsemigroups, starred_greens,
    verify_abundance, verify_imd_greens, verify_maximal_catalog, verify_pd_greens,
    verify_pmd_greens, verify_regularity, verify_starred,
};

fn assert_ok(report: &monodec::Report, what: &str) {
    assert!(
        report.ok(),
        "{what}: {:?}",
        report.failures().collect::<Vec<_>>()
    );
}

#[test]
fn generation_matches_enumeration_up_to_degree_five() {
    for n in 3..=5u8 {
        for r in 2..n {
            for family in [Family::PMD, Family::IMD] {
                let spec = FamilySpec::bounded(family, n, r);
                let candidate = rank_candidate(&spec).unwrap();
                let closure = closure_default(candidate.elements()).unwrap();
                let family_elems = enumerate(&spec).unwrap();
                assert_eq!(closure.elements, family_elems, "{spec}");
            }
        }
    }
}

#[test]
fn rank_reports_pass_up_to_degree_four() {
    for n in 3..=4u8 {
        for r in 2..=n {
            for family in [Family::PMD, Family::IMD] {
                let spec = FamilySpec::bounded(family, n, r);
                let report = verify_rank(&spec).unwrap();
                assert_ok(&report, &format!("verify_rank({spec})"));
            }
        }
    }
}

#[test]
fn greens_characterizations_up_to_degree_four() {
    for n in 3..=4u8 {
        for r in 2..=n {
            assert_ok(&verify_pmd_greens(n, r).unwrap(), &format!("PMD({n},{r})"));
            assert_ok(&verify_imd_greens(n, r).unwrap(), &format!("IMD({n},{r})"));
        }
        for r in 2..n {
            assert_ok(&verify_pd_greens(n, r).unwrap(), &format!("PD({n},{r})"));
        }
    }
}

#[test]
fn starred_and_abundance_up_to_degree_four() {
    for n in 3..=4u8 {
        for r in 2..=n {
            for family in [Family::PMD, Family::IMD] {
                assert_ok(
                    &verify_starred(family, n, r).unwrap(),
                    &format!("starred {family:?}({n},{r})"),
                );
                assert_ok(
                    &verify_abundance(family, n, r).unwrap(),
                    &format!("abundance {family:?}({n},{r})"),
                );
                assert_ok(
                    &verify_regularity(family, n, r).unwrap(),
                    &format!("regularity {family:?}({n},{r})"),
                );
            }
        }
    }
}

#[test]
fn maximal_catalogs_with_exhaustive_search_at_degree_three() {
    for family in [Family::PMD, Family::IMD] {
        for r in [2u8, 3] {
            let spec = FamilySpec::bounded(family, 3, r);
            let report = verify_maximal_catalog(&spec, true).unwrap();
            assert_ok(&report, &format!("maximal {family:?}(3,{r})"));
        }
    }
}

#[test]
fn exhaustive_search_example_shapes() {
    let spec = FamilySpec::bounded(Family::IMD, 4, 2);
    let s = Semigroup::from_family(&spec).unwrap();
    let candidate = rank_candidate(&spec).unwrap();
    let seeds: Vec<u32> = candidate
        .elements()
        .iter()
        .map(|a| s.index_of(a).unwrap())
        .collect();
    let found = exhaustive_maximal_subsemigroups(&s, &seeds).unwrap();
    let catalog = maximal_subsemigroups(&spec).unwrap();
    assert_eq!(found.len(), catalog.len());
    // all complements are singletons here
    for sub in &found {
        assert_eq!(sub.len(), s.len() - 1);
    }
}

#[test]
fn factorization_covers_the_injective_reversing_part() {
    let star = enumerate(&FamilySpec::new(Family::IRDStar, 6)).unwrap();
    for a in &star {
        let f = factorize_reversing(&a.clone(), 6).unwrap();
        assert_eq!(f.compose(), *a);
        for p in &f.parts {
            assert!(p.is_injective(), "{p} must stay injective");
        }
    }
}

#[test]
fn greens_and_starred_relate_consistently() {
    let s = Semigroup::from_family(&FamilySpec::bounded(Family::PMD, 4, 2)).unwrap();
    let g = greens(&s);
    let star = starred_greens(&s);
    // classical relations refine starred ones
    for (classical, starred) in [(&g.r, &star.r_star), (&g.l, &star.l_star)] {
        for class in classical.classes() {
            for w in class.windows(2) {
                assert!(starred.same(w[0], w[1]));
            }
        }
    }
    // D* refines nothing but contains D
    for class in g.d.classes() {
        for w in class.windows(2) {
            assert!(star.d_star.same(w[0], w[1]));
        }
    }
}
