//! Dual-enumerator agreement and formula-versus-enumeration cross-checks.

use num_bigint::BigUint;

use monodec::counting;
use monodec::families::{
    enumerate, enumerate_layer, filter_oracle, filter_oracle_layer, predicted_cardinality,
    Family, FamilySpec, LayerKind, LayerSpec,
};

fn big(v: usize) -> BigUint {
    BigUint::from(v)
}

#[test]
fn every_family_matches_the_oracle_up_to_degree_six() {
    for n in 1..=6u8 {
        for family in Family::ALL {
            let spec = FamilySpec::new(family, n);
            assert_eq!(
                enumerate(&spec).unwrap(),
                filter_oracle(&spec).unwrap(),
                "family {family:?} at n={n}"
            );
        }
    }
}

#[test]
fn every_family_matches_the_oracle_at_degree_seven() {
    for family in Family::ALL {
        let spec = FamilySpec::new(family, 7);
        assert_eq!(
            enumerate(&spec).unwrap(),
            filter_oracle(&spec).unwrap(),
            "family {family:?} at n=7"
        );
    }
}

#[test]
fn bounded_families_match_the_oracle() {
    for n in 2..=5u8 {
        for family in Family::ALL {
            for r in 0..=n {
                let spec = FamilySpec::bounded(family, n, r);
                assert_eq!(
                    enumerate(&spec).unwrap(),
                    filter_oracle(&spec).unwrap(),
                    "family {family:?} at n={n}, r={r}"
                );
            }
        }
    }
}

#[test]
fn layer_enumerators_match_the_oracle() {
    for n in 2..=6u8 {
        let mut kinds = vec![];
        for m in 0..=n {
            kinds.push(LayerKind::Q { m });
        }
        for r in 0..=n {
            kinds.push(LayerKind::K { r, max_image: None });
            kinds.push(LayerKind::KInj { r });
            kinds.push(LayerKind::J { r });
            kinds.push(LayerKind::JInj { r });
            kinds.push(LayerKind::L { r });
            kinds.push(LayerKind::LInj { r });
            kinds.push(LayerKind::EJ { r });
        }
        for kind in kinds {
            let spec = LayerSpec::new(kind, n);
            assert_eq!(
                enumerate_layer(&spec).unwrap(),
                filter_oracle_layer(&spec).unwrap(),
                "layer {spec}"
            );
        }
    }
}

#[test]
fn cardinality_formulas_match_enumerations() {
    for n in 3..=7u8 {
        let nn = n as u64;
        assert_eq!(
            big(enumerate(&FamilySpec::new(Family::PRD, n)).unwrap().len()),
            counting::card_prd(nn)
        );
        assert_eq!(
            big(enumerate(&FamilySpec::new(Family::PRDStar, n)).unwrap().len()),
            counting::card_prd_star(nn)
        );
        assert_eq!(
            big(enumerate(&FamilySpec::new(Family::PC, n)).unwrap().len()),
            counting::card_pc(nn)
        );
        assert_eq!(
            big(enumerate(&FamilySpec::new(Family::PMD, n)).unwrap().len()),
            counting::card_pmd(nn)
        );
        assert_eq!(
            big(enumerate(&FamilySpec::new(Family::IMD, n)).unwrap().len()),
            counting::card_imd_full(nn)
        );
        assert_eq!(
            big(enumerate(&FamilySpec::new(Family::C, n)).unwrap().len()),
            counting::catalan(nn)
        );
        for r in 2..=n {
            let rr = r as u64;
            assert_eq!(
                big(enumerate(&FamilySpec::bounded(Family::IMD, n, r)).unwrap().len()),
                counting::card_imd(nn, rr).unwrap(),
                "IMD({n},{r})"
            );
        }
        for r in 0..=n {
            let rr = r as u64;
            assert_eq!(
                big(enumerate(&FamilySpec::bounded(Family::IC, n, r)).unwrap().len()),
                counting::card_ic(nn, rr).unwrap(),
                "IC({n},{r})"
            );
            assert_eq!(
                big(enumerate(&FamilySpec::bounded(Family::IO, n, r)).unwrap().len()),
                counting::card_io(nn, rr),
                "IO({n},{r})"
            );
        }
    }
}

#[test]
fn layer_counts_match_formulas() {
    for n in 3..=7u8 {
        let nn = n as u64;
        for m in 0..=n {
            let layer = enumerate_layer(&LayerSpec::new(LayerKind::Q { m }, n)).unwrap();
            assert_eq!(big(layer.len()), counting::q(nn, m as u64).unwrap(), "Q({n},{m})");
        }
        for r in 0..=n {
            let rr = r as u64;
            let k = enumerate_layer(&LayerSpec::new(LayerKind::K { r, max_image: None }, n))
                .unwrap();
            assert_eq!(big(k.len()), counting::card_k(nn, rr), "K_{r} at n={n}");
            let ki = enumerate_layer(&LayerSpec::new(LayerKind::KInj { r }, n)).unwrap();
            assert_eq!(big(ki.len()), counting::card_k_inj(nn, rr), "K_{r}^i at n={n}");
            let ji = enumerate_layer(&LayerSpec::new(LayerKind::JInj { r }, n)).unwrap();
            assert_eq!(big(ji.len()), counting::card_j_inj(nn, rr).unwrap(), "J_{r}^i at n={n}");
            let ej = enumerate_layer(&LayerSpec::new(LayerKind::EJ { r }, n)).unwrap();
            if r >= 1 {
                assert_eq!(big(ej.len()), counting::c_table(nn, rr), "E(J_{r}) at n={n}");
            }
        }
        // parity special cases for the middle layer
        let m = (n + 1) / 2;
        let km = enumerate_layer(&LayerSpec::new(LayerKind::K { r: m, max_image: None }, n))
            .unwrap();
        let kmi = enumerate_layer(&LayerSpec::new(LayerKind::KInj { r: m }, n)).unwrap();
        if n % 2 == 1 {
            assert_eq!(km.len(), 1);
            assert_eq!(kmi.len(), 1);
        } else {
            assert_eq!(km.len(), 3 * m as usize + 1);
            assert_eq!(kmi.len(), 2 * m as usize + 1);
        }
    }
}

#[test]
fn idempotent_counts_match_enumeration() {
    for n in 3..=5u8 {
        for r in 1..=n {
            let pmd = enumerate(&FamilySpec::bounded(Family::PMD, n, r)).unwrap();
            let idempotents = pmd.iter().filter(|a| a.is_idempotent()).count();
            assert_eq!(
                big(idempotents),
                counting::card_e_pmd(n as u64, r as u64),
                "E(PMD({n},{r}))"
            );
        }
    }
}

#[test]
fn predictions_are_consistent_with_families() {
    for n in 1..=6u8 {
        for family in Family::ALL {
            let spec = FamilySpec::new(family, n);
            if let Some(p) = predicted_cardinality(&spec) {
                assert_eq!(big(enumerate(&spec).unwrap().len()), p, "{spec}");
            }
        }
    }
}
