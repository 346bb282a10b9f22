//! Regular elements, idempotents, abundance and inverse-ideal witnesses.

use num_bigint::BigUint;

use crate::counting;
use crate::error::{Error, Result};
use crate::families::{self, Family, FamilySpec};
use crate::generation::{closure_default, Semigroup};
use crate::pt::PartialTransformation;
use crate::report::Report;
use crate::structure::starred::starred_greens;

/// Elements with `a² = a`.
pub fn idempotents(s: &Semigroup) -> Vec<PartialTransformation> {
    s.elements()
        .iter()
        .copied()
        .filter(|a| a.is_idempotent())
        .collect()
}

/// Elements with `aba = a` for some `b` in the semigroup.
pub fn regular_elements(s: &Semigroup) -> Vec<PartialTransformation> {
    let len = s.len() as u32;
    let mut out = Vec::new();
    for a in 0..len {
        let regular = (0..len).any(|b| {
            let ab = s.product(a, b);
            s.product(ab, a) == a
        });
        if regular {
            out.push(*s.element(a));
        }
    }
    out
}

/// The inverse-ideal witness `α'` for an element of the monotone
/// decreasing families: for the partial family, `α'` maps each image point
/// to the least point of its preimage; for the injective family it is the
/// set-theoretic inverse. In both cases `α α' α = α`, `α' α` is the
/// partial identity on the image, and `α α'` is an idempotent of the
/// family — even though `α'` itself usually lies outside it.
pub fn inverse_ideal_witness(
    a: &PartialTransformation,
    family: Family,
) -> Result<PartialTransformation> {
    let n = a.degree() as usize;
    match family {
        Family::PMD => {
            let mut pairs: Vec<(u8, u8)> = Vec::new();
            for block in a.kernel().blocks() {
                let image = a.apply(block[0]).expect("domain point");
                pairs.push((image, block[0]));
            }
            PartialTransformation::from_pairs(n, &pairs)
        }
        Family::IMD => {
            if !a.is_injective() {
                return Err(Error::InvalidParameter(format!(
                    "{a} is not injective"
                )));
            }
            let pairs: Vec<(u8, u8)> = a.pairs().map(|(x, y)| (y, x)).collect();
            PartialTransformation::from_pairs(n, &pairs)
        }
        other => Err(Error::InvalidParameter(format!(
            "no inverse-ideal witness recipe for {}",
            other.name()
        ))),
    }
}

/// Abundance: every `L*`-class and every `R*`-class contains an
/// idempotent; on the partial family each `R*`-class contains exactly one.
/// Also checks the inverse-ideal witness identities for every element.
pub fn verify_abundance(family: Family, n: u8, r: u8) -> Result<Report> {
    if !matches!(family, Family::PMD | Family::IMD) {
        return Err(Error::InvalidParameter(format!(
            "abundance verification covers PMD and IMD, not {}",
            family.name()
        )));
    }
    let spec = FamilySpec::bounded(family, n, r);
    let s = Semigroup::from_family(&spec)?;
    let star = starred_greens(&s);
    let idempotent: Vec<bool> = s.elements().iter().map(|a| a.is_idempotent()).collect();
    let mut report = Report::new();

    let class_ok = |classes: &[Vec<u32>]| -> (bool, Option<String>) {
        for class in classes {
            if !class.iter().any(|&i| idempotent[i as usize]) {
                let repr = s.element(class[0]);
                return (false, Some(format!("class of {repr} has no idempotent")));
            }
        }
        (true, None)
    };
    let (ok, witness) = class_ok(star.l_star.classes());
    report.check("every_l_star_class_contains_an_idempotent", ok, witness);
    let (ok, witness) = class_ok(star.r_star.classes());
    report.check("every_r_star_class_contains_an_idempotent", ok, witness);

    if family == Family::PMD {
        let mut unique = true;
        let mut witness = None;
        for class in star.r_star.classes() {
            let count = class.iter().filter(|&&i| idempotent[i as usize]).count();
            if count != 1 {
                unique = false;
                witness = Some(format!(
                    "class of {} holds {count} idempotents",
                    s.element(class[0])
                ));
                break;
            }
        }
        report.check("unique_idempotent_per_r_star_class", unique, witness);
    }

    let mut witnesses_ok = true;
    let mut bad = None;
    for a in s.elements() {
        let prime = inverse_ideal_witness(a, family)?;
        let sandwich = a.compose(&prime).compose(a);
        let left = a.compose(&prime);
        let right = prime.compose(a);
        let identity_on_image =
            PartialTransformation::identity_on(&a.im(), n as usize)?;
        if sandwich != *a
            || !spec.contains(&left)
            || !spec.contains(&right)
            || right != identity_on_image
            || !left.is_idempotent()
        {
            witnesses_ok = false;
            bad = Some(a.canonical());
            break;
        }
    }
    report.check("inverse_ideal_witnesses_hold", witnesses_ok, bad);
    Ok(report)
}

/// Regularity and idempotent structure: the regular elements are exactly
/// the idempotents, the family is not regular, the idempotent counts match
/// the closed formulas, the order-reversing layer is quasi-idempotent, and
/// the idempotents generate exactly the order-preserving part.
pub fn verify_regularity(family: Family, n: u8, r: u8) -> Result<Report> {
    if !matches!(family, Family::PMD | Family::IMD) {
        return Err(Error::InvalidParameter(format!(
            "regularity verification covers PMD and IMD, not {}",
            family.name()
        )));
    }
    let spec = FamilySpec::bounded(family, n, r);
    let s = Semigroup::from_family(&spec)?;
    let mut report = Report::new();

    let e = idempotents(&s);
    let reg = regular_elements(&s);
    report.check("regular_elements_are_exactly_the_idempotents", e == reg, None);
    report.check(
        "family_contains_non_idempotents",
        e.len() < s.len(),
        Some("every element is idempotent".into()),
    );

    let expected: BigUint = match family {
        Family::PMD => counting::card_e_pmd(n as u64, r as u64),
        _ => (0..=r as u64).map(|k| counting::binomial(n as u64, k)).sum(),
    };
    report.check_eq("idempotent_count_matches_formula", expected, e.len());

    // the reversing layer: quasi-idempotent throughout, idempotent nowhere
    let star_spec = match family {
        Family::PMD => FamilySpec::bounded(Family::PRDStar, n, r),
        _ => FamilySpec::bounded(Family::IRDStar, n, r),
    };
    let layer = families::enumerate(&star_spec)?;
    let mut quasi_ok = true;
    let mut none_idempotent = true;
    let mut witness = None;
    for a in &layer {
        if !a.is_quasi_idempotent() {
            quasi_ok = false;
            witness = Some(a.canonical());
            break;
        }
        if a.is_idempotent() {
            none_idempotent = false;
            witness = Some(a.canonical());
            break;
        }
    }
    report.check(
        "reversing_layer_is_quasi_idempotent",
        quasi_ok,
        witness.clone(),
    );
    report.check(
        "reversing_layer_has_no_idempotents",
        none_idempotent,
        witness,
    );

    // the idempotent closure never reaches the whole family: for the
    // partial family it is exactly the order-preserving decreasing part,
    // for the injective family the partial identities are already closed
    let generated = closure_default(&e)?;
    match family {
        Family::PMD => {
            let preserving = families::enumerate(&FamilySpec::bounded(Family::PC, n, r))?;
            report.check_eq(
                "idempotent_closure_is_the_preserving_part",
                preserving.len(),
                generated.elements.len(),
            );
            if generated.elements != preserving {
                report.check("idempotent_closure_matches_elementwise", false, None);
            }
        }
        _ => {
            report.check(
                "idempotent_closure_is_the_idempotents",
                generated.elements == e,
                None,
            );
        }
    }
    report.check(
        "idempotent_closure_is_proper",
        generated.elements.len() < s.len(),
        None,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> PartialTransformation {
        PartialTransformation::parse(s).unwrap()
    }

    #[test]
    fn witness_recipe_examples() {
        // collapsing map: the witness picks least preimages
        let a = pt("n=4:[3:1,4:1]");
        let w = inverse_ideal_witness(&a, Family::PMD).unwrap();
        assert_eq!(w, pt("n=4:[1:3]"));
        assert_eq!(a.compose(&w).compose(&a), a);

        // injective map: the witness is the inverse
        let b = pt("n=4:[2:2,3:1]");
        let inv = inverse_ideal_witness(&b, Family::IMD).unwrap();
        assert_eq!(inv, pt("n=4:[1:3,2:2]"));
        assert_eq!(
            b.compose(&inv),
            PartialTransformation::identity_on(&[2, 3], 4).unwrap()
        );
        assert_eq!(
            inv.compose(&b),
            PartialTransformation::identity_on(&[1, 2], 4).unwrap()
        );
        assert!(inverse_ideal_witness(&a, Family::IMD).is_err());
    }

    #[test]
    fn abundance_reports_pass() {
        for (family, n, r) in [
            (Family::PMD, 4, 3),
            (Family::PMD, 4, 4),
            (Family::IMD, 4, 2),
        ] {
            let report = verify_abundance(family, n, r).unwrap();
            assert!(
                report.ok(),
                "verify_abundance({family:?}, {n}, {r}): {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn regularity_reports_pass() {
        for (family, n, r) in [
            (Family::PMD, 4, 2),
            (Family::PMD, 3, 3),
            (Family::IMD, 4, 3),
        ] {
            let report = verify_regularity(family, n, r).unwrap();
            assert!(
                report.ok(),
                "verify_regularity({family:?}, {n}, {r}): {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn idempotent_count_example() {
        let s = Semigroup::from_family(&FamilySpec::bounded(Family::PMD, 3, 2)).unwrap();
        assert_eq!(idempotents(&s).len(), 13);
    }
}
