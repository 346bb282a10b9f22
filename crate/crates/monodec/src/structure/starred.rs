//! Starred Green's relations and the composition structure of `D*`.
//!
//! `(a, b) ∈ L*` holds exactly when `a` and `b` have the same right
//! cancellation behaviour: `ax = ay ⇔ bx = by` for all `x, y` in the
//! semigroup with an identity adjoined. This intrinsic test is equivalent
//! to being `L`-related in some oversemigroup, and is decidable here: the
//! class of `a` is determined by the partition of `S¹` induced by
//! `x ↦ ax`. `R*` is dual (left translations), `H* = L* ∧ R*` and `D*` is
//! the join of `L*` and `R*`.
//!
//! An abstract identity is always adjoined, even when the full identity
//! map already belongs to the semigroup; the extra column is constant
//! across elements, so it never distorts the partitions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec};
use crate::generation::Semigroup;
use crate::pt::PartialTransformation;
use crate::report::Report;
use crate::structure::greens::{
    partition_by_domain, partition_by_height, partition_by_image, partition_by_kernel,
    Partition,
};

#[derive(Debug, Clone)]
pub struct StarredRelations {
    pub l_star: Partition,
    pub r_star: Partition,
    pub h_star: Partition,
    pub d_star: Partition,
}

impl StarredRelations {
    pub fn named(&self) -> [(&'static str, &Partition); 4] {
        [
            ("L*", &self.l_star),
            ("R*", &self.r_star),
            ("H*", &self.h_star),
            ("D*", &self.d_star),
        ]
    }
}

/// Normalized fingerprint of the partition of `S¹` induced by one-sided
/// translation by `a`.
fn translation_fingerprint(s: &Semigroup, a: u32, right_translation: bool) -> Vec<u32> {
    let len = s.len() as u32;
    let mut ids: HashMap<u32, u32> = HashMap::new();
    let mut fp = Vec::with_capacity(len as usize + 1);
    // position 0 is the adjoined identity: the translate is a itself
    let push = |value: u32, fp: &mut Vec<u32>, ids: &mut HashMap<u32, u32>| {
        let next = ids.len() as u32;
        fp.push(*ids.entry(value).or_insert(next));
    };
    push(a, &mut fp, &mut ids);
    for x in 0..len {
        let value = if right_translation {
            s.product(a, x)
        } else {
            s.product(x, a)
        };
        push(value, &mut fp, &mut ids);
    }
    fp
}

/// Computes `L*`, `R*`, `H*` and `D*` by the intrinsic cancellation test.
pub fn starred_greens(s: &Semigroup) -> StarredRelations {
    let l_star = Partition::group_by(s.len(), |a| translation_fingerprint(s, a, true));
    let r_star = Partition::group_by(s.len(), |a| translation_fingerprint(s, a, false));
    let h_star = l_star.meet(&r_star);
    let d_star = l_star.join(&r_star);
    StarredRelations {
        l_star,
        r_star,
        h_star,
        d_star,
    }
}

/// Intersection table of `R*`-classes against `L*`-classes, the basic
/// object behind compositions of the two equivalences.
struct ClassIntersections {
    r_classes: usize,
    l_classes: usize,
    hit: Vec<bool>,
}

impl ClassIntersections {
    fn new(star: &StarredRelations) -> Self {
        let r_classes = star.r_star.class_count();
        let l_classes = star.l_star.class_count();
        let mut hit = vec![false; r_classes * l_classes];
        for i in 0..star.r_star.len() as u32 {
            let r = star.r_star.class_of(i) as usize;
            let l = star.l_star.class_of(i) as usize;
            hit[r * l_classes + l] = true;
        }
        ClassIntersections {
            r_classes,
            l_classes,
            hit,
        }
    }

    fn meet(&self, r: u32, l: u32) -> bool {
        self.hit[r as usize * self.l_classes + l as usize]
    }

    /// `(a, c) ∈ L* ∘ R*`: some `b` with `a L* b R* c`.
    fn in_l_then_r(&self, star: &StarredRelations, a: u32, c: u32) -> bool {
        self.meet(star.r_star.class_of(c), star.l_star.class_of(a))
    }

    /// `(a, c) ∈ R* ∘ L*`: some `b` with `a R* b L* c`.
    fn in_r_then_l(&self, star: &StarredRelations, a: u32, c: u32) -> bool {
        self.meet(star.r_star.class_of(a), star.l_star.class_of(c))
    }

    /// `(a, c) ∈ R* ∘ L* ∘ R*`: the rows of the two `R*`-classes share a
    /// common `L*`-class.
    fn in_r_l_r(&self, star: &StarredRelations, a: u32, c: u32) -> bool {
        let ra = star.r_star.class_of(a) as usize;
        let rc = star.r_star.class_of(c) as usize;
        (0..self.l_classes)
            .any(|l| self.hit[ra * self.l_classes + l] && self.hit[rc * self.l_classes + l])
    }

    /// `(a, c) ∈ L* ∘ R* ∘ L*`: the columns of the two `L*`-classes share
    /// a common `R*`-class.
    fn in_l_r_l(&self, star: &StarredRelations, a: u32, c: u32) -> bool {
        let la = star.l_star.class_of(a) as usize;
        let lc = star.l_star.class_of(c) as usize;
        (0..self.r_classes)
            .any(|r| self.hit[r * self.l_classes + la] && self.hit[r * self.l_classes + lc])
    }
}

/// Checks the starred characterizations on one family instance:
/// `L*` is image equality, `R*` kernel equality (domain equality on the
/// injective family), `H*` their meet, `D*` height equality, the triple
/// compositions collapse to `D*`, and on the partial family the double
/// compositions are strictly smaller and differ from each other, witnessed
/// by the three partial identities on `{2,3}`, `{1,n}` and `{1,2}`.
pub fn verify_starred(family: Family, n: u8, r: u8) -> Result<Report> {
    if !matches!(family, Family::PMD | Family::IMD) {
        return Err(Error::InvalidParameter(format!(
            "starred verification covers PMD and IMD, not {}",
            family.name()
        )));
    }
    let s = Semigroup::from_family(&FamilySpec::bounded(family, n, r))?;
    let star = starred_greens(&s);
    let mut report = Report::new();

    report.check(
        "l_star_is_image_equality",
        star.l_star == partition_by_image(&s),
        None,
    );
    match family {
        Family::PMD => {
            report.check(
                "r_star_is_kernel_equality",
                star.r_star == partition_by_kernel(&s),
                None,
            );
        }
        _ => {
            report.check(
                "r_star_is_domain_equality",
                star.r_star == partition_by_domain(&s),
                None,
            );
        }
    }
    report.check(
        "h_star_is_image_and_kernel_equality",
        star.h_star == partition_by_image(&s).meet(&partition_by_kernel(&s)),
        None,
    );
    report.check(
        "d_star_is_height_equality",
        star.d_star == partition_by_height(&s),
        None,
    );

    let inter = ClassIntersections::new(&star);
    let len = s.len() as u32;
    let mut rlr_ok = true;
    let mut lrl_ok = true;
    let mut lr_strict = false;
    let mut rl_strict = false;
    let mut lr_ne_rl = false;
    for a in 0..len {
        for c in 0..len {
            let in_d = star.d_star.same(a, c);
            let rlr = inter.in_r_l_r(&star, a, c);
            let lrl = inter.in_l_r_l(&star, a, c);
            if rlr != in_d {
                rlr_ok = false;
            }
            if lrl != in_d {
                lrl_ok = false;
            }
            let lr = inter.in_l_then_r(&star, a, c);
            let rl = inter.in_r_then_l(&star, a, c);
            if in_d && !lr {
                lr_strict = true;
            }
            if in_d && !rl {
                rl_strict = true;
            }
            if lr != rl {
                lr_ne_rl = true;
            }
        }
    }
    report.check("d_star_equals_r_l_r_composition", rlr_ok, None);
    report.check("d_star_equals_l_r_l_composition", lrl_ok, None);

    if family == Family::PMD {
        report.check(
            "l_r_composition_strictly_below_d_star",
            lr_strict,
            Some("L* ∘ R* = D*".into()),
        );
        report.check(
            "r_l_composition_strictly_below_d_star",
            rl_strict,
            Some("R* ∘ L* = D*".into()),
        );
        report.check(
            "l_r_and_r_l_compositions_differ",
            lr_ne_rl,
            Some("L* ∘ R* = R* ∘ L*".into()),
        );

        // explicit witnesses: partial identities on {2,3}, {1,n}, {1,2}
        let alpha = PartialTransformation::identity_on(&[2, 3], n as usize)?;
        let beta = PartialTransformation::identity_on(&[1, n], n as usize)?;
        let gamma = PartialTransformation::identity_on(&[1, 2], n as usize)?;
        let ia = s.index_of(&alpha).ok_or(Error::NotMember(alpha.canonical()))?;
        let ib = s.index_of(&beta).ok_or(Error::NotMember(beta.canonical()))?;
        let ig = s.index_of(&gamma).ok_or(Error::NotMember(gamma.canonical()))?;
        report.check(
            "witness_alpha_beta_in_d_star",
            star.d_star.same(ia, ib),
            None,
        );
        report.check(
            "witness_alpha_beta_outside_l_r",
            !inter.in_l_then_r(&star, ia, ib),
            Some(format!("({alpha}, {beta}) ∈ L* ∘ R*")),
        );
        report.check(
            "witness_gamma_beta_outside_r_l",
            !inter.in_r_then_l(&star, ig, ib),
            Some(format!("({gamma}, {beta}) ∈ R* ∘ L*")),
        );
        report.check(
            "witness_alpha_gamma_in_r_l_but_not_l_r",
            inter.in_r_then_l(&star, ia, ig) && !inter.in_l_then_r(&star, ia, ig),
            Some(format!("({alpha}, {gamma}) composition witness failed")),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starred_characterizations_hold_on_small_instances() {
        for (family, n, r) in [
            (Family::PMD, 4, 2),
            (Family::PMD, 3, 2),
            (Family::IMD, 4, 2),
            (Family::IMD, 4, 4),
        ] {
            let report = verify_starred(family, n, r).unwrap();
            assert!(
                report.ok(),
                "verify_starred({family:?}, {n}, {r}): {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn starred_relations_refine_as_expected() {
        let s = Semigroup::from_family(&FamilySpec::bounded(Family::PMD, 4, 2)).unwrap();
        let star = starred_greens(&s);
        // H* refines both, D* coarsens both
        for i in 0..s.len() as u32 {
            for j in 0..s.len() as u32 {
                if star.h_star.same(i, j) {
                    assert!(star.l_star.same(i, j) && star.r_star.same(i, j));
                }
                if star.l_star.same(i, j) || star.r_star.same(i, j) {
                    assert!(star.d_star.same(i, j));
                }
            }
        }
    }

    #[test]
    fn classical_l_refines_starred_l() {
        let s = Semigroup::from_family(&FamilySpec::bounded(Family::PMD, 4, 3)).unwrap();
        let star = starred_greens(&s);
        let g = crate::structure::greens::greens(&s);
        for class in g.l.classes() {
            for w in class.windows(2) {
                assert!(star.l_star.same(w[0], w[1]));
            }
        }
        for class in g.r.classes() {
            for w in class.windows(2) {
                assert!(star.r_star.same(w[0], w[1]));
            }
        }
    }
}
