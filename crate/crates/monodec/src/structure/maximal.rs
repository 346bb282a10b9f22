//! Maximal subsemigroups of the monotone decreasing families.
//!
//! For the bounded partial family the maximal subsemigroups arise by
//! removing a single top-layer idempotent or the whole extension class
//! `[α]` of one reversing generator; for the injective family by removing
//! a single element of the unique minimal generating set. The unbounded
//! monoids reduce to the `(n, n-1)` case with the identity adjoined.
//!
//! An independent exhaustive search is provided: starting from each
//! element of a generating set, it enumerates all maximal
//! product-closed subsets avoiding that element (branching over violating
//! product pairs), then keeps those passing a brute-force maximality
//! test. Every maximal subsemigroup misses at least one generator, so the
//! search is complete.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;

use crate::counting;
use crate::error::{Error, Result};
use crate::families::{self, Family, FamilySpec};
use crate::generation::{
    idempotent_generators, injective_generators, rank_candidate, reversing_generators,
    Semigroup,
};
use crate::pt::{sort_canonical, PartialTransformation};
use crate::report::Report;

/// What was removed from the family to form one maximal subsemigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    RemovedIdempotent,
    RemovedBracketClass,
    RemovedUndecomposable,
    Truncation,
    TruncationPlusIdentity,
}

/// The extension class `[α]` of a reversing generator: all members of the
/// family restricting to `α` on its domain. Every member extends `α` by
/// points above `max(dom α)`, all sent to `min(im α)`.
#[derive(Debug, Clone)]
pub struct BracketClass {
    pub anchor: PartialTransformation,
    pub members: Vec<PartialTransformation>,
}

pub fn bracket_class(alpha: &PartialTransformation, r: u8) -> Result<BracketClass> {
    let n = alpha.degree();
    let named = reversing_generators(n, r)?;
    if !named.elements().contains(alpha) {
        return Err(Error::InvalidParameter(format!(
            "{alpha} is not one of the reversing generators"
        )));
    }
    let top = alpha.max_dom().expect("nonempty domain");
    let low = alpha.min_im().expect("nonempty image");
    let base: Vec<(u8, u8)> = alpha.pairs().collect();
    let extra: Vec<u8> = (top + 1..=n).collect();
    let mut members = Vec::new();
    for mask in 0u32..(1 << extra.len()) {
        let mut pairs = base.clone();
        for (i, &x) in extra.iter().enumerate() {
            if mask & (1 << i) != 0 {
                pairs.push((x, low));
            }
        }
        members.push(PartialTransformation::from_pairs(n as usize, &pairs)?);
    }
    sort_canonical(&mut members);
    Ok(BracketClass {
        anchor: *alpha,
        members,
    })
}

/// One catalog entry: the removed witness set and the full element set of
/// the subsemigroup.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub kind: WitnessKind,
    pub witness: Vec<PartialTransformation>,
    pub elements: Vec<PartialTransformation>,
}

#[derive(Debug, Clone)]
pub struct MaximalSubsemigroupCatalog {
    pub family: FamilySpec,
    pub entries: Vec<CatalogEntry>,
}

impl MaximalSubsemigroupCatalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn remove_all(
    family: &[PartialTransformation],
    removed: &[PartialTransformation],
) -> Vec<PartialTransformation> {
    family
        .iter()
        .copied()
        .filter(|a| !removed.contains(a))
        .collect()
}

/// The classified maximal subsemigroups of `PMD(n, r)` or `IMD(n, r)`.
pub fn maximal_subsemigroups(spec: &FamilySpec) -> Result<MaximalSubsemigroupCatalog> {
    spec.validate()?;
    let n = spec.degree;
    let r = spec.bound();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "maximal subsemigroup classification needs n >= 3, got n={n}"
        )));
    }
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "maximal subsemigroup classification needs r >= 2, got r={r}"
        )));
    }
    if !matches!(spec.family, Family::PMD | Family::IMD) {
        return Err(Error::InvalidParameter(format!(
            "maximal subsemigroups are classified for PMD and IMD, not {}",
            spec.family.name()
        )));
    }
    let family_elems = families::enumerate(spec)?;

    if r == n {
        // the full monoid: the truncation, and every truncated maximal
        // subsemigroup with the identity put back
        let inner = maximal_subsemigroups(&FamilySpec::bounded(spec.family, n, n - 1))?;
        let identity = PartialTransformation::identity(n as usize);
        let mut entries = vec![CatalogEntry {
            kind: WitnessKind::Truncation,
            witness: vec![identity],
            elements: remove_all(&family_elems, &[identity]),
        }];
        for entry in inner.entries {
            let mut elements = entry.elements;
            elements.push(identity);
            sort_canonical(&mut elements);
            entries.push(CatalogEntry {
                kind: WitnessKind::TruncationPlusIdentity,
                witness: entry.witness,
                elements,
            });
        }
        return Ok(MaximalSubsemigroupCatalog {
            family: *spec,
            entries,
        });
    }

    let mut entries = Vec::new();
    match spec.family {
        Family::PMD => {
            for eps in idempotent_generators(n, r)?.elements() {
                entries.push(CatalogEntry {
                    kind: WitnessKind::RemovedIdempotent,
                    witness: vec![*eps],
                    elements: remove_all(&family_elems, &[*eps]),
                });
            }
            for alpha in reversing_generators(n, r)?.elements() {
                let class = bracket_class(alpha, r)?;
                entries.push(CatalogEntry {
                    kind: WitnessKind::RemovedBracketClass,
                    witness: class.members.clone(),
                    elements: remove_all(&family_elems, &class.members),
                });
            }
        }
        Family::IMD => {
            let gens = injective_generators(n, r)?.union(&reversing_generators(n, r)?);
            for eta in gens.elements() {
                entries.push(CatalogEntry {
                    kind: WitnessKind::RemovedUndecomposable,
                    witness: vec![*eta],
                    elements: remove_all(&family_elems, &[*eta]),
                });
            }
        }
        _ => unreachable!(),
    }
    Ok(MaximalSubsemigroupCatalog {
        family: *spec,
        entries,
    })
}

/// Brute-force maximality: the candidate must be properly closed and
/// adjoining any excluded element must regenerate the whole semigroup.
pub fn is_maximal_subsemigroup(s: &Semigroup, candidate: &[u32]) -> bool {
    let len = s.len();
    if candidate.is_empty() || candidate.len() >= len {
        return false;
    }
    let mut member = vec![false; len];
    for &i in candidate {
        member[i as usize] = true;
    }
    for &i in candidate {
        for &j in candidate {
            if !member[s.product(i, j) as usize] {
                return false;
            }
        }
    }
    for x in 0..len as u32 {
        if member[x as usize] {
            continue;
        }
        let mut seed: Vec<u32> = candidate.to_vec();
        seed.push(x);
        if s.closure_of_indices(&seed).len() != len {
            return false;
        }
    }
    true
}

/// Element-level wrapper around [`is_maximal_subsemigroup`].
pub fn verify_maximal(spec: &FamilySpec, candidate: &[PartialTransformation]) -> Result<bool> {
    let s = Semigroup::from_family(spec)?;
    let mut indices = Vec::with_capacity(candidate.len());
    for a in candidate {
        match s.index_of(a) {
            Some(i) => indices.push(i),
            None => return Err(Error::NotMember(a.canonical())),
        }
    }
    Ok(is_maximal_subsemigroup(&s, &indices))
}

/// All maximal subsemigroups, found independently of the classification:
/// for each seed generator, every maximal product-closed subset avoiding
/// it is enumerated by branching over violating pairs, and the survivors
/// of a brute-force maximality test are collected.
pub fn exhaustive_maximal_subsemigroups(
    s: &Semigroup,
    seeds: &[u32],
) -> Result<Vec<Vec<u32>>> {
    const NODE_CAP: usize = 500_000;
    let len = s.len();
    // product -> all factor pairs
    let mut pairs: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    for i in 0..len as u32 {
        for j in 0..len as u32 {
            pairs.entry(s.product(i, j)).or_default().push((i, j));
        }
    }
    let empty: Vec<(u32, u32)> = Vec::new();
    let mut candidates: HashSet<Vec<u32>> = HashSet::new();
    let mut visited: HashSet<BTreeSet<u32>> = HashSet::new();
    for &seed in seeds {
        let mut stack: Vec<BTreeSet<u32>> = vec![BTreeSet::from([seed])];
        while let Some(excluded) = stack.pop() {
            if visited.contains(&excluded) {
                continue;
            }
            if visited.len() >= NODE_CAP {
                return Err(Error::BudgetExceeded {
                    budget: NODE_CAP,
                    predicted: None,
                    reached: visited.len(),
                });
            }
            visited.insert(excluded.clone());
            let violation = excluded.iter().find_map(|e| {
                pairs
                    .get(e)
                    .unwrap_or(&empty)
                    .iter()
                    .find(|(i, j)| !excluded.contains(i) && !excluded.contains(j))
                    .copied()
            });
            match violation {
                Some((i, j)) => {
                    let mut with_i = excluded.clone();
                    with_i.insert(i);
                    stack.push(with_i);
                    let mut with_j = excluded;
                    with_j.insert(j);
                    stack.push(with_j);
                }
                None => {
                    let rest: Vec<u32> =
                        (0..len as u32).filter(|i| !excluded.contains(i)).collect();
                    candidates.insert(rest);
                }
            }
        }
    }
    let mut out: Vec<Vec<u32>> = candidates
        .into_iter()
        .filter(|c| is_maximal_subsemigroup(s, c))
        .collect();
    out.sort();
    Ok(out)
}

/// Verifies one family's catalog: entry count, maximality of every entry,
/// the generation property of extension classes over the preserving part,
/// and (when `exhaustive` is set) agreement with the independent search.
pub fn verify_maximal_catalog(spec: &FamilySpec, exhaustive: bool) -> Result<Report> {
    let n = spec.degree;
    let r = spec.bound();
    let mut report = Report::new();
    let catalog = maximal_subsemigroups(spec)?;
    let expected_count: BigUint = match (spec.family, r == n) {
        (Family::PMD, false) => {
            counting::c_table(n as u64, r as u64) + BigUint::from(n as u64 - 2)
        }
        (Family::IMD, false) => {
            counting::binomial(n as u64, r as u64)
                + BigUint::from(r as u64) * counting::binomial(n as u64 - 1, r as u64)
                + BigUint::from(n as u64 - 2)
        }
        (Family::PMD, true) => {
            BigUint::from(1u32)
                + counting::c_table(n as u64, n as u64 - 1)
                + BigUint::from(n as u64 - 2)
        }
        (Family::IMD, true) => {
            BigUint::from(1u32)
                + counting::binomial(n as u64, n as u64 - 1)
                + BigUint::from(n as u64 - 1) * counting::binomial(n as u64 - 1, n as u64 - 1)
                + BigUint::from(n as u64 - 2)
        }
        _ => unreachable!(),
    };
    report.check_eq("catalog_entry_count", expected_count, catalog.len());

    let s = Semigroup::from_family(spec)?;
    let mut all_maximal = true;
    let mut witness = None;
    for entry in &catalog.entries {
        let mut indices = Vec::with_capacity(entry.elements.len());
        for a in &entry.elements {
            indices.push(s.index_of(a).ok_or(Error::NotMember(a.canonical()))?);
        }
        if !is_maximal_subsemigroup(&s, &indices) {
            all_maximal = false;
            witness = Some(format!(
                "{:?} removing {}",
                entry.kind,
                entry.witness[0].canonical()
            ));
            break;
        }
    }
    report.check("every_catalog_entry_is_maximal", all_maximal, witness);

    // extension classes regenerate from the preserving part plus any member
    if spec.family == Family::PMD && r < n {
        let pc = families::enumerate(&FamilySpec::bounded(Family::PC, n, r))?;
        let pc_indices: Vec<u32> = pc
            .iter()
            .map(|a| s.index_of(a).expect("preserving part inside family"))
            .collect();
        let mut ok = true;
        let mut bad = None;
        'outer: for alpha in reversing_generators(n, r)?.elements() {
            let class = bracket_class(alpha, r)?;
            for beta in &class.members {
                let mut seed = pc_indices.clone();
                seed.push(s.index_of(beta).expect("member of family"));
                let generated = s.closure_of_indices(&seed);
                for member in &class.members {
                    let idx = s.index_of(member).expect("member of family");
                    if generated.binary_search(&idx).is_err() {
                        ok = false;
                        bad = Some(format!("[{alpha}] not inside <PC ∪ {{{beta}}}>"));
                        break 'outer;
                    }
                }
            }
        }
        report.check("extension_class_generated_from_any_member", ok, bad);
    }

    if exhaustive {
        let candidate = rank_candidate(spec)?;
        let seeds: Vec<u32> = candidate
            .elements()
            .iter()
            .map(|a| s.index_of(a).expect("generator inside family"))
            .collect();
        let found = exhaustive_maximal_subsemigroups(&s, &seeds)?;
        let mut classified: Vec<Vec<u32>> = catalog
            .entries
            .iter()
            .map(|entry| {
                let mut v: Vec<u32> = entry
                    .elements
                    .iter()
                    .map(|a| s.index_of(a).expect("member"))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        classified.sort();
        report.check_eq("exhaustive_search_count", classified.len(), found.len());
        report.check(
            "exhaustive_search_matches_classification",
            classified == found,
            Some("search found subsemigroups outside the classification".into()),
        );
    } else {
        report.skip("exhaustive_search_matches_classification", "not requested");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::gamma;

    fn pt(s: &str) -> PartialTransformation {
        PartialTransformation::parse(s).unwrap()
    }

    #[test]
    fn bracket_class_examples() {
        // gamma_2 at degree 4 extends by sending 4 to 1
        let g2 = gamma(4, 2, 2).unwrap();
        let class = bracket_class(&g2, 2).unwrap();
        // canonical text order puts the longer extension first
        assert_eq!(class.members, vec![pt("n=4:[2:2,3:1,4:1]"), pt("n=4:[2:2,3:1]")]);
        for member in &class.members {
            assert!(member.is_order_reversing());
        }
        // a generator whose domain reaches n sits alone in its class
        let l3 = crate::generation::lambda(4, 2, 3).unwrap();
        let class = bracket_class(&l3, 2).unwrap();
        assert_eq!(class.members, vec![l3]);
        assert!(bracket_class(&pt("n=4:[1:1]"), 2).is_err());
    }

    #[test]
    fn bracket_class_matches_restriction_filter() {
        let spec = FamilySpec::bounded(Family::PMD, 5, 2);
        let family = families::enumerate(&spec).unwrap();
        for alpha in reversing_generators(5, 2).unwrap().elements() {
            let class = bracket_class(alpha, 2).unwrap();
            let dom = alpha.dom();
            let filtered: Vec<PartialTransformation> = family
                .iter()
                .copied()
                .filter(|b| b.restrict(&dom).unwrap() == *alpha)
                .collect();
            assert_eq!(class.members, filtered, "[{alpha}]");
        }
    }

    #[test]
    fn catalog_counts() {
        let c = maximal_subsemigroups(&FamilySpec::bounded(Family::PMD, 4, 2)).unwrap();
        assert_eq!(c.len(), 19);
        let c = maximal_subsemigroups(&FamilySpec::bounded(Family::IMD, 4, 2)).unwrap();
        assert_eq!(c.len(), 14);
        let c = maximal_subsemigroups(&FamilySpec::bounded(Family::PMD, 4, 4)).unwrap();
        assert_eq!(c.len(), 10);
    }

    #[test]
    fn classified_entries_are_maximal() {
        let spec = FamilySpec::bounded(Family::PMD, 4, 2);
        let catalog = maximal_subsemigroups(&spec).unwrap();
        for entry in catalog.entries.iter().take(3) {
            assert!(verify_maximal(&spec, &entry.elements).unwrap());
        }
        // removing a decomposable non-generator is not maximal (it is not
        // even closed, or it regenerates)
        let family = families::enumerate(&spec).unwrap();
        let extension = pt("n=4:[2:2,3:1,4:1]");
        let candidate: Vec<PartialTransformation> = family
            .iter()
            .copied()
            .filter(|a| *a != extension)
            .collect();
        assert!(!verify_maximal(&spec, &candidate).unwrap());
    }

    #[test]
    fn exhaustive_search_agrees_at_degree_three() {
        for family in [Family::PMD, Family::IMD] {
            let spec = FamilySpec::bounded(family, 3, 2);
            let report = verify_maximal_catalog(&spec, true).unwrap();
            assert!(
                report.ok(),
                "{family:?}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }
}
