//! Green's relations computed from principal ideals.
//!
//! The classes of `R`, `L` and `J` are the strongly connected components of
//! the one-step multiplication graphs: `a → a·x` for `R`, `a → x·a` for
//! `L`, and both edge kinds for `J` (paths of one-sided steps compose to
//! exactly the two-sided principal-ideal preorder). `H` is the meet of `R`
//! and `L`, `D` their join; `D = J` is asserted rather than assumed.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::Result;
use crate::families::{Family, FamilySpec};
use crate::generation::Semigroup;
use crate::report::Report;

/// A partition of semigroup element indices, stored canonically: every
/// class sorted, classes ordered by their least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
}

impl Partition {
    fn from_class_ids(raw: &[u32]) -> Partition {
        let mut by_id: HashMap<u32, Vec<u32>> = HashMap::new();
        for (i, &c) in raw.iter().enumerate() {
            by_id.entry(c).or_default().push(i as u32);
        }
        let mut classes: Vec<Vec<u32>> = by_id.into_values().collect();
        for class in &mut classes {
            class.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        let mut class_of = vec![0u32; raw.len()];
        for (id, class) in classes.iter().enumerate() {
            for &i in class {
                class_of[i as usize] = id as u32;
            }
        }
        Partition { class_of, classes }
    }

    /// Groups elements by an arbitrary hashable key.
    pub fn group_by<K: Hash + Eq>(len: usize, mut key: impl FnMut(u32) -> K) -> Partition {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut raw = vec![0u32; len];
        for i in 0..len as u32 {
            let k = key(i);
            let next = ids.len() as u32;
            let id = *ids.entry(k).or_insert(next);
            raw[i as usize] = id;
        }
        Partition::from_class_ids(&raw)
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_of(&self, i: u32) -> u32 {
        self.class_of[i as usize]
    }

    pub fn same(&self, i: u32, j: u32) -> bool {
        self.class_of[i as usize] == self.class_of[j as usize]
    }

    /// Equality relation: every class a singleton.
    pub fn is_equality(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    /// Meet of two partitions (classes are pairwise intersections).
    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::group_by(self.len(), |i| {
            (self.class_of[i as usize], other.class_of[i as usize])
        })
    }

    /// Join: finest partition in which both argument partitions collapse.
    pub fn join(&self, other: &Partition) -> Partition {
        let len = self.len();
        let mut parent: Vec<u32> = (0..len as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for part in [self, other] {
            for class in &part.classes {
                for w in class.windows(2) {
                    let a = find(&mut parent, w[0]);
                    let b = find(&mut parent, w[1]);
                    if a != b {
                        parent[a as usize] = b;
                    }
                }
            }
        }
        let raw: Vec<u32> = (0..len as u32).map(|i| find(&mut parent, i)).collect();
        Partition::from_class_ids(&raw)
    }
}

/// Deduplicated successor lists for the one-step multiplication graphs.
fn successor_graph(s: &Semigroup, left: bool, right: bool) -> Vec<Vec<u32>> {
    let len = s.len();
    let mut stamp = vec![u32::MAX; len];
    let mut succ = Vec::with_capacity(len);
    for a in 0..len as u32 {
        let mut list = Vec::new();
        for x in 0..len as u32 {
            if right {
                let p = s.product(a, x);
                if stamp[p as usize] != a {
                    stamp[p as usize] = a;
                    list.push(p);
                }
            }
            if left {
                let p = s.product(x, a);
                if stamp[p as usize] != a {
                    stamp[p as usize] = a;
                    list.push(p);
                }
            }
        }
        succ.push(list);
    }
    succ
}

/// Strongly connected components, iteratively (Tarjan).
fn scc_partition(succ: &[Vec<u32>]) -> Partition {
    let n = succ.len();
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut comp_count = 0u32;
    let mut call: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child < succ[v as usize].len() {
                let w = succ[v as usize][*child];
                *child += 1;
                if index[w as usize] == UNSET {
                    index[w as usize] = next_index;
                    lowlink[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent as usize] =
                        lowlink[parent as usize].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w as usize] = false;
                        comp[w as usize] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    Partition::from_class_ids(&comp)
}

/// The classical Green's relations of a finite semigroup.
#[derive(Debug, Clone)]
pub struct GreensRelations {
    pub r: Partition,
    pub l: Partition,
    pub h: Partition,
    pub d: Partition,
    pub j: Partition,
}

impl GreensRelations {
    pub fn named(&self) -> [(&'static str, &Partition); 5] {
        [
            ("R", &self.r),
            ("L", &self.l),
            ("H", &self.h),
            ("D", &self.d),
            ("J", &self.j),
        ]
    }
}

/// Computes `R`, `L`, `H`, `D` and `J` from first principles.
///
/// Panics if `D` and `J` disagree, which cannot happen on a finite
/// semigroup.
pub fn greens(s: &Semigroup) -> GreensRelations {
    let r = scc_partition(&successor_graph(s, false, true));
    let l = scc_partition(&successor_graph(s, true, false));
    let j = scc_partition(&successor_graph(s, true, true));
    let h = r.meet(&l);
    let d = r.join(&l);
    assert_eq!(d, j, "D and J must coincide on a finite semigroup");
    GreensRelations { r, l, h, d, j }
}

// ---------------------------------------------------------------------------
// Characterization partitions
// ---------------------------------------------------------------------------

pub fn partition_by_image(s: &Semigroup) -> Partition {
    Partition::group_by(s.len(), |i| s.element(i).im())
}

pub fn partition_by_kernel(s: &Semigroup) -> Partition {
    Partition::group_by(s.len(), |i| s.element(i).kernel())
}

pub fn partition_by_domain(s: &Semigroup) -> Partition {
    Partition::group_by(s.len(), |i| s.element(i).dom())
}

pub fn partition_by_height(s: &Semigroup) -> Partition {
    Partition::group_by(s.len(), |i| s.element(i).height())
}

/// Fingerprint for the `L`-characterization on decreasing families: the
/// image together with the least preimage of every image point.
pub fn partition_by_image_and_block_minima(s: &Semigroup) -> Partition {
    Partition::group_by(s.len(), |i| {
        let a = s.element(i);
        let mut key: Vec<(u8, u8)> = a
            .kernel()
            .blocks()
            .iter()
            .map(|block| (a.apply(block[0]).expect("domain point"), block[0]))
            .collect();
        key.sort_unstable();
        key
    })
}

// ---------------------------------------------------------------------------
// Family-level verification
// ---------------------------------------------------------------------------

fn family_semigroup(family: Family, n: u8, r: u8) -> Result<Semigroup> {
    Semigroup::from_family(&FamilySpec::bounded(family, n, r))
}

/// The monotone decreasing partial family is `R`-trivial, `H = R`, and two
/// elements are `L`-related exactly when they share image and block
/// minima; `L = D = J`.
pub fn verify_pmd_greens(n: u8, r: u8) -> Result<Report> {
    let s = family_semigroup(Family::PMD, n, r)?;
    let g = greens(&s);
    let mut report = Report::new();
    report.check("r_trivial", g.r.is_equality(), None);
    report.check("h_equals_r", g.h == g.r, None);
    let criterion = partition_by_image_and_block_minima(&s);
    report.check("l_matches_image_and_block_minima", g.l == criterion, None);
    report.check("l_equals_d_equals_j", g.l == g.d && g.d == g.j, None);

    // L-related elements are both order-preserving or both order-reversing,
    // and L-related elements with equal domains coincide.
    let mut orientation_ok = true;
    let mut equal_dom_ok = true;
    let mut witness = None;
    'outer: for class in g.l.classes() {
        for (pos, &i) in class.iter().enumerate() {
            for &jdx in &class[pos + 1..] {
                let a = s.element(i);
                let b = s.element(jdx);
                let a_rev = a.is_order_reversing() && a.height() >= 2;
                let b_rev = b.is_order_reversing() && b.height() >= 2;
                if a_rev != b_rev {
                    orientation_ok = false;
                    witness = Some(format!("{a} vs {b}"));
                    break 'outer;
                }
                if a.dom() == b.dom() && a != b {
                    equal_dom_ok = false;
                    witness = Some(format!("{a} vs {b}"));
                    break 'outer;
                }
            }
        }
    }
    report.check("l_classes_respect_orientation", orientation_ok, witness.clone());
    report.check("l_related_with_equal_domain_are_equal", equal_dom_ok, witness);
    Ok(report)
}

/// The injective family is `J`-trivial: all five relations are equality.
pub fn verify_imd_greens(n: u8, r: u8) -> Result<Report> {
    let s = family_semigroup(Family::IMD, n, r)?;
    let g = greens(&s);
    let mut report = Report::new();
    report.check("j_trivial", g.j.is_equality(), None);
    let all_equality = g.r.is_equality()
        && g.l.is_equality()
        && g.h.is_equality()
        && g.d.is_equality()
        && g.j.is_equality();
    report.check("all_five_relations_are_equality", all_equality, None);
    Ok(report)
}

/// The decreasing partial family (not necessarily monotone) satisfies the
/// same `R`-triviality and `L`-criterion; checked as an imported fixture
/// for `2 <= r <= n-1`.
pub fn verify_pd_greens(n: u8, r: u8) -> Result<Report> {
    let s = family_semigroup(Family::PD, n, r)?;
    let g = greens(&s);
    let mut report = Report::new();
    report.check("r_trivial", g.r.is_equality(), None);
    report.check("h_equals_r", g.h == g.r, None);
    let criterion = partition_by_image_and_block_minima(&s);
    report.check("l_matches_image_and_block_minima", g.l == criterion, None);
    report.check("l_equals_d_equals_j", g.l == g.d && g.d == g.j, None);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_meet_join() {
        let a = Partition::group_by(6, |i| i / 2); // {01}{23}{45}
        let b = Partition::group_by(6, |i| i / 3); // {012}{345}
        let meet = a.meet(&b);
        assert_eq!(meet.class_count(), 4); // {01}{2}{3}{45}
        let join = a.join(&b);
        assert_eq!(join.class_count(), 1);
        assert!(Partition::group_by(4, |i| i).is_equality());
    }

    #[test]
    fn pmd_is_r_trivial_and_l_matches_criterion() {
        let report = verify_pmd_greens(4, 3).unwrap();
        assert!(report.ok(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn imd_is_j_trivial() {
        let report = verify_imd_greens(4, 3).unwrap();
        assert!(report.ok(), "{:?}", report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pd_greens_characterization() {
        for (n, r) in [(3, 2), (4, 3)] {
            let report = verify_pd_greens(n, r).unwrap();
            assert!(report.ok(), "{:?}", report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn greens_on_a_small_group_like_monoid() {
        // the full transformation-like sanity case: partial identities only
        let mut elems = Vec::new();
        for mask in 0u32..(1 << 3) {
            let points: Vec<u8> = (1..=3).filter(|x| mask & (1 << (x - 1)) != 0).collect();
            elems.push(
                crate::pt::PartialTransformation::identity_on(&points, 3).unwrap(),
            );
        }
        let s = Semigroup::new("partial identities", elems).unwrap();
        let g = greens(&s);
        // commutative idempotent monoid: all relations are equality
        assert!(g.r.is_equality());
        assert!(g.l.is_equality());
        assert!(g.j.is_equality());
    }
}
