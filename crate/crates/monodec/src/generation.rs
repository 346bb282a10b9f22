//! Generating sets, semigroup closure and rank verification.
//!
//! The canonical generators of the order-reversing part are the reflections
//! anchored at a fixed point `s`: the map sending `s, s+1, …` to
//! `s, s-1, …`. Three named slices of these (written `γ_s`, `δ_s`, `λ_s`
//! below, following the usual convention for this construction) together
//! form a set of size `n - 2` that, on top of a generating set of the
//! order-preserving decreasing part, generates the whole monotone
//! decreasing family.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::counting;
use crate::error::{Error, Result};
use crate::families::{self, Family, FamilySpec, LayerKind, LayerSpec};
use crate::pt::{sort_canonical, PartialTransformation};
use crate::report::Report;

/// Largest element count for which a full product table is built.
pub const MAX_TABLE_ELEMENTS: usize = 4096;

/// Default element budget for closures.
pub const DEFAULT_CLOSURE_BUDGET: usize = 1_000_000;

// ---------------------------------------------------------------------------
// Named generators
// ---------------------------------------------------------------------------

/// `min(r, ⌊(n+1)/2⌋)`: the largest image size an order-reversing
/// decreasing map of the `(n, r)`-bounded family can have.
pub fn r_hat(n: u8, r: u8) -> Result<u8> {
    if !(2 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "r_hat(n, r) needs 2 <= r <= n, got n={n}, r={r}"
        )));
    }
    Ok(r.min((n + 1) / 2))
}

/// The reflection `γ_{k,s}` with domain `[s, s+k-1]` sending `s+j ↦ s-j`.
pub fn reflection(n: u8, k: u8, s: u8) -> Result<PartialTransformation> {
    if !(2 <= k && k <= s && s as usize + k as usize - 1 <= n as usize) {
        return Err(Error::InvalidParameter(format!(
            "reflection needs 2 <= k <= s and s + k - 1 <= n, got n={n}, k={k}, s={s}"
        )));
    }
    let pairs: Vec<(u8, u8)> = (0..k).map(|j| (s + j, s - j)).collect();
    PartialTransformation::from_pairs(n as usize, &pairs)
}

/// `γ_s`: the full reflection `[s, 2s-1] → [1, s]`, for `2 <= s <= r̂`.
pub fn gamma(n: u8, r: u8, s: u8) -> Result<PartialTransformation> {
    let rh = r_hat(n, r)?;
    if !(2 <= s && s <= rh) {
        return Err(Error::InvalidParameter(format!(
            "gamma is defined for 2 <= s <= {rh}, got s={s}"
        )));
    }
    reflection(n, s, s)
}

/// `δ_s`: the width-`r̂` reflection at `s`, for `r̂+1 <= s <= n-r̂`.
pub fn delta(n: u8, r: u8, s: u8) -> Result<PartialTransformation> {
    let rh = r_hat(n, r)?;
    if !(rh + 1 <= s && s <= n - rh) {
        return Err(Error::InvalidParameter(format!(
            "delta is defined for {} <= s <= {}, got s={s}",
            rh + 1,
            n - rh
        )));
    }
    reflection(n, rh, s)
}

/// `λ_s`: the reflection with domain `[s, n]`, for `n-r̂+1 <= s <= n-1`.
pub fn lambda(n: u8, r: u8, s: u8) -> Result<PartialTransformation> {
    let rh = r_hat(n, r)?;
    if !(n - rh + 1 <= s && s <= n - 1) {
        return Err(Error::InvalidParameter(format!(
            "lambda is defined for {} <= s <= {}, got s={s}",
            n - rh + 1,
            n - 1
        )));
    }
    reflection(n, n - s + 1, s)
}

/// A labelled set of generators of a common degree.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    degree: u8,
    elements: Vec<PartialTransformation>,
    label: String,
}

impl GeneratingSet {
    pub fn new(
        degree: u8,
        mut elements: Vec<PartialTransformation>,
        label: impl Into<String>,
    ) -> Self {
        assert!(elements.iter().all(|a| a.degree() == degree));
        sort_canonical(&mut elements);
        elements.dedup();
        GeneratingSet {
            degree,
            elements,
            label: label.into(),
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn elements(&self) -> &[PartialTransformation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn union(&self, other: &GeneratingSet) -> GeneratingSet {
        assert_eq!(self.degree, other.degree);
        let mut elements = self.elements.clone();
        elements.extend_from_slice(&other.elements);
        GeneratingSet::new(
            self.degree,
            elements,
            format!("{} ∪ {}", self.label, other.label),
        )
    }

    pub fn with_element(&self, extra: PartialTransformation, label: &str) -> GeneratingSet {
        let mut elements = self.elements.clone();
        elements.push(extra);
        GeneratingSet::new(self.degree, elements, format!("{} ∪ {label}", self.label))
    }
}

/// The reversing generator set `D_r̂ = D_{1,r̂} ∪ D_{2,r̂} ∪ D_{3,r̂}`:
/// one reflection fixing each `s` in `[2, n-1]`, of size `n - 2`.
///
/// At odd `n` with `r̂ = (n+1)/2` the slices `D_1` and `D_3` share the
/// middle reflection, so the three index ranges overlap in exactly one
/// element and the set size stays `n - 2`.
pub fn reversing_generators(n: u8, r: u8) -> Result<GeneratingSet> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "the reversing generators need n >= 3, got n={n}"
        )));
    }
    let rh = r_hat(n, r)?;
    let mut elements = Vec::new();
    for s in 2..=rh {
        elements.push(gamma(n, r, s)?);
    }
    for s in rh + 1..=n.saturating_sub(rh) {
        elements.push(delta(n, r, s)?);
    }
    for s in (n - rh + 1).max(2)..=n - 1 {
        elements.push(lambda(n, r, s)?);
    }
    let set = GeneratingSet::new(n, elements, "D_rhat");
    assert_eq!(set.len(), n as usize - 2);
    Ok(set)
}

/// The slice `D_{3,r̂}` alone: reflections whose domain reaches `n`.
pub fn reversing_generators_tail(n: u8, r: u8) -> Result<GeneratingSet> {
    let rh = r_hat(n, r)?;
    let mut elements = Vec::new();
    for s in (n - rh + 1).max(2)..=n - 1 {
        elements.push(lambda(n, r, s)?);
    }
    Ok(GeneratingSet::new(n, elements, "D_3"))
}

/// `E(J_r)`: the idempotents of image size exactly `r`, which form the
/// unique minimal generating set of the order-preserving decreasing part.
pub fn idempotent_generators(n: u8, r: u8) -> Result<GeneratingSet> {
    if !(2 <= r && r < n) {
        return Err(Error::InvalidParameter(format!(
            "idempotent generators need 2 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let elements = families::enumerate_layer(&LayerSpec::new(LayerKind::EJ { r }, n))?;
    let set = GeneratingSet::new(n, elements, "E(J_r)");
    assert_eq!(
        BigUint::from(set.len()),
        counting::c_table(n as u64, r as u64)
    );
    Ok(set)
}

/// `E_r ∪ F_r`: the unique minimal generating set of the injective
/// order-preserving decreasing part. `E_r` holds the partial identities on
/// `r`-subsets; `F_r` the maps fixing an `(r-1)`-subset `Y` and sending one
/// extra point `a` to `a - 1`, with `a-1, a ∉ Y`.
pub fn injective_generators(n: u8, r: u8) -> Result<GeneratingSet> {
    if !(1 <= r && r < n) {
        return Err(Error::InvalidParameter(format!(
            "injective generators need 1 <= r <= n-1, got n={n}, r={r}"
        )));
    }
    let mut elements = Vec::new();
    // E_r: all 1_Z with |Z| = r
    let masks = 0u32..(1 << n);
    for mask in masks {
        if mask.count_ones() == r as u32 {
            let points: Vec<u8> = (1..=n).filter(|x| mask & (1 << (x - 1)) != 0).collect();
            elements.push(PartialTransformation::identity_on(&points, n as usize)?);
        }
    }
    // F_r: delta^a_Y with Y an (r-1)-subset avoiding {a-1, a}
    for a in 2..=n {
        let forbidden = (1u32 << (a - 1)) | (1u32 << (a - 2));
        for mask in 0u32..(1 << n) {
            if mask.count_ones() != r as u32 - 1 || mask & forbidden != 0 {
                continue;
            }
            let mut pairs: Vec<(u8, u8)> = (1..=n)
                .filter(|x| mask & (1 << (x - 1)) != 0)
                .map(|x| (x, x))
                .collect();
            pairs.push((a, a - 1));
            elements.push(PartialTransformation::from_pairs(n as usize, &pairs)?);
        }
    }
    let set = GeneratingSet::new(n, elements, "E_r ∪ F_r");
    let expected = counting::binomial(n as u64, r as u64)
        + BigUint::from(r) * counting::binomial(n as u64 - 1, r as u64);
    assert_eq!(BigUint::from(set.len()), expected);
    Ok(set)
}

// ---------------------------------------------------------------------------
// Closure
// ---------------------------------------------------------------------------

/// Output of a closure run: the generated elements in canonical order and
/// the longest minimal word length over the generators.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub elements: Vec<PartialTransformation>,
    pub diameter: usize,
}

/// Product-saturates a generator list breadth-first, so each element is
/// reached by a shortest word over the generators.
pub fn closure(gens: &[PartialTransformation], budget: usize) -> Result<ClosureResult> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidParameter("empty generating set".into()));
    };
    let degree = first.degree();
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
    }
    let mut index: HashMap<PartialTransformation, usize> = HashMap::new();
    let mut elems: Vec<PartialTransformation> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();
    let mut unique_gens: Vec<PartialTransformation> = Vec::new();
    for &g in gens {
        if !index.contains_key(&g) {
            index.insert(g, elems.len());
            elems.push(g);
            depth.push(1);
            unique_gens.push(g);
        }
    }
    let mut head = 0;
    while head < elems.len() {
        let e = elems[head];
        let d = depth[head];
        for g in &unique_gens {
            let p = e.compose(g);
            if !index.contains_key(&p) {
                if elems.len() >= budget {
                    return Err(Error::BudgetExceeded {
                        budget,
                        predicted: None,
                        reached: elems.len(),
                    });
                }
                index.insert(p, elems.len());
                elems.push(p);
                depth.push(d + 1);
            }
        }
        head += 1;
    }
    let diameter = depth.iter().copied().max().unwrap_or(0);
    sort_canonical(&mut elems);
    Ok(ClosureResult {
        elements: elems,
        diameter,
    })
}

pub fn closure_default(gens: &[PartialTransformation]) -> Result<ClosureResult> {
    closure(gens, DEFAULT_CLOSURE_BUDGET)
}

// ---------------------------------------------------------------------------
// Semigroup
// ---------------------------------------------------------------------------

/// A finite semigroup of partial transformations with a full product table.
#[derive(Debug, Clone)]
pub struct Semigroup {
    degree: u8,
    elements: Vec<PartialTransformation>,
    index: HashMap<PartialTransformation, u32>,
    table: Vec<u32>,
    origin: String,
}

impl Semigroup {
    /// Builds the indexed product table, verifying closure under
    /// composition.
    pub fn new(
        origin: impl Into<String>,
        mut elements: Vec<PartialTransformation>,
    ) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidParameter("empty element set".into()));
        };
        let degree = first.degree();
        sort_canonical(&mut elements);
        elements.dedup();
        if elements.len() > MAX_TABLE_ELEMENTS {
            return Err(Error::BudgetExceeded {
                budget: MAX_TABLE_ELEMENTS,
                predicted: None,
                reached: elements.len(),
            });
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, a) in elements.iter().enumerate() {
            if a.degree() != degree {
                return Err(Error::DegreeMismatch(degree, a.degree()));
            }
            index.insert(*a, i as u32);
        }
        let len = elements.len();
        let mut table = vec![0u32; len * len];
        for i in 0..len {
            for j in 0..len {
                let p = elements[i].compose(&elements[j]);
                match index.get(&p) {
                    Some(&k) => table[i * len + j] = k,
                    None => {
                        return Err(Error::NotClosed {
                            left: elements[i].canonical(),
                            right: elements[j].canonical(),
                            product: p.canonical(),
                        })
                    }
                }
            }
        }
        Ok(Semigroup {
            degree,
            elements,
            index,
            table,
            origin: origin.into(),
        })
    }

    /// Materializes a family as a semigroup.
    pub fn from_family(spec: &FamilySpec) -> Result<Self> {
        let elements = families::enumerate(spec)?;
        Semigroup::new(spec.to_string(), elements)
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn elements(&self) -> &[PartialTransformation] {
        &self.elements
    }

    pub fn element(&self, i: u32) -> &PartialTransformation {
        &self.elements[i as usize]
    }

    pub fn index_of(&self, a: &PartialTransformation) -> Option<u32> {
        self.index.get(a).copied()
    }

    /// Index of the product `elements[i] ∘ elements[j]`.
    pub fn product(&self, i: u32, j: u32) -> u32 {
        self.table[i as usize * self.elements.len() + j as usize]
    }

    /// Marks, for every element, whether it is a product of two elements
    /// both different from it.
    pub fn decomposable_flags(&self) -> Vec<bool> {
        let len = self.elements.len();
        let mut flags = vec![false; len];
        for i in 0..len as u32 {
            for j in 0..len as u32 {
                let p = self.product(i, j);
                if p != i && p != j {
                    flags[p as usize] = true;
                }
            }
        }
        flags
    }

    /// Whether `a` is not a product of two semigroup elements other than
    /// itself. Undecomposable elements belong to every generating set.
    pub fn is_undecomposable(&self, a: &PartialTransformation) -> Result<bool> {
        let target = self
            .index_of(a)
            .ok_or_else(|| Error::NotMember(a.canonical()))?;
        let len = self.elements.len() as u32;
        for i in 0..len {
            if i == target {
                continue;
            }
            for j in 0..len {
                if j == target {
                    continue;
                }
                if self.product(i, j) == target {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Closure of a subset (given by indices) inside this semigroup.
    pub fn closure_of_indices(&self, seed: &[u32]) -> Vec<u32> {
        let len = self.elements.len();
        let mut member = vec![false; len];
        let mut worklist: Vec<u32> = Vec::new();
        for &i in seed {
            if !member[i as usize] {
                member[i as usize] = true;
                worklist.push(i);
            }
        }
        let mut members: Vec<u32> = worklist.clone();
        let mut head = 0;
        while head < worklist.len() {
            let x = worklist[head];
            head += 1;
            // multiply on both sides with everything already present
            let mut i = 0;
            while i < members.len() {
                let y = members[i];
                for p in [self.product(x, y), self.product(y, x)] {
                    if !member[p as usize] {
                        member[p as usize] = true;
                        worklist.push(p);
                        members.push(p);
                    }
                }
                i += 1;
            }
        }
        let mut out: Vec<u32> = member
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i as u32))
            .collect();
        out.sort_unstable();
        out
    }
}

// ---------------------------------------------------------------------------
// Factorization through the reversing generators
// ---------------------------------------------------------------------------

/// A product decomposition of one element.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub target: PartialTransformation,
    pub parts: Vec<PartialTransformation>,
}

impl Factorization {
    pub fn compose(&self) -> PartialTransformation {
        let mut acc = self.parts[0];
        for p in &self.parts[1..] {
            acc = acc.compose(p);
        }
        acc
    }
}

/// Factorizes an order-reversing decreasing map of image size `k >= 2`
/// through exactly one reversing generator, with the remaining parts
/// order-preserving and decreasing (injective whenever the input is).
///
/// Writing `im(α) = {a_1 > … > a_k}`, `s = a_1` and `A_i` for the kernel
/// block mapping to `a_i`, the parts are `β₁` (collapsing `A_i` onto
/// `s+i-1`), the reflection `γ_{k,s}`, and `β₂` (sending `s-i+1` to `a_i`).
/// When `γ_{k,s}` is not itself one of the named generators it is expanded
/// as a partial identity times the generator anchored at `s`.
pub fn factorize_reversing(a: &PartialTransformation, r: u8) -> Result<Factorization> {
    let n = a.degree();
    let k = a.height();
    if !a.is_order_reversing() || !a.is_order_decreasing() || k < 2 {
        return Err(Error::InvalidParameter(format!(
            "{a} is not an order-reversing decreasing map of image size >= 2"
        )));
    }
    if k > r as usize {
        return Err(Error::InvalidParameter(format!(
            "{a} has image size {k} above the bound r={r}"
        )));
    }
    let rh = r_hat(n, r)?;
    let kernel = a.kernel();
    // blocks ordered by minima; block i maps onto the i-th largest image
    let blocks = kernel.blocks();
    let mut images_desc: Vec<u8> = a.im();
    images_desc.reverse();
    let s = images_desc[0];
    let k8 = k as u8;

    let mut beta1_pairs = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        for &x in block {
            beta1_pairs.push((x, s + i as u8));
        }
    }
    let beta1 = PartialTransformation::from_pairs(n as usize, &beta1_pairs)?;
    let core = reflection(n, k8, s)?;
    let beta2_pairs: Vec<(u8, u8)> = (0..k8)
        .map(|j| (s - k8 + 1 + j, images_desc[(k8 - 1 - j) as usize]))
        .collect();
    let beta2 = PartialTransformation::from_pairs(n as usize, &beta2_pairs)?;

    let named = reversing_generators(n, r)?;
    let parts = if named.elements().contains(&core) {
        vec![beta1, core, beta2]
    } else {
        let dom_core = core.dom();
        let partial_id = PartialTransformation::identity_on(&dom_core, n as usize)?;
        let generator = if s <= rh {
            gamma(n, r, s)?
        } else if s <= n - rh {
            delta(n, r, s)?
        } else {
            lambda(n, r, s)?
        };
        debug_assert_eq!(partial_id.compose(&generator), core);
        vec![beta1, partial_id, generator, beta2]
    };
    let fact = Factorization { target: *a, parts };
    assert_eq!(fact.compose(), *a, "factorization must compose back");
    Ok(fact)
}

// ---------------------------------------------------------------------------
// Rank verification
// ---------------------------------------------------------------------------

/// The candidate minimal generating set for a monotone decreasing family:
/// `E(J_r) ∪ D_r̂` for the partial family, `E_r ∪ F_r ∪ D_r̂` for the
/// injective one, plus the identity when `r = n`.
pub fn rank_candidate(spec: &FamilySpec) -> Result<GeneratingSet> {
    let n = spec.degree;
    let r = spec.bound();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "rank candidates need n >= 3, got n={n}"
        )));
    }
    if !(2 <= r && r <= n) {
        return Err(Error::InvalidParameter(format!(
            "rank candidates need 2 <= r <= n, got r={r}"
        )));
    }
    let layer_r = if r == n { n - 1 } else { r };
    let base = match spec.family {
        Family::PMD => idempotent_generators(n, layer_r)?,
        Family::IMD => injective_generators(n, layer_r)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "rank verification covers PMD and IMD, not {}",
                other.name()
            )))
        }
    };
    let mut set = base.union(&reversing_generators(n, layer_r)?);
    if r == n {
        set = set.with_element(PartialTransformation::identity(n as usize), "{1_n}");
    }
    Ok(set)
}

fn formula_rank(spec: &FamilySpec) -> Result<BigUint> {
    let n = spec.degree as u64;
    let r = spec.bound() as u64;
    match spec.family {
        Family::PMD => counting::rank_pmd(n, r),
        Family::IMD => counting::rank_imd(n, r),
        other => Err(Error::InvalidParameter(format!(
            "no rank formula for {}",
            other.name()
        ))),
    }
}

/// The subset of the candidate that the undecomposability lemmas cover:
/// all of it for the injective family; the idempotents, the tail
/// reflections and the identity for the partial family.
fn known_undecomposables(spec: &FamilySpec, candidate: &GeneratingSet) -> Result<Vec<PartialTransformation>> {
    let n = spec.degree;
    let r = spec.bound();
    let layer_r = if r == n { n - 1 } else { r };
    match spec.family {
        Family::IMD => Ok(candidate.elements().to_vec()),
        Family::PMD => {
            let mut out = idempotent_generators(n, layer_r)?.elements().to_vec();
            out.extend_from_slice(reversing_generators_tail(n, layer_r)?.elements());
            if r == n {
                out.push(PartialTransformation::identity(n as usize));
            }
            Ok(out)
        }
        other => Err(Error::InvalidParameter(format!(
            "no undecomposability classification for {}",
            other.name()
        ))),
    }
}

/// Verifies the rank of `PMD(n, r)` or `IMD(n, r)`:
///
/// (a) the candidate set generates the family;
/// (b) its size matches the rank formula;
/// (c) the classified undecomposable elements really are undecomposable,
///     and removing any single candidate element breaks generation;
/// (d) the candidate hits, for every `s` in `[2, n-1]`, an order-reversing
///     element with fix set `{s}` — and no generating set can avoid such a
///     class;
/// (e) exhaustively, no generating set of size `rank - 1` exists.
///
/// The closure checks run for `n <= 6`, the product-table checks for
/// `n <= 5` and the exhaustive search for `n <= 4`; out-of-range checks
/// are reported as skipped.
pub fn verify_rank(spec: &FamilySpec) -> Result<Report> {
    spec.validate()?;
    let n = spec.degree;
    let mut report = Report::new();
    let candidate = rank_candidate(spec)?;
    let rank = formula_rank(spec)?;
    report.check_eq("candidate_size_matches_rank_formula", &rank, candidate.len());

    if n > 6 {
        report.skip("closure_generates_family", "closure checks gated to n <= 6");
        report.skip("undecomposable_elements", "gated to n <= 5");
        report.skip("candidate_is_minimal_by_removal", "gated to n <= 5");
        report.skip("reversing_fix_classes_covered", "gated to n <= 6");
        report.skip("no_smaller_generating_set", "gated to n <= 4");
        return Ok(report);
    }

    let family_elems = families::enumerate(spec)?;
    let generated = closure_default(candidate.elements())?;
    report.check_eq(
        "closure_generates_family",
        family_elems.len(),
        generated.elements.len(),
    );
    if generated.elements != family_elems {
        report.check("closure_equals_family_elementwise", false, None);
    }

    // (d) fix-class coverage by the candidate
    let mut coverage_ok = true;
    let mut missing = None;
    for s in 2..n {
        let hit = candidate
            .elements()
            .iter()
            .any(|a| Family::PRDStar.is_member(a) && a.fix() == vec![s]);
        if !hit {
            coverage_ok = false;
            missing = Some(format!("no reversing candidate with fix {{{s}}}"));
            break;
        }
    }
    report.check("reversing_fix_classes_covered", coverage_ok, missing);

    // (d') dropping a whole fix class breaks generation
    if n <= 5 {
        for s in 2..n {
            let rest: Vec<PartialTransformation> = family_elems
                .iter()
                .copied()
                .filter(|a| !(Family::PRDStar.is_member(a) && a.fix() == vec![s]))
                .collect();
            let sub = closure_default(&rest)?;
            report.check(
                &format!("family_minus_fix_class_{s}_is_proper"),
                sub.elements.len() < family_elems.len(),
                Some(format!("removing the fix-{{{s}}} class still generates")),
            );
        }
    } else {
        report.skip("family_minus_fix_class_is_proper", "gated to n <= 5");
    }

    // (c) undecomposability via the product table
    let undecomposables = known_undecomposables(spec, &candidate)?;
    if n <= 5 {
        let semigroup = Semigroup::new(spec.to_string(), family_elems.clone())?;
        let flags = semigroup.decomposable_flags();
        let mut all_ok = true;
        let mut witness = None;
        for u in &undecomposables {
            let idx = semigroup
                .index_of(u)
                .ok_or_else(|| Error::NotMember(u.canonical()))?;
            if flags[idx as usize] {
                all_ok = false;
                witness = Some(u.canonical());
                break;
            }
        }
        report.check("undecomposable_elements", all_ok, witness);

        let mut removal_ok = true;
        let mut removal_witness = None;
        for x in candidate.elements() {
            let rest: Vec<PartialTransformation> = candidate
                .elements()
                .iter()
                .copied()
                .filter(|y| y != x)
                .collect();
            let sub = closure_default(&rest)?;
            if sub.elements.len() == family_elems.len() {
                removal_ok = false;
                removal_witness = Some(x.canonical());
                break;
            }
        }
        report.check(
            "candidate_is_minimal_by_removal",
            removal_ok,
            removal_witness,
        );

        // (e) exhaustive: every generating set contains the verified
        // undecomposables, so a (rank-1)-sized one is a union of those
        // with a small completion.
        if n <= 4 {
            let undec: Vec<PartialTransformation> = {
                let mut v: Vec<PartialTransformation> = semigroup
                    .elements()
                    .iter()
                    .zip(&flags)
                    .filter_map(|(a, &dec)| (!dec).then_some(*a))
                    .collect();
                sort_canonical(&mut v);
                v
            };
            let rank_usize = counting::to_usize(&rank);
            let ok = if undec.len() > rank_usize - 1 {
                true
            } else {
                let v_size = rank_usize - 1 - undec.len();
                let pool: Vec<PartialTransformation> = family_elems
                    .iter()
                    .copied()
                    .filter(|a| !undec.contains(a))
                    .collect();
                let mut all_proper = true;
                let mut chooser = SubsetChooser::new(pool.len(), v_size);
                while let Some(pick) = chooser.next() {
                    let mut gens = undec.clone();
                    gens.extend(pick.iter().map(|&i| pool[i]));
                    let sub = closure_default(&gens)?;
                    if sub.elements.len() == family_elems.len() {
                        all_proper = false;
                        break;
                    }
                }
                all_proper
            };
            report.check(
                "no_smaller_generating_set",
                ok,
                Some("a generating set of size rank-1 exists".into()),
            );
        } else {
            report.skip("no_smaller_generating_set", "gated to n <= 4");
        }
    } else {
        report.skip("undecomposable_elements", "gated to n <= 5");
        report.skip("candidate_is_minimal_by_removal", "gated to n <= 5");
        report.skip("no_smaller_generating_set", "gated to n <= 4");
    }

    Ok(report)
}

/// Iterates all `k`-subsets of `0..n` as index vectors.
struct SubsetChooser {
    n: usize,
    k: usize,
    current: Option<Vec<usize>>,
}

impl SubsetChooser {
    fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        SubsetChooser { n, k, current }
    }

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.clone()?;
        // advance
        let mut next = current.clone();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] + (self.k - i) + 1 <= self.n {
                next[i] += 1;
                for j in i + 1..self.k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate, filter_oracle};

    fn pt(s: &str) -> PartialTransformation {
        PartialTransformation::parse(s).unwrap()
    }

    #[test]
    fn r_hat_values() {
        assert_eq!(r_hat(7, 3).unwrap(), 3);
        assert_eq!(r_hat(7, 6).unwrap(), 4);
        assert_eq!(r_hat(6, 3).unwrap(), 3);
        assert!(r_hat(7, 1).is_err());
        assert!(r_hat(7, 8).is_err());
    }

    #[test]
    fn named_generators() {
        assert_eq!(gamma(4, 3, 2).unwrap(), pt("n=4:[2:2,3:1]"));
        assert_eq!(lambda(6, 3, 5).unwrap(), pt("n=6:[5:5,6:4]"));
        for n in 4..=7u8 {
            let l = lambda(n, n - 1, n - 1).unwrap();
            assert_eq!(
                l,
                PartialTransformation::from_pairs(
                    n as usize,
                    &[(n - 1, n - 1), (n, n - 2)]
                )
                .unwrap()
            );
        }
        assert_eq!(reflection(6, 2, 4).unwrap(), pt("n=6:[4:4,5:3]"));
        assert!(gamma(6, 3, 4).is_err());
        assert!(delta(6, 3, 2).is_err());
    }

    #[test]
    fn generator_shape() {
        for n in 3..=8u8 {
            for r in 2..=n {
                let d = reversing_generators(n, r).unwrap();
                assert_eq!(d.len(), n as usize - 2, "n={n}, r={r}");
                let mut fixes: Vec<u8> = Vec::new();
                for a in d.elements() {
                    assert!(Family::PRDStar.is_member(a));
                    assert!(Family::IRDStar.is_member(a));
                    assert!(a.height() <= r_hat(n, r).unwrap() as usize);
                    let fix = a.fix();
                    assert_eq!(fix.len(), 1);
                    fixes.push(fix[0]);
                }
                fixes.sort_unstable();
                let expected: Vec<u8> = (2..n).collect();
                assert_eq!(fixes, expected, "n={n}, r={r}");
            }
        }
    }

    #[test]
    fn smallest_generator_set_is_a_single_reflection() {
        let d = reversing_generators(3, 2).unwrap();
        assert_eq!(d.elements(), &[pt("n=3:[2:2,3:1]")]);
    }

    #[test]
    fn idempotent_generator_blocks_collapse_onto_minima() {
        let set = idempotent_generators(4, 2).unwrap();
        assert_eq!(set.len(), 17);
        for e in set.elements() {
            assert!(e.is_idempotent());
            assert_eq!(e.height(), 2);
            for block in e.kernel().blocks() {
                let image = e.apply(block[0]).unwrap();
                assert_eq!(image, block[0], "block must collapse onto its minimum");
            }
        }
    }

    #[test]
    fn injective_generator_shape() {
        let set = injective_generators(5, 2).unwrap();
        assert_eq!(set.len(), 10 + 2 * 6);
        for g in set.elements() {
            assert!(Family::IC.is_member(g));
            assert_eq!(g.height(), 2);
            // delta-style generators square to a partial identity
            let sq = g.compose(g);
            assert!(sq.is_idempotent());
            assert!(g.is_quasi_idempotent());
        }
        let delta_a_y = pt("n=5:[3:2,5:5]");
        assert!(set.elements().contains(&delta_a_y));
    }

    #[test]
    fn closure_of_identity_is_identity() {
        let id = PartialTransformation::identity(5);
        let c = closure_default(&[id]).unwrap();
        assert_eq!(c.elements, vec![id]);
        assert_eq!(c.diameter, 1);
    }

    #[test]
    fn closure_generates_pmd_and_imd() {
        for n in 3..=5u8 {
            for r in 2..n {
                let candidate = idempotent_generators(n, r)
                    .unwrap()
                    .union(&reversing_generators(n, r).unwrap());
                let got = closure_default(candidate.elements()).unwrap();
                let want = enumerate(&FamilySpec::bounded(Family::PMD, n, r)).unwrap();
                assert_eq!(got.elements, want, "PMD({n},{r})");

                let candidate = injective_generators(n, r)
                    .unwrap()
                    .union(&reversing_generators(n, r).unwrap());
                let got = closure_default(candidate.elements()).unwrap();
                let want = enumerate(&FamilySpec::bounded(Family::IMD, n, r)).unwrap();
                assert_eq!(got.elements, want, "IMD({n},{r})");
            }
        }
    }

    #[test]
    fn closure_budget_is_enforced() {
        let candidate = idempotent_generators(5, 3)
            .unwrap()
            .union(&reversing_generators(5, 3).unwrap());
        match closure(candidate.elements(), 50) {
            Err(Error::BudgetExceeded { budget: 50, .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn semigroup_rejects_unclosed_sets() {
        let a = pt("n=4:[3:3,4:2]");
        let b = pt("n=4:[2:2,3:1]");
        match Semigroup::new("test", vec![a, b]) {
            Err(Error::NotClosed { .. }) => {}
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn undecomposability_in_small_families() {
        let spec = FamilySpec::bounded(Family::PMD, 4, 2);
        let s = Semigroup::from_family(&spec).unwrap();
        for e in idempotent_generators(4, 2).unwrap().elements() {
            assert!(s.is_undecomposable(e).unwrap(), "{e}");
        }
        // gamma_2 extends below the top of the chain, so it decomposes
        let g2 = gamma(4, 2, 2).unwrap();
        assert!(!s.is_undecomposable(&g2).unwrap());
        // the tail reflection ends at n and is undecomposable
        let l3 = lambda(4, 2, 3).unwrap();
        assert!(s.is_undecomposable(&l3).unwrap());

        // delta generators decompose in the partial family
        let spec = FamilySpec::bounded(Family::PMD, 6, 2);
        let s = Semigroup::from_family(&spec).unwrap();
        for sdx in 3..=4u8 {
            let d = delta(6, 2, sdx).unwrap();
            assert!(!s.is_undecomposable(&d).unwrap(), "delta_{sdx}");
        }

        // in the injective family the whole candidate is undecomposable
        let spec = FamilySpec::bounded(Family::IMD, 4, 2);
        let s = Semigroup::from_family(&spec).unwrap();
        let candidate = rank_candidate(&spec).unwrap();
        for e in candidate.elements() {
            assert!(s.is_undecomposable(e).unwrap(), "{e}");
        }
        assert!(s
            .is_undecomposable(&PartialTransformation::identity(4))
            .is_err());
    }

    #[test]
    fn factorization_round_trips_over_the_reversing_part() {
        for n in 3..=5u8 {
            for r in 2..=n {
                let star = enumerate(&FamilySpec::bounded(Family::PRDStar, n, r)).unwrap();
                for a in &star {
                    let f = factorize_reversing(a, r).unwrap();
                    assert_eq!(f.compose(), *a);
                    let named = reversing_generators(n, r).unwrap();
                    let mut reversing_parts = 0;
                    for p in &f.parts {
                        if Family::PRDStar.is_member(p) {
                            reversing_parts += 1;
                            assert!(named.elements().contains(p), "{p} not a named generator");
                        } else {
                            assert!(Family::PC.is_member(p));
                            assert!(p.height() <= r as usize);
                        }
                        if a.is_injective() {
                            assert!(p.is_injective());
                        }
                    }
                    assert_eq!(reversing_parts, 1, "exactly one reversing generator");
                }
            }
        }
    }

    #[test]
    fn factorizing_a_generator_is_trivial() {
        let g = gamma(5, 3, 3).unwrap();
        let f = factorize_reversing(&g, 3).unwrap();
        assert_eq!(f.parts.len(), 3);
        assert_eq!(f.parts[1], g);
        assert!(f.parts[0].is_idempotent());
        assert!(f.parts[2].is_idempotent());
        assert!(factorize_reversing(&pt("n=5:[1:1]"), 3).is_err());
    }

    #[test]
    fn rank_verification_passes_at_small_degrees() {
        for (family, n, r) in [
            (Family::PMD, 3, 2),
            (Family::PMD, 4, 2),
            (Family::PMD, 4, 4),
            (Family::IMD, 4, 2),
            (Family::IMD, 4, 3),
            (Family::IMD, 4, 4),
        ] {
            let spec = FamilySpec::bounded(family, n, r);
            let report = verify_rank(&spec).unwrap();
            assert!(
                report.ok(),
                "verify_rank({spec}) failed: {:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn rank_candidates_match_oracle_counts() {
        // size check: 2 + sum over k of C(4,k) C(k-1,1) = 19 at (4, 2)
        let spec = FamilySpec::bounded(Family::PMD, 4, 2);
        assert_eq!(rank_candidate(&spec).unwrap().len(), 19);
        let spec = FamilySpec::bounded(Family::IMD, 5, 2);
        assert_eq!(rank_candidate(&spec).unwrap().len(), 25);
        // full semigroups: 3n - 2 with the identity adjoined
        for n in 3..=6u8 {
            for family in [Family::PMD, Family::IMD] {
                let spec = FamilySpec::bounded(family, n, n);
                assert_eq!(rank_candidate(&spec).unwrap().len(), 3 * n as usize - 2);
            }
        }
    }

    #[test]
    fn full_semigroup_candidates_generate() {
        for family in [Family::PMD, Family::IMD] {
            let spec = FamilySpec::bounded(family, 4, 4);
            let candidate = rank_candidate(&spec).unwrap();
            let got = closure_default(candidate.elements()).unwrap();
            let want = filter_oracle(&FamilySpec::new(family, 4)).unwrap();
            assert_eq!(got.elements, want);
        }
    }

    #[test]
    fn subset_chooser_enumerates_combinations() {
        let mut c = SubsetChooser::new(4, 2);
        let mut all = Vec::new();
        while let Some(v) = c.next() {
            all.push(v);
        }
        assert_eq!(all.len(), 6);
        let mut c = SubsetChooser::new(3, 0);
        assert_eq!(c.next(), Some(vec![]));
        assert_eq!(c.next(), None);
    }
}
