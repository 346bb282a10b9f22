//! Named transformation families and their enumerators.
//!
//! Every family of partial transformations used in this crate is addressed
//! by a [`FamilySpec`] — a symbolic [`Family`] name, a degree, and an
//! optional image-size bound. Two independent enumeration strategies are
//! provided:
//!
//! - [`enumerate`] builds the elements constructively, by running over
//!   domain subsets, convex ordered partitions and admissible image
//!   choices (or plain per-point image products for the families with no
//!   order constraint);
//! - [`filter_oracle`] scans all `(n+1)^n` partial maps and keeps those
//!   passing the membership predicates. It is the slow ground truth the
//!   fast path is tested against.
//!
//! Both return elements sorted by the canonical text form, each exactly
//! once.

use num_bigint::BigUint;
use num_traits::One;

use crate::counting::{self, Count};
use crate::error::{Error, Result};
use crate::pt::{sort_canonical, PartialTransformation, MAX_DEGREE};

/// Default cap on the number of elements an enumerator may produce.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Symbolic family names.
///
/// `PT` is everything, `I` the injective maps, `PO`/`PR`/`PM` the
/// order-preserving / order-reversing / monotone maps, `PD`/`PE` the
/// decreasing / extensive maps, and the remaining names intersections of
/// those: `PC = PO ∩ PD`, `IC = PC ∩ I`, `IO = PO ∩ I`,
/// `PMD = PM ∩ PD`, `IMD = PMD ∩ I`, `PRD = PR ∩ PD`,
/// `IRD = PRD ∩ I`. The starred variants drop the order-preserving part
/// (image size at least 2). `C`, `O`, `M`, `D` are the corresponding full
/// (total) families, `C` being the order-preserving decreasing full maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Family {
    PT,
    I,
    PO,
    PR,
    PM,
    PD,
    PE,
    PC,
    IC,
    IO,
    PMD,
    IMD,
    PRD,
    PRDStar,
    IRD,
    IRDStar,
    C,
    O,
    M,
    D,
}

impl Family {
    pub const ALL: [Family; 20] = [
        Family::PT,
        Family::I,
        Family::PO,
        Family::PR,
        Family::PM,
        Family::PD,
        Family::PE,
        Family::PC,
        Family::IC,
        Family::IO,
        Family::PMD,
        Family::IMD,
        Family::PRD,
        Family::PRDStar,
        Family::IRD,
        Family::IRDStar,
        Family::C,
        Family::O,
        Family::M,
        Family::D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PT => "PT",
            Family::I => "I",
            Family::PO => "PO",
            Family::PR => "PR",
            Family::PM => "PM",
            Family::PD => "PD",
            Family::PE => "PE",
            Family::PC => "PC",
            Family::IC => "IC",
            Family::IO => "IO",
            Family::PMD => "PMD",
            Family::IMD => "IMD",
            Family::PRD => "PRD",
            Family::PRDStar => "PRD_STAR",
            Family::IRD => "IRD",
            Family::IRDStar => "IRD_STAR",
            Family::C => "C",
            Family::O => "O",
            Family::M => "M",
            Family::D => "D",
        }
    }

    /// Parses a family name. `CN_FULL` and `PRD*`-style spellings are
    /// accepted as aliases.
    pub fn parse(name: &str) -> Result<Family> {
        let canon = name.trim().to_ascii_uppercase().replace('*', "_STAR");
        let canon = canon.as_str();
        for f in Family::ALL {
            if f.name() == canon {
                return Ok(f);
            }
        }
        match canon {
            "CN_FULL" | "C_N" => Ok(Family::C),
            _ => Err(Error::InvalidParameter(format!("unknown family '{name}'"))),
        }
    }

    /// Whether the family consists of full (total) transformations.
    pub fn is_full(self) -> bool {
        matches!(self, Family::C | Family::O | Family::M | Family::D)
    }

    /// Membership predicate, without any image-size bound.
    pub fn is_member(self, a: &PartialTransformation) -> bool {
        match self {
            Family::PT => true,
            Family::I => a.is_injective(),
            Family::PO => a.is_order_preserving(),
            Family::PR => a.is_order_reversing(),
            Family::PM => a.is_monotone(),
            Family::PD => a.is_order_decreasing(),
            Family::PE => a.is_extensive(),
            Family::PC => a.is_order_preserving() && a.is_order_decreasing(),
            Family::IC => {
                a.is_order_preserving() && a.is_order_decreasing() && a.is_injective()
            }
            Family::IO => a.is_order_preserving() && a.is_injective(),
            Family::PMD => a.is_monotone() && a.is_order_decreasing(),
            Family::IMD => a.is_monotone() && a.is_order_decreasing() && a.is_injective(),
            Family::PRD => a.is_order_reversing() && a.is_order_decreasing(),
            Family::PRDStar => {
                a.is_order_reversing() && a.is_order_decreasing() && a.height() >= 2
            }
            Family::IRD => {
                a.is_order_reversing() && a.is_order_decreasing() && a.is_injective()
            }
            Family::IRDStar => {
                a.is_order_reversing()
                    && a.is_order_decreasing()
                    && a.is_injective()
                    && a.height() >= 2
            }
            Family::C => a.is_full() && a.is_order_preserving() && a.is_order_decreasing(),
            Family::O => a.is_full() && a.is_order_preserving(),
            Family::M => a.is_full() && a.is_monotone(),
            Family::D => a.is_full() && a.is_order_decreasing(),
        }
    }
}

/// A family name together with a degree and an optional image-size bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub degree: u8,
    pub image_bound: Option<u8>,
}

impl FamilySpec {
    pub fn new(family: Family, degree: u8) -> Self {
        FamilySpec {
            family,
            degree,
            image_bound: None,
        }
    }

    pub fn bounded(family: Family, degree: u8, r: u8) -> Self {
        FamilySpec {
            family,
            degree,
            image_bound: Some(r),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 0 || self.degree as usize > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(self.degree as usize));
        }
        if let Some(r) = self.image_bound {
            if r > self.degree {
                return Err(Error::InvalidParameter(format!(
                    "image bound {r} exceeds degree {}",
                    self.degree
                )));
            }
        }
        Ok(())
    }

    /// Effective image-size bound (the degree when unbounded).
    pub fn bound(&self) -> u8 {
        self.image_bound.unwrap_or(self.degree)
    }

    pub fn contains(&self, a: &PartialTransformation) -> bool {
        a.degree() == self.degree
            && a.height() <= self.bound() as usize
            && self.family.is_member(a)
    }
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.image_bound {
            Some(r) => write!(f, "{}({},{})", self.family.name(), self.degree, r),
            None => write!(f, "{}_{}", self.family.name(), self.degree),
        }
    }
}

/// Height layers and related slices of the families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayerKind {
    /// `Q(n, m)`: order-reversing decreasing maps with `max(im) = m`
    /// (`Q(n, 0)` is the empty map alone).
    Q { m: u8 },
    /// `K_r`: order-reversing decreasing maps of image size exactly
    /// `r >= 2`; with `max_image = Some(s)` the sub-layer `K_r(s)`.
    K { r: u8, max_image: Option<u8> },
    /// Injective members of `K_r`.
    KInj { r: u8 },
    /// `J_r`: order-preserving decreasing maps of image size exactly `r`.
    J { r: u8 },
    /// Injective members of `J_r`.
    JInj { r: u8 },
    /// `L_r`: monotone decreasing maps of image size exactly `r`.
    L { r: u8 },
    /// Injective members of `L_r`.
    LInj { r: u8 },
    /// Idempotents of `J_r`.
    EJ { r: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LayerSpec {
    pub kind: LayerKind,
    pub degree: u8,
}

impl LayerSpec {
    pub fn new(kind: LayerKind, degree: u8) -> Self {
        LayerSpec { kind, degree }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.degree;
        if n == 0 || n as usize > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n as usize));
        }
        match self.kind {
            LayerKind::Q { m } if m > n => Err(Error::InvalidParameter(format!(
                "Q(n, m) needs 0 <= m <= n, got m={m}, n={n}"
            ))),
            LayerKind::K { r, max_image } => {
                if r > n {
                    return Err(Error::InvalidParameter(format!(
                        "K_r needs r <= n, got r={r}, n={n}"
                    )));
                }
                if let Some(s) = max_image {
                    if s < r || s as u16 > (n as u16) - (r as u16) + 1 {
                        return Err(Error::InvalidParameter(format!(
                            "K_r(s) needs r <= s <= n - r + 1, got r={r}, s={s}, n={n}"
                        )));
                    }
                }
                Ok(())
            }
            LayerKind::KInj { r }
            | LayerKind::J { r }
            | LayerKind::JInj { r }
            | LayerKind::L { r }
            | LayerKind::LInj { r }
            | LayerKind::EJ { r }
                if r > n =>
            {
                Err(Error::InvalidParameter(format!(
                    "layer parameter {r} exceeds degree {n}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Membership predicate, independent of the constructive builders.
    pub fn contains(&self, a: &PartialTransformation) -> bool {
        if a.degree() != self.degree {
            return false;
        }
        match self.kind {
            LayerKind::Q { m } => {
                Family::PRD.is_member(a)
                    && match a.max_im() {
                        None => m == 0,
                        Some(top) => top == m,
                    }
            }
            LayerKind::K { r, max_image } => {
                Family::PRDStar.is_member(a)
                    && a.height() == r as usize
                    && max_image.map_or(true, |s| a.max_im() == Some(s))
            }
            LayerKind::KInj { r } => {
                Family::IRDStar.is_member(a) && a.height() == r as usize
            }
            LayerKind::J { r } => Family::PC.is_member(a) && a.height() == r as usize,
            LayerKind::JInj { r } => Family::IC.is_member(a) && a.height() == r as usize,
            LayerKind::L { r } => Family::PMD.is_member(a) && a.height() == r as usize,
            LayerKind::LInj { r } => Family::IMD.is_member(a) && a.height() == r as usize,
            LayerKind::EJ { r } => {
                Family::PC.is_member(a) && a.height() == r as usize && a.is_idempotent()
            }
        }
    }
}

impl std::fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.degree;
        match self.kind {
            LayerKind::Q { m } => write!(f, "Q({n},{m})"),
            LayerKind::K { r, max_image: None } => write!(f, "K_{r}(n={n})"),
            LayerKind::K {
                r,
                max_image: Some(s),
            } => write!(f, "K_{r}({s})(n={n})"),
            LayerKind::KInj { r } => write!(f, "K_{r}^i(n={n})"),
            LayerKind::J { r } => write!(f, "J_{r}(n={n})"),
            LayerKind::JInj { r } => write!(f, "J_{r}^i(n={n})"),
            LayerKind::L { r } => write!(f, "L_{r}(n={n})"),
            LayerKind::LInj { r } => write!(f, "L_{r}^i(n={n})"),
            LayerKind::EJ { r } => write!(f, "E(J_{r})(n={n})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Constructive enumeration
// ---------------------------------------------------------------------------

struct Sink {
    out: Vec<PartialTransformation>,
    budget: usize,
    predicted: Option<Count>,
}

impl Sink {
    fn new(budget: usize, predicted: Option<Count>) -> Self {
        Sink {
            out: Vec::new(),
            budget,
            predicted,
        }
    }

    fn push(&mut self, a: PartialTransformation) -> Result<()> {
        if self.out.len() >= self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                predicted: self.predicted.as_ref().map(|p| p.to_string()),
                reached: self.out.len(),
            });
        }
        self.out.push(a);
        Ok(())
    }

    fn finish(mut self) -> Vec<PartialTransformation> {
        sort_canonical(&mut self.out);
        for w in self.out.windows(2) {
            assert!(w[0] != w[1], "enumerator produced a duplicate: {}", w[0]);
        }
        self.out
    }
}

/// One enumeration pass over an order-constrained shape.
#[derive(Clone, Copy)]
struct OrderedPass {
    reversing: bool,
    decreasing: bool,
    injective: bool,
    full: bool,
    min_height: usize,
}

fn domain_masks(n: u8, full: bool) -> Box<dyn Iterator<Item = u32>> {
    let all = (1u32 << n) - 1;
    if full {
        Box::new(std::iter::once(all))
    } else {
        Box::new(0..=all)
    }
}

fn mask_points(mask: u32) -> Vec<u8> {
    (1..=32u8).filter(|x| mask & (1 << (x - 1)) != 0).collect()
}

fn run_ordered_pass(n: u8, pass: OrderedPass, bound: u8, sink: &mut Sink) -> Result<()> {
    for mask in domain_masks(n, pass.full) {
        let points = mask_points(mask);
        let t = points.len();
        if t == 0 {
            if pass.min_height == 0 {
                sink.push(PartialTransformation::zero(n as usize))?;
            }
            continue;
        }
        if pass.injective {
            if t >= pass.min_height.max(1) && t <= bound as usize {
                let blocks: Vec<(usize, usize)> = (0..t).map(|i| (i, 1)).collect();
                assign_images(n, &points, &blocks, pass, sink)?;
            }
            continue;
        }
        // every bitmask of the t-1 gaps is one convex ordered partition
        for cuts in 0u32..(1 << (t - 1)) {
            let k = cuts.count_ones() as usize + 1;
            if k < pass.min_height.max(1) || k > bound as usize {
                continue;
            }
            let mut blocks: Vec<(usize, usize)> = Vec::with_capacity(k);
            let mut start = 0;
            for i in 0..t - 1 {
                if cuts & (1 << i) != 0 {
                    blocks.push((start, i + 1 - start));
                    start = i + 1;
                }
            }
            blocks.push((start, t - start));
            assign_images(n, &points, &blocks, pass, sink)?;
        }
    }
    Ok(())
}

/// Assigns images to the blocks of one convex ordered partition.
fn assign_images(
    n: u8,
    points: &[u8],
    blocks: &[(usize, usize)],
    pass: OrderedPass,
    sink: &mut Sink,
) -> Result<()> {
    let k = blocks.len();
    let mut images = [0u8; MAX_DEGREE];
    if pass.reversing {
        // Blocks run left to right, images strictly downward. When the maps
        // must also be decreasing, the only binding constraint is that the
        // top image cannot exceed the smallest domain point.
        let cap = if pass.decreasing { points[blocks[0].0] } else { n };
        if (cap as usize) < k {
            return Ok(());
        }
        let mut chosen = vec![0u8; k];
        choose_reversing(
            n, points, blocks, pass, cap, k, 0, 1, &mut chosen, &mut images, sink,
        )
    } else {
        choose_preserving(n, points, blocks, pass, 0, 0, &mut images, sink)
    }
}

#[allow(clippy::too_many_arguments)]
fn choose_reversing(
    n: u8,
    points: &[u8],
    blocks: &[(usize, usize)],
    pass: OrderedPass,
    cap: u8,
    k: usize,
    idx: usize,
    lo: u8,
    chosen: &mut [u8],
    images: &mut [u8; MAX_DEGREE],
    sink: &mut Sink,
) -> Result<()> {
    if idx == k {
        // chosen is ascending; block i receives the (k-i)-th smallest value
        for (i, &(start, len)) in blocks.iter().enumerate() {
            let img = chosen[k - 1 - i];
            for &p in &points[start..start + len] {
                images[(p - 1) as usize] = img;
            }
        }
        return sink.push(PartialTransformation::from_images(n, *images));
    }
    let remaining = (k - idx - 1) as u8;
    for v in lo..=cap.saturating_sub(remaining) {
        chosen[idx] = v;
        choose_reversing(
            n,
            points,
            blocks,
            pass,
            cap,
            k,
            idx + 1,
            v + 1,
            chosen,
            images,
            sink,
        )?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn choose_preserving(
    n: u8,
    points: &[u8],
    blocks: &[(usize, usize)],
    pass: OrderedPass,
    idx: usize,
    prev: u8,
    images: &mut [u8; MAX_DEGREE],
    sink: &mut Sink,
) -> Result<()> {
    if idx == blocks.len() {
        return sink.push(PartialTransformation::from_images(n, *images));
    }
    let (start, len) = blocks[idx];
    let hi = if pass.decreasing {
        points[start] // block minimum
    } else {
        n - (blocks.len() - 1 - idx) as u8
    };
    for v in (prev + 1)..=hi {
        for &p in &points[start..start + len] {
            images[(p - 1) as usize] = v;
        }
        choose_preserving(n, points, blocks, pass, idx + 1, v, images, sink)?;
    }
    Ok(())
}

/// Families without an order constraint: per-point image products.
#[derive(Clone, Copy)]
enum ProductKind {
    Any,
    Decreasing,
    Extensive,
}

fn run_product_pass(
    n: u8,
    kind: ProductKind,
    injective: bool,
    full: bool,
    bound: u8,
    sink: &mut Sink,
) -> Result<()> {
    fn rec(
        n: u8,
        kind: ProductKind,
        injective: bool,
        bound: u8,
        points: &[u8],
        idx: usize,
        used: u32,
        image_mask: u32,
        images: &mut [u8; MAX_DEGREE],
        sink: &mut Sink,
    ) -> Result<()> {
        if idx == points.len() {
            return sink.push(PartialTransformation::from_images(n, *images));
        }
        let x = points[idx];
        let (lo, hi) = match kind {
            ProductKind::Any => (1, n),
            ProductKind::Decreasing => (1, x),
            ProductKind::Extensive => (x, n),
        };
        for y in lo..=hi {
            if injective && used & (1 << y) != 0 {
                continue;
            }
            let next_mask = image_mask | (1 << y);
            if next_mask.count_ones() > bound as u32 {
                continue;
            }
            images[(x - 1) as usize] = y;
            rec(
                n,
                kind,
                injective,
                bound,
                points,
                idx + 1,
                used | (1 << y),
                next_mask,
                images,
                sink,
            )?;
            images[(x - 1) as usize] = 0;
        }
        Ok(())
    }

    for mask in domain_masks(n, full) {
        let points = mask_points(mask);
        if points.is_empty() {
            sink.push(PartialTransformation::zero(n as usize))?;
            continue;
        }
        let mut images = [0u8; MAX_DEGREE];
        rec(
            n, kind, injective, bound, &points, 0, 0, 0, &mut images, sink,
        )?;
    }
    Ok(())
}

fn ordered(reversing: bool, decreasing: bool, injective: bool, full: bool) -> OrderedPass {
    OrderedPass {
        reversing,
        decreasing,
        injective,
        full,
        min_height: 0,
    }
}

fn star(mut pass: OrderedPass) -> OrderedPass {
    pass.min_height = 2;
    pass
}

/// Enumerates a family with the default element budget.
pub fn enumerate(spec: &FamilySpec) -> Result<Vec<PartialTransformation>> {
    enumerate_with_budget(spec, DEFAULT_BUDGET)
}

/// Enumerates a family, failing fast when a counting formula predicts more
/// than `budget` elements.
pub fn enumerate_with_budget(
    spec: &FamilySpec,
    budget: usize,
) -> Result<Vec<PartialTransformation>> {
    spec.validate()?;
    let predicted = predicted_cardinality(spec);
    if let Some(p) = &predicted {
        if *p > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                budget,
                predicted: Some(p.to_string()),
                reached: 0,
            });
        }
    }
    let n = spec.degree;
    let bound = spec.bound();
    let mut sink = Sink::new(budget, predicted);
    match spec.family {
        Family::PT => run_product_pass(n, ProductKind::Any, false, false, bound, &mut sink)?,
        Family::I => run_product_pass(n, ProductKind::Any, true, false, bound, &mut sink)?,
        Family::PD => {
            run_product_pass(n, ProductKind::Decreasing, false, false, bound, &mut sink)?
        }
        Family::PE => {
            run_product_pass(n, ProductKind::Extensive, false, false, bound, &mut sink)?
        }
        Family::D => {
            run_product_pass(n, ProductKind::Decreasing, false, true, bound, &mut sink)?
        }
        Family::PO => run_ordered_pass(n, ordered(false, false, false, false), bound, &mut sink)?,
        Family::PR => run_ordered_pass(n, ordered(true, false, false, false), bound, &mut sink)?,
        Family::PM => {
            run_ordered_pass(n, ordered(false, false, false, false), bound, &mut sink)?;
            run_ordered_pass(n, star(ordered(true, false, false, false)), bound, &mut sink)?;
        }
        Family::PC => run_ordered_pass(n, ordered(false, true, false, false), bound, &mut sink)?,
        Family::IC => run_ordered_pass(n, ordered(false, true, true, false), bound, &mut sink)?,
        Family::IO => run_ordered_pass(n, ordered(false, false, true, false), bound, &mut sink)?,
        Family::PMD => {
            run_ordered_pass(n, ordered(false, true, false, false), bound, &mut sink)?;
            run_ordered_pass(n, star(ordered(true, true, false, false)), bound, &mut sink)?;
        }
        Family::IMD => {
            run_ordered_pass(n, ordered(false, true, true, false), bound, &mut sink)?;
            run_ordered_pass(n, star(ordered(true, true, true, false)), bound, &mut sink)?;
        }
        Family::PRD => run_ordered_pass(n, ordered(true, true, false, false), bound, &mut sink)?,
        Family::PRDStar => {
            run_ordered_pass(n, star(ordered(true, true, false, false)), bound, &mut sink)?
        }
        Family::IRD => run_ordered_pass(n, ordered(true, true, true, false), bound, &mut sink)?,
        Family::IRDStar => {
            run_ordered_pass(n, star(ordered(true, true, true, false)), bound, &mut sink)?
        }
        Family::C => run_ordered_pass(n, ordered(false, true, false, true), bound, &mut sink)?,
        Family::O => run_ordered_pass(n, ordered(false, false, false, true), bound, &mut sink)?,
        Family::M => {
            run_ordered_pass(n, ordered(false, false, false, true), bound, &mut sink)?;
            run_ordered_pass(n, star(ordered(true, false, false, true)), bound, &mut sink)?;
        }
    }
    Ok(sink.finish())
}

/// Enumerates one layer.
pub fn enumerate_layer(spec: &LayerSpec) -> Result<Vec<PartialTransformation>> {
    spec.validate()?;
    let n = spec.degree;
    let mut sink = Sink::new(DEFAULT_BUDGET, None);
    match spec.kind {
        LayerKind::Q { m } => layer_reversing(n, m, None, &mut sink, false)?,
        // K layers live in the starred part, so they are empty below r = 2
        LayerKind::K { r, max_image } if r >= 2 => match max_image {
            Some(s) => layer_reversing(n, s, Some(r), &mut sink, false)?,
            None => {
                for s in r..=(n + 1).saturating_sub(r) {
                    layer_reversing(n, s, Some(r), &mut sink, false)?;
                }
            }
        },
        LayerKind::K { .. } => {}
        LayerKind::KInj { r } if r >= 2 => {
            for s in r..=(n + 1).saturating_sub(r) {
                layer_reversing(n, s, Some(r), &mut sink, true)?;
            }
        }
        LayerKind::KInj { .. } => {}
        LayerKind::J { r } => layer_preserving(n, r, false, &mut sink)?,
        LayerKind::JInj { r } => layer_preserving(n, r, true, &mut sink)?,
        LayerKind::L { r } => {
            layer_preserving(n, r, false, &mut sink)?;
            if r >= 2 {
                for s in r..=(n + 1).saturating_sub(r) {
                    layer_reversing(n, s, Some(r), &mut sink, false)?;
                }
            }
        }
        LayerKind::LInj { r } => {
            layer_preserving(n, r, true, &mut sink)?;
            if r >= 2 {
                for s in r..=(n + 1).saturating_sub(r) {
                    layer_reversing(n, s, Some(r), &mut sink, true)?;
                }
            }
        }
        LayerKind::EJ { r } => layer_idempotents(n, r, &mut sink)?,
    }
    Ok(sink.finish())
}

/// Order-reversing decreasing maps with `max(im) = s`, restricted to image
/// size `exact` when given (the `Q(n, s)` and `K_r(s)` layers). The layers
/// with `exact >= 2` are empty unless `r <= s <= n - r + 1`.
fn layer_reversing(
    n: u8,
    s: u8,
    exact: Option<u8>,
    sink: &mut Sink,
    injective: bool,
) -> Result<()> {
    if s == 0 {
        if exact.is_none() {
            sink.push(PartialTransformation::zero(n as usize))?;
        }
        return Ok(());
    }
    // domain lives inside [s, n]
    let window: Vec<u8> = (s..=n).collect();
    let w = window.len();
    for mask in 1u32..(1 << w) {
        let points: Vec<u8> = (0..w)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| window[i])
            .collect();
        let t = points.len();
        let heights: Vec<u8> = match exact {
            Some(r) => vec![r],
            None => (1..=t as u8).collect(),
        };
        for k in heights {
            let k = k as usize;
            if k == 0 || k > t || k > s as usize {
                continue;
            }
            if injective && k != t {
                continue;
            }
            // images are {s} plus a (k-1)-subset of [1, s-1]
            let cut_masks: Vec<u32> = if injective {
                vec![(1u32 << (t - 1)) - 1]
            } else {
                (0u32..(1 << (t - 1)))
                    .filter(|c| c.count_ones() as usize == k - 1)
                    .collect()
            };
            for cuts in cut_masks {
                let mut blocks: Vec<(usize, usize)> = Vec::with_capacity(k);
                let mut start = 0;
                for i in 0..t.saturating_sub(1) {
                    if cuts & (1 << i) != 0 {
                        blocks.push((start, i + 1 - start));
                        start = i + 1;
                    }
                }
                blocks.push((start, t - start));
                let mut rest = vec![0u8; k - 1];
                choose_rest_images(n, s, &points, &blocks, 0, 1, &mut rest, sink)?;
            }
        }
    }
    Ok(())
}

/// Picks the images below the top value `s` for one reversing layer block
/// structure, then emits the map.
#[allow(clippy::too_many_arguments)]
fn choose_rest_images(
    n: u8,
    s: u8,
    points: &[u8],
    blocks: &[(usize, usize)],
    idx: usize,
    lo: u8,
    rest: &mut [u8],
    sink: &mut Sink,
) -> Result<()> {
    let k = blocks.len();
    if idx == k - 1 {
        let mut images = [0u8; MAX_DEGREE];
        // ascending image list: rest then s on top; block i gets the
        // (k - i)-th smallest
        for (i, &(start, len)) in blocks.iter().enumerate() {
            let img = if i == 0 {
                s
            } else {
                rest[k - 1 - i]
            };
            for &p in &points[start..start + len] {
                images[(p - 1) as usize] = img;
            }
        }
        return sink.push(PartialTransformation::from_images(n, images));
    }
    let remaining = (k - 2 - idx) as u8;
    for v in lo..=(s - 1).saturating_sub(remaining) {
        rest[idx] = v;
        choose_rest_images(n, s, points, blocks, idx + 1, v + 1, rest, sink)?;
    }
    Ok(())
}

/// Order-preserving decreasing maps of image size exactly `r`.
fn layer_preserving(n: u8, r: u8, injective: bool, sink: &mut Sink) -> Result<()> {
    if r == 0 {
        return sink.push(PartialTransformation::zero(n as usize));
    }
    let pass = OrderedPass {
        reversing: false,
        decreasing: true,
        injective,
        full: false,
        min_height: r as usize,
    };
    // min_height == bound == r pins the image size exactly
    for mask in domain_masks(n, false) {
        let points = mask_points(mask);
        let t = points.len();
        if t < r as usize {
            continue;
        }
        if injective {
            if t == r as usize {
                let blocks: Vec<(usize, usize)> = (0..t).map(|i| (i, 1)).collect();
                assign_images(n, &points, &blocks, pass, sink)?;
            }
            continue;
        }
        for cuts in 0u32..(1 << (t - 1)) {
            if cuts.count_ones() as usize + 1 != r as usize {
                continue;
            }
            let mut blocks: Vec<(usize, usize)> = Vec::with_capacity(r as usize);
            let mut start = 0;
            for i in 0..t - 1 {
                if cuts & (1 << i) != 0 {
                    blocks.push((start, i + 1 - start));
                    start = i + 1;
                }
            }
            blocks.push((start, t - start));
            assign_images(n, &points, &blocks, pass, sink)?;
        }
    }
    Ok(())
}

/// Idempotents of image size exactly `r`: each block of a convex ordered
/// partition collapses onto its minimum.
fn layer_idempotents(n: u8, r: u8, sink: &mut Sink) -> Result<()> {
    if r == 0 {
        return sink.push(PartialTransformation::zero(n as usize));
    }
    for mask in domain_masks(n, false) {
        let points = mask_points(mask);
        let t = points.len();
        if t < r as usize {
            continue;
        }
        for cuts in 0u32..(1 << (t - 1)) {
            if cuts.count_ones() as usize + 1 != r as usize {
                continue;
            }
            let mut images = [0u8; MAX_DEGREE];
            let mut block_min = points[0];
            for i in 0..t {
                if i > 0 && cuts & (1 << (i - 1)) != 0 {
                    block_min = points[i];
                }
                images[(points[i] - 1) as usize] = block_min;
            }
            sink.push(PartialTransformation::from_images(n, images))?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Streams all `(n+1)^n` partial maps of degree `n` in odometer order.
pub fn partial_maps(n: u8) -> impl Iterator<Item = PartialTransformation> {
    assert!(n >= 1 && n as usize <= MAX_DEGREE);
    let mut images = [0u8; MAX_DEGREE];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = PartialTransformation::from_images(n, images);
        // increment the odometer
        let mut i = 0;
        loop {
            if i == n as usize {
                done = true;
                break;
            }
            if images[i] < n {
                images[i] += 1;
                break;
            }
            images[i] = 0;
            i += 1;
        }
        Some(current)
    })
}

/// Independent oracle: scan all partial maps and keep the members.
/// Restricted to `n <= 8`.
pub fn filter_oracle(spec: &FamilySpec) -> Result<Vec<PartialTransformation>> {
    spec.validate()?;
    if spec.degree > 8 {
        return Err(Error::InvalidParameter(format!(
            "filter oracle is limited to n <= 8, got n={}",
            spec.degree
        )));
    }
    let mut out: Vec<PartialTransformation> = partial_maps(spec.degree)
        .filter(|a| spec.contains(a))
        .collect();
    if out.len() > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded {
            budget: DEFAULT_BUDGET,
            predicted: None,
            reached: out.len(),
        });
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// Layer oracle: scan all partial maps and keep the layer members.
pub fn filter_oracle_layer(spec: &LayerSpec) -> Result<Vec<PartialTransformation>> {
    spec.validate()?;
    if spec.degree > 8 {
        return Err(Error::InvalidParameter(format!(
            "filter oracle is limited to n <= 8, got n={}",
            spec.degree
        )));
    }
    let mut out: Vec<PartialTransformation> = partial_maps(spec.degree)
        .filter(|a| spec.contains(a))
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Cardinality predictions
// ---------------------------------------------------------------------------

/// Exact predicted cardinality, where a counting formula exists.
pub fn predicted_cardinality(spec: &FamilySpec) -> Option<Count> {
    let n = spec.degree as u64;
    let r = spec.bound() as u64;
    let full_range = r >= n;
    if r == 0 {
        return Some(if spec.family.is_full() {
            BigUint::from(0u32)
        } else {
            BigUint::one()
        });
    }
    let factorial = |k: u64| -> Count { (1..=k).map(BigUint::from).product() };
    match spec.family {
        Family::PT if full_range => Some(BigUint::from(n + 1).pow(n as u32)),
        Family::I => Some(
            (0..=r.min(n))
                .map(|k| {
                    let b = counting::binomial(n, k);
                    &b * &b * factorial(k)
                })
                .sum(),
        ),
        Family::PD if full_range => Some(factorial(n + 1)),
        Family::PE if full_range => Some(factorial(n + 1)),
        Family::D if full_range => Some(factorial(n)),
        Family::PC if full_range => Some(counting::card_pc(n)),
        Family::PMD if full_range => Some(counting::card_pmd(n)),
        Family::IC => counting::card_ic(n, r.min(n)).ok(),
        Family::IO => Some(counting::card_io(n, r)),
        Family::IMD => {
            if r >= 2 {
                counting::card_imd(n, r.min(n)).ok()
            } else {
                counting::card_ic(n, r).ok()
            }
        }
        Family::PRD => {
            // zero map + height-1 maps + the starred layers
            let mut total = BigUint::one() + counting::pow2(n + 1)
                - BigUint::from(n)
                - BigUint::from(2u32);
            for k in 2..=r {
                total += counting::card_k(n, k);
            }
            Some(total)
        }
        Family::PRDStar => Some((2..=r).map(|k| counting::card_k(n, k)).sum()),
        Family::IRD => {
            let mut total = BigUint::one() + BigUint::from(n * (n + 1) / 2);
            for k in 2..=r {
                total += counting::card_k_inj(n, k);
            }
            Some(total)
        }
        Family::IRDStar => Some((2..=r).map(|k| counting::card_k_inj(n, k)).sum()),
        Family::C => Some(
            (1..=r.min(n))
                .map(|k| counting::narayana(n, k).expect("valid range"))
                .sum(),
        ),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> PartialTransformation {
        PartialTransformation::parse(s).unwrap()
    }

    fn count(family: Family, n: u8) -> usize {
        enumerate(&FamilySpec::new(family, n)).unwrap().len()
    }

    #[test]
    fn family_name_round_trip_and_aliases() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()).unwrap(), f);
        }
        assert_eq!(Family::parse("CN_FULL").unwrap(), Family::C);
        assert_eq!(Family::parse("prd*").unwrap(), Family::PRDStar);
        assert!(Family::parse("XYZ").is_err());
    }

    #[test]
    fn spot_cardinalities() {
        assert_eq!(count(Family::PRD, 4), 34);
        assert_eq!(count(Family::PMD, 1), 2);
        assert_eq!(count(Family::IMD, 4), 47);
        assert_eq!(count(Family::PC, 3), 22);
        assert_eq!(count(Family::C, 3), 5);
        assert_eq!(count(Family::PT, 3), 64);
        assert_eq!(count(Family::PMD, 5), 425);
    }

    #[test]
    fn enumerate_agrees_with_oracle_at_small_degrees() {
        for n in 1..=4u8 {
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
    fn enumerate_respects_image_bounds() {
        for family in Family::ALL {
            for r in 0..=4u8 {
                let spec = FamilySpec::bounded(family, 4, r);
                assert_eq!(
                    enumerate(&spec).unwrap(),
                    filter_oracle(&spec).unwrap(),
                    "family {family:?} bounded at r={r}"
                );
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            filter_oracle(&FamilySpec::new(Family::PRDStar, 3)).unwrap(),
            vec![pt("n=3:[2:2,3:1]")]
        );
        assert_eq!(filter_oracle(&FamilySpec::new(Family::IC, 4)).unwrap().len(), 42);
    }

    #[test]
    fn q_layers_partition_prd() {
        for n in 1..=5u8 {
            let prd = enumerate(&FamilySpec::new(Family::PRD, n)).unwrap();
            let mut union = Vec::new();
            for m in 0..=n {
                let layer =
                    enumerate_layer(&LayerSpec::new(LayerKind::Q { m }, n)).unwrap();
                for a in &layer {
                    assert_eq!(a.max_im().unwrap_or(0), m, "layer Q({n},{m})");
                }
                union.extend(layer);
            }
            sort_canonical(&mut union);
            assert_eq!(union, prd, "Q layers at n={n}");
        }
        let q53 = enumerate_layer(&LayerSpec::new(LayerKind::Q { m: 3 }, 5)).unwrap();
        assert_eq!(q53.len(), 18);
    }

    #[test]
    fn k_layers_partition_prd_star() {
        for n in 3..=6u8 {
            let star = enumerate(&FamilySpec::new(Family::PRDStar, n)).unwrap();
            let mut union = Vec::new();
            for r in 0..=n {
                union.extend(
                    enumerate_layer(&LayerSpec::new(
                        LayerKind::K { r, max_image: None },
                        n,
                    ))
                    .unwrap(),
                );
            }
            sort_canonical(&mut union);
            assert_eq!(union, star, "K layers at n={n}");
        }
        // K_m at odd n is the single middle reflection
        let km = enumerate_layer(&LayerSpec::new(
            LayerKind::K { r: 4, max_image: None },
            7,
        ))
        .unwrap();
        assert_eq!(km.len(), 1);
        assert_eq!(km[0], pt("n=7:[4:4,5:3,6:2,7:1]"));
    }

    #[test]
    fn k_sub_layers_and_bounds() {
        let k2 = enumerate_layer(&LayerSpec::new(LayerKind::K { r: 2, max_image: None }, 5))
            .unwrap();
        let mut union = Vec::new();
        for s in 2..=4u8 {
            union.extend(
                enumerate_layer(&LayerSpec::new(
                    LayerKind::K { r: 2, max_image: Some(s) },
                    5,
                ))
                .unwrap(),
            );
        }
        sort_canonical(&mut union);
        assert_eq!(union, k2);
        assert!(enumerate_layer(&LayerSpec::new(
            LayerKind::K { r: 2, max_image: Some(5) },
            5
        ))
        .is_err());
    }

    #[test]
    fn layers_match_oracle() {
        let n = 5;
        let kinds = [
            LayerKind::Q { m: 2 },
            LayerKind::K { r: 2, max_image: None },
            LayerKind::K { r: 3, max_image: Some(3) },
            LayerKind::KInj { r: 2 },
            LayerKind::J { r: 2 },
            LayerKind::JInj { r: 3 },
            LayerKind::L { r: 2 },
            LayerKind::LInj { r: 2 },
            LayerKind::EJ { r: 2 },
        ];
        for kind in kinds {
            let spec = LayerSpec::new(kind, n);
            assert_eq!(
                enumerate_layer(&spec).unwrap(),
                filter_oracle_layer(&spec).unwrap(),
                "layer {spec}"
            );
        }
    }

    #[test]
    fn containment_lattice() {
        let n = 4;
        let imd = enumerate(&FamilySpec::new(Family::IMD, n)).unwrap();
        let pmd = enumerate(&FamilySpec::new(Family::PMD, n)).unwrap();
        let pd = enumerate(&FamilySpec::new(Family::PD, n)).unwrap();
        for a in &imd {
            assert!(pmd.binary_search_by(|x| x.canonical_cmp(a)).is_ok());
        }
        for a in &pmd {
            assert!(pd.binary_search_by(|x| x.canonical_cmp(a)).is_ok());
        }
        // IC = PC ∩ I and PMD(n,r) = PC(n,r) ∪ PRD*(n,r)
        let pc = enumerate(&FamilySpec::new(Family::PC, n)).unwrap();
        let ic = enumerate(&FamilySpec::new(Family::IC, n)).unwrap();
        let expected: Vec<_> = pc.iter().copied().filter(|a| a.is_injective()).collect();
        assert_eq!(ic, expected);
        for r in 2..=n {
            let pmd_r = enumerate(&FamilySpec::bounded(Family::PMD, n, r)).unwrap();
            let mut union = enumerate(&FamilySpec::bounded(Family::PC, n, r)).unwrap();
            union.extend(enumerate(&FamilySpec::bounded(Family::PRDStar, n, r)).unwrap());
            sort_canonical(&mut union);
            assert_eq!(pmd_r, union);
        }
    }

    #[test]
    fn pmd_equals_pc_only_below_degree_three() {
        for n in 1..=2u8 {
            assert_eq!(count(Family::PMD, n), count(Family::PC, n));
            assert_eq!(count(Family::IMD, n), count(Family::IC, n));
        }
        for n in 3..=5u8 {
            let spec = FamilySpec::new(Family::PMD, n);
            let mut witness = PartialTransformation::from_pairs(n as usize, &[(2, 2)]).unwrap();
            for x in 3..=n {
                witness = PartialTransformation::from_pairs(
                    n as usize,
                    &witness
                        .pairs()
                        .chain(std::iter::once((x, 1)))
                        .collect::<Vec<_>>(),
                )
                .unwrap();
            }
            assert!(spec.contains(&witness));
            assert!(!Family::PC.is_member(&witness));
            assert!(count(Family::PMD, n) > count(Family::PC, n));
        }
    }

    #[test]
    fn preserving_and_reversing_meet_in_low_heights() {
        for a in partial_maps(4) {
            let both = a.is_order_preserving() && a.is_order_reversing();
            assert_eq!(both, a.height() <= 1, "{a}");
        }
    }

    #[test]
    fn reversing_families_are_not_closed_at_degree_four() {
        let a = pt("n=4:[3:3,4:2]");
        let b = pt("n=4:[2:2,3:1]");
        assert!(Family::PRDStar.is_member(&a));
        assert!(Family::PRDStar.is_member(&b));
        let ab = a.compose(&b);
        assert_eq!(ab, pt("n=4:[3:1,4:2]"));
        assert!(!Family::PRD.is_member(&ab));
        assert!(Family::PC.is_member(&ab));
    }

    #[test]
    fn budget_errors_name_the_predicted_cardinality() {
        let spec = FamilySpec::new(Family::PT, 7);
        match enumerate_with_budget(&spec, 1000) {
            Err(Error::BudgetExceeded { predicted, .. }) => {
                assert_eq!(predicted.as_deref(), Some("2097152"));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn predictions_match_enumerations() {
        for n in 1..=5u8 {
            for family in Family::ALL {
                for bound in [None, Some(2.min(n))] {
                    let spec = FamilySpec {
                        family,
                        degree: n,
                        image_bound: bound,
                    };
                    if let Some(p) = predicted_cardinality(&spec) {
                        assert_eq!(
                            BigUint::from(enumerate(&spec).unwrap().len()),
                            p,
                            "prediction for {spec}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_image_bounds() {
        let zero_only = enumerate(&FamilySpec::bounded(Family::PMD, 4, 0)).unwrap();
        assert_eq!(zero_only, vec![PartialTransformation::zero(4)]);
        let height_one = enumerate(&FamilySpec::bounded(Family::PMD, 4, 1)).unwrap();
        let pd_one = enumerate(&FamilySpec::bounded(Family::PD, 4, 1)).unwrap();
        assert_eq!(height_one, pd_one);
        assert!(enumerate(&FamilySpec::bounded(Family::PMD, 4, 5)).is_err());
    }
}
