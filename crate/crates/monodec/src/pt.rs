//! Partial transformations of the finite chain `{1 < 2 < … < n}`.
//!
//! A [`PartialTransformation`] is a map from a subset of the chain into the
//! chain, stored densely so that composition, hashing and equality are all
//! `O(n)`. Values are immutable and `Copy`; every operation is a pure
//! function, so they can be shared freely across threads.
//!
//! The canonical text form is `n=<degree>:[<d>:<i>,…]` with the domain
//! points in strictly increasing order, e.g. `n=4:[2:2,3:1,4:1]`, and
//! `n=3:[]` for the empty map.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported chain size.
pub const MAX_DEGREE: usize = 16;

/// A partial self-map of the chain `{1, …, degree}`.
///
/// `images[i]` holds the image of point `i + 1`, with `0` marking points
/// outside the domain.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialTransformation {
    degree: u8,
    images: [u8; MAX_DEGREE],
}

impl PartialTransformation {
    fn check_degree(n: usize) -> Result<u8> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(n));
        }
        Ok(n as u8)
    }

    /// The empty map `0_n`.
    pub fn zero(n: usize) -> Self {
        let degree = Self::check_degree(n).expect("degree in range");
        PartialTransformation {
            degree,
            images: [0; MAX_DEGREE],
        }
    }

    /// The identity `1_n` on the whole chain.
    pub fn identity(n: usize) -> Self {
        let degree = Self::check_degree(n).expect("degree in range");
        let mut images = [0; MAX_DEGREE];
        for x in 1..=degree {
            images[(x - 1) as usize] = x;
        }
        PartialTransformation { degree, images }
    }

    /// The partial identity `1_Y` on a subset `Y` of the chain.
    pub fn identity_on(points: &[u8], n: usize) -> Result<Self> {
        let degree = Self::check_degree(n)?;
        let mut images = [0; MAX_DEGREE];
        for &x in points {
            if x == 0 || x > degree {
                return Err(Error::PointOutOfRange { point: x, degree });
            }
            images[(x - 1) as usize] = x;
        }
        Ok(PartialTransformation { degree, images })
    }

    /// Builds a map from `(point, image)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(u8, u8)]) -> Result<Self> {
        let degree = Self::check_degree(n)?;
        let mut images = [0; MAX_DEGREE];
        for &(x, y) in pairs {
            if x == 0 || x > degree {
                return Err(Error::PointOutOfRange { point: x, degree });
            }
            if y == 0 || y > degree {
                return Err(Error::PointOutOfRange { point: y, degree });
            }
            if images[(x - 1) as usize] != 0 {
                return Err(Error::InvalidParameter(format!(
                    "duplicate domain point {x}"
                )));
            }
            images[(x - 1) as usize] = y;
        }
        Ok(PartialTransformation { degree, images })
    }

    pub(crate) fn from_images(degree: u8, images: [u8; MAX_DEGREE]) -> Self {
        PartialTransformation { degree, images }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Image of `x`, or `None` when `x` lies outside the domain.
    pub fn apply(&self, x: u8) -> Option<u8> {
        if x == 0 || x > self.degree {
            return None;
        }
        match self.images[(x - 1) as usize] {
            0 => None,
            y => Some(y),
        }
    }

    pub fn is_defined(&self, x: u8) -> bool {
        self.apply(x).is_some()
    }

    /// `(point, image)` pairs in increasing domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        (1..=self.degree).filter_map(move |x| self.apply(x).map(|y| (x, y)))
    }

    /// Domain in increasing order.
    pub fn dom(&self) -> Vec<u8> {
        self.pairs().map(|(x, _)| x).collect()
    }

    /// Image in increasing order (without repetitions).
    pub fn im(&self) -> Vec<u8> {
        let mask = self.image_mask();
        (1..=self.degree).filter(|x| mask & (1 << x) != 0).collect()
    }

    /// Fixed points in increasing order.
    pub fn fix(&self) -> Vec<u8> {
        self.pairs().filter(|&(x, y)| x == y).map(|(x, _)| x).collect()
    }

    pub fn dom_size(&self) -> usize {
        self.pairs().count()
    }

    /// `|im(α)|`.
    pub fn height(&self) -> usize {
        self.image_mask().count_ones() as usize
    }

    pub(crate) fn image_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (_, y) in self.pairs() {
            mask |= 1 << y;
        }
        mask
    }

    pub fn min_dom(&self) -> Option<u8> {
        self.pairs().next().map(|(x, _)| x)
    }

    pub fn max_dom(&self) -> Option<u8> {
        self.pairs().last().map(|(x, _)| x)
    }

    pub fn min_im(&self) -> Option<u8> {
        self.im().first().copied()
    }

    pub fn max_im(&self) -> Option<u8> {
        self.im().last().copied()
    }

    /// Kernel of the map: the partition of the domain by equal images.
    pub fn kernel(&self) -> KernelPartition {
        let mut blocks: Vec<(u8, Vec<u8>)> = Vec::new();
        for (x, y) in self.pairs() {
            match blocks.iter_mut().find(|(img, _)| *img == y) {
                Some((_, block)) => block.push(x),
                None => blocks.push((y, vec![x])),
            }
        }
        let mut blocks: Vec<Vec<u8>> = blocks.into_iter().map(|(_, b)| b).collect();
        blocks.sort_by_key(|b| b[0]);
        KernelPartition {
            degree: self.degree,
            blocks,
        }
    }

    /// Left-to-right composition: `x(ab) = (xa)b`.
    ///
    /// Panics when the degrees differ; use [`try_compose`](Self::try_compose)
    /// for a fallible variant.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree, other.degree,
            "cannot compose transformations of different degrees"
        );
        let mut images = [0; MAX_DEGREE];
        for i in 0..self.degree as usize {
            let mid = self.images[i];
            if mid != 0 {
                images[i] = other.images[(mid - 1) as usize];
            }
        }
        PartialTransformation {
            degree: self.degree,
            images,
        }
    }

    pub fn try_compose(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(self.compose(other))
    }

    /// Restriction to `dom(α) ∩ Y`.
    pub fn restrict(&self, points: &[u8]) -> Result<Self> {
        let mut keep = 0u32;
        for &x in points {
            if x == 0 || x > self.degree {
                return Err(Error::PointOutOfRange {
                    point: x,
                    degree: self.degree,
                });
            }
            keep |= 1 << x;
        }
        let mut images = [0; MAX_DEGREE];
        for (x, y) in self.pairs() {
            if keep & (1 << x) != 0 {
                images[(x - 1) as usize] = y;
            }
        }
        Ok(PartialTransformation {
            degree: self.degree,
            images,
        })
    }

    pub fn is_full(&self) -> bool {
        (1..=self.degree).all(|x| self.is_defined(x))
    }

    /// `x ≤ y` implies `xα ≤ yα` on the domain. Vacuously true on the empty
    /// map and on singleton domains.
    pub fn is_order_preserving(&self) -> bool {
        let mut prev: Option<u8> = None;
        for (_, y) in self.pairs() {
            if let Some(p) = prev {
                if y < p {
                    return false;
                }
            }
            prev = Some(y);
        }
        true
    }

    /// `x ≤ y` implies `yα ≤ xα` on the domain.
    pub fn is_order_reversing(&self) -> bool {
        let mut prev: Option<u8> = None;
        for (_, y) in self.pairs() {
            if let Some(p) = prev {
                if y > p {
                    return false;
                }
            }
            prev = Some(y);
        }
        true
    }

    pub fn is_monotone(&self) -> bool {
        self.is_order_preserving() || self.is_order_reversing()
    }

    /// `xα ≤ x` for every point of the domain.
    pub fn is_order_decreasing(&self) -> bool {
        self.pairs().all(|(x, y)| y <= x)
    }

    /// `x ≤ xα` for every point of the domain.
    pub fn is_extensive(&self) -> bool {
        self.pairs().all(|(x, y)| y >= x)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u32;
        for (_, y) in self.pairs() {
            if seen & (1 << y) != 0 {
                return false;
            }
            seen |= 1 << y;
        }
        true
    }

    /// `α² = α`.
    pub fn is_idempotent(&self) -> bool {
        self.compose(self) == *self
    }

    /// `α³ = α²`.
    pub fn is_quasi_idempotent(&self) -> bool {
        let square = self.compose(self);
        square.compose(self) == square
    }

    fn write_canonical(&self, buf: &mut [u8; 112]) -> usize {
        let mut pos = 0;
        let push = |buf: &mut [u8; 112], byte: u8, pos: &mut usize| {
            buf[*pos] = byte;
            *pos += 1;
        };
        let push_num = |buf: &mut [u8; 112], num: u8, pos: &mut usize| {
            if num >= 10 {
                buf[*pos] = b'0' + num / 10;
                *pos += 1;
            }
            buf[*pos] = b'0' + num % 10;
            *pos += 1;
        };
        push(buf, b'n', &mut pos);
        push(buf, b'=', &mut pos);
        push_num(buf, self.degree, &mut pos);
        push(buf, b':', &mut pos);
        push(buf, b'[', &mut pos);
        let mut first = true;
        for (x, y) in self.pairs() {
            if !first {
                push(buf, b',', &mut pos);
            }
            first = false;
            push_num(buf, x, &mut pos);
            push(buf, b':', &mut pos);
            push_num(buf, y, &mut pos);
        }
        push(buf, b']', &mut pos);
        pos
    }

    /// Lexicographic comparison of the canonical text forms, without heap
    /// allocation. This is the order used for all deterministic output.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let mut a = [0u8; 112];
        let mut b = [0u8; 112];
        let la = self.write_canonical(&mut a);
        let lb = other.write_canonical(&mut b);
        a[..la].cmp(&b[..lb])
    }

    /// Canonical text form, `parse`-able back to the same value.
    pub fn canonical(&self) -> String {
        let mut buf = [0u8; 112];
        let len = self.write_canonical(&mut buf);
        String::from_utf8_lossy(&buf[..len]).into_owned()
    }

    /// Parses the canonical grammar `n=<int>:[<d>:<i>(,<d>:<i>)*]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut pos = 0;

        fn expect(bytes: &[u8], pos: &mut usize, what: &str) -> Result<()> {
            for ch in what.bytes() {
                if bytes.get(*pos) != Some(&ch) {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: format!("expected '{}'", what),
                    });
                }
                *pos += 1;
            }
            Ok(())
        }

        fn number(bytes: &[u8], pos: &mut usize) -> Result<usize> {
            let start = *pos;
            let mut value = 0usize;
            while let Some(&c) = bytes.get(*pos) {
                if c.is_ascii_digit() {
                    value = value * 10 + (c - b'0') as usize;
                    if value > 1000 {
                        return Err(Error::Parse {
                            pos: start,
                            msg: "number too large".into(),
                        });
                    }
                    *pos += 1;
                } else {
                    break;
                }
            }
            if *pos == start {
                return Err(Error::Parse {
                    pos: start,
                    msg: "expected a number".into(),
                });
            }
            Ok(value)
        }

        expect(bytes, &mut pos, "n=")?;
        let deg_pos = pos;
        let n = number(bytes, &mut pos)?;
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::Parse {
                pos: deg_pos,
                msg: format!("degree must lie in [1, {MAX_DEGREE}]"),
            });
        }
        expect(bytes, &mut pos, ":[")?;
        let mut images = [0u8; MAX_DEGREE];
        let mut last_point = 0u8;
        if bytes.get(pos) != Some(&b']') {
            loop {
                let point_pos = pos;
                let x = number(bytes, &mut pos)?;
                if x == 0 || x > n {
                    return Err(Error::Parse {
                        pos: point_pos,
                        msg: format!("domain point {x} outside [1, {n}]"),
                    });
                }
                if (x as u8) <= last_point {
                    return Err(Error::Parse {
                        pos: point_pos,
                        msg: "domain points must be strictly increasing".into(),
                    });
                }
                last_point = x as u8;
                expect(bytes, &mut pos, ":")?;
                let image_pos = pos;
                let y = number(bytes, &mut pos)?;
                if y == 0 || y > n {
                    return Err(Error::Parse {
                        pos: image_pos,
                        msg: format!("image {y} outside [1, {n}]"),
                    });
                }
                images[x - 1] = y as u8;
                match bytes.get(pos) {
                    Some(&b',') => pos += 1,
                    Some(&b']') => break,
                    _ => {
                        return Err(Error::Parse {
                            pos,
                            msg: "expected ',' or ']'".into(),
                        })
                    }
                }
            }
        }
        expect(bytes, &mut pos, "]")?;
        if pos != bytes.len() {
            return Err(Error::Parse {
                pos,
                msg: "trailing input after ']'".into(),
            });
        }
        Ok(PartialTransformation {
            degree: n as u8,
            images,
        })
    }
}

impl fmt::Display for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl fmt::Debug for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for PartialTransformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartialTransformation::parse(s)
    }
}

/// The kernel `ker(α)` restricted to the domain, as a set partition.
///
/// Blocks are stored in increasing order of their minima, each block in
/// increasing order, so structural equality is set equality of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KernelPartition {
    degree: u8,
    blocks: Vec<Vec<u8>>,
}

impl KernelPartition {
    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// True when every block is a singleton, i.e. the map is injective.
    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// Sorts a slice of transformations into canonical text order.
pub fn sort_canonical(elements: &mut [PartialTransformation]) {
    elements.sort_by(|a, b| a.canonical_cmp(b));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> PartialTransformation {
        PartialTransformation::parse(s).unwrap()
    }

    #[test]
    fn zero_and_identity() {
        let z = PartialTransformation::zero(4);
        let id = PartialTransformation::identity(4);
        assert_eq!(z.dom(), Vec::<u8>::new());
        assert_eq!(z.height(), 0);
        assert_eq!(id.dom(), vec![1, 2, 3, 4]);
        assert_eq!(id.fix(), vec![1, 2, 3, 4]);
        assert_eq!(id.kernel().block_count(), 4);
        assert!(id.kernel().is_diagonal());
    }

    #[test]
    fn compose_absorbs_zero_and_respects_identity() {
        let a = pt("n=4:[2:2,3:1,4:1]");
        let z = PartialTransformation::zero(4);
        let id = PartialTransformation::identity(4);
        assert_eq!(z.compose(&a), z);
        assert_eq!(a.compose(&z), z);
        assert_eq!(id.compose(&a), a);
        assert_eq!(a.compose(&id), a);
    }

    #[test]
    fn compose_drops_points_leaving_the_second_domain() {
        let a = pt("n=3:[2:2,3:1]");
        let b = pt("n=3:[1:1]");
        assert_eq!(a.compose(&b), pt("n=3:[3:1]"));
    }

    #[test]
    fn compose_degree_mismatch_is_an_error() {
        let a = PartialTransformation::identity(3);
        let b = PartialTransformation::identity(4);
        assert_eq!(a.try_compose(&b), Err(Error::DegreeMismatch(3, 4)));
    }

    #[test]
    fn dom_im_fix_height_kernel_of_running_example() {
        // 2 ↦ 2 and everything above ↦ 1: monotone, decreasing, not
        // order-preserving once the degree reaches 3.
        let a = pt("n=4:[2:2,3:1,4:1]");
        assert_eq!(a.dom(), vec![2, 3, 4]);
        assert_eq!(a.im(), vec![1, 2]);
        assert_eq!(a.fix(), vec![2]);
        assert_eq!(a.height(), 2);
        assert_eq!(a.kernel().blocks(), &[vec![2], vec![3, 4]]);
        assert!(!a.is_order_preserving());
        assert!(a.is_order_reversing());
        assert!(a.is_order_decreasing());
        assert!(!a.is_injective());
        assert!(a.is_monotone());
    }

    #[test]
    fn vacuous_predicates_on_empty_and_singleton_maps() {
        let z = PartialTransformation::zero(5);
        assert!(z.is_order_preserving());
        assert!(z.is_order_reversing());
        assert!(z.is_monotone());
        assert!(z.is_order_decreasing());
        assert!(z.is_injective());
        let s = pt("n=5:[4:2]");
        assert!(s.is_order_preserving());
        assert!(s.is_order_reversing());
        assert!(s.is_order_decreasing());
        assert!(s.is_injective());
    }

    #[test]
    fn partial_identities_are_idempotent() {
        for mask in 0u32..(1 << 5) {
            let points: Vec<u8> = (1..=5).filter(|x| mask & (1 << (x - 1)) != 0).collect();
            let e = PartialTransformation::identity_on(&points, 5).unwrap();
            assert!(e.is_idempotent());
        }
    }

    #[test]
    fn gamma_two_is_quasi_idempotent_but_not_idempotent() {
        let g = pt("n=3:[2:2,3:1]");
        assert!(!g.is_idempotent());
        assert!(g.is_quasi_idempotent());
        assert_eq!(g.compose(&g), pt("n=3:[2:2]"));
    }

    #[test]
    fn identity_on_empty_set_is_zero() {
        assert_eq!(
            PartialTransformation::identity_on(&[], 3).unwrap(),
            PartialTransformation::zero(3)
        );
        assert!(PartialTransformation::identity_on(&[4], 3).is_err());
    }

    #[test]
    fn restrict_to_domain_is_identity_operation() {
        let a = pt("n=4:[2:2,3:1,4:1]");
        assert_eq!(a.restrict(&a.dom()).unwrap(), a);
        assert_eq!(a.restrict(&[3, 4]).unwrap(), pt("n=4:[3:1,4:1]"));
        assert!(a.restrict(&[9]).is_err());
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["n=4:[2:2,3:1,4:1]", "n=3:[]", "n=12:[1:1,10:3,12:11]"] {
            let a = pt(s);
            assert_eq!(a.canonical(), s);
            assert_eq!(pt(&a.canonical()), a);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        match PartialTransformation::parse("n=4:[2:2,2:1]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("expected parse error, got {other:?}"),
        }
        match PartialTransformation::parse("n=4:[5:1]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(PartialTransformation::parse("n=0:[]").is_err());
        assert!(PartialTransformation::parse("n=4:[1:1] ").is_err());
        assert!(PartialTransformation::parse("x").is_err());
    }

    #[test]
    fn composition_is_associative_exhaustively_at_degree_three() {
        // All 4^3 = 64 partial maps of degree 3.
        let mut all = Vec::new();
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    let mut images = [0; MAX_DEGREE];
                    images[0] = a;
                    images[1] = b;
                    images[2] = c;
                    all.push(PartialTransformation::from_images(3, images));
                }
            }
        }
        for x in &all {
            for y in &all {
                let xy = x.compose(y);
                for z in &all {
                    assert_eq!(xy.compose(z), x.compose(&y.compose(z)));
                }
            }
        }
    }

    #[test]
    fn canonical_cmp_matches_string_comparison() {
        let elems = [
            pt("n=12:[1:1,10:3]"),
            pt("n=12:[10:3]"),
            pt("n=12:[2:1]"),
            pt("n=12:[]"),
            pt("n=12:[1:1]"),
            pt("n=12:[1:1,2:1]"),
        ];
        for a in &elems {
            for b in &elems {
                assert_eq!(a.canonical_cmp(b), a.canonical().cmp(&b.canonical()));
            }
        }
    }
}
