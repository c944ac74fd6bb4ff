//! Dense subsets of a finite abelian group and the Minkowski-sum machinery.
//!
//! Sumsets are computed by ORing translated copies of one operand's bit
//! vector into an accumulator, one pass per element of the other operand,
//! so the cost is `O(|A| * order / 64)` words.

use std::fmt;

use crate::bits;
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, ProjectionSpec};
use crate::rational::Rational;

/// Default cap on the group order accepted by sumset operations. Dense
/// vectors stay comfortably in cache below this size; callers that need
/// more use [`GroupSubset::sumset_with_cap`].
pub const DEFAULT_SUMSET_ORDER_CAP: u64 = 1 << 20;

/// A subset of a group as a dense bit vector with cached cardinality.
///
/// Immutable through the public API; all operations return new values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSubset {
    group: FiniteAbelianGroup,
    words: Vec<u64>,
    cardinality: u64,
}

impl GroupSubset {
    pub fn empty(group: FiniteAbelianGroup) -> GroupSubset {
        let words = vec![0u64; bits::words_for(group.order() as usize)];
        GroupSubset {
            group,
            words,
            cardinality: 0,
        }
    }

    pub fn full(group: FiniteAbelianGroup) -> GroupSubset {
        let n = group.order() as usize;
        let mut words = vec![!0u64; bits::words_for(n)];
        if let Some(last) = words.last_mut() {
            *last &= bits::tail_mask(n);
        }
        GroupSubset {
            cardinality: group.order(),
            group,
            words,
        }
    }

    pub fn singleton(group: FiniteAbelianGroup, index: u64) -> Result<GroupSubset> {
        GroupSubset::from_indices(group, [index])
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(
        group: FiniteAbelianGroup,
        indices: I,
    ) -> Result<GroupSubset> {
        let mut s = GroupSubset::empty(group);
        for i in indices {
            s.group.check_index(i)?;
            if !bits::get(&s.words, i as usize) {
                bits::set(&mut s.words, i as usize);
                s.cardinality += 1;
            }
        }
        Ok(s)
    }

    pub(crate) fn from_words(group: FiniteAbelianGroup, words: Vec<u64>) -> GroupSubset {
        let cardinality = bits::popcount(&words);
        GroupSubset {
            group,
            words,
            cardinality,
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    /// `|A| / |G|` as an exact rational in `[0, 1]`.
    pub fn density(&self) -> Rational {
        Rational::new(self.cardinality as i64, self.group.order() as i64)
    }

    /// Membership test. Panics on an out-of-range index.
    pub fn contains(&self, index: u64) -> bool {
        assert!(index < self.group.order(), "element index out of range");
        bits::get(&self.words, index as usize)
    }

    /// Ascending iterator over the element indices in the set.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let order = self.group.order();
        (0..order).filter(move |&i| bits::get(&self.words, i as usize))
    }

    fn check_same_group(&self, other: &GroupSubset) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// `{a} + A` for a single group element.
    pub fn translate(&self, a: u64) -> Result<GroupSubset> {
        self.group.check_index(a)?;
        let tr = Translator::new(&self.group);
        let mut out = vec![0u64; self.words.len()];
        let mut scratch = Scratch::new(self.words.len());
        tr.or_translated(&mut out, &self.words, a, &mut scratch);
        Ok(GroupSubset {
            group: self.group.clone(),
            cardinality: self.cardinality,
            words: out,
        })
    }

    /// Minkowski sum `A + B` under the default order cap.
    pub fn sumset(&self, other: &GroupSubset) -> Result<GroupSubset> {
        self.sumset_with_cap(other, DEFAULT_SUMSET_ORDER_CAP)
    }

    /// Minkowski sum `A + B`; errors if the group order exceeds `cap`.
    pub fn sumset_with_cap(&self, other: &GroupSubset, cap: u64) -> Result<GroupSubset> {
        self.check_same_group(other)?;
        let order = self.group.order();
        if order > cap {
            return Err(Error::OrderCapExceeded { order, cap });
        }
        let tr = Translator::new(&self.group);
        let mut acc = vec![0u64; self.words.len()];
        let mut scratch = Scratch::new(self.words.len());
        for a in self.iter() {
            tr.or_translated(&mut acc, &other.words, a, &mut scratch);
        }
        Ok(GroupSubset::from_words(self.group.clone(), acc))
    }

    /// The `k`-fold Minkowski sum `A + ... + A` (not the dilation `k * A`).
    pub fn iterated_sumset(&self, k: u32) -> Result<GroupSubset> {
        if k == 0 {
            return Err(Error::ZeroFold);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.sumset(self)?;
        }
        Ok(acc)
    }

    pub fn is_disjoint(&self, other: &GroupSubset) -> Result<bool> {
        self.check_same_group(other)?;
        Ok(!bits::intersects(&self.words, &other.words))
    }

    /// Whether `kA` and `lA` are disjoint. Requires `1 <= k < l`;
    /// the empty set is vacuously sum-free.
    pub fn is_sum_free(&self, k: u32, l: u32) -> Result<bool> {
        if k == 0 || k >= l {
            return Err(Error::InvalidPair { k, l });
        }
        if self.is_empty() {
            return Ok(true);
        }
        let ka = self.iterated_sumset(k)?;
        let la = self.iterated_sumset(l)?;
        ka.is_disjoint(&la)
    }

    /// The subgroup `{h : h + A = A}`. By convention `stabilizer(empty) = G`,
    /// which keeps the subgroup postcondition unconditional.
    pub fn stabilizer(&self) -> GroupSubset {
        if self.is_empty() {
            return GroupSubset::full(self.group.clone());
        }
        let tr = Translator::new(&self.group);
        let mut scratch = Scratch::new(self.words.len());
        let mut shifted = vec![0u64; self.words.len()];
        let mut out = GroupSubset::empty(self.group.clone());
        let a0 = self.iter().next().expect("nonempty");
        for h in self.group.elements() {
            // h + a0 must land back in A; cheap pre-filter.
            let moved = self.group.element_add(h, a0).expect("in range");
            if !bits::get(&self.words, moved as usize) {
                continue;
            }
            bits::clear_all(&mut shifted);
            tr.or_translated(&mut shifted, &self.words, h, &mut scratch);
            if shifted == self.words {
                bits::set(&mut out.words, h as usize);
                out.cardinality += 1;
            }
        }
        out
    }
}

/// Preimage `phi^{-1}(S)` of a subset of a quotient group under a canonical
/// projection of `g`. Density is preserved exactly.
pub fn pullback(
    g: &FiniteAbelianGroup,
    projection: &ProjectionSpec,
    s: &GroupSubset,
) -> Result<GroupSubset> {
    let quotient = projection.quotient(g)?;
    if &quotient != s.group() {
        return Err(Error::QuotientMismatch);
    }
    let mut out = GroupSubset::empty(g.clone());
    for i in g.elements() {
        let image = projection.map_index(g, &quotient, i)?;
        if s.contains(image) {
            bits::set(&mut out.words, i as usize);
            out.cardinality += 1;
        }
    }
    Ok(out)
}

impl fmt::Display for GroupSubset {
    /// Literal form `{i1,i2,...}` with ascending decimal indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

impl GroupSubset {
    /// Parses the literal form `{i1,i2,...}`. Duplicates are collapsed;
    /// out-of-range indices are errors.
    pub fn parse(group: FiniteAbelianGroup, s: &str) -> Result<GroupSubset> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("invalid subset literal {s:?}")))?;
        let mut indices = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let i: u64 = part
                .parse()
                .map_err(|_| Error::Parse(format!("invalid subset literal {s:?}")))?;
            indices.push(i);
        }
        GroupSubset::from_indices(group, indices)
    }
}

// ---------------------------------------------------------------------------
// Translation engine
// ---------------------------------------------------------------------------

pub(crate) struct Scratch {
    a: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
}

impl Scratch {
    pub(crate) fn new(words: usize) -> Scratch {
        Scratch {
            a: vec![0u64; words],
            b: vec![0u64; words],
            c: vec![0u64; words],
        }
    }
}

/// Turns "translate by group element" into word-parallel rotations.
///
/// For a cyclic group the whole vector rotates by the element value. For a
/// multi-factor group the translation factors into one in-block rotation per
/// coordinate axis, applied from an alternating pair of scratch buffers.
pub(crate) struct Translator {
    nbits: usize,
    cyclic: bool,
    // (block length in bits, stride in bits, factor size) per axis.
    axes: Vec<(usize, usize, u64)>,
}

impl Translator {
    pub(crate) fn new(group: &FiniteAbelianGroup) -> Translator {
        let nbits = group.order() as usize;
        let axes = group
            .factors()
            .iter()
            .zip(group.strides())
            .map(|(&f, &s)| ((f * s) as usize, s as usize, f))
            .collect();
        Translator {
            nbits,
            cyclic: group.is_cyclic(),
            axes,
        }
    }

    /// `dst |= {elem} + src`.
    pub(crate) fn or_translated(
        &self,
        dst: &mut [u64],
        src: &[u64],
        elem: u64,
        scratch: &mut Scratch,
    ) {
        if self.cyclic {
            bits::or_rotate(dst, src, elem as usize, self.nbits);
            return;
        }
        // Decompose the element and collect the axes it actually moves.
        let mut rest = elem as usize;
        let mut active: Vec<(usize, usize)> = Vec::with_capacity(self.axes.len());
        for &(block, stride, _) in &self.axes {
            let c = rest / stride;
            rest %= stride;
            if c != 0 {
                active.push((block, c * stride));
            }
        }
        let Some((&(last_block, last_shift), earlier)) = active.split_last() else {
            bits::or_assign(dst, src);
            return;
        };
        let Scratch { a, b, c } = scratch;
        if earlier.is_empty() {
            bits::or_block_rotate(dst, src, last_block, last_shift, self.nbits, b);
            return;
        }
        // Rotate axis by axis through the ping-pong buffers; the final axis
        // rotates straight into the accumulator.
        a.copy_from_slice(src);
        let (mut cur, mut next) = (a, c);
        for &(block, shift) in earlier {
            bits::clear_all(next);
            bits::or_block_rotate(next, cur, block, shift, self.nbits, b);
            std::mem::swap(&mut cur, &mut next);
        }
        bits::or_block_rotate(dst, cur, last_block, last_shift, self.nbits, b);
    }
}
