//! Exact maximization of (k,l)-sum-free and shifted-sum-free cardinality by
//! pruned depth-first search over include/exclude decisions.
//!
//! Correctness rests on the predicate being hereditary: removing elements of
//! `A` shrinks both iterated sumsets, so a branch whose partial set already
//! fails can be cut, and the best cardinality found so far bounds whole
//! subtrees via `|partial| + remaining <= best`.
//!
//! Determinism contract: the search always expands the same fixed set of
//! root branches (all decision prefixes at a fixed cut depth), each with its
//! own bound and an even share of the node budget. Parallel settings only choose
//! how the branches are scheduled, so cardinality, witness, and node counts
//! are identical for every `parallel_branches` value. Elements are decided
//! in ascending index order with the exclude branch first; the witness kept
//! is therefore the minimum of the maximum witnesses in the natural 0<1
//! order on bit patterns read from element 0 upward.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::bits;
use crate::error::{Error, Result};
use crate::group::{gcd, FiniteAbelianGroup};
use crate::rational::Rational;
use crate::subset::{GroupSubset, Scratch, Translator};

/// Default guard on searchable group order.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 1 << 18;

/// Depth at which the decision tree is split into independent root branches.
const CUT_DEPTH: usize = 3;

/// Tuning and guard knobs for the exact search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Refuse groups larger than this.
    pub max_group_order: u64,
    /// Prune branches that cannot lead to the canonical representative of a
    /// dilation orbit. Applies only to cyclic groups with shift set `{0}`;
    /// it never changes the returned outcome, only the node count.
    pub symmetry_reduction: bool,
    /// Worker threads for the root branches; 0 runs them serially.
    pub parallel_branches: usize,
    /// Cap on expanded nodes, split evenly across root branches. Exhaustion
    /// yields `complete = false` with the best set found so far, never a
    /// silently wrong maximum.
    pub node_budget: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
            symmetry_reduction: true,
            parallel_branches: 0,
            node_budget: None,
        }
    }
}

/// Result of an exact search.
///
/// When `complete` is true the maximum is certified by exhaustion; the
/// witness always satisfies the searched predicate and attains
/// `max_cardinality` either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub max_cardinality: u64,
    pub witness: GroupSubset,
    pub density: Rational,
    pub nodes_visited: u64,
    pub complete: bool,
}

/// The unit residues mod `n`: the dilations `x -> ux` that are automorphisms
/// of `Z_n` and therefore preserve sum-freeness. For `n = 1` returns `[1]`.
pub fn dilation_symmetries(n: u64) -> Vec<u64> {
    assert!(n >= 1, "dilation symmetries of the zero modulus");
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

/// `k *_C A = kA + (k-1)C`, with the zero-fold convention `0C = {0}`
/// (so the one-fold case is `A` itself).
pub fn shifted_iterated_sumset(a: &GroupSubset, c: &GroupSubset, k: u32) -> Result<GroupSubset> {
    if k == 0 {
        return Err(Error::ZeroFold);
    }
    if a.group() != c.group() {
        return Err(Error::GroupMismatch);
    }
    if k == 1 {
        return Ok(a.clone());
    }
    let folds = a.iterated_sumset(k)?;
    let shifts = c.iterated_sumset(k - 1)?;
    folds.sumset(&shifts)
}

/// Whether `(k *_C A)` and `(l *_C A)` are disjoint. With `C = {0}` this is
/// exactly the ordinary sum-free test.
pub fn is_shifted_sum_free(a: &GroupSubset, c: &GroupSubset, k: u32, l: u32) -> Result<bool> {
    if k == 0 || k >= l {
        return Err(Error::InvalidPair { k, l });
    }
    if a.group() != c.group() {
        return Err(Error::GroupMismatch);
    }
    if a.is_empty() {
        return Ok(true);
    }
    let lhs = shifted_iterated_sumset(a, c, k)?;
    let rhs = shifted_iterated_sumset(a, c, l)?;
    lhs.is_disjoint(&rhs)
}

/// Exact maximum cardinality of a (k,l)-sum-free subset of `g`, with a
/// certified witness.
pub fn max_sum_free(
    g: &FiniteAbelianGroup,
    k: u32,
    l: u32,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let zero = GroupSubset::singleton(g.clone(), 0)?;
    max_shifted_sum_free(g, k, l, &zero, config)
}

/// Exact maximum cardinality of `A` with `(k *_C A)` disjoint from
/// `(l *_C A)`, with a certified witness.
pub fn max_shifted_sum_free(
    g: &FiniteAbelianGroup,
    k: u32,
    l: u32,
    c: &GroupSubset,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    if k == 0 || k >= l {
        return Err(Error::InvalidPair { k, l });
    }
    if c.group() != g {
        return Err(Error::GroupMismatch);
    }
    if c.is_empty() {
        return Err(Error::EmptyShiftSet);
    }
    let order = g.order();
    if order > config.max_group_order {
        return Err(Error::OrderCapExceeded {
            order,
            cap: config.max_group_order,
        });
    }

    let shift_is_zero = c.cardinality() == 1 && c.contains(0);
    let units: Vec<u64> = if config.symmetry_reduction && g.is_cyclic() && shift_is_zero {
        dilation_symmetries(order)
            .into_iter()
            .filter(|&u| u != 1)
            .collect()
    } else {
        Vec::new()
    };

    let prefix_len = CUT_DEPTH.min(order as usize);
    let n_tasks: u64 = 1 << prefix_len;
    let shared = Shared {
        group: g,
        order: order as usize,
        words: bits::words_for(order as usize),
        k: k as usize,
        l: l as usize,
        c_elems: c.iter().collect(),
        units,
        allotment: config.node_budget.map(|b| b.div_ceil(n_tasks).max(1)),
    };

    // Root branches in exclude-first order: element 0 is the most
    // significant decision.
    let masks: Vec<u64> = (0..n_tasks)
        .map(|v| {
            let mut m = 0u64;
            for e in 0..prefix_len {
                if (v >> (prefix_len - 1 - e)) & 1 != 0 {
                    m |= 1 << e;
                }
            }
            m
        })
        .collect();

    let run = |&mask: &u64| Runner::new(&shared).run(mask, prefix_len);
    let results: Vec<TaskResult> = if config.parallel_branches == 0 {
        masks.iter().map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.parallel_branches)
            .build()
            .map_err(|e| Error::WorkerPool(e.to_string()))?;
        pool.install(|| masks.par_iter().map(run).collect())
    };

    let mut nodes_visited = 0u64;
    let mut complete = true;
    let mut best: Option<(u64, Vec<u64>)> = None;
    for r in results {
        nodes_visited += r.nodes;
        complete &= r.complete;
        let better = match &best {
            None => true,
            Some((bc, bw)) => {
                r.best_card > *bc
                    || (r.best_card == *bc && bitstring_cmp(&r.best_words, bw) == Ordering::Less)
            }
        };
        if better {
            best = Some((r.best_card, r.best_words));
        }
    }
    let (max_cardinality, witness_words) = best.expect("at least one root branch");
    let witness = GroupSubset::from_words(g.clone(), witness_words);
    debug_assert_eq!(witness.cardinality(), max_cardinality);
    Ok(SearchOutcome {
        max_cardinality,
        density: Rational::new(max_cardinality as i64, order as i64),
        witness,
        nodes_visited,
        complete,
    })
}

/// Natural order on equal-length bit patterns read from element 0 upward:
/// at the first differing element, the set without it is smaller.
fn bitstring_cmp(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            let bit = (x ^ y).trailing_zeros();
            return if (x >> bit) & 1 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
    }
    Ordering::Equal
}

// ---------------------------------------------------------------------------
// Search internals
// ---------------------------------------------------------------------------

struct Shared<'g> {
    group: &'g FiniteAbelianGroup,
    order: usize,
    words: usize,
    k: usize,
    l: usize,
    c_elems: Vec<u64>,
    /// Nontrivial unit dilations when symmetry pruning is active, else empty.
    units: Vec<u64>,
    /// Per-branch node cap.
    allotment: Option<u64>,
}

struct TaskResult {
    best_card: u64,
    best_words: Vec<u64>,
    nodes: u64,
    complete: bool,
}

#[derive(Clone, Copy)]
enum Phase {
    Enter,
    ExcludeDone,
    ExcludeOnly,
    IncludeDone,
}

#[derive(Clone, Copy)]
struct Frame {
    e: usize,
    phase: Phase,
}

struct Runner<'s> {
    shared: &'s Shared<'s>,
    translator: Translator,
    scratch: Scratch,
    /// `chain[j]` is the running `(j+1) *_C A` of the partial set.
    chain: Vec<Vec<u64>>,
    /// Chain snapshots per decision depth, allocated on first use.
    snapshots: Vec<Vec<u64>>,
    included: Vec<u64>,
    card: u64,
    best: Option<(u64, Vec<u64>)>,
    nodes: u64,
    stopped: bool,
}

impl<'s> Runner<'s> {
    fn new(shared: &'s Shared<'s>) -> Runner<'s> {
        Runner {
            shared,
            translator: Translator::new(shared.group),
            scratch: Scratch::new(shared.words),
            chain: vec![vec![0u64; shared.words]; shared.l],
            snapshots: Vec::new(),
            included: vec![0u64; shared.words],
            card: 0,
            best: None,
            nodes: 0,
            stopped: false,
        }
    }

    fn run(mut self, prefix_bits: u64, prefix_len: usize) -> TaskResult {
        let order = self.shared.order;
        let mut stack: Vec<Frame> = Vec::with_capacity(order + 1);
        stack.push(Frame {
            e: 0,
            phase: Phase::Enter,
        });

        while let Some(&Frame { e, phase }) = stack.last() {
            match phase {
                Phase::Enter => {
                    if self.stopped {
                        stack.pop();
                        continue;
                    }
                    if let Some(cap) = self.shared.allotment {
                        if self.nodes >= cap {
                            self.stopped = true;
                            stack.pop();
                            continue;
                        }
                    }
                    self.nodes += 1;
                    if self.best.as_ref().is_none_or(|(bc, _)| self.card > *bc) {
                        self.best = Some((self.card, self.included.clone()));
                    }
                    if e == order {
                        stack.pop();
                        continue;
                    }
                    if let Some((bc, _)) = &self.best {
                        if self.card + (order - e) as u64 <= *bc {
                            stack.pop();
                            continue;
                        }
                    }
                    if self.certified_noncanonical(e) {
                        stack.pop();
                        continue;
                    }
                    if e < prefix_len {
                        if (prefix_bits >> e) & 1 != 0 {
                            if self.apply_include(e) {
                                stack.last_mut().unwrap().phase = Phase::IncludeDone;
                                stack.push(Frame {
                                    e: e + 1,
                                    phase: Phase::Enter,
                                });
                            } else {
                                stack.pop();
                            }
                        } else {
                            stack.last_mut().unwrap().phase = Phase::ExcludeOnly;
                            stack.push(Frame {
                                e: e + 1,
                                phase: Phase::Enter,
                            });
                        }
                    } else {
                        stack.last_mut().unwrap().phase = Phase::ExcludeDone;
                        stack.push(Frame {
                            e: e + 1,
                            phase: Phase::Enter,
                        });
                    }
                }
                Phase::ExcludeDone => {
                    if !self.stopped && self.apply_include(e) {
                        stack.last_mut().unwrap().phase = Phase::IncludeDone;
                        stack.push(Frame {
                            e: e + 1,
                            phase: Phase::Enter,
                        });
                    } else {
                        stack.pop();
                    }
                }
                Phase::ExcludeOnly => {
                    stack.pop();
                }
                Phase::IncludeDone => {
                    self.undo_include(e);
                    stack.pop();
                }
            }
        }

        let (best_card, best_words) = self
            .best
            .unwrap_or_else(|| (0, vec![0u64; self.shared.words]));
        TaskResult {
            best_card,
            best_words,
            nodes: self.nodes,
            complete: !self.stopped,
        }
    }

    /// Tries to add element `e` to the partial set, updating the sumset
    /// chain incrementally. Returns false (with state unchanged) if the
    /// extended set violates the predicate.
    fn apply_include(&mut self, e: usize) -> bool {
        let (k, l) = (self.shared.k, self.shared.l);
        while self.snapshots.len() <= e {
            self.snapshots
                .push(vec![0u64; self.shared.l * self.shared.words]);
        }
        let words = self.shared.words;
        let snap = &mut self.snapshots[e];
        for (j, t) in self.chain.iter().enumerate() {
            snap[j * words..(j + 1) * words].copy_from_slice(t);
        }

        // Adding `a` turns each level into
        //   T_j  :=  T_j  |  translate(T_{j-1} + C, a),
        // applied in ascending j over the already-updated lower level.
        bits::set(&mut self.chain[0], e);
        for j in 1..l {
            let (lo, hi) = self.chain.split_at_mut(j);
            let prev = &lo[j - 1];
            let curr = &mut hi[0];
            for &c in &self.shared.c_elems {
                let shift = self
                    .shared
                    .group
                    .element_add(e as u64, c)
                    .expect("in-range elements");
                self.translator
                    .or_translated(curr, prev, shift, &mut self.scratch);
            }
        }

        if bits::intersects(&self.chain[k - 1], &self.chain[l - 1]) {
            self.restore_chain(e);
            return false;
        }
        bits::set(&mut self.included, e);
        self.card += 1;
        true
    }

    fn undo_include(&mut self, e: usize) {
        self.restore_chain(e);
        bits::clear(&mut self.included, e);
        self.card -= 1;
    }

    fn restore_chain(&mut self, e: usize) {
        let words = self.shared.words;
        let snap = &self.snapshots[e];
        for (j, t) in self.chain.iter_mut().enumerate() {
            t.copy_from_slice(&snap[j * words..(j + 1) * words]);
        }
    }

    /// True if some dilation of every completion of the current prefix is
    /// strictly smaller in bit-pattern order, so the subtree cannot contain
    /// the canonical orbit representative. Conclusive only on decided
    /// positions, hence safe.
    fn certified_noncanonical(&self, decided: usize) -> bool {
        let n = self.shared.order as u64;
        for &v in &self.shared.units {
            let mut i = 0u64;
            while i < decided as u64 {
                let vi = v * i % n;
                if vi >= decided as u64 {
                    break;
                }
                let dilated = bits::get(&self.included, vi as usize);
                let original = bits::get(&self.included, i as usize);
                if dilated == original {
                    i += 1;
                    continue;
                }
                if !dilated && original {
                    return true;
                }
                break;
            }
        }
        false
    }
}
