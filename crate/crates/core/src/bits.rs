//! Word-parallel primitives on dense bit vectors.
//!
//! A set over a group of order `n` is `words_for(n)` machine words; bits at
//! positions `>= n` are always zero. Translation by a group element reduces
//! to a cyclic rotation of the whole vector (single-factor groups) or a
//! sequence of per-axis block rotations (multi-factor groups), so every
//! sumset pass costs `O(n / 64)` words rather than `O(n)` bit probes.

pub(crate) const W: usize = 64;

pub(crate) fn words_for(nbits: usize) -> usize {
    nbits.div_ceil(W)
}

/// Mask for the final word of an `nbits`-long vector.
pub(crate) fn tail_mask(nbits: usize) -> u64 {
    if nbits.is_multiple_of(W) {
        !0
    } else {
        (1u64 << (nbits % W)) - 1
    }
}

#[inline]
pub(crate) fn get(words: &[u64], i: usize) -> bool {
    (words[i / W] >> (i % W)) & 1 != 0
}

#[inline]
pub(crate) fn set(words: &mut [u64], i: usize) {
    words[i / W] |= 1u64 << (i % W);
}

#[inline]
pub(crate) fn clear(words: &mut [u64], i: usize) {
    words[i / W] &= !(1u64 << (i % W));
}

pub(crate) fn popcount(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

pub(crate) fn clear_all(words: &mut [u64]) {
    words.fill(0);
}

pub(crate) fn or_assign(dst: &mut [u64], src: &[u64]) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= s;
    }
}

/// True iff the two vectors share a set bit.
pub(crate) fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// `dst |= src << s`, truncated to `nbits`. Source bits landing at or beyond
/// `nbits` are dropped.
pub(crate) fn or_shl(dst: &mut [u64], src: &[u64], s: usize, nbits: usize) {
    debug_assert_eq!(dst.len(), src.len());
    let len = dst.len();
    let (ws, bs) = (s / W, s % W);
    let tail = tail_mask(nbits);
    for i in (ws..len).rev() {
        let mut w = src[i - ws] << bs;
        if bs > 0 && i > ws {
            w |= src[i - ws - 1] >> (W - bs);
        }
        if i == len - 1 {
            w &= tail;
        }
        dst[i] |= w;
    }
}

/// `dst |= src >> s`.
pub(crate) fn or_shr(dst: &mut [u64], src: &[u64], s: usize) {
    debug_assert_eq!(dst.len(), src.len());
    let len = dst.len();
    let (ws, bs) = (s / W, s % W);
    for i in 0..len.saturating_sub(ws) {
        let mut w = src[i + ws] >> bs;
        if bs > 0 && i + ws + 1 < len {
            w |= src[i + ws + 1] << (W - bs);
        }
        dst[i] |= w;
    }
}

/// `dst |= rotate_left(src, s)` over an `nbits`-bit cyclic vector.
/// Requires `s < nbits`.
pub(crate) fn or_rotate(dst: &mut [u64], src: &[u64], s: usize, nbits: usize) {
    if s == 0 {
        or_assign(dst, src);
        return;
    }
    or_shl(dst, src, s, nbits);
    or_shr(dst, src, nbits - s);
}

/// ORs `src & m` into `dst`, where `m` is the periodic mask with ones at
/// offsets `[lo, hi)` of every `period`-aligned block. The mask words are
/// produced on the fly, run by run, so nothing is allocated.
pub(crate) fn or_masked_periodic(
    dst: &mut [u64],
    src: &[u64],
    period: usize,
    lo: usize,
    hi: usize,
) {
    debug_assert!(lo < hi && hi <= period);
    for (i, (d, s)) in dst.iter_mut().zip(src).enumerate() {
        if *s == 0 {
            continue;
        }
        let mut m: u64 = 0;
        let mut j = 0usize;
        let mut off = (i * W) % period;
        while j < W {
            let run_end = if off < lo {
                lo
            } else if off < hi {
                hi
            } else {
                period
            };
            let run = (run_end - off).min(W - j);
            if off >= lo && off < hi {
                m |= if run == W {
                    !0
                } else {
                    ((1u64 << run) - 1) << j
                };
            }
            off += run;
            if off == period {
                off = 0;
            }
            j += run;
        }
        *d |= s & m;
    }
}

/// `dst |= src` with every `block`-bit slice rotated left by `s` in place.
/// Requires `block | nbits` and `s < block`. `tmp` is scratch of equal length.
pub(crate) fn or_block_rotate(
    dst: &mut [u64],
    src: &[u64],
    block: usize,
    s: usize,
    nbits: usize,
    tmp: &mut [u64],
) {
    if s == 0 {
        or_assign(dst, src);
        return;
    }
    debug_assert_eq!(nbits % block, 0);
    // Offsets [0, block-s) shift up to [s, block); the global shift also
    // spills bits into the next block, which the periodic mask removes.
    clear_all(tmp);
    or_shl(tmp, src, s, nbits);
    or_masked_periodic(dst, tmp, block, s, block);
    // Offsets [block-s, block) wrap down to [0, s) of the same block.
    clear_all(tmp);
    or_shr(tmp, src, block - s);
    or_masked_periodic(dst, tmp, block, 0, s);
}
