//! Bit-parallel agreement kernel.
//!
//! Each word is stored as one coordinate bitmask per symbol. The agreement of
//! a set of words is then `OR_v AND_w mask(w, v)`, which costs `q * blocks`
//! word operations per added member regardless of `n`.

use super::Word;

pub(crate) struct PackedWords {
    q: usize,
    blocks: usize,
    data: Vec<u64>,
    count: usize,
}

impl PackedWords {
    pub(crate) fn new(words: &[Word]) -> Self {
        let (q, n) = words
            .first()
            .map(|w| (w.alphabet() as usize, w.len()))
            .unwrap_or((1, 1));
        let blocks = n.div_ceil(64);
        let mut data = vec![0u64; words.len() * q * blocks];
        for (wi, word) in words.iter().enumerate() {
            for (i, &s) in word.symbols().iter().enumerate() {
                let v = (s - 1) as usize;
                data[(wi * q + v) * blocks + i / 64] |= 1u64 << (i % 64);
            }
        }
        PackedWords { q, blocks, data, count: words.len() }
    }

    /// A single-symbol view that tracks coordinates equal to the binary digit `1`,
    /// so that "agreement" becomes "common ones".
    pub(crate) fn ones(words: &[Word]) -> Self {
        let n = words.first().map(Word::len).unwrap_or(1);
        let blocks = n.div_ceil(64);
        let mut data = vec![0u64; words.len() * blocks];
        for (wi, word) in words.iter().enumerate() {
            for (i, &s) in word.symbols().iter().enumerate() {
                if s == 2 {
                    data[wi * blocks + i / 64] |= 1u64 << (i % 64);
                }
            }
        }
        PackedWords { q: 1, blocks, data, count: words.len() }
    }

    pub(crate) fn len(&self) -> usize {
        self.count
    }

    fn masks(&self, w: usize) -> &[u64] {
        let stride = self.q * self.blocks;
        &self.data[w * stride..(w + 1) * stride]
    }

    pub(crate) fn state_of(&self, w: usize) -> AgreeState {
        AgreeState { masks: self.masks(w).to_vec() }
    }

    pub(crate) fn empty_state(&self) -> AgreeState {
        AgreeState { masks: vec![0; self.q * self.blocks] }
    }

    /// `out = state ∧ w`.
    pub(crate) fn extend_into(&self, state: &AgreeState, w: usize, out: &mut AgreeState) {
        for ((o, &a), &b) in out.masks.iter_mut().zip(&state.masks).zip(self.masks(w)) {
            *o = a & b;
        }
    }

    /// Agreement size of `state ∪ {w}` without materializing it.
    pub(crate) fn count_with(&self, state: &AgreeState, w: usize) -> usize {
        state
            .masks
            .iter()
            .zip(self.masks(w))
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Agreement size of the pair `{a, b}`.
    #[cfg(test)]
    pub(crate) fn pair_count(&self, a: usize, b: usize) -> usize {
        self.masks(a)
            .iter()
            .zip(self.masks(b))
            .map(|(&x, &y)| (x & y).count_ones() as usize)
            .sum()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct AgreeState {
    masks: Vec<u64>,
}

impl AgreeState {
    pub(crate) fn count(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Agreeing coordinates, 1-based and ascending.
    pub(crate) fn coords(&self, blocks: usize) -> Vec<usize> {
        let mut merged = vec![0u64; blocks];
        for chunk in self.masks.chunks(blocks) {
            for (m, &c) in merged.iter_mut().zip(chunk) {
                *m |= c;
            }
        }
        let mut out = Vec::new();
        for (b, &m) in merged.iter().enumerate() {
            let mut bits = m;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                out.push(b * 64 + i + 1);
                bits &= bits - 1;
            }
        }
        out
    }
}

impl PackedWords {
    pub(crate) fn blocks(&self) -> usize {
        self.blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::agreement;

    #[test]
    fn packed_matches_scalar_agreement() {
        let words: Vec<Word> = ["0120", "0121", "2120", "0100"]
            .iter()
            .map(|s| Word::from_digits(3, s).unwrap())
            .collect();
        let packed = PackedWords::new(&words);
        let mut state = packed.state_of(0);
        let mut next = packed.empty_state();
        for w in 1..words.len() {
            packed.extend_into(&state, w, &mut next);
            std::mem::swap(&mut state, &mut next);
            let expected = agreement(&words[..=w]).unwrap();
            assert_eq!(state.coords(packed.blocks()), expected);
            assert_eq!(state.count(), expected.len());
        }
    }

    #[test]
    fn wide_words_cross_block_boundary() {
        let a = Word::from_index(2, 130, 0);
        let b = a.flipped(64).flipped(65).flipped(130);
        let packed = PackedWords::new(&[a.clone(), b.clone()]);
        assert_eq!(packed.pair_count(0, 1), 127);
        let state = packed.state_of(0);
        let mut out = packed.empty_state();
        packed.extend_into(&state, 1, &mut out);
        assert_eq!(out.coords(packed.blocks()), agreement(&[a, b]).unwrap());
    }
}
