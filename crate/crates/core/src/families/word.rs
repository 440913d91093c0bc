use std::collections::BTreeSet;
use std::fmt;

use super::FamilyError;

/// A string over the alphabet `[q]`.
///
/// Symbols are stored 1-based (`1..=q`). Text formats use 0-based digits;
/// [`Word::from_digits`] and [`Word::to_digits`] convert between the two.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u8,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(q: u8, symbols: Vec<u8>) -> Result<Self, FamilyError> {
        if q == 0 {
            return Err(FamilyError::InvalidAlphabet(q as usize));
        }
        if symbols.is_empty() {
            return Err(FamilyError::EmptyWord);
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s == 0 || s > q) {
            return Err(FamilyError::InvalidSymbol { symbol: bad as usize, q: q as usize });
        }
        Ok(Word { q, symbols })
    }

    /// Parses 0-based digits, e.g. `"0120"` over `q = 3`.
    pub fn from_digits(q: u8, digits: &str) -> Result<Self, FamilyError> {
        let symbols = digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| (d as usize) < q as usize)
                    .map(|d| d as u8 + 1)
                    .ok_or(FamilyError::InvalidDigit { digit: c, q: q as usize })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Word::new(q, symbols)
    }

    /// The word with lexicographic rank `index` in `[q]^n`; coordinate 1 is the
    /// most significant digit.
    pub fn from_index(q: u8, n: usize, mut index: u64) -> Self {
        let mut symbols = vec![1u8; n];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % q as u64) as u8 + 1;
            index /= q as u64;
        }
        Word { q, symbols }
    }

    /// Inverse of [`Word::from_index`].
    pub fn index(&self) -> u64 {
        self.symbols
            .iter()
            .fold(0u64, |acc, &s| acc * self.q as u64 + (s - 1) as u64)
    }

    pub fn to_digits(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| char::from_digit((s - 1) as u32, 36).unwrap_or('?'))
            .collect()
    }

    pub fn alphabet(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbol at 1-based coordinate `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.symbols[i - 1]
    }

    /// Flips 1-based coordinate `i` of a binary word.
    pub fn flipped(&self, i: usize) -> Word {
        debug_assert_eq!(self.q, 2);
        let mut symbols = self.symbols.clone();
        symbols[i - 1] = 3 - symbols[i - 1];
        Word { q: self.q, symbols }
    }

    /// Number of coordinates holding the top binary symbol (digit `1`).
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s == 2).count()
    }

    pub(crate) fn check_compatible(&self, other: &Word) -> Result<(), FamilyError> {
        if self.q != other.q || self.len() != other.len() {
            return Err(FamilyError::DimensionMismatch {
                expected: (self.q as usize, self.len()),
                found: (other.q as usize, other.len()),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_digits())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digits())
    }
}

/// The coordinates (1-based, ascending) on which all `words` take the same symbol.
pub fn agreement(words: &[Word]) -> Result<Vec<usize>, FamilyError> {
    let (first, rest) = words.split_first().ok_or(FamilyError::EmptyInput)?;
    for w in rest {
        first.check_compatible(w)?;
    }
    Ok((1..=first.len())
        .filter(|&i| rest.iter().all(|w| w.at(i) == first.at(i)))
        .collect())
}

/// A set of distinct words sharing one alphabet size and length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    q: u8,
    n: usize,
    members: BTreeSet<Word>,
}

impl Family {
    pub fn new(q: u8, n: usize) -> Result<Self, FamilyError> {
        if q == 0 {
            return Err(FamilyError::InvalidAlphabet(0));
        }
        if n == 0 {
            return Err(FamilyError::EmptyWord);
        }
        Ok(Family { q, n, members: BTreeSet::new() })
    }

    pub fn from_words<I>(q: u8, n: usize, words: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = Word>,
    {
        let mut family = Family::new(q, n)?;
        for w in words {
            family.insert(w)?;
        }
        Ok(family)
    }

    /// Convenience constructor from 0-based digit strings.
    pub fn from_digit_strings(q: u8, words: &[&str]) -> Result<Self, FamilyError> {
        let parsed = words
            .iter()
            .map(|s| Word::from_digits(q, s))
            .collect::<Result<Vec<_>, _>>()?;
        let n = parsed.first().map(Word::len).ok_or(FamilyError::EmptyInput)?;
        Family::from_words(q, n, parsed)
    }

    /// All of `[q]^n`.
    pub fn full(q: u8, n: usize) -> Result<Self, FamilyError> {
        let size = cube_size(q, n).ok_or_else(|| FamilyError::Infeasible(format!("{q}^{n} words")))?;
        Family::from_words(q, n, (0..size).map(|i| Word::from_index(q, n, i)))
    }

    /// Inserts `word`; returns `false` when it was already present.
    pub fn insert(&mut self, word: Word) -> Result<bool, FamilyError> {
        if word.alphabet() != self.q || word.len() != self.n {
            return Err(FamilyError::DimensionMismatch {
                expected: (self.q as usize, self.n),
                found: (word.alphabet() as usize, word.len()),
            });
        }
        Ok(self.members.insert(word))
    }

    pub fn alphabet(&self) -> u8 {
        self.q
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.members.contains(word)
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> + '_ {
        self.members.iter()
    }

    pub fn words(&self) -> Vec<Word> {
        self.members.iter().cloned().collect()
    }

    pub(crate) fn members(&self) -> &BTreeSet<Word> {
        &self.members
    }

    pub(crate) fn replace_members(&self, members: BTreeSet<Word>) -> Family {
        Family { q: self.q, n: self.n, members }
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family")
            .field("q", &self.q)
            .field("n", &self.n)
            .field("members", &self.members.iter().map(Word::to_digits).collect::<Vec<_>>())
            .finish()
    }
}

/// `q^n`, or `None` on overflow.
pub fn cube_size(q: u8, n: usize) -> Option<u64> {
    (q as u64).checked_pow(u32::try_from(n).ok()?)
}

/// Tuple arity `k` and agreement threshold `t` of a k-wise t-agreeing predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgreeParams {
    pub k: usize,
    pub t: usize,
}

impl AgreeParams {
    pub fn new(k: usize, t: usize) -> Result<Self, FamilyError> {
        if k < 2 {
            return Err(FamilyError::InvalidParams(format!("k = {k}, need k >= 2")));
        }
        Ok(AgreeParams { k, t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: u8, s: &str) -> Word {
        Word::from_digits(q, s).unwrap()
    }

    #[test]
    fn agreement_examples() {
        // "112" and "122" as 1-based symbols are digits "001" and "011".
        let a = Word::new(3, vec![1, 1, 2]).unwrap();
        let b = Word::new(3, vec![1, 2, 2]).unwrap();
        assert_eq!(agreement(&[a, b]).unwrap(), vec![1, 3]);

        let x = w(3, "2010");
        assert_eq!(agreement(&[x.clone(), x.clone(), x]).unwrap(), vec![1, 2, 3, 4]);

        assert!(agreement(&[w(2, "01"), w(2, "10"), w(2, "11")]).unwrap().is_empty());
        assert_eq!(agreement(&[w(2, "0110")]).unwrap(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn agreement_rejects_mismatch() {
        assert!(matches!(
            agreement(&[w(2, "01"), w(2, "011")]),
            Err(FamilyError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            agreement(&[w(2, "01"), w(3, "01")]),
            Err(FamilyError::DimensionMismatch { .. })
        ));
        assert!(matches!(agreement(&[]), Err(FamilyError::EmptyInput)));
    }

    #[test]
    fn word_validation() {
        assert!(Word::new(2, vec![1, 3]).is_err());
        assert!(Word::new(2, vec![0]).is_err());
        assert!(Word::new(2, vec![]).is_err());
        assert!(Word::from_digits(2, "012").is_err());
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..81 {
            let word = Word::from_index(3, 4, i);
            assert_eq!(word.index(), i);
        }
        assert_eq!(Word::from_index(3, 3, 5).to_digits(), "012");
    }

    #[test]
    fn family_rejects_foreign_words() {
        let mut f = Family::new(2, 3).unwrap();
        assert!(f.insert(w(2, "010")).unwrap());
        assert!(!f.insert(w(2, "010")).unwrap());
        assert!(f.insert(w(2, "01")).is_err());
        assert!(f.insert(w(3, "010")).is_err());
        assert_eq!(f.len(), 1);
        assert_eq!(Family::full(3, 2).unwrap().len(), 9);
    }
}
