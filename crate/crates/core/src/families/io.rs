//! Text format for families.
//!
//! ```text
//! family <q> <n>
//! 0102
//! 1120   # trailing comments are allowed
//! ```
//!
//! Words are written with 0-based digits, so `q` is limited to 10. The writer
//! emits members in lexicographic order with no comments, which makes
//! `write(read(write(f))) == write(f)` byte for byte.

use std::fmt::Write as _;

use super::{Family, FamilyError, Word};

pub fn write_family(family: &Family) -> String {
    let mut out = format!("family {} {}\n", family.alphabet(), family.word_length());
    for w in family.iter() {
        let _ = writeln!(out, "{}", w.to_digits());
    }
    out
}

pub fn read_family(text: &str) -> Result<Family, FamilyError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| FamilyError::Parse { line: 0, message: "missing `family` header".into() })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let parse_err = |message: String| FamilyError::Parse { line: header_line, message };
    if parts.len() != 3 || parts[0] != "family" {
        return Err(parse_err(format!("expected `family <q> <n>`, found `{header}`")));
    }
    let q: u8 = parts[1].parse().map_err(|_| parse_err(format!("bad alphabet size `{}`", parts[1])))?;
    let n: usize = parts[2].parse().map_err(|_| parse_err(format!("bad word length `{}`", parts[2])))?;
    if !(1..=10).contains(&q) {
        return Err(parse_err(format!("alphabet size {q} outside 1..=10")));
    }
    let mut family = Family::new(q, n).map_err(|e| parse_err(e.to_string()))?;
    for (line, body) in lines {
        let word = Word::from_digits(q, body)
            .map_err(|e| FamilyError::Parse { line, message: e.to_string() })?;
        if word.len() != n {
            return Err(FamilyError::Parse {
                line,
                message: format!("word `{body}` has length {}, expected {n}", word.len()),
            });
        }
        if !family.insert(word)? {
            return Err(FamilyError::Parse { line, message: format!("duplicate word `{body}`") });
        }
    }
    Ok(family)
}
