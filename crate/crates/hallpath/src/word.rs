//! Level-typed words in the quiver path algebra and their finite linear
//! combinations.
//!
//! A word is written left to right, e.g. `1_0 d- z1^2 phi d+ 1_0`; the
//! rightmost letter acts first on a vector. The `source` level is the level
//! of input vectors (the rightmost vertex), the `target` the output level.

use std::fmt;

use thiserror::Error;

use crate::qt::Scalar;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("parse error at token {index} ({token:?}): {msg}")]
    Parse {
        index: usize,
        token: String,
        msg: String,
    },
    #[error("letter {letter} is not valid at level {level}")]
    BadLevel { letter: String, level: i64 },
    #[error("inner idempotent 1_{expected} does not match level {found}")]
    IdemMismatch { expected: i64, found: i64 },
    #[error("source/target levels of combined expressions differ")]
    TypeMismatch,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Letter {
    DPlus,
    DMinus,
    Phi,
    /// z_i^a
    Z { i: u32, a: i64 },
    /// T_i or its inverse
    T { i: u32, inv: bool },
    /// Delta_{p_m} or Delta*_{p_m}
    Delta { m: u32, star: bool },
}

impl Letter {
    /// Level change (target - source) when applied at some level.
    pub fn level_step(&self) -> i64 {
        match self {
            Letter::DPlus => 1,
            Letter::DMinus => -1,
            _ => 0,
        }
    }

    /// Check index ranges at the given source level; loops need |level| slots.
    pub fn valid_at(&self, level: i64) -> bool {
        let k = level.unsigned_abs();
        match self {
            Letter::DPlus | Letter::DMinus | Letter::Phi | Letter::Delta { .. } => true,
            Letter::Z { i, .. } => *i >= 1 && u64::from(*i) <= k,
            Letter::T { i, .. } => *i >= 1 && k >= 2 && u64::from(*i) <= k - 1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::DPlus => write!(f, "d+"),
            Letter::DMinus => write!(f, "d-"),
            Letter::Phi => write!(f, "phi"),
            Letter::Z { i, a } => {
                if *a == 1 {
                    write!(f, "z{}", i)
                } else {
                    write!(f, "z{}^{}", i, a)
                }
            }
            Letter::T { i, inv } => {
                if *inv {
                    write!(f, "T{}^-1", i)
                } else {
                    write!(f, "T{}", i)
                }
            }
            Letter::Delta { m, star } => {
                if *star {
                    write!(f, "DeltaStar{}", m)
                } else {
                    write!(f, "Delta{}", m)
                }
            }
        }
    }
}

/// A path in the quiver: letters in written order plus the source level.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    source: i64,
}

impl Word {
    pub fn identity(level: i64) -> Self {
        Word {
            letters: Vec::new(),
            source: level,
        }
    }

    /// Build from letters in written order, validating level typing.
    pub fn new(letters: Vec<Letter>, source: i64) -> Result<Self, WordError> {
        let w = Word { letters, source };
        w.check_typing()?;
        Ok(w)
    }

    fn check_typing(&self) -> Result<(), WordError> {
        let mut level = self.source;
        for l in self.letters.iter().rev() {
            if !l.valid_at(level) {
                return Err(WordError::BadLevel {
                    letter: l.to_string(),
                    level,
                });
            }
            level += l.level_step();
        }
        Ok(())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn source(&self) -> i64 {
        self.source
    }

    pub fn target(&self) -> i64 {
        self.source + self.letters.iter().map(|l| l.level_step()).sum::<i64>()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenate: `self * other` requires `other.target() == self.source()`,
    /// i.e. `other` acts first.
    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        if other.target() != self.source {
            return Err(WordError::TypeMismatch);
        }
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().copied());
        Word::new(letters, other.source)
    }

    pub fn append(&self, l: Letter) -> Result<Word, WordError> {
        let mut letters = self.letters.clone();
        letters.push(l);
        // appending on the right moves the source
        let step = l.level_step();
        Word::new(letters, self.source - step)
    }

    /// Levels visited, rightmost first, starting at the source.
    pub fn level_profile(&self) -> Vec<i64> {
        let mut levels = vec![self.source];
        let mut level = self.source;
        for l in self.letters.iter().rev() {
            level += l.level_step();
            levels.push(level);
        }
        levels
    }

    /// (max |level| visited, max box-count excursion over any prefix),
    /// exploring both branches of every phi letter. Box excursion counts
    /// relative to the input state.
    pub fn margins(&self) -> (u64, i64) {
        fn box_step(l: Letter, level: i64) -> i64 {
            // d+ adds a box on the plus side and removes one on the minus
            // side; everything else preserves the total box count.
            match l {
                Letter::DPlus => {
                    if level >= 0 {
                        1
                    } else {
                        -1
                    }
                }
                _ => 0,
            }
        }
        // Walk right-to-left; phi branches into the two commutator orders.
        fn walk(letters: &[Letter], idx: usize, level: i64, boxes: i64) -> (u64, i64) {
            if idx == 0 {
                return (level.unsigned_abs(), boxes);
            }
            let i = idx - 1;
            match letters[i] {
                Letter::Phi => {
                    let mut max_l = level.unsigned_abs();
                    let mut max_b = boxes;
                    for order in [
                        [Letter::DPlus, Letter::DMinus],
                        [Letter::DMinus, Letter::DPlus],
                    ] {
                        let mut lv = level;
                        let mut bx = boxes;
                        for l in order.iter().rev() {
                            bx += box_step(*l, lv);
                            lv += l.level_step();
                            max_l = max_l.max(lv.unsigned_abs());
                            max_b = max_b.max(bx);
                        }
                        let (ml, mb) = walk(letters, i, lv, bx);
                        max_l = max_l.max(ml);
                        max_b = max_b.max(mb);
                    }
                    (max_l, max_b)
                }
                l => {
                    let bx = boxes + box_step(l, level);
                    let lv = level + l.level_step();
                    let (ml, mb) = walk(letters, i, lv, bx);
                    (ml.max(lv.unsigned_abs()), mb.max(bx))
                }
            }
        }
        let (ml, mb) = walk(&self.letters, self.letters.len(), self.source, 0);
        (ml.max(self.source.unsigned_abs()), mb.max(0))
    }

    /// Parse surface syntax like `1_0 d- z1^2 phi z1^-1 d+ 1_0`.
    ///
    /// The trailing idempotent fixes the source level; inner idempotents are
    /// checked against the computed level. A leading idempotent, if present,
    /// must match the target.
    pub fn parse(input: &str) -> Result<Word, WordError> {
        let tokens: Vec<&str> = input.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(WordError::Parse {
                index: 0,
                token: String::new(),
                msg: "empty word".into(),
            });
        }
        let parse_idem = |tok: &str| -> Option<i64> {
            tok.strip_prefix("1_").and_then(|s| s.parse::<i64>().ok())
        };
        let source = match parse_idem(tokens[tokens.len() - 1]) {
            Some(k) => k,
            None => {
                return Err(WordError::Parse {
                    index: tokens.len() - 1,
                    token: tokens[tokens.len() - 1].to_string(),
                    msg: "word must end with an idempotent 1_<k> fixing the source level".into(),
                })
            }
        };
        // Walk tokens right-to-left, tracking the level.
        let mut letters_rev: Vec<Letter> = Vec::new();
        let mut level = source;
        for idx in (0..tokens.len() - 1).rev() {
            let tok = tokens[idx];
            if let Some(k) = parse_idem(tok) {
                if k != level {
                    return Err(WordError::IdemMismatch {
                        expected: k,
                        found: level,
                    });
                }
                continue;
            }
            let letter = parse_letter(tok).map_err(|msg| WordError::Parse {
                index: idx,
                token: tok.to_string(),
                msg,
            })?;
            if !letter.valid_at(level) {
                return Err(WordError::BadLevel {
                    letter: letter.to_string(),
                    level,
                });
            }
            level += letter.level_step();
            letters_rev.push(letter);
        }
        letters_rev.reverse();
        Word::new(letters_rev, source)
    }
}

fn parse_letter(tok: &str) -> Result<Letter, String> {
    match tok {
        "d+" => return Ok(Letter::DPlus),
        "d-" => return Ok(Letter::DMinus),
        "phi" => return Ok(Letter::Phi),
        _ => {}
    }
    let split_pow = |s: &str| -> Result<(String, i64), String> {
        match s.split_once('^') {
            Some((base, exp)) => {
                let e: i64 = exp.parse().map_err(|_| format!("bad exponent {exp:?}"))?;
                Ok((base.to_string(), e))
            }
            None => Ok((s.to_string(), 1)),
        }
    };
    if let Some(rest) = tok.strip_prefix('z') {
        let (base, a) = split_pow(rest)?;
        let i: u32 = base.parse().map_err(|_| format!("bad z index {base:?}"))?;
        return Ok(Letter::Z { i, a });
    }
    if let Some(rest) = tok.strip_prefix('T') {
        let (base, e) = split_pow(rest)?;
        let i: u32 = base.parse().map_err(|_| format!("bad T index {base:?}"))?;
        match e {
            1 => return Ok(Letter::T { i, inv: false }),
            -1 => return Ok(Letter::T { i, inv: true }),
            _ => return Err("T exponent must be 1 or -1".into()),
        }
    }
    if let Some(rest) = tok.strip_prefix("DeltaStar") {
        let m: u32 = rest.parse().map_err(|_| format!("bad Delta index {rest:?}"))?;
        if m == 0 {
            return Err("Delta index must be positive".into());
        }
        return Ok(Letter::Delta { m, star: true });
    }
    if let Some(rest) = tok.strip_prefix("Delta") {
        let m: u32 = rest.parse().map_err(|_| format!("bad Delta index {rest:?}"))?;
        if m == 0 {
            return Err("Delta index must be positive".into());
        }
        return Ok(Letter::Delta { m, star: false });
    }
    Err("unknown letter".into())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1_{}", self.target())?;
        for l in &self.letters {
            write!(f, " {}", l)?;
        }
        write!(f, " 1_{}", self.source)
    }
}

/// Finite F-linear combination of words with equal source and target.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expr<F> {
    terms: Vec<(F, Word)>,
    source: i64,
    target: i64,
}

impl<F: Scalar> Expr<F> {
    pub fn zero(source: i64, target: i64) -> Self {
        Expr {
            terms: Vec::new(),
            source,
            target,
        }
    }

    pub fn from_word(w: Word) -> Self {
        Expr::from_term(F::one(), w)
    }

    pub fn from_term(c: F, w: Word) -> Self {
        let source = w.source();
        let target = w.target();
        let mut e = Expr::zero(source, target);
        e.add_term(c, w);
        e
    }

    pub fn source(&self) -> i64 {
        self.source
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn terms(&self) -> &[(F, Word)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: F, w: Word) {
        assert_eq!(w.source(), self.source, "term source level mismatch");
        assert_eq!(w.target(), self.target, "term target level mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|(_, tw)| tw.cmp(&w)) {
            Ok(pos) => {
                let s = self.terms[pos].0.add(&c);
                if s.is_zero() {
                    self.terms.remove(pos);
                } else {
                    self.terms[pos].0 = s;
                }
            }
            Err(pos) => self.terms.insert(pos, (c, w)),
        }
    }

    pub fn add(&self, other: &Expr<F>) -> Result<Expr<F>, WordError> {
        if self.source != other.source || self.target != other.target {
            return Err(WordError::TypeMismatch);
        }
        let mut out = self.clone();
        for (c, w) in &other.terms {
            out.add_term(c.clone(), w.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Expr<F>) -> Result<Expr<F>, WordError> {
        self.add(&other.scale(&F::one().neg()))
    }

    pub fn scale(&self, c: &F) -> Expr<F> {
        if c.is_zero() {
            return Expr::zero(self.source, self.target);
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, w)| (k.mul(c), w.clone()))
                .collect(),
            source: self.source,
            target: self.target,
        }
    }

    /// Product: `self * other`, other acting first.
    pub fn mul(&self, other: &Expr<F>) -> Result<Expr<F>, WordError> {
        if other.target != self.source {
            return Err(WordError::TypeMismatch);
        }
        let mut out = Expr::zero(other.source, self.target);
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                out.add_term(c1.mul(c2), w1.concat(w2)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qt::RatFunc;

    #[test]
    fn parse_roundtrip() {
        let w = Word::parse("1_0 d- z1^2 phi z1^-1 d+ 1_0").unwrap();
        assert_eq!(w.source(), 0);
        assert_eq!(w.target(), 0);
        assert_eq!(w.to_string(), "1_0 d- z1^2 phi z1^-1 d+ 1_0");
        let again = Word::parse(&w.to_string()).unwrap();
        assert_eq!(w, again);
    }

    #[test]
    fn malformed_direction_rejected() {
        // d+ raises level, so 1_0 d+ 1_-1 is fine while 1_-1 d+ 1_0 typed
        // from source 0 must fail the leading idempotent check.
        assert!(Word::parse("1_1 d+ 1_0").is_ok());
        assert!(Word::parse("1_-1 d+ 1_0").is_err());
        assert!(Word::parse("1_0 d+ 1_-1").is_ok());
    }

    #[test]
    fn z_index_range_enforced() {
        assert!(Word::parse("1_1 z1 1_1").is_ok());
        assert!(Word::parse("1_1 z2 1_1").is_err());
        assert!(Word::parse("1_2 T1 1_2").is_ok());
        assert!(Word::parse("1_1 T1 1_1").is_err());
    }

    #[test]
    fn margins_of_y_like_word() {
        // 1_0 d- phi z1 d+ 1_0: box margin 2, level margin 2.
        let w = Word::parse("1_0 d- phi z1 d+ 1_0").unwrap();
        let (maxl, maxb) = w.margins();
        assert_eq!(maxl, 2);
        assert_eq!(maxb, 2);
        let e = Word::parse("1_0 d- z1^-3 d+ 1_0").unwrap();
        assert_eq!(e.margins(), (1, 1));
    }

    #[test]
    fn expr_combine_cancels() {
        let w = Word::parse("1_0 d- d+ 1_0").unwrap();
        let e = Expr::<RatFunc>::from_word(w.clone());
        let z = e.sub(&e).unwrap();
        assert!(z.is_zero());
        let sum = e.add(&e).unwrap();
        assert_eq!(sum.terms().len(), 1);
        assert_eq!(sum.terms()[0].0, RatFunc::from_int(2));
    }
}
