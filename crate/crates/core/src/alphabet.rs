use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{format_rat, one, parse_rat, Rat};

/// Index of a letter within its [`Alphabet`].
pub type Letter = usize;

/// A finite word; for edge labels it is never empty.
pub type Word = Vec<Letter>;

/// Ordered finite set of distinct opaque letter tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::Alphabet("alphabet must contain at least one letter".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &letters {
            if l.is_empty() {
                return Err(Error::Alphabet("letters must be nonempty tokens".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::Alphabet(format!("letter `{l}` repeated")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Alphabet `0, 1, ..., m-1` written in decimal.
    pub fn indexed(m: usize) -> Self {
        Alphabet {
            letters: (0..m).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn token(&self, x: Letter) -> &str {
        &self.letters[x]
    }

    pub fn letter(&self, token: &str) -> Result<Letter> {
        self.letters
            .iter()
            .position(|l| l == token)
            .ok_or_else(|| Error::UnknownLetter(token.to_string()))
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a word written as one string. A string equal to a letter token is
    /// that letter; otherwise it is split into characters, which requires every
    /// letter of the alphabet to be a single character.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        if let Ok(x) = self.letter(s) {
            return Ok(vec![x]);
        }
        if !self.single_chars() {
            return Err(Error::Schema(format!(
                "label `{s}` is ambiguous over multi-character letters; give it as an array of tokens"
            )));
        }
        s.chars().map(|c| self.letter(&c.to_string())).collect()
    }

    /// Inverse of [`Alphabet::parse_word`]; multi-character letters are space-separated.
    pub fn format_word(&self, w: &[Letter]) -> String {
        let sep = if self.single_chars() { "" } else { " " };
        w.iter()
            .map(|&x| self.letters[x].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.letters.join(","))
    }
}

/// Strictly positive exact weights, one per letter, summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityVector {
    weights: Vec<Rat>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<Rat>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Weights("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| **w <= Rat::from_integer(0.into())) {
            return Err(Error::Weights(format!("weight {} is not positive", format_rat(w))));
        }
        let total: Rat = weights.iter().sum();
        if total != one() {
            return Err(Error::Weights(format!("weights sum to {}", format_rat(&total))));
        }
        Ok(ProbabilityVector { weights })
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        let m = alphabet.len() as i64;
        ProbabilityVector {
            weights: vec![crate::rational::rat(1, m); alphabet.len()],
        }
    }

    /// Parses `x=num/den,y=num/den,...`; every letter must be given exactly once.
    pub fn parse(alphabet: &Alphabet, spec: &str) -> Result<Self> {
        let mut map: HashMap<Letter, Rat> = HashMap::new();
        for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
            let (tok, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Weights(format!("`{part}` is not `letter=weight`")))?;
            let x = alphabet.letter(tok.trim())?;
            let w = parse_rat(val).map_err(|_| Error::Weights(format!("`{val}` is not a rational")))?;
            if map.insert(x, w).is_some() {
                return Err(Error::Weights(format!("letter `{}` given twice", tok.trim())));
            }
        }
        let weights = (0..alphabet.len())
            .map(|x| {
                map.remove(&x)
                    .ok_or_else(|| Error::Weights(format!("missing weight for `{}`", alphabet.token(x))))
            })
            .collect::<Result<Vec<_>>>()?;
        ProbabilityVector::new(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, x: Letter) -> &Rat {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// Product of the letter weights along `w`.
    pub fn word_weight(&self, w: &[Letter]) -> Rat {
        w.iter().fold(one(), |acc, &x| acc * &self.weights[x])
    }

    pub(crate) fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        if self.len() != alphabet.len() {
            return Err(Error::Weights(format!(
                "{} weights for an alphabet of {} letters",
                self.len(),
                alphabet.len()
            )));
        }
        Ok(())
    }
}
