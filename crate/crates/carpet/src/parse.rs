//! Text forms of the values accepted on the command line and in config files.

use std::fmt;
use std::str::FromStr;

use carpet_core::symbolic::{Subshift, Word};
use carpet_core::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A complex number written `re` or `re,im`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexArg(pub Complex);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
        let z = match parts.as_slice() {
            [re] => Complex::new(num(re)?, 0.0),
            [re, im] => Complex::new(num(re)?, num(im)?),
            _ => return Err(format!("`{s}` is not of the form re or re,im")),
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(format!("`{s}` is not finite"));
        }
        Ok(ComplexArg(z))
    }
}

impl fmt::Display for ComplexArg {
    // shortest round-trip form of each part
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 && self.0.im.is_sign_positive() {
            write!(f, "{:?}", self.0.re)
        } else {
            write!(f, "{:?},{:?}", self.0.re, self.0.im)
        }
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Branch data rows, `;` between rows and `,` inside a row: `3;2,1;2,1`.
pub fn parse_rows(s: &str) -> Result<Vec<Vec<usize>>, String> {
    s.split(';')
        .map(|row| {
            row.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a local degree")))
                .collect()
        })
        .collect()
}

/// An eventually periodic word `pre(period)`, e.g. `3(012)`; without
/// parentheses the word is finite.
pub fn parse_word(shift: &Subshift, s: &str) -> Result<Word, String> {
    let digits = |t: &str| -> Result<Vec<u8>, String> {
        t.chars()
            .map(|ch| match ch.to_digit(10) {
                Some(d) if (d as usize) < shift.alphabet() => Ok(d as u8),
                _ => Err(format!("`{ch}` is not a digit below {}", shift.alphabet())),
            })
            .collect()
    };
    let s = s.trim();
    let (pre, period) = match s.find('(') {
        Some(open) => {
            let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| format!("`{s}` must end with `)`"))?;
            if inner.is_empty() {
                return Err(format!("`{s}` has an empty period"));
            }
            (digits(&s[..open])?, digits(inner)?)
        }
        None => (digits(s)?, Vec::new()),
    };
    shift.word(pre, period).map_err(|e| e.to_string())
}
