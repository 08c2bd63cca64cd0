//! Text form of divisor classes.
//!
//! ```text
//! expr := term (('+' | '-') term)*      unary '-' allowed before the first term
//! term := [int '*'] atom
//! atom := s0..s3 | r0..r3 | K | '(' expr ')' | 'e*(' expr ')'
//! ```
//!
//! Inside `e*( )` the only symbols are `Co` and `So`, standing for `C` and
//! `F`. The single token `0` denotes the zero class.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{canonical_class, DivisorClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {detail}")]
    SyntaxError { pos: usize, detail: String },
    #[error("unknown symbol `{symbol}` at {pos}")]
    UnknownSymbol { pos: usize, symbol: String },
    #[error("`{symbol}` at {pos} is only allowed inside e*( )")]
    BareSectionSymbol { pos: usize, symbol: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::SyntaxError { pos, .. }
            | ParseError::UnknownSymbol { pos, .. }
            | ParseError::BareSectionSymbol { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(ParseError::SyntaxError {
                    pos: start,
                    detail: format!("unexpected character {:?}", text[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if t.1 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::SyntaxError {
                pos: self.pos(),
                detail: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self, pulled: bool) -> Result<DivisorClass, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let first = self.term(pulled)?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term(pulled)?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term(pulled)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, pulled: bool) -> Result<DivisorClass, ParseError> {
        if let Tok::Int(n) = self.peek().clone() {
            self.bump();
            self.expect(Tok::Star, "'*' after coefficient")?;
            let atom = self.atom(pulled)?;
            return Ok(&n * &atom);
        }
        self.atom(pulled)
    }

    fn atom(&mut self, pulled: bool) -> Result<DivisorClass, ParseError> {
        let (pos, tok) = self.bump();
        match tok {
            Tok::LParen => {
                let inner = self.expr(pulled)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.symbol(pos, name, pulled),
            Tok::End => Err(ParseError::SyntaxError {
                pos,
                detail: "unexpected end of input".into(),
            }),
            _ => Err(ParseError::SyntaxError {
                pos,
                detail: "expected a term".into(),
            }),
        }
    }

    fn symbol(&mut self, pos: usize, name: String, pulled: bool) -> Result<DivisorClass, ParseError> {
        match name.as_str() {
            "Co" | "So" if !pulled => Err(ParseError::BareSectionSymbol { pos, symbol: name }),
            "Co" => Ok(DivisorClass::section()),
            "So" => Ok(DivisorClass::fiber()),
            "e" if !pulled && *self.peek() == Tok::Star => {
                self.bump();
                self.expect(Tok::LParen, "'(' after e*")?;
                let inner = self.expr(true)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ if pulled => Err(ParseError::UnknownSymbol { pos, symbol: name }),
            "K" => Ok(canonical_class()),
            _ => match exceptional_symbol(&name) {
                Some(class) => Ok(class),
                None => Err(ParseError::UnknownSymbol { pos, symbol: name }),
            },
        }
    }
}

fn exceptional_symbol(name: &str) -> Option<DivisorClass> {
    let b = name.as_bytes();
    if b.len() != 2 || !(b'0'..=b'3').contains(&b[1]) {
        return None;
    }
    let i = (b[1] - b'0') as usize;
    match b[0] {
        b's' => Some(DivisorClass::s_exc(i)),
        b'r' => Some(DivisorClass::r_exc(i)),
        _ => None,
    }
}

pub fn parse(text: &str) -> Result<DivisorClass, ParseError> {
    let toks = tokenize(text)?;
    if toks.len() == 2 && toks[0].1 == Tok::Int(BigInt::zero()) {
        return Ok(DivisorClass::zero());
    }
    let mut p = Parser { toks, at: 0 };
    let class = p.expr(false)?;
    if *p.peek() != Tok::End {
        return Err(ParseError::SyntaxError {
            pos: p.pos(),
            detail: "expected '+', '-' or end of input".into(),
        });
    }
    Ok(class)
}

fn push_term(out: &mut String, coeff: &BigInt, sym: &str) {
    if coeff.is_zero() {
        return;
    }
    let neg = coeff.is_negative();
    match (out.is_empty(), neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    let abs = coeff.abs();
    if !abs.is_one() {
        out.push_str(&abs.to_string());
        out.push('*');
    }
    out.push_str(sym);
}

/// Canonical text: the `(C, F)` part inside `e*( )`, then `s0..s3`, `r0..r3`.
pub fn format(d: &DivisorClass) -> String {
    let mut out = String::new();
    if !d.c.is_zero() || !d.f.is_zero() {
        let mut inner = String::new();
        push_term(&mut inner, &d.c, "Co");
        push_term(&mut inner, &d.f, "So");
        out = format!("e*({inner})");
    }
    for (i, v) in d.s.iter().enumerate() {
        push_term(&mut out, v, &format!("s{i}"));
    }
    for (i, v) in d.r.iter().enumerate() {
        push_term(&mut out, v, &format!("r{i}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("e*(4*Co + 3*So) - s0 - 3*r0 - 2*r1 - 2*r2 - 2*r3").unwrap(),
            DivisorClass::new(4, 3, [-1, 0, 0, 0], [-3, -2, -2, -2])
        );
        assert_eq!(parse("K").unwrap(), DivisorClass::new(-2, 0, [1; 4], [1; 4]));
        assert_eq!(
            parse("e*(So) - s1 - r1").unwrap(),
            DivisorClass::new(0, 1, [0, -1, 0, 0], [0, -1, 0, 0])
        );
        assert_eq!(parse("  0 ").unwrap(), DivisorClass::zero());
        assert_eq!(
            parse("-2*(s0 - r1) + 0*K").unwrap(),
            DivisorClass::new(0, 0, [-2, 0, 0, 0], [0, 2, 0, 0])
        );
        assert_eq!(
            parse("e*(-(Co - 2*So))").unwrap(),
            DivisorClass::new(-1, 2, [0; 4], [0; 4])
        );
    }

    #[test]
    fn format_examples() {
        assert_eq!(format(&DivisorClass::zero()), "0");
        assert_eq!(
            format(&DivisorClass::new(0, 1, [-1, 0, 0, 0], [-1, 0, 0, 0])),
            "e*(So) - s0 - r0"
        );
        assert_eq!(
            format(&canonical_class()),
            "e*(-2*Co) + s0 + s1 + s2 + s3 + r0 + r1 + r2 + r3"
        );
        assert_eq!(format(&DivisorClass::new(0, 0, [0, -3, 0, 0], [0; 4])), "-3*s1");
        assert_eq!(format(&DivisorClass::new(4, -3, [0; 4], [0; 4])), "e*(4*Co - 3*So)");
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse("Co + s0"),
            Err(ParseError::BareSectionSymbol {
                pos: 0,
                symbol: "Co".into()
            })
        );
        assert_eq!(
            parse("s0 + t1").unwrap_err(),
            ParseError::UnknownSymbol {
                pos: 5,
                symbol: "t1".into()
            }
        );
        assert_eq!(parse("e*(s0)").unwrap_err().pos(), 3);
        assert_eq!(parse("s0 - -r1").unwrap_err().pos(), 5);
        assert!(matches!(parse("3 s0"), Err(ParseError::SyntaxError { pos: 2, .. })));
        assert!(matches!(parse("s0 +"), Err(ParseError::SyntaxError { pos: 4, .. })));
        assert!(matches!(parse("(s0"), Err(ParseError::SyntaxError { pos: 3, .. })));
        assert!(matches!(parse("s0 r0"), Err(ParseError::SyntaxError { pos: 3, .. })));
        assert!(matches!(parse("s0 # r0"), Err(ParseError::SyntaxError { pos: 3, .. })));
        assert!(matches!(parse(""), Err(ParseError::SyntaxError { pos: 0, .. })));
        assert!(matches!(
            parse("e*(e*(Co))"),
            Err(ParseError::UnknownSymbol { pos: 3, .. })
        ));
        assert!(parse("s4").is_err());
        assert!(parse("2").is_err());
    }

    fn arb_class() -> impl Strategy<Value = DivisorClass> {
        (
            -50i64..50,
            -50i64..50,
            prop::array::uniform4(-9i64..9),
            prop::array::uniform4(-9i64..9),
        )
            .prop_map(|(c, f, s, r)| DivisorClass::new(c, f, s, r))
    }

    fn arb_text() -> impl Strategy<Value = String> {
        let atom = prop_oneof![
            Just("K".to_string()),
            (0usize..4).prop_map(|i| format!("s{i}")),
            (0usize..4).prop_map(|i| format!("r{i}")),
            (0u32..5, 0u32..5).prop_map(|(a, b)| format!("e*({a}*Co - {b}*So)")),
            Just("(s0 - K)".to_string()),
        ];
        prop::collection::vec((any::<bool>(), 0u32..7, atom), 1..6).prop_map(|terms| {
            let mut out = String::new();
            for (i, (neg, k, a)) in terms.into_iter().enumerate() {
                if i > 0 {
                    out.push_str(if neg { " - " } else { " + " });
                } else if neg {
                    out.push('-');
                }
                out.push_str(&format!("{k}*{a}"));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn round_trip(d in arb_class()) {
            prop_assert_eq!(parse(&format(&d)).unwrap(), d);
        }

        #[test]
        fn normalisation_idempotent(t in arb_text()) {
            let once = format(&parse(&t).unwrap());
            let twice = format(&parse(&once).unwrap());
            prop_assert_eq!(once, twice);
        }
    }
}
