use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Arrow, Path, Quiver, Relation};
use crate::error::{Error, Result};
use crate::exactalg::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Semi,
    Colon,
    To,
    Dot,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (ln + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_alphanumeric() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), line, col });
                continue;
            }
            let tok = match c {
                ';' => Tok::Semi,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '-' if chars.get(i + 1) == Some(&'>') => {
                    i += 1;
                    Tok::To
                }
                '-' => Tok::Minus,
                other => {
                    return Err(Error::Parse { line, col, msg: format!("unexpected character '{other}'") });
                }
            };
            i += 1;
            out.push(Token { tok, line, col });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn semantic<T>(&self, at: (usize, usize), msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: at.0, col: at.1, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected keyword '{kw}'")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let w = self.word("integer")?;
        w.parse::<BigInt>().or_else(|_| {
            self.pos -= 1;
            self.err(format!("'{w}' is not an integer"))
        })
    }

    fn is_coefficient_start(&self) -> bool {
        match self.peek() {
            Some(Tok::Word(w)) if w.chars().all(|c| c.is_ascii_digit()) => {
                matches!(self.peek_at(1), Some(Tok::Star) | Some(Tok::Slash))
            }
            _ => false,
        }
    }

    fn term(&mut self, quiver: &Quiver, sign: Rat) -> Result<(Rat, Path)> {
        let mut coeff = sign;
        if self.is_coefficient_start() {
            let num = self.integer()?;
            let mut c = Rat::from_integer(num);
            if self.peek() == Some(&Tok::Slash) {
                self.pos += 1;
                let at = self.here();
                let den = self.integer()?;
                if den.is_zero() {
                    return self.semantic(at, "zero denominator");
                }
                c /= Rat::from_integer(den);
            }
            self.expect(Tok::Star, "'*' after coefficient")?;
            coeff *= c;
        }
        let start = self.here();
        let mut names = vec![self.word("arrow name")?];
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            names.push(self.word("arrow name after '.'")?);
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        match quiver.path_from_names(&refs) {
            Ok(p) => Ok((coeff, p)),
            Err(e) => self.semantic(start, strip_prefix(e)),
        }
    }

    fn relation(&mut self, quiver: &Quiver) -> Result<Relation> {
        let start = self.here();
        let mut sign = Rat::one();
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -sign;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        let mut terms = vec![self.term(quiver, sign)?];
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => Rat::one(),
                Some(Tok::Minus) => -Rat::one(),
                _ => break,
            };
            self.pos += 1;
            terms.push(self.term(quiver, sign)?);
        }
        Relation::new(terms).or_else(|e| self.semantic(start, strip_prefix(e)))
    }
}

fn strip_prefix(e: Error) -> String {
    match e {
        Error::Semantic(m) => m,
        other => other.to_string(),
    }
}

/// Parses the algebra grammar into a quiver and relation list, without checking admissibility.
pub fn parse_presentation(text: &str) -> Result<(Quiver, Vec<Relation>)> {
    let toks = lex(text)?;
    let end = (text.lines().count().max(1), text.lines().last().map_or(1, |l| l.chars().count() + 1));
    let mut p = Parser { toks, pos: 0, end };

    p.keyword("vertices")?;
    let mut vertices: Vec<String> = Vec::new();
    while let Some(Tok::Word(_)) = p.peek() {
        let at = p.here();
        let v = p.word("vertex id")?;
        if vertices.contains(&v) {
            return p.semantic(at, format!("duplicate vertex '{v}'"));
        }
        vertices.push(v);
    }
    if vertices.is_empty() {
        return p.err("expected at least one vertex");
    }
    p.expect(Tok::Semi, "';' after vertex list")?;

    p.keyword("arrows")?;
    let mut arrows: Vec<Arrow> = Vec::new();
    while let Some(Tok::Word(_)) = p.peek() {
        let at = p.here();
        let name = p.word("arrow name")?;
        p.expect(Tok::Colon, "':' after arrow name")?;
        let tat = p.here();
        let t = p.word("tail vertex")?;
        p.expect(Tok::To, "'->'")?;
        let hat = p.here();
        let h = p.word("head vertex")?;
        let tail = match vertices.iter().position(|v| *v == t) {
            Some(i) => i,
            None => return p.semantic(tat, format!("unknown vertex '{t}'")),
        };
        let head = match vertices.iter().position(|v| *v == h) {
            Some(i) => i,
            None => return p.semantic(hat, format!("unknown vertex '{h}'")),
        };
        if arrows.iter().any(|a| a.name == name) {
            return p.semantic(at, format!("duplicate arrow '{name}'"));
        }
        arrows.push(Arrow { name, tail, head });
    }
    p.expect(Tok::Semi, "';' after arrow list")?;
    let quiver = Quiver::new(vertices, arrows)?;

    let mut relations = Vec::new();
    if p.peek().is_some() {
        p.keyword("relations")?;
        relations.push(p.relation(&quiver)?);
        while p.peek() == Some(&Tok::Comma) {
            p.pos += 1;
            relations.push(p.relation(&quiver)?);
        }
        p.expect(Tok::Semi, "';' after relation list")?;
    }
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok((quiver, relations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound_quiver::print_presentation;
    use crate::exactalg::rat;

    #[test]
    fn kronecker() {
        let (q, r) = parse_presentation("vertices 1 2; arrows a:1->2 b:1->2;").unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.arrows().len(), 2);
        assert!(r.is_empty());
    }

    #[test]
    fn a3_zero_relation() {
        let (q, r) = parse_presentation("vertices 1 2 3; arrows a:1->2 b:2->3; relations a.b;").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(q.path_name(&r[0].terms()[0].1), "a.b");
    }

    #[test]
    fn short_relation_rejected() {
        let e = parse_presentation("vertices 1 2; arrows a:1->2; relations a;").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 40, .. }), "{e:?}");
        assert!(e.to_string().contains("length < 2"));
    }

    #[test]
    fn positioned_errors() {
        let e = parse_presentation("vertices 1 2;\narrows a:1->3;").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 13, .. }), "{e:?}");
        let e = parse_presentation("vertices 1 2 3;\narrows a:1->2 b:2->3;\nrelations b.a;").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, col: 11, .. }), "{e:?}");
        let e = parse_presentation("vertices 1 2; arrows a:1->2 b:1->2 c:2->2; relations a.c - b;").unwrap_err();
        assert!(e.to_string().contains("length < 2"));
        let e = parse_presentation("vertices 1 2; arrows a:1->2 c:2->2 d:1->1; relations a.c - d.a.c.c + d.d;").unwrap_err();
        assert!(e.to_string().contains("parallel"), "{e}");
    }

    #[test]
    fn coefficients_and_comments() {
        let text = "# square\nvertices 1 2 3 4;\narrows a:1->2 b:2->4 c:1->3 d:3->4;\nrelations 1/2*a.b - 3*c.d;\n";
        let (q, r) = parse_presentation(text).unwrap();
        assert_eq!(r[0].terms()[0].0, rat(1, 2));
        assert_eq!(r[0].terms()[1].0, rat(-3, 1));
        let printed = print_presentation(&q, &r);
        assert_eq!(printed, "vertices 1 2 3 4;\narrows a:1->2 b:2->4 c:1->3 d:3->4;\nrelations 1/2*a.b - 3*c.d;\n");
    }
}
