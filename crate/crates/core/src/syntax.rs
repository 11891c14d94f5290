//! Parser for the `name(arg, arg, ...)` text forms used by order types and
//! compact-set descriptors.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Call {
    pub name: String,
    pub args: Vec<Call>,
    pub parens: bool,
}

impl Call {
    /// The bare token when this node has no argument list.
    pub fn as_atom(&self) -> Option<&str> {
        (!self.parens).then_some(self.name.as_str())
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.parens {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

pub fn parse_call(src: &str) -> Result<Call, String> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let call = p.node()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(format!("trailing input at byte {} in {src:?}", p.pos));
    }
    Ok(call)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<Call, String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, b'_' | b'-' | b'+' | b'/' | b'.') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(format!("expected a token at byte {start}"));
        }
        let name = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Ok(Call { name, args: Vec::new(), parens: false });
        }
        self.pos += 1;
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(Call { name, args, parens: true });
        }
        loop {
            args.push(self.node()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Call { name, args, parens: true });
                }
                _ => return Err(format!("expected ',' or ')' at byte {}", self.pos)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_calls() {
        let c = parse_call("union(point(0), geoseq(0, 1, 1/2))").unwrap();
        assert_eq!(c.name, "union");
        assert_eq!(c.args.len(), 2);
        assert_eq!(c.args[1].args[2].as_atom(), Some("1/2"));
        assert_eq!(c.to_string(), "union(point(0), geoseq(0, 1, 1/2))");
    }

    #[test]
    fn errors() {
        assert!(parse_call("f(1,").is_err());
        assert!(parse_call("f(1) x").is_err());
        assert!(parse_call("").is_err());
    }
}
