use std::fmt;

use crate::error::{Error, Result};

/// Epistemic formulas over named atoms. Disjunction, implication,
/// possibility and "everyone knows" are derived forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// `K_i φ`
    Know(usize, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn falsum() -> Self {
        Formula::True.not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    /// `¬(¬φ ∧ ¬ψ)`
    pub fn or(self, other: Formula) -> Self {
        self.not().and(other.not()).not()
    }

    /// `¬(φ ∧ ¬ψ)`
    pub fn implies(self, other: Formula) -> Self {
        self.and(other.not()).not()
    }

    pub fn know(agent: usize, phi: Formula) -> Self {
        Formula::Know(agent, Box::new(phi))
    }

    /// `¬K_i¬φ`
    pub fn possible(agent: usize, phi: Formula) -> Self {
        Formula::know(agent, phi.not()).not()
    }

    /// `⋀_{i ∈ agents} K_i φ`; `true` for no agents.
    pub fn everyone_knows(agents: &[usize], phi: &Formula) -> Self {
        Formula::conj(agents.iter().map(|&i| Formula::know(i, phi.clone())))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or_else(Formula::falsum)
    }

    /// Largest agent index mentioned, if any.
    pub fn max_agent(&self) -> Option<usize> {
        match self {
            Formula::True | Formula::Atom(_) => None,
            Formula::Not(a) => a.max_agent(),
            Formula::And(a, b) => a.max_agent().max(b.max_agent()),
            Formula::Know(i, a) => Some((*i).max(a.max_agent().unwrap_or(0))),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Know(i, a) => write!(f, "(K {i} {a})"),
        }
    }
}

/// Parses the prefix syntax
///
/// ```text
/// φ ::= true | false | atom
///     | (not φ) | (and φ…) | (or φ…) | (implies φ φ)
///     | (K i φ) | (M i φ) | (E i j… φ)
/// ```
///
/// where atoms are identifiers and agents are decimal indices. `Display`
/// output parses back to the same formula.
pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut parser = Parser::new(src)?;
    let phi = parser.formula()?;
    match parser.peek() {
        None => Ok(phi),
        Some(tok) => Err(tok.error("unexpected trailing input")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Open,
    Close,
    Word(String),
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    line: usize,
    column: usize,
}

impl Token {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let (mut line, mut column) = (1, 1);
        let mut chars = src.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (l, col) = (line, column);
            if c == '\n' {
                line += 1;
                column = 1;
                chars.next();
            } else if c.is_whitespace() {
                column += 1;
                chars.next();
            } else if c == '(' || c == ')' {
                let kind = if c == '(' { Kind::Open } else { Kind::Close };
                tokens.push(Token { kind, line: l, column: col });
                column += 1;
                chars.next();
            } else if c.is_ascii_alphanumeric() || c == '_' {
                let mut word = String::new();
                while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                    word.push(c);
                    column += 1;
                    chars.next();
                }
                tokens.push(Token {
                    kind: Kind::Word(word),
                    line: l,
                    column: col,
                });
            } else {
                return Err(Error::Parse {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
        Ok(Parser {
            tokens,
            pos: 0,
            end: (line, column),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self, expected: &str) -> Result<Token> {
        match self.tokens.get(self.pos) {
            Some(tok) => {
                self.pos += 1;
                Ok(tok.clone())
            }
            None => Err(Error::Parse {
                line: self.end.0,
                column: self.end.1,
                message: format!("unexpected end of input, expected {expected}"),
            }),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let tok = self.next("a formula")?;
        match tok.kind {
            Kind::Close => Err(tok.error("unexpected `)`")),
            Kind::Word(ref w) => match w.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::falsum()),
                _ if w.starts_with(|c: char| c.is_ascii_digit()) => {
                    Err(tok.error(format!("atom `{w}` must not start with a digit")))
                }
                _ => Ok(Formula::Atom(w.clone())),
            },
            Kind::Open => {
                let head = self.next("an operator")?;
                let Kind::Word(op) = &head.kind else {
                    return Err(head.error("expected an operator"));
                };
                let phi = match op.as_str() {
                    "not" => self.formula()?.not(),
                    "and" => Formula::conj(self.operands()?),
                    "or" => Formula::disj(self.operands()?),
                    "implies" => {
                        let a = self.formula()?;
                        let b = self.formula()?;
                        a.implies(b)
                    }
                    "K" | "M" => {
                        let i = self.agent()?;
                        let a = self.formula()?;
                        if op == "K" {
                            Formula::know(i, a)
                        } else {
                            Formula::possible(i, a)
                        }
                    }
                    "E" => {
                        let mut agents = vec![self.agent()?];
                        while let Some(Kind::Word(w)) = self.peek().map(|t| &t.kind) {
                            if !w.starts_with(|c: char| c.is_ascii_digit()) {
                                break;
                            }
                            agents.push(self.agent()?);
                        }
                        let a = self.formula()?;
                        Formula::everyone_knows(&agents, &a)
                    }
                    other => return Err(head.error(format!("unknown operator `{other}`"))),
                };
                let close = self.next("`)`")?;
                if close.kind != Kind::Close {
                    return Err(close.error("expected `)`"));
                }
                Ok(phi)
            }
        }
    }

    fn operands(&mut self) -> Result<Vec<Formula>> {
        let mut items = Vec::new();
        while !matches!(self.peek().map(|t| &t.kind), Some(Kind::Close) | None) {
            items.push(self.formula()?);
        }
        Ok(items)
    }

    fn agent(&mut self) -> Result<usize> {
        let tok = self.next("an agent index")?;
        match &tok.kind {
            Kind::Word(w) => w.parse().map_err(|_| tok.error(format!("expected an agent index, found `{w}`"))),
            _ => Err(tok.error("expected an agent index")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_core_forms() {
        let phi = parse_formula("(and p (K 1 (not q)))").unwrap();
        assert_eq!(phi, Formula::atom("p").and(Formula::know(1, Formula::atom("q").not())));
        assert_eq!(parse_formula("(M 0 p)").unwrap(), Formula::possible(0, Formula::atom("p")));
        assert_eq!(parse_formula("(and)").unwrap(), Formula::True);
        assert_eq!(parse_formula("(or)").unwrap(), Formula::falsum());
        assert_eq!(
            parse_formula("(E 0 2 p)").unwrap(),
            Formula::know(0, Formula::atom("p")).and(Formula::know(2, Formula::atom("p")))
        );
    }

    #[test]
    fn display_round_trips() {
        for src in ["(implies p (K 0 q))", "(or p q r)", "(E 1 2 (M 0 false))", "true", "x_1"] {
            let phi = parse_formula(src).unwrap();
            assert_eq!(parse_formula(&phi.to_string()).unwrap(), phi);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("(and p\n  (K x q))").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 6, .. }), "{err}");
        let err = parse_formula("(not p").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 7, .. }), "{err}");
        let err = parse_formula("p q").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 3, .. }), "{err}");
        assert!(parse_formula("(frob p)").is_err());
        assert!(parse_formula("p & q").is_err());
    }

    #[test]
    fn max_agent() {
        assert_eq!(parse_formula("(and (K 3 p) (M 1 q))").unwrap().max_agent(), Some(3));
        assert_eq!(parse_formula("p").unwrap().max_agent(), None);
    }
}
