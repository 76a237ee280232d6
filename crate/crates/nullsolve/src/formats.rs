//! Line-oriented instance files.
//!
//! All three formats share the same lexical rules: ASCII, one record per
//! line, `#` starts a comment that runs to the end of the line, blank lines
//! are ignored and tokens are separated by whitespace.
//!
//! ```text
//! graph <n> <m>
//! <u> <v>                      (m lines; parallel edges allowed, loops not)
//!
//! olson <p> <n> <m>
//! d: <d_1> ... <d_n>
//! Q1: <q> ...                  (n lines, Q1 .. Qn, each containing 0)
//! <a_i1> ... <a_im>            (n rows; omitted when m = 0)
//!
//! genpoly <m> <k>
//! block <m_i>                  (k times, each followed by m_i polynomials)
//! <monomial> + <monomial> ...  (x<j> factors joined by '*', "1", or "0")
//! fullpairs:
//! <tuple> <tuple>              (any number of pairs)
//! leftover: <tuple>
//! ```
//!
//! Tuples are written `(i,a_1,...,a_mi)` with 1-based indices.

use std::fmt::Write as _;

use nullsolve_core::graphs::Graph;
use nullsolve_core::ppa::{ExplicitPoly, FullPairing};
use nullsolve_core::{GeneralFormPoly, Monomial, OlsonInstance, ResidueSet, TermTuple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

type Parsed<T> = Result<T, ParseError>;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    fn number<T: std::str::FromStr>(&self, what: &str) -> Parsed<T> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

/// A non-blank line with its tokens.
#[derive(Debug)]
struct Line<'a> {
    number: usize,
    text: &'a str,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column: 1, message: message.into() }
    }

    fn end_error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column: self.text.len() + 1, message: message.into() }
    }

    fn expect_len(&self, n: usize, what: &str) -> Parsed<()> {
        match self.tokens.get(n) {
            Some(extra) => Err(extra.error(format!("unexpected `{}` after {what}", extra.text))),
            None if self.tokens.len() < n => Err(self.end_error(format!("incomplete {what}"))),
            None => Ok(()),
        }
    }

    fn keyword(&self, word: &str) -> Parsed<()> {
        match self.tokens.first() {
            Some(t) if t.text == word => Ok(()),
            Some(t) => Err(t.error(format!("expected `{word}`, found `{}`", t.text))),
            None => Err(self.error(format!("expected `{word}`"))),
        }
    }
}

fn lines(text: &str) -> Parsed<Vec<Line<'_>>> {
    let mut out = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let number = index + 1;
        if let Some(column) = raw.find(|c: char| !c.is_ascii()) {
            return Err(ParseError { line: number, column: column + 1, message: "non-ASCII character".into() });
        }
        let body = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in body.char_indices().chain([(body.len(), ' ')]) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push(Token { text: &body[s..i], line: number, column: s + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number, text: body.trim_end(), tokens });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    next: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Parsed<Self> {
        let last_line = text.lines().count().max(1);
        Ok(Cursor { lines: lines(text)?, next: 0, last_line })
    }

    fn take(&mut self, what: &str) -> Parsed<&Line<'a>> {
        let line = self.lines.get(self.next).ok_or_else(|| ParseError {
            line: self.last_line,
            column: 1,
            message: format!("unexpected end of file, expected {what}"),
        })?;
        self.next += 1;
        Ok(line)
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.next)
    }

    fn finish(&self) -> Parsed<()> {
        match self.peek() {
            Some(line) => Err(line.error("unexpected trailing content")),
            None => Ok(()),
        }
    }
}

/// Reads `<kind> <fields...>` and returns the numeric fields.
fn header(cursor: &mut Cursor<'_>, kind: &str, fields: usize) -> Parsed<Vec<(u64, Token<'static>)>> {
    let line = cursor.take(&format!("`{kind}` header"))?;
    line.keyword(kind)?;
    line.expect_len(fields + 1, &format!("`{kind}` header"))?;
    line.tokens[1..]
        .iter()
        .map(|t| {
            let position = Token { text: "", line: t.line, column: t.column };
            Ok((t.number("a nonnegative integer")?, position))
        })
        .collect()
}

pub fn parse_graph(text: &str) -> Parsed<Graph> {
    let mut cursor = Cursor::new(text)?;
    let fields = header(&mut cursor, "graph", 2)?;
    let (n, m) = (fields[0].0 as usize, fields[1].0 as usize);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let line = cursor.take("an edge line `u v`")?;
        line.expect_len(2, "edge")?;
        let u: usize = line.tokens[0].number("a vertex")?;
        let v: usize = line.tokens[1].number("a vertex")?;
        for (t, x) in [(line.tokens[0], u), (line.tokens[1], v)] {
            if !(1..=n).contains(&x) {
                return Err(t.error(format!("vertex {x} outside 1..={n}")));
            }
        }
        if u == v {
            return Err(line.error(format!("loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    cursor.finish()?;
    Graph::new(n, edges).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_olson(text: &str) -> Parsed<OlsonInstance> {
    let mut cursor = Cursor::new(text)?;
    let fields = header(&mut cursor, "olson", 3)?;
    let (p, n, m) = (fields[0].0, fields[1].0 as usize, fields[2].0 as usize);
    let p_at = fields[0].1;
    if !nullsolve_core::arith::is_prime(p) {
        return Err(p_at.error(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(fields[1].1.error("at least one row is required"));
    }

    let line = cursor.take("the `d:` line")?;
    line.keyword("d:")?;
    line.expect_len(n + 1, "`d:` line")?;
    let d = line.tokens[1..]
        .iter()
        .map(|t| t.number::<u32>("an exponent"))
        .collect::<Parsed<Vec<_>>>()?;
    if let Some(i) = (1..n).find(|&i| d[i - 1] < d[i]) {
        return Err(line.tokens[i + 1].error("exponents must be nonincreasing"));
    }

    let mut q = Vec::with_capacity(n);
    for (i, &di) in d.iter().enumerate() {
        let label = format!("Q{}:", i + 1);
        let line = cursor.take(&format!("the `{label}` line"))?;
        line.keyword(&label)?;
        let values = line.tokens[1..]
            .iter()
            .map(|t| t.number::<i64>("an integer"))
            .collect::<Parsed<Vec<_>>>()?;
        let set = ResidueSet::from_integers(p, di, &values).map_err(|e| line.error(e.to_string()))?;
        if !set.contains(0) {
            return Err(line.error(format!("{label} must contain 0")));
        }
        q.push(set);
    }

    let mut a = Vec::with_capacity(n);
    for _ in 0..n {
        if m == 0 {
            a.push(Vec::new());
            continue;
        }
        let line = cursor.take("a matrix row")?;
        line.expect_len(m, "matrix row")?;
        a.push(
            line.tokens
                .iter()
                .map(|t| t.number::<i64>("an integer"))
                .collect::<Parsed<Vec<_>>>()?,
        );
    }
    cursor.finish()?;
    OlsonInstance::new(p, d, a, q).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

pub fn write_olson(inst: &OlsonInstance) -> String {
    let mut out = format!("olson {} {} {}\n", inst.p(), inst.n(), inst.m());
    let d: Vec<String> = inst.d().iter().map(u32::to_string).collect();
    let _ = writeln!(out, "d: {}", d.join(" "));
    for (i, q) in inst.q().iter().enumerate() {
        let elems: Vec<String> = q.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "Q{}: {}", i + 1, elems.join(" "));
    }
    if inst.m() > 0 {
        for row in inst.a() {
            let row: Vec<String> = row.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

fn parse_monomial(text: &str, line: usize, column: usize, m: usize) -> Parsed<Monomial> {
    let error = |message: String| ParseError { line, column, message };
    if text == "1" {
        return Ok(Monomial::ONE);
    }
    let mut vars = Vec::new();
    for factor in text.split('*') {
        let index = factor
            .strip_prefix('x')
            .and_then(|j| j.parse::<usize>().ok())
            .ok_or_else(|| error(format!("`{factor}` is not a variable x<j>")))?;
        if !(1..=m).contains(&index) {
            return Err(error(format!("variable x{index} outside x1..x{m}")));
        }
        vars.push(index);
    }
    Monomial::from_vars(&vars).map_err(|e| error(e.to_string()))
}

/// One polynomial line: `+`-separated monomials, or `0`.
fn parse_polynomial(line: &Line<'_>, m: usize) -> Parsed<ExplicitPoly> {
    let error = |column: usize, message: &str| ParseError { line: line.number, column, message: message.into() };
    let mut monomials = Vec::new();
    let mut start = 0;
    for piece in line.text.split('+') {
        let lead = piece.len() - piece.trim_start().len();
        let column = start + lead + 1;
        start += piece.len() + 1;
        let body = piece.trim();
        if body.is_empty() {
            return Err(error(column, "empty monomial around `+`"));
        }
        if let Some(gap) = body.find(char::is_whitespace) {
            let next = gap + body[gap..].len() - body[gap..].trim_start().len();
            return Err(error(column + next, "missing `+` between monomials"));
        }
        if body == "0" {
            if line.text.trim() == "0" {
                return Ok(ExplicitPoly::new(Vec::new()));
            }
            return Err(error(column, "`0` must stand alone"));
        }
        monomials.push(parse_monomial(body, line.number, column, m)?);
    }
    Ok(ExplicitPoly::new(monomials))
}

fn parse_tuple(t: &Token<'_>) -> Parsed<TermTuple> {
    let inner = t
        .text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| t.error(format!("expected a tuple `(i,a_1,...)`, found `{}`", t.text)))?;
    let parts = inner
        .split(',')
        .map(|s| s.parse::<usize>().map_err(|_| t.error(format!("`{s}` is not an index"))))
        .collect::<Parsed<Vec<_>>>()?;
    let (&block, choice) = parts.split_first().ok_or_else(|| t.error("empty tuple"))?;
    TermTuple::from_one_based(block, choice).map_err(|e| t.error(e.to_string()))
}

pub fn parse_genpoly(text: &str) -> Parsed<GeneralFormPoly> {
    let mut cursor = Cursor::new(text)?;
    let fields = header(&mut cursor, "genpoly", 2)?;
    let (m, k) = (fields[0].0 as usize, fields[1].0 as usize);
    if !(1..=nullsolve_core::monomial::MAX_VARS).contains(&m) {
        return Err(fields[0].1.error(format!("m = {m} outside 1..=64")));
    }
    let mut blocks = Vec::with_capacity(k.min(1024));
    for _ in 0..k {
        let line = cursor.take("a `block` line")?;
        line.keyword("block")?;
        line.expect_len(2, "`block` line")?;
        let mi: usize = line.tokens[1].number("a factor count")?;
        let mut block = Vec::with_capacity(mi.min(1024));
        for _ in 0..mi {
            block.push(parse_polynomial(cursor.take("a polynomial line")?, m)?);
        }
        blocks.push(block);
    }

    let line = cursor.take("`fullpairs:`")?;
    line.keyword("fullpairs:")?;
    line.expect_len(1, "`fullpairs:`")?;
    let mut pairing = FullPairing::default();
    while let Some(line) = cursor.peek() {
        if line.tokens[0].text == "leftover:" {
            break;
        }
        let line = cursor.take("a pair")?;
        line.expect_len(2, "pair")?;
        pairing.pairs.push((parse_tuple(&line.tokens[0])?, parse_tuple(&line.tokens[1])?));
    }
    if cursor.peek().is_some() {
        let line = cursor.take("`leftover:`")?;
        line.expect_len(2, "`leftover:` line")?;
        pairing.leftover = Some(parse_tuple(&line.tokens[1])?);
    }
    cursor.finish()?;
    GeneralFormPoly::new(m, blocks, pairing).map_err(|e| ParseError { line: 1, column: 1, message: e.to_string() })
}

pub fn write_genpoly(inst: &GeneralFormPoly) -> String {
    let mut out = format!("genpoly {} {}\n", inst.m(), inst.blocks().len());
    for block in inst.blocks() {
        let _ = writeln!(out, "block {}", block.len());
        for p in block {
            let _ = writeln!(out, "{p}");
        }
    }
    out.push_str("fullpairs:\n");
    for (a, b) in &inst.pairing().pairs {
        let _ = writeln!(out, "{a} {b}");
    }
    if let Some(left) = &inst.pairing().leftover {
        let _ = writeln!(out, "leftover: {left}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "\
# f = x1 (x2 + 1)
genpoly 2 1
block 2
x1
x2 + 1
fullpairs:
leftover: (1,1,1)
";

    #[test]
    fn triangle() {
        let g = parse_graph("graph 3 3\n1 2\n2 3\n1 3\n").unwrap();
        assert_eq!(g.edges(), [(1, 2), (2, 3), (1, 3)]);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn graph_errors() {
        let err = parse_graph("graph 3 1\n1 4\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = parse_graph("graph 3 2\n1 2\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_graph("graph 3 1\n2 2\n").unwrap_err();
        assert!(err.message.contains("loop"));
        let err = parse_graph("graf 3 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse_graph("graph 3 1\n1 2 3\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
    }

    #[test]
    fn olson_round_trip() {
        let text = "olson 2 1 3\nd: 2\nQ1: 0\n3 3 3\n";
        let inst = parse_olson(text).unwrap();
        assert_eq!(inst.a(), [vec![3, 3, 3]]);
        assert_eq!(write_olson(&inst), text);
        let err = parse_olson("olson 2 1 3\nd: 2\nQ1: 1\n3 3 3\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_olson("olson 4 1 3\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 7));
    }

    #[test]
    fn genpoly_worked_example() {
        let inst = parse_genpoly(WORKED).unwrap();
        assert_eq!(inst.m(), 2);
        assert_eq!(inst.blocks()[0].len(), 2);
        assert_eq!(inst.blocks()[0][1].monomials(), [Monomial::var(2), Monomial::ONE]);
        let written = write_genpoly(&inst);
        assert_eq!(parse_genpoly(&written).unwrap(), inst);
        assert_eq!(written, WORKED.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
    }

    #[test]
    fn genpoly_spacing_and_errors() {
        let tight = parse_genpoly("genpoly 2 1\nblock 1\nx1*x2+x1+1\nfullpairs:\nleftover: (1,1)\n").unwrap();
        assert_eq!(tight.blocks()[0][0].monomials().len(), 3);
        let err = parse_genpoly("genpoly 2 1\nblock 1\nx3\nfullpairs:\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 1));
        let err = parse_genpoly("genpoly 2 1\nblock 1\nx1 x2\nfullpairs:\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 4));
        let err = parse_genpoly("genpoly 2 1\nblock 1\nx1 +\nfullpairs:\n").unwrap_err();
        assert_eq!(err.line, 3);
        let zero = parse_genpoly("genpoly 1 1\nblock 1\n0\nfullpairs:\n").unwrap();
        assert!(zero.blocks()[0][0].monomials().is_empty());
    }
}
