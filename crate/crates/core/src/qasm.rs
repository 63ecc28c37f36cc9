//! OpenQASM 2.0 subset: the interchange text format for circuits.
//!
//! Accepted surface: the version header, `include` (ignored), one `qreg`,
//! optional `creg`, the catalog gates (`h x y z s sdg t tdg rx ry rz cx cz
//! swap ccx`), terminal `measure` (recorded as metadata, not as ops), and
//! `barrier` (ignored with a warning). Rotation angles are restricted to
//! the catalog set; decimal literals within 1e-9 of a catalog angle are
//! mapped onto it.
//!
//! Parsing is total: any byte string yields either a circuit or a list of
//! spanned diagnostics — never a panic, never a partial circuit.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{validate, Angle, CircuitIR, GateKind};

/// A half-open source region, 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: u32,
    pub col: u32,
    pub len: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub span: SourceSpan,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.span.line, self.span.col, self.message)
    }
}

/// Successful parse: the circuit plus any warnings (e.g. ignored barriers).
#[derive(Clone, Debug)]
pub struct Parsed {
    pub circuit: CircuitIR,
    pub warnings: Vec<ParseDiagnostic>,
}

// ---------------------------------------------------------------- lexer --

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Lex everything up front; invalid bytes become error diagnostics.
    fn run(mut self) -> (Vec<Token>, Vec<ParseDiagnostic>) {
        let mut toks = Vec::new();
        let mut diags = Vec::new();
        while let Some(b) = self.peek() {
            let (line, col) = (self.line, self.col);
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'/' if self.src.get(self.pos + 1) == Some(&b'/') => {
                    while self.peek().is_some_and(|b| b != b'\n') {
                        self.bump();
                    }
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = self.pos;
                    while self
                        .peek()
                        .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                    {
                        self.bump();
                    }
                    let text = core::str::from_utf8(&self.src[start..self.pos])
                        .unwrap_or_default()
                        .to_string();
                    let len = (self.pos - start) as u32;
                    toks.push(Token { tok: Tok::Ident(text), span: SourceSpan { line, col, len } });
                }
                b'0'..=b'9' | b'.' => {
                    let start = self.pos;
                    while self
                        .peek()
                        .is_some_and(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E'))
                    {
                        let was_exp = matches!(self.src[self.pos], b'e' | b'E');
                        self.bump();
                        if was_exp && self.peek().is_some_and(|b| matches!(b, b'+' | b'-')) {
                            self.bump();
                        }
                    }
                    let text = core::str::from_utf8(&self.src[start..self.pos])
                        .unwrap_or_default()
                        .to_string();
                    let len = (self.pos - start) as u32;
                    toks.push(Token { tok: Tok::Number(text), span: SourceSpan { line, col, len } });
                }
                b'"' => {
                    self.bump();
                    let start = self.pos;
                    while self.peek().is_some_and(|b| b != b'"' && b != b'\n') {
                        self.bump();
                    }
                    let text = core::str::from_utf8(&self.src[start..self.pos])
                        .unwrap_or_default()
                        .to_string();
                    let len = (self.pos - start + 2) as u32;
                    if self.peek() == Some(b'"') {
                        self.bump();
                        toks.push(Token { tok: Tok::Str(text), span: SourceSpan { line, col, len } });
                    } else {
                        diags.push(ParseDiagnostic {
                            span: SourceSpan { line, col, len: len.max(1) },
                            message: "unterminated string literal".into(),
                            severity: Severity::Error,
                        });
                    }
                }
                b'-' if self.src.get(self.pos + 1) == Some(&b'>') => {
                    self.bump();
                    self.bump();
                    toks.push(Token { tok: Tok::Arrow, span: SourceSpan { line, col, len: 2 } });
                }
                b'[' | b']' | b'(' | b')' | b',' | b';' | b'-' | b'+' | b'*' | b'/' => {
                    self.bump();
                    toks.push(Token {
                        tok: Tok::Sym(b as char),
                        span: SourceSpan { line, col, len: 1 },
                    });
                }
                _ => {
                    self.bump();
                    diags.push(ParseDiagnostic {
                        span: SourceSpan { line, col, len: 1 },
                        message: format!("unexpected byte 0x{b:02x}"),
                        severity: Severity::Error,
                    });
                }
            }
        }
        (toks, diags)
    }
}

// --------------------------------------------------------------- parser --

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<ParseDiagnostic>,
    warnings: Vec<ParseDiagnostic>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> SourceSpan {
        self.peek()
            .map(|t| t.span)
            .or_else(|| self.toks.last().map(|t| t.span))
            .unwrap_or(SourceSpan { line: 1, col: 1, len: 1 })
    }

    fn error_here(&mut self, message: String) {
        let span = self.here();
        self.diags.push(ParseDiagnostic { span, message, severity: Severity::Error });
    }

    /// Skip past the next `;` (error recovery between statements).
    fn sync(&mut self) {
        while let Some(t) = self.next() {
            if t.tok == Tok::Sym(';') {
                break;
            }
        }
    }

    fn expect_sym(&mut self, c: char) -> bool {
        if self.peek().map(|t| &t.tok) == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            self.error_here(format!("expected `{c}`"));
            false
        }
    }

    fn expect_ident(&mut self) -> Option<(String, SourceSpan)> {
        match self.peek().cloned() {
            Some(Token { tok: Tok::Ident(s), span }) => {
                self.pos += 1;
                Some((s, span))
            }
            _ => {
                self.error_here("expected identifier".into());
                None
            }
        }
    }

    fn expect_index(&mut self) -> Option<(u32, SourceSpan)> {
        if !self.expect_sym('[') {
            return None;
        }
        let tok = self.next();
        let (num, span) = match tok {
            Some(Token { tok: Tok::Number(n), span }) => (n, span),
            _ => {
                self.error_here("expected register index".into());
                return None;
            }
        };
        let idx = match num.parse::<u32>() {
            Ok(v) => v,
            Err(_) => {
                self.diags.push(ParseDiagnostic {
                    span,
                    message: format!("register index `{num}` is not a valid non-negative integer"),
                    severity: Severity::Error,
                });
                return None;
            }
        };
        if !self.expect_sym(']') {
            return None;
        }
        Some((idx, span))
    }
}

type GateCtor = fn(Option<Angle>) -> GateKind;

/// Gate-statement shape, resolved from a mnemonic.
fn lookup_gate(name: &str) -> Option<(GateCtor, bool)> {
    // (constructor, wants_angle)
    Some(match name {
        "h" => ((|_| GateKind::H) as GateCtor, false),
        "x" => (|_| GateKind::X, false),
        "y" => (|_| GateKind::Y, false),
        "z" => (|_| GateKind::Z, false),
        "s" => (|_| GateKind::S, false),
        "sdg" => (|_| GateKind::Sdg, false),
        "t" => (|_| GateKind::T, false),
        "tdg" => (|_| GateKind::Tdg, false),
        "rx" => (|a| GateKind::RX(a.unwrap()), true),
        "ry" => (|a| GateKind::RY(a.unwrap()), true),
        "rz" => (|a| GateKind::RZ(a.unwrap()), true),
        "cx" => (|_| GateKind::CNOT, false),
        "cz" => (|_| GateKind::CZ, false),
        "swap" => (|_| GateKind::SWAP, false),
        "ccx" => (|_| GateKind::CCX, false),
        _ => return None,
    })
}

/// Parse source text into a circuit, or a non-empty list of diagnostics.
/// Warnings ride along with success; errors suppress the circuit entirely.
pub fn parse(text: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let (toks, lex_diags) = Lexer::new(text).run();
    let mut p = Parser { toks, pos: 0, diags: lex_diags, warnings: Vec::new() };

    let mut circuit = CircuitIR::new(0);
    let mut op_spans: Vec<SourceSpan> = Vec::new();
    let mut qreg: Option<(String, u32)> = None;
    let mut creg: Option<(String, u32)> = None;
    let mut measures: Vec<(u32, u32)> = Vec::new();

    // header: OPENQASM <real> ;
    match (p.next(), p.next(), p.next()) {
        (
            Some(Token { tok: Tok::Ident(kw), .. }),
            Some(Token { tok: Tok::Number(ver), span }),
            Some(Token { tok: Tok::Sym(';'), .. }),
        ) if kw == "OPENQASM" => {
            if ver != "2.0" {
                p.diags.push(ParseDiagnostic {
                    span,
                    message: format!("unsupported OPENQASM version {ver} (only 2.0)"),
                    severity: Severity::Error,
                });
            }
        }
        _ => {
            p.pos = 0;
            p.error_here("missing `OPENQASM 2.0;` header".into());
            p.sync();
        }
    }

    while let Some(tok) = p.peek().cloned() {
        let Token { tok: kind, span } = tok;
        let name = match kind {
            Tok::Ident(s) => s,
            _ => {
                p.error_here("expected statement".into());
                p.sync();
                continue;
            }
        };
        match name.as_str() {
            "include" => {
                p.pos += 1;
                match p.next() {
                    Some(Token { tok: Tok::Str(inc), span }) => {
                        if inc != "qelib1.inc" {
                            p.warnings.push(ParseDiagnostic {
                                span,
                                message: format!("include \"{inc}\" ignored (only qelib1.inc is known)"),
                                severity: Severity::Warning,
                            });
                        }
                        p.expect_sym(';');
                    }
                    _ => {
                        p.error_here("expected include path string".into());
                        p.sync();
                    }
                }
            }
            "qreg" | "creg" => {
                p.pos += 1;
                let Some((reg_name, _)) = p.expect_ident() else {
                    p.sync();
                    continue;
                };
                let Some((size, size_span)) = p.expect_index() else {
                    p.sync();
                    continue;
                };
                p.expect_sym(';');
                let slot = if name == "qreg" { &mut qreg } else { &mut creg };
                if slot.is_some() {
                    p.diags.push(ParseDiagnostic {
                        span,
                        message: format!("{name} redefinition (a single register is supported)"),
                        severity: Severity::Error,
                    });
                } else if size == 0 {
                    p.diags.push(ParseDiagnostic {
                        span: size_span,
                        message: format!("{name} size must be positive"),
                        severity: Severity::Error,
                    });
                } else {
                    *slot = Some((reg_name, size));
                    if name == "qreg" {
                        circuit.n_qubits = size;
                    }
                }
            }
            "barrier" => {
                p.warnings.push(ParseDiagnostic {
                    span,
                    message: "barrier ignored (no scheduling semantics here)".into(),
                    severity: Severity::Warning,
                });
                p.sync();
            }
            "measure" => {
                p.pos += 1;
                let q = parse_operand(&mut p, &qreg, "quantum");
                if q.is_none() {
                    p.sync();
                    continue;
                }
                if p.peek().map(|t| &t.tok) != Some(&Tok::Arrow) {
                    p.error_here("expected `->` in measure statement".into());
                    p.sync();
                    continue;
                }
                p.pos += 1;
                let c = parse_operand(&mut p, &creg, "classical");
                p.expect_sym(';');
                if let (Some(q), Some(c)) = (q, c) {
                    measures.push((q, c));
                }
            }
            "OPENQASM" => {
                p.diags.push(ParseDiagnostic {
                    span,
                    message: "duplicate OPENQASM header".into(),
                    severity: Severity::Error,
                });
                p.sync();
            }
            _ => match lookup_gate(&name) {
                Some((build, wants_angle)) => {
                    p.pos += 1;
                    let angle = if wants_angle {
                        match parse_angle(&mut p) {
                            Some(a) => Some(a),
                            None => {
                                p.sync();
                                continue;
                            }
                        }
                    } else {
                        None
                    };
                    let kind = build(angle);
                    let mut qubits = Vec::new();
                    let mut ok = true;
                    loop {
                        match parse_operand(&mut p, &qreg, "quantum") {
                            Some(q) => qubits.push(q),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                        match p.peek().map(|t| &t.tok) {
                            Some(Tok::Sym(',')) => {
                                p.pos += 1;
                            }
                            _ => break,
                        }
                    }
                    if !ok {
                        p.sync();
                        continue;
                    }
                    p.expect_sym(';');
                    circuit.ops.push(crate::circuit::GateOp { kind, qubits });
                    op_spans.push(span);
                }
                None => {
                    p.diags.push(ParseDiagnostic {
                        span,
                        message: format!("unknown gate `{name}`"),
                        severity: Severity::Error,
                    });
                    p.sync();
                }
            },
        }
    }

    if qreg.is_none() && p.diags.is_empty() {
        p.diags.push(ParseDiagnostic {
            span: SourceSpan { line: 1, col: 1, len: 1 },
            message: "no qreg declared".into(),
            severity: Severity::Error,
        });
    }

    // IR-level invariants (duplicate operands, arity...) become diagnostics
    // anchored at the offending statement.
    for v in validate(&circuit) {
        let span = op_spans.get(v.op_index).copied().unwrap_or(SourceSpan {
            line: 1,
            col: 1,
            len: 1,
        });
        p.diags.push(ParseDiagnostic { span, message: v.reason, severity: Severity::Error });
    }

    if !p.diags.is_empty() {
        let mut all = p.diags;
        all.extend(p.warnings);
        return Err(all);
    }

    if !measures.is_empty() {
        let rendered: Vec<String> =
            measures.iter().map(|(q, c)| format!("{q}:{c}")).collect();
        circuit.metadata.insert("measurements".into(), rendered.join(","));
    }
    if let Some((_, csize)) = creg {
        circuit.metadata.insert("creg".into(), csize.to_string());
    }
    Ok(Parsed { circuit, warnings: p.warnings })
}

/// `name[index]` against a declared register; reports range errors.
fn parse_operand(
    p: &mut Parser,
    reg: &Option<(String, u32)>,
    flavor: &str,
) -> Option<u32> {
    let (name, span) = p.expect_ident()?;
    let (idx, idx_span) = p.expect_index()?;
    match reg {
        None => {
            p.diags.push(ParseDiagnostic {
                span,
                message: format!("no {flavor} register declared before use of `{name}`"),
                severity: Severity::Error,
            });
            None
        }
        Some((reg_name, size)) => {
            if reg_name != &name {
                p.diags.push(ParseDiagnostic {
                    span,
                    message: format!("unknown register `{name}` (declared: `{reg_name}`)"),
                    severity: Severity::Error,
                });
                return None;
            }
            if idx >= *size {
                p.diags.push(ParseDiagnostic {
                    span: idx_span,
                    message: format!("index {idx} out of range for `{name}[{size}]`"),
                    severity: Severity::Error,
                });
                return None;
            }
            Some(idx)
        }
    }
}

/// `( angle )` where angle ∈ {pi, ±pi/2, ±3*pi/2} or a decimal within 1e-9
/// of one of those.
fn parse_angle(p: &mut Parser) -> Option<Angle> {
    if !p.expect_sym('(') {
        return None;
    }
    let start_span = p.here();
    // slurp tokens to the closing paren
    let mut parts: Vec<Tok> = Vec::new();
    loop {
        match p.peek().map(|t| &t.tok) {
            Some(Tok::Sym(')')) => {
                p.pos += 1;
                break;
            }
            Some(_) => {
                parts.push(p.next().unwrap().tok);
                if parts.len() > 8 {
                    break;
                }
            }
            None => {
                p.error_here("unterminated angle expression".into());
                return None;
            }
        }
    }
    let neg = matches!(parts.first(), Some(Tok::Sym('-')));
    let body: &[Tok] = if neg { &parts[1..] } else { &parts };
    let angle = match body {
        [Tok::Ident(id)] if id == "pi" && !neg => Some(Angle::Pi),
        [Tok::Ident(id), Tok::Sym('/'), Tok::Number(two)] if id == "pi" && two == "2" => {
            Some(if neg { Angle::NegPiOver2 } else { Angle::PiOver2 })
        }
        [Tok::Number(three), Tok::Sym('*'), Tok::Ident(id), Tok::Sym('/'), Tok::Number(two)]
            if three == "3" && id == "pi" && two == "2" =>
        {
            Some(if neg { Angle::NegThreePiOver2 } else { Angle::ThreePiOver2 })
        }
        [Tok::Number(dec)] => dec
            .parse::<f64>()
            .ok()
            .and_then(|v| Angle::from_radians(if neg { -v } else { v })),
        _ => None,
    };
    match angle {
        Some(a) => Some(a),
        None => {
            p.diags.push(ParseDiagnostic {
                span: start_span,
                message: "angle outside supported domain (pi, ±pi/2, ±3*pi/2)".into(),
                severity: Severity::Error,
            });
            None
        }
    }
}

// -------------------------------------------------------------- emitter --

/// Render a circuit as parseable source. `parse(emit(c))` is structurally
/// identical to `c`; metadata travels in comments, measurements (if any
/// were recorded) as real statements.
pub fn emit(circuit: &CircuitIR) -> Result<String, Vec<crate::circuit::Violation>> {
    let violations = validate(circuit);
    if !violations.is_empty() {
        return Err(violations);
    }
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    if !circuit.name.is_empty() {
        out.push_str(&format!("// name: {}\n", circuit.name));
    }
    for (k, v) in &circuit.metadata {
        if k != "measurements" && k != "creg" {
            out.push_str(&format!("// {k}: {v}\n"));
        }
    }
    out.push_str(&format!("qreg q[{}];\n", circuit.n_qubits));
    let measures: Vec<(u32, u32)> = circuit
        .metadata
        .get("measurements")
        .map(|s| {
            s.split(',')
                .filter_map(|pair| {
                    let (q, c) = pair.split_once(':')?;
                    Some((q.parse().ok()?, c.parse().ok()?))
                })
                .collect()
        })
        .unwrap_or_default();
    if let Some(csize) = circuit.metadata.get("creg") {
        out.push_str(&format!("creg c[{csize}];\n"));
    } else if !measures.is_empty() {
        out.push_str(&format!("creg c[{}];\n", circuit.n_qubits));
    }
    for op in &circuit.ops {
        match op.kind {
            GateKind::RX(a) | GateKind::RY(a) | GateKind::RZ(a) => {
                out.push_str(&format!("{}({})", op.kind.mnemonic(), a.token()));
            }
            _ => out.push_str(op.kind.mnemonic()),
        }
        let args: Vec<String> = op.qubits.iter().map(|q| format!("q[{q}]")).collect();
        out.push_str(&format!(" {};\n", args.join(",")));
    }
    for (q, c) in measures {
        out.push_str(&format!("measure q[{q}] -> c[{c}];\n"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::bench::{gen_benchmark, BenchParams, Family};

    fn parse_ok(text: &str) -> CircuitIR {
        match parse(text) {
            Ok(p) => p.circuit,
            Err(diags) => panic!("unexpected diagnostics: {diags:?}"),
        }
    }

    fn parse_err(text: &str) -> Vec<ParseDiagnostic> {
        match parse(text) {
            Ok(_) => panic!("expected failure"),
            Err(d) => d,
        }
    }

    #[test]
    fn minimal_bell_prep() {
        let c = parse_ok("OPENQASM 2.0;\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n");
        assert_eq!(c.n_qubits, 2);
        assert_eq!(c.ops.len(), 2);
        assert_eq!(c.ops[0].kind, GateKind::H);
        assert_eq!(c.ops[1].kind, GateKind::CNOT);
        assert_eq!(c.ops[1].qubits, [0, 1]);
    }

    #[test]
    fn angle_tokens_and_decimals() {
        let c = parse_ok(
            "OPENQASM 2.0; qreg q[1];\n\
             rx(pi/2) q[0]; ry(-pi/2) q[0]; rz(3*pi/2) q[0];\n\
             rx(-3*pi/2) q[0]; ry(pi) q[0]; rz(1.5707963267948966) q[0];",
        );
        use crate::circuit::Angle::*;
        let kinds: Vec<_> = c.ops.iter().map(|o| o.kind).collect();
        assert_eq!(
            kinds,
            [
                GateKind::RX(PiOver2),
                GateKind::RY(NegPiOver2),
                GateKind::RZ(ThreePiOver2),
                GateKind::RX(NegThreePiOver2),
                GateKind::RY(Pi),
                GateKind::RZ(PiOver2),
            ]
        );
    }

    #[test]
    fn out_of_domain_angle_is_flagged_with_span() {
        let d = parse_err("OPENQASM 2.0; qreg q[1]; rx(pi/3) q[0];");
        assert!(d.iter().any(|d| d.message.contains("angle outside")));
        let diag = d.iter().find(|d| d.message.contains("angle")).unwrap();
        assert_eq!(diag.span.line, 1);
        assert!(diag.span.col > 25, "span should point into the angle");
    }

    #[test]
    fn measures_become_metadata_not_ops() {
        let c = parse_ok(
            "OPENQASM 2.0; qreg q[2]; creg c[2]; h q[0]; measure q[0] -> c[0]; measure q[1] -> c[1];",
        );
        assert_eq!(c.ops.len(), 1);
        assert_eq!(c.metadata["measurements"], "0:0,1:1");
    }

    #[test]
    fn barrier_warns_but_parses() {
        let p = parse("OPENQASM 2.0; qreg q[2]; barrier q[0],q[1]; h q[0];").unwrap();
        assert_eq!(p.circuit.ops.len(), 1);
        assert_eq!(p.warnings.len(), 1);
        assert!(p.warnings[0].message.contains("barrier"));
    }

    #[test]
    fn error_catalogue() {
        for (src, needle) in [
            ("", "OPENQASM"),
            ("OPENQASM 3.0; qreg q[1];", "version"),
            ("OPENQASM 2.0;", "no qreg"),
            ("OPENQASM 2.0; qreg q[1]; qreg r[2];", "redefinition"),
            ("OPENQASM 2.0; qreg q[1]; frobnicate q[0];", "unknown gate"),
            ("OPENQASM 2.0; qreg q[1]; h q[4];", "out of range"),
            ("OPENQASM 2.0; qreg q[99999999999];", "not a valid"),
            ("OPENQASM 2.0; qreg q[2]; cx q[0],q[0];", "duplicate operand"),
            ("OPENQASM 2.0; qreg q[2]; cx q[0];", "expects 2"),
            ("OPENQASM 2.0; qreg q[2]; measure q[0] -> c[0];", "no classical register"),
            ("OPENQASM 2.0; qreg q[0];", "must be positive"),
            ("OPENQASM 2.0; qreg q[2]; h q[0]", "expected `;`"),
            ("OPENQASM 2.0; include \"qelib1.inc; qreg q[1];", "unterminated"),
        ] {
            let d = parse_err(src);
            assert!(
                d.iter().any(|d| d.message.contains(needle)),
                "source {src:?}: wanted {needle:?} in {d:?}"
            );
        }
    }

    #[test]
    fn diagnostics_cover_multiple_statements() {
        let d = parse_err("OPENQASM 2.0; qreg q[1]; bad1 q[0]; h q[3]; bad2 q[0];");
        assert!(d.len() >= 3, "recovery should keep reporting: {d:?}");
    }

    #[test]
    fn round_trip_all_families() {
        for family in Family::ALL {
            for n in [2u32, 4, 8] {
                let n = if family == Family::Hs { n * 2 } else { n };
                let c = gen_benchmark(family, n, &BenchParams::default()).unwrap();
                let text = emit(&c).unwrap();
                let back = parse_ok(&text);
                assert!(
                    back.structurally_equal(&c),
                    "{} round-trip mismatch:\n{text}",
                    c.name
                );
            }
        }
    }

    #[test]
    fn emit_counts_gate_statements() {
        let c = gen_benchmark(Family::Bv, 4, &BenchParams::default()).unwrap();
        let text = emit(&c).unwrap();
        let gate_lines = text
            .lines()
            .filter(|l| {
                !l.starts_with("//")
                    && !l.starts_with("OPENQASM")
                    && !l.starts_with("include")
                    && !l.starts_with("qreg")
                    && !l.is_empty()
            })
            .count();
        assert_eq!(gate_lines, 11);
    }

    #[test]
    fn measure_round_trip() {
        let src = "OPENQASM 2.0; qreg q[2]; creg c[2]; h q[0]; measure q[0] -> c[1];";
        let c = parse_ok(src);
        let text = emit(&c).unwrap();
        assert!(text.contains("measure q[0] -> c[1];"));
        let back = parse_ok(&text);
        assert_eq!(back.metadata["measurements"], "0:1");
    }

    #[test]
    fn parse_never_panics_on_garbage() {
        // a cheap in-module smoke; the big fuzz corpus lives in acceptance
        let samples: &[&str] = &[
            "\u{0}\u{1}\u{2}",
            "OPENQASM 2.0; qreg q[",
            "OPENQASM 2.0; qreg q[2]; rx( q[0];",
            "((((((((",
            "OPENQASM 2.0; qreg q[2]; h",
            "OPENQASM 2.0; qreg q[2]; measure q[0] ->",
            "🦀🦀🦀",
            "OPENQASM 2.0;;;;;;",
        ];
        for s in samples {
            let _ = parse(s);
        }
    }
}
