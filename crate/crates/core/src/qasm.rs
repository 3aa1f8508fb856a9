//! OpenQASM 2.0 subset reader and the QASM-X writer.
//!
//! QASM-X is plain OpenQASM 2.0 plus three instruction forms produced by the
//! compiler: `r(theta,phi) q[i];`, `rxx(theta) q[i],q[j];` and the global
//! gate line `gms(angle) [i-j, k-l, ...];` whose indices refer to the
//! concatenation of all declared quantum registers.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, GmsLayer};
use crate::phase::Phase;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported construct `{construct}` at {line}:{col}")]
    Unsupported { construct: String, line: usize, col: usize },
    #[error("qubit {register}[{index}] out of range at {line}:{col}")]
    QubitOutOfRange { register: String, index: usize, line: usize, col: usize },
    #[error("undefined register `{name}` at {line}:{col}")]
    UndefinedRegister { name: String, line: usize, col: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |i: &mut usize, col: &mut usize, k: usize| {
            *i += k;
            *col += k;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            col += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
            advance(&mut i, &mut col, 2);
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut col, 1);
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                advance(&mut i, &mut col, 1);
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    col += j - i;
                    i = j;
                }
            }
            out.push(Token { tok: Tok::Number(chars[start..i].iter().collect()), line: tl, col: tc });
        } else if c == '"' {
            let start = i + 1;
            advance(&mut i, &mut col, 1);
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                advance(&mut i, &mut col, 1);
            }
            if chars.get(i) != Some(&'"') {
                return Err(QasmError::Syntax { line: tl, col: tc, msg: "unterminated string".into() });
            }
            out.push(Token { tok: Tok::Str(chars[start..i].iter().collect()), line: tl, col: tc });
            advance(&mut i, &mut col, 1);
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
            advance(&mut i, &mut col, 2);
        } else if "()[]{},;+-*/^=<>".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: tl, col: tc });
            advance(&mut i, &mut col, 1);
        } else {
            return Err(QasmError::Syntax { line: tl, col: tc, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Angle expression value: `rational + rational·π`, or a float once the
/// expression leaves that form.
#[derive(Clone, Debug)]
enum Value {
    Lin { a: BigRational, b: BigRational },
    Float(f64),
}

impl Value {
    fn to_f64(&self) -> f64 {
        match self {
            Value::Lin { a, b } => ratio_f64(a) + ratio_f64(b) * PI,
            Value::Float(x) => *x,
        }
    }

    fn pure_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Lin { a, b } if b.is_zero() => Some(a),
            _ => None,
        }
    }

    fn into_phase(self) -> Phase {
        match self {
            Value::Lin { a, b } if a.is_zero() => Phase::from_ratio(b),
            v => Phase::radians(v.to_f64()),
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Lin { a, b } => Value::Lin { a: -a, b: -b },
            Value::Float(x) => Value::Float(-x),
        }
    }

    fn add(self, o: Value) -> Value {
        match (self, o) {
            (Value::Lin { a, b }, Value::Lin { a: c, b: d }) => Value::Lin { a: a + c, b: b + d },
            (x, y) => Value::Float(x.to_f64() + y.to_f64()),
        }
    }

    fn mul(self, o: Value) -> Value {
        if let (Some(k), Value::Lin { a, b }) = (self.pure_rational(), &o) {
            return Value::Lin { a: k * a, b: k * b };
        }
        if let (Value::Lin { a, b }, Some(k)) = (&self, o.pure_rational()) {
            return Value::Lin { a: a * k, b: b * k };
        }
        Value::Float(self.to_f64() * o.to_f64())
    }

    fn div(self, o: Value) -> Value {
        if let (Value::Lin { a, b }, Some(k)) = (&self, o.pure_rational()) {
            if !k.is_zero() {
                return Value::Lin { a: a / k, b: b / k };
            }
        }
        Value::Float(self.to_f64() / o.to_f64())
    }
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a decimal literal such as `0.25` or `1.5e-3`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(p) => (&mant[..p], &mant[p + 1..]),
        None => (mant, ""),
    };
    if frac_part.contains('.') {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let n: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

struct Register {
    name: String,
    offset: usize,
    size: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qregs: Vec<Register>,
    qubits: usize,
    gates: Vec<Gate>,
}

/// A gate operand: one qubit or a whole register.
enum Operand {
    Qubit(usize),
    Register(usize, usize),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, QasmError> {
        Err(QasmError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_sym(&mut self, c: char) -> Result<Token, QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            self.err(&t, format!("expected `{c}`, found {}", describe(&t.tok)))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected identifier, found {}", describe(other))),
        }
    }

    fn expect_uint(&mut self) -> Result<usize, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) => s.parse::<usize>().or_else(|_| self.err(&t, "expected integer")),
            other => self.err(&t, format!("expected integer, found {}", describe(other))),
        }
    }

    fn parse_program(&mut self) -> Result<(), QasmError> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match &t.tok {
                Tok::Number(v) if v.starts_with('2') => {}
                _ => return self.err(&t, "only OPENQASM 2.0 is supported"),
            }
            self.expect_sym(';')?;
        }
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(word) => {
                    let word = word.clone();
                    self.statement(&word, &t)?
                }
                other => return self.err(&t, format!("expected statement, found {}", describe(other))),
            }
        }
    }

    fn statement(&mut self, word: &str, t: &Token) -> Result<(), QasmError> {
        match word {
            "include" => {
                self.next();
                let f = self.next();
                match &f.tok {
                    Tok::Str(s) if s == "qelib1.inc" => {}
                    Tok::Str(s) => {
                        return Err(QasmError::Unsupported {
                            construct: format!("include \"{s}\""),
                            line: f.line,
                            col: f.col,
                        })
                    }
                    _ => return self.err(&f, "expected file name"),
                }
                self.expect_sym(';')?;
            }
            "qreg" | "creg" => {
                self.next();
                let (name, _) = self.expect_ident()?;
                self.expect_sym('[')?;
                let size = self.expect_uint()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if word == "qreg" {
                    self.qregs.push(Register { name, offset: self.qubits, size });
                    self.qubits += size;
                }
            }
            "barrier" => {
                self.next();
                while self.peek().tok != Tok::Sym(';') {
                    if self.peek().tok == Tok::Eof {
                        return self.err(t, "unterminated barrier");
                    }
                    self.next();
                }
                self.next();
            }
            "measure" | "reset" | "if" | "opaque" | "gate" => {
                return Err(QasmError::Unsupported { construct: word.to_string(), line: t.line, col: t.col });
            }
            "gms" => self.gms_line()?,
            _ => self.gate_call()?,
        }
        Ok(())
    }

    fn gms_line(&mut self) -> Result<(), QasmError> {
        self.next();
        self.expect_sym('(')?;
        let angle = self.expr()?.into_phase();
        self.expect_sym(')')?;
        let open = self.expect_sym('[')?;
        let mut pairs = Vec::new();
        if !self.eat_sym(']') {
            loop {
                let a = self.expect_uint()?;
                self.expect_sym('-')?;
                let b = self.expect_uint()?;
                for q in [a, b] {
                    if q >= self.qubits {
                        return Err(QasmError::QubitOutOfRange {
                            register: "gms".into(),
                            index: q,
                            line: open.line,
                            col: open.col,
                        });
                    }
                }
                pairs.push((a, b));
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        self.expect_sym(';')?;
        self.gates.push(Gate::Gms(GmsLayer::new(angle, pairs)?));
        Ok(())
    }

    fn gate_call(&mut self) -> Result<(), QasmError> {
        let (name, nt) = self.expect_ident()?;
        let mut params = Vec::new();
        if self.eat_sym('(') && !self.eat_sym(')') {
            loop {
                params.push(self.expr()?.into_phase());
                if self.eat_sym(')') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        let mut operands = Vec::new();
        loop {
            operands.push(self.operand()?);
            if self.eat_sym(';') {
                break;
            }
            self.expect_sym(',')?;
        }
        let (n_params, n_qubits) = match gate_signature(&name) {
            Some(sig) => sig,
            None => {
                return Err(QasmError::Unsupported {
                    construct: format!("gate `{name}`"),
                    line: nt.line,
                    col: nt.col,
                })
            }
        };
        if params.len() != n_params {
            return self.err(&nt, format!("`{name}` takes {n_params} parameter(s), got {}", params.len()));
        }
        if operands.len() != n_qubits {
            return self.err(&nt, format!("`{name}` takes {n_qubits} qubit(s), got {}", operands.len()));
        }
        // register broadcasting
        let width = operands
            .iter()
            .filter_map(|o| match o {
                Operand::Register(_, s) => Some(*s),
                Operand::Qubit(_) => None,
            })
            .max();
        let reps = width.unwrap_or(1);
        for o in &operands {
            if let Operand::Register(_, s) = o {
                if *s != reps {
                    return self.err(&nt, "register operands of different sizes");
                }
            }
        }
        for k in 0..reps {
            let qs: Vec<usize> = operands
                .iter()
                .map(|o| match o {
                    Operand::Qubit(q) => *q,
                    Operand::Register(off, _) => off + k,
                })
                .collect();
            for i in 0..qs.len() {
                for j in i + 1..qs.len() {
                    if qs[i] == qs[j] {
                        return self.err(&nt, format!("`{name}` uses qubit {} twice", qs[i]));
                    }
                }
            }
            lower_gate(&name, &params, &qs, &mut self.gates);
        }
        Ok(())
    }

    fn operand(&mut self) -> Result<Operand, QasmError> {
        let (name, t) = self.expect_ident()?;
        let (offset, size) = match self.qregs.iter().find(|r| r.name == name) {
            Some(r) => (r.offset, r.size),
            None => return Err(QasmError::UndefinedRegister { name, line: t.line, col: t.col }),
        };
        if self.eat_sym('[') {
            let idx_tok = self.peek().clone();
            let idx = self.expect_uint()?;
            self.expect_sym(']')?;
            if idx >= size {
                return Err(QasmError::QubitOutOfRange {
                    register: name,
                    index: idx,
                    line: idx_tok.line,
                    col: idx_tok.col,
                });
            }
            Ok(Operand::Qubit(offset + idx))
        } else {
            Ok(Operand::Register(offset, size))
        }
    }

    fn expr(&mut self) -> Result<Value, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v = v.add(self.term()?);
            } else if self.eat_sym('-') {
                v = v.add(self.term()?.neg());
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Value, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym('*') {
                v = v.mul(self.unary()?);
            } else if self.eat_sym('/') {
                v = v.div(self.unary()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, QasmError> {
        if self.eat_sym('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Value, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) => match parse_decimal(s) {
                Some(r) => Ok(Value::Lin { a: r, b: BigRational::zero() }),
                None => self.err(&t, format!("malformed number `{s}`")),
            },
            Tok::Ident(s) if s == "pi" => {
                Ok(Value::Lin { a: BigRational::zero(), b: BigRational::from_integer(1.into()) })
            }
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(s) => Err(QasmError::Unsupported {
                construct: format!("expression `{s}`"),
                line: t.line,
                col: t.col,
            }),
            other => self.err(&t, format!("expected expression, found {}", describe(other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("number `{s}`"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Arrow => "`->`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// (parameter count, qubit count) of every accepted gate name.
fn gate_signature(name: &str) -> Option<(usize, usize)> {
    Some(match name {
        "x" | "y" | "z" | "h" | "s" | "sdg" | "t" | "tdg" | "id" => (0, 1),
        "rx" | "ry" | "rz" | "u1" => (1, 1),
        "u2" | "r" => (2, 1),
        "u3" | "U" => (3, 1),
        "cx" | "CX" | "cz" | "swap" => (0, 2),
        "rxx" => (1, 2),
        "ccx" => (0, 3),
        _ => return None,
    })
}

fn lower_gate(name: &str, p: &[Phase], q: &[usize], out: &mut Vec<Gate>) {
    let half_pi = Phase::frac_pi(1, 2);
    match name {
        "id" => {}
        "x" => out.push(Gate::X(q[0])),
        // Y = iXZ
        "y" => out.extend([Gate::Z(q[0]), Gate::X(q[0])]),
        "z" => out.push(Gate::Z(q[0])),
        "h" => out.push(Gate::H(q[0])),
        "s" => out.push(Gate::S(q[0])),
        "sdg" => out.push(Gate::Sdg(q[0])),
        "t" => out.push(Gate::T(q[0])),
        "tdg" => out.push(Gate::Tdg(q[0])),
        "rx" => out.push(Gate::Rx(q[0], p[0].clone())),
        "ry" => out.push(Gate::R { qubit: q[0], theta: p[0].clone(), phi: half_pi }),
        "rz" | "u1" => out.push(Gate::Rz(q[0], p[0].clone())),
        "r" => out.push(Gate::R { qubit: q[0], theta: p[0].clone(), phi: p[1].clone() }),
        "u2" => lower_u3(q[0], &half_pi, &p[0], &p[1], out),
        "u3" | "U" => lower_u3(q[0], &p[0], &p[1], &p[2], out),
        "cx" | "CX" => out.push(Gate::cnot(q[0], q[1])),
        "cz" => out.push(Gate::cz(q[0], q[1])),
        "swap" => out.push(Gate::Swap(q[0], q[1])),
        "rxx" => out.push(Gate::Xx(q[0], q[1], p[0].clone())),
        "ccx" => {
            let (a, b, c) = (q[0], q[1], q[2]);
            out.extend([
                Gate::H(c),
                Gate::cnot(b, c),
                Gate::Tdg(c),
                Gate::cnot(a, c),
                Gate::T(c),
                Gate::cnot(b, c),
                Gate::Tdg(c),
                Gate::cnot(a, c),
                Gate::T(b),
                Gate::T(c),
                Gate::H(c),
                Gate::cnot(a, b),
                Gate::T(a),
                Gate::Tdg(b),
                Gate::cnot(a, b),
            ]);
        }
        _ => unreachable!("gate_signature admits only lowered names"),
    }
}

/// `U3(θ,φ,λ) = RZ(φ)·RY(θ)·RZ(λ)` with `RY(θ) = RZ(π/2)·RX(θ)·RZ(-π/2)`,
/// emitted in time order.
fn lower_u3(q: usize, theta: &Phase, phi: &Phase, lambda: &Phase, out: &mut Vec<Gate>) {
    let half_pi = Phase::frac_pi(1, 2);
    let first = lambda - &half_pi;
    let last = phi + &half_pi;
    if !first.is_zero() {
        out.push(Gate::Rz(q, first));
    }
    if !theta.is_zero() {
        out.push(Gate::Rx(q, theta.clone()));
    }
    if !last.is_zero() {
        out.push(Gate::Rz(q, last));
    }
}

/// Parse OpenQASM 2.0 (and the QASM-X extensions) into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, qregs: Vec::new(), qubits: 0, gates: Vec::new() };
    p.parse_program()?;
    let mut c = Circuit::new(p.qubits);
    c.extend(p.gates)?;
    Ok(c)
}

/// Alias of [`parse_qasm`]; the reader accepts QASM-X directly.
pub fn parse_qasmx(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm(text)
}

/// Write a circuit as QASM-X over a single register `q`.
pub fn emit_qasmx(c: &Circuit) -> String {
    let mut s = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    s.push_str(&format!("qreg q[{}];\n", c.qubit_count()));
    for g in c.gates() {
        s.push_str(&g.to_string());
        s.push_str(";\n");
    }
    s
}
