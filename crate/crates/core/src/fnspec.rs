//! Text form of a map, as accepted on the command line.
//!
//! ```text
//! harmonic_koebe
//! f2(alpha=0.2+0.1i, n=2)
//! f_a_lambda(a=1+sqrt(2), lambda=i)
//! shear phi=[0,1]/[1,-2,1] omega=[0,1] theta=pi
//! ```
//!
//! Parameter values are complex expressions over numbers, `i`, `pi`,
//! `sqrt(..)`, `+ - * / ^` and parentheses. A rational is `[p0,p1,..]` or
//! `[p0,..]/[q0,..]` with coefficients in increasing powers of `z`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::HarmonicMap;
use crate::shear::{catalog, shear, CatalogId, Rational, ShearSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Catalog(CatalogId),
    Shear { phi: Rational, omega: Rational, theta: f64 },
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).spec()
    }

    pub fn build(&self, order: usize) -> Result<HarmonicMap> {
        match self {
            FunctionSpec::Catalog(id) => catalog(*id, order),
            FunctionSpec::Shear { phi, omega, theta } => shear(&ShearSpec::from_rational(phi, omega, *theta, order)?, order),
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Catalog(id) => write!(f, "{id}"),
            FunctionSpec::Shear { phi, omega, theta } => {
                let list = |v: &[Complex64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                write!(
                    f,
                    "shear phi=[{}]/[{}] omega=[{}]/[{}] theta={theta}",
                    list(&phi.num),
                    list(&phi.den),
                    list(&omega.num),
                    list(&omega.den)
                )
            }
        }
    }
}

/// Evaluates a standalone complex expression such as `1+sqrt(2)` or `-0.3i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let mut p = Parser::new(text);
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn error(&self, reason: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, reason: reason.into() }
    }

    fn error_at(pos: usize, reason: impl Into<String>) -> Error {
        Error::Parse { pos, reason: reason.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        if len == 0 || rest.as_bytes()[0].is_ascii_digit() {
            return None;
        }
        self.pos += len;
        Some(&self.src[start..start + len])
    }

    fn spec(&mut self) -> Result<FunctionSpec> {
        self.skip_ws();
        let start = self.pos;
        let name = self.ident().ok_or_else(|| self.error("expected a function name"))?;
        let spec = if name == "shear" { self.shear_body()? } else { FunctionSpec::Catalog(self.catalog_body(name, start)?) };
        self.skip_ws();
        if !self.at_end() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(spec)
    }

    fn params(&mut self) -> Result<Vec<(&'a str, usize, Complex64)>> {
        let mut out = Vec::new();
        if !self.eat('(') {
            return Ok(out);
        }
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let at = self.pos;
            let key = self.ident().ok_or_else(|| self.error("expected a parameter name"))?;
            self.expect('=')?;
            let value = self.expr()?;
            if out.iter().any(|(k, _, _)| *k == key) {
                return Err(Self::error_at(at, format!("parameter `{key}` given twice")));
            }
            out.push((key, at, value));
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn catalog_body(&mut self, name: &str, start: usize) -> Result<CatalogId> {
        let params = self.params()?;
        let allowed: &[&str] = match name {
            "harmonic_koebe" | "half_plane_f3" | "f3" | "f4" => &[],
            "f1" => &["n"],
            "f2" => &["alpha", "n"],
            "f_a_lambda" | "F_a_lambda" => &["a", "lambda"],
            "koebe_slice" => &["theta"],
            other => return Err(Self::error_at(start, format!("unknown function `{other}`; see the `catalog` subcommand"))),
        };
        for (k, at, _) in &params {
            if !allowed.contains(k) {
                return Err(Self::error_at(*at, format!("`{name}` has no parameter `{k}`")));
            }
        }
        let end = self.pos;
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _, _)| *k == key)
                .map(|&(_, at, v)| (at, v))
                .ok_or_else(|| Self::error_at(end, format!("`{name}` needs parameter `{key}`")))
        };
        let real = |key: &str| -> Result<f64> {
            let (at, v) = get(key)?;
            if v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
                return Err(Self::error_at(at, format!("`{key}` must be real")));
            }
            Ok(v.re)
        };
        let integer = |key: &str| -> Result<u32> {
            let (at, _) = get(key)?;
            let x = real(key)?;
            if x.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&x) {
                return Err(Self::error_at(at, format!("`{key}` must be a non-negative integer")));
            }
            Ok(x as u32)
        };
        let id = match name {
            "harmonic_koebe" => CatalogId::HarmonicKoebe,
            "half_plane_f3" | "f3" => CatalogId::HalfPlaneF3,
            "f4" => CatalogId::F4,
            "f1" => CatalogId::F1 { n: integer("n")? },
            "f2" => CatalogId::F2 { alpha: get("alpha")?.1, n: integer("n")? },
            "f_a_lambda" => CatalogId::FALambda { a: real("a")?, lambda: get("lambda")?.1 },
            "F_a_lambda" => CatalogId::BigFALambda { a: real("a")?, lambda: get("lambda")?.1 },
            _ => CatalogId::KoebeSlice { theta: real("theta")? },
        };
        id.validate().map_err(|e| Self::error_at(start, e.to_string()))?;
        Ok(id)
    }

    fn shear_body(&mut self) -> Result<FunctionSpec> {
        let (mut phi, mut omega, mut theta) = (None, None, None);
        loop {
            self.skip_ws();
            if self.at_end() {
                break;
            }
            let at = self.pos;
            let key = self.ident().ok_or_else(|| self.error("expected phi=, omega= or theta="))?;
            self.expect('=')?;
            match key {
                "phi" if phi.is_none() => phi = Some(self.rational()?),
                "omega" if omega.is_none() => omega = Some(self.rational()?),
                "theta" if theta.is_none() => {
                    let v = self.expr()?;
                    if v.im.abs() > 1e-12 {
                        return Err(Self::error_at(at, "theta must be real"));
                    }
                    theta = Some(v.re);
                }
                "phi" | "omega" | "theta" => return Err(Self::error_at(at, format!("`{key}` given twice"))),
                other => return Err(Self::error_at(at, format!("unknown shear field `{other}`"))),
            }
        }
        let end = self.pos;
        let missing = |k: &str| Self::error_at(end, format!("shear needs `{k}=`"));
        Ok(FunctionSpec::Shear {
            phi: phi.ok_or_else(|| missing("phi"))?,
            omega: omega.ok_or_else(|| missing("omega"))?,
            theta: theta.unwrap_or(PI),
        })
    }

    fn list(&mut self) -> Result<Vec<Complex64>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Err(self.error("coefficient list is empty"));
        }
        loop {
            out.push(self.expr()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.list()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.pos += 1;
            Ok(Rational::new(num, self.list()?))
        } else {
            Ok(Rational::polynomial(num))
        }
    }

    fn expr(&mut self) -> Result<Complex64> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v += self.term()?;
            } else if self.eat('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<Complex64> {
        let mut v = self.unary()?;
        loop {
            self.skip_ws();
            let at = self.pos;
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.peek() == Some('/') && !self.rest().starts_with("/[") {
                self.pos += 1;
                let d = self.unary()?;
                if d.norm() == 0.0 {
                    return Err(Self::error_at(at, "division by zero"));
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Complex64> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.unary()?;
            return Ok(if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= i32::MAX as f64 {
                base.powi(e.re as i32)
            } else {
                base.powc(e)
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = Complex64::new(self.number()?, 0.0);
                // `2i` and `2pi` read as products.
                let save = self.pos;
                if let Some(id) = self.ident() {
                    match id {
                        "i" => return Ok(v * Complex64::i()),
                        "pi" => return Ok(v * PI),
                        _ => self.pos = save,
                    }
                }
                Ok(v)
            }
            Some(_) => match self.ident() {
                Some("i") => Ok(Complex64::i()),
                Some("pi") => Ok(Complex64::new(PI, 0.0)),
                Some("sqrt") => {
                    self.expect('(')?;
                    let v = self.expr()?;
                    self.expect(')')?;
                    Ok(v.sqrt())
                }
                Some(other) => Err(Self::error_at(start, format!("unknown identifier `{other}`"))),
                None => Err(self.error(format!("unexpected character `{}`", self.peek().unwrap_or(' ')))),
            },
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        self.pos = end;
        self.src[start..end].parse().map_err(|_| Self::error_at(start, format!("bad number `{}`", &self.src[start..end])))
    }
}
