//! Sparse Laurent polynomials over ℤ with exact division.
//!
//! Text form: terms in increasing lexicographic order of exponent vectors,
//! each written `c * x_id^e * ...` (exponent omitted when 1, factors in vertex
//! order), joined by ` + ` / ` - `. Ids outside `[A-Za-z0-9_]` are braced:
//! `x_{b'}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division leaves a remainder")]
    Inexact,
    #[error("division by zero")]
    ZeroDivision,
    #[error("polynomials live in different rings ({0} vs {1} variables)")]
    Arity(usize, usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

fn add_exps(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<i32>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// Builds from `(exponents, coefficient)` pairs, merging repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Vec<i32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.nvars, o.nvars, "Laurent polynomials in different rings");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        if self.terms.len() < o.terms.len() {
            return o.mul(self);
        }
        let mut out = Self::zero(self.nvars);
        for (eb, cb) in &o.terms {
            for (ea, ca) in &self.terms {
                out.add_term(add_exps(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[i32], c: &BigInt) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.terms.iter().map(|(e, k)| (add_exps(e, exps), k * c)).collect()
            },
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Per-coordinate minimum and maximum exponent over the support.
    fn exponent_box(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for e in it {
            for i in 0..self.nvars {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient `self / d`; fails unless `d` divides `self` in ℤ[x^±1].
    pub fn div_exact(&self, d: &Self) -> Result<Self, LaurentError> {
        if self.nvars != d.nvars {
            return Err(LaurentError::Arity(self.nvars, d.nvars));
        }
        if d.is_zero() {
            return Err(LaurentError::ZeroDivision);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if d.is_monomial() {
            let (de, dc) = d.terms.iter().next().unwrap();
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return Err(LaurentError::Inexact);
                }
                terms.insert(e.iter().zip(de).map(|(a, b)| a - b).collect(), q);
            }
            return Ok(LaurentPoly { nvars: self.nvars, terms });
        }
        // If self = q·d then Newton(self) = Newton(q) + Newton(d), which
        // confines the exponents of q to a box.
        let (plo, phi) = self.exponent_box().unwrap();
        let (dlo, dhi) = d.exponent_box().unwrap();
        let qlo: Vec<i32> = plo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let qhi: Vec<i32> = phi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        let (lead_e, lead_c) = d.terms.iter().next_back().unwrap();
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((re, rc)) = r.terms.iter().next_back() {
            let qe: Vec<i32> = re.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().enumerate().any(|(i, &x)| x < qlo[i] || x > qhi[i]) {
                return Err(LaurentError::Inexact);
            }
            let (qc, rem) = rc.div_rem(lead_c);
            if !rem.is_zero() {
                return Err(LaurentError::Inexact);
            }
            for (e, c) in &d.terms {
                r.add_term(add_exps(e, &qe), -(c * &qc));
            }
            q.add_term(qe, qc);
        }
        Ok(q)
    }

    /// `(deg_min, deg_max)` of variable `i`; `None` for the zero polynomial.
    pub fn degree_range(&self, i: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    /// `max ⟨λ, α⟩` over the support.
    pub fn support_max(&self, lambda: &[BigRational]) -> Option<BigRational> {
        self.terms
            .keys()
            .map(|e| e.iter().zip(lambda).fold(BigRational::zero(), |acc, (&k, l)| acc + l * BigInt::from(k)))
            .max()
    }

    pub fn coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Evaluates at a point with nonzero coordinates.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, LaurentError> {
        if point.len() != self.nvars {
            return Err(LaurentError::Arity(self.nvars, point.len()));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (x, &k) in point.iter().zip(e) {
                if k != 0 {
                    if x.is_zero() && k < 0 {
                        return Err(LaurentError::ZeroDivision);
                    }
                    t *= num_traits::pow::Pow::pow(x, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Canonical text with the given variable names.
    pub fn to_text(&self, ids: &[String]) -> String {
        assert_eq!(ids.len(), self.nvars);
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let _ = write!(out, "{}", c.abs());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                out.push_str(" * ");
                out.push_str(&var_name(&ids[i]));
                if x != 1 {
                    let _ = write!(out, "^{x}");
                }
            }
        }
        out
    }

    /// Parses the canonical text form (whitespace-insensitive; coefficients
    /// may be omitted, factors may repeat and appear in any order).
    pub fn parse(text: &str, ids: &[String]) -> Result<Self, LaurentError> {
        TextParser { src: text, pos: 0, ids }.poly()
    }
}

fn plain_id(id: &str) -> bool {
    !id.is_empty() && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

pub fn var_name(id: &str) -> String {
    if plain_id(id) {
        format!("x_{id}")
    } else {
        format!("x_{{{id}}}")
    }
}

struct TextParser<'a> {
    src: &'a str,
    pos: usize,
    ids: &'a [String],
}

impl TextParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, LaurentError> {
        Err(LaurentError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.src[self.pos..].chars().next()
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn poly(&mut self) -> Result<LaurentPoly, LaurentError> {
        let n = self.ids.len();
        let mut p = LaurentPoly::zero(n);
        let mut first = true;
        loop {
            let mut sign = 1;
            match self.peek() {
                None if !first => break,
                None => return self.err("empty polynomial"),
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(_) if first => {}
                Some(_) => return self.err("expected `+` or `-`"),
            }
            first = false;
            let (e, c) = self.term()?;
            p.add_term(e, c * sign);
        }
        Ok(p)
    }

    fn term(&mut self) -> Result<(Vec<i32>, BigInt), LaurentError> {
        let mut e = vec![0i32; self.ids.len()];
        let mut c = BigInt::one();
        let mut need_factor = true;
        if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            let ds = self.digits();
            if ds.len() > 4096 {
                return self.err("coefficient too long");
            }
            c = ds.parse().unwrap();
            need_factor = false;
        }
        loop {
            if need_factor {
                self.factor(&mut e)?;
            }
            if self.peek() == Some('*') {
                self.pos += 1;
                need_factor = true;
            } else {
                return Ok((e, c));
            }
        }
    }

    fn factor(&mut self, e: &mut [i32]) -> Result<(), LaurentError> {
        if !self.src[self.pos..].starts_with("x_") {
            self.ws();
            if !self.src[self.pos..].starts_with("x_") {
                return self.err("expected a variable `x_<id>`");
            }
        }
        self.pos += 2;
        let name = if self.src[self.pos..].starts_with('{') {
            let close = match self.src[self.pos..].find('}') {
                Some(k) => self.pos + k,
                None => return self.err("unterminated `{`"),
            };
            let name = &self.src[self.pos + 1..close];
            self.pos = close + 1;
            name
        } else {
            let start = self.pos;
            while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            &self.src[start..self.pos]
        };
        let i = match self.ids.iter().position(|s| s == name) {
            Some(i) => i,
            None => return self.err("unknown variable"),
        };
        let mut k: i64 = 1;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.ws();
            let neg = self.src[self.pos..].starts_with('-');
            if neg {
                self.pos += 1;
            }
            let ds = self.digits();
            k = match ds.parse::<i64>() {
                Ok(v) if v <= i32::MAX as i64 => v,
                _ => return self.err("bad exponent"),
            };
            if neg {
                k = -k;
            }
        }
        let total = e[i] as i64 + k;
        if total.abs() > i32::MAX as i64 {
            return self.err("exponent overflow");
        }
        e[i] = total as i32;
        Ok(())
    }
}
