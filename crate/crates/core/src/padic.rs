//! Finite-precision elements of Q_p.
//!
//! A nonzero value is stored as `p^v * u` where `u` is a unit given by its
//! first `prec` base-p digits, so it is known modulo `p^(v + prec)`. Two
//! zeros exist: the exact zero, and the *precision-exhausted* zero `O(p^k)`
//! produced when cancellation leaves no known digit. The second one only
//! carries a lower bound on its valuation and is never treated as exact.

use std::cmp::{min, Ordering};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digits;
use crate::error::{Error, Result};

/// The prime and the absolute working precision shared by a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicContext {
    p: u32,
    precision: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PadicContext {
    /// `p` must be an odd prime and `precision` at least one.
    pub fn new(p: u32, precision: u32) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::usage(format!("p = {p} must be an odd prime (p >= 3)")));
        }
        if precision == 0 {
            return Err(Error::usage("precision must be at least 1"));
        }
        Ok(PadicContext { p, precision })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        PadicContext::new(self.p, precision)
    }

    fn combine(&self, other: &PadicContext) -> Result<PadicContext> {
        if self.p != other.p {
            return Err(Error::usage(format!("context mismatch: p = {} and p = {}", self.p, other.p)));
        }
        Ok(PadicContext { p: self.p, precision: min(self.precision, other.precision) })
    }
}

/// Exponent `v` of a norm `|x|_p = p^(-v)`.
///
/// `AtLeast(k)` is what a precision-exhausted zero reports: the value is
/// divisible by `p^k` and nothing more is known. Ordering compares the
/// (lower-bound) exponent first, then `Finite < AtLeast < Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    AtLeast(i64),
    Infinite,
}

impl Valuation {
    /// True when the value is guaranteed to be divisible by `p^k`.
    pub fn is_at_least(&self, k: i64) -> bool {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    /// The exact exponent, if known.
    pub fn finite(&self) -> Option<i64> {
        match *self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Largest `k` with `is_at_least(k)`; `i64::MAX` for infinity.
    pub fn lower_bound(&self) -> i64 {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
            Valuation::Infinite => i64::MAX,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Valuation::Finite(_) => 0,
            Valuation::AtLeast(_) => 1,
            Valuation::Infinite => 2,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lower_bound().cmp(&other.lower_bound()).then(self.rank().cmp(&other.rank()))
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// JSON: an integer for `Finite`, `">=k"` for `AtLeast(k)`, `"inf"` for `Infinite`.
impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An element of Q_p known to finite absolute precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    ctx: PadicContext,
    // exact valuation for nonzero values; precision bound for O(p^k)
    val: i64,
    // unit digits, digits[0] != 0 when nonempty
    digits: Vec<u32>,
    exact_zero: bool,
}

fn p_valuation(mut n: i128, p: u32) -> (i64, i128) {
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

impl PadicNumber {
    pub fn zero(ctx: PadicContext) -> Self {
        PadicNumber { ctx, val: 0, digits: Vec::new(), exact_zero: true }
    }

    /// The precision-exhausted zero `O(p^k)`.
    pub fn approx_zero(ctx: PadicContext, k: i64) -> Self {
        PadicNumber { ctx, val: k, digits: Vec::new(), exact_zero: false }
    }

    pub fn one(ctx: PadicContext) -> Self {
        Self::from_integer(1, ctx)
    }

    pub fn from_integer(n: i128, ctx: PadicContext) -> Self {
        Self::from_rational(n, 1, ctx).expect("denominator is one")
    }

    /// Canonical expansion of `num/den` known modulo `p^N`.
    pub fn from_rational(num: i128, den: i128, ctx: PadicContext) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        if num == 0 {
            return Ok(Self::zero(ctx));
        }
        let (vn, un) = p_valuation(num, ctx.p);
        let (vd, ud) = p_valuation(den, ctx.p);
        let v = vn - vd;
        let abs = ctx.precision as i64;
        if v >= abs {
            return Ok(Self::approx_zero(ctx, abs));
        }
        let len = (abs - v) as usize;
        let n = digits::from_int(un, ctx.p, len);
        let d = digits::from_int(ud, ctx.p, len);
        let unit = digits::mul(&n, &digits::inverse(&d, ctx.p), ctx.p);
        Ok(PadicNumber { ctx, val: v, digits: unit, exact_zero: false })
    }

    /// Build `p^valuation * sum(digits[i] p^i)`; leading zero digits are
    /// absorbed into the valuation. The result is known to absolute
    /// precision `valuation + digits.len()`.
    pub fn from_digits(ctx: PadicContext, valuation: i64, digits: Vec<u32>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= ctx.p) {
            return Err(Error::parse(format!("digit {d} is not below p = {}", ctx.p)));
        }
        Ok(Self::normalized(ctx, valuation, digits))
    }

    fn normalized(ctx: PadicContext, base: i64, mut digits: Vec<u32>) -> Self {
        let z = digits::low_zeros(&digits);
        if z == digits.len() {
            return Self::approx_zero(ctx, base + digits.len() as i64);
        }
        digits.drain(..z);
        PadicNumber { ctx, val: base + z as i64, digits, exact_zero: false }
    }

    pub fn context(&self) -> PadicContext {
        self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    /// Zero only up to the known precision.
    pub fn is_precision_exhausted(&self) -> bool {
        !self.exact_zero && self.digits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.exact_zero {
            Valuation::Infinite
        } else if self.digits.is_empty() {
            Valuation::AtLeast(self.val)
        } else {
            Valuation::Finite(self.val)
        }
    }

    /// The exponent `v` with `|x|_p = p^(-v)`.
    pub fn norm(&self) -> Valuation {
        self.valuation()
    }

    /// Unit digits `d_0..d_{prec-1}`; empty for either zero.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Number of significant digits known.
    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    /// `k` such that the value is known modulo `p^k`; `None` for exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        if self.exact_zero {
            None
        } else {
            Some(self.val + self.digits.len() as i64)
        }
    }

    fn abs_or_max(&self) -> i64 {
        self.absolute_precision().unwrap_or(i64::MAX)
    }

    pub fn is_unit(&self) -> bool {
        !self.digits.is_empty() && self.val == 0
    }

    /// Digits of `self` placed at positions relative to `p^base`, `len` of them.
    fn aligned(&self, base: i64, len: usize) -> Vec<u32> {
        let mut out = vec![0u32; len];
        let offset = self.val - base;
        debug_assert!(self.digits.is_empty() || offset >= 0);
        for (i, &d) in self.digits.iter().enumerate() {
            let pos = offset + i as i64;
            if pos >= len as i64 {
                break;
            }
            out[pos as usize] = d;
        }
        out
    }

    /// The unit part padded with zero digits to `len` digits.
    pub(crate) fn unit_digits_padded(&self, len: usize) -> Vec<u32> {
        let mut out = self.digits.clone();
        out.resize(len, 0);
        out
    }

    pub fn neg(&self) -> Self {
        if self.digits.is_empty() {
            return self.clone();
        }
        PadicNumber { digits: digits::neg(&self.digits, self.ctx.p), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let ctx = self.ctx.combine(&other.ctx)?;
        if self.exact_zero {
            return Ok(PadicNumber { ctx, ..other.clone() });
        }
        if other.exact_zero {
            return Ok(PadicNumber { ctx, ..self.clone() });
        }
        let abs = min(self.abs_or_max(), other.abs_or_max());
        let base = min(self.val, other.val);
        if base >= abs {
            return Ok(Self::approx_zero(ctx, abs));
        }
        let len = (abs - base) as usize;
        let sum = digits::add(&self.aligned(base, len), &other.aligned(base, len), ctx.p);
        Ok(Self::normalized(ctx, base, sum))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let ctx = self.ctx.combine(&other.ctx)?;
        if self.exact_zero || other.exact_zero {
            return Ok(Self::zero(ctx));
        }
        // O(p^a) * p^b u = O(p^(a+b)), and the same for two O-terms
        if self.digits.is_empty() || other.digits.is_empty() {
            return Ok(Self::approx_zero(ctx, self.val + other.val));
        }
        let prec = min(self.digits.len(), other.digits.len());
        let unit = digits::mul(&self.digits[..prec], &other.digits[..prec], ctx.p);
        Ok(PadicNumber { ctx, val: self.val + other.val, digits: unit, exact_zero: false })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let ctx = self.ctx.combine(&other.ctx)?;
        if other.exact_zero {
            return Err(Error::domain("division by exact zero"));
        }
        if other.digits.is_empty() {
            return Err(Error::domain(format!("division by precision-exhausted zero O({}^{})", ctx.p, other.val)));
        }
        if self.exact_zero {
            return Ok(Self::zero(ctx));
        }
        if self.digits.is_empty() {
            return Ok(Self::approx_zero(ctx, self.val - other.val));
        }
        let prec = min(self.digits.len(), other.digits.len());
        let inv = digits::inverse(&other.digits[..prec], ctx.p);
        let unit = digits::mul(&self.digits[..prec], &inv, ctx.p);
        Ok(PadicNumber { ctx, val: self.val - other.val, digits: unit, exact_zero: false })
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same context");
            }
            base = base.mul(&base).expect("same context");
            exp >>= 1;
        }
        acc
    }

    /// Forget everything beyond absolute precision `k`.
    pub fn truncate(&self, k: i64) -> Self {
        if self.exact_zero || self.abs_or_max() <= k {
            return self.clone();
        }
        if self.digits.is_empty() || self.val >= k {
            return Self::approx_zero(self.ctx, k);
        }
        let mut digits = self.digits.clone();
        digits.truncate((k - self.val) as usize);
        Self::normalized(self.ctx, self.val, digits)
    }

    /// `|x - y|_p <= p^(-k)`. Fails when `k` exceeds what either side knows.
    pub fn equals_mod(&self, other: &Self, k: i64) -> Result<bool> {
        let known = min(self.abs_or_max(), other.abs_or_max());
        if k > known {
            return Err(Error::usage(format!("cannot compare modulo p^{k}: operands are only known modulo p^{known}")));
        }
        Ok(self.sub(other)?.valuation().is_at_least(k))
    }

    /// The digits of `x mod p^k` at positions `0..k`, for `v(x) >= 0`.
    pub fn residue_digits(&self, k: usize) -> Result<Vec<u32>> {
        if !self.valuation().is_at_least(0) {
            return Err(Error::domain("residue of a non-integral value"));
        }
        if (k as i64) > self.abs_or_max() {
            return Err(Error::usage(format!("value is not known modulo p^{k}")));
        }
        if self.digits.is_empty() {
            return Ok(vec![0; k]);
        }
        Ok(self.aligned(0, k))
    }

    /// Canonical text: `p^v * [d0,...]`, `0`, or `0 + O(p^k)`.
    ///
    /// High zero digits are not printed. A value whose absolute precision
    /// differs from the context precision carries a ` + O(p^k)` suffix, so
    /// that [`PadicNumber::parse`] restores it exactly.
    pub fn format(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, ctx: PadicContext) -> Result<Self> {
        parse_canonical(text.trim(), ctx)
    }

    /// A `num/den` (or plain integer) literal, or the canonical text form.
    pub fn parse_literal(text: &str, ctx: PadicContext) -> Result<Self> {
        let t = text.trim();
        if t.contains('[') || t.contains("O(") {
            Self::parse(t, ctx)
        } else {
            let (num, den) = parse_rational(t)?;
            Self::from_rational(num, den, ctx)
        }
    }

    pub fn to_json(&self) -> PadicJson {
        if self.exact_zero {
            PadicJson { valuation: None, digits: Vec::new(), prec: 0 }
        } else {
            PadicJson { valuation: Some(self.val), digits: self.digits.clone(), prec: self.digits.len() }
        }
    }

    pub fn from_json(json: &PadicJson, ctx: PadicContext) -> Result<Self> {
        let Some(v) = json.valuation else {
            if !json.digits.is_empty() {
                return Err(Error::parse("exact zero cannot carry digits"));
            }
            return Ok(Self::zero(ctx));
        };
        if json.digits.len() > json.prec {
            return Err(Error::parse("more digits than the stated precision"));
        }
        if json.prec > 0 && json.digits.first().copied().unwrap_or(0) == 0 {
            return Err(Error::parse("leading digit must be nonzero"));
        }
        let mut digits = json.digits.clone();
        digits.resize(json.prec, 0);
        if digits.is_empty() {
            return Ok(Self::approx_zero(ctx, v));
        }
        Self::from_digits(ctx, v, digits)
    }
}

/// JSON form `{"valuation": v, "digits": [...], "prec": k}`.
///
/// Exact zero has `valuation: null`; a precision-exhausted zero `O(p^k)`
/// has `valuation: k` with no digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicJson {
    pub valuation: Option<i64>,
    pub digits: Vec<u32>,
    pub prec: usize,
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.p;
        if self.exact_zero {
            return f.write_str("0");
        }
        if self.digits.is_empty() {
            return write!(f, "0 + O({p}^{})", self.val);
        }
        let shown = self.digits.len() - self.digits.iter().rev().take_while(|&&d| d == 0).count();
        write!(f, "{p}^{} * [", self.val)?;
        for (i, d) in self.digits[..shown].iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")?;
        let abs = self.val + self.digits.len() as i64;
        if abs != self.ctx.precision as i64 {
            write!(f, " + O({p}^{abs})")?;
        }
        Ok(())
    }
}

/// Parse `num/den` or a bare integer.
pub fn parse_rational(text: &str) -> Result<(i128, i128)> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: i128 = num.parse().map_err(|_| Error::parse(format!("malformed rational literal {text:?}")))?;
    let den: i128 = den.parse().map_err(|_| Error::parse(format!("malformed rational literal {text:?}")))?;
    if den == 0 {
        return Err(Error::domain(format!("zero denominator in {text:?}")));
    }
    Ok((num, den))
}

fn parse_power(text: &str, ctx: PadicContext) -> Result<i64> {
    let (base, exp) = text.split_once('^').ok_or_else(|| Error::parse(format!("expected p^k, found {text:?}")))?;
    let base: u32 = base.trim().parse().map_err(|_| Error::parse(format!("malformed prime in {text:?}")))?;
    if base != ctx.p {
        return Err(Error::parse(format!("literal is in base {base}, context has p = {}", ctx.p)));
    }
    exp.trim().parse().map_err(|_| Error::parse(format!("malformed exponent in {text:?}")))
}

fn parse_canonical(text: &str, ctx: PadicContext) -> Result<PadicNumber> {
    if text == "0" {
        return Ok(PadicNumber::zero(ctx));
    }
    let (head, abs) = match text.split_once('+') {
        Some((head, tail)) => {
            let tail = tail.trim();
            let inner = tail
                .strip_prefix("O(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::parse(format!("malformed precision term {tail:?}")))?;
            (head.trim(), parse_power(inner, ctx)?)
        }
        None => (text, ctx.precision as i64),
    };
    if head == "0" {
        return Ok(PadicNumber::approx_zero(ctx, abs));
    }
    let (power, list) =
        head.split_once('*').ok_or_else(|| Error::parse(format!("expected `p^v * [digits]`, found {head:?}")))?;
    let val = parse_power(power.trim(), ctx)?;
    let list = list
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::parse(format!("malformed digit list {list:?}")))?;
    let mut digits = list
        .split(',')
        .map(|d| d.trim().parse::<u32>().map_err(|_| Error::parse(format!("malformed digit {d:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&d) = digits.iter().find(|&&d| d >= ctx.p) {
        return Err(Error::parse(format!("digit {d} is not below p = {}", ctx.p)));
    }
    if digits.iter().all(|&d| d == 0) {
        return Err(Error::parse("digit list of a nonzero value must contain a nonzero digit"));
    }
    if val >= abs {
        return Err(Error::parse(format!("valuation {val} is not below the precision {abs}")));
    }
    let len = (abs - val) as usize;
    if digits.len() > len {
        if digits[len..].iter().any(|&d| d != 0) {
            return Err(Error::parse(format!("digits extend beyond precision p^{abs}")));
        }
        digits.truncate(len);
    }
    digits.resize(len, 0);
    PadicNumber::from_digits(ctx, val, digits)
}
