//! Arithmetic in GF(2^m) for 3 <= m <= 16 and univariate polynomials over it.
//!
//! Elements are plain `u16` values holding the polynomial-basis
//! representation. All multiplicative work goes through log/antilog tables
//! built once per [`Field`]; the antilog table is stored twice over so that
//! the sum of two logarithms never needs a modular reduction.

use crate::error::{Error, Result};

/// A field element in polynomial basis.
pub type Elem = u16;

/// Primitive polynomial used when none is given, indexed by `m`.
pub fn default_prim_poly(m: u32) -> Option<u32> {
    let poly = match m {
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_1001,
        8 => 0x11D,
        9 => 0x211,
        10 => 0b100_0000_1001,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100B,
        _ => return None,
    };
    Some(poly)
}

/// Log/antilog tables for GF(2^m) with alpha = x.
#[derive(Debug, Clone)]
pub struct Field {
    m: u32,
    prim_poly: u32,
    n: usize,
    exp: Vec<Elem>,
    log: Vec<u16>,
    /// Zech logarithms: `zech[t] = log(1 + alpha^t)` for `t` in `1..n`.
    zech: Vec<u16>,
}

impl Field {
    pub fn new(m: u32, prim_poly: u32) -> Result<Self> {
        if !(3..=16).contains(&m) {
            return Err(Error::UnsupportedWidth(m));
        }
        if prim_poly >> m != 1 {
            return Err(Error::NotPrimitive { m, poly: prim_poly });
        }
        let n = (1usize << m) - 1;
        let mut exp = vec![0 as Elem; 2 * n];
        let mut log = vec![0u16; n + 1];
        let mut seen = vec![false; n + 1];
        let mut x: u32 = 1;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            // Revisiting an element before n steps means x has order < n.
            if seen[x as usize] {
                return Err(Error::NotPrimitive { m, poly: prim_poly });
            }
            seen[x as usize] = true;
            *slot = x as Elem;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= prim_poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive { m, poly: prim_poly });
        }
        exp.copy_within(0..n, n);
        let zech = (0..n).map(|t| if t == 0 { 0 } else { log[(exp[t] ^ 1) as usize] }).collect();
        Ok(Self { m, prim_poly, n, exp, log, zech })
    }

    pub fn with_default_poly(m: u32) -> Result<Self> {
        let poly = default_prim_poly(m).ok_or(Error::UnsupportedWidth(m))?;
        Self::new(m, poly)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn prim_poly(&self) -> u32 {
        self.prim_poly
    }

    /// Multiplicative group order, 2^m - 1. Also the RS codeword length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Elem {
        self.exp[1]
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        (a as usize) <= self.n
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] as usize).wrapping_add(self.log[b as usize] as usize)]
    }

    /// `a / b`. The divisor must be nonzero.
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(b != 0, "division by zero");
        if a == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] as usize).wrapping_add(self.n).wrapping_sub(self.log[b as usize] as usize)]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.exp[self.n - self.log[a as usize] as usize])
    }

    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = (self.log[a as usize] as i64 * e).rem_euclid(self.n as i64);
        self.exp[l as usize]
    }

    /// alpha^e for any nonnegative exponent.
    #[inline]
    pub fn alpha_pow(&self, e: usize) -> Elem {
        if e < self.n {
            self.exp[e]
        } else {
            self.exp[e % self.n]
        }
    }

    /// Discrete log base alpha; `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    /// `a * alpha^e` with `e < n`; one table lookup.
    ///
    /// The table-index arithmetic in the hot helpers below wraps instead of
    /// overflow-checking: any out-of-range value still trips the bounds
    /// check on the table read.
    #[inline]
    pub(crate) fn mul_alpha_pow(&self, a: Elem, e: usize) -> Elem {
        if a == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] as usize).wrapping_add(e)]
    }

    /// `log(alpha^a + alpha^b)` for distinct exponents below `n`; the
    /// result is below `2n`.
    #[inline]
    pub(crate) fn log_sum_pow(&self, a: usize, b: usize) -> usize {
        debug_assert!(a != b && a < self.n && b < self.n);
        let t = if a >= b { a.wrapping_sub(b) } else { a.wrapping_add(self.n).wrapping_sub(b) };
        b.wrapping_add(self.zech[t] as usize)
    }

    /// Antilog of a raw exponent sum; `e` may be up to `2n - 1`.
    #[inline]
    pub(crate) fn exp_raw(&self, e: usize) -> Elem {
        self.exp[e]
    }

    #[inline]
    pub(crate) fn log_raw(&self, a: Elem) -> usize {
        self.log[a as usize] as usize
    }
}

/// Product over `others` of (point - alpha^j), where `others` holds exponents.
///
/// The product is accumulated as a sum of logarithms, so the cost is one
/// XOR and one table read per factor.
pub fn prod_diff<I>(field: &Field, point: Elem, others: I) -> Elem
where
    I: IntoIterator<Item = usize>,
{
    let n = field.n();
    let mut log_sum = 0usize;
    for j in others {
        let d = point ^ field.alpha_pow(j);
        if d == 0 {
            return 0;
        }
        log_sum += field.log_raw(d);
    }
    field.exp_raw(log_sum % n)
}

/// Product over `others` of (alpha^e - alpha^j), all arguments exponents
/// below `n`. Zech logarithms make each factor a single table read.
pub(crate) fn prod_diff_exp<I>(field: &Field, e: usize, others: I) -> Elem
where
    I: IntoIterator<Item = usize>,
{
    let mut log_sum = 0usize;
    for j in others {
        if j == e {
            return 0;
        }
        log_sum += field.log_sum_pow(e, j);
    }
    field.exp_raw(log_sum % field.n)
}

/// Polynomial over GF(2^m), lowest-degree coefficient first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and its degree is `None`, which orders
/// below every `Some(d)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<Elem>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots<I: IntoIterator<Item = Elem>>(field: &Field, roots: I) -> Self {
        let mut p = Self::one();
        for r in roots {
            p.mul_linear_in_place(field, r);
        }
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, field: &Field, x: Elem) -> Elem {
        if x == 0 {
            return self.coeffs.first().copied().unwrap_or(0);
        }
        // Horner with the multiplier kept in log form.
        let lx = field.log_raw(x);
        self.coeffs.iter().rev().fold(0, |acc, &c| {
            let t = if acc == 0 { 0 } else { field.exp_raw(field.log_raw(acc) + lx) };
            t ^ c
        })
    }

    /// `(x - a) * self`.
    pub fn mul_linear(&self, field: &Field, a: Elem) -> Self {
        let mut p = self.clone();
        p.mul_linear_in_place(field, a);
        p
    }

    pub fn mul_linear_in_place(&mut self, field: &Field, a: Elem) {
        if self.is_zero() {
            return;
        }
        self.coeffs.push(0);
        for i in (1..self.coeffs.len()).rev() {
            self.coeffs[i] = self.coeffs[i - 1] ^ field.mul(a, self.coeffs[i]);
        }
        self.coeffs[0] = field.mul(a, self.coeffs[0]);
    }

    /// `self + s * q`.
    pub fn add_scaled(&self, field: &Field, q: &Poly, s: Elem) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < q.coeffs.len() {
            coeffs.resize(q.coeffs.len(), 0);
        }
        for (c, &qc) in coeffs.iter_mut().zip(&q.coeffs) {
            *c ^= field.mul(s, qc);
        }
        Self::from_coeffs(coeffs)
    }

    /// `s * self + t * q`.
    pub fn lin_comb(&self, field: &Field, s: Elem, q: &Poly, t: Elem) -> Self {
        let len = self.coeffs.len().max(q.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).map_or(0, |&c| field.mul(s, c));
                let b = q.coeffs.get(i).map_or(0, |&c| field.mul(t, c));
                a ^ b
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn scale(&self, field: &Field, s: Elem) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&c| field.mul(s, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] ^= field.mul(a, b);
            }
        }
        Self::from_coeffs(out)
    }

    /// Formal derivative. In characteristic 2 only odd powers survive.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();
        Self::from_coeffs(coeffs)
    }
}
