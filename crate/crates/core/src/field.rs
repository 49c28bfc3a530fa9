//! Exact arithmetic in F_q for odd q = p^s.
//!
//! Elements are stored in the polynomial basis F_p[x]/(m(x)). Each element
//! is identified by its *rank* in coefficient-lexicographic order (constant
//! coefficient most significant), so comparing two [`Elem`]s compares their
//! coefficient lists lexicographically. Every "smallest" choice made in this
//! crate (default modulus, primitive element, square roots) uses this order.
//!
//! Construction builds log/antilog tables from a primitive element found by
//! plain polynomial arithmetic; afterwards every operation is a table lookup.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_PRIME_ORDER: u64 = 1 << 20;
const MAX_EXTENSION_ORDER: u64 = 4096;
const NO_ROOT: u32 = u32::MAX;

/// Description of a finite field: prime, extension degree and the monic
/// modulus as a coefficient list, low degree first (length `s + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub s: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.s)
    }
}

/// A field element, valid only together with the [`Field`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    /// Rank of the element in coefficient-lexicographic order.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    spec: FieldSpec,
    q: usize,
    p: u32,
    /// index of the multiplicative identity
    unit: u32,
    /// p^(s-1): index stride of the constant coefficient
    add: Vec<u16>,
    neg: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
    trace: Vec<u32>,
    chi: Vec<Complex64>,
    sqrt: Vec<u32>,
    primitive: u32,
}

/// Handle to an immutable, shareable field. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(p={}, s={}, modulus={:?})", self.q(), self.p(), self.s(), self.0.spec.modulus)
    }
}

/// Builds F_{p^s}. Without an explicit modulus the lexicographically smallest
/// monic irreducible polynomial of degree `s` is used.
pub fn make_field(p: u64, s: u32, modulus: Option<&[u64]>) -> Result<Field> {
    Field::new(p, s, modulus)
}

impl Field {
    pub fn new(p: u64, s: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if s == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u128).checked_pow(s).unwrap_or(u128::MAX);
        let cap = if s == 1 { MAX_PRIME_ORDER } else { MAX_EXTENSION_ORDER };
        if q > cap as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != s as usize + 1 || m[s as usize] % p != 1 {
                    return Err(Error::DegreeMismatch { expected: s, modulus: m.to_vec() });
                }
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if !is_irreducible(&m, p) {
                    return Err(Error::ReduciblePolynomial { p, modulus: m });
                }
                m
            }
            None => smallest_irreducible(p, s),
        };
        let spec = FieldSpec { p, s, modulus };
        Ok(Field(Arc::new(Tables::build(spec))))
    }

    /// Prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u64 {
        self.0.spec.p
    }

    pub fn s(&self) -> u32 {
        self.0.spec.s
    }

    pub fn q(&self) -> usize {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.spec.s == 1
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(self.0.unit)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> Elem {
        let r = n.rem_euclid(self.p() as i64) as u32;
        Elem(r * self.0.unit)
    }

    /// Element with the given rank; `None` when out of range.
    pub fn element(&self, index: usize) -> Option<Elem> {
        (index < self.q()).then_some(Elem(index as u32))
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        let s = self.s() as usize;
        if coeffs.len() > s {
            return Err(Error::DimensionMismatch { expected: s, found: coeffs.len() });
        }
        let p = self.p();
        let mut idx = 0u64;
        for i in 0..s {
            idx = idx * p + coeffs.get(i).copied().unwrap_or(0) % p;
        }
        Ok(Elem(idx as u32))
    }

    /// Polynomial-basis coefficients, constant term first.
    pub fn coeffs(&self, x: Elem) -> Vec<u64> {
        index_to_coeffs(x.0 as u64, self.p(), self.s() as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q() as u32).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q() as u32).map(Elem)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.index() < self.q()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &self.0;
        if t.add.is_empty() {
            let r = a.0 + b.0;
            Elem(if r >= t.p { r - t.p } else { r })
        } else {
            Elem(t.add[a.index() * t.q + b.index()] as u32)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        let t = &self.0;
        Elem(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize])
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let t = &self.0;
        let order = (t.q - 1) as u32;
        Some(Elem(t.exp[((order - t.log[a.index()]) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for any integer exponent. `0^0 = 1`; negative powers of zero are `None`.
    pub fn pow(&self, a: Elem, e: i64) -> Option<Elem> {
        if a.0 == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Some(Elem(0)),
                std::cmp::Ordering::Equal => Some(self.one()),
                std::cmp::Ordering::Less => None,
            };
        }
        let t = &self.0;
        let order = (t.q - 1) as i128;
        let k = (t.log[a.index()] as i128 * e as i128).rem_euclid(order);
        Some(Elem(t.exp[k as usize]))
    }

    /// Discrete logarithm to the base [`Field::primitive_element`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.index()])
    }

    /// `g^k` for the primitive element `g`.
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.0.exp[(k % (self.q() as u64 - 1)) as usize])
    }

    /// Absolute trace Tr(x) = x + x^p + ... + x^{p^{s-1}}, as an element of the
    /// prime subfield.
    pub fn trace(&self, x: Elem) -> Elem {
        Elem(self.0.trace[x.index()] * self.0.unit)
    }

    /// The trace lifted to `[0, p)`.
    pub fn trace_residue(&self, x: Elem) -> u32 {
        self.0.trace[x.index()]
    }

    /// Principal additive character exp(2 pi i Tr(x) / p).
    #[inline]
    pub fn chi(&self, x: Elem) -> Complex64 {
        self.0.chi[x.index()]
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    pub fn eta(&self, x: Elem) -> i8 {
        if x.0 == 0 {
            0
        } else if self.0.log[x.index()].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        Elem(self.0.primitive)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: Elem) -> Option<u64> {
        let l = self.log(x)? as u64;
        let n = self.q() as u64 - 1;
        Some(n / gcd(n, l))
    }

    /// Square root, choosing the smaller of the two roots.
    pub fn sqrt(&self, x: Elem) -> Option<Elem> {
        let r = self.0.sqrt[x.index()];
        (r != NO_ROOT).then_some(Elem(r))
    }

    pub fn minus_one_is_square(&self) -> bool {
        self.sqrt(self.neg(self.one())).is_some()
    }

    pub fn frobenius(&self, x: Elem) -> Elem {
        self.pow(x, self.p() as i64).expect("positive exponent")
    }

    /// Whether `x` lies in the image of F_p.
    pub fn in_prime_subfield(&self, x: Elem) -> bool {
        x.0.is_multiple_of(self.0.unit)
    }

    /// Dot product of two coordinate slices of equal length.
    #[inline]
    pub fn dot(&self, x: &[Elem], y: &[Elem]) -> Elem {
        debug_assert_eq!(x.len(), y.len());
        let t = &self.0;
        if t.add.is_empty() {
            let p = t.p as u64;
            let mut acc = 0u64;
            for (a, b) in x.iter().zip(y) {
                acc += a.0 as u64 * b.0 as u64;
            }
            Elem((acc % p) as u32)
        } else {
            x.iter().zip(y).fold(Elem(0), |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
        }
    }

    pub fn format(&self, x: Elem) -> String {
        if self.is_prime_field() {
            return x.0.to_string();
        }
        let c = self.coeffs(x);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| match (i, v) {
                (0, v) => v.to_string(),
                (1, 1) => "x".into(),
                (1, v) => format!("{v}x"),
                (i, 1) => format!("x^{i}"),
                (i, v) => format!("{v}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl Tables {
    fn build(spec: FieldSpec) -> Tables {
        let p = spec.p;
        let s = spec.s as usize;
        let q = p.pow(s as u32) as usize;
        let unit = p.pow(s as u32 - 1) as u32;
        let coeffs: Vec<Vec<u64>> = (0..q as u64).map(|i| index_to_coeffs(i, p, s)).collect();
        let to_index = |c: &[u64]| coeffs_to_index(c, p) as u32;

        let neg: Vec<u32> = coeffs
            .iter()
            .map(|c| to_index(&c.iter().map(|&v| (p - v) % p).collect::<Vec<_>>()))
            .collect();
        let add = if s == 1 {
            Vec::new()
        } else {
            let mut add = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    let c: Vec<u64> = coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| (x + y) % p).collect();
                    add[a * q + b] = to_index(&c) as u16;
                }
            }
            add
        };

        let one = index_to_coeffs(unit as u64, p, s);
        let group_order = q as u64 - 1;
        let factors = prime_factors(group_order);
        let primitive = (1..q)
            .find(|&g| {
                factors.iter().all(|&l| {
                    poly_pow(&coeffs[g], group_order / l, &spec.modulus, p) != one
                })
            })
            .expect("the multiplicative group of a finite field is cyclic") as u32;

        let mut exp = Vec::with_capacity(2 * (q - 1));
        let mut log = vec![0u32; q];
        let mut cur = one.clone();
        for k in 0..q - 1 {
            let idx = to_index(&cur);
            exp.push(idx);
            log[idx as usize] = k as u32;
            cur = poly_mulmod(&cur, &coeffs[primitive as usize], &spec.modulus, p);
        }
        debug_assert_eq!(cur, one);
        let wrap = exp.clone();
        exp.extend(wrap);

        let mut t = Tables {
            spec,
            q,
            p: p as u32,
            unit,
            add,
            neg,
            log,
            exp,
            trace: Vec::new(),
            chi: Vec::new(),
            sqrt: Vec::new(),
            primitive,
        };

        let field_add = |t: &Tables, a: u32, b: u32| -> u32 {
            if t.add.is_empty() {
                (a + b) % t.p
            } else {
                t.add[a as usize * q + b as usize] as u32
            }
        };
        let mut trace = vec![0u32; q];
        for (x, slot) in trace.iter_mut().enumerate().skip(1) {
            let l = t.log[x] as u64;
            let mut acc = 0u32;
            let mut pk = 1u64;
            for _ in 0..s {
                let e = (l * pk) % group_order;
                acc = field_add(&t, acc, t.exp[e as usize]);
                pk = (pk * p) % group_order.max(1);
            }
            debug_assert_eq!(acc % unit, 0, "trace must land in the prime subfield");
            *slot = acc / unit;
        }
        let roots: Vec<Complex64> = (0..p)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / p as f64))
            .collect();
        t.chi = trace.iter().map(|&r| roots[r as usize]).collect();
        t.trace = trace;

        let mut sqrt = vec![NO_ROOT; q];
        sqrt[0] = 0;
        for (slot, &l) in sqrt.iter_mut().zip(&t.log).skip(1) {
            if l.is_multiple_of(2) {
                let r = t.exp[(l / 2) as usize];
                *slot = r.min(t.neg[r as usize]);
            }
        }
        t.sqrt = sqrt;
        t
    }
}

/// A field element bound to its field; arithmetic across fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    field: Field,
    elem: Elem,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in F_{}", self.field.format(self.elem), self.field.q())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.elem))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(i64),
}

impl Scalar {
    pub fn new(field: &Field, elem: Elem) -> Result<Scalar> {
        if !field.contains(elem) {
            return Err(Error::FieldMismatch);
        }
        Ok(Scalar { field: field.clone(), elem })
    }

    pub fn from_int(field: &Field, n: i64) -> Scalar {
        Scalar { field: field.clone(), elem: field.from_int(n) }
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Result<Scalar> {
        Ok(Scalar { field: field.clone(), elem: field.from_coeffs(coeffs)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.elem
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.elem)
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, elem: Elem) -> Scalar {
        Scalar { field: self.field.clone(), elem }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.elem, other.elem)))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.elem, other.elem)))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.elem, other.elem)))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        let r = self.field.div(self.elem, other.elem).ok_or(Error::DivisionByZero)?;
        Ok(self.wrap(r))
    }

    pub fn neg(&self) -> Scalar {
        self.wrap(self.field.neg(self.elem))
    }

    pub fn inv(&self) -> Result<Scalar> {
        Ok(self.wrap(self.field.inv(self.elem).ok_or(Error::DivisionByZero)?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        Ok(self.wrap(self.field.pow(self.elem, e).ok_or(Error::DivisionByZero)?))
    }

    pub fn trace(&self) -> Scalar {
        self.wrap(self.field.trace(self.elem))
    }

    pub fn chi(&self) -> Complex64 {
        self.field.chi(self.elem)
    }

    pub fn eta(&self) -> i8 {
        self.field.eta(self.elem)
    }

    pub fn sqrt(&self) -> Option<Scalar> {
        self.field.sqrt(self.elem).map(|r| self.wrap(r))
    }
}

/// Applies `op` to `a` (and `b` for binary operations).
pub fn field_arithmetic(a: &Scalar, b: Option<&Scalar>, op: ArithOp) -> Result<Scalar> {
    let rhs = || b.ok_or_else(|| Error::ConfigInvalid(format!("{op:?} needs two operands")));
    match op {
        ArithOp::Add => a.add(rhs()?),
        ArithOp::Sub => a.sub(rhs()?),
        ArithOp::Mul => a.mul(rhs()?),
        ArithOp::Div => a.div(rhs()?),
        ArithOp::Neg => Ok(a.neg()),
        ArithOp::Inv => a.inv(),
        ArithOp::Pow(e) => a.pow(e),
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn index_to_coeffs(mut idx: u64, p: u64, s: usize) -> Vec<u64> {
    let mut c = vec![0; s];
    for slot in c.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    c
}

fn coeffs_to_index(c: &[u64], p: u64) -> u64 {
    c.iter().fold(0, |acc, &v| acc * p + v)
}

/// Product of two residues (length `s`) modulo the monic `modulus` (length `s + 1`).
fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let s = modulus.len() - 1;
    let mut r = vec![0u64; 2 * s];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    for deg in (s..2 * s).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        r[deg] = 0;
        for (j, &m) in modulus.iter().take(s).enumerate() {
            let k = deg - s + j;
            r[k] = (r[k] + (p - c) * m) % p;
        }
    }
    r.truncate(s);
    r
}

fn poly_pow(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let s = modulus.len() - 1;
    let mut acc = vec![0u64; s];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

/// Remainder of `f` modulo the monic `g` (both full coefficient lists).
fn poly_rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = r[r.len() - 1];
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (j, &gc) in g.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p - c) * gc) % p;
            }
        }
        r.pop();
    }
    r
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let s = modulus.len() - 1;
    for deg in 1..=s / 2 {
        for low in 0..p.pow(deg as u32) {
            let mut g = index_to_coeffs(low, p, deg);
            g.push(1);
            if poly_rem(modulus, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `s`, scanning lower coefficients in
/// lexicographic order with the constant term most significant.
fn smallest_irreducible(p: u64, s: u32) -> Vec<u64> {
    (0..p.pow(s))
        .map(|low| {
            let mut m = index_to_coeffs(low, p, s as usize);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}
