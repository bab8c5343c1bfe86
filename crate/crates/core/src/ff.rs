//! Exact arithmetic in finite fields `F_q`, `q = p^n < 2^32`.
//!
//! Elements are stored packed: the coefficient vector `(c_0, .., c_{n-1})` of
//! the polynomial-basis representation is encoded as the integer
//! `c_0 + c_1 p + .. + c_{n-1} p^{n-1}`. For prime fields this is just the
//! residue, and for every field the packed values are exactly `0..q`, which
//! lets counting kernels index lookup tables directly by element.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::Poly;

/// The discriminants with class number one that the searches target.
pub const SUPPORTED_DISCRIMINANTS: [i64; 6] = [-3, -4, -7, -8, -11, -19];

/// Exclusive upper bound on field sizes.
pub const Q_LIMIT: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FfError {
    NotPrime(u64),
    ZeroDegree,
    /// `p^n` does not fit below [`Q_LIMIT`].
    Overflow {
        p: u64,
        n: u32,
    },
    InverseOfZero,
    /// A packed value that is not an element of the field at hand.
    ForeignElement {
        value: u64,
        q: u64,
    },
    EvenCharacteristic,
    /// Quintic residue classes need `q = 1 mod 5`.
    NoQuinticClasses {
        q: u64,
    },
    UnsupportedDiscriminant(i64),
    BoundTooLarge(u64),
}

impl fmt::Display for FfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FfError::NotPrime(p) => write!(f, "{p} is not prime"),
            FfError::ZeroDegree => write!(f, "extension degree must be at least 1"),
            FfError::Overflow { p, n } => write!(f, "{p}^{n} does not fit below 2^32"),
            FfError::InverseOfZero => write!(f, "inversion of zero"),
            FfError::ForeignElement { value, q } => {
                write!(f, "value {value} is not an element of F_{q}")
            }
            FfError::EvenCharacteristic => write!(f, "operation needs odd characteristic"),
            FfError::NoQuinticClasses { q } => {
                write!(f, "quintic classes need q = 1 mod 5, got q = {q}")
            }
            FfError::UnsupportedDiscriminant(d) => write!(f, "unsupported discriminant {d}"),
            FfError::BoundTooLarge(b) => write!(f, "bound {b} exceeds 2^32"),
        }
    }
}

/// A field element in packed polynomial-basis form. Only meaningful together
/// with the [`FieldSpec`] it was produced by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct FieldElement(pub(crate) u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The packed integer encoding, in `0..q`.
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Selector for [`FieldSpec::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arith {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    /// Exponent is taken from the packed value of the second operand.
    Pow,
}

/// Residue class of a nonzero element in `F_q^* / (F_q^*)^5`, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuinticClass {
    Zero,
    Class(u8),
}

/// `F_q` for `q = p^n`; immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    n: u32,
    q: u64,
    /// Monic modulus, low-to-high, length `n + 1`; `None` for prime fields.
    modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    /// Builds `F_{p^n}` with the lexicographically least monic irreducible
    /// modulus, comparing coefficient vectors `(c_0, .., c_{n-1})`.
    pub fn new(p: u64, n: u32) -> Result<Self, FfError> {
        if n == 0 {
            return Err(FfError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        let q = checked_pow(p, n).filter(|&q| q < Q_LIMIT).ok_or(FfError::Overflow { p, n })?;
        if n == 1 {
            return Ok(FieldSpec { p, n, q, modulus: None });
        }
        let base = FieldSpec { p, n: 1, q: p, modulus: None };
        let modulus = least_irreducible(&base, n);
        Ok(FieldSpec { p, n, q, modulus: Some(modulus) })
    }

    pub fn prime(p: u64) -> Result<Self, FfError> {
        Self::new(p, 1)
    }

    /// Field of size `q`, which must be a prime power below `2^32`.
    pub fn with_order(q: u64) -> Result<Self, FfError> {
        let (p, n) = prime_power(q).ok_or(FfError::NotPrime(q))?;
        Self::new(p, n)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u64)
    }

    /// Validates a packed value.
    pub fn element(&self, value: u64) -> Result<FieldElement, FfError> {
        if value < self.q {
            Ok(FieldElement(value))
        } else {
            Err(FfError::ForeignElement { value, q: self.q })
        }
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.q
    }

    /// Element with the given polynomial-basis coefficients (low-to-high).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, FfError> {
        if coeffs.len() > self.n as usize {
            return Err(FfError::ForeignElement { value: u64::MAX, q: self.q });
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(FfError::ForeignElement { value: c, q: self.q });
            }
            v = v * self.p + c;
        }
        Ok(FieldElement(v))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u64> {
        let mut out = vec![0; self.n as usize];
        let mut v = x.0;
        for c in out.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    /// All elements in packed order `0, 1, .., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.n == 1 {
            let s = x.0 + y.0;
            FieldElement(if s >= self.p { s - self.p } else { s })
        } else {
            self.digitwise(x, y, |a, b, p| (a + b) % p)
        }
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.n == 1 {
            FieldElement(if x.0 >= y.0 { x.0 - y.0 } else { x.0 + self.p - y.0 })
        } else {
            self.digitwise(x, y, |a, b, p| (a + p - b) % p)
        }
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, x)
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if self.n == 1 {
            // p < 2^32, so the product fits in 64 bits.
            FieldElement(x.0 * y.0 % self.p)
        } else {
            self.ext_mul(x, y)
        }
    }

    #[inline]
    pub fn sqr(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FfError> {
        if x.is_zero() {
            return Err(FfError::InverseOfZero);
        }
        if self.n == 1 {
            Ok(FieldElement(mod_inverse(x.0, self.p)))
        } else {
            Ok(self.pow(x, self.q - 2))
        }
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FfError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Checked entry point: validates operand membership before operating.
    pub fn arith(&self, op: Arith, x: FieldElement, y: FieldElement) -> Result<FieldElement, FfError> {
        self.element(x.0)?;
        if op != Arith::Pow {
            self.element(y.0)?;
        }
        Ok(match op {
            Arith::Add => self.add(x, y),
            Arith::Sub => self.sub(x, y),
            Arith::Mul => self.mul(x, y),
            Arith::Neg => self.neg(x),
            Arith::Inv => self.inv(x)?,
            Arith::Pow => self.pow(x, y.0),
        })
    }

    /// Legendre-style character: 0 for zero, +1 for nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, x: FieldElement) -> Result<i8, FfError> {
        if self.p == 2 {
            return Err(FfError::EvenCharacteristic);
        }
        self.element(x.0)?;
        if x.is_zero() {
            return Ok(0);
        }
        let r = self.pow(x, (self.q - 1) / 2);
        Ok(if r == FieldElement::ONE { 1 } else { -1 })
    }

    /// Class of `x` in `F_q^*/(F_q^*)^5`, read off from `x^((q-1)/5)` against
    /// the powers of `g^((q-1)/5)` for the fixed generator `g`.
    pub fn quintic_class(&self, x: FieldElement) -> Result<QuinticClass, FfError> {
        if self.q % 5 != 1 {
            return Err(FfError::NoQuinticClasses { q: self.q });
        }
        self.element(x.0)?;
        if x.is_zero() {
            return Ok(QuinticClass::Zero);
        }
        let e = (self.q - 1) / 5;
        let zeta = self.pow(self.generator(), e);
        let target = self.pow(x, e);
        let mut cur = FieldElement::ONE;
        for k in 0..5u8 {
            if cur == target {
                return Ok(QuinticClass::Class(k));
            }
            cur = self.mul(cur, zeta);
        }
        unreachable!("x^((q-1)/5) is a fifth root of unity")
    }

    /// Least primitive element in packed order.
    pub fn generator(&self) -> FieldElement {
        if self.q == 2 {
            return FieldElement::ONE;
        }
        let order = self.q - 1;
        let primes = prime_factors(order);
        (1..self.q)
            .map(FieldElement)
            .find(|&g| primes.iter().all(|&r| self.pow(g, order / r) != FieldElement::ONE))
            .expect("multiplicative group is cyclic")
    }

    /// Least non-square in packed order (odd q only).
    pub fn least_non_square(&self) -> Option<FieldElement> {
        if self.p == 2 {
            return None;
        }
        (2..self.q).map(FieldElement).find(|&x| self.pow(x, (self.q - 1) / 2) != FieldElement::ONE)
    }

    fn digitwise(&self, x: FieldElement, y: FieldElement, op: impl Fn(u64, u64, u64) -> u64) -> FieldElement {
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n {
            out += op(a % self.p, b % self.p, self.p) * place;
            a /= self.p;
            b /= self.p;
            place = place.wrapping_mul(self.p);
        }
        FieldElement(out)
    }

    fn ext_mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let n = self.n as usize;
        let p = self.p;
        let modulus = self.modulus.as_ref().expect("extension field has a modulus");
        let mut xs = [0u64; 32];
        let mut ys = [0u64; 32];
        let (mut a, mut b) = (x.0, y.0);
        for i in 0..n {
            xs[i] = a % p;
            ys[i] = b % p;
            a /= p;
            b /= p;
        }
        let mut prod = [0u64; 64];
        for i in 0..n {
            if xs[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + xs[i] * ys[j]) % p;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                let t = c * modulus[j] % p;
                prod[i - n + j] = (prod[i - n + j] + p - t) % p;
            }
            prod[i] = 0;
        }
        let mut v = 0u64;
        for i in (0..n).rev() {
            v = v * p + prod[i];
        }
        FieldElement(v)
    }
}

fn least_irreducible(base: &FieldSpec, n: u32) -> Vec<u64> {
    let p = base.p;
    let total = checked_pow(p, n).expect("bounded by q");
    // A zero constant term means x divides the candidate, so start at c_0 = 1.
    for idx in total / p..total {
        // c_0 is the most significant coordinate of the lexicographic order.
        let mut coeffs = vec![0u64; n as usize + 1];
        let mut v = idx;
        for i in (0..n as usize).rev() {
            coeffs[i] = v % p;
            v /= p;
        }
        coeffs[n as usize] = 1;
        let f = Poly::from_u64(base, &coeffs);
        if f.lacks_small_factors(base) && f.is_irreducible(base) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Deterministic primality for `n < 2^64` by trial division up to `2^16` then
/// Miller-Rabin with the first twelve prime bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &sp in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == sp {
            return true;
        }
        if n.is_multiple_of(sp) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `(p, n)` with `q = p^n`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Distinct prime divisors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_pow(p: u64, n: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(p as i64) as u64
}

/// Floor of the square root, by integer Newton iteration plus a final
/// correction step.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = n;
    let mut y = x / 2 + 1;
    while y < x {
        x = y;
        y = (x + n / x) / 2;
    }
    while (x as u128) * (x as u128) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128) * ((x + 1) as u128) <= n as u128 {
        x += 1;
    }
    x
}

/// `m = floor(2 sqrt(q))` and `d = m^2 - 4q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscriminantRecord {
    pub q: u64,
    pub m: u64,
    pub d: i64,
}

impl DiscriminantRecord {
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        prime_power(self.q)
    }
}

pub fn discriminant(q: u64) -> DiscriminantRecord {
    let m = isqrt(4 * q);
    DiscriminantRecord { q, m, d: (m * m) as i64 - 4 * q as i64 }
}

pub fn is_supported_discriminant(d: i64) -> bool {
    SUPPORTED_DISCRIMINANTS.contains(&d)
}

/// All prime powers `q <= q_max` with discriminant `d`, ascending.
///
/// Walks `m` rather than `q`: `4q = m^2 - d` must hold, and `m` is the floor
/// of `2 sqrt(q)` exactly when `-d < 2m + 1`.
pub fn enumerate_discriminant_fields(d: i64, q_max: u64) -> Result<Vec<DiscriminantRecord>, FfError> {
    if !is_supported_discriminant(d) {
        return Err(FfError::UnsupportedDiscriminant(d));
    }
    if q_max > Q_LIMIT {
        return Err(FfError::BoundTooLarge(q_max));
    }
    let abs_d = d.unsigned_abs();
    let mut out = Vec::new();
    let mut m: u64 = 1;
    loop {
        let four_q = m * m + abs_d;
        if four_q / 4 > q_max {
            break;
        }
        if four_q.is_multiple_of(4) && abs_d < 2 * m + 1 {
            let q = four_q / 4;
            if q >= 2 && prime_power(q).is_some() {
                let rec = discriminant(q);
                debug_assert_eq!(rec.d, d);
                out.push(rec);
            }
        }
        m += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_no_modulus() {
        let f = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f.q(), 7);
        assert!(f.modulus().is_none());
    }

    #[test]
    fn least_moduli() {
        assert_eq!(FieldSpec::new(2, 2).unwrap().modulus(), Some(&[1, 1, 1][..]));
        assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), Some(&[1, 0, 1][..]));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(9, 1), Err(FfError::NotPrime(9)));
        assert_eq!(FieldSpec::new(5, 0), Err(FfError::ZeroDegree));
        assert_eq!(FieldSpec::new(2, 32), Err(FfError::Overflow { p: 2, n: 32 }));
        assert!(FieldSpec::new(2, 31).is_ok());
    }

    #[test]
    fn small_prime_arithmetic() {
        let f = FieldSpec::prime(23).unwrap();
        assert_eq!(f.inv(f.one()).unwrap(), f.one());
        assert_eq!(f.inv(f.from_int(2)).unwrap(), f.from_int(12));
        assert_eq!(f.pow(f.from_int(5), 11), f.from_int(22));
        assert_eq!(f.inv(f.zero()), Err(FfError::InverseOfZero));
    }

    #[test]
    fn checked_arith_rejects_foreign_values() {
        let f = FieldSpec::prime(23).unwrap();
        let big = FieldElement(40);
        assert_eq!(f.arith(Arith::Add, big, f.one()), Err(FfError::ForeignElement { value: 40, q: 23 }));
        assert_eq!(f.arith(Arith::Pow, f.from_int(5), FieldElement(11)).unwrap(), f.from_int(22));
        assert_eq!(f.arith(Arith::Inv, f.zero(), f.zero()), Err(FfError::InverseOfZero));
    }

    #[test]
    fn quadratic_character_values() {
        let f = FieldSpec::prime(23).unwrap();
        assert_eq!(f.quadratic_character(f.zero()).unwrap(), 0);
        assert_eq!(f.quadratic_character(f.from_int(2)).unwrap(), 1);
        assert_eq!(f.quadratic_character(f.from_int(5)).unwrap(), -1);
        let even = FieldSpec::new(2, 3).unwrap();
        assert_eq!(even.quadratic_character(even.one()), Err(FfError::EvenCharacteristic));
    }

    #[test]
    fn quintic_classes_in_f11() {
        let f = FieldSpec::prime(11).unwrap();
        assert_eq!(f.quintic_class(f.one()).unwrap(), QuinticClass::Class(0));
        assert_eq!(f.quintic_class(f.from_int(10)).unwrap(), QuinticClass::Class(0));
        assert_ne!(f.quintic_class(f.from_int(2)).unwrap(), QuinticClass::Class(0));
        assert_eq!(f.quintic_class(f.zero()).unwrap(), QuinticClass::Zero);
        let g = FieldSpec::prime(13).unwrap();
        assert_eq!(g.quintic_class(g.one()), Err(FfError::NoQuinticClasses { q: 13 }));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(23), DiscriminantRecord { q: 23, m: 9, d: -11 });
        assert_eq!(discriminant(4), DiscriminantRecord { q: 4, m: 4, d: 0 });
        assert_eq!(discriminant(47), DiscriminantRecord { q: 47, m: 13, d: -19 });
    }

    #[test]
    fn isqrt_near_squares() {
        for k in [0u64, 1, 2, 3, 1000, 65535, 65536, 4_294_967_295] {
            let s = k * k;
            assert_eq!(isqrt(s), k);
            if k > 0 {
                assert_eq!(isqrt(s - 1), k - 1);
                assert_eq!(isqrt(s + 1), k);
            }
        }
    }

    #[test]
    fn enumerate_small_cases() {
        let qs = |d, b| enumerate_discriminant_fields(d, b).unwrap().into_iter().map(|r| r.q).collect::<Vec<_>>();
        assert_eq!(qs(-19, 150), [47, 61, 137]);
        assert!(qs(-3, 3).contains(&3));
        assert_eq!(enumerate_discriminant_fields(-5, 100), Err(FfError::UnsupportedDiscriminant(-5)));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(563), Some((563, 1)));
        assert_eq!(prime_power(45), None);
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
    }
}
