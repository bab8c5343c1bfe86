//! Dense univariate polynomials over `F_q` and their factorization.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ff::{FieldElement, FieldSpec};

const FACTOR_SEED: u64 = 0x6f70_7463_7572_7665;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    ZeroPolynomial,
    EvenCharacteristic,
    DivisionByZero,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ZeroPolynomial => write!(f, "zero polynomial"),
            PolyError::EvenCharacteristic => write!(f, "factorization needs odd q"),
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
        }
    }
}

/// Coefficients low-to-high with no trailing zeros; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Reduces integer coefficients into the prime subfield.
    pub fn from_i64(k: &FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| k.from_int(c)).collect())
    }

    /// Interprets values as packed field elements; they must be below `q`.
    pub fn from_u64(k: &FieldSpec, coeffs: &[u64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| k.element(c).expect("coefficient outside the field")).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly { coeffs: vec![FieldElement::ZERO, FieldElement::ONE] }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == FieldElement::ONE
    }

    pub fn eval(&self, k: &FieldSpec, x: FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    pub fn add(&self, k: &FieldSpec, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| k.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, k: &FieldSpec, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, k: &FieldSpec, c: FieldElement) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn mul(&self, k: &FieldSpec, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: &FieldSpec, e: u32) -> Poly {
        let mut acc = Poly::constant(FieldElement::ONE);
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    /// Scaled to leading coefficient one; the zero polynomial stays zero.
    pub fn monic(&self, k: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = k.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(k, inv)
    }

    pub fn derivative(&self, k: &FieldSpec) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(c, k.from_int((i as u64 % k.p()) as i64)))
                .collect(),
        )
    }

    pub fn div_rem(&self, k: &FieldSpec, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lc = k.inv(divisor.lc()).expect("nonzero leading coefficient");
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let t = k.mul(c, inv_lc);
            quot[i - dd] = t;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = k.sub(rem[i - dd + j], k.mul(t, dc));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, k: &FieldSpec, divisor: &Poly) -> Poly {
        self.div_rem(k, divisor).expect("nonzero divisor").1
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, k: &FieldSpec, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, k: &FieldSpec, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(k, m);
        let mut acc = Poly::constant(FieldElement::ONE).rem(k, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base).rem(k, m);
            }
            base = base.mul(k, &base).rem(k, m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self, k: &FieldSpec) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(k, &self.derivative(k)).degree() == Some(0),
        }
    }

    /// Rabin's test: `gcd(x^(q^j) - x, f) = 1` for every proper divisor `j`
    /// of `n = deg f`, and `x^(q^n) = x mod f`.
    pub fn is_irreducible(&self, k: &FieldSpec) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let x = Poly::x();
        let mut h = x.clone();
        for j in 1..=n {
            h = h.pow_mod(k, k.q(), self);
            if j < n && n % j == 0 && h.sub(k, &x).gcd(k, self).degree() != Some(0) {
                return false;
            }
        }
        h == x.rem(k, self)
    }

    /// Ben-Or's test: no irreducible factor of degree at most `deg f / 2`.
    /// Agrees with [`Poly::is_irreducible`] but stops at the first small
    /// factor, which makes it the cheaper filter when most inputs are
    /// reducible.
    pub fn lacks_small_factors(&self, k: &FieldSpec) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        let x = Poly::x();
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(k, k.q(), self);
            if h.sub(k, &x).gcd(k, self).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Roots in `F_q` by exhaustive evaluation.
    pub fn roots(&self, k: &FieldSpec) -> Vec<FieldElement> {
        k.elements().filter(|&x| self.eval(k, x).is_zero()).collect()
    }

    /// `x^deg(F) F(t + 1/x)` for the given `deg`: moves the point `t` to
    /// infinity. Pass `deg` at least the degree of `self`.
    pub fn move_to_infinity(&self, k: &FieldSpec, t: FieldElement, deg: usize) -> Poly {
        // Expand F(t + y) by Horner, then reverse into degree-`deg` slots.
        let shift = Poly::new(vec![t, FieldElement::ONE]);
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(k, &shift).add(k, &Poly::constant(c));
        }
        let mut out = vec![FieldElement::ZERO; deg + 1];
        for (i, &c) in acc.coeffs.iter().enumerate() {
            out[deg - i] = c;
        }
        Poly::new(out)
    }

    fn frobenius_norm_power(&self, k: &FieldSpec, d: usize, m: &Poly) -> Poly {
        // a^((q^d - 1)/2) = (a * a^q * .. * a^(q^(d-1)))^((q-1)/2)
        let mut conj = self.rem(k, m);
        let mut prod = conj.clone();
        for _ in 1..d {
            conj = conj.pow_mod(k, k.q(), m);
            prod = prod.mul(k, &conj).rem(k, m);
        }
        prod.pow_mod(k, (k.q() - 1) / 2, m)
    }
}

/// `lc * prod f_i^(e_i)` with monic irreducible `f_i`, sorted by degree then
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Factorization {
    pub lc: FieldElement,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, k: &FieldSpec) -> Poly {
        self.factors.iter().fold(Poly::constant(self.lc), |acc, (f, e)| acc.mul(k, &f.pow(k, *e)))
    }

    /// Degrees of the irreducible factors with multiplicity, ascending.
    pub fn shape(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, e)| core::iter::repeat_n(f.degree().unwrap_or(0), *e as usize))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Complete factorization over `F_q` (odd `q`): squarefree decomposition,
/// distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting
/// driven by a ChaCha stream seeded from the coefficients.
pub fn poly_factor(k: &FieldSpec, f: &Poly) -> Result<Factorization, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if k.p() == 2 {
        return Err(PolyError::EvenCharacteristic);
    }
    let lc = f.lc();
    let monic = f.monic(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(&monic));
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(k, &monic) {
        for (g, d) in distinct_degree(k, &sqf) {
            let mut pieces = Vec::new();
            equal_degree(k, &g, d, &mut rng, &mut pieces);
            factors.extend(pieces.into_iter().map(|h| (h, mult)));
        }
    }
    factors.sort_by(|(a, ea), (b, eb)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)).then(ea.cmp(eb)));
    // Merge equal factors coming from different squarefree layers.
    let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(factors.len());
    for (h, e) in factors {
        match merged.last_mut() {
            Some((last, le)) if *last == h => *le += e,
            _ => merged.push((h, e)),
        }
    }
    Ok(Factorization { lc, factors: merged })
}

fn seed_for(f: &Poly) -> u64 {
    f.coeffs.iter().fold(FACTOR_SEED, |h, c| (h ^ c.value()).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(17))
}

/// Yun-style decomposition adapted to characteristic `p`: returns monic
/// squarefree parts with multiplicities, all of positive degree.
fn squarefree_decomposition(k: &FieldSpec, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    sqf_rec(k, f, 1, &mut out);
    out
}

fn sqf_rec(k: &FieldSpec, f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let df = f.derivative(k);
    if df.is_zero() {
        let root = pth_root(k, f);
        sqf_rec(k, &root, scale * k.p() as u32, out);
        return;
    }
    let mut c = f.gcd(k, &df);
    let mut w = f.div_rem(k, &c).unwrap().0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(k, &c);
        let z = w.div_rem(k, &y).unwrap().0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(k), i * scale));
        }
        w = y;
        c = c.div_rem(k, &w).unwrap().0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(k, &c);
        sqf_rec(k, &root, scale * k.p() as u32, out);
    }
}

/// For `f(x) = g(x^p)`, the polynomial `h` with `h^p = f`.
fn pth_root(k: &FieldSpec, f: &Poly) -> Poly {
    let p = k.p() as usize;
    let e = k.q() / k.p();
    let n = f.coeffs.len();
    Poly::new((0..n).step_by(p).map(|i| k.pow(f.coeffs[i], e)).collect())
}

fn distinct_degree(k: &FieldSpec, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.monic(k);
    let x = Poly::x();
    let mut h = x.clone();
    let mut d = 1;
    while let Some(deg) = rest.degree() {
        if deg < 2 * d {
            break;
        }
        h = h.pow_mod(k, k.q(), &rest);
        let g = h.sub(k, &x).gcd(k, &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(k, &g).unwrap().0;
            h = h.rem(k, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

fn equal_degree(k: &FieldSpec, f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.degree().unwrap_or(0);
    if n == d {
        out.push(f.monic(k));
        return;
    }
    loop {
        let a = Poly::new((0..n).map(|_| k.element(rng.next_u64() % k.q()).unwrap()).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = a.frobenius_norm_power(k, d, f).sub(k, &Poly::constant(FieldElement::ONE));
        let g = b.gcd(k, f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = f.div_rem(k, &g).unwrap().0.monic(k);
            equal_degree(k, &g, d, rng, out);
            equal_degree(k, &other, d, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let k = f(7);
        let fac = poly_factor(&k, &Poly::from_i64(&k, &[-1, 0, 1])).unwrap();
        assert_eq!(fac.lc, k.one());
        assert_eq!(fac.factors, vec![(Poly::from_i64(&k, &[1, 1]), 1), (Poly::from_i64(&k, &[-1, 1]), 1)]);
    }

    #[test]
    fn sextic_splits_into_two_cubics() {
        let k = f(23);
        let sextic = Poly::from_i64(&k, &[10, 0, 3, 0, 12, 0, 1]);
        let fac = poly_factor(&k, &sextic).unwrap();
        assert_eq!(fac.shape(), [3, 3]);
        assert_eq!(fac.expand(&k), sextic);
    }

    #[test]
    fn cubic_without_roots_is_irreducible() {
        let k = f(23);
        let c = Poly::from_i64(&k, &[11, 1, 0, 1]);
        assert!(c.roots(&k).is_empty());
        assert!(c.is_irreducible(&k));
        assert_eq!(poly_factor(&k, &c).unwrap().factors, vec![(c, 1)]);
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        let k = f(3);
        // (x + 1)^3 (x^2 + 1)^2 * 2
        let a = Poly::from_i64(&k, &[1, 1]).pow(&k, 3);
        let b = Poly::from_i64(&k, &[1, 0, 1]).pow(&k, 2);
        let g = a.mul(&k, &b).scale(&k, k.from_int(2));
        let fac = poly_factor(&k, &g).unwrap();
        assert_eq!(fac.lc, k.from_int(2));
        assert_eq!(fac.factors, vec![(Poly::from_i64(&k, &[1, 1]), 3), (Poly::from_i64(&k, &[1, 0, 1]), 2)]);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(poly_factor(&f(5), &Poly::zero()), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn extension_field_factoring() {
        let k = FieldSpec::new(3, 2).unwrap();
        // x^2 + 1 is irreducible over F_3 but splits over F_9.
        let g = Poly::from_i64(&k, &[1, 0, 1]);
        let fac = poly_factor(&k, &g).unwrap();
        assert_eq!(fac.shape(), [1, 1]);
        assert_eq!(fac.expand(&k), g);
    }

    #[test]
    fn irreducibility_tests_agree() {
        let k = f(3);
        for deg in 1..=6u32 {
            for idx in 0..3u64.pow(deg) {
                let mut c: Vec<u64> = (0..deg).map(|i| idx / 3u64.pow(i) % 3).collect();
                c.push(1);
                let g = Poly::from_u64(&k, &c);
                assert_eq!(g.is_irreducible(&k), g.lacks_small_factors(&k), "{c:?}");
            }
        }
    }

    #[test]
    fn move_to_infinity_matches_pointwise() {
        let k = f(11);
        let g = Poly::from_i64(&k, &[3, 1, 4, 1, 5]);
        let t = k.from_int(6);
        let h = g.move_to_infinity(&k, t, 4);
        for xv in 1..11 {
            let x = k.from_int(xv);
            let y = k.add(t, k.inv(x).unwrap());
            assert_eq!(h.eval(&k, x), k.mul(k.pow(x, 4), g.eval(&k, y)));
        }
    }
}
