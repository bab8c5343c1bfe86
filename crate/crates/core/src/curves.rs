//! Curve models over `F_q` and exact point counts of their smooth projective
//! models.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ff::{discriminant, DiscriminantRecord, FieldElement, FieldSpec};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveError {
    /// Counting kernels need odd `q`.
    EvenCharacteristic,
    /// The short Weierstrass j-formula needs `p > 3`.
    SmallCharacteristic(u64),
    Singular,
    NotSquarefree,
    /// Polynomial degree outside the range a model allows.
    Degree(usize),
    FactorsNotCoprime,
    Exponent(u8),
    ZeroGamma,
    NoFactors,
    /// A count outside `q + 1 +- g m`: either a bug or a wrong genus.
    HasseWeilViolation {
        count: u64,
        q: u64,
        g: u32,
        m: u64,
    },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::EvenCharacteristic => write!(f, "unsupported characteristic 2"),
            CurveError::SmallCharacteristic(p) => {
                write!(f, "short Weierstrass invariants need p > 3, got p = {p}")
            }
            CurveError::Singular => write!(f, "singular model"),
            CurveError::NotSquarefree => write!(f, "polynomial is not squarefree"),
            CurveError::Degree(d) => write!(f, "polynomial degree {d} not allowed here"),
            CurveError::FactorsNotCoprime => write!(f, "factors are not pairwise coprime"),
            CurveError::Exponent(e) => write!(f, "exponent {e} outside 1..=4"),
            CurveError::ZeroGamma => write!(f, "gamma must be nonzero"),
            CurveError::NoFactors => write!(f, "superelliptic model needs at least one factor"),
            CurveError::HasseWeilViolation { count, q, g, m } => {
                write!(f, "count {count} violates |N - {q} - 1| <= {g} * {m}")
            }
        }
    }
}

/// A field together with the lookup tables the counting loops index:
/// quadratic character, and quintic residue class when `q = 1 mod 5`.
#[derive(Debug, Clone)]
pub struct CountingField {
    spec: FieldSpec,
    disc: DiscriminantRecord,
    chi: Vec<i8>,
    /// `quintic[x]` is the class of `x`; `u8::MAX` marks zero. Empty unless
    /// `q = 1 mod 5`.
    quintic: Vec<u8>,
    generator: FieldElement,
    non_square: FieldElement,
}

impl CountingField {
    /// Builds the tables by walking the powers of the least generator, so
    /// setup is `O(q)`. Tables are dense, which is why this is meant for the
    /// sweep range rather than for `q` near `2^32`.
    pub fn new(spec: FieldSpec) -> Result<Self, CurveError> {
        if spec.p() == 2 {
            return Err(CurveError::EvenCharacteristic);
        }
        let q = spec.q();
        let generator = spec.generator();
        let mut chi = vec![0i8; q as usize];
        let with_quintic = q % 5 == 1;
        let mut quintic = if with_quintic { vec![u8::MAX; q as usize] } else { Vec::new() };
        let mut x = FieldElement::ONE;
        for k in 0..q - 1 {
            chi[x.index()] = if k % 2 == 0 { 1 } else { -1 };
            if with_quintic {
                quintic[x.index()] = (k % 5) as u8;
            }
            x = spec.mul(x, generator);
        }
        let non_square = spec.least_non_square().expect("odd q has non-squares");
        Ok(CountingField { disc: discriminant(q), spec, chi, quintic, generator, non_square })
    }

    pub fn with_order(q: u64) -> Result<Self, CurveError> {
        let spec = FieldSpec::with_order(q).map_err(|_| CurveError::Degree(0))?;
        Self::new(spec)
    }

    #[inline]
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.spec.q()
    }

    #[inline]
    pub fn m(&self) -> u64 {
        self.disc.m
    }

    pub fn discriminant(&self) -> DiscriminantRecord {
        self.disc
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// The least non-square in packed order; the fixed twisting constant.
    pub fn non_square(&self) -> FieldElement {
        self.non_square
    }

    #[inline]
    pub fn chi(&self, x: FieldElement) -> i8 {
        self.chi[x.index()]
    }

    pub fn chi_table(&self) -> &[i8] {
        &self.chi
    }

    pub fn has_quintic_classes(&self) -> bool {
        !self.quintic.is_empty()
    }

    /// Class of a nonzero `x` modulo fifth powers (`None` for zero, and
    /// always `Some(0)` when `q != 1 mod 5`, where every element is a fifth
    /// power).
    #[inline]
    pub fn quintic(&self, x: FieldElement) -> Option<u8> {
        if x.is_zero() {
            None
        } else if self.quintic.is_empty() {
            Some(0)
        } else {
            Some(self.quintic[x.index()])
        }
    }

    /// Number of `w` with `w^5 = c`.
    #[inline]
    pub fn fifth_roots(&self, c: FieldElement) -> u64 {
        match self.quintic(c) {
            None => 1,
            Some(_) if self.quintic.is_empty() => 1,
            Some(0) => 5,
            Some(_) => 0,
        }
    }

    /// Number of `z` with `z^2 = c`.
    #[inline]
    pub fn square_roots(&self, c: FieldElement) -> u64 {
        (1 + self.chi(c) as i64) as u64
    }

    /// `sum_x chi(f(x))` over all of `F_q`.
    pub fn character_sum(&self, f: &Poly) -> i64 {
        let k = &self.spec;
        k.elements().map(|x| self.chi(f.eval(k, x)) as i64).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EllipticModel {
    pub a: FieldElement,
    pub b: FieldElement,
}

impl EllipticModel {
    pub fn new(k: &FieldSpec, a: FieldElement, b: FieldElement) -> Result<Self, CurveError> {
        let e = EllipticModel { a, b };
        if e.discriminant_term(k).is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(e)
    }

    /// `4a^3 + 27b^2`.
    pub fn discriminant_term(&self, k: &FieldSpec) -> FieldElement {
        let a3 = k.mul(k.sqr(self.a), self.a);
        k.add(k.mul(k.from_int(4), a3), k.mul(k.from_int(27), k.sqr(self.b)))
    }

    /// The cubic `x^3 + ax + b`.
    pub fn cubic(&self) -> Poly {
        Poly::new(vec![self.b, self.a, FieldElement::ZERO, FieldElement::ONE])
    }

    /// Quadratic twist by `u`: `y^2 = x^3 + a u^2 x + b u^3`, isomorphic to
    /// `u y^2 = x^3 + ax + b`.
    pub fn twist(&self, k: &FieldSpec, u: FieldElement) -> EllipticModel {
        let u2 = k.sqr(u);
        EllipticModel { a: k.mul(self.a, u2), b: k.mul(self.b, k.mul(u2, u)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HyperellipticModel {
    f: Poly,
}

impl HyperellipticModel {
    /// `z^2 = F(x)` with `1 <= deg F <= 6` and `F` squarefree.
    pub fn new(k: &FieldSpec, f: Poly) -> Result<Self, CurveError> {
        if k.p() == 2 {
            return Err(CurveError::EvenCharacteristic);
        }
        match f.degree() {
            Some(d) if (1..=6).contains(&d) => {}
            d => return Err(CurveError::Degree(d.unwrap_or(0))),
        }
        if !f.is_squarefree(k) {
            return Err(CurveError::NotSquarefree);
        }
        Ok(HyperellipticModel { f })
    }

    pub fn poly(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> u32 {
        (self.f.degree().unwrap_or(1) as u32 - 1) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuperellipticModel {
    gamma: FieldElement,
    factors: Vec<(Poly, u8)>,
}

impl SuperellipticModel {
    /// `z^5 = gamma * prod f_i(x)^nu_i`.
    pub fn new(k: &FieldSpec, gamma: FieldElement, factors: Vec<(Poly, u8)>) -> Result<Self, CurveError> {
        if gamma.is_zero() {
            return Err(CurveError::ZeroGamma);
        }
        if factors.is_empty() {
            return Err(CurveError::NoFactors);
        }
        for (i, (f, nu)) in factors.iter().enumerate() {
            if !(1..=4).contains(nu) {
                return Err(CurveError::Exponent(*nu));
            }
            match f.degree() {
                Some(d) if d >= 1 => {}
                d => return Err(CurveError::Degree(d.unwrap_or(0))),
            }
            if !f.is_squarefree(k) {
                return Err(CurveError::NotSquarefree);
            }
            for (g, _) in &factors[..i] {
                if f.gcd(k, g).degree() != Some(0) {
                    return Err(CurveError::FactorsNotCoprime);
                }
            }
        }
        Ok(SuperellipticModel { gamma, factors })
    }

    pub fn gamma(&self) -> FieldElement {
        self.gamma
    }

    pub fn factors(&self) -> &[(Poly, u8)] {
        &self.factors
    }

    /// `sum nu_i deg f_i`.
    pub fn weighted_degree(&self) -> usize {
        self.factors.iter().map(|(f, nu)| *nu as usize * f.degree().unwrap_or(0)).sum()
    }

    /// Number of branch points over the algebraic closure.
    pub fn branch_points(&self) -> usize {
        let finite: usize = self.factors.iter().map(|(f, _)| f.degree().unwrap_or(0)).sum();
        finite + usize::from(!self.weighted_degree().is_multiple_of(5))
    }

    /// Leading coefficient of the right-hand side.
    pub fn leading_coefficient(&self, k: &FieldSpec) -> FieldElement {
        self.factors.iter().fold(self.gamma, |acc, (f, nu)| k.mul(acc, k.pow(f.lc(), *nu as u64)))
    }

    pub fn rhs(&self, k: &FieldSpec, x: FieldElement) -> FieldElement {
        self.factors.iter().fold(self.gamma, |acc, (f, nu)| k.mul(acc, k.pow(f.eval(k, x), *nu as u64)))
    }
}

/// Tagged union over the three model shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CurveModel {
    Elliptic(EllipticModel),
    Hyperelliptic(HyperellipticModel),
    Superelliptic(SuperellipticModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Optimality {
    Maximal,
    Minimal,
    Neither,
}

/// Point count of a smooth projective model together with its context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountResult {
    pub count: u64,
    pub q: u64,
    pub m: u64,
    pub g: u32,
}

impl CountResult {
    /// Rejects counts outside the Hasse-Weil-Serre interval.
    pub fn new(count: u64, q: u64, g: u32) -> Result<Self, CurveError> {
        let m = discriminant(q).m;
        let dev = (count as i128 - q as i128 - 1).unsigned_abs();
        if dev > g as u128 * m as u128 {
            return Err(CurveError::HasseWeilViolation { count, q, g, m });
        }
        Ok(CountResult { count, q, m, g })
    }

    /// `count - q - 1`.
    pub fn deviation(&self) -> i64 {
        self.count as i64 - self.q as i64 - 1
    }

    /// Distance below the upper bound `q + 1 + g m`.
    pub fn defect_max(&self) -> u64 {
        self.q + 1 + self.g as u64 * self.m - self.count
    }

    /// Distance above the lower bound `q + 1 - g m` (which may be negative).
    pub fn defect_min(&self) -> u64 {
        (self.count as i64 - (self.q as i64 + 1 - (self.g as u64 * self.m) as i64)) as u64
    }
}

pub fn is_optimal(c: &CountResult) -> Optimality {
    let gm = c.g as i64 * c.m as i64;
    match c.deviation() {
        d if d == gm => Optimality::Maximal,
        d if d == -gm => Optimality::Minimal,
        _ => Optimality::Neither,
    }
}

/// `q + 1 + sum_x chi(x^3 + ax + b)`.
pub fn ec_count(cf: &CountingField, e: &EllipticModel) -> Result<CountResult, CurveError> {
    let k = cf.spec();
    if e.discriminant_term(k).is_zero() {
        return Err(CurveError::Singular);
    }
    let s = cubic_character_sum(cf, e.a, e.b);
    CountResult::new((cf.q() as i64 + 1 + s) as u64, cf.q(), 1)
}

/// `sum_x chi(x^3 + ax + b)`, with an integer fast path for prime fields.
pub fn cubic_character_sum(cf: &CountingField, a: FieldElement, b: FieldElement) -> i64 {
    let k = cf.spec();
    if k.n() == 1 {
        let p = k.q();
        let (a, b) = (a.value(), b.value());
        let chi = cf.chi_table();
        let mut s = 0i64;
        for x in 0..p {
            let v = (x * x % p * x + a * x + b) % p;
            s += chi[v as usize] as i64;
        }
        s
    } else {
        k.elements()
            .map(|x| {
                let v = k.add(k.mul(k.add(k.sqr(x), a), x), b);
                cf.chi(v) as i64
            })
            .sum()
    }
}

/// Smooth-model count of `z^2 = F(x)`: affine solutions plus one point at
/// infinity for odd degree, `1 + chi(lc)` for even degree.
pub fn hyperelliptic_count(cf: &CountingField, h: &HyperellipticModel) -> Result<CountResult, CurveError> {
    let k = cf.spec();
    let f = h.poly();
    let affine: u64 = k.elements().map(|x| cf.square_roots(f.eval(k, x))).sum();
    let deg = f.degree().unwrap_or(0);
    let infinity = if deg % 2 == 1 { 1 } else { cf.square_roots(f.lc()) };
    CountResult::new(affine + infinity, cf.q(), h.genus())
}

/// Smooth-model count of `z^5 = gamma prod f_i^nu_i`.
pub fn superelliptic_count(cf: &CountingField, s: &SuperellipticModel) -> Result<CountResult, CurveError> {
    let k = cf.spec();
    let affine: u64 = k.elements().map(|x| cf.fifth_roots(s.rhs(k, x))).sum();
    let infinity = if !s.weighted_degree().is_multiple_of(5) { 1 } else { cf.fifth_roots(s.leading_coefficient(k)) };
    CountResult::new(affine + infinity, cf.q(), superelliptic_genus(s))
}

/// Riemann-Hurwitz for a totally ramified cyclic quintic cover of the line:
/// `g = (5 - 1)(B - 2) / 2`.
pub fn superelliptic_genus(s: &SuperellipticModel) -> u32 {
    (2 * s.branch_points().saturating_sub(2)) as u32
}

/// `1728 * 4a^3 / (4a^3 + 27b^2)`.
pub fn ec_j_invariant(k: &FieldSpec, e: &EllipticModel) -> Result<FieldElement, CurveError> {
    if k.p() <= 3 {
        return Err(CurveError::SmallCharacteristic(k.p()));
    }
    let den = e.discriminant_term(k);
    if den.is_zero() {
        return Err(CurveError::Singular);
    }
    let a3 = k.mul(k.sqr(e.a), e.a);
    let num = k.mul(k.from_int(1728 * 4), a3);
    Ok(k.div(num, den).expect("nonzero denominator"))
}

/// Isomorphism over `F_q`. For `j != 0, 1728`, equal `j` and equal counts
/// decide it; for the two special invariants the `u`-scalings
/// `(a, b) -> (u^4 a, u^6 b)` are enumerated.
pub fn ec_isomorphic(cf: &CountingField, e1: &EllipticModel, e2: &EllipticModel) -> Result<bool, CurveError> {
    let k = cf.spec();
    let j1 = ec_j_invariant(k, e1)?;
    let j2 = ec_j_invariant(k, e2)?;
    if j1 != j2 {
        return Ok(false);
    }
    if j1 != k.zero() && j1 != k.from_int(1728) {
        return Ok(ec_count(cf, e1)?.count == ec_count(cf, e2)?.count);
    }
    Ok(k.elements().skip(1).any(|u| {
        let u2 = k.sqr(u);
        let u4 = k.sqr(u2);
        k.mul(u4, e1.a) == e2.a && k.mul(k.mul(u4, u2), e1.b) == e2.b
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(q: u64) -> CountingField {
        CountingField::with_order(q).unwrap()
    }

    fn ec(k: &CountingField, a: i64, b: i64) -> EllipticModel {
        let s = k.spec();
        EllipticModel::new(s, s.from_int(a), s.from_int(b)).unwrap()
    }

    #[test]
    fn elliptic_counts_at_23() {
        let k = cf(23);
        let max = ec_count(&k, &ec(&k, 1, 11)).unwrap();
        assert_eq!(max.count, 33);
        assert_eq!(is_optimal(&max), Optimality::Maximal);
        let min = ec_count(&k, &ec(&k, 12, 8)).unwrap();
        assert_eq!(min.count, 15);
        assert_eq!(is_optimal(&min), Optimality::Minimal);
    }

    #[test]
    fn supersingular_curve_over_f3() {
        let k = cf(3);
        assert_eq!(ec_count(&k, &ec(&k, 1, 0)).unwrap().count, 4);
    }

    #[test]
    fn singular_models_rejected() {
        let k = cf(23);
        let s = k.spec();
        assert_eq!(EllipticModel::new(s, s.zero(), s.zero()), Err(CurveError::Singular));
        let bad = EllipticModel { a: s.zero(), b: s.zero() };
        assert_eq!(ec_count(&k, &bad), Err(CurveError::Singular));
    }

    #[test]
    fn genus_two_count_at_23() {
        let k = cf(23);
        let f = Poly::from_i64(k.spec(), &[10, 0, 3, 0, 12, 0, 1]);
        let h = HyperellipticModel::new(k.spec(), f).unwrap();
        let c = hyperelliptic_count(&k, &h).unwrap();
        assert_eq!((c.count, c.g), (42, 2));
        assert_eq!(is_optimal(&c), Optimality::Maximal);
    }

    #[test]
    fn rational_line_over_f3() {
        let k = cf(3);
        let h = HyperellipticModel::new(k.spec(), Poly::x()).unwrap();
        let c = hyperelliptic_count(&k, &h).unwrap();
        assert_eq!((c.count, c.g), (4, 0));
    }

    #[test]
    fn hyperelliptic_rejects_square_factors() {
        let k = cf(7);
        let f = Poly::from_i64(k.spec(), &[1, 2, 1]);
        assert_eq!(HyperellipticModel::new(k.spec(), f), Err(CurveError::NotSquarefree));
        let g = Poly::from_i64(k.spec(), &[1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(HyperellipticModel::new(k.spec(), g), Err(CurveError::Degree(7)));
    }

    #[test]
    fn quintic_covers_of_the_line() {
        let k = cf(11);
        let s = SuperellipticModel::new(k.spec(), k.spec().one(), vec![(Poly::x(), 1)]).unwrap();
        assert_eq!(superelliptic_count(&k, &s).unwrap().count, 12);
        assert_eq!(superelliptic_genus(&s), 0);

        let k7 = cf(7);
        let cubic = Poly::from_i64(k7.spec(), &[2, 0, 0, 1]);
        let s7 = SuperellipticModel::new(k7.spec(), k7.spec().one(), vec![(cubic, 1)]).unwrap();
        assert_eq!(superelliptic_count(&k7, &s7).unwrap().count, 8);
        assert_eq!(superelliptic_genus(&s7), 4);
    }

    #[test]
    fn superelliptic_model_invariants() {
        let k = cf(11);
        let s = k.spec();
        let x = Poly::x();
        assert_eq!(SuperellipticModel::new(s, s.zero(), vec![(x.clone(), 1)]), Err(CurveError::ZeroGamma));
        assert_eq!(SuperellipticModel::new(s, s.one(), vec![(x.clone(), 5)]), Err(CurveError::Exponent(5)));
        let x2 = Poly::from_i64(s, &[0, 0, 1]);
        assert_eq!(SuperellipticModel::new(s, s.one(), vec![(x2, 1)]), Err(CurveError::NotSquarefree));
        let xp1 = Poly::from_i64(s, &[0, 1, 1]);
        assert_eq!(SuperellipticModel::new(s, s.one(), vec![(x, 1), (xp1, 2)]), Err(CurveError::FactorsNotCoprime));
    }

    #[test]
    fn j_invariants() {
        let k = cf(23);
        let s = k.spec();
        assert_eq!(ec_j_invariant(s, &ec(&k, 3, 0)).unwrap(), s.from_int(1728));
        assert_eq!(ec_j_invariant(s, &ec(&k, 0, 5)).unwrap(), s.zero());
        let k3 = cf(3);
        assert_eq!(ec_j_invariant(k3.spec(), &ec(&k3, 1, 0)), Err(CurveError::SmallCharacteristic(3)));
    }

    #[test]
    fn isomorphism_of_special_j() {
        let k = cf(23);
        // j = 1728: x^3 + x and x^3 + 16x (= 2^4 x) are isomorphic via u = 2.
        assert!(ec_isomorphic(&k, &ec(&k, 1, 0), &ec(&k, 16, 0)).unwrap());
        // The quadratic twist x^3 - x of x^3 + x over F_23 has the same count
        // (both supersingular) but 23 = 3 mod 4 makes -1 = u^4 impossible.
        assert!(!ec_isomorphic(&k, &ec(&k, 1, 0), &ec(&k, -1, 0)).unwrap());
    }

    #[test]
    fn count_result_rejects_impossible_counts() {
        assert!(CountResult::new(34, 23, 1).is_err());
        assert!(CountResult::new(24, 23, 0).is_ok());
        let c = CountResult::new(24, 23, 1).unwrap();
        assert_eq!(is_optimal(&c), Optimality::Neither);
        assert_eq!((c.defect_max(), c.defect_min()), (9, 9));
    }
}
