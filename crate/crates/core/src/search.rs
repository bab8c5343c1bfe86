//! Exhaustive searches: optimal elliptic curves, their genus-2 gluings, the
//! genus-4 obstruction scan and the quintic superelliptic scan.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::curves::{
    cubic_character_sum, ec_count, ec_isomorphic, ec_j_invariant, hyperelliptic_count, is_optimal, CountResult,
    CountingField, CurveError, EllipticModel, HyperellipticModel, Optimality,
};
use crate::ff::{FieldElement, FieldSpec};
use crate::poly::{poly_factor, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    Curve(CurveError),
    Poly(PolyError),
    /// Exhaustive search found no optimal elliptic curve on the requested side.
    NoOptimalCurve {
        q: u64,
        side: Side,
    },
    /// The base curve handed to the gluing is not optimal.
    NotOptimal {
        q: u64,
    },
    /// The base cubic has a rational root.
    ReducibleCubic {
        q: u64,
    },
    /// No `(alpha, beta)` gives an optimal quartic on the base curve's side.
    NoGluing {
        q: u64,
    },
    /// The glued genus-2 model is neither maximal nor minimal.
    GluingNotOptimal {
        q: u64,
        count: u64,
    },
}

impl From<CurveError> for SearchError {
    fn from(e: CurveError) -> Self {
        SearchError::Curve(e)
    }
}

impl From<PolyError> for SearchError {
    fn from(e: PolyError) -> Self {
        SearchError::Poly(e)
    }
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Curve(e) => write!(f, "{e}"),
            SearchError::Poly(e) => write!(f, "{e}"),
            SearchError::NoOptimalCurve { q, side } => {
                write!(f, "no {side} optimal elliptic curve over F_{q}")
            }
            SearchError::NotOptimal { q } => write!(f, "base curve over F_{q} is not optimal"),
            SearchError::ReducibleCubic { q } => {
                write!(f, "base cubic over F_{q} has a rational root")
            }
            SearchError::NoGluing { q } => write!(f, "no optimal quartic cover over F_{q}"),
            SearchError::GluingNotOptimal { q, count } => {
                write!(f, "glued genus-2 model over F_{q} has non-optimal count {count}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    Maximal,
    Minimal,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Maximal => 1,
            Side::Minimal => -1,
        }
    }

    pub fn of(c: &CountResult) -> Option<Side> {
        match is_optimal(c) {
            Optimality::Maximal => Some(Side::Maximal),
            Optimality::Minimal => Some(Side::Minimal),
            Optimality::Neither => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Maximal => "maximal",
            Side::Minimal => "minimal",
        })
    }
}

/// One `F_q`-isomorphism class of elliptic curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EllipticClass {
    pub j: FieldElement,
    pub representative: EllipticModel,
    pub count: u64,
}

/// One representative per `F_q`-isomorphism class (`p > 3`).
///
/// For `j != 0, 1728` the classes are `y^2 = x^3 + 3kx + 2k` with
/// `k = j / (1728 - j)` and its quadratic twist; for `j = 0` (resp. 1728)
/// they are `y^2 = x^3 + g^i` for `i < gcd(6, q - 1)` (resp.
/// `y^2 = x^3 + g^i x` for `i < gcd(4, q - 1)`), `g` the fixed generator.
pub fn isomorphism_classes(cf: &CountingField) -> Result<Vec<EllipticClass>, SearchError> {
    let k = cf.spec();
    if k.p() <= 3 {
        return Err(CurveError::SmallCharacteristic(k.p()).into());
    }
    let q = cf.q();
    let j1728 = k.from_int(1728);
    let u = cf.non_square();
    let mut out = Vec::with_capacity(2 * q as usize + 8);
    for j in k.elements() {
        if j.is_zero() || j == j1728 {
            let (count, step) = if j.is_zero() { (gcd(6, q - 1), 0) } else { (gcd(4, q - 1), 1) };
            let mut c = FieldElement::ONE;
            for _ in 0..count {
                let e = if step == 0 {
                    EllipticModel { a: FieldElement::ZERO, b: c }
                } else {
                    EllipticModel { a: c, b: FieldElement::ZERO }
                };
                let n = ec_count(cf, &e)?.count;
                out.push(EllipticClass { j, representative: e, count: n });
                c = k.mul(c, cf.generator());
            }
            continue;
        }
        let kk = k.div(j, k.sub(j1728, j)).expect("j != 1728");
        let e = EllipticModel { a: k.mul(k.from_int(3), kk), b: k.mul(k.from_int(2), kk) };
        let s = cubic_character_sum(cf, e.a, e.b);
        out.push(EllipticClass { j, representative: e, count: (q as i64 + 1 + s) as u64 });
        out.push(EllipticClass { j, representative: e.twist(k, u), count: (q as i64 + 1 - s) as u64 });
    }
    Ok(out)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Result of [`find_optimal_elliptic`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimalElliptic {
    pub side: Side,
    /// Lexicographically least `(a, b)` with the optimal count.
    pub model: EllipticModel,
    pub count: u64,
    /// Every isomorphism class with the optimal count.
    pub classes: Vec<EllipticClass>,
    pub unique: bool,
    pub classes_examined: u64,
    pub models_examined: u64,
}

/// Sweeps all isomorphism classes for the optimal count on `side`, then
/// returns the lexicographically least `(a, b)` in one of those classes.
///
/// The class sweep is what makes the uniqueness report exhaustive: every
/// model `(a, b)` lies in exactly one of the enumerated classes.
pub fn find_optimal_elliptic(cf: &CountingField, side: Side) -> Result<OptimalElliptic, SearchError> {
    let k = cf.spec();
    let q = cf.q();
    let target = (q as i64 + 1 + side.sign() * cf.m() as i64) as u64;
    let all = isomorphism_classes(cf)?;
    let classes_examined = all.len() as u64;
    let classes: Vec<EllipticClass> = all.into_iter().filter(|c| c.count == target).collect();
    if classes.is_empty() {
        return Err(SearchError::NoOptimalCurve { q, side });
    }
    let j0 = k.zero();
    let j1728 = k.from_int(1728);
    let c1728 = k.from_int(1728 * 4);
    let mut models_examined = 0u64;
    for a in k.elements() {
        let a3 = k.mul(k.sqr(a), a);
        let four_a3 = k.mul(k.from_int(4), a3);
        let lhs = k.mul(c1728, a3);
        for b in k.elements() {
            let den = k.add(four_a3, k.mul(k.from_int(27), k.sqr(b)));
            if den.is_zero() {
                continue;
            }
            models_examined += 1;
            let e = EllipticModel { a, b };
            for class in &classes {
                // j(E) = j0  <=>  1728 * 4a^3 = j0 (4a^3 + 27b^2)
                if lhs != k.mul(class.j, den) {
                    continue;
                }
                let hit = if class.j == j0 || class.j == j1728 {
                    ec_isomorphic(cf, &e, &class.representative)?
                } else {
                    ec_count(cf, &e)?.count == target
                };
                if hit {
                    return Ok(OptimalElliptic {
                        side,
                        model: e,
                        count: target,
                        unique: classes.len() == 1,
                        classes,
                        classes_examined,
                        models_examined,
                    });
                }
            }
        }
    }
    unreachable!("every class has a model (a, b)")
}

/// A maximal genus-2 curve built as the fibered product of
/// `y^2 = f(x)` and `y^2 = f(x)(alpha x + beta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GluingResult {
    pub base: EllipticModel,
    pub alpha: FieldElement,
    pub beta: FieldElement,
    /// Count of the quartic `y^2 = f(x)(alpha x + beta)`.
    pub quartic_count: u64,
    /// `z^2 = F(u)` with `F` even of degree 6.
    pub c2: HyperellipticModel,
    pub twisted: bool,
    pub count: u64,
    pub candidates_examined: u64,
}

impl GluingResult {
    /// `(F_6, F_4, F_2, F_0)`, the table layout of even sextics.
    pub fn even_coefficients(&self) -> [u64; 4] {
        let f = self.c2.poly();
        [f.coeff(6), f.coeff(4), f.coeff(2), f.coeff(0)].map(FieldElement::value)
    }
}

fn require_optimal_base(cf: &CountingField, e: &EllipticModel) -> Result<Side, SearchError> {
    let k = cf.spec();
    let c = ec_count(cf, e)?;
    let side = Side::of(&c).ok_or(SearchError::NotOptimal { q: cf.q() })?;
    if !e.cubic().roots(k).is_empty() {
        return Err(SearchError::ReducibleCubic { q: cf.q() });
    }
    Ok(side)
}

/// Builds the genus-2 model for a fixed `(alpha, beta)`.
///
/// Substituting `x = (u^2 - beta) / alpha` and scaling by `alpha^3` gives
/// `z^2 = G(u^2)` with `G(v) = (v - beta)^3 + a alpha^2 (v - beta) + b alpha^3`.
/// A minimal result is moved to the maximal side by the fixed non-square.
pub fn glue_at(
    cf: &CountingField,
    e: &EllipticModel,
    alpha: FieldElement,
    beta: FieldElement,
) -> Result<GluingResult, SearchError> {
    let k = cf.spec();
    require_optimal_base(cf, e)?;
    if alpha.is_zero() {
        return Err(CurveError::Degree(3).into());
    }
    let quartic = e.cubic().mul(k, &Poly::new(vec![beta, alpha]));
    let quartic_count = hyperelliptic_count(cf, &HyperellipticModel::new(k, quartic)?)?.count;
    glue_model(cf, e, alpha, beta, quartic_count, 1)
}

fn glue_model(
    cf: &CountingField,
    e: &EllipticModel,
    alpha: FieldElement,
    beta: FieldElement,
    quartic_count: u64,
    candidates_examined: u64,
) -> Result<GluingResult, SearchError> {
    let k = cf.spec();
    let a2 = k.mul(e.a, k.sqr(alpha));
    let b3 = k.mul(e.b, k.mul(k.sqr(alpha), alpha));
    let beta2 = k.sqr(beta);
    let g2 = k.neg(k.mul(k.from_int(3), beta));
    let g1 = k.add(k.mul(k.from_int(3), beta2), a2);
    let g0 = k.add(k.neg(k.add(k.mul(beta2, beta), k.mul(a2, beta))), b3);
    let z = FieldElement::ZERO;
    let sextic = Poly::new(vec![g0, z, g1, z, g2, z, FieldElement::ONE]);
    let model = HyperellipticModel::new(k, sextic.clone())?;
    let c = hyperelliptic_count(cf, &model)?;
    let (c2, twisted, count) = match Side::of(&c) {
        Some(Side::Maximal) => (model, false, c.count),
        Some(Side::Minimal) => {
            let tw = HyperellipticModel::new(k, sextic.scale(k, cf.non_square()))?;
            let tc = hyperelliptic_count(cf, &tw)?;
            (tw, true, tc.count)
        }
        None => return Err(SearchError::GluingNotOptimal { q: cf.q(), count: c.count }),
    };
    debug_assert_eq!(count, cf.q() + 1 + 2 * cf.m());
    Ok(GluingResult { base: *e, alpha, beta, quartic_count, c2, twisted, count, candidates_examined })
}

/// Searches `(alpha, beta)` in packed order, `alpha != 0`, for an optimal
/// quartic `y^2 = f(x)(alpha x + beta)` on the side of `E`, then glues.
pub fn glue_genus2(cf: &CountingField, e: &EllipticModel) -> Result<GluingResult, SearchError> {
    let k = cf.spec();
    let side = require_optimal_base(cf, e)?;
    let target = side.sign() * cf.m() as i64;
    let f = e.cubic();
    let chi_f: Vec<i8> = k.elements().map(|x| cf.chi(f.eval(k, x))).collect();
    let mut examined = 0u64;
    for alpha in k.elements().skip(1) {
        for beta in k.elements() {
            examined += 1;
            // count - q - 1 = sum_x chi(f(x)) chi(alpha x + beta) + chi(alpha)
            let mut s = cf.chi(alpha) as i64;
            for (x, &cx) in k.elements().zip(&chi_f) {
                s += (cx * cf.chi(k.add(k.mul(alpha, x), beta))) as i64;
            }
            if s == target {
                let quartic_count = (cf.q() as i64 + 1 + s) as u64;
                return glue_model(cf, e, alpha, beta, quartic_count, examined);
            }
        }
    }
    Err(SearchError::NoGluing { q: cf.q() })
}

/// The optimal elliptic curve on `side` glued into the maximal genus-2 curve.
pub fn optimal_genus2(cf: &CountingField, side: Side) -> Result<GluingResult, SearchError> {
    let e = find_optimal_elliptic(cf, side)?;
    glue_genus2(cf, &e.model)
}

/// Point of `P^1(F_q)` used as the fourth branch point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BranchPoint {
    Finite(FieldElement),
    Infinity,
}

/// Why a field was not scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SkipReason {
    CharacteristicThree,
    UnsupportedDiscriminant(i64),
}

/// Outcome of an "expected empty" scan over one field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScanOutcome {
    Empty,
    Witness,
    Skipped(SkipReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Genus4Witness {
    pub q: u64,
    pub t: BranchPoint,
    pub side: Side,
    pub h1: Poly,
    pub h2: Poly,
    /// Whether `h1` (resp. `h2`) carries the non-square twist.
    pub twist: [bool; 2],
    pub elliptic_counts: [u64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Genus4Scan {
    pub q: u64,
    pub d: i64,
    pub outcome: ScanOutcome,
    /// The maximal genus-2 sextic whose splittings were examined.
    pub sextic: Option<Poly>,
    /// Degrees of the irreducible factors of the sextic.
    pub shape: Vec<usize>,
    pub branch_points: u64,
    pub witnesses: Vec<Genus4Witness>,
}

/// Genus-4 obstruction scan for one field with `d in {-11, -19}`.
pub fn genus4_obstruction_scan(cf: &CountingField) -> Result<Genus4Scan, SearchError> {
    let d = cf.discriminant().d;
    let skipped = |reason| Genus4Scan {
        q: cf.q(),
        d,
        outcome: ScanOutcome::Skipped(reason),
        sextic: None,
        shape: Vec::new(),
        branch_points: 0,
        witnesses: Vec::new(),
    };
    if d != -11 && d != -19 {
        return Ok(skipped(SkipReason::UnsupportedDiscriminant(d)));
    }
    if cf.spec().p() == 3 {
        return Ok(skipped(SkipReason::CharacteristicThree));
    }
    let glued = optimal_genus2(cf, Side::Maximal)?;
    genus4_scan_sextic(cf, glued.c2.poly())
}

/// Tests every splitting of `z^2 = F` (maximal side) and `z^2 = u F`
/// (minimal side) into two elliptic quotients sharing a branch point at `t`.
///
/// With `F = lc g1 g2` and `t` moved to infinity, the quotient cubics are
/// `h_i = x^3 g_i(t + 1/x) / g_i(t)` and
/// `sum_x chi(h_i(x)) = chi(g_i(t)) (1 + sum_y chi(y - t) chi(g_i(y)))`,
/// so every `t` costs one correlation per cubic instead of a factorization.
pub fn genus4_scan_sextic(cf: &CountingField, sextic: &Poly) -> Result<Genus4Scan, SearchError> {
    let k = cf.spec();
    let q = cf.q();
    let fac = poly_factor(k, sextic)?;
    let shape = fac.shape();
    let mut scan = Genus4Scan {
        q,
        d: cf.discriminant().d,
        outcome: ScanOutcome::Empty,
        sextic: Some(sextic.clone()),
        shape: shape.clone(),
        branch_points: 0,
        witnesses: Vec::new(),
    };
    if shape != [3, 3] || fac.factors.len() != 2 {
        return Ok(scan);
    }
    let g = [fac.factors[0].0.clone(), fac.factors[1].0.clone()];
    let chi_lc = cf.chi(fac.lc) as i64;
    let vals: [Vec<i8>; 2] = [0, 1].map(|i| k.elements().map(|y| cf.chi(g[i].eval(k, y))).collect());
    let corr = [correlate(cf, &vals[0]), correlate(cf, &vals[1])];
    let m = cf.m() as i64;

    let mut check = |t: BranchPoint, s: [i64; 2], chi_lc_t: i64| {
        for side in [Side::Maximal, Side::Minimal] {
            let class = if side == Side::Maximal { chi_lc_t } else { -chi_lc_t };
            let pairs: [[i64; 2]; 2] = if class == 1 { [[1, 1], [-1, -1]] } else { [[1, -1], [-1, 1]] };
            for tw in pairs {
                let target = side.sign() * m;
                if tw[0] * s[0] == target && tw[1] * s[1] == target {
                    let h = match t {
                        BranchPoint::Infinity => g.clone(),
                        BranchPoint::Finite(t) => [0, 1].map(|i| g[i].move_to_infinity(k, t, 3).monic(k)),
                    };
                    scan.witnesses.push(Genus4Witness {
                        q,
                        t,
                        side,
                        h1: h[0].clone(),
                        h2: h[1].clone(),
                        twist: [tw[0] == -1, tw[1] == -1],
                        elliptic_counts: [0, 1].map(|i| (q as i64 + 1 + tw[i] * s[i]) as u64),
                    });
                }
            }
        }
    };

    let s_inf = [0, 1].map(|i| vals[i].iter().map(|&v| v as i64).sum::<i64>());
    check(BranchPoint::Infinity, s_inf, chi_lc);
    for t in k.elements() {
        let ti = t.index();
        let s = [0, 1].map(|i| vals[i][ti] as i64 * (1 + corr[i][ti]));
        check(BranchPoint::Finite(t), s, chi_lc * vals[0][ti] as i64 * vals[1][ti] as i64);
    }
    scan.branch_points = q + 1;
    if !scan.witnesses.is_empty() {
        scan.outcome = ScanOutcome::Witness;
    }
    Ok(scan)
}

/// `out[t] = sum_y chi(y - t) v[y]` for every `t`.
fn correlate(cf: &CountingField, v: &[i8]) -> Vec<i64> {
    let k = cf.spec();
    let q = cf.q() as usize;
    if k.n() == 1 {
        // chi(y - t) = ext[y - t + q] with ext the table repeated twice.
        let chi = cf.chi_table();
        let mut ext = Vec::with_capacity(2 * q);
        ext.extend_from_slice(chi);
        ext.extend_from_slice(chi);
        (0..q)
            .map(|t| {
                let window = &ext[q - t..2 * q - t];
                window.iter().zip(v).map(|(&a, &b)| a as i32 * b as i32).sum::<i32>() as i64
            })
            .collect()
    } else {
        k.elements().map(|t| k.elements().zip(v).map(|(y, &b)| cf.chi(k.sub(y, t)) as i64 * b as i64).sum()).collect()
    }
}

/// Builds the synthetic control sextic: `h1 = x^3 + ax + b` for the least
/// maximal model with an irreducible cubic, `h2` its rescaling by the
/// generator (`x -> g^2 x`), which is a different cubic for an isomorphic
/// curve. Both quotients are maximal by construction.
pub fn planted_genus4_sextic(cf: &CountingField) -> Result<(Poly, EllipticModel, EllipticModel), SearchError> {
    let k = cf.spec();
    let best = find_optimal_elliptic(cf, Side::Maximal)?;
    let e1 = best.model;
    if !e1.cubic().roots(k).is_empty() {
        return Err(SearchError::ReducibleCubic { q: cf.q() });
    }
    let g = cf.generator();
    let g2 = k.sqr(g);
    let g4 = k.sqr(g2);
    let e2 = EllipticModel { a: k.mul(e1.a, g4), b: k.mul(e1.b, k.mul(g4, g2)) };
    Ok((e1.cubic().mul(k, &e2.cubic()), e1, e2))
}

/// The three quintic families tested by [`superelliptic_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum QuinticFamily {
    /// `z^5 = gamma x^nu1 (x^2 + ax + b)^nu2`, `nu1 + 2 nu2 != 0 mod 5`.
    LinearQuadratic,
    /// `z^5 = gamma (x^3 + ax + b)^nu`.
    Cubic,
    /// `z^5 = gamma (x^2 + ax + b)^nu1 (x^2 + c)^nu2`, `nu1 + nu2 = 0 mod 5`.
    TwoQuadratics,
}

impl QuinticFamily {
    pub const ALL: [QuinticFamily; 3] =
        [QuinticFamily::LinearQuadratic, QuinticFamily::Cubic, QuinticFamily::TwoQuadratics];

    /// Number of rational branch points, hence the residue of every count
    /// mod 5 when `q = 1 mod 5`.
    pub fn rational_branch_points(self) -> u64 {
        match self {
            QuinticFamily::LinearQuadratic => 2,
            QuinticFamily::Cubic => 1,
            QuinticFamily::TwoQuadratics => 0,
        }
    }

    /// Exponent tuples allowed by the family's side condition.
    pub fn exponents(self) -> Vec<[u8; 2]> {
        let mut out = Vec::new();
        for n1 in 1..=4u8 {
            match self {
                QuinticFamily::Cubic => out.push([n1, 0]),
                _ => {
                    for n2 in 1..=4u8 {
                        let keep = match self {
                            QuinticFamily::LinearQuadratic => (n1 + 2 * n2) % 5 != 0,
                            _ => (n1 + n2) % 5 == 0,
                        };
                        if keep {
                            out.push([n1, n2]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// One counted family member: `params` are `(a, b)`, `(a, b)` or `(a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuinticInstance {
    pub family: QuinticFamily,
    pub gamma: FieldElement,
    pub params: Vec<FieldElement>,
    pub exponents: [u8; 2],
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuperellipticOptions {
    /// Sweep every `gamma` in `F_q^*` rather than one per quintic class.
    pub full_gamma: bool,
    /// Keep every counted instance (small `q` cross-checks).
    pub collect: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyTally {
    pub models: u64,
    /// Counts by residue mod 5.
    pub residues: [u64; 5],
    /// Counts off the expected residue (`q = 1 mod 5`) or off `q + 1`
    /// (otherwise).
    pub congruence_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuperellipticScan {
    pub q: u64,
    pub d: i64,
    pub outcome: ScanOutcome,
    pub full_gamma: bool,
    pub gammas: Vec<FieldElement>,
    pub families: Vec<(QuinticFamily, FamilyTally)>,
    pub witnesses: Vec<QuinticInstance>,
    pub instances: Vec<QuinticInstance>,
}

/// Quintic superelliptic scan for one field with `d = -19`.
pub fn superelliptic_scan(cf: &CountingField, opts: SuperellipticOptions) -> SuperellipticScan {
    let d = cf.discriminant().d;
    if d != -19 {
        return SuperellipticScan {
            q: cf.q(),
            d,
            outcome: ScanOutcome::Skipped(SkipReason::UnsupportedDiscriminant(d)),
            full_gamma: opts.full_gamma,
            gammas: Vec::new(),
            families: Vec::new(),
            witnesses: Vec::new(),
            instances: Vec::new(),
        };
    }
    superelliptic_sweep(cf, opts)
}

/// The sweep behind [`superelliptic_scan`], for any odd `q`.
///
/// Every fiber size depends only on quintic classes, so each parameter
/// choice is reduced to a histogram of the classes of its factor values
/// (5 or 25 bins); the exponents and `gamma` are then applied to the
/// histogram. A witness is a count equal to `q + 1 +- 4m`.
pub fn superelliptic_sweep(cf: &CountingField, opts: SuperellipticOptions) -> SuperellipticScan {
    let k = cf.spec();
    let q = cf.q();
    let m = cf.m();
    let quintic = cf.has_quintic_classes();
    let gammas: Vec<FieldElement> = if opts.full_gamma {
        k.elements().skip(1).collect()
    } else if quintic {
        let mut g = FieldElement::ONE;
        (0..5)
            .map(|_| {
                let cur = g;
                g = k.mul(g, cf.generator());
                cur
            })
            .collect()
    } else {
        vec![FieldElement::ONE]
    };
    let gamma_classes: Vec<u8> = gammas.iter().map(|&g| cf.quintic(g).unwrap()).collect();
    let fiber = |s: u32| -> u64 {
        if !quintic {
            1
        } else if s.is_multiple_of(5) {
            5
        } else {
            0
        }
    };
    let cls = |x: FieldElement| cf.quintic(x).unwrap_or(0) as u32;
    let hi = q + 1 + 4 * m;
    let lo = (q + 1).checked_sub(4 * m);

    let mut scan = SuperellipticScan {
        q,
        d: cf.discriminant().d,
        outcome: ScanOutcome::Empty,
        full_gamma: opts.full_gamma,
        gammas: gammas.clone(),
        families: Vec::new(),
        witnesses: Vec::new(),
        instances: Vec::new(),
    };

    let record = |scan: &mut SuperellipticScan,
                  tally: &mut FamilyTally,
                  family: QuinticFamily,
                  gamma: FieldElement,
                  params: &[FieldElement],
                  nu: [u8; 2],
                  count: u64| {
        tally.models += 1;
        tally.residues[(count % 5) as usize] += 1;
        let ok = if quintic { count % 5 == family.rational_branch_points() } else { count == q + 1 };
        if !ok {
            tally.congruence_violations += 1;
        }
        let witness = count == hi || Some(count) == lo;
        if witness || opts.collect {
            let inst = QuinticInstance { family, gamma, params: params.to_vec(), exponents: nu, count };
            if witness {
                scan.witnesses.push(inst.clone());
            }
            if opts.collect {
                scan.instances.push(inst);
            }
        }
    };

    let irreducible_quadratic =
        |a: FieldElement, b: FieldElement| cf.chi(k.sub(k.sqr(a), k.mul(k.from_int(4), b))) == -1;

    // Family 1: x = 0 has a single fiber point, infinity is ramified.
    let mut tally = FamilyTally::default();
    let exps = QuinticFamily::LinearQuadratic.exponents();
    for a in k.elements() {
        for b in k.elements() {
            if !irreducible_quadratic(a, b) {
                continue;
            }
            let mut hist = [[0u64; 5]; 5];
            for x in k.elements().skip(1) {
                let v = k.add(k.mul(k.add(x, a), x), b);
                hist[cls(x) as usize][cls(v) as usize] += 1;
            }
            for nu in &exps {
                for (gi, &gamma) in gammas.iter().enumerate() {
                    let cg = gamma_classes[gi] as u32;
                    let mut count = 2; // x = 0 and the point at infinity
                    for (c1, row) in hist.iter().enumerate() {
                        for (c2, &h) in row.iter().enumerate() {
                            if h > 0 {
                                count += h * fiber(cg + nu[0] as u32 * c1 as u32 + nu[1] as u32 * c2 as u32);
                            }
                        }
                    }
                    record(&mut scan, &mut tally, QuinticFamily::LinearQuadratic, gamma, &[a, b], *nu, count);
                }
            }
        }
    }
    scan.families.push((QuinticFamily::LinearQuadratic, tally));

    // Family 2: irreducible cubic, infinity ramified.
    let mut tally = FamilyTally::default();
    let exps = QuinticFamily::Cubic.exponents();
    for a in k.elements() {
        'b: for b in k.elements() {
            let mut hist = [0u64; 5];
            for x in k.elements() {
                let v = k.add(k.mul(k.add(k.sqr(x), a), x), b);
                if v.is_zero() {
                    continue 'b;
                }
                hist[cls(v) as usize] += 1;
            }
            for nu in &exps {
                for (gi, &gamma) in gammas.iter().enumerate() {
                    let cg = gamma_classes[gi] as u32;
                    let mut count = 1;
                    for (c, &h) in hist.iter().enumerate() {
                        if h > 0 {
                            count += h * fiber(cg + nu[0] as u32 * c as u32);
                        }
                    }
                    record(&mut scan, &mut tally, QuinticFamily::Cubic, gamma, &[a, b], *nu, count);
                }
            }
        }
    }
    scan.families.push((QuinticFamily::Cubic, tally));

    // Family 3: no rational branch points, infinity unramified.
    let mut tally = FamilyTally::default();
    let exps = QuinticFamily::TwoQuadratics.exponents();
    let z = FieldElement::ZERO;
    for a in k.elements() {
        for b in k.elements() {
            if !irreducible_quadratic(a, b) {
                continue;
            }
            for c in k.elements() {
                if !irreducible_quadratic(z, c) || (a.is_zero() && b == c) {
                    continue;
                }
                let mut hist = [[0u64; 5]; 5];
                for x in k.elements() {
                    let x2 = k.sqr(x);
                    let v1 = k.add(k.add(x2, k.mul(a, x)), b);
                    let v2 = k.add(x2, c);
                    hist[cls(v1) as usize][cls(v2) as usize] += 1;
                }
                for nu in &exps {
                    for (gi, &gamma) in gammas.iter().enumerate() {
                        let cg = gamma_classes[gi] as u32;
                        // w^5 = gamma over infinity
                        let mut count = fiber(cg);
                        for (c1, row) in hist.iter().enumerate() {
                            for (c2, &h) in row.iter().enumerate() {
                                if h > 0 {
                                    count += h * fiber(cg + nu[0] as u32 * c1 as u32 + nu[1] as u32 * c2 as u32);
                                }
                            }
                        }
                        record(&mut scan, &mut tally, QuinticFamily::TwoQuadratics, gamma, &[a, b, c], *nu, count);
                    }
                }
            }
        }
    }
    scan.families.push((QuinticFamily::TwoQuadratics, tally));

    if !scan.witnesses.is_empty() {
        scan.outcome = ScanOutcome::Witness;
    }
    scan
}

/// Printed elliptic table row: the maximal and minimal models `[a, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EllipticFixture {
    pub q: u64,
    pub maximal: [u64; 2],
    pub minimal: [u64; 2],
    /// Replacement entries proposed where the printed row fails.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub erratum_maximal: Option<[u64; 2]>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub erratum_minimal: Option<[u64; 2]>,
}

/// Printed genus-2 table row: base `[a, b]`, cover `(alpha, beta)` and the
/// even sextic `alpha' u^6 + beta' u^4 + gamma' u^2 + delta'`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Genus2Fixture {
    pub q: u64,
    pub base: [u64; 2],
    pub cover: [u64; 2],
    pub sextic: [u64; 4],
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub erratum_sextic: Option<[u64; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelCheck {
    pub model: [u64; 2],
    pub count: Option<u64>,
    pub expected: u64,
    pub pass: bool,
    /// Isomorphic to the class found by the exhaustive search.
    pub isomorphic_to_found: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EllipticRowReport {
    pub q: u64,
    pub m: u64,
    pub d: i64,
    pub maximal: ModelCheck,
    pub minimal: ModelCheck,
    pub found_maximal: EllipticModel,
    pub found_minimal: EllipticModel,
    pub unique_maximal: bool,
    pub unique_minimal: bool,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub erratum_maximal: Option<ModelCheck>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub erratum_minimal: Option<ModelCheck>,
}

impl EllipticRowReport {
    pub fn pass(&self) -> bool {
        self.maximal.pass && self.minimal.pass && self.maximal.isomorphic_to_found && self.minimal.isomorphic_to_found
    }
}

fn model_from(k: &FieldSpec, v: [u64; 2]) -> Option<EllipticModel> {
    let a = k.element(v[0]).ok()?;
    let b = k.element(v[1]).ok()?;
    EllipticModel::new(k, a, b).ok()
}

fn check_model(cf: &CountingField, v: [u64; 2], side: Side, found: &EllipticModel) -> Result<ModelCheck, SearchError> {
    let expected = (cf.q() as i64 + 1 + side.sign() * cf.m() as i64) as u64;
    let Some(e) = model_from(cf.spec(), v) else {
        return Ok(ModelCheck { model: v, count: None, expected, pass: false, isomorphic_to_found: false });
    };
    let count = ec_count(cf, &e)?.count;
    Ok(ModelCheck {
        model: v,
        count: Some(count),
        expected,
        pass: count == expected,
        isomorphic_to_found: ec_isomorphic(cf, &e, found)?,
    })
}

/// Recounts a printed elliptic row and compares it with the search.
pub fn check_elliptic_row(cf: &CountingField, row: &EllipticFixture) -> Result<EllipticRowReport, SearchError> {
    let max = find_optimal_elliptic(cf, Side::Maximal)?;
    let min = find_optimal_elliptic(cf, Side::Minimal)?;
    let erratum = |v: Option<[u64; 2]>, side, found| -> Result<Option<ModelCheck>, SearchError> {
        v.map(|v| check_model(cf, v, side, found)).transpose()
    };
    Ok(EllipticRowReport {
        q: cf.q(),
        m: cf.m(),
        d: cf.discriminant().d,
        maximal: check_model(cf, row.maximal, Side::Maximal, &max.model)?,
        minimal: check_model(cf, row.minimal, Side::Minimal, &min.model)?,
        erratum_maximal: erratum(row.erratum_maximal, Side::Maximal, &max.model)?,
        erratum_minimal: erratum(row.erratum_minimal, Side::Minimal, &min.model)?,
        found_maximal: max.model,
        found_minimal: min.model,
        unique_maximal: max.unique,
        unique_minimal: min.unique,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SexticCheck {
    pub sextic: [u64; 4],
    pub count: Option<u64>,
    pub expected: u64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Genus2RowReport {
    pub q: u64,
    pub m: u64,
    pub listed: SexticCheck,
    /// Count of the printed quartic cover `y^2 = f(x)(alpha x + beta)`.
    pub listed_cover_count: Option<u64>,
    /// Gluing with the printed `(alpha, beta)`.
    pub glued_listed: Option<[u64; 4]>,
    pub glued_listed_twisted: bool,
    /// The printed sextic is a square multiple of the glued one.
    pub listed_matches_glue: bool,
    /// Gluing from our own search.
    pub found: GluingResult,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub erratum: Option<SexticCheck>,
}

impl Genus2RowReport {
    pub fn pass(&self) -> bool {
        self.listed.pass
    }
}

fn even_sextic(k: &FieldSpec, s: [u64; 4]) -> Option<Poly> {
    let e = |v| k.element(v).ok();
    let z = FieldElement::ZERO;
    Some(Poly::new(vec![e(s[3])?, z, e(s[2])?, z, e(s[1])?, z, e(s[0])?]))
}

fn check_sextic(cf: &CountingField, s: [u64; 4]) -> SexticCheck {
    let expected = cf.q() + 1 + 2 * cf.m();
    let count = even_sextic(cf.spec(), s)
        .and_then(|f| HyperellipticModel::new(cf.spec(), f).ok())
        .and_then(|h| hyperelliptic_count(cf, &h).ok())
        .map(|c| c.count);
    SexticCheck { sextic: s, count, expected, pass: count == Some(expected) }
}

/// Recounts a printed genus-2 row, re-glues it from its printed cover and
/// runs an independent gluing search.
pub fn check_genus2_row(cf: &CountingField, row: &Genus2Fixture) -> Result<Genus2RowReport, SearchError> {
    let k = cf.spec();
    let listed = check_sextic(cf, row.sextic);
    let base = model_from(k, row.base);
    let mut listed_cover_count = None;
    let mut glued_listed = None;
    let mut glued_listed_twisted = false;
    let mut listed_matches_glue = false;
    if let (Some(e), Ok(alpha), Ok(beta)) = (base, k.element(row.cover[0]), k.element(row.cover[1])) {
        if let Ok(g) = glue_at(cf, &e, alpha, beta) {
            listed_cover_count = Some(g.quartic_count);
            glued_listed = Some(g.even_coefficients());
            glued_listed_twisted = g.twisted;
            if let Some(f) = even_sextic(k, row.sextic) {
                listed_matches_glue = square_multiple(cf, &f, g.c2.poly());
            }
        }
    }
    let found_base = find_optimal_elliptic(cf, Side::Maximal)?;
    let found = glue_genus2(cf, &found_base.model)?;
    Ok(Genus2RowReport {
        q: cf.q(),
        m: cf.m(),
        listed,
        listed_cover_count,
        glued_listed,
        glued_listed_twisted,
        listed_matches_glue,
        found,
        erratum: row.erratum_sextic.map(|s| check_sextic(cf, s)),
    })
}

/// `f = lambda^2 g` for some nonzero `lambda`.
fn square_multiple(cf: &CountingField, f: &Poly, g: &Poly) -> bool {
    let k = cf.spec();
    if f.degree() != g.degree() || f.is_zero() {
        return false;
    }
    let ratio = k.div(f.lc(), g.lc()).expect("nonzero leading coefficient");
    cf.chi(ratio) == 1 && g.scale(k, ratio) == *f
}

/// The j-invariant classes an optimal search hits, for reports.
pub fn j_invariant(cf: &CountingField, e: &EllipticModel) -> Result<FieldElement, SearchError> {
    Ok(ec_j_invariant(cf.spec(), e)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(q: u64) -> CountingField {
        CountingField::with_order(q).unwrap()
    }

    #[test]
    fn optimal_elliptic_at_23() {
        let k = cf(23);
        let s = k.spec();
        let max = find_optimal_elliptic(&k, Side::Maximal).unwrap();
        assert_eq!(max.count, 33);
        assert!(max.unique);
        let listed = EllipticModel::new(s, s.from_int(1), s.from_int(11)).unwrap();
        assert!(ec_isomorphic(&k, &max.model, &listed).unwrap());
    }

    #[test]
    fn class_mass_formula() {
        // sum over classes of 1/#Aut = q, i.e. sum of orbit sizes (q-1)/#Aut
        // over nonsingular (a, b) equals q(q-1).
        for q in [23u64, 29, 31, 37] {
            let k = cf(q);
            let s = k.spec();
            let classes = isomorphism_classes(&k).unwrap();
            let mut orbit_total = 0u64;
            for c in &classes {
                let e = c.representative;
                let orbit: u64 = s
                    .elements()
                    .skip(1)
                    .filter(|&u| {
                        let u2 = s.sqr(u);
                        let u4 = s.sqr(u2);
                        // stabilizer elements: u^4 a = a and u^6 b = b
                        s.mul(u4, e.a) == e.a && s.mul(s.mul(u4, u2), e.b) == e.b
                    })
                    .count() as u64;
                orbit_total += (q - 1) / orbit;
            }
            assert_eq!(orbit_total, q * (q - 1), "q = {q}");
        }
    }

    #[test]
    fn gluing_reproduces_q23_sextic() {
        let k = cf(23);
        let s = k.spec();
        let e = EllipticModel::new(s, s.from_int(1), s.from_int(11)).unwrap();
        let g = glue_at(&k, &e, s.from_int(1), s.from_int(19)).unwrap();
        assert_eq!(g.even_coefficients(), [1, 12, 3, 10]);
        assert_eq!(g.count, 42);
        assert!(!g.twisted);
    }

    #[test]
    fn genus4_scan_at_23_is_empty() {
        let scan = genus4_obstruction_scan(&cf(23)).unwrap();
        assert_eq!(scan.outcome, ScanOutcome::Empty);
        assert_eq!(scan.shape, [3, 3]);
        assert_eq!(scan.branch_points, 24);
    }

    #[test]
    fn planted_witness_is_found() {
        let k = cf(79);
        assert!(!crate::ff::is_supported_discriminant(k.discriminant().d));
        let (sextic, _, _) = planted_genus4_sextic(&k).unwrap();
        let scan = genus4_scan_sextic(&k, &sextic).unwrap();
        assert_eq!(scan.outcome, ScanOutcome::Witness);
        assert!(scan
            .witnesses
            .iter()
            .any(|w| w.t == BranchPoint::Infinity && w.side == Side::Maximal && w.twist == [false, false]));
    }

    #[test]
    fn skips_characteristic_three() {
        let k = cf(243);
        assert_eq!(k.discriminant().d, -11);
        let scan = genus4_obstruction_scan(&k).unwrap();
        assert_eq!(scan.outcome, ScanOutcome::Skipped(SkipReason::CharacteristicThree));
    }

    #[test]
    fn superelliptic_at_47_is_rational() {
        let scan = superelliptic_scan(&cf(47), SuperellipticOptions::default());
        assert_eq!(scan.outcome, ScanOutcome::Empty);
        for (_, t) in &scan.families {
            assert!(t.models > 0);
            assert_eq!(t.congruence_violations, 0);
        }
    }
}
