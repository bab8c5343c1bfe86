//! Exact arithmetic over the rings of integers `O_K` of the six class-number-one
//! imaginary quadratic fields, and hermitian Gram matrices over them.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ff::is_supported_discriminant;

/// Hard cap on the size of a generated group.
pub const CLOSURE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HermError {
    UnsupportedDiscriminant(i64),
    MixedDiscriminants(i64, i64),
    Overflow,
    /// Exact division with a nonzero remainder, or division by zero.
    NotDivisible,
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    NotSquare {
        rows: usize,
        row: usize,
        len: usize,
    },
    IndexOutOfRange {
        index: usize,
        dim: usize,
    },
    NotAutomorphism(String),
    ClosureLimit(usize),
    UnknownGenerator(String),
    MalformedRelation(String),
}

impl fmt::Display for HermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HermError::UnsupportedDiscriminant(d) => write!(f, "unsupported discriminant {d}"),
            HermError::MixedDiscriminants(a, b) => {
                write!(f, "operands over different rings (d = {a} and d = {b})")
            }
            HermError::Overflow => write!(f, "integer overflow in O_K arithmetic"),
            HermError::NotDivisible => write!(f, "inexact division in O_K"),
            HermError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            HermError::NotSquare { rows, row, len } => {
                write!(f, "row {row} has {len} entries in a matrix with {rows} rows")
            }
            HermError::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} outside 1..={dim}")
            }
            HermError::NotAutomorphism(name) => write!(f, "generator {name} is not an automorphism"),
            HermError::ClosureLimit(n) => write!(f, "group closure exceeded {n} elements"),
            HermError::UnknownGenerator(name) => write!(f, "unknown generator {name}"),
            HermError::MalformedRelation(msg) => write!(f, "malformed relation: {msg}"),
        }
    }
}

/// `a + b w` in `O_K`, with `w = (1 + sqrt d)/2` for `d = 1 mod 4` and
/// `w = sqrt(d/4)` for `d = 0 mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
    d: i64,
}

impl QuadInt {
    pub fn new(a: i64, b: i64, d: i64) -> Result<Self, HermError> {
        if !is_supported_discriminant(d) {
            return Err(HermError::UnsupportedDiscriminant(d));
        }
        Ok(QuadInt { a, b, d })
    }

    pub fn int(a: i64, d: i64) -> Result<Self, HermError> {
        Self::new(a, 0, d)
    }

    #[inline]
    pub fn d(&self) -> i64 {
        self.d
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// The rational integer value, if the `w` part vanishes.
    pub fn as_integer(&self) -> Option<i64> {
        (self.b == 0).then_some(self.a)
    }

    fn same_ring(&self, o: &QuadInt) -> Result<(), HermError> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(HermError::MixedDiscriminants(self.d, o.d))
        }
    }

    fn zero_like(&self) -> QuadInt {
        QuadInt { a: 0, b: 0, d: self.d }
    }

    pub fn add(&self, o: &QuadInt) -> Result<QuadInt, HermError> {
        self.same_ring(o)?;
        Ok(QuadInt {
            a: self.a.checked_add(o.a).ok_or(HermError::Overflow)?,
            b: self.b.checked_add(o.b).ok_or(HermError::Overflow)?,
            d: self.d,
        })
    }

    pub fn neg(&self) -> Result<QuadInt, HermError> {
        Ok(QuadInt {
            a: self.a.checked_neg().ok_or(HermError::Overflow)?,
            b: self.b.checked_neg().ok_or(HermError::Overflow)?,
            d: self.d,
        })
    }

    pub fn sub(&self, o: &QuadInt) -> Result<QuadInt, HermError> {
        self.add(&o.neg()?)
    }

    pub fn mul(&self, o: &QuadInt) -> Result<QuadInt, HermError> {
        self.same_ring(o)?;
        let m = |x: i64, y: i64| x.checked_mul(y).ok_or(HermError::Overflow);
        let s = |x: i64, y: i64| x.checked_add(y).ok_or(HermError::Overflow);
        let ac = m(self.a, o.a)?;
        let cross = s(m(self.a, o.b)?, m(self.b, o.a)?)?;
        let bb = m(self.b, o.b)?;
        // w^2 = w + (d - 1)/4, or w^2 = d/4
        let (a, b) = if self.d.rem_euclid(4) == 1 {
            (s(ac, m(bb, (self.d - 1) / 4)?)?, s(cross, bb)?)
        } else {
            (s(ac, m(bb, self.d / 4)?)?, cross)
        };
        Ok(QuadInt { a, b, d: self.d })
    }

    pub fn conj(&self) -> Result<QuadInt, HermError> {
        let a = if self.d.rem_euclid(4) == 1 { self.a.checked_add(self.b).ok_or(HermError::Overflow)? } else { self.a };
        Ok(QuadInt { a, b: self.b.checked_neg().ok_or(HermError::Overflow)?, d: self.d })
    }

    /// `x conj(x)`, a non-negative rational integer.
    pub fn norm(&self) -> Result<i64, HermError> {
        let n = self.mul(&self.conj()?)?;
        debug_assert_eq!(n.b, 0);
        Ok(n.a)
    }

    /// Exact quotient `self / o`, failing unless `o` divides `self` in `O_K`.
    pub fn div_exact(&self, o: &QuadInt) -> Result<QuadInt, HermError> {
        self.same_ring(o)?;
        let n = o.norm()?;
        if n == 0 {
            return Err(HermError::NotDivisible);
        }
        let t = self.mul(&o.conj()?)?;
        if t.a % n != 0 || t.b % n != 0 {
            return Err(HermError::NotDivisible);
        }
        Ok(QuadInt { a: t.a / n, b: t.b / n, d: self.d })
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "w"),
            (0, -1) => write!(f, "-w"),
            (0, b) => write!(f, "{b}w"),
            (a, 1) => write!(f, "{a}+w"),
            (a, -1) => write!(f, "{a}-w"),
            (a, b) if b < 0 => write!(f, "{a}{b}w"),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

/// Square matrix over `O_K`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OKMatrix {
    d: i64,
    n: usize,
    entries: Vec<QuadInt>,
}

impl OKMatrix {
    /// From rows of `[a, b]` pairs.
    pub fn from_pairs(d: i64, rows: &[Vec<[i64; 2]>]) -> Result<Self, HermError> {
        if !is_supported_discriminant(d) {
            return Err(HermError::UnsupportedDiscriminant(d));
        }
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(HermError::NotSquare { rows: n, row: i, len: row.len() });
            }
            entries.extend(row.iter().map(|&[a, b]| QuadInt { a, b, d }));
        }
        Ok(OKMatrix { d, n, entries })
    }

    pub fn identity(d: i64, n: usize) -> Result<Self, HermError> {
        Self::scalar(d, n, 1)
    }

    pub fn scalar(d: i64, n: usize, c: i64) -> Result<Self, HermError> {
        if !is_supported_discriminant(d) {
            return Err(HermError::UnsupportedDiscriminant(d));
        }
        let mut entries = vec![QuadInt { a: 0, b: 0, d }; n * n];
        for i in 0..n {
            entries[i * n + i] = QuadInt { a: c, b: 0, d };
        }
        Ok(OKMatrix { d, n, entries })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> i64 {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> QuadInt {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn to_pairs(&self) -> Vec<Vec<[i64; 2]>> {
        (0..self.n).map(|i| (0..self.n).map(|j| [self.get(i, j).a, self.get(i, j).b]).collect()).collect()
    }

    fn compatible(&self, o: &OKMatrix) -> Result<(), HermError> {
        if self.d != o.d {
            return Err(HermError::MixedDiscriminants(self.d, o.d));
        }
        if self.n != o.n {
            return Err(HermError::DimensionMismatch { expected: self.n, found: o.n });
        }
        Ok(())
    }

    pub fn mul(&self, o: &OKMatrix) -> Result<OKMatrix, HermError> {
        self.compatible(o)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = QuadInt { a: 0, b: 0, d: self.d };
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(&o.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(OKMatrix { d: self.d, n, entries })
    }

    pub fn neg(&self) -> Result<OKMatrix, HermError> {
        let entries = self.entries.iter().map(QuadInt::neg).collect::<Result<_, _>>()?;
        Ok(OKMatrix { d: self.d, n: self.n, entries })
    }

    pub fn scale(&self, c: i64) -> Result<OKMatrix, HermError> {
        let c = QuadInt { a: c, b: 0, d: self.d };
        let entries = self.entries.iter().map(|x| x.mul(&c)).collect::<Result<_, _>>()?;
        Ok(OKMatrix { d: self.d, n: self.n, entries })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Result<OKMatrix, HermError> {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).conj()?);
            }
        }
        Ok(OKMatrix { d: self.d, n, entries })
    }

    pub fn pow(&self, e: u64) -> Result<OKMatrix, HermError> {
        let mut acc = OKMatrix::identity(self.d, self.n)?;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar(1)
    }

    pub fn is_scalar(&self, c: i64) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                x.b == 0 && x.a == if i == j { c } else { 0 }
            })
        })
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn det(&self) -> Result<QuadInt, HermError> {
        let n = self.n;
        let one = QuadInt { a: 1, b: 0, d: self.d };
        if n == 0 {
            return Ok(one);
        }
        let mut m: Vec<Vec<QuadInt>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect();
        let mut sign_flip = false;
        let mut prev = one;
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(one.zero_like()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = m[i][j].mul(&m[k][k])?.sub(&m[i][k].mul(&m[k][j])?)?;
                    m[i][j] = t.div_exact(&prev)?;
                }
            }
            prev = m[k][k];
        }
        let det = m[n - 1][n - 1];
        if sign_flip {
            det.neg()
        } else {
            Ok(det)
        }
    }

    /// The matrix with row and column `k` (0-based) removed.
    pub fn minor(&self, k: usize) -> OKMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != k) {
            for j in (0..n).filter(|&j| j != k) {
                entries.push(self.get(i, j));
            }
        }
        OKMatrix { d: self.d, n: n - 1, entries }
    }

    /// Leading `r x r` block.
    pub fn leading(&self, r: usize) -> OKMatrix {
        let mut entries = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                entries.push(self.get(i, j));
            }
        }
        OKMatrix { d: self.d, n: r, entries }
    }

    /// Compact hashable key for closure bookkeeping.
    fn key(&self) -> Vec<i64> {
        self.entries.iter().flat_map(|x| [x.a, x.b]).collect()
    }
}

/// A hermitian Gram matrix, built from its lower triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianForm {
    gram: OKMatrix,
}

impl HermitianForm {
    /// `lower[i]` holds entries `(i, 0) ..= (i, i)`; the upper triangle is
    /// filled with conjugates.
    pub fn from_lower(d: i64, lower: &[Vec<[i64; 2]>]) -> Result<Self, HermError> {
        let n = lower.len();
        let mut gram = OKMatrix::scalar(d, n, 0)?;
        for (i, row) in lower.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(HermError::NotSquare { rows: n, row: i, len: row.len() });
            }
            for (j, &[a, b]) in row.iter().enumerate() {
                let x = QuadInt { a, b, d };
                gram.set(i, j, x);
                if i != j {
                    gram.set(j, i, x.conj()?);
                }
            }
        }
        Ok(HermitianForm { gram })
    }

    /// Takes a full matrix as given; [`herm_validate`] reports whether it is
    /// actually hermitian.
    pub fn from_matrix(gram: OKMatrix) -> Self {
        HermitianForm { gram }
    }

    pub fn identity(d: i64, n: usize) -> Result<Self, HermError> {
        Ok(HermitianForm { gram: OKMatrix::identity(d, n)? })
    }

    pub fn gram(&self) -> &OKMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.n
    }

    pub fn d(&self) -> i64 {
        self.gram.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FormReport {
    pub hermitian: bool,
    /// `None` when the determinant is not a rational integer.
    pub det: Option<i64>,
    pub unimodular: bool,
    pub positive_definite: bool,
    pub leading_minors: Vec<Option<i64>>,
    /// The Gram matrix is block diagonal in the given basis, so the module
    /// is an orthogonal sum. Informational only: the converse needs a basis
    /// search.
    pub decomposable_in_basis: bool,
}

impl FormReport {
    pub fn valid_unimodular(&self) -> bool {
        self.hermitian && self.unimodular && self.positive_definite
    }
}

/// Checks hermitian symmetry, real positive diagonal, determinant and the
/// leading principal minors.
pub fn herm_validate(h: &HermitianForm) -> Result<FormReport, HermError> {
    let g = h.gram();
    let n = g.dim();
    let mut hermitian = true;
    for i in 0..n {
        let x = g.get(i, i);
        if x.b != 0 || x.a <= 0 {
            hermitian = false;
        }
        for j in 0..i {
            if g.get(j, i) != g.get(i, j).conj()? {
                hermitian = false;
            }
        }
    }
    let det = g.det()?.as_integer();
    let leading_minors: Vec<Option<i64>> =
        (1..=n).map(|r| g.leading(r).det().map(|x| x.as_integer())).collect::<Result<_, _>>()?;
    let positive_definite = hermitian && leading_minors.iter().all(|m| m.is_some_and(|v| v > 0));
    Ok(FormReport {
        hermitian,
        det,
        unimodular: det == Some(1),
        positive_definite,
        leading_minors,
        decomposable_in_basis: block_diagonal(g),
    })
}

fn block_diagonal(g: &OKMatrix) -> bool {
    let n = g.dim();
    if n < 2 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for (j, s) in seen.iter_mut().enumerate() {
            if !*s && !g.get(i, j).is_zero() {
                *s = true;
                stack.push(j);
            }
        }
    }
    seen.iter().any(|s| !s)
}

/// Degree of the projection onto the `k`-th elliptic factor: the determinant
/// of the Gram minor with row and column `k` deleted (`k` is 1-based).
pub fn projection_degree(h: &HermitianForm, k: usize) -> Result<i64, HermError> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(HermError::IndexOutOfRange { index: k, dim: n });
    }
    h.gram().minor(k - 1).det()?.as_integer().ok_or(HermError::NotDivisible)
}

/// `A H A^* = H`.
///
/// Generators act on row vectors (`x -> x A`), the convention under which
/// the printed appendix generators preserve their forms.
pub fn is_automorphism(h: &HermitianForm, a: &OKMatrix) -> Result<bool, HermError> {
    let g = h.gram();
    g.compatible(a)?;
    Ok(a.mul(g)?.mul(&a.adjoint()?)? == *g)
}

/// `A^* H A = H`, the column-vector convention.
pub fn is_automorphism_columns(h: &HermitianForm, a: &OKMatrix) -> Result<bool, HermError> {
    let g = h.gram();
    g.compatible(a)?;
    Ok(a.adjoint()?.mul(g)?.mul(a)? == *g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Value {
    Mat(OKMatrix),
    Int(i64),
}

/// Evaluates one side of a relation in postfix notation: generator names,
/// integers, `*` and `^` (`base exp ^`). A bare integer `c` stands for `c I`.
pub fn eval_postfix(expr: &str, gens: &BTreeMap<String, OKMatrix>, d: i64, n: usize) -> Result<OKMatrix, HermError> {
    let bad = |m: &str| HermError::MalformedRelation(alloc::format!("{m} in `{expr}`"));
    let mut stack: Vec<Value> = Vec::new();
    for tok in expr.split_whitespace() {
        match tok {
            "*" => {
                let r = stack.pop().ok_or_else(|| bad("missing operand for *"))?;
                let l = stack.pop().ok_or_else(|| bad("missing operand for *"))?;
                stack.push(match (l, r) {
                    (Value::Mat(x), Value::Mat(y)) => Value::Mat(x.mul(&y)?),
                    (Value::Int(c), Value::Mat(y)) | (Value::Mat(y), Value::Int(c)) => Value::Mat(y.scale(c)?),
                    (Value::Int(x), Value::Int(y)) => Value::Int(x.checked_mul(y).ok_or(HermError::Overflow)?),
                });
            }
            "^" => {
                let e = match stack.pop() {
                    Some(Value::Int(e)) if e >= 0 => e as u64,
                    _ => return Err(bad("exponent must be a non-negative integer")),
                };
                let base = stack.pop().ok_or_else(|| bad("missing base for ^"))?;
                stack.push(match base {
                    Value::Mat(m) => Value::Mat(m.pow(e)?),
                    Value::Int(c) => Value::Int(
                        c.checked_pow(u32::try_from(e).map_err(|_| HermError::Overflow)?).ok_or(HermError::Overflow)?,
                    ),
                });
            }
            t => {
                if let Ok(c) = t.parse::<i64>() {
                    stack.push(Value::Int(c));
                } else {
                    let m = gens.get(t).ok_or_else(|| HermError::UnknownGenerator(t.to_string()))?;
                    stack.push(Value::Mat(m.clone()));
                }
            }
        }
    }
    match (stack.pop(), stack.is_empty()) {
        (Some(Value::Mat(m)), true) => {
            if m.dim() != n {
                return Err(HermError::DimensionMismatch { expected: n, found: m.dim() });
            }
            Ok(m)
        }
        (Some(Value::Int(c)), true) => OKMatrix::scalar(d, n, c),
        (None, _) => Err(bad("empty expression")),
        _ => Err(bad("leftover operands")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RelationCheck {
    pub relation: String,
    pub pass: bool,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub error: Option<String>,
}

/// Checks a relation `E1 = E2 = ...`: every adjacent pair must agree.
pub fn check_relation(relation: &str, gens: &BTreeMap<String, OKMatrix>, d: i64, n: usize) -> RelationCheck {
    let sides: Vec<&str> = relation.split('=').map(str::trim).collect();
    let result = (|| {
        if sides.len() < 2 {
            return Err(HermError::MalformedRelation(alloc::format!("no `=` in `{relation}`")));
        }
        let values = sides.iter().map(|s| eval_postfix(s, gens, d, n)).collect::<Result<Vec<_>, _>>()?;
        Ok(values.windows(2).all(|w| w[0] == w[1]))
    })();
    match result {
        Ok(pass) => RelationCheck { relation: relation.to_string(), pass, error: None },
        Err(e) => RelationCheck { relation: relation.to_string(), pass: false, error: Some(e.to_string()) },
    }
}

pub fn verify_relations(
    relations: &[String],
    gens: &BTreeMap<String, OKMatrix>,
    d: i64,
    n: usize,
) -> Vec<RelationCheck> {
    relations.iter().map(|r| check_relation(r, gens, d, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupClosureReport {
    /// `#<gens, -I>`.
    pub order: u64,
    /// Order of the image in `GL / {+-I}`.
    pub quotient_order: u64,
    pub contains_minus_identity: bool,
    pub has_klein_four: bool,
    pub has_order_5: bool,
    /// Element orders in the group.
    pub order_histogram: BTreeMap<u64, u64>,
    /// Element orders in the quotient mod `+-I`.
    pub quotient_order_histogram: BTreeMap<u64, u64>,
}

/// Breadth-first closure of `<gens, -I>`; every generator must preserve `h`.
pub fn group_closure(h: &HermitianForm, gens: &[(String, OKMatrix)]) -> Result<GroupClosureReport, HermError> {
    group_closure_capped(h, gens, CLOSURE_LIMIT)
}

pub fn group_closure_capped(
    h: &HermitianForm,
    gens: &[(String, OKMatrix)],
    limit: usize,
) -> Result<GroupClosureReport, HermError> {
    let d = h.d();
    let n = h.dim();
    for (name, g) in gens {
        if !is_automorphism(h, g)? {
            return Err(HermError::NotAutomorphism(name.clone()));
        }
    }
    let id = OKMatrix::identity(d, n)?;
    let minus = OKMatrix::scalar(d, n, -1)?;
    let mut step: Vec<OKMatrix> = gens.iter().map(|(_, g)| g.clone()).collect();
    step.push(minus.clone());

    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(id.key());
    elements.push(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for s in &step {
            let y = x.mul(s)?;
            if seen.insert(y.key()) {
                if seen.len() > limit {
                    return Err(HermError::ClosureLimit(limit));
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }

    let contains_minus_identity = seen.contains(&minus.key());
    let order = elements.len() as u64;
    let quotient_order = if contains_minus_identity { order / 2 } else { order };

    let mut order_histogram = BTreeMap::new();
    let mut quotient_order_histogram = BTreeMap::new();
    // Involutions of the quotient, one representative per {+-X}.
    let mut involutions: Vec<OKMatrix> = Vec::new();
    let mut inv_seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut has_order_5 = false;
    for x in &elements {
        let (full, proj) = element_orders(x)?;
        *order_histogram.entry(full).or_insert(0) += 1;
        // each quotient element is hit twice when -I is present
        *quotient_order_histogram.entry(proj).or_insert(0) += 1;
        if proj == 5 {
            has_order_5 = true;
        }
        if proj == 2 && !inv_seen.contains(&x.neg()?.key()) {
            inv_seen.insert(x.key());
            involutions.push(x.clone());
        }
    }
    if contains_minus_identity {
        for v in quotient_order_histogram.values_mut() {
            *v /= 2;
        }
    }

    let mut has_klein_four = false;
    'outer: for (i, x) in involutions.iter().enumerate() {
        for y in &involutions[i + 1..] {
            let xy = x.mul(y)?;
            let yx = y.mul(x)?;
            if xy == yx || xy == yx.neg()? {
                has_klein_four = true;
                break 'outer;
            }
        }
    }

    Ok(GroupClosureReport {
        order,
        quotient_order,
        contains_minus_identity,
        has_klein_four,
        has_order_5,
        order_histogram,
        quotient_order_histogram,
    })
}

/// Order of `x` and of its image mod `+-I`.
fn element_orders(x: &OKMatrix) -> Result<(u64, u64), HermError> {
    let mut p = x.clone();
    let mut k = 1u64;
    let mut proj = None;
    loop {
        if proj.is_none() && (p.is_scalar(1) || p.is_scalar(-1)) {
            proj = Some(k);
        }
        if p.is_identity() {
            return Ok((k, proj.unwrap_or(k)));
        }
        p = p.mul(x)?;
        k += 1;
        if k > CLOSURE_LIMIT as u64 {
            return Err(HermError::ClosureLimit(CLOSURE_LIMIT));
        }
    }
}
