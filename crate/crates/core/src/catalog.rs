//! In-memory form of the lattice and fixture catalog. Parsing and checksum
//! verification of the data file live in the `optcurve` crate.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::hermitian::{HermError, HermitianForm, OKMatrix};
use crate::search::{EllipticFixture, Genus2Fixture};

/// A positive integer as a list of `[prime, exponent]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Factored(pub Vec<[u64; 2]>);

impl Factored {
    pub fn value(&self) -> u128 {
        self.0.iter().fold(1u128, |acc, &[p, e]| acc * (p as u128).pow(e as u32))
    }

    /// Factors `n` by trial division.
    pub fn of(mut n: u128) -> Self {
        let mut out = Vec::new();
        let mut p = 2u128;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push([p as u64, e]);
            }
            p += 1;
        }
        if n > 1 {
            out.push([n as u64, 1]);
        }
        Factored(out)
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, [p, e]) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// One row of a printed automorphism-order table. An empty `orders` list is
/// a printed dash: no irreducible unimodular module in that dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderRow {
    pub discriminant: i64,
    pub dim: usize,
    pub orders: Vec<Factored>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub flags: Vec<String>,
}

/// An order list quoted in running text rather than a table.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderSet {
    pub id: String,
    pub discriminant: i64,
    pub dim: usize,
    pub orders: Vec<Factored>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExceptionalRow {
    pub p: u64,
    pub genus: u64,
    pub printed_order: Factored,
}

pub type PairRows = Vec<Vec<[i64; 2]>>;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeEntry {
    pub name: String,
    pub discriminant: i64,
    pub dim: usize,
    pub aut_order: Factored,
    /// Row `i` holds the Gram entries `(i, 0) ..= (i, i)`.
    pub gram_lower: PairRows,
    pub generators: BTreeMap<String, PairRows>,
    /// Postfix relations, see [`crate::hermitian::eval_postfix`].
    pub relations: Vec<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub notes: Vec<String>,
}

impl LatticeEntry {
    pub fn form(&self) -> Result<HermitianForm, HermError> {
        HermitianForm::from_lower(self.discriminant, &self.gram_lower)
    }

    pub fn generator_matrices(&self) -> Result<BTreeMap<String, OKMatrix>, HermError> {
        self.generators
            .iter()
            .map(|(k, rows)| Ok((k.clone(), OKMatrix::from_pairs(self.discriminant, rows)?)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NamedForm {
    pub name: String,
    pub discriminant: i64,
    pub gram_lower: PairRows,
}

impl NamedForm {
    pub fn form(&self) -> Result<HermitianForm, HermError> {
        HermitianForm::from_lower(self.discriminant, &self.gram_lower)
    }
}

/// The printed optimal elliptic and genus-2 tables for one discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FixtureTable {
    pub discriminant: i64,
    pub elliptic: Vec<EllipticFixture>,
    pub genus2: Vec<Genus2Fixture>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Catalog {
    pub version: String,
    pub order_tables: Vec<OrderRow>,
    pub order_sets: Vec<OrderSet>,
    pub exceptional_curves: Vec<ExceptionalRow>,
    pub lattices: Vec<LatticeEntry>,
    pub forms: Vec<NamedForm>,
    pub fixtures: Vec<FixtureTable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogAnswer<'a> {
    /// The table covers `(d, dim)`; an empty slice means no irreducible module.
    Orders(&'a [Factored]),
    NotInCatalog,
}

impl Catalog {
    pub fn query(&self, d: i64, dim: usize) -> CatalogAnswer<'_> {
        self.order_tables
            .iter()
            .find(|r| r.discriminant == d && r.dim == dim)
            .map_or(CatalogAnswer::NotInCatalog, |r| CatalogAnswer::Orders(&r.orders))
    }

    pub fn order_set(&self, id: &str) -> Option<&OrderSet> {
        self.order_sets.iter().find(|s| s.id == id)
    }

    pub fn form(&self, name: &str) -> Option<&NamedForm> {
        self.forms.iter().find(|f| f.name == name)
    }

    pub fn fixtures(&self, d: i64) -> Option<&FixtureTable> {
        self.fixtures.iter().find(|t| t.discriminant == d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_roundtrip() {
        let f = Factored(alloc::vec![[2, 5], [3, 1], [7, 1]]);
        assert_eq!(f.value(), 672);
        assert_eq!(Factored::of(672), f);
        assert_eq!(alloc::format!("{f}"), "2^5·3·7");
        assert_eq!(Factored::of(1).value(), 1);
    }
}
