//! Finite abelian groups as explicit factor lists `Z_{n_1} x ... x Z_{n_d}`.
//!
//! Elements are addressed by a single index in `[0, order)` through mixed-radix
//! encoding with the rightmost factor varying fastest; the index <-> coordinate
//! bijection is fixed once here and every serialized artifact uses it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// All divisors of `n >= 1` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of zero are undefined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `Z_{n_1} x ... x Z_{n_d}` with cached order, exponent, and index strides.
#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    exponent: u64,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for FiniteAbelianGroup {}

impl std::hash::Hash for FiniteAbelianGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.factors.hash(state);
    }
}

impl FiniteAbelianGroup {
    /// Builds a group from its factor list. Factors of 1 are kept as given;
    /// the list is the group's identity, not a normal form.
    pub fn new(factors: Vec<u64>) -> Result<FiniteAbelianGroup> {
        if factors.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        if factors.contains(&0) {
            return Err(Error::ZeroFactor);
        }
        let mut order: u64 = 1;
        for &f in &factors {
            order = order.checked_mul(f).ok_or(Error::OrderOverflow)?;
        }
        let exponent = factors.iter().fold(1u64, |acc, &f| lcm(acc, f));
        let mut strides = vec![1u64; factors.len()];
        for t in (0..factors.len().saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * factors[t + 1];
        }
        Ok(FiniteAbelianGroup {
            factors,
            strides,
            order,
            exponent,
        })
    }

    pub fn cyclic(n: u64) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(vec![n])
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Least common multiple of the factor sizes.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub(crate) fn strides(&self) -> &[u64] {
        &self.strides
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Iterates every element index in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }

    /// Mixed-radix decode of an element index (rightmost factor fastest).
    pub fn coords(&self, index: u64) -> Result<Vec<u64>> {
        self.check_index(index)?;
        let mut rest = index;
        let coords = self
            .strides
            .iter()
            .map(|&s| {
                let c = rest / s;
                rest %= s;
                c
            })
            .collect();
        Ok(coords)
    }

    /// Mixed-radix encode; each coordinate must be in range for its factor.
    pub fn index_of(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.factors.len() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.factors.len(),
                coords.len()
            )));
        }
        let mut index = 0u64;
        for ((&c, &f), &s) in coords.iter().zip(&self.factors).zip(&self.strides) {
            if c >= f {
                return Err(Error::IndexOutOfRange { index: c, order: f });
            }
            index += c * s;
        }
        Ok(index)
    }

    /// Componentwise addition of two element indices.
    pub fn element_add(&self, i: u64, j: u64) -> Result<u64> {
        self.check_index(i)?;
        self.check_index(j)?;
        let mut ri = i;
        let mut rj = j;
        let mut out = 0u64;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let ci = ri / s;
            let cj = rj / s;
            ri %= s;
            rj %= s;
            let c = ci + cj;
            out += (if c >= f { c - f } else { c }) * s;
        }
        Ok(out)
    }

    pub(crate) fn check_index(&self, index: u64) -> Result<()> {
        if index >= self.order {
            return Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z_{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Parses the literal form `Z_n1 x Z_n2 x ...` (case-insensitive `Z`).
    fn from_str(s: &str) -> Result<FiniteAbelianGroup> {
        let bad = || Error::Parse(format!("invalid group literal {s:?}"));
        let mut factors = Vec::new();
        for part in s.split('x') {
            let part = part.trim();
            let rest = part
                .strip_prefix("Z_")
                .or_else(|| part.strip_prefix("z_"))
                .ok_or_else(bad)?;
            factors.push(rest.parse::<u64>().map_err(|_| bad())?);
        }
        FiniteAbelianGroup::new(factors)
    }
}

/// A canonical surjection used for preimage constructions: either reduce one
/// cyclic factor modulo a divisor, or delete a factor entirely. Arbitrary
/// homomorphisms are out of scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionSpec {
    /// Replace factor `factor` of size `n` by `Z_modulus`, where `modulus | n`,
    /// mapping the coordinate to its residue.
    ModFactor { factor: usize, modulus: u64 },
    /// Drop factor `factor`. Dropping the only factor yields `Z_1`.
    DropFactor { factor: usize },
}

impl ProjectionSpec {
    fn validate(&self, g: &FiniteAbelianGroup) -> Result<()> {
        match *self {
            ProjectionSpec::ModFactor { factor, modulus } => {
                if factor >= g.rank() {
                    return Err(Error::InvalidProjection {
                        reason: format!("factor index {factor} out of range"),
                    });
                }
                if modulus == 0 || !g.factors()[factor].is_multiple_of(modulus) {
                    return Err(Error::InvalidProjection {
                        reason: format!(
                            "modulus {modulus} does not divide factor {}",
                            g.factors()[factor]
                        ),
                    });
                }
                Ok(())
            }
            ProjectionSpec::DropFactor { factor } => {
                if factor >= g.rank() {
                    return Err(Error::InvalidProjection {
                        reason: format!("factor index {factor} out of range"),
                    });
                }
                Ok(())
            }
        }
    }

    /// The codomain of the projection applied to `g`.
    pub fn quotient(&self, g: &FiniteAbelianGroup) -> Result<FiniteAbelianGroup> {
        self.validate(g)?;
        let mut factors = g.factors().to_vec();
        match *self {
            ProjectionSpec::ModFactor { factor, modulus } => factors[factor] = modulus,
            ProjectionSpec::DropFactor { factor } => {
                factors.remove(factor);
                if factors.is_empty() {
                    factors.push(1);
                }
            }
        }
        FiniteAbelianGroup::new(factors)
    }

    /// Image of one element index under the projection.
    pub fn map_index(
        &self,
        g: &FiniteAbelianGroup,
        quotient: &FiniteAbelianGroup,
        index: u64,
    ) -> Result<u64> {
        let mut coords = g.coords(index)?;
        match *self {
            ProjectionSpec::ModFactor { factor, modulus } => coords[factor] %= modulus,
            ProjectionSpec::DropFactor { factor } => {
                coords.remove(factor);
                if coords.is_empty() {
                    coords.push(0);
                }
            }
        }
        quotient.index_of(&coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(7), vec![1, 7]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn construction_and_invariants() {
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        let g = FiniteAbelianGroup::new(vec![2, 4]).unwrap();
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.order() % g.exponent(), 0);
        let g = FiniteAbelianGroup::new(vec![1]).unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.exponent(), 1);

        assert!(matches!(
            FiniteAbelianGroup::new(vec![]),
            Err(Error::EmptyFactorList)
        ));
        assert!(matches!(
            FiniteAbelianGroup::new(vec![3, 0]),
            Err(Error::ZeroFactor)
        ));
        assert!(matches!(
            FiniteAbelianGroup::new(vec![u64::MAX, 3]),
            Err(Error::OrderOverflow)
        ));
    }

    #[test]
    fn mixed_radix_bijection() {
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        // Rightmost factor fastest: index 5 = (1, 2).
        assert_eq!(g.coords(5).unwrap(), vec![1, 2]);
        assert_eq!(g.index_of(&[1, 2]).unwrap(), 5);
        for i in g.elements() {
            assert_eq!(g.index_of(&g.coords(i).unwrap()).unwrap(), i);
        }
        assert!(g.coords(6).is_err());
        assert!(g.index_of(&[0, 3]).is_err());
        assert!(g.index_of(&[0]).is_err());
    }

    #[test]
    fn element_add_examples() {
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        assert_eq!(z4.element_add(3, 2).unwrap(), 1);
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        // (1,2) + (1,1) = (0,0)
        assert_eq!(g.element_add(5, 4).unwrap(), 0);
        let z5 = FiniteAbelianGroup::cyclic(5).unwrap();
        assert_eq!(z5.element_add(0, 4).unwrap(), 4);
        assert!(matches!(
            z5.element_add(5, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn element_add_laws() {
        let g = FiniteAbelianGroup::new(vec![4, 3, 2]).unwrap();
        for i in g.elements() {
            assert_eq!(g.element_add(i, 0).unwrap(), i);
            for j in g.elements() {
                let ij = g.element_add(i, j).unwrap();
                assert_eq!(ij, g.element_add(j, i).unwrap());
                for k in [0, 5, 17] {
                    let a = g.element_add(ij, k).unwrap();
                    let b = g.element_add(i, g.element_add(j, k).unwrap()).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn display_and_parse() {
        let g = FiniteAbelianGroup::new(vec![2, 6]).unwrap();
        assert_eq!(g.to_string(), "Z_2 x Z_6");
        assert_eq!("Z_2 x Z_6".parse::<FiniteAbelianGroup>().unwrap(), g);
        assert_eq!("z_7".parse::<FiniteAbelianGroup>().unwrap().order(), 7);
        assert!("Q_8".parse::<FiniteAbelianGroup>().is_err());
        assert!("Z_".parse::<FiniteAbelianGroup>().is_err());
        assert!("".parse::<FiniteAbelianGroup>().is_err());
    }

    #[test]
    fn projections() {
        let z6 = FiniteAbelianGroup::cyclic(6).unwrap();
        let p = ProjectionSpec::ModFactor {
            factor: 0,
            modulus: 3,
        };
        let q = p.quotient(&z6).unwrap();
        assert_eq!(q, FiniteAbelianGroup::cyclic(3).unwrap());
        assert_eq!(p.map_index(&z6, &q, 4).unwrap(), 1);

        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        let d = ProjectionSpec::DropFactor { factor: 1 };
        let q = d.quotient(&g).unwrap();
        assert_eq!(q, FiniteAbelianGroup::cyclic(2).unwrap());
        assert_eq!(d.map_index(&g, &q, 4).unwrap(), 1);

        let only = ProjectionSpec::DropFactor { factor: 0 };
        assert!(only.quotient(&z6).unwrap().is_trivial());

        let bad = ProjectionSpec::ModFactor {
            factor: 0,
            modulus: 4,
        };
        assert!(bad.quotient(&z6).is_err());
        let oob = ProjectionSpec::DropFactor { factor: 2 };
        assert!(oob.quotient(&g).is_err());
    }
}
