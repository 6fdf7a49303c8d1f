//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::snf::smith_normal_form;

/// Ground ring the group is a module over. Over `Z[1/3]` every factor
/// that is a power of 3 is a unit and is discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Ground {
    #[default]
    #[serde(rename = "Z[1/3]")]
    ZThird,
    #[serde(rename = "Z")]
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    pub ground: Ground,
    pub free_rank: usize,
    /// Torsion invariant factors, each at least 2, forming a divisibility chain.
    pub invariant_factors: Vec<i64>,
    /// One label per summand: torsion summands first, then free ones.
    #[serde(default)]
    pub generator_labels: Vec<String>,
}

fn strip_threes(mut x: i64) -> i64 {
    while x != 0 && x % 3 == 0 {
        x /= 3;
    }
    x
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl FGAbelianGroup {
    pub fn zero(ground: Ground) -> Self {
        FGAbelianGroup { ground, free_rank: 0, invariant_factors: vec![], generator_labels: vec![] }
    }

    pub fn free(ground: Ground, rank: usize) -> Self {
        FGAbelianGroup { ground, free_rank: rank, invariant_factors: vec![], generator_labels: vec![] }
    }

    /// Z[1/3]^rank
    pub fn z3(rank: usize) -> Self {
        Self::free(Ground::ZThird, rank)
    }

    pub fn cyclic(ground: Ground, n: i64) -> Self {
        Self::from_orders(ground, &[n])
    }

    /// Direct sum of cyclic groups `Z/n` (`n = 0` meaning `Z`), normalized.
    pub fn from_orders(ground: Ground, orders: &[i64]) -> Self {
        let mut free = 0;
        let mut tors = Vec::new();
        for &n in orders {
            let n = n.abs();
            let n = if ground == Ground::ZThird { strip_threes(n) } else { n };
            match n {
                0 => free += 1,
                1 => {}
                n => tors.push(n),
            }
        }
        // re-establish the divisibility chain through an SNF of the diagonal
        let k = tors.len();
        let diag: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| if i == j { tors[i] } else { 0 }).collect()).collect();
        let factors: Vec<i64> = if k == 0 { vec![] } else { smith_normal_form(&diag).diag.into_iter().filter(|&d| d > 1).collect() };
        FGAbelianGroup { ground, free_rank: free, invariant_factors: factors, generator_labels: vec![] }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.generator_labels = labels;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<i64> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Number of `Z/2` summands.
    pub fn count_z2(&self) -> usize {
        self.invariant_factors.iter().filter(|&&f| f == 2).count()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.ground, other.ground, "mixed ground rings");
        let mut orders: Vec<i64> = self.invariant_factors.clone();
        orders.extend(&other.invariant_factors);
        orders.extend(std::iter::repeat_n(0, self.free_rank + other.free_rank));
        Self::from_orders(self.ground, &orders)
    }

    /// `A ⊗ Z/2`
    pub fn mod_two(&self) -> Self {
        let n = self.free_rank + self.invariant_factors.iter().filter(|&&f| f % 2 == 0).count();
        Self::from_orders(self.ground, &vec![2; n])
    }

    /// `Hom(A, R)` for the ground ring `R`.
    pub fn hom_to_ground(&self) -> Self {
        Self::free(self.ground, self.free_rank)
    }

    /// `Ext^1(A, R)` for the ground ring `R`.
    pub fn ext_to_ground(&self) -> Self {
        Self::from_orders(self.ground, &self.invariant_factors)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut orders = Vec::new();
        let a: Vec<i64> = self.invariant_factors.iter().copied().chain(std::iter::repeat_n(0, self.free_rank)).collect();
        let b: Vec<i64> = other.invariant_factors.iter().copied().chain(std::iter::repeat_n(0, other.free_rank)).collect();
        for &x in &a {
            for &y in &b {
                orders.push(gcd(x, y));
            }
        }
        Self::from_orders(self.ground, &orders)
    }

    /// Same summands, labels ignored.
    pub fn same_group(&self, other: &Self) -> bool {
        self.ground == other.ground && self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = match self.ground {
            Ground::ZThird => "Z[1/3]",
            Ground::Z => "Z",
        };
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(z.to_string()),
            n => parts.push(format!("{z}^{n}")),
        }
        for t in &self.invariant_factors {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form() {
        let g = FGAbelianGroup::from_orders(Ground::Z, &[2, 3, 0]);
        assert_eq!(g.invariant_factors, vec![6]);
        assert_eq!(g.free_rank, 1);
        let h = FGAbelianGroup::from_orders(Ground::ZThird, &[6, 9, 2]);
        assert_eq!(h.invariant_factors, vec![2, 2]);
        assert_eq!(FGAbelianGroup::from_orders(Ground::Z, &[16, 3]).order(), Some(48));
        assert_eq!(h.to_string(), "Z/2 + Z/2");
    }

    #[test]
    fn tensor_and_ext() {
        let z2 = FGAbelianGroup::cyclic(Ground::ZThird, 2);
        let z = FGAbelianGroup::z3(1);
        assert!(z2.tensor(&z).same_group(&z2));
        assert!(z2.tensor(&z2).same_group(&z2));
        assert!(z2.hom_to_ground().is_zero());
        assert!(z2.ext_to_ground().same_group(&z2));
    }
}
