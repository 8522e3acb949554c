use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::{ToricError, ToricVariety};
use crate::lattice::linalg::solve_in_span;
use crate::lattice::{IntVector, Rat};

/// A torus-invariant divisor `Σ a_ρ D_ρ`.
///
/// Built with [`CartierDivisor::new`] it is Cartier: every maximal cone has an
/// integral local functional `m_σ` with `⟨m_σ, v_ρ⟩ = −a_ρ` on its rays. On a
/// simplicial fan every invariant divisor is `Q`-Cartier; those are built with
/// [`CartierDivisor::q_cartier`] and only record whether they are Cartier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartierDivisor {
    coeffs: Vec<BigInt>,
    cartier: bool,
}

impl CartierDivisor {
    pub fn new(x: &ToricVariety, coeffs: Vec<BigInt>) -> Result<Self, ToricError> {
        let d = Self::q_cartier(x, coeffs)?;
        if let Some(cone) = d.first_non_cartier_cone(x) {
            return Err(ToricError::NotCartier { cone });
        }
        Ok(d)
    }

    pub fn from_i64s(x: &ToricVariety, coeffs: &[i64]) -> Result<Self, ToricError> {
        Self::new(x, coeffs.iter().map(|&a| BigInt::from(a)).collect())
    }

    /// Any invariant divisor on a simplicial fan.
    pub fn q_cartier(x: &ToricVariety, coeffs: Vec<BigInt>) -> Result<Self, ToricError> {
        if coeffs.len() != x.num_rays() {
            return Err(ToricError::DimensionMismatch {
                expected: x.num_rays(),
                found: coeffs.len(),
            });
        }
        let mut d = CartierDivisor {
            coeffs,
            cartier: true,
        };
        d.cartier = d.first_non_cartier_cone(x).is_none();
        Ok(d)
    }

    pub fn zero(x: &ToricVariety) -> Self {
        CartierDivisor {
            coeffs: vec![BigInt::zero(); x.num_rays()],
            cartier: true,
        }
    }

    /// The prime divisor `D_ρ`.
    pub fn prime(x: &ToricVariety, ray: usize) -> Result<Self, ToricError> {
        if ray >= x.num_rays() {
            return Err(ToricError::UnknownRay(ray));
        }
        let mut coeffs = vec![BigInt::zero(); x.num_rays()];
        coeffs[ray] = BigInt::from(1);
        Self::q_cartier(x, coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &BigInt {
        &self.coeffs[ray]
    }

    pub fn is_cartier(&self) -> bool {
        self.cartier
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }

    /// Rays with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Coefficientwise `self ≤ other`.
    pub fn le(&self, other: &CartierDivisor) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    fn combine(
        &self,
        other: &CartierDivisor,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> CartierDivisor {
        let coeffs: Vec<BigInt> = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f(a, b))
            .collect();
        // Cartier divisors form a group; otherwise recheck lazily via `recheck`.
        CartierDivisor {
            coeffs,
            cartier: self.cartier && other.cartier,
        }
    }

    pub fn add(&self, other: &CartierDivisor) -> CartierDivisor {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CartierDivisor) -> CartierDivisor {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigInt) -> CartierDivisor {
        CartierDivisor {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
            cartier: self.cartier || k.is_zero(),
        }
    }

    pub fn scale_i64(&self, k: i64) -> CartierDivisor {
        self.scale(&BigInt::from(k))
    }

    /// Recomputes the Cartier flag (sums of non-Cartier divisors may be Cartier).
    pub fn recheck(mut self, x: &ToricVariety) -> CartierDivisor {
        self.cartier = self.first_non_cartier_cone(x).is_none();
        self
    }

    /// The local functional `m_σ` on maximal cone `cone`: `⟨m_σ, v_ρ⟩ = −a_ρ` for `ρ ∈ σ`.
    pub fn local_functional(&self, x: &ToricVariety, cone: usize) -> Vec<Rat> {
        let fan = x.fan();
        let rays: Vec<&IntVector> = fan.max_cones()[cone].iter().map(|&i| fan.ray(i)).collect();
        // Solve Vᵀ m = −a: columns of the system are the coordinate columns of V.
        let n = fan.dim();
        let cols: Vec<Vec<Rat>> = (0..n)
            .map(|k| {
                rays.iter()
                    .map(|r| Rat::from_integer(r.coords()[k].clone()))
                    .collect()
            })
            .collect();
        let target: Vec<Rat> = fan.max_cones()[cone]
            .iter()
            .map(|&i| Rat::from_integer(-self.coeffs[i].clone()))
            .collect();
        solve_in_span(&cols, &target).expect("maximal cones are full-dimensional and simplicial")
    }

    fn first_non_cartier_cone(&self, x: &ToricVariety) -> Option<Vec<usize>> {
        (0..x.fan().max_cones().len())
            .find(|&c| !self.local_functional(x, c).iter().all(|q| q.is_integer()))
            .map(|c| x.fan().max_cones()[c].clone())
    }
}

impl Serialize for CartierDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntVector::from(self.coeffs.clone()).serialize(s)
    }
}

impl fmt::Display for CartierDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| format!("{a}*D{i}"))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}
