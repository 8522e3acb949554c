use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::GeometryError;

/// A point of the integer lattice `Z^n`.
///
/// Ordering is lexicographic on coordinates, which is the ordering used for
/// every serialized set of lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        Ok(IntVector(coords))
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        assert!(
            !coords.is_empty(),
            "lattice vectors have positive dimension"
        );
        IntVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "lattice vectors have positive dimension");
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[axis] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational vector.
    pub fn dot_rational(&self, other: &[BigRational]) -> BigRational {
        debug_assert_eq!(self.dim(), other.len());
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| b * BigRational::from_integer(a.clone()))
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content. The zero vector is returned unchanged.
    pub fn primitive(&self) -> IntVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect()
    }

    /// Clears denominators of a rational vector and returns the primitive
    /// integer vector on the same ray. Returns `None` for the zero vector.
    pub fn primitive_from_rational(v: &[BigRational]) -> Option<IntVector> {
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = v
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        Some(IntVector(ints).primitive())
    }

    pub fn first(&self) -> &BigInt {
        &self.0[0]
    }

    /// Drops the first coordinate.
    pub fn tail(&self) -> Option<IntVector> {
        if self.dim() < 2 {
            return None;
        }
        Some(IntVector(self.0[1..].to_vec()))
    }

    /// Prepends a coordinate.
    pub fn prepend(&self, head: BigInt) -> IntVector {
        let mut coords = Vec::with_capacity(self.dim() + 1);
        coords.push(head);
        coords.extend(self.0.iter().cloned());
        IntVector(coords)
    }

    pub fn abs_max(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(coords: Vec<BigInt>) -> Self {
        assert!(
            !coords.is_empty(),
            "lattice vectors have positive dimension"
        );
        IntVector(coords)
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Coordinates serialize as JSON integers when they fit in `i64`, otherwise
/// as decimal strings.
impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match i64::try_from(c) {
                Ok(v) => seq.serialize_element(&v)?,
                Err(_) => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_divides_content() {
        let v = IntVector::from_i64s(&[4, -6, 10]);
        assert_eq!(v.content(), BigInt::from(2));
        assert_eq!(v.primitive(), IntVector::from_i64s(&[2, -3, 5]));
        assert!(!v.is_primitive());
        assert!(IntVector::from_i64s(&[2, 3]).is_primitive());
    }

    #[test]
    fn rational_ray_is_cleared() {
        let half = BigRational::new(1.into(), 2.into());
        let v = vec![half.clone(), -half * BigRational::from_integer(3.into())];
        assert_eq!(
            IntVector::primitive_from_rational(&v),
            Some(IntVector::from_i64s(&[1, -3]))
        );
        assert_eq!(
            IntVector::primitive_from_rational(&[BigRational::zero()]),
            None
        );
    }

    #[test]
    fn lexicographic_order() {
        let mut pts = [
            IntVector::from_i64s(&[1, 0]),
            IntVector::from_i64s(&[0, 5]),
            IntVector::from_i64s(&[0, -1]),
        ];
        pts.sort();
        assert_eq!(pts[0], IntVector::from_i64s(&[0, -1]));
        assert_eq!(pts[2], IntVector::from_i64s(&[1, 0]));
    }

    #[test]
    fn empty_coordinates_rejected() {
        assert!(matches!(
            IntVector::new(vec![]),
            Err(GeometryError::ZeroDimension)
        ));
    }
}
