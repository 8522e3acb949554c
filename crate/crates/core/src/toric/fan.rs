use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::ToricError;
use crate::lattice::linalg::{det, nullspace, solve_in_span};
use crate::lattice::{IntVector, Rat};

/// A complete simplicial fan given by its rays and maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    dim: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Validates primitivity, distinctness, simpliciality and completeness.
    ///
    /// Completeness is checked twice: every wall of a maximal cone must be
    /// shared by exactly two maximal cones lying on opposite sides of it, and
    /// every point of `{−2,…,2}^n` must lie in some maximal cone.
    pub fn new(rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Self, ToricError> {
        let dim = rays
            .first()
            .map(IntVector::dim)
            .ok_or_else(|| ToricError::InvalidFan("no rays".into()))?;
        if dim == 0 {
            return Err(ToricError::InvalidFan(
                "rays must have positive dimension".into(),
            ));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != dim {
                return Err(ToricError::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            if !r.is_primitive() {
                return Err(ToricError::InvalidFan(format!(
                    "ray {i} = {r} is not primitive"
                )));
            }
            if rays[..i].contains(r) {
                return Err(ToricError::InvalidFan(format!("ray {r} listed twice")));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for cone in max_cones {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            if c.len() != cone.len() || c.iter().any(|&i| i >= rays.len()) {
                return Err(ToricError::InvalidFan(format!(
                    "bad ray indices in cone {cone:?}"
                )));
            }
            let gens: Vec<IntVector> = c.iter().map(|&i| rays[i].clone()).collect();
            if c.len() != dim || det(&gens).is_zero() {
                return Err(ToricError::NotSimplicial { cone: c });
            }
            cones.push(c);
        }
        cones.sort();
        let fan = Fan {
            dim,
            rays,
            max_cones: cones,
        };
        fan.check_walls()?;
        fan.check_sample_cover()?;
        Ok(fan)
    }

    pub fn from_i64s(rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Self, ToricError> {
        Fan::new(
            rays.iter().map(|r| IntVector::from_i64s(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    fn check_walls(&self) -> Result<(), ToricError> {
        let mut walls: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for cone in &self.max_cones {
            for skip in 0..cone.len() {
                let wall: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &i)| i)
                    .collect();
                walls.entry(wall).or_default().push(cone[skip]);
            }
        }
        for (wall, opposite) in walls {
            if opposite.len() != 2 {
                return Err(ToricError::NotComplete(format!(
                    "wall {wall:?} lies on {} maximal cone(s)",
                    opposite.len()
                )));
            }
            let rows: Vec<Vec<Rat>> = wall.iter().map(|&i| self.rays[i].to_rational()).collect();
            let normal = nullspace(&rows, self.dim)
                .into_iter()
                .next()
                .expect("wall has corank one");
            let side = |i: usize| self.rays[i].dot_rational(&normal);
            if (side(opposite[0]) * side(opposite[1])).is_positive() {
                return Err(ToricError::NotComplete(format!(
                    "cones on wall {wall:?} overlap"
                )));
            }
        }
        Ok(())
    }

    fn check_sample_cover(&self) -> Result<(), ToricError> {
        let mut point = vec![-2i64; self.dim];
        loop {
            let p = IntVector::from_i64s(&point);
            if self.containing_cone(&p).is_none() {
                return Err(ToricError::NotComplete(format!(
                    "{p} lies in no maximal cone"
                )));
            }
            let mut k = 0;
            loop {
                if k == self.dim {
                    return Ok(());
                }
                if point[k] < 2 {
                    point[k] += 1;
                    break;
                }
                point[k] = -2;
                k += 1;
            }
        }
    }

    /// Index of a maximal cone containing `p`.
    pub fn containing_cone(&self, p: &IntVector) -> Option<usize> {
        let target = p.to_rational();
        self.max_cones.iter().position(|cone| {
            let cols: Vec<Vec<Rat>> = cone.iter().map(|&i| self.rays[i].to_rational()).collect();
            solve_in_span(&cols, &target).is_some_and(|l| l.iter().all(|x| !x.is_negative()))
        })
    }

    /// `|det|` of the rays of each maximal cone.
    pub fn cone_multiplicities(&self) -> Vec<BigInt> {
        self.max_cones
            .iter()
            .map(|c| det(&c.iter().map(|&i| self.rays[i].clone()).collect::<Vec<_>>()).abs())
            .collect()
    }
}

/// A complete simplicial toric variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricVariety {
    fan: Fan,
    smooth: bool,
}

impl ToricVariety {
    pub fn new(fan: Fan) -> Self {
        let smooth = fan.cone_multiplicities().iter().all(One::is_one);
        ToricVariety { fan, smooth }
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn dim(&self) -> usize {
        self.fan.dim
    }

    pub fn num_rays(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn require_smooth(&self) -> Result<(), ToricError> {
        if self.smooth {
            Ok(())
        } else {
            Err(ToricError::NotSmooth)
        }
    }
}
