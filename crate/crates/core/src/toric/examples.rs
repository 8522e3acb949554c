//! Standard fans.

use super::{Fan, ToricVariety};
use crate::lattice::IntVector;

/// `ℙⁿ`: rays `e_1, …, e_n, −Σ e_i`; every `n`-subset spans a maximal cone.
pub fn projective_space(n: usize) -> ToricVariety {
    let mut rays: Vec<IntVector> = (0..n).map(|i| IntVector::unit(n, i)).collect();
    rays.push(IntVector::from_i64s(&vec![-1; n]));
    let cones = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    ToricVariety::new(Fan::new(rays, cones).expect("standard fan"))
}

/// `ℙ¹ × ℙ¹`: rays `(1,0), (0,1), (−1,0), (0,−1)`.
pub fn p1_x_p1() -> ToricVariety {
    ToricVariety::new(
        Fan::from_i64s(
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .expect("standard fan"),
    )
}

/// Ray index of the exceptional curve in [`blowup_p2`].
pub const BLOWUP_EXCEPTIONAL: usize = 1;
/// Ray index of a line avoiding the blown-up point in [`blowup_p2`].
pub const BLOWUP_LINE: usize = 3;

/// `ℙ²` blown up at a torus-fixed point: rays `(1,0), (1,1), (0,1), (−1,−1)`,
/// the ray `(1,1)` being the exceptional curve.
pub fn blowup_p2() -> ToricVariety {
    ToricVariety::new(
        Fan::from_i64s(
            &[&[1, 0], &[1, 1], &[0, 1], &[-1, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .expect("standard fan"),
    )
}

/// The Hirzebruch surface `F_a`: rays `(1,0), (0,1), (−1,a), (0,−1)`.
pub fn hirzebruch(a: i64) -> ToricVariety {
    ToricVariety::new(
        Fan::from_i64s(
            &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
        )
        .expect("standard fan"),
    )
}

/// The weighted plane `ℙ(1,1,2)`: rays `(1,0), (0,1), (−1,−2)`.
pub fn weighted_p112() -> ToricVariety {
    ToricVariety::new(
        Fan::from_i64s(&[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]])
            .expect("standard fan"),
    )
}
