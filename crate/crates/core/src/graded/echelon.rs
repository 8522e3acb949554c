//! Fraction-free sparse Gaussian elimination over `Z`.
//!
//! Rows are kept primitive (content 1) and keyed by their leading column.
//! Rows are not back-reduced against each other, which is enough for rank and
//! membership tests and keeps insertion cheap on the very sparse vectors that
//! monomial oracles produce.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::slice::{clear_denominators, Combination};
use crate::lattice::Rat;

type IntRow = BTreeMap<usize, BigInt>;

#[derive(Clone, Debug)]
struct PivotRow {
    entries: IntRow,
    payload: Option<Combination>,
}

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, PivotRow>,
}

/// Result of reducing a vector: `remainder = scale · v − Σ c_i row_i`, and
/// `payload` carries the same combination applied to the payloads.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub remainder: IntRow,
    pub payload: Option<Combination>,
    pub scale: Rat,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Adds `v` to the spanned subspace; returns `true` if the rank grew.
    pub fn insert(&mut self, v: &Combination) -> bool {
        self.insert_with_payload(v, None)
    }

    pub fn insert_with_payload(&mut self, v: &Combination, payload: Option<Combination>) -> bool {
        let red = self.reduce(v, payload);
        let Some((&lead, _)) = red.remainder.iter().next() else {
            return false;
        };
        // The payload must stay the preimage of the stored row.
        let (entries, g) = primitive(red.remainder);
        let payload = red.payload.map(|p| p.scaled(&Rat::from_integer(g).recip()));
        self.rows.insert(lead, PivotRow { entries, payload });
        true
    }

    pub fn contains(&self, v: &Combination) -> bool {
        self.reduce(v, None).remainder.is_empty()
    }

    pub fn reduce(&self, v: &Combination, payload: Option<Combination>) -> Reduction {
        let (mut cur, lcm) = clear_denominators(v);
        let mut pay = payload.map(|p| p.scaled(&Rat::from_integer(lcm.clone())));
        let mut scale = Rat::from_integer(lcm);
        let mut from = 0usize;
        loop {
            let hit = cur
                .range(from..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, b)) = hit else { break };
            let row = &self.rows[&col];
            let a = row.entries[&col].clone();
            let g = a.gcd(&b);
            let (a, b) = (&a / &g, &b / &g);
            // cur ← a·cur − b·row
            if !a.is_one() {
                for x in cur.values_mut() {
                    *x *= &a;
                }
            }
            for (c, x) in &row.entries {
                let e = cur.entry(*c).or_insert_with(BigInt::zero);
                *e -= &b * x;
                if e.is_zero() {
                    cur.remove(c);
                }
            }
            if let Some(p) = pay.as_mut() {
                let mut next = p.scaled(&Rat::from_integer(a.clone()));
                if let Some(rp) = &row.payload {
                    next.add_scaled(rp, &Rat::from_integer(-b.clone()));
                }
                *p = next;
            }
            scale *= Rat::from_integer(a);
            from = col + 1;
        }
        Reduction {
            remainder: cur,
            payload: pay,
            scale,
        }
    }
}

fn primitive(mut row: IntRow) -> (IntRow, BigInt) {
    let g = row.values().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_one() && !g.is_zero() {
        for x in row.values_mut() {
            *x = &*x / &g;
        }
    }
    (row, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::linalg::rat;

    fn comb(pairs: &[(usize, i64)]) -> Combination {
        Combination::from_pairs(pairs.iter().map(|&(i, x)| (i, rat(x))))
    }

    #[test]
    fn rank_of_dependent_set() {
        let mut e = Echelon::new();
        assert!(e.insert(&comb(&[(0, 1), (1, 2)])));
        assert!(e.insert(&comb(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&comb(&[(0, 2), (1, 5), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&comb(&[(0, 1), (1, 3), (2, 1)])));
        assert!(!e.contains(&comb(&[(2, 1)])));
    }

    #[test]
    fn rational_inputs() {
        let mut e = Echelon::new();
        let half = Rat::new(1.into(), 2.into());
        assert!(e.insert(&Combination::from_pairs([(0, half.clone()), (1, half)])));
        assert!(e.contains(&comb(&[(0, 3), (1, 3)])));
    }

    #[test]
    fn payload_tracks_combination() {
        // Rows keyed on coordinate 0 only, payloads are full vectors.
        let mut e = Echelon::new();
        let n1 = comb(&[(0, 2), (5, 1)]);
        e.insert_with_payload(&comb(&[(0, 2)]), Some(n1.clone()));
        // Reduce beta = (0:3, 5:7): key = (0:3).
        let beta = comb(&[(0, 3), (5, 7)]);
        let red = e.reduce(&comb(&[(0, 3)]), Some(beta.clone()));
        assert!(red.remainder.is_empty());
        // payload / scale = beta − (3/2)·n1
        let got = red.payload.unwrap().scaled(&red.scale.recip());
        let mut want = beta;
        want.add_scaled(&n1, &Rat::new((-3).into(), 2.into()));
        assert_eq!(got, want);
    }
}
