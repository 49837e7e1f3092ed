//! Geometric intersection numbers of normal curves.
//!
//! A normal curve is a reduced closed path in the dual graph of the
//! triangulation, whose lift to the universal cover is a bi-infinite path in
//! the (planar, trivalent) dual tree. Two lifts cross exactly when their
//! ends interleave at infinity, which in a planar tree is decided locally:
//! follow the maximal segment the two lifts share and compare the side each
//! one leaves on at the two ends. Counting crossing segments up to the deck
//! group gives the geometric intersection number, with no isotopy search.
//!
//! A segment is counted once, at the position where it begins: position `i`
//! of the first curve and `j` of the second (possibly reversed) curve enter
//! the same triangle through the same side, while the preceding passages
//! differ.

use crate::error::Result;
use crate::normal::{passages, reverse_path, NormalCurve, Passage};
use crate::triangulation::Triangulation;

/// Passage sequence of a curve together with its reversal, ready for
/// repeated intersection queries.
#[derive(Clone, Debug)]
pub struct CurvePath {
    forward: Vec<Passage>,
    backward: Vec<Passage>,
    /// Positions entering each (triangle, side), for candidate lookup.
    entries: Vec<Vec<u32>>,
}

impl CurvePath {
    pub fn new(tri: &Triangulation, curve: &NormalCurve) -> Result<Self> {
        Ok(Self::from_passages(tri, passages(tri, curve)?))
    }

    pub fn from_passages(tri: &Triangulation, forward: Vec<Passage>) -> Self {
        let backward = reverse_path(&forward);
        let mut entries = vec![Vec::new(); 3 * tri.num_triangles()];
        for (i, p) in forward.iter().enumerate() {
            entries[3 * p.triangle as usize + p.enter as usize].push(i as u32);
        }
        Self { forward, backward, entries }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn passages(&self) -> &[Passage] {
        &self.forward
    }
}

/// Geometric intersection number of two essential curves.
pub fn intersection_number(tri: &Triangulation, a: &NormalCurve, b: &NormalCurve) -> Result<u64> {
    if a == b {
        return Ok(0);
    }
    let pa = CurvePath::new(tri, a)?;
    let pb = CurvePath::new(tri, b)?;
    Ok(count_crossings(&pa, &pb, None))
}

/// Intersection number of two prepared paths. With `limit`, counting stops
/// once that many crossings have been found.
pub fn count_crossings(a: &CurvePath, b: &CurvePath, limit: Option<u64>) -> u64 {
    if a.forward == b.forward || same_cycle(&a.forward, &b.forward) {
        return 0;
    }
    let mut total = 0;
    for other in [&b.forward, &b.backward] {
        let n = other.len();
        for (j, q) in other.iter().enumerate() {
            let slot = 3 * q.triangle as usize + q.enter as usize;
            for &i in &a.entries[slot] {
                if crosses_at(&a.forward, i as usize, other, j, n) {
                    total += 1;
                    if limit.is_some_and(|l| total >= l) {
                        return total;
                    }
                }
            }
        }
    }
    total
}

/// Whether two curves can be realised disjointly.
pub fn are_disjoint(a: &CurvePath, b: &CurvePath) -> bool {
    count_crossings(a, b, Some(1)) == 0
}

fn same_cycle(a: &[Passage], b: &[Passage]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return false;
    }
    let n = a.len();
    (0..n).any(|shift| (0..n).all(|i| a[i] == b[(i + shift) % n]))
}

/// Decides whether the shared segment starting at `(i, j)` is a crossing.
/// Returns false when `(i, j)` is not the start of a maximal shared segment.
fn crosses_at(a: &[Passage], i: usize, b: &[Passage], j: usize, nb: usize) -> bool {
    let na = a.len();
    let prev_a = a[(i + na - 1) % na];
    let prev_b = b[(j + nb - 1) % nb];
    if prev_a == prev_b {
        return false;
    }
    // Both previous passages leave the same triangle through the same side;
    // they differ in the side they came in through.
    debug_assert_eq!(prev_a.triangle, prev_b.triangle);
    debug_assert_eq!(prev_a.exit, prev_b.exit);
    let back_left = prev_a.enter == (prev_a.exit + 1) % 3;

    let limit = na + nb + 1;
    for step in 0..limit {
        let pa = a[(i + step) % na];
        let pb = b[(j + step) % nb];
        debug_assert_eq!((pa.triangle, pa.enter), (pb.triangle, pb.enter));
        if pa.exit != pb.exit {
            let front_left = pa.exit == (pa.enter + 2) % 3;
            return back_left != front_left;
        }
    }
    // The two paths agree for longer than both periods: the same curve.
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::curve_enclosing;
    use crate::reference;

    #[test]
    fn curve_is_disjoint_from_itself() {
        let t = reference::named("S0_6").unwrap();
        let c = curve_enclosing(&t, &[1, 2, 3]).unwrap();
        assert_eq!(intersection_number(&t, &c, &c).unwrap(), 0);
    }

    #[test]
    fn nested_and_overlapping_discs() {
        let t = reference::named("S0_6").unwrap();
        let a = curve_enclosing(&t, &[1, 2]).unwrap();
        let b = curve_enclosing(&t, &[1, 2, 3]).unwrap();
        let c = curve_enclosing(&t, &[2, 3]).unwrap();
        assert_eq!(intersection_number(&t, &a, &b).unwrap(), 0);
        assert_eq!(intersection_number(&t, &b, &c).unwrap(), 0);
        // Discs sharing one puncture overlap: the boundaries meet twice.
        assert_eq!(intersection_number(&t, &a, &c).unwrap(), 2);
    }
}
