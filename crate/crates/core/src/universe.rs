//! Bounded enumeration of essential simple closed curves.
//!
//! Weight vectors are generated depth-first over the edges in an order that
//! closes triangles early. When an edge is assigned, every triangle whose
//! other two edges are already set restricts its value to a range of one
//! parity, so most branches die immediately. Surviving vectors are traced
//! and kept when they form a single essential curve.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{CurveFile, NormalCurve};
use crate::triangulation::Triangulation;

/// Upper limit on curves held by one universe.
pub const DEFAULT_CURVE_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug)]
pub struct CurveUniverse {
    tri: Triangulation,
    bound: u64,
    curves: Vec<NormalCurve>,
    index: HashMap<Vec<u64>, usize>,
}

impl CurveUniverse {
    pub fn enumerate(tri: &Triangulation, bound: u64) -> Result<Self> {
        Self::enumerate_with_budget(tri, bound, DEFAULT_CURVE_BUDGET)
    }

    pub fn enumerate_with_budget(tri: &Triangulation, bound: u64, budget: usize) -> Result<Self> {
        let curves = enumerate_curves(tri, bound, budget)?;
        Ok(Self::from_sorted(tri.clone(), bound, curves))
    }

    /// A universe with the given curves, in the given order. Used for
    /// images of universes under mapping classes and for hand-made slices.
    pub fn from_curves(tri: &Triangulation, curves: Vec<NormalCurve>) -> Result<Self> {
        let bound = curves.iter().map(NormalCurve::total_weight).max().unwrap_or(0);
        let u = Self::from_sorted(tri.clone(), bound, curves);
        if u.index.len() != u.curves.len() {
            return Err(Error::Precondition("universe curves are not distinct".into()));
        }
        Ok(u)
    }

    fn from_sorted(tri: Triangulation, bound: u64, curves: Vec<NormalCurve>) -> Self {
        let index = curves.iter().enumerate().map(|(i, c)| (c.weights().to_vec(), i)).collect();
        Self { tri, bound, curves, index }
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[NormalCurve] {
        &self.curves
    }

    pub fn curve_by_id(&self, id: usize) -> Result<&NormalCurve> {
        self.curves
            .get(id)
            .ok_or_else(|| Error::Lookup(format!("curve id {id} is out of range (universe has {})", self.len())))
    }

    pub fn id_by_curve(&self, curve: &NormalCurve) -> Result<usize> {
        self.id_by_weights(curve.weights())
    }

    pub fn id_by_weights(&self, weights: &[u64]) -> Result<usize> {
        self.index
            .get(weights)
            .copied()
            .ok_or_else(|| Error::Lookup(format!("curve {weights:?} is not in the universe")))
    }

    pub fn contains(&self, curve: &NormalCurve) -> bool {
        self.index.contains_key(curve.weights())
    }

    /// Writes the JSON-lines cache: a header line, then one curve per line.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        let header = CacheHeader {
            triangulation: self.tri.hash_hex(),
            surface: self.tri.surface().name(),
            bound: self.bound,
            count: self.curves.len(),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for (id, c) in self.curves.iter().enumerate() {
            let line = CacheLine { id, curve: c.to_file() };
            serde_json::to_writer(&mut out, &line)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads a cache written for `tri`.
    pub fn read_cache<R: BufRead>(tri: &Triangulation, input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header: CacheHeader = match lines.next() {
            Some(line) => serde_json::from_str(&line?)?,
            None => return Err(Error::Malformed("empty universe cache".into())),
        };
        if header.triangulation != tri.hash_hex() {
            return Err(Error::Malformed(format!(
                "cache was written for triangulation {}, not {}",
                header.triangulation,
                tri.hash_hex()
            )));
        }
        let mut curves = Vec::with_capacity(header.count);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CacheLine = serde_json::from_str(&line)?;
            if entry.id != curves.len() {
                return Err(Error::Malformed(format!("cache line for id {} is out of order", entry.id)));
            }
            curves.push(NormalCurve::from_file(tri, &entry.curve)?);
        }
        if curves.len() != header.count {
            return Err(Error::Malformed(format!(
                "cache header announces {} curves, found {}",
                header.count,
                curves.len()
            )));
        }
        Ok(Self::from_sorted(tri.clone(), header.bound, curves))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheHeader {
    pub triangulation: String,
    pub surface: String,
    pub bound: u64,
    pub count: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheLine {
    id: usize,
    #[serde(flatten)]
    curve: CurveFile,
}

/// Edge order and, per position, the triangles that constrain it.
struct Plan {
    order: Vec<usize>,
    /// For each position: pairs of the other two positions of triangles
    /// whose edges are all set once this position is.
    checks: Vec<Vec<(usize, usize)>>,
    /// Self-folded and repeated-edge triangles, checked on the full vector.
    degenerate: bool,
}

impl Plan {
    fn new(tri: &Triangulation) -> Self {
        let n = tri.num_edges();
        let mut pos = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut seen = vec![false; tri.num_triangles()];
        seen[0] = true;
        while let Some(t) = queue.pop_front() {
            for k in 0..3 {
                let e = tri.label(t, k).edge();
                if pos[e] == usize::MAX {
                    pos[e] = order.len();
                    order.push(e);
                }
                let (tn, _) = tri.across(t, k);
                if !seen[tn] {
                    seen[tn] = true;
                    queue.push_back(tn);
                }
            }
        }
        let mut checks = vec![Vec::new(); n];
        let mut degenerate = false;
        for sides in tri.triangles() {
            let p = sides.map(|l| pos[l.edge()]);
            if p[0] == p[1] || p[1] == p[2] || p[0] == p[2] {
                degenerate = true;
                continue;
            }
            let last = *p.iter().max().unwrap();
            let others: Vec<usize> = p.iter().copied().filter(|&q| q != last).collect();
            checks[last].push((others[0], others[1]));
        }
        Self { order, checks, degenerate }
    }
}

fn enumerate_curves(tri: &Triangulation, bound: u64, budget: usize) -> Result<Vec<NormalCurve>> {
    if bound == 0 {
        return Ok(Vec::new());
    }
    let plan = Plan::new(tri);
    // Split on the first two positions for parallel work.
    let mut prefixes = Vec::new();
    for a in 0..=bound {
        for b in 0..=bound - a {
            prefixes.push([a, b]);
        }
    }
    let found: Vec<Vec<Vec<u64>>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut vals = vec![0u64; plan.order.len()];
            vals[0] = prefix[0];
            vals[1] = prefix[1];
            let mut out = Vec::new();
            if feasible(&plan, &vals, 1, prefix[1]) {
                search(tri, &plan, &mut vals, 2, bound - prefix[0] - prefix[1], &mut out, budget);
            }
            out
        })
        .collect();
    let total: usize = found.iter().map(Vec::len).sum();
    if total > budget {
        return Err(Error::Resource(format!(
            "bound {bound} yields at least {total} curves, over the budget of {budget}"
        )));
    }
    let mut weights: Vec<Vec<u64>> = found.into_iter().flatten().collect();
    weights.sort_unstable();
    Ok(weights.into_iter().map(NormalCurve::from_weights_unchecked).collect())
}

fn feasible(plan: &Plan, vals: &[u64], pos: usize, x: u64) -> bool {
    plan.checks[pos].iter().all(|&(i, j)| {
        let (a, b) = (vals[i], vals[j]);
        x >= a.abs_diff(b) && x <= a + b && (x + a + b).is_multiple_of(2)
    })
}

fn search(
    tri: &Triangulation,
    plan: &Plan,
    vals: &mut Vec<u64>,
    pos: usize,
    remaining: u64,
    out: &mut Vec<Vec<u64>>,
    budget: usize,
) {
    if out.len() > budget {
        return;
    }
    if pos == plan.order.len() {
        let mut w = vec![0; vals.len()];
        for (p, &e) in plan.order.iter().enumerate() {
            w[e] = vals[p];
        }
        if w.iter().all(|&x| x == 0) {
            return;
        }
        if plan.degenerate && !crate::normal::validate(tri, &w).map(|v| v.is_empty()).unwrap_or(false) {
            return;
        }
        if NormalCurve::new(tri, w.clone()).is_ok() {
            out.push(w);
        }
        return;
    }
    let (mut lo, mut hi, mut parity) = (0, remaining, None);
    for &(i, j) in &plan.checks[pos] {
        let (a, b) = (vals[i], vals[j]);
        lo = lo.max(a.abs_diff(b));
        hi = hi.min(a + b);
        parity = Some((a + b) % 2);
    }
    if lo > hi {
        return;
    }
    let mut x = lo;
    if let Some(p) = parity {
        if x % 2 != p {
            x += 1;
        }
    }
    let step = if parity.is_some() { 2 } else { 1 };
    while x <= hi {
        if feasible(plan, vals, pos, x) {
            vals[pos] = x;
            search(tri, plan, vals, pos + 1, remaining - x, out, budget);
        }
        x += step;
    }
    vals[pos] = 0;
}

/// Unpruned enumeration, for cross-checking.
pub fn enumerate_naive(tri: &Triangulation, bound: u64) -> Vec<NormalCurve> {
    let n = tri.num_edges();
    let mut out = Vec::new();
    let mut w = vec![0u64; n];
    fn rec(tri: &Triangulation, w: &mut Vec<u64>, i: usize, remaining: u64, out: &mut Vec<NormalCurve>) {
        if i == w.len() {
            if let Ok(c) = NormalCurve::new(tri, w.clone()) {
                out.push(c);
            }
            return;
        }
        for x in 0..=remaining {
            w[i] = x;
            rec(tri, w, i + 1, remaining - x, out);
        }
        w[i] = 0;
    }
    if bound > 0 {
        rec(tri, &mut w, 0, bound, &mut out);
    }
    out.sort();
    out
}
