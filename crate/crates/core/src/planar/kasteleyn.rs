use std::collections::{HashMap, VecDeque};

use num::{Signed, Zero};

use super::{pfaffian, PlanarError, PlanarGraph};
use crate::arith::{int, Rat};

/// How the spanning forest behind the orientation is grown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TreeStrategy {
    #[default]
    Bfs,
    Dfs,
}

/// Edge directions plus, per component, one dart of the face treated as
/// the outer face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    forward: Vec<bool>,
    outer: Vec<usize>,
}

impl Orientation {
    /// Builds an orientation from explicit directions; `forward[e]` means
    /// `ends[0] → ends[1]`.
    pub fn new(forward: Vec<bool>, outer: Vec<usize>) -> Self {
        Self { forward, outer }
    }

    pub fn forward(&self, e: usize) -> bool {
        self.forward[e]
    }

    pub fn directions(&self) -> &[bool] {
        &self.forward
    }

    /// One dart on each component's outer face.
    pub fn outer_darts(&self) -> &[usize] {
        &self.outer
    }

    fn agrees(&self, d: usize) -> bool {
        self.forward[d / 2] == (d % 2 == 0)
    }

    /// Checks that every face other than the outer ones is traversed along
    /// an odd number of its edges' directions.
    pub fn verify(&self, g: &PlanarGraph) -> Result<(), PlanarError> {
        if self.forward.len() != g.edges().len() {
            return Err(PlanarError::BadOrientation);
        }
        let faces = g.faces();
        let face_of = g.face_of_darts(&faces);
        let outer: Vec<usize> = self.outer.iter().map(|&d| face_of[d]).collect();
        for (i, walk) in faces.iter().enumerate() {
            if outer.contains(&i) {
                continue;
            }
            if walk.iter().filter(|&&d| self.agrees(d)).count() % 2 == 0 {
                return Err(PlanarError::BadOrientation);
            }
        }
        Ok(())
    }

    /// Skew-symmetric matrix with `±w(e)` summed over parallel edges.
    pub fn skew_matrix(&self, g: &PlanarGraph, unit: bool) -> Vec<Vec<Rat>> {
        let n = g.vertex_count();
        let mut m = vec![vec![Rat::zero(); n]; n];
        for (e, edge) in g.edges().iter().enumerate() {
            let [mut u, mut v] = edge.ends;
            if !self.forward[e] {
                std::mem::swap(&mut u, &mut v);
            }
            let w = if unit { int(1) } else { edge.weight.clone() };
            m[v][u] -= &w;
            m[u][v] += w;
        }
        m
    }
}

/// Pfaffian orientation from a BFS spanning forest.
pub fn kasteleyn_orient(g: &PlanarGraph) -> Result<Orientation, PlanarError> {
    kasteleyn_orient_with(g, TreeStrategy::Bfs)
}

/// Orients a spanning forest arbitrarily, then fixes the remaining edges by
/// peeling leaves of the dual co-tree so each non-outer face ends odd.
pub fn kasteleyn_orient_with(g: &PlanarGraph, strategy: TreeStrategy) -> Result<Orientation, PlanarError> {
    g.check_genus_zero()?;
    let m = g.edges().len();
    let faces = g.faces();
    let face_of = g.face_of_darts(&faces);
    let mut forward: Vec<Option<bool>> = vec![None; m];
    let mut outer = Vec::new();
    let mut seen = vec![false; g.vertex_count()];
    for s in 0..g.vertex_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        if let Some(&d) = g.rotation(s).first() {
            outer.push(d);
        }
        let mut frontier = VecDeque::from([s]);
        while let Some(u) = match strategy {
            TreeStrategy::Bfs => frontier.pop_front(),
            TreeStrategy::Dfs => frontier.pop_back(),
        } {
            for &d in g.rotation(u) {
                let w = g.head(d);
                if !seen[w] {
                    seen[w] = true;
                    forward[d / 2] = Some(d % 2 == 0);
                    frontier.push_back(w);
                }
            }
        }
    }
    let outer_faces: Vec<usize> = outer.iter().map(|&d| face_of[d]).collect();
    let mut open = vec![0usize; faces.len()];
    for e in 0..m {
        if forward[e].is_none() {
            open[face_of[2 * e]] += 1;
            open[face_of[2 * e + 1]] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..faces.len())
        .filter(|&f| open[f] == 1 && !outer_faces.contains(&f))
        .collect();
    while let Some(f) = queue.pop_front() {
        if open[f] != 1 {
            continue;
        }
        let mut agreeing = 0;
        let mut free = None;
        for &d in &faces[f] {
            match forward[d / 2] {
                Some(fw) if fw == (d % 2 == 0) => agreeing += 1,
                Some(_) => {}
                None => free = Some(d),
            }
        }
        let d = free.expect("face has one open edge");
        let along = d % 2 == 0;
        forward[d / 2] = Some(if agreeing % 2 == 0 { along } else { !along });
        open[f] -= 1;
        let other = face_of[d ^ 1];
        open[other] -= 1;
        if open[other] == 1 && !outer_faces.contains(&other) {
            queue.push_back(other);
        }
    }
    let forward: Option<Vec<bool>> = forward.into_iter().collect();
    let o = Orientation {
        forward: forward.ok_or(PlanarError::BadOrientation)?,
        outer,
    };
    o.verify(g)?;
    Ok(o)
}

/// Weighted perfect-matching sum `Σ_M Π_{e∈M} w(e)`.
pub fn count_pm(g: &PlanarGraph) -> Result<Rat, PlanarError> {
    count_pm_with(g, TreeStrategy::Bfs)
}

/// [`count_pm`] with a chosen spanning-forest strategy.
///
/// Under a Pfaffian orientation every matching contributes with the same
/// sign ε, so the unit-weight Pfaffian equals ε·#matchings. That pins ε
/// whenever a matching exists and shows there is none otherwise.
pub fn count_pm_with(g: &PlanarGraph, strategy: TreeStrategy) -> Result<Rat, PlanarError> {
    if g.vertex_count() % 2 == 1 {
        g.check_genus_zero()?;
        return Ok(Rat::zero());
    }
    let o = kasteleyn_orient_with(g, strategy)?;
    let unit = pfaffian(&o.skew_matrix(g, true))?;
    if unit.is_zero() {
        return Ok(Rat::zero());
    }
    let pf = pfaffian(&o.skew_matrix(g, false))?;
    Ok(if unit.is_negative() { -pf } else { pf })
}

/// Perfect-matching sum by memoized enumeration; no planarity needed.
pub fn count_pm_bruteforce(g: &PlanarGraph) -> Rat {
    let n = g.vertex_count();
    assert!(n <= 64, "enumeration supports at most 64 vertices");
    if n % 2 == 1 {
        return Rat::zero();
    }
    let w = g.weight_matrix();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| v != u && !w[u][v].is_zero()).collect())
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    pm_rec(full, &w, &adj, &mut memo)
}

fn pm_rec(left: u64, w: &[Vec<Rat>], adj: &[Vec<usize>], memo: &mut HashMap<u64, Rat>) -> Rat {
    if left == 0 {
        return int(1);
    }
    if let Some(v) = memo.get(&left) {
        return v.clone();
    }
    let u = left.trailing_zeros() as usize;
    let rest = left & !(1u64 << u);
    let mut total = Rat::zero();
    for &v in &adj[u] {
        if rest >> v & 1 == 1 {
            let sub = pm_rec(rest & !(1u64 << v), w, adj, memo);
            total += &w[u][v] * sub;
        }
    }
    memo.insert(left, total.clone());
    total
}
