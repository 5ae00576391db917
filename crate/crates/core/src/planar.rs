//! Planar networks of bidiagonal factorizations.
//!
//! A network has `n` horizontal tracks and a sequence of layers read left
//! to right. `L_i(w)` contributes a diagonal from track `i` down to track
//! `i-1`, `U_i(w)` one from `i-1` up to `i`, and `D` scales each track.
//! Every other passage through a layer is a horizontal edge of weight 1.
//!
//! The weight of a path is the product of its edge weights, and the minor
//! `A(alpha|beta)` of the composed matrix equals the total weight of all
//! families of vertex-disjoint paths from sources `alpha` to sinks `beta`.
//! Families are summed by a sweep over the set of occupied tracks at each
//! layer boundary, so no path is listed explicitly.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IndexSet;
use crate::rational::Rational;
use crate::seb::{lower_slot_indices, upper_slot_indices, SebFactorization};

/// Track masks are `u64` bitsets.
pub const MAX_TRACKS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "diag", rename_all = "lowercase")]
pub enum Layer {
    /// Diagonal from track `i` to track `i-1`.
    Down { i: usize, w: Rational },
    /// Diagonal from track `i-1` to track `i`.
    Up { i: usize, w: Rational },
    Horizontal { d: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanarNetwork {
    n: usize,
    layers: Vec<Layer>,
}

impl PlanarNetwork {
    /// `n` bare tracks; composes to the identity.
    pub fn empty(n: usize) -> Self {
        PlanarNetwork { n, layers: Vec::new() }
    }

    pub fn new(n: usize, layers: Vec<Layer>) -> Result<Self> {
        if n == 0 || n > MAX_TRACKS {
            return Err(Error::FeasibilityExceeded { dim: n, cap: MAX_TRACKS });
        }
        for layer in &layers {
            let ok = match layer {
                Layer::Down { i, w } | Layer::Up { i, w } => (2..=n).contains(i) && !w.is_negative(),
                Layer::Horizontal { d } => d.len() == n && d.iter().all(|x| !x.is_negative()),
            };
            if !ok {
                return Err(Error::MalformedFactorization(format!("bad layer {layer:?} for {n} tracks")));
            }
        }
        Ok(PlanarNetwork { n, layers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn diagonal_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| !matches!(l, Layer::Horizontal { .. }))
            .count()
    }

    /// Network of the transposed matrix: layers reversed, diagonals flipped.
    pub fn transpose(&self) -> Self {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|l| match l {
                Layer::Down { i, w } => Layer::Up { i: *i, w: w.clone() },
                Layer::Up { i, w } => Layer::Down { i: *i, w: w.clone() },
                h => h.clone(),
            })
            .collect();
        PlanarNetwork { n: self.n, layers }
    }

    /// `copies` concatenated copies of this network.
    pub fn repeat(&self, copies: usize) -> Self {
        let mut layers = Vec::with_capacity(self.layers.len() * copies);
        for _ in 0..copies {
            layers.extend(self.layers.iter().cloned());
        }
        PlanarNetwork { n: self.n, layers }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("network serialization cannot fail")
    }
}

/// One layer per positive multiplier plus the `D` layer, in product order.
pub fn build_network(f: &SebFactorization) -> PlanarNetwork {
    let n = f.n();
    let mut layers = Vec::new();
    for (i, w) in lower_slot_indices(n).into_iter().zip(f.l()) {
        if w.is_positive() {
            layers.push(Layer::Down { i, w: w.clone() });
        }
    }
    layers.push(Layer::Horizontal { d: f.d().to_vec() });
    for (i, w) in upper_slot_indices(n).into_iter().zip(f.u()) {
        if w.is_positive() {
            layers.push(Layer::Up { i, w: w.clone() });
        }
    }
    PlanarNetwork { n, layers }
}

/// `a` followed by `b`; composes to the product `AB`.
pub fn concat(a: &PlanarNetwork, b: &PlanarNetwork) -> Result<PlanarNetwork> {
    if a.n != b.n {
        return Err(Error::TrackMismatch(a.n, b.n));
    }
    let mut layers = a.layers.clone();
    layers.extend(b.layers.iter().cloned());
    Ok(PlanarNetwork { n: a.n, layers })
}

/// Removes every upward diagonal.
pub fn strip_u_diagonals(net: &PlanarNetwork) -> PlanarNetwork {
    PlanarNetwork {
        n: net.n,
        layers: net
            .layers
            .iter()
            .filter(|l| !matches!(l, Layer::Up { .. }))
            .cloned()
            .collect(),
    }
}

fn mask_of(set: &IndexSet) -> u64 {
    set.iter().fold(0, |m, t| m | 1 << (t - 1))
}

fn check_endpoints(net: &PlanarNetwork, sources: &IndexSet, sinks: &IndexSet) -> Result<()> {
    if sources.len() != sinks.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} sources but {} sinks",
            sources.len(),
            sinks.len()
        )));
    }
    if sources.max().unwrap_or(0) > net.n || sinks.max().unwrap_or(0) > net.n {
        return Err(Error::IndexOutOfRange(format!(
            "({sources}|{sinks}) on {} tracks",
            net.n
        )));
    }
    Ok(())
}

/// Moves available to one occupied-track mask inside a diagonal layer:
/// the mask after a path takes the diagonal from `from` to `to`, if legal.
fn diagonal_move(mask: u64, from: usize, to: usize) -> Option<u64> {
    let (f, t) = (1u64 << (from - 1), 1u64 << (to - 1));
    (mask & f != 0 && mask & t == 0).then_some(mask & !f | t)
}

fn sweep_layer(states: HashMap<u64, Rational>, layer: &Layer) -> HashMap<u64, Rational> {
    let mut next: HashMap<u64, Rational> = HashMap::with_capacity(states.len() * 2);
    for (mask, weight) in states {
        match layer {
            Layer::Horizontal { d } => {
                let factor: Rational = (0..d.len())
                    .filter(|t| mask >> t & 1 == 1)
                    .map(|t| &d[t])
                    .product();
                if !factor.is_zero() {
                    *next.entry(mask).or_default() += weight * factor;
                }
            }
            Layer::Down { i, w } | Layer::Up { i, w } => {
                let (from, to) = match layer {
                    Layer::Down { .. } => (*i, *i - 1),
                    _ => (*i - 1, *i),
                };
                if let Some(moved) = diagonal_move(mask, from, to) {
                    if !w.is_zero() {
                        *next.entry(moved).or_default() += &weight * w;
                    }
                }
                *next.entry(mask).or_default() += weight;
            }
        }
    }
    next
}

/// Total weight of vertex-disjoint path families from `sources` to `sinks`.
pub fn minor_via_paths(net: &PlanarNetwork, sources: &IndexSet, sinks: &IndexSet) -> Result<Rational> {
    check_endpoints(net, sources, sinks)?;
    let mut states = HashMap::from([(mask_of(sources), Rational::one())]);
    for layer in &net.layers {
        states = sweep_layer(states, layer);
    }
    Ok(states.remove(&mask_of(sinks)).unwrap_or_default())
}

fn reach_layer(states: &HashSet<u64>, layer: &Layer) -> HashSet<u64> {
    let mut next = HashSet::with_capacity(states.len() * 2);
    for &mask in states {
        match layer {
            Layer::Horizontal { d } => {
                if (0..d.len()).all(|t| mask >> t & 1 == 0 || !d[t].is_zero()) {
                    next.insert(mask);
                }
            }
            Layer::Down { i, w } | Layer::Up { i, w } => {
                next.insert(mask);
                let (from, to) = match layer {
                    Layer::Down { .. } => (*i, *i - 1),
                    _ => (*i - 1, *i),
                };
                if !w.is_zero() {
                    next.extend(diagonal_move(mask, from, to));
                }
            }
        }
    }
    next
}

/// Number of copies needed for a lower-left corner family, or `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Copies {
    Finite(usize),
    Infinite,
}

/// Least `w` such that `w` concatenated copies of `net` carry a family of
/// vertex-disjoint paths from `{n-c+1, ..., n}` to `{1, ..., c}`.
///
/// Every such family needs a down diagonal into each track below the top,
/// so the answer is `Infinite` when some `L_i` layer is missing. Otherwise
/// `n-1` copies always suffice, and failing to find a family by then is
/// reported as `InvariantViolation`.
pub fn min_copies_lower_corner(net: &PlanarNetwork, c: usize) -> Result<Copies> {
    let n = net.n;
    if c == 0 || c >= n {
        return Err(Error::ParamOutOfRange(format!("corner size {c} outside [1, {}]", n - 1)));
    }
    let has_down = |t: usize| {
        net.layers
            .iter()
            .any(|l| matches!(l, Layer::Down { i, w } if *i == t && w.is_positive()))
    };
    if !(2..=n).all(has_down) {
        return Ok(Copies::Infinite);
    }
    let target = mask_of(&IndexSet::range(1, c));
    let mut states = HashSet::from([mask_of(&IndexSet::range(n - c + 1, n))]);
    for w in 1..n {
        for layer in &net.layers {
            states = reach_layer(&states, layer);
        }
        if states.contains(&target) {
            return Ok(Copies::Finite(w));
        }
    }
    Err(Error::InvariantViolation(format!(
        "no corner family of size {c} within {} copies although every down diagonal is present",
        n - 1
    )))
}

/// `max` over corner sizes of [`min_copies_lower_corner`].
pub fn lower_corner_copies(net: &PlanarNetwork) -> Result<Copies> {
    let mut worst = Copies::Finite(1);
    for c in 1..net.n {
        match min_copies_lower_corner(net, c)? {
            Copies::Infinite => return Ok(Copies::Infinite),
            Copies::Finite(w) => {
                if let Copies::Finite(v) = worst {
                    worst = Copies::Finite(v.max(w));
                }
            }
        }
    }
    Ok(worst)
}

/// A family of vertex-disjoint paths, each given by its track at every
/// layer boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamily {
    pub sources: IndexSet,
    pub sinks: IndexSet,
    pub paths: Vec<Vec<usize>>,
    pub weight: Rational,
}

/// Lists every vertex-disjoint family explicitly. Exponential; refuses
/// networks with more than `max_paths` single paths from one source.
pub fn enumerate_families(
    net: &PlanarNetwork,
    sources: &IndexSet,
    sinks: &IndexSet,
    max_paths: usize,
) -> Result<Vec<PathFamily>> {
    check_endpoints(net, sources, sinks)?;
    let single = |source: usize| -> Result<Vec<(Vec<usize>, Rational)>> {
        let mut partial = vec![(vec![source], Rational::one())];
        for layer in &net.layers {
            let mut next = Vec::new();
            for (path, weight) in partial {
                let t = *path.last().expect("paths are never empty");
                let mut push = |to: usize, w: Rational| {
                    if !w.is_zero() {
                        let mut p = path.clone();
                        p.push(to);
                        next.push((p, &weight * &w));
                    }
                };
                match layer {
                    Layer::Horizontal { d } => push(t, d[t - 1].clone()),
                    Layer::Down { i, w } => {
                        push(t, Rational::one());
                        if t == *i {
                            push(t - 1, w.clone());
                        }
                    }
                    Layer::Up { i, w } => {
                        push(t, Rational::one());
                        if t + 1 == *i {
                            push(t + 1, w.clone());
                        }
                    }
                }
            }
            if next.len() > max_paths {
                return Err(Error::FeasibilityExceeded { dim: next.len(), cap: max_paths });
            }
            partial = next;
        }
        Ok(partial)
    };
    let per_source: Vec<Vec<(Vec<usize>, Rational)>> = sources
        .iter()
        .zip(sinks.iter())
        .map(|(s, t)| Ok(single(s)?.into_iter().filter(|(p, _)| p.last() == Some(&t)).collect()))
        .collect::<Result<_>>()?;
    let mut families = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    collect_families(&per_source, &mut chosen, &mut families, sources, sinks);
    Ok(families)
}

fn collect_families(
    per_source: &[Vec<(Vec<usize>, Rational)>],
    chosen: &mut Vec<usize>,
    out: &mut Vec<PathFamily>,
    sources: &IndexSet,
    sinks: &IndexSet,
) {
    let depth = chosen.len();
    if depth == per_source.len() {
        let paths: Vec<Vec<usize>> = chosen.iter().enumerate().map(|(s, &p)| per_source[s][p].0.clone()).collect();
        let weight = chosen.iter().enumerate().map(|(s, &p)| &per_source[s][p].1).product();
        out.push(PathFamily {
            sources: sources.clone(),
            sinks: sinks.clone(),
            paths,
            weight,
        });
        return;
    }
    for (p, (path, _)) in per_source[depth].iter().enumerate() {
        let disjoint = chosen.iter().enumerate().all(|(s, &q)| {
            let other = &per_source[s][q].0;
            other.iter().zip(path).all(|(a, b)| a != b)
        });
        if disjoint {
            chosen.push(p);
            collect_families(per_source, chosen, out, sources, sinks);
            chosen.pop();
        }
    }
}

/// Graphviz rendering. Column `j` holds nodes `c{j}_t{t}`; track 1 is drawn
/// at the bottom. Diagonals and `D` edges carry their weights as labels.
pub fn export_dot(net: &PlanarNetwork) -> String {
    let n = net.n;
    let cols = net.layers.len();
    let mut out = String::new();
    out.push_str("digraph planar {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=point, width=0.08];\n");
    out.push_str("  edge [arrowsize=0.5];\n");
    for j in 0..=cols {
        let nodes: Vec<String> = (1..=n).rev().map(|t| format!("c{j}_t{t}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", nodes.join("; "));
    }
    for t in (1..=n).rev() {
        let _ = writeln!(out, "  c0_t{t} [shape=plaintext, label=\"{t}\"];");
        let _ = writeln!(out, "  c{cols}_t{t} [shape=plaintext, label=\"{t}\"];");
    }
    for (j, layer) in net.layers.iter().enumerate() {
        let k = j + 1;
        for t in (1..=n).rev() {
            match layer {
                Layer::Horizontal { d } => {
                    let _ = writeln!(out, "  c{j}_t{t} -> c{k}_t{t} [label=\"{}\"];", d[t - 1]);
                }
                _ => {
                    let _ = writeln!(out, "  c{j}_t{t} -> c{k}_t{t};");
                }
            }
        }
        match layer {
            Layer::Down { i, w } => {
                let _ = writeln!(out, "  c{j}_t{i} -> c{k}_t{} [label=\"{w}\"];", i - 1);
            }
            Layer::Up { i, w } => {
                let _ = writeln!(out, "  c{j}_t{} -> c{k}_t{i} [label=\"{w}\"];", i - 1);
            }
            Layer::Horizontal { .. } => {}
        }
    }
    out.push_str("}\n");
    out
}
