//! Graph ensembles with geometry: the n-cycle on the unit circle, the
//! centered m×m grid and the random geometric graph G(n, r) on the unit square.
//!
//! Also home to the exact Voronoi cell areas used by rejection sampling, the
//! nearest-node oracle and the text serialization used by `generate`.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// A node location: a point of the unit square, or an angle on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Position {
    Planar { u: f64, v: f64 },
    Angle(f64),
}

impl Position {
    pub fn planar(u: f64, v: f64) -> Self {
        Position::Planar { u, v }
    }

    /// Angle reduced into `[0, 2π)`.
    pub fn angle(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        Position::Angle(t)
    }

    /// Euclidean distance in the plane, arc length on the circle.
    ///
    /// Panics when the two positions live in different geometries.
    pub fn distance(&self, other: &Position) -> f64 {
        match (self, other) {
            (Position::Planar { u: a, v: b }, Position::Planar { u: c, v: d }) => {
                (a - c).hypot(b - d)
            }
            (Position::Angle(a), Position::Angle(b)) => {
                let d = (a - b).abs().rem_euclid(TAU);
                d.min(TAU - d)
            }
            _ => panic!("distance between planar and circular positions"),
        }
    }

    /// The `u` coordinate; for angles, the fraction of a full turn.
    pub fn first_coordinate(&self) -> f64 {
        match *self {
            Position::Planar { u, .. } => u,
            Position::Angle(t) => t / TAU,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    Cycle,
    Grid,
    Rgg,
}

impl GeometryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GeometryKind::Cycle => "cycle",
            GeometryKind::Grid => "grid",
            GeometryKind::Rgg => "rgg",
        }
    }

    pub fn is_planar(&self) -> bool {
        !matches!(self, GeometryKind::Cycle)
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(GeometryKind::Cycle),
            "grid" => Ok(GeometryKind::Grid),
            "rgg" => Ok(GeometryKind::Rgg),
            other => Err(Error::Parse(format!("unknown geometry kind `{other}`"))),
        }
    }
}

/// An immutable graph with node positions. Neighbor lists are sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    kind: GeometryKind,
    positions: Vec<Position>,
    adjacency: Vec<Vec<usize>>,
    radius: Option<f64>,
    seed: Option<u64>,
}

impl Topology {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn position(&self, node: usize) -> Position {
        self.positions[node]
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Connection radius, for random geometric graphs.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Placement seed, for random geometric graphs.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn are_adjacent(&self, s: usize, t: usize) -> bool {
        self.adjacency[s].binary_search(&t).is_ok()
    }

    /// Distance from node `node` to an arbitrary location.
    pub fn distance_to(&self, node: usize, target: &Position) -> f64 {
        self.positions[node].distance(target)
    }

    /// A location drawn uniformly from the deployment region.
    pub fn random_position<R: Rng + ?Sized>(&self, rng: &mut R) -> Position {
        match self.kind {
            GeometryKind::Cycle => Position::angle(rng.gen::<f64>() * TAU),
            GeometryKind::Grid | GeometryKind::Rgg => Position::planar(rng.gen(), rng.gen()),
        }
    }

    /// Center of the region: `(½, ½)` in the plane, angle 0 on the circle.
    pub fn center(&self) -> Position {
        match self.kind {
            GeometryKind::Cycle => Position::Angle(0.0),
            _ => Position::planar(0.5, 0.5),
        }
    }
}

/// `n` nodes equispaced on the unit circle, node `i` at angle `2πi/n`.
pub fn build_cycle(n: usize) -> Result<Topology> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n >= 3, got {n}")));
    }
    let positions = (0..n)
        .map(|i| Position::Angle(TAU * i as f64 / n as f64))
        .collect();
    let adjacency = (0..n)
        .map(|i| {
            let mut nb = vec![(i + n - 1) % n, (i + 1) % n];
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    Ok(Topology {
        kind: GeometryKind::Cycle,
        positions,
        adjacency,
        radius: None,
        seed: None,
    })
}

/// `m × m` grid at cell centers `((i+½)/m, (j+½)/m)` with 4-neighbor adjacency.
///
/// Node `(i, j)` has id `i·m + j`.
pub fn build_grid(n: usize) -> Result<Topology> {
    let m = integer_sqrt(n);
    if m < 2 || m * m != n {
        return Err(Error::InvalidSize(format!(
            "grid needs a perfect square n = m^2 with m >= 2, got {n}"
        )));
    }
    let mut positions = Vec::with_capacity(n);
    let mut adjacency = Vec::with_capacity(n);
    for i in 0..m {
        for j in 0..m {
            positions.push(Position::planar(
                (i as f64 + 0.5) / m as f64,
                (j as f64 + 0.5) / m as f64,
            ));
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push((i - 1) * m + j);
            }
            if j > 0 {
                nb.push(i * m + j - 1);
            }
            if j + 1 < m {
                nb.push(i * m + j + 1);
            }
            if i + 1 < m {
                nb.push((i + 1) * m + j);
            }
            adjacency.push(nb);
        }
    }
    Ok(Topology {
        kind: GeometryKind::Grid,
        positions,
        adjacency,
        radius: None,
        seed: None,
    })
}

fn integer_sqrt(n: usize) -> usize {
    let mut m = (n as f64).sqrt() as usize;
    while m * m > n {
        m -= 1;
    }
    while (m + 1) * (m + 1) <= n {
        m += 1;
    }
    m
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r <= 0.0 || r > 2f64.sqrt() {
        return Err(Error::InvalidRadius(r));
    }
    Ok(())
}

/// Random geometric graph: `n` i.i.d. uniform points in `[0,1]²`, an edge
/// between every pair at distance strictly below `r`.
pub fn build_rgg(n: usize, r: f64, seed: u64) -> Result<Topology> {
    if n < 1 {
        return Err(Error::InvalidSize("rgg needs n >= 1".into()));
    }
    check_radius(r)?;
    let mut rng = rng::stream(seed, rng::TOPOLOGY_STREAM);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let mut topo = rgg_from_points(&points, r)?;
    topo.seed = Some(seed);
    Ok(topo)
}

/// Random-geometric-graph adjacency over caller-supplied points.
pub fn rgg_from_points(points: &[(f64, f64)], r: f64) -> Result<Topology> {
    check_radius(r)?;
    if let Some(&(u, v)) = points
        .iter()
        .find(|&&(u, v)| !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v))
    {
        return Err(Error::InvalidParameter(format!(
            "point ({u}, {v}) lies outside the unit square"
        )));
    }
    let n = points.len();
    // Bucket points into cells of side >= r so that only the 3x3 block of
    // cells around a point can hold its neighbors.
    let cells = ((1.0 / r).floor() as usize).clamp(1, 1 + (n as f64).sqrt() as usize);
    let cell_of = |x: f64| ((x * cells as f64) as usize).min(cells - 1);
    let mut buckets = vec![Vec::new(); cells * cells];
    for (i, &(u, v)) in points.iter().enumerate() {
        buckets[cell_of(u) * cells + cell_of(v)].push(i);
    }
    let mut adjacency = vec![Vec::new(); n];
    for (i, &(u, v)) in points.iter().enumerate() {
        let (cu, cv) = (cell_of(u), cell_of(v));
        for du in cu.saturating_sub(1)..=(cu + 1).min(cells - 1) {
            for dv in cv.saturating_sub(1)..=(cv + 1).min(cells - 1) {
                for &j in &buckets[du * cells + dv] {
                    if j != i && (u - points[j].0).hypot(v - points[j].1) < r {
                        adjacency[i].push(j);
                    }
                }
            }
        }
        adjacency[i].sort_unstable();
    }
    Ok(Topology {
        kind: GeometryKind::Rgg,
        positions: points.iter().map(|&(u, v)| Position::planar(u, v)).collect(),
        adjacency,
        radius: Some(r),
        seed: None,
    })
}

/// Connectivity radius `√(10·ln n / n)`, capped at `√2`.
pub fn default_radius(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("default radius needs n >= 2, got {n}")));
    }
    Ok(radius_formula(n as f64).min(2f64.sqrt()))
}

fn radius_formula(n: f64) -> f64 {
    (10.0 * n.ln() / n).sqrt()
}

/// Side `√(2·ln n / n)` of the occupancy squares used to check the
/// connectivity regime of [`default_radius`].
pub fn occupancy_side(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n.ln() / n).sqrt()
}

/// Whether each of the `⌊1/side⌋²` full squares of a `side`-spaced partition
/// anchored at the origin holds at least one node. The leftover strips along
/// the right and top edges are narrower than `side` and are not checked.
pub fn all_squares_occupied(t: &Topology, side: f64) -> bool {
    let k = ((1.0 / side).floor() as usize).max(1);
    let mut occupied = vec![false; k * k];
    for p in t.positions() {
        if let Position::Planar { u, v } = *p {
            let (i, j) = ((u / side) as usize, (v / side) as usize);
            if i < k && j < k {
                occupied[i * k + j] = true;
            }
        }
    }
    occupied.into_iter().all(|o| o)
}

/// Per-node Voronoi cell measure, normalized so the areas sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiTessellation {
    areas: Vec<f64>,
}

impl VoronoiTessellation {
    /// Wraps precomputed areas. Values must be positive; they are rescaled to
    /// sum to one.
    pub fn from_areas(areas: Vec<f64>) -> Result<Self> {
        if areas.is_empty() || areas.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidParameter(
                "areas must be a non-empty list of positive values".into(),
            ));
        }
        let total: f64 = areas.iter().sum();
        Ok(Self {
            areas: areas.into_iter().map(|a| a / total).collect(),
        })
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }
}

/// Exact Voronoi cell areas.
///
/// On the circle a node owns half the arc to each angular neighbor. In the
/// square each cell is the unit square clipped by the bisector half-planes of
/// every other node, measured with the shoelace formula.
pub fn voronoi_areas(t: &Topology) -> Result<VoronoiTessellation> {
    if t.n() == 0 {
        return Err(Error::InvalidSize("empty topology".into()));
    }
    let areas = match t.kind {
        GeometryKind::Cycle => arc_areas(t)?,
        GeometryKind::Grid | GeometryKind::Rgg => planar_areas(t)?,
    };
    Ok(VoronoiTessellation { areas })
}

fn arc_areas(t: &Topology) -> Result<Vec<f64>> {
    let n = t.n();
    let mut order: Vec<(f64, usize)> = t
        .positions
        .iter()
        .enumerate()
        .map(|(i, p)| match *p {
            Position::Angle(a) => (a, i),
            Position::Planar { .. } => unreachable!("cycle topology with planar position"),
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    if order.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::DegenerateGeometry("duplicate angles".into()));
    }
    let mut areas = vec![0.0; n];
    if n == 1 {
        areas[0] = 1.0;
        return Ok(areas);
    }
    for k in 0..n {
        let (a, node) = order[k];
        let prev = order[(k + n - 1) % n].0;
        let next = order[(k + 1) % n].0;
        let gap_prev = (a - prev).rem_euclid(TAU);
        let gap_next = (next - a).rem_euclid(TAU);
        areas[node] = (gap_prev + gap_next) / 2.0 / TAU;
    }
    Ok(areas)
}

type Pt = (f64, f64);

fn planar_points(t: &Topology) -> Vec<Pt> {
    t.positions
        .iter()
        .map(|p| match *p {
            Position::Planar { u, v } => (u, v),
            Position::Angle(_) => unreachable!("planar topology with angular position"),
        })
        .collect()
}

fn planar_areas(t: &Topology) -> Result<Vec<f64>> {
    let pts = planar_points(t);
    let mut sorted = pts.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateGeometry("duplicate node positions".into()));
    }
    let mut areas = Vec::with_capacity(pts.len());
    let mut others: Vec<(f64, usize)> = Vec::with_capacity(pts.len());
    for (s, &site) in pts.iter().enumerate() {
        others.clear();
        others.extend(
            pts.iter()
                .enumerate()
                .filter(|&(j, _)| j != s)
                .map(|(j, &p)| ((p.0 - site.0).hypot(p.1 - site.1), j)),
        );
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut cell: Vec<Pt> = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let mut reach = max_vertex_distance(&cell, site);
        for &(d, j) in &others {
            // A site further than twice the cell's reach cannot cut it.
            if d > 2.0 * reach {
                break;
            }
            cell = clip_bisector(&cell, site, pts[j]);
            reach = max_vertex_distance(&cell, site);
        }
        areas.push(shoelace(&cell));
    }
    Ok(areas)
}

fn max_vertex_distance(poly: &[Pt], site: Pt) -> f64 {
    poly.iter()
        .map(|p| (p.0 - site.0).hypot(p.1 - site.1))
        .fold(0.0, f64::max)
}

/// Keeps the part of a convex polygon closer to `site` than to `other`.
fn clip_bisector(poly: &[Pt], site: Pt, other: Pt) -> Vec<Pt> {
    let d = (other.0 - site.0, other.1 - site.1);
    let mid = ((other.0 + site.0) / 2.0, (other.1 + site.1) / 2.0);
    let side = |p: Pt| (p.0 - mid.0) * d.0 + (p.1 - mid.1) * d.1;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let (fa, fb) = (side(a), side(b));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let w = fa / (fa - fb);
            out.push((a.0 + w * (b.0 - a.0), a.1 + w * (b.1 - a.1)));
        }
    }
    out
}

fn shoelace(poly: &[Pt]) -> f64 {
    let twice: f64 = (0..poly.len())
        .map(|k| {
            let a = poly[k];
            let b = poly[(k + 1) % poly.len()];
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    twice.abs() / 2.0
}

/// Global nearest node to `p`; ties go to the lowest id.
pub fn nearest_node(t: &Topology, p: &Position) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, q) in t.positions.iter().enumerate() {
        let d = q.distance(p);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Breadth-first reachability of every node from node 0.
pub fn is_connected(t: &Topology) -> bool {
    let n = t.n();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(s) = queue.pop_front() {
        for &w in &t.adjacency[s] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n
}

/// Writes the text form: a header `n kind r seed` followed by one line
/// `id u v deg neighbor...` per node. Cycle nodes store the angle in the `u`
/// slot and `0` for `v`; cycle and grid headers carry `0 0` for `r seed`.
pub fn write_topology<W: Write + ?Sized>(t: &Topology, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "{} {} {} {}",
        t.n(),
        t.kind,
        t.radius.unwrap_or(0.0),
        t.seed.unwrap_or(0)
    )?;
    for (i, p) in t.positions.iter().enumerate() {
        let (u, v) = match *p {
            Position::Planar { u, v } => (u, v),
            Position::Angle(a) => (a, 0.0),
        };
        write!(out, "{i} {u} {v} {}", t.degree(i))?;
        for nb in &t.adjacency[i] {
            write!(out, " {nb}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Parses the format produced by [`write_topology`].
pub fn read_topology<R: BufRead>(input: R) -> Result<Topology> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::Parse(format!("bad header `{header}`")));
    }
    let n: usize = parse_field(fields[0])?;
    let kind: GeometryKind = fields[1].parse()?;
    let r: f64 = parse_field(fields[2])?;
    let seed: u64 = parse_field(fields[3])?;
    let mut positions = Vec::with_capacity(n);
    let mut adjacency = Vec::with_capacity(n);
    for expected in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing line for node {expected}")))??;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 4 {
            return Err(Error::Parse(format!("short node line `{line}`")));
        }
        let id: usize = parse_field(f[0])?;
        if id != expected {
            return Err(Error::Parse(format!("expected node {expected}, found {id}")));
        }
        let u: f64 = parse_field(f[1])?;
        let v: f64 = parse_field(f[2])?;
        let deg: usize = parse_field(f[3])?;
        if f.len() != 4 + deg {
            return Err(Error::Parse(format!("node {id}: degree {deg} does not match list")));
        }
        let nb = f[4..]
            .iter()
            .map(|s| parse_field::<usize>(s))
            .collect::<Result<Vec<_>>>()?;
        positions.push(match kind {
            GeometryKind::Cycle => Position::Angle(u),
            _ => Position::planar(u, v),
        });
        adjacency.push(nb);
    }
    for (s, nb) in adjacency.iter().enumerate() {
        for &t in nb {
            if t >= n || t == s || adjacency[t].binary_search(&s).is_err() {
                return Err(Error::Parse(format!("asymmetric or invalid edge {s}-{t}")));
            }
        }
    }
    let is_rgg = kind == GeometryKind::Rgg;
    Ok(Topology {
        kind,
        positions,
        adjacency,
        radius: is_rgg.then_some(r),
        seed: is_rgg.then_some(seed),
    })
}

fn parse_field<T: FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse `{s}`")))
}
