//! Curves and arcs as dart paths, their crossings, and region analysis.
//!
//! A closed curve is a closed dart path; an arc is an open one with both
//! endpoints on boundary vertices. Two strands meet only at shared vertices;
//! they cross there when their four darts interleave in the rotation, and
//! merely touch otherwise (diagrams reject touching as non-transversal).
//!
//! Region analysis cuts the surface along a chosen set of paths without
//! building the cut map: complementary regions are unions of faces glued
//! across unused edges, and each region's Euler characteristic and boundary
//! walks are read off directly. Almost every verification in the crate
//! (bigon detection, cut-system checking, parallelism, separation) reduces
//! to questions about regions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Cell, CombMap, Dart, Path};
use crate::surface::Surface;

/// Role a closed curve plays in a diagram family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveTag {
    /// Cuts a genus handle: non-separating on the diagram surface.
    Essential,
    /// Separates boundary components from each other.
    Separating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub path: Path,
    pub tag: CurveTag,
}

impl Curve {
    pub fn essential(darts: Vec<Dart>) -> Curve {
        Curve { path: Path::closed(darts), tag: CurveTag::Essential }
    }
    pub fn separating(darts: Vec<Dart>) -> Curve {
        Curve { path: Path::closed(darts), tag: CurveTag::Separating }
    }
}

/// One family of disjoint simple closed curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CurveSystem {
    pub curves: Vec<Curve>,
}

impl CurveSystem {
    pub fn new(curves: Vec<Curve>) -> CurveSystem {
        CurveSystem { curves }
    }
    pub fn paths(&self) -> Vec<&Path> {
        self.curves.iter().map(|c| &c.path).collect()
    }
    pub fn essential_paths(&self) -> Vec<&Path> {
        self.curves
            .iter()
            .filter(|c| c.tag == CurveTag::Essential)
            .map(|c| &c.path)
            .collect()
    }
    pub fn len(&self) -> usize {
        self.curves.len()
    }
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }
}

/// A system of disjoint properly embedded arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ArcSystem {
    pub arcs: Vec<Path>,
}

impl ArcSystem {
    pub fn new(arcs: Vec<Path>) -> ArcSystem {
        ArcSystem { arcs }
    }
    pub fn paths(&self) -> Vec<&Path> {
        self.arcs.iter().collect()
    }
    pub fn len(&self) -> usize {
        self.arcs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// A strand passing through a vertex: `p_in` points back along the arrival
/// edge, `p_out` is the departure dart. Both are based at the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrandPassage {
    pub p_in: Dart,
    pub p_out: Dart,
    pub path_idx: usize,
    /// Index of the departing dart within the path.
    pub step: usize,
}

/// All vertex passages of a path. For open paths the two endpoints are not
/// passages.
pub fn passages(map: &CombMap, path: &Path, path_idx: usize) -> Vec<StrandPassage> {
    let m = path.darts.len();
    let mut out = Vec::new();
    let from = if path.closed { 0 } else { 1 };
    for step in from..m {
        let arrive = path.darts[(step + m - 1) % m];
        let leave = path.darts[step];
        out.push(StrandPassage { p_in: map.twin(arrive), p_out: leave, path_idx, step });
    }
    out
}

/// Check a family is embedded: every path a valid walk, and no vertex used
/// twice across the family (passages and endpoints all at distinct
/// vertices). Closed paths must have no repeated vertices; arcs must also
/// keep their endpoints apart.
pub fn check_embedded(map: &CombMap, paths: &[&Path]) -> Result<()> {
    let orbits = map.orbits();
    let mut used_vertex: Vec<bool> = vec![false; orbits.vertex_reps.len()];
    let mut touch = |d: Dart| -> Result<()> {
        let v = orbits.vertex_id[d.idx()];
        if used_vertex[v] {
            return Err(Error::InvalidCurve(format!(
                "system not embedded: vertex of {d} visited twice"
            )));
        }
        used_vertex[v] = true;
        Ok(())
    };
    for path in paths {
        map.check_path(path)?;
        for &d in &path.darts {
            touch(d)?;
        }
        if !path.closed {
            // Trailing endpoint vertex.
            touch(map.twin(*path.darts.last().unwrap()))?;
        }
    }
    Ok(())
}

/// A transversal crossing of two strands at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    /// (path index, step) within the first system.
    pub on_a: (usize, usize),
    /// (path index, step) within the second system.
    pub on_b: (usize, usize),
    /// A dart based at the crossing vertex (the first strand's departure).
    pub vertex: Dart,
    /// +1 when the second strand crosses the first left-to-right.
    pub sign: i8,
}

/// A non-transversal meeting (shared vertex without interleaving).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tangency {
    pub on_a: (usize, usize),
    pub on_b: (usize, usize),
    pub vertex: Dart,
}

#[derive(Debug, Clone, Default)]
pub struct Meetings {
    pub crossings: Vec<Crossing>,
    pub tangencies: Vec<Tangency>,
}

/// Cyclic position scan: all meetings between two systems of paths.
pub fn meetings(map: &CombMap, sys_a: &[&Path], sys_b: &[&Path]) -> Meetings {
    let orbits = map.orbits();
    let nv = orbits.vertex_reps.len();
    let mut at_vertex_a: Vec<Vec<StrandPassage>> = vec![Vec::new(); nv];
    for (i, p) in sys_a.iter().enumerate() {
        for pass in passages(map, p, i) {
            at_vertex_a[orbits.vertex_id[pass.p_out.idx()]].push(pass);
        }
    }
    let mut out = Meetings::default();
    for (j, q) in sys_b.iter().enumerate() {
        for qpass in passages(map, q, j) {
            let v = orbits.vertex_id[qpass.p_out.idx()];
            for apass in &at_vertex_a[v] {
                match crossing_sign(map, apass, &qpass) {
                    Some(sign) => out.crossings.push(Crossing {
                        on_a: (apass.path_idx, apass.step),
                        on_b: (qpass.path_idx, qpass.step),
                        vertex: apass.p_out,
                        sign,
                    }),
                    None => out.tangencies.push(Tangency {
                        on_a: (apass.path_idx, apass.step),
                        on_b: (qpass.path_idx, qpass.step),
                        vertex: apass.p_out,
                    }),
                }
            }
        }
    }
    out
}

/// Sign of the crossing of strand `b` over strand `a` at their shared
/// vertex: +1 when the rotation order is (a_out, b_out, a_in, b_in), -1 for
/// (a_out, b_in, a_in, b_out), and None when the strands do not interleave.
fn crossing_sign(map: &CombMap, a: &StrandPassage, b: &StrandPassage) -> Option<i8> {
    crossing_probe(|d| map.next(d), a.p_in, a.p_out, b.p_in, b.p_out)
}

/// The same probe with the rotation supplied as a closure, usable mid-edit.
pub fn crossing_probe(
    next: impl Fn(Dart) -> Dart,
    a_in: Dart,
    a_out: Dart,
    b_in: Dart,
    b_out: Dart,
) -> Option<i8> {
    // Walk the rotation once starting at a_out, recording the order in
    // which the other three darts appear.
    let mut order = Vec::with_capacity(3);
    let mut d = next(a_out);
    while d != a_out {
        if d == b_out || d == a_in || d == b_in {
            order.push(d);
        }
        d = next(d);
    }
    if order.len() != 3 {
        // Shared darts between the strands: degenerate, treat as tangency.
        return None;
    }
    if order == [b_out, a_in, b_in] {
        Some(1)
    } else if order == [b_in, a_in, b_out] {
        Some(-1)
    } else {
        None
    }
}

/// Pairing matrix of two systems: entry (i, j) sums crossing signs between
/// curve i of the first and curve j of the second.
pub fn algebraic_matrix(map: &CombMap, sys_a: &[&Path], sys_b: &[&Path]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; sys_b.len()]; sys_a.len()];
    for c in meetings(map, sys_a, sys_b).crossings {
        m[c.on_a.0][c.on_b.0] += c.sign as i64;
    }
    m
}

/// Entry (i, j) counts crossings regardless of sign.
pub fn geometric_matrix(map: &CombMap, sys_a: &[&Path], sys_b: &[&Path]) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0u64; sys_b.len()]; sys_a.len()];
    for c in meetings(map, sys_a, sys_b).crossings {
        m[c.on_a.0][c.on_b.0] += 1;
    }
    m
}

/// Rank over the rationals of an integer matrix, by fraction-free Gaussian
/// elimination.
pub fn matrix_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<i128>> =
        m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, p);
        for r in 0..rows {
            if r != row && a[r][col] != 0 {
                let (num, den) = (a[r][col], a[row][col]);
                for c in 0..cols {
                    a[r][c] = a[r][c] * den - a[row][c] * num;
                }
                let g = row_gcd(&a[r]);
                if g > 1 {
                    for c in 0..cols {
                        a[r][c] /= g;
                    }
                }
            }
        }
        row += 1;
        rank += 1;
        if row == rows {
            break;
        }
    }
    rank
}

fn row_gcd(row: &[i128]) -> i128 {
    let mut g = 0i128;
    for &x in row {
        g = gcd(g, x.abs());
        if g == 1 {
            break;
        }
    }
    g.max(1)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// One crossing of an original edge, recorded by the ancestry cells seen on
/// the left and right of the strand. Reversing direction swaps the fields,
/// which is what makes backtracking cancellation `(l,r)(r,l)` well defined
/// with no global edge registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeCrossing {
    pub left: Cell,
    pub right: Cell,
}

impl EdgeCrossing {
    pub fn reversed(self) -> EdgeCrossing {
        EdgeCrossing { left: self.right, right: self.left }
    }
}

/// The itinerary of a path: the sequence of original-edge crossings it makes,
/// optionally restricted to a tracked set of cells. Two darts at a vertex
/// count as pieces of one original edge when `cell(twin(d1)) == cell(d2)`
/// and vice versa.
pub fn itinerary(
    map: &CombMap,
    path: &Path,
    tracked: Option<&BTreeSet<Cell>>,
) -> Vec<EdgeCrossing> {
    let mut out = Vec::new();
    for pass in passages(map, path, 0) {
        let v = map.vertex_walk(pass.p_out);
        for (i, &d1) in v.iter().enumerate() {
            if d1 == pass.p_in || d1 == pass.p_out {
                continue;
            }
            for &d2 in &v[i + 1..] {
                if d2 == pass.p_in || d2 == pass.p_out {
                    continue;
                }
                if map.edge_cell(map.twin(d1)) != map.edge_cell(d2)
                    || map.edge_cell(map.twin(d2)) != map.edge_cell(d1)
                {
                    continue;
                }
                // Transversal test: does (d1, d2) interleave the passage?
                let probe = StrandPassage { p_in: d1, p_out: d2, path_idx: 0, step: 0 };
                let Some(sign) = crossing_sign(map, &pass, &probe) else { continue };
                // sign=+1 means rotation order (p_out, d2, p_in, d1):
                // d2 on the left of travel.
                let (l, r) = if sign > 0 { (d2, d1) } else { (d1, d2) };
                let rec = EdgeCrossing { left: map.edge_cell(l), right: map.edge_cell(r) };
                if let Some(t) = tracked {
                    if !t.contains(&rec.left) && !t.contains(&rec.right) {
                        continue;
                    }
                }
                out.push(rec);
            }
        }
    }
    out
}

/// Free reduction: cancel adjacent crossing pairs of one edge in opposite
/// directions. For closed paths the reduction is cyclic.
pub fn reduce_itinerary(mut word: Vec<EdgeCrossing>, closed: bool) -> Vec<EdgeCrossing> {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < word.len() {
            if word[i + 1] == word[i].reversed() {
                word.drain(i..=i + 1);
                changed = true;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        if closed && word.len() >= 2 && word[0] == word[word.len() - 1].reversed() {
            word.pop();
            word.remove(0);
            changed = true;
        }
        if !changed {
            return word;
        }
    }
}

/// Canonical form of a closed itinerary: lexicographic minimum over
/// rotations of both directions.
pub fn canonical_closed_itinerary(word: &[EdgeCrossing]) -> Vec<EdgeCrossing> {
    if word.is_empty() {
        return Vec::new();
    }
    let mut best: Option<Vec<EdgeCrossing>> = None;
    let mut consider = |w: &[EdgeCrossing]| {
        for s in 0..w.len() {
            let rot: Vec<EdgeCrossing> =
                w[s..].iter().chain(w[..s].iter()).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    };
    consider(word);
    let rev: Vec<EdgeCrossing> = word.iter().rev().map(|c| c.reversed()).collect();
    consider(&rev);
    best.unwrap()
}

/// Which wall a region-boundary side belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    /// Side of an edge used by walls path `path_idx` at `step`.
    Strand { sys: usize, path_idx: usize, step: usize, with_direction: bool },
    /// Side of an edge on a marked boundary face.
    SurfaceBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WallSide {
    pub dart: Dart,
    pub kind: WallKind,
}

#[derive(Debug, Clone)]
pub struct Region {
    /// Face orbit ids (in the map's orbit numbering) forming the region.
    pub faces: Vec<usize>,
    /// Euler characteristic of the region cut open along its walls.
    pub euler: i64,
    /// Boundary walks, each a cyclic sequence of wall sides.
    pub cycles: Vec<Vec<WallSide>>,
}

impl Region {
    pub fn is_disk(&self) -> bool {
        self.euler == 1 && self.cycles.len() == 1
    }

    /// Maximal runs of consecutive sides from one strand (ignoring
    /// direction), per boundary cycle. A bigon shows up as a disk with one
    /// cycle of exactly two runs from different paths.
    pub fn runs(&self, cycle: usize) -> Vec<(usize, usize, usize)> {
        let cyc = &self.cycles[cycle];
        let key = |w: &WallSide| match w.kind {
            WallKind::Strand { sys, path_idx, .. } => (sys, path_idx, 0usize),
            WallKind::SurfaceBoundary => (usize::MAX, usize::MAX, 1),
        };
        let mut runs: Vec<(usize, usize, usize)> = Vec::new();
        for w in cyc {
            let k = key(w);
            match runs.last_mut() {
                Some(last) if (last.0, last.1) == (k.0, k.1) => last.2 += 1,
                _ => runs.push((k.0, k.1, 1)),
            }
        }
        if runs.len() > 1 {
            let first = runs[0];
            let last = *runs.last().unwrap();
            if (first.0, first.1) == (last.0, last.1) {
                runs[0].2 += last.2;
                runs.pop();
            }
        }
        runs
    }
}

#[derive(Debug, Clone)]
pub struct RegionAnalysis {
    /// Region index per face orbit id; `usize::MAX` for marked faces.
    pub region_of_face: Vec<usize>,
    pub regions: Vec<Region>,
}

impl RegionAnalysis {
    pub fn region_of(&self, map: &CombMap, d: Dart) -> Option<usize> {
        let orbits = map.orbits();
        let r = self.region_of_face[orbits.face_id[d.idx()]];
        (r != usize::MAX).then_some(r)
    }
}

/// Cut the surface along every path of every system in `walls` and classify
/// the complementary regions. Marked boundary faces are excluded; their
/// edges count as walls of kind `SurfaceBoundary`.
pub fn regions(surface: &Surface, walls: &[&[&Path]]) -> RegionAnalysis {
    let map = &surface.map;
    let orbits = map.orbits();
    let n = map.dart_count();

    // wall_of[d] = Some(kind) when the edge side at d is a wall.
    let mut wall_of: Vec<Option<WallKind>> = vec![None; n];
    let mut marked_face = vec![false; orbits.face_reps.len()];
    for m in &surface.boundary {
        marked_face[orbits.face_id[m.dart.idx()]] = true;
    }
    for d in map.darts() {
        if marked_face[orbits.face_id[map.twin(d).idx()]] {
            wall_of[d.idx()] = Some(WallKind::SurfaceBoundary);
        }
    }
    for (sys, paths) in walls.iter().enumerate() {
        for (path_idx, path) in paths.iter().enumerate() {
            for (step, &d) in path.darts.iter().enumerate() {
                wall_of[d.idx()] =
                    Some(WallKind::Strand { sys, path_idx, step, with_direction: true });
                wall_of[map.twin(d).idx()] =
                    Some(WallKind::Strand { sys, path_idx, step, with_direction: false });
            }
        }
    }

    // Union-find over real faces across non-wall edges.
    let nf = orbits.face_reps.len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for d in map.darts() {
        if wall_of[d.idx()].is_some() || wall_of[map.twin(d).idx()].is_some() {
            continue;
        }
        let (a, b) = (orbits.face_id[d.idx()], orbits.face_id[map.twin(d).idx()]);
        debug_assert!(!marked_face[a] && !marked_face[b]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut region_of_face = vec![usize::MAX; nf];
    let mut region_faces: Vec<Vec<usize>> = Vec::new();
    for f in 0..nf {
        if marked_face[f] {
            continue;
        }
        let r = find(&mut parent, f);
        if region_of_face[r] == usize::MAX {
            region_of_face[r] = region_faces.len();
            region_faces.push(Vec::new());
        }
        let id = region_of_face[r];
        region_of_face[f] = id;
        region_faces[id].push(f);
    }

    // Boundary cycles: orbits of "next wall side along the region boundary".
    let mut cycles_by_region: Vec<Vec<Vec<WallSide>>> = vec![Vec::new(); region_faces.len()];
    let mut visited = vec![false; n];
    for d0 in map.darts() {
        if visited[d0.idx()] || wall_of[d0.idx()].is_none() {
            continue;
        }
        if marked_face[orbits.face_id[d0.idx()]] {
            continue;
        }
        let region = region_of_face[orbits.face_id[d0.idx()]];
        let mut cycle = Vec::new();
        let mut d = d0;
        loop {
            visited[d.idx()] = true;
            cycle.push(WallSide { dart: d, kind: wall_of[d.idx()].unwrap() });
            // Advance along the region boundary: walk the face, crossing
            // interior edges.
            let mut e = map.face_next(d);
            while wall_of[e.idx()].is_none() {
                e = map.face_next(map.twin(e));
            }
            d = e;
            if d == d0 {
                break;
            }
        }
        cycles_by_region[region].push(cycle);
    }

    // Interior counts for the Euler characteristic: a vertex is interior
    // when no wall side is based there; an edge is interior when neither
    // side is a wall. Boundary contributions cancel (equal numbers of
    // boundary vertices and boundary edge-sides per cycle).
    let mut vertex_has_wall = vec![false; orbits.vertex_reps.len()];
    for d in map.darts() {
        if wall_of[d.idx()].is_some() || wall_of[map.twin(d).idx()].is_some() {
            vertex_has_wall[orbits.vertex_id[d.idx()]] = true;
        }
    }
    let mut interior_v = vec![0i64; region_faces.len()];
    let mut counted_vertex = vec![false; orbits.vertex_reps.len()];
    for d in map.darts() {
        let v = orbits.vertex_id[d.idx()];
        if vertex_has_wall[v] || counted_vertex[v] {
            continue;
        }
        counted_vertex[v] = true;
        interior_v[region_of_face[orbits.face_id[d.idx()]]] += 1;
    }
    let mut interior_e = vec![0i64; region_faces.len()];
    for d in map.darts() {
        if d.idx() < map.twin(d).idx()
            && wall_of[d.idx()].is_none()
            && wall_of[map.twin(d).idx()].is_none()
        {
            interior_e[region_of_face[orbits.face_id[d.idx()]]] += 1;
        }
    }

    let regions = region_faces
        .iter()
        .enumerate()
        .map(|(i, faces)| Region {
            faces: faces.clone(),
            euler: interior_v[i] - interior_e[i] + faces.len() as i64,
            cycles: std::mem::take(&mut cycles_by_region[i]),
        })
        .collect();
    RegionAnalysis { region_of_face, regions }
}

/// Is the closed curve separating on its connected surface? (Cutting along
/// it increases the region count.)
pub fn is_separating(surface: &Surface, curve: &Path) -> bool {
    let binding = [curve];
    let walls: &[&[&Path]] = &[&binding];
    let analysis = regions(surface, walls);
    let (_, comps) = surface.map.components();
    analysis.regions.len() > comps
}

/// Do the cut-open complementary pieces of the given systems consist
/// entirely of disks?
pub fn cuts_to_disks(surface: &Surface, walls: &[&[&Path]]) -> bool {
    let analysis = regions(surface, walls);
    analysis.regions.iter().all(|r| r.is_disk())
}
