//! Combinatorial maps: closed oriented surfaces as rotation systems.
//!
//! A map is a set of darts (directed half-edges) with two permutations: the
//! rotation `next` (counterclockwise order of darts around their tail vertex)
//! and the pairing `twin` (a fixed-point-free involution matching the two
//! darts of each edge). Faces are the orbits of `phi = next . twin`. Every
//! rotation system describes a closed *oriented* surface, one per connected
//! component; surfaces with boundary are represented by marking faces as
//! boundary.
//!
//! Darts carry two ancestry ids: the original co-oriented edge side and the
//! original face they descend from. Ancestry survives every editing
//! operation, which is what lets two differently-refined descendants of the
//! same surface compare curves with each other. The two darts of an original
//! edge get distinct cells; pieces of a subdivided edge inherit the cell of
//! the direction they continue, so at a subdivision vertex the two collinear
//! darts d1, d2 satisfy `cell(twin(d1)) == cell(d2)` — that equation is the
//! structural test for "same original edge" and fails for unrelated darts.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A directed half-edge, identified by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dart(pub u32);

impl Dart {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for Dart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d{}", self.0)
    }
}

/// Ancestry id of an original cell (edge or face). Allocated from a
/// process-global counter so ids stay unique across maps derived from each
/// other by gluing or refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell(pub u64);

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "c{}", self.0)
    }
}

static CELL_COUNTER: AtomicU64 = AtomicU64::new(1);

pub fn fresh_cell() -> Cell {
    Cell(CELL_COUNTER.fetch_add(1, Ordering::Relaxed))
}

/// Ensure future fresh cells don't collide with ids restored from a file.
pub fn reserve_cells_through(max_seen: Cell) {
    CELL_COUNTER.fetch_max(max_seen.0 + 1, Ordering::Relaxed);
}

/// A dart path: a walk in the map. Consecutive darts are head-to-tail
/// (`head(d_i) = tail(d_{i+1})`); a closed path also joins last to first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub darts: Vec<Dart>,
    pub closed: bool,
}

impl Path {
    pub fn closed(darts: Vec<Dart>) -> Self {
        Path { darts, closed: true }
    }
    pub fn open(darts: Vec<Dart>) -> Self {
        Path { darts, closed: false }
    }
    pub fn len(&self) -> usize {
        self.darts.len()
    }
    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// An immutable combinatorial map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombMap {
    next: Vec<Dart>,
    prev: Vec<Dart>,
    twin: Vec<Dart>,
    edge_cell: Vec<Cell>,
    face_cell: Vec<Cell>,
}

impl CombMap {
    /// Build from the rotation permutation and the pairing involution, both
    /// given as dart-index vectors. Fresh ancestry cells are allocated, one
    /// per edge and one per face.
    pub fn from_permutations(next: Vec<u32>, twin: Vec<u32>) -> Result<CombMap> {
        let n = next.len();
        if twin.len() != n {
            return Err(Error::InvalidMap(format!(
                "rotation has {} darts but pairing has {}",
                n,
                twin.len()
            )));
        }
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidMap(format!(
                "dart count must be positive and even, got {n}"
            )));
        }
        let mut seen = vec![false; n];
        for &d in &next {
            let i = d as usize;
            if i >= n {
                return Err(Error::InvalidMap(format!("rotation image {d} out of range")));
            }
            if seen[i] {
                return Err(Error::InvalidMap(format!("rotation not a permutation: {d} repeated")));
            }
            seen[i] = true;
        }
        for (i, &t) in twin.iter().enumerate() {
            let ti = t as usize;
            if ti >= n {
                return Err(Error::InvalidMap(format!("pairing image {t} out of range")));
            }
            if ti == i {
                return Err(Error::InvalidMap(format!("pairing fixes dart {i}")));
            }
            if twin[ti] as usize != i {
                return Err(Error::InvalidMap(format!("pairing not an involution at dart {i}")));
            }
        }
        let next: Vec<Dart> = next.into_iter().map(Dart).collect();
        let twin: Vec<Dart> = twin.into_iter().map(Dart).collect();
        let mut prev = vec![Dart(0); n];
        for (i, &nx) in next.iter().enumerate() {
            prev[nx.idx()] = Dart(i as u32);
        }
        // One ancestry cell per dart: each co-orientation of each edge.
        let edge_cell: Vec<Cell> = (0..n).map(|_| fresh_cell()).collect();
        // One ancestry cell per face orbit.
        let mut face_cell = vec![Cell(0); n];
        for i in 0..n {
            if face_cell[i] != Cell(0) {
                continue;
            }
            let c = fresh_cell();
            let mut d = Dart(i as u32);
            loop {
                face_cell[d.idx()] = c;
                d = next[twin[d.idx()].idx()];
                if d.idx() == i {
                    break;
                }
            }
        }
        Ok(CombMap { next, prev, twin, edge_cell, face_cell })
    }

    /// Rebuild a map with ancestry cells supplied (deserialization path).
    pub fn from_parts(
        next: Vec<u32>,
        twin: Vec<u32>,
        edge_cell: Vec<Cell>,
        face_cell: Vec<Cell>,
    ) -> Result<CombMap> {
        let mut m = CombMap::from_permutations(next, twin)?;
        let n = m.dart_count();
        if edge_cell.len() != n || face_cell.len() != n {
            return Err(Error::InvalidMap("ancestry vectors have wrong length".into()));
        }
        let max = edge_cell.iter().chain(face_cell.iter()).copied().max().unwrap_or(Cell(0));
        reserve_cells_through(max);
        m.edge_cell = edge_cell;
        m.face_cell = face_cell;
        Ok(m)
    }

    pub fn dart_count(&self) -> usize {
        self.next.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.next.len() as u32).map(Dart)
    }

    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d.idx()]
    }
    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d.idx()]
    }
    #[inline]
    pub fn twin(&self, d: Dart) -> Dart {
        self.twin[d.idx()]
    }
    /// Face permutation: the next dart along the face walk on the left of `d`.
    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        self.next[self.twin[d.idx()].idx()]
    }
    #[inline]
    pub fn face_prev(&self, d: Dart) -> Dart {
        self.twin[self.prev[d.idx()].idx()]
    }
    #[inline]
    pub fn edge_cell(&self, d: Dart) -> Cell {
        self.edge_cell[d.idx()]
    }
    #[inline]
    pub fn face_cell(&self, d: Dart) -> Cell {
        self.face_cell[d.idx()]
    }

    pub fn raw_next(&self) -> Vec<u32> {
        self.next.iter().map(|d| d.0).collect()
    }
    pub fn raw_twin(&self) -> Vec<u32> {
        self.twin.iter().map(|d| d.0).collect()
    }
    pub fn raw_edge_cells(&self) -> &[Cell] {
        &self.edge_cell
    }
    pub fn raw_face_cells(&self) -> &[Cell] {
        &self.face_cell
    }

    /// All darts of the vertex at the tail of `d`, in rotation order.
    pub fn vertex_walk(&self, d: Dart) -> Vec<Dart> {
        orbit(d, |x| self.next(x))
    }

    /// All darts of the face on the left of `d`, in walk order.
    pub fn face_walk(&self, d: Dart) -> Vec<Dart> {
        orbit(d, |x| self.face_next(x))
    }

    pub fn same_vertex(&self, a: Dart, b: Dart) -> bool {
        in_orbit(a, b, |x| self.next(x))
    }

    pub fn same_face(&self, a: Dart, b: Dart) -> bool {
        in_orbit(a, b, |x| self.face_next(x))
    }

    pub fn vertex_degree(&self, d: Dart) -> usize {
        self.vertex_walk(d).len()
    }

    pub fn orbits(&self) -> Orbits {
        let n = self.dart_count();
        let mut vertex_id = vec![usize::MAX; n];
        let mut vertex_reps = Vec::new();
        for i in 0..n {
            if vertex_id[i] != usize::MAX {
                continue;
            }
            let id = vertex_reps.len();
            vertex_reps.push(Dart(i as u32));
            let mut d = Dart(i as u32);
            loop {
                vertex_id[d.idx()] = id;
                d = self.next(d);
                if d.idx() == i {
                    break;
                }
            }
        }
        let mut face_id = vec![usize::MAX; n];
        let mut face_reps = Vec::new();
        for i in 0..n {
            if face_id[i] != usize::MAX {
                continue;
            }
            let id = face_reps.len();
            face_reps.push(Dart(i as u32));
            let mut d = Dart(i as u32);
            loop {
                face_id[d.idx()] = id;
                d = self.face_next(d);
                if d.idx() == i {
                    break;
                }
            }
        }
        let mut edge_id = vec![usize::MAX; n];
        let mut edge_reps = Vec::new();
        for i in 0..n {
            if edge_id[i] != usize::MAX {
                continue;
            }
            let id = edge_reps.len();
            edge_reps.push(Dart(i as u32));
            edge_id[i] = id;
            edge_id[self.twin(Dart(i as u32)).idx()] = id;
        }
        Orbits { vertex_id, vertex_reps, face_id, face_reps, edge_id, edge_reps }
    }

    /// Connected components: component id per dart plus the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.dart_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = count;
            count += 1;
            let mut stack = vec![Dart(start as u32)];
            while let Some(d) = stack.pop() {
                if comp[d.idx()] != usize::MAX {
                    continue;
                }
                comp[d.idx()] = id;
                stack.push(self.next(d));
                stack.push(self.twin(d));
            }
        }
        (comp, count)
    }

    /// Classify each connected component as a closed oriented surface, with
    /// the faces listed in `boundary` removed as open disks. Boundary faces
    /// are given by any dart on their walk.
    pub fn classify(&self, boundary: &[Dart]) -> Result<Vec<ComponentInfo>> {
        let orbits = self.orbits();
        let (comp, count) = self.components();
        let mut bset = vec![false; orbits.face_reps.len()];
        for &d in boundary {
            let f = orbits.face_id[d.idx()];
            if bset[f] {
                return Err(Error::InvalidMap(format!(
                    "face of {d} marked as boundary twice"
                )));
            }
            bset[f] = true;
        }
        let mut infos = vec![
            ComponentInfo {
                vertices: 0,
                edges: 0,
                interior_faces: 0,
                boundary_faces: 0,
                euler: 0,
                genus: 0,
            };
            count
        ];
        for (v, &rep) in orbits.vertex_reps.iter().enumerate() {
            let _ = v;
            infos[comp[rep.idx()]].vertices += 1;
        }
        for &rep in &orbits.edge_reps {
            infos[comp[rep.idx()]].edges += 1;
        }
        for (f, &rep) in orbits.face_reps.iter().enumerate() {
            let info = &mut infos[comp[rep.idx()]];
            if bset[f] {
                info.boundary_faces += 1;
            } else {
                info.interior_faces += 1;
            }
        }
        for info in &mut infos {
            let closed_euler =
                info.vertices as i64 - info.edges as i64 + info.interior_faces as i64
                    + info.boundary_faces as i64;
            // Rotation systems always describe closed oriented surfaces, so
            // the closed Euler characteristic is even and at most 2.
            if closed_euler % 2 != 0 || closed_euler > 2 {
                return Err(Error::InvalidMap(format!(
                    "impossible Euler characteristic {closed_euler} for a component"
                )));
            }
            info.euler = closed_euler - info.boundary_faces as i64;
            info.genus = ((2 - closed_euler) / 2) as u32;
        }
        Ok(infos)
    }

    /// Disjoint union. Darts of `other` are shifted by `self.dart_count()`;
    /// the shift is returned so callers can relocate paths. Ancestry cells
    /// are preserved from both sides.
    pub fn disjoint_union(&self, other: &CombMap) -> (CombMap, u32) {
        let shift = self.dart_count() as u32;
        let mut next = self.next.clone();
        let mut prev = self.prev.clone();
        let mut twin = self.twin.clone();
        let mut edge_cell = self.edge_cell.clone();
        let mut face_cell = self.face_cell.clone();
        next.extend(other.next.iter().map(|d| Dart(d.0 + shift)));
        prev.extend(other.prev.iter().map(|d| Dart(d.0 + shift)));
        twin.extend(other.twin.iter().map(|d| Dart(d.0 + shift)));
        edge_cell.extend_from_slice(&other.edge_cell);
        face_cell.extend_from_slice(&other.face_cell);
        (CombMap { next, prev, twin, edge_cell, face_cell }, shift)
    }

    /// Check a path is a valid walk: consecutive darts head-to-tail.
    pub fn check_path(&self, path: &Path) -> Result<()> {
        if path.darts.is_empty() {
            return Err(Error::InvalidCurve("empty path".into()));
        }
        let m = path.darts.len();
        let upto = if path.closed { m } else { m - 1 };
        for i in 0..upto {
            let d = path.darts[i];
            let e = path.darts[(i + 1) % m];
            // head(d) is the tail vertex of twin(d)
            if !self.same_vertex(self.twin(d), e) {
                return Err(Error::InvalidCurve(format!(
                    "path breaks between {d} and {e}: not head-to-tail"
                )));
            }
        }
        Ok(())
    }
}

fn orbit(start: Dart, mut step: impl FnMut(Dart) -> Dart) -> Vec<Dart> {
    let mut out = vec![start];
    let mut d = step(start);
    while d != start {
        out.push(d);
        d = step(d);
    }
    out
}

fn in_orbit(start: Dart, target: Dart, mut step: impl FnMut(Dart) -> Dart) -> bool {
    if start == target {
        return true;
    }
    let mut d = step(start);
    while d != start {
        if d == target {
            return true;
        }
        d = step(d);
    }
    false
}

/// Orbit decomposition of a map: ids per dart plus representatives.
#[derive(Debug, Clone)]
pub struct Orbits {
    pub vertex_id: Vec<usize>,
    pub vertex_reps: Vec<Dart>,
    pub face_id: Vec<usize>,
    pub face_reps: Vec<Dart>,
    pub edge_id: Vec<usize>,
    pub edge_reps: Vec<Dart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub vertices: usize,
    pub edges: usize,
    pub interior_faces: usize,
    pub boundary_faces: usize,
    /// Euler characteristic of the component with boundary faces removed.
    pub euler: i64,
    pub genus: u32,
}

/// Mutable editing bench. Holds a growable copy of a map plus the dart paths
/// and single-dart marks that must survive edits; every operation rewrites
/// the registered paths in place. `freeze` compacts tombstones away and
/// returns the edited map with the transported paths and marks.
#[derive(Debug, Clone)]
pub struct Editor {
    next: Vec<Dart>,
    prev: Vec<Dart>,
    twin: Vec<Dart>,
    edge_cell: Vec<Cell>,
    face_cell: Vec<Cell>,
    alive: Vec<bool>,
    paths: Vec<Path>,
    marks: Vec<Dart>,
}

impl Editor {
    pub fn new(map: &CombMap) -> Editor {
        Editor {
            next: map.next.clone(),
            prev: map.prev.clone(),
            twin: map.twin.clone(),
            edge_cell: map.edge_cell.clone(),
            face_cell: map.face_cell.clone(),
            alive: vec![true; map.dart_count()],
            paths: Vec::new(),
            marks: Vec::new(),
        }
    }

    /// Register a path to be transported through subsequent edits. Returns a
    /// handle for retrieval after `freeze`.
    pub fn track_path(&mut self, path: Path) -> usize {
        self.paths.push(path);
        self.paths.len() - 1
    }

    /// Register a single dart to be kept alive and transported (boundary
    /// face witnesses). Splits may move the mark onto a descendant dart of
    /// the same face walk.
    pub fn track_mark(&mut self, d: Dart) -> usize {
        self.marks.push(d);
        self.marks.len() - 1
    }

    pub fn path(&self, handle: usize) -> &Path {
        &self.paths[handle]
    }

    pub fn path_mut(&mut self, handle: usize) -> &mut Path {
        &mut self.paths[handle]
    }

    pub fn mark(&self, handle: usize) -> Dart {
        self.marks[handle]
    }

    pub fn tracked_paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn tracked_marks(&self) -> &[Dart] {
        &self.marks
    }

    #[inline]
    pub fn alive(&self, d: Dart) -> bool {
        self.alive[d.idx()]
    }
    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        debug_assert!(self.alive[d.idx()]);
        self.next[d.idx()]
    }
    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        debug_assert!(self.alive[d.idx()]);
        self.prev[d.idx()]
    }
    #[inline]
    pub fn twin(&self, d: Dart) -> Dart {
        debug_assert!(self.alive[d.idx()]);
        self.twin[d.idx()]
    }
    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        self.next(self.twin(d))
    }
    #[inline]
    pub fn face_prev(&self, d: Dart) -> Dart {
        self.twin(self.prev(d))
    }
    #[inline]
    pub fn edge_cell(&self, d: Dart) -> Cell {
        self.edge_cell[d.idx()]
    }
    #[inline]
    pub fn face_cell(&self, d: Dart) -> Cell {
        self.face_cell[d.idx()]
    }

    pub fn live_darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (0..self.next.len() as u32).map(Dart).filter(|d| self.alive[d.idx()])
    }

    pub fn face_walk(&self, d: Dart) -> Vec<Dart> {
        orbit(d, |x| self.face_next(x))
    }

    pub fn vertex_walk(&self, d: Dart) -> Vec<Dart> {
        orbit(d, |x| self.next(x))
    }

    pub fn same_face(&self, a: Dart, b: Dart) -> bool {
        in_orbit(a, b, |x| self.face_next(x))
    }

    pub fn same_vertex(&self, a: Dart, b: Dart) -> bool {
        in_orbit(a, b, |x| self.next(x))
    }

    pub fn vertex_degree(&self, d: Dart) -> usize {
        self.vertex_walk(d).len()
    }

    fn alloc(&mut self, edge_cell: Cell, face_cell: Cell) -> Dart {
        let d = Dart(self.next.len() as u32);
        self.next.push(d);
        self.prev.push(d);
        self.twin.push(d);
        self.edge_cell.push(edge_cell);
        self.face_cell.push(face_cell);
        self.alive.push(true);
        d
    }

    /// Subdivide the edge of `d` with a new valence-2 vertex. Returns
    /// `(cont, back)`: `cont` continues `d`'s direction from the new vertex,
    /// `back` is the new twin of `d`. Each piece inherits the ancestry of the
    /// co-orientation it continues. Paths using `d` become `d, cont`; paths
    /// using `twin(d)` become `twin(d), back`.
    pub fn split_edge(&mut self, d: Dart) -> (Dart, Dart) {
        assert!(self.alive[d.idx()], "split of dead dart {d}");
        let t = self.twin[d.idx()];
        let cont = self.alloc(self.edge_cell[d.idx()], self.face_cell[d.idx()]);
        let back = self.alloc(self.edge_cell[t.idx()], self.face_cell[t.idx()]);
        // New vertex rotation: (cont, back).
        self.next[cont.idx()] = back;
        self.next[back.idx()] = cont;
        self.prev[cont.idx()] = back;
        self.prev[back.idx()] = cont;
        self.twin[d.idx()] = back;
        self.twin[back.idx()] = d;
        self.twin[cont.idx()] = t;
        self.twin[t.idx()] = cont;
        let old = [(d, cont), (t, back)];
        for p in &mut self.paths {
            let mut i = 0;
            while i < p.darts.len() {
                for &(od, extra) in &old {
                    if p.darts[i] == od {
                        p.darts.insert(i + 1, extra);
                        i += 1;
                        break;
                    }
                }
                i += 1;
            }
        }
        (cont, back)
    }

    /// Insert a new edge between the corner before `x` (in rotation at
    /// `tail(x)`) and the corner before `y`. Both corners lie on the face
    /// walks of `x` and `y` respectively; if those are the same face the
    /// chord splits it in two, otherwise it merges the two faces (attaching
    /// a neck, which drops the Euler characteristic by 2). Returns `(c, ct)`
    /// with `c` running from `tail(x)` to `tail(y)`.
    pub fn chord(&mut self, x: Dart, y: Dart) -> (Dart, Dart) {
        assert!(self.alive[x.idx()] && self.alive[y.idx()]);
        let c = self.alloc(fresh_cell(), self.face_cell[x.idx()]);
        let ct = self.alloc(fresh_cell(), self.face_cell[y.idx()]);
        self.twin[c.idx()] = ct;
        self.twin[ct.idx()] = c;
        self.insert_before(c, x);
        self.insert_before(ct, y);
        (c, ct)
    }

    fn insert_before(&mut self, new: Dart, at: Dart) {
        let p = self.prev[at.idx()];
        self.next[p.idx()] = new;
        self.next[new.idx()] = at;
        self.prev[new.idx()] = p;
        self.prev[at.idx()] = new;
    }

    /// Attach a self-edge in the corner before `before`: the rotation gains
    /// `(lb, la)` immediately ahead of it, with `twin(la) = lb`. The `la`
    /// side closes into a new monogon face; the surface is unchanged.
    pub fn loop_edge_before(&mut self, before: Dart) -> (Dart, Dart) {
        assert!(self.alive[before.idx()]);
        let la = self.alloc(fresh_cell(), fresh_cell());
        let lb = self.alloc(fresh_cell(), self.face_cell[before.idx()]);
        self.twin[la.idx()] = lb;
        self.twin[lb.idx()] = la;
        self.insert_before(la, before);
        self.insert_before(lb, la);
        (la, lb)
    }

    /// Remove the edge of `d`. The caller must first rid all tracked paths
    /// and marks of both darts.
    pub fn delete_edge(&mut self, d: Dart) {
        assert!(self.alive[d.idx()]);
        let t = self.twin[d.idx()];
        for p in &self.paths {
            assert!(
                !p.darts.contains(&d) && !p.darts.contains(&t),
                "deleting edge still used by a tracked path"
            );
        }
        assert!(!self.marks.contains(&d) && !self.marks.contains(&t));
        for z in [d, t] {
            let p = self.prev[z.idx()];
            let n = self.next[z.idx()];
            // A valence-1 vertex disappears with its dart.
            if p != z {
                self.next[p.idx()] = n;
                self.prev[n.idx()] = p;
            }
            self.alive[z.idx()] = false;
        }
    }

    /// Remove a valence-2 vertex, merging its two edges. `at` is either dart
    /// based at the vertex. Paths through the vertex are shortened; no path
    /// may terminate there.
    pub fn smooth_vertex(&mut self, at: Dart) {
        assert!(self.alive[at.idx()]);
        let a = at;
        let b = self.next[a.idx()];
        assert!(b != a && self.next[b.idx()] == a, "smooth of a vertex with valence != 2");
        let ta = self.twin[a.idx()];
        let tb = self.twin[b.idx()];
        assert!(ta != b && tb != a, "smoothing would collapse a loop");
        // Merged edge keeps ta/tb as its darts, each with its own ancestry.
        self.twin[ta.idx()] = tb;
        self.twin[tb.idx()] = ta;
        for p in &mut self.paths {
            let m = p.darts.len();
            let upto = if p.closed { m } else { m.saturating_sub(1) };
            // Replace [ta, b] -> [ta] and [tb, a] -> [tb].
            let mut out: Vec<Dart> = Vec::with_capacity(m);
            let mut skip = vec![false; m];
            for i in 0..upto {
                let d0 = p.darts[i];
                let d1 = p.darts[(i + 1) % m];
                if (d0 == ta && d1 == b) || (d0 == tb && d1 == a) {
                    skip[(i + 1) % m] = true;
                }
            }
            for i in 0..m {
                let d = p.darts[i];
                assert!(
                    !(matches!(d, x if (x == a || x == b)) && !skip[i]),
                    "path terminates at smoothed vertex"
                );
                if !skip[i] {
                    out.push(d);
                }
            }
            p.darts = out;
        }
        assert!(!self.marks.contains(&a) && !self.marks.contains(&b));
        self.alive[a.idx()] = false;
        self.alive[b.idx()] = false;
    }

    /// Compact and return the edited map plus transported paths and marks,
    /// in registration order.
    pub fn freeze(self) -> (CombMap, Vec<Path>, Vec<Dart>) {
        let n = self.next.len();
        let mut remap = vec![u32::MAX; n];
        let mut live = 0u32;
        for i in 0..n {
            if self.alive[i] {
                remap[i] = live;
                live += 1;
            }
        }
        let mut next = Vec::with_capacity(live as usize);
        let mut prev = Vec::with_capacity(live as usize);
        let mut twin = Vec::with_capacity(live as usize);
        let mut edge_cell = Vec::with_capacity(live as usize);
        let mut face_cell = Vec::with_capacity(live as usize);
        for i in 0..n {
            if !self.alive[i] {
                continue;
            }
            next.push(Dart(remap[self.next[i].idx()]));
            prev.push(Dart(remap[self.prev[i].idx()]));
            twin.push(Dart(remap[self.twin[i].idx()]));
            edge_cell.push(self.edge_cell[i]);
            face_cell.push(self.face_cell[i]);
        }
        let map = CombMap { next, prev, twin, edge_cell, face_cell };
        debug_assert!(map.debug_consistent());
        let paths = self
            .paths
            .into_iter()
            .map(|p| Path {
                darts: p.darts.iter().map(|d| Dart(remap[d.idx()])).collect(),
                closed: p.closed,
            })
            .collect();
        let marks = self.marks.iter().map(|d| Dart(remap[d.idx()])).collect();
        (map, paths, marks)
    }
}

impl CombMap {
    fn debug_consistent(&self) -> bool {
        let n = self.dart_count();
        for i in 0..n {
            let d = Dart(i as u32);
            if self.next(self.prev(d)) != d || self.prev(self.next(d)) != d {
                return false;
            }
            if self.twin(self.twin(d)) != d || self.twin(d) == d {
                return false;
            }
        }
        true
    }
}
