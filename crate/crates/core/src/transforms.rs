//! Moves on drawn curve systems: handle slides of closed curves and of arcs
//! over closed curves, interior stabilization, and connected sum.
//!
//! Every move is recorded as a [`Move`] value that can be replayed. Replay is
//! deterministic: applied to an equal surface-and-systems state, a move list
//! reproduces the exact same map, dart ids included. Slides take a *band*, an
//! embedded edge path from a vertex of the moved strand to a vertex of the
//! curve slid over; the result is the band sum, drawn as a parallel detour
//! that leaves the strand just before the band, runs alongside it, once
//! around the target curve, and back.

use std::collections::HashSet;

use crate::curves::{meetings, ArcSystem, Curve, CurveSystem, CurveTag};
use crate::error::{Error, Result};
use crate::isotopy::tidy;
use crate::map::{CombMap, Dart, Editor, Path};
use crate::offset::{offset_cycle, offset_open, Side};
use crate::surface::{BoundaryMark, Surface};

/// A replayable move. Slide bands are edge paths in the coordinates of the
/// state the move applies to: the first dart leaves a vertex of the moved
/// strand, the last lands on a vertex of the curve slid over.
#[derive(Debug, Clone, PartialEq)]
pub enum Move {
    /// Slide curve `moved` of family `family` over curve `over` of the same
    /// family, along `band`.
    CurveSlide { family: usize, moved: usize, over: usize, band: Vec<Dart> },
    /// Slide arc `arc` of arc system `system` over curve `over` of curve
    /// family `family`, along `band`.
    ArcSlide { system: usize, arc: usize, family: usize, over: usize, band: Vec<Dart> },
    /// Interior stabilization in sector 0, 1, or 2.
    StabilizeSector { sector: usize },
    /// Connected sum with another diagram, at interior points of both.
    ConnectedSum { other: Box<crate::diagram::RelativeTrisectionDiagram> },
}

impl Move {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Move::CurveSlide { .. } => "curve-slide",
            Move::ArcSlide { .. } => "arc-slide",
            Move::StabilizeSector { .. } => "stabilize-sector",
            Move::ConnectedSum { .. } => "connected-sum",
        }
    }
}

/// A surface with curve families and arc systems drawn on it, carried
/// together through map edits. This is the shared engine behind diagram
/// moves, certification search, and monodromy transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct Workbench {
    pub surface: Surface,
    pub families: Vec<CurveSystem>,
    pub arcs: Vec<ArcSystem>,
}

/// Which strand a slide moves.
#[derive(Debug, Clone, Copy)]
enum Target {
    Curve { idx: usize },
    Arc { system: usize, idx: usize },
}

struct Bench {
    ed: Editor,
    fam: Vec<Vec<usize>>,
    arc: Vec<Vec<usize>>,
    mark: Vec<usize>,
}

impl Workbench {
    pub fn new(surface: Surface, families: Vec<CurveSystem>, arcs: Vec<ArcSystem>) -> Workbench {
        Workbench { surface, families, arcs }
    }

    /// Total transversal crossings between distinct curve families.
    pub fn cross_family_crossings(&self) -> usize {
        let mut total = 0;
        for i in 0..self.families.len() {
            for j in (i + 1)..self.families.len() {
                let a = self.families[i].paths();
                let b = self.families[j].paths();
                total += meetings(&self.surface.map, &a, &b).crossings.len();
            }
        }
        total
    }

    fn open(&self) -> Bench {
        let mut ed = Editor::new(&self.surface.map);
        let fam = self
            .families
            .iter()
            .map(|f| f.curves.iter().map(|c| ed.track_path(c.path.clone())).collect())
            .collect();
        let arc = self
            .arcs
            .iter()
            .map(|s| s.arcs.iter().map(|a| ed.track_path(a.clone())).collect())
            .collect();
        let mark = self.surface.boundary.iter().map(|m| ed.track_mark(m.dart)).collect();
        Bench { ed, fam, arc, mark }
    }

    /// Freeze the editor and rebuild the workbench state. `extra` names
    /// tracked paths to append as new curves: `(handle, family, tag)`.
    fn absorb(&mut self, bench: Bench, extra: &[(usize, usize, CurveTag)]) -> Result<()> {
        let Bench { ed, fam, arc, mark } = bench;
        let (map, paths, marks) = ed.freeze();
        let boundary = mark
            .iter()
            .zip(&self.surface.boundary)
            .map(|(&h, old)| BoundaryMark { dart: marks[h], label: old.label.clone() })
            .collect();
        let surface = Surface::new(map, boundary)?;
        let mut families: Vec<CurveSystem> = fam
            .iter()
            .zip(&self.families)
            .map(|(handles, old)| {
                CurveSystem::new(
                    handles
                        .iter()
                        .zip(&old.curves)
                        .map(|(&h, c)| Curve { path: paths[h].clone(), tag: c.tag })
                        .collect(),
                )
            })
            .collect();
        for &(h, family, tag) in extra {
            families[family].curves.push(Curve { path: paths[h].clone(), tag });
        }
        let arcs = arc
            .iter()
            .map(|handles| ArcSystem::new(handles.iter().map(|&h| paths[h].clone()).collect()))
            .collect();
        self.surface = surface;
        self.families = families;
        self.arcs = arcs;
        Ok(())
    }

    /// Slide curve `moved` of `family` over curve `over` of the same family.
    /// Returns the sign with which the slid-over curve's class is added.
    pub fn slide_curve(&mut self, family: usize, moved: usize, over: usize, band: &[Dart]) -> Result<i8> {
        if moved == over {
            return Err(Error::InvalidCurve("cannot slide a curve over itself".into()));
        }
        self.slide(Target::Curve { idx: moved }, family, over, band)
    }

    /// Slide arc `arc` of arc system `system` over curve `over` of curve
    /// family `family`. The band must attach at an interior vertex of the
    /// arc; endpoints stay fixed on the boundary.
    pub fn slide_arc(&mut self, system: usize, arc: usize, family: usize, over: usize, band: &[Dart]) -> Result<i8> {
        self.slide(Target::Arc { system, idx: arc }, family, over, band)
    }

    fn slide(&mut self, target: Target, family: usize, over_idx: usize, band: &[Dart]) -> Result<i8> {
        if family >= self.families.len() {
            return Err(Error::InvalidCurve(format!("no curve family {family}")));
        }
        if over_idx >= self.families[family].curves.len() {
            return Err(Error::InvalidCurve(format!("no curve {over_idx} in family {family}")));
        }
        let moved: Path = match target {
            Target::Curve { idx } => {
                let f = &self.families[family];
                f.curves
                    .get(idx)
                    .ok_or_else(|| Error::InvalidCurve(format!("no curve {idx} in family {family}")))?
                    .path
                    .clone()
            }
            Target::Arc { system, idx } => self
                .arcs
                .get(system)
                .and_then(|s| s.arcs.get(idx))
                .ok_or_else(|| Error::InvalidCurve(format!("no arc {idx} in system {system}")))?
                .clone(),
        };
        let over: Path = self.families[family].curves[over_idx].path.clone();
        let map = &self.surface.map;

        if band.is_empty() {
            return Err(Error::BandObstructed("empty band".into()));
        }
        for &d in band {
            if d.idx() >= map.dart_count() {
                return Err(Error::BandObstructed(format!("band dart {d} out of range")));
            }
        }
        for w in band.windows(2) {
            if !map.same_vertex(map.twin(w[0]), w[1]) {
                return Err(Error::BandObstructed(format!(
                    "band breaks between {} and {}",
                    w[0], w[1]
                )));
            }
        }

        let orbits = map.orbits();
        let vid = |d: Dart| orbits.vertex_id[d.idx()];
        let eid = |d: Dart| orbits.edge_id[d.idx()];

        // The band must be embedded: all visited vertices distinct.
        let mut band_vertices = vec![vid(band[0])];
        for &d in band {
            band_vertices.push(vid(map.twin(d)));
        }
        {
            let mut seen = HashSet::new();
            for &v in &band_vertices {
                if !seen.insert(v) {
                    return Err(Error::BandObstructed("band revisits a vertex".into()));
                }
            }
        }

        // Edges and vertices the band and the detour must stay clear of: the
        // moved strand's own family (for curves), or its own arc system plus
        // the curve slid over (for arcs). Crossing other families or arcs
        // stays transversal and is allowed.
        let mut forbidden_paths: Vec<&Path> = Vec::new();
        match target {
            Target::Curve { .. } => {
                forbidden_paths.extend(self.families[family].curves.iter().map(|c| &c.path));
            }
            Target::Arc { system, .. } => {
                forbidden_paths.extend(self.arcs[system].arcs.iter());
                forbidden_paths.push(&over);
            }
        }
        let mut forbidden_edges = HashSet::new();
        let mut forbidden_vertices = HashSet::new();
        for p in &forbidden_paths {
            for &d in &p.darts {
                forbidden_edges.insert(eid(d));
                forbidden_vertices.insert(vid(d));
                forbidden_vertices.insert(vid(map.twin(d)));
            }
        }

        // The strand must be disjoint from the curve it slides over; at a
        // shared point the detour would cross the strand's new position.
        let over_vertices: HashSet<usize> = over.darts.iter().map(|&d| vid(d)).collect();
        if moved.darts.iter().any(|&d| over_vertices.contains(&vid(d)))
            || (!moved.closed
                && over_vertices.contains(&vid(map.twin(*moved.darts.last().unwrap()))))
        {
            return Err(Error::BandObstructed(
                "strand meets the curve it would slide over".into(),
            ));
        }

        for &d in band {
            if forbidden_edges.contains(&eid(d)) {
                return Err(Error::BandObstructed(format!("band runs along a curve at {d}")));
            }
        }
        for &v in &band_vertices[1..band_vertices.len() - 1] {
            if forbidden_vertices.contains(&v) {
                return Err(Error::BandObstructed(
                    "band interior touches the strand's family".into(),
                ));
            }
        }

        // Keep the detour corridor away from the surface boundary: the band
        // and the slid-over curve must not pass through boundary vertices.
        let at_boundary = self.surface.boundary_vertex_darts();
        if band.iter().any(|&d| at_boundary[d.idx()])
            || at_boundary[map.twin(*band.last().unwrap()).idx()]
            || over.darts.iter().any(|&d| at_boundary[d.idx()])
        {
            return Err(Error::BandObstructed("band corridor touches the boundary".into()));
        }

        // Locate the passage of the moved strand at the band's tail vertex.
        let u = vid(band[0]);
        let q = moved
            .darts
            .iter()
            .position(|&d| vid(map.twin(d)) == u)
            .ok_or_else(|| Error::BandObstructed("band does not start on the moved strand".into()))?;
        if !moved.closed && q + 1 == moved.darts.len() {
            return Err(Error::BandObstructed("band attaches at an arc endpoint".into()));
        }
        let d_in = moved.darts[q];
        let d_out = moved.darts[(q + 1) % moved.darts.len()];

        // Locate the landing passage on the slid-over curve.
        let v = vid(map.twin(*band.last().unwrap()));
        let t = over
            .darts
            .iter()
            .position(|&d| vid(d) == v)
            .ok_or_else(|| Error::BandObstructed("band does not end on the slid-over curve".into()))?;
        let n = over.darts.len();
        let j_next = over.darts[t];
        let j_prev = over.darts[(t + n - 1) % n];

        // Side of the strand the band hangs on, and side of the target curve
        // it lands on. Scanning the rotation onward from the outgoing dart
        // meets the right-hand sector first.
        let su = first_hit(map, d_out, band[0], map.twin(d_in))?;
        let sv = first_hit(map, j_next, map.twin(*band.last().unwrap()), map.twin(j_prev))?;
        // Landing on the same side the band leaves from means the detour
        // runs around the target in its forward direction.
        let forward = sv == su;

        let mut bench = self.open();
        let handle = match target {
            Target::Curve { idx } => bench.fam[family][idx],
            Target::Arc { system, idx } => bench.arc[system][idx],
        };
        // Pin the band so cleanup cannot delete its edges mid-edit; the pin
        // is simply never read back after freezing.
        bench.ed.track_path(Path::open(band.to_vec()));

        let ed = &mut bench.ed;
        let (cont_in, _) = ed.split_edge(d_in);
        // After the first split the outgoing dart at the attachment vertex
        // is unchanged, also when the strand was a single closed dart.
        let (cont_out, back_out) = ed.split_edge(d_out);
        let back_in = ed.twin(d_in);

        let mut segment = Vec::with_capacity(band.len() * 2 + n + 2);
        segment.push(cont_in);
        segment.extend_from_slice(band);
        if forward {
            for s in 0..n {
                segment.push(over.darts[(t + s) % n]);
            }
        } else {
            for s in 0..n {
                segment.push(ed.twin(over.darts[(t + n - 1 - s) % n]));
            }
        }
        for &d in band.iter().rev() {
            segment.push(ed.twin(d));
        }
        segment.push(d_out);

        let (start, end) = match su {
            Side::Left => (cont_in, cont_out),
            Side::Right => (back_in, back_out),
        };
        let detour = offset_open(ed, &segment, su, start, end)?;

        // Splice: the strand reads `..., d_in, cont_in, d_out, cont_out, ...`
        // after the splits; the detour replaces the two middle darts. The
        // successor of `cont_in` only wraps around for a closed strand.
        let path = ed.path_mut(handle);
        let old = path.darts.clone();
        let len = old.len();
        let i0 = old
            .iter()
            .position(|&d| d == cont_in)
            .expect("split continuation must stay on the tracked strand");
        debug_assert_eq!(old[(i0 + 1) % len], d_out);
        let mut new_darts = Vec::with_capacity(len + detour.darts.len());
        for (k, &d) in old.iter().enumerate() {
            if k == i0 {
                new_darts.extend_from_slice(&detour.darts);
            } else if k != (i0 + 1) % len {
                new_darts.push(d);
            }
        }
        path.darts = new_darts;

        tidy(ed);
        self.absorb(bench, &[])?;
        Ok(if forward { 1 } else { -1 })
    }

    /// Interior stabilization: attach a genus handle at an interior point and
    /// draw one new curve per family. In sector `j`, families `j` and `j+1`
    /// receive parallel copies of one handle curve and family `j+2` its dual.
    pub fn stabilize(&mut self, sector: usize) -> Result<()> {
        if self.families.len() != 3 {
            return Err(Error::InvalidDiagram(
                "stabilization needs all three curve families".into(),
            ));
        }
        if sector >= 3 {
            return Err(Error::InvalidParams(format!("no sector {sector}")));
        }
        let host = self.ensure_interior_corner()?;
        // One-vertex genus handle: two edges a, b with rotation (a, b, a~, b~),
        // a single square face, Euler characteristic 0.
        let block = CombMap::from_permutations(vec![1, 2, 3, 0], vec![2, 3, 0, 1])?;
        let (map, shift) = self.surface.map.disjoint_union(&block);
        let boundary = self.surface.boundary.clone();
        self.surface = Surface::new(map, boundary)?;
        let a = Dart(shift);
        let b = Dart(shift + 1);

        let mut bench = self.open();
        let ed = &mut bench.ed;
        ed.chord(host, a);
        let core = Path::closed(vec![a]);
        let h_core = ed.track_path(core.clone());
        // Track the dual before offsetting: the parallel copy crosses the b
        // edge, and the tracked path refines itself through that split.
        let h_dual = ed.track_path(Path::closed(vec![b]));
        let copy = offset_cycle(ed, &core, Side::Right)?;
        let h_copy = ed.track_path(copy);
        let extra = [
            (h_core, sector, CurveTag::Essential),
            (h_copy, (sector + 1) % 3, CurveTag::Essential),
            (h_dual, (sector + 2) % 3, CurveTag::Essential),
        ];
        self.absorb(bench, &extra)
    }

    /// Connected sum at interior points: joins the two surfaces by a neck.
    /// When both sides have boundary, each family also receives one parallel
    /// copy of the neck's belt circle, the new separating curve.
    pub fn connected_sum(&mut self, other: &Workbench) -> Result<()> {
        if self.families.len() != 3 || other.families.len() != 3 {
            return Err(Error::InvalidDiagram(
                "connected sum needs all three curve families on both sides".into(),
            ));
        }
        let host = self.ensure_interior_corner()?;
        let mut guest_bench = other.clone();
        let guest_corner = guest_bench.ensure_interior_corner()?;
        let both_bounded =
            !self.surface.boundary.is_empty() && !guest_bench.surface.boundary.is_empty();

        let (map, shift) = self.surface.map.disjoint_union(&guest_bench.surface.map);
        let guest = Dart(guest_corner.0 + shift);

        let mut labels: HashSet<String> =
            self.surface.boundary.iter().map(|m| m.label.clone()).collect();
        let mut boundary = self.surface.boundary.clone();
        for m in &guest_bench.surface.boundary {
            let mut label = m.label.clone();
            let mut n = 2;
            while labels.contains(&label) {
                label = format!("{}.{n}", m.label);
                n += 1;
            }
            labels.insert(label.clone());
            boundary.push(BoundaryMark { dart: Dart(m.dart.0 + shift), label });
        }

        let shift_path = |p: &Path| Path {
            darts: p.darts.iter().map(|&d| Dart(d.0 + shift)).collect(),
            closed: p.closed,
        };
        let mut families = self.families.clone();
        for (fam, of) in families.iter_mut().zip(&guest_bench.families) {
            for c in &of.curves {
                fam.curves.push(Curve { path: shift_path(&c.path), tag: c.tag });
            }
        }
        let mut arcs = self.arcs.clone();
        for s in &guest_bench.arcs {
            arcs.push(ArcSystem::new(s.arcs.iter().map(shift_path).collect()));
        }

        self.surface = Surface::new(map, boundary)?;
        self.families = families;
        self.arcs = arcs;

        let mut bench = self.open();
        let ed = &mut bench.ed;
        let (neck, _) = ed.chord(host, guest);
        let mut extra = Vec::new();
        if both_bounded {
            // Belt circle of the neck: cross the neck edge once and close up
            // through the face the neck merged; then two parallel copies.
            let (cont, back) = ed.split_edge(neck);
            let (belt_dart, _) = ed.chord(cont, back);
            let belt = Path::closed(vec![belt_dart]);
            let h1 = ed.track_path(belt.clone());
            let second = offset_cycle(ed, &belt, Side::Right)?;
            let h2 = ed.track_path(second.clone());
            let third = offset_cycle(ed, &second, Side::Right)?;
            let h3 = ed.track_path(third);
            for (fam, h) in [h1, h2, h3].into_iter().enumerate() {
                extra.push((h, fam, CurveTag::Separating));
            }
        }
        self.absorb(bench, &extra)
    }

    /// Deterministic interior attachment corner: the lowest dart on an
    /// interior face whose tail vertex stays clear of the boundary and, when
    /// possible, of every drawn curve and arc. On surfaces where every vertex
    /// touches the boundary, a fresh interior vertex is planted first on a
    /// small bud edge inside an interior face.
    fn ensure_interior_corner(&mut self) -> Result<Dart> {
        if let Some(d) = self.interior_corner() {
            return Ok(d);
        }
        let host = {
            let map = &self.surface.map;
            let orbits = map.orbits();
            let mut boundary_faces = vec![false; orbits.face_reps.len()];
            for m in &self.surface.boundary {
                boundary_faces[orbits.face_id[m.dart.idx()]] = true;
            }
            map.darts()
                .find(|d| !boundary_faces[orbits.face_id[d.idx()]])
                .ok_or_else(|| Error::InvalidDiagram("surface has no interior face".into()))?
        };
        let mut bench = self.open();
        let (la, _) = bench.ed.loop_edge_before(host);
        bench.ed.split_edge(la);
        self.absorb(bench, &[])?;
        // No deletions happened, so dart ids are stable across the freeze.
        self.interior_corner()
            .ok_or_else(|| Error::InvalidDiagram("planted corner not interior".into()))
    }

    fn interior_corner(&self) -> Option<Dart> {
        let map = &self.surface.map;
        let orbits = map.orbits();
        let at_boundary = self.surface.boundary_vertex_darts();
        let mut boundary_faces = vec![false; orbits.face_reps.len()];
        for m in &self.surface.boundary {
            boundary_faces[orbits.face_id[m.dart.idx()]] = true;
        }
        let mut drawn = vec![false; orbits.vertex_reps.len()];
        for f in &self.families {
            for c in &f.curves {
                for &d in &c.path.darts {
                    drawn[orbits.vertex_id[d.idx()]] = true;
                }
            }
        }
        for s in &self.arcs {
            for a in &s.arcs {
                for &d in &a.darts {
                    drawn[orbits.vertex_id[d.idx()]] = true;
                    drawn[orbits.vertex_id[map.twin(d).idx()]] = true;
                }
            }
        }
        let ok = |d: &Dart, avoid_drawn: bool| {
            !boundary_faces[orbits.face_id[d.idx()]]
                && !at_boundary[d.idx()]
                && (!avoid_drawn || !drawn[orbits.vertex_id[d.idx()]])
        };
        map.darts()
            .find(|d| ok(d, true))
            .or_else(|| map.darts().find(|d| ok(d, false)))
    }
}

/// Replay a move list on a workbench.
pub fn replay(bench: &mut Workbench, moves: &[Move]) -> Result<()> {
    for mv in moves {
        match mv {
            Move::CurveSlide { family, moved, over, band } => {
                bench.slide_curve(*family, *moved, *over, band)?;
            }
            Move::ArcSlide { system, arc, family, over, band } => {
                bench.slide_arc(*system, *arc, *family, *over, band)?;
            }
            Move::StabilizeSector { sector } => {
                bench.stabilize(*sector)?;
            }
            Move::ConnectedSum { other } => {
                bench.connected_sum(&other.bench())?;
            }
        }
    }
    Ok(())
}

/// Which of two darts at the tail vertex of `from` appears first when
/// scanning the rotation onward from `from`: the right-hand candidate or the
/// left-hand one.
fn first_hit(map: &CombMap, from: Dart, right: Dart, left: Dart) -> Result<Side> {
    let mut d = map.next(from);
    while d != from {
        if d == right {
            return Ok(Side::Right);
        }
        if d == left {
            return Ok(Side::Left);
        }
        d = map.next(d);
    }
    Err(Error::BandObstructed(format!(
        "attachment darts not found around the tail of {from}"
    )))
}
