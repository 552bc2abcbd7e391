//! Isotopy of curve systems: bigon removal down to minimal position, map
//! garbage collection, and parallelism tests.
//!
//! Two transversal systems are in minimal position exactly when no
//! complementary region is an empty bigon: a disk whose boundary is one run
//! of each of two strands. Removal slides the movable strand across the
//! disk: its sub-path between the two corner crossings is rerouted along the
//! far side of the stationary arc, crossing precisely the surface edges that
//! hang there. The interior of an empty bigon touches no third strand, so
//! each removal lowers the crossing count by exactly two and changes no
//! other pair's count.

use std::collections::HashSet;

use crate::curves::{check_embedded, meetings, regions, RegionAnalysis, WallKind, WallSide};
use crate::error::{Error, Result};
use crate::map::{Dart, Editor, Path};
use crate::offset::{hanging_darts, route_prescribed, Side};
use crate::surface::{BoundaryMark, Surface};

/// One removable bigon, described against the current surface: the movable
/// run (`sigma..sigma+span` of path `b_path` in system `b_sys`, listed by
/// the region walk with or against the path's direction) and the stationary
/// arc's boundary-cycle darts in walk order.
#[derive(Debug, Clone)]
struct BigonMove {
    b_sys: usize,
    b_path: usize,
    sigma: usize,
    span: usize,
    b_wd: bool,
    a_darts: Vec<Dart>,
}

fn wall_key(w: &WallSide) -> (usize, usize) {
    match w.kind {
        WallKind::Strand { sys, path_idx, .. } => (sys, path_idx),
        WallKind::SurfaceBoundary => (usize::MAX, usize::MAX),
    }
}

/// Split a boundary cycle into maximal runs by strand, starting at a run
/// boundary so no run is cut by the cycle's arbitrary base point.
fn cycle_runs(cycle: &[WallSide]) -> Vec<Vec<WallSide>> {
    let n = cycle.len();
    let start = (0..n)
        .find(|&i| wall_key(&cycle[i]) != wall_key(&cycle[(i + n - 1) % n]))
        .unwrap_or(0);
    let mut runs: Vec<Vec<WallSide>> = Vec::new();
    for i in 0..n {
        let w = cycle[(start + i) % n];
        match runs.last_mut() {
            Some(last) if wall_key(last.last().unwrap()) == wall_key(&w) => last.push(w),
            _ => runs.push(vec![w]),
        }
    }
    runs
}

/// Steps of a run along its path: (first step in travel order, length,
/// direction flag). None when the run is not one contiguous stretch.
fn run_steps(run: &[WallSide], n: usize, closed: bool) -> Option<(usize, usize, bool)> {
    let mut wd0: Option<bool> = None;
    let mut steps = Vec::with_capacity(run.len());
    for w in run {
        let WallKind::Strand { step, with_direction, .. } = w.kind else {
            return None;
        };
        if *wd0.get_or_insert(with_direction) != with_direction {
            return None;
        }
        steps.push(step);
    }
    let wd = wd0?;
    if steps.len() > n {
        return None;
    }
    // The region walk lists steps ascending when it runs with the path and
    // descending against it.
    let ordered: Vec<usize> =
        if wd { steps.clone() } else { steps.iter().rev().copied().collect() };
    for i in 1..ordered.len() {
        let want = if closed { (ordered[i - 1] + 1) % n } else { ordered[i - 1] + 1 };
        if ordered[i] != want {
            return None;
        }
    }
    Some((ordered[0], ordered.len(), wd))
}

fn analyze(surface: &Surface, systems: &[Vec<Path>]) -> RegionAnalysis {
    let refs: Vec<Vec<&Path>> = systems.iter().map(|s| s.iter().collect()).collect();
    let walls: Vec<&[&Path]> = refs.iter().map(|v| v.as_slice()).collect();
    regions(surface, &walls)
}

fn total_crossings(surface: &Surface, systems: &[Vec<Path>]) -> usize {
    let refs: Vec<Vec<&Path>> = systems.iter().map(|s| s.iter().collect()).collect();
    let mut n = 0;
    for i in 0..refs.len() {
        for j in i + 1..refs.len() {
            n += meetings(&surface.map, &refs[i], &refs[j]).crossings.len();
        }
    }
    n
}

/// All empty bigons that a movable system could be slid out of.
fn bigon_candidates(
    surface: &Surface,
    systems: &[Vec<Path>],
    movable: &[bool],
) -> Vec<BigonMove> {
    let analysis = analyze(surface, systems);
    let mut out = Vec::new();
    for region in &analysis.regions {
        if !region.is_disk() {
            continue;
        }
        let runs = cycle_runs(&region.cycles[0]);
        if runs.len() != 2 {
            continue;
        }
        for (bi, ai) in [(0usize, 1usize), (1, 0)] {
            let (b_sys, b_path) = wall_key(&runs[bi][0]);
            if b_sys == usize::MAX || !movable.get(b_sys).copied().unwrap_or(false) {
                continue;
            }
            if wall_key(&runs[ai][0]) == (b_sys, b_path)
                || wall_key(&runs[ai][0]).0 == usize::MAX
            {
                continue;
            }
            let path = &systems[b_sys][b_path];
            let n = path.darts.len();
            let Some((sigma, span, b_wd)) = run_steps(&runs[bi], n, path.closed) else {
                continue;
            };
            // The run must leave a path edge on each side of the bigon so
            // the reroute has somewhere to splice in.
            if path.closed {
                if span >= n {
                    continue;
                }
            } else if sigma == 0 || sigma + span >= n {
                continue;
            }
            out.push(BigonMove {
                b_sys,
                b_path,
                sigma,
                span,
                b_wd,
                a_darts: runs[ai].iter().map(|w| w.dart).collect(),
            });
        }
    }
    out
}

/// Rotation sector scan between two darts at one vertex, exclusive on both
/// ends, listing each swept edge by the dart whose face the crossing strand
/// approaches from (clockwise sweeps approach from the twin's side).
fn sweep_corner(ed: &Editor, from: Dart, stop: Dart, ccw: bool) -> Result<Vec<Dart>> {
    let mut out = Vec::new();
    let mut d = if ccw { ed.next(from) } else { ed.prev(from) };
    while d != stop {
        if d == from {
            return Err(Error::InvalidCurve(
                "bigon corner sweep missed its stop dart".into(),
            ));
        }
        out.push(if ccw { d } else { ed.twin(d) });
        d = if ccw { ed.next(d) } else { ed.prev(d) };
    }
    Ok(out)
}

/// Every edge side belonging to a tracked strand or to a marked boundary
/// face: the reroute may cross none of these.
fn forbidden_darts(ed: &Editor) -> HashSet<Dart> {
    let mut set = HashSet::new();
    for p in ed.tracked_paths() {
        for &d in &p.darts {
            set.insert(d);
            set.insert(ed.twin(d));
        }
    }
    for &m in ed.tracked_marks().to_vec().iter() {
        for d in ed.face_walk(m) {
            set.insert(d);
            set.insert(ed.twin(d));
        }
    }
    set
}

/// Slide the movable run across its bigon. The replacement route starts on
/// the path edge entering the first corner, hugs the far side of the
/// stationary arc, and rejoins on the edge leaving the second corner; the
/// crossing plan is assembled before any mutation. Fails without touching
/// anything if the plan would cross another strand (a tangency pressed
/// against the arc) or a marked boundary face.
fn remove_bigon(ed: &mut Editor, handle: usize, mv: &BigonMove) -> Result<()> {
    let (n, closed) = {
        let p = ed.path(handle);
        (p.darts.len(), p.closed)
    };
    let b_pre = ed.path(handle).darts[(mv.sigma + n - 1) % n];
    let b_post = ed.path(handle).darts[(mv.sigma + mv.span) % n];

    // Orient the stationary arc along the replacement's travel: the region
    // walk runs against the movable path when it lists path darts, with it
    // when it lists twins.
    let r_seg: Vec<Dart> = if mv.b_wd {
        mv.a_darts.iter().rev().map(|&d| ed.twin(d)).collect()
    } else {
        mv.a_darts.clone()
    };
    let tb = ed.twin(b_pre);
    if !ed.same_vertex(tb, r_seg[0]) {
        return Err(Error::InvalidCurve("bigon corners out of order".into()));
    }
    let far = if mv.b_wd { Side::Left } else { Side::Right };

    let mut plan = sweep_corner(ed, tb, r_seg[0], mv.b_wd)?;
    for i in 1..r_seg.len() {
        plan.extend(hanging_darts(ed, ed.twin(r_seg[i - 1]), r_seg[i], far));
    }
    plan.extend(sweep_corner(ed, ed.twin(r_seg[r_seg.len() - 1]), b_post, mv.b_wd)?);

    let forbidden = forbidden_darts(ed);
    if plan.iter().any(|d| forbidden.contains(d)) {
        return Err(Error::Unsupported(
            "bigon removal blocked by a tangent strand or the surface boundary".into(),
        ));
    }

    let (cont_pre, back_pre) = ed.split_edge(b_pre);
    let (cont_post, back_post) = ed.split_edge(b_post);
    let start = if mv.b_wd { cont_pre } else { back_pre };
    let end = if mv.b_wd { cont_post } else { back_post };
    let route = route_prescribed(ed, start, &plan, end);

    let p = ed.path_mut(handle);
    let ip = p.darts.iter().position(|&d| d == cont_pre).unwrap();
    let iq = p.darts.iter().position(|&d| d == cont_post).unwrap();
    let mut darts = route.darts;
    if closed {
        let m = p.darts.len();
        let mut k = iq;
        while k != ip {
            darts.push(p.darts[k]);
            k = (k + 1) % m;
        }
    } else {
        let mut out = p.darts[..ip].to_vec();
        out.extend(darts);
        out.extend_from_slice(&p.darts[iq..]);
        darts = out;
    }
    p.darts = darts;
    Ok(())
}

/// Garbage-collect an editor: delete edges no tracked path or mark uses
/// (only where the two sides are distinct faces, and never on a marked
/// face), then smooth valence-2 vertices that are not path endpoints or
/// mark anchors, to a fixed point.
pub fn tidy(ed: &mut Editor) {
    loop {
        let mut changed = false;
        let mut used: HashSet<Dart> = HashSet::new();
        for p in ed.tracked_paths() {
            for &d in &p.darts {
                used.insert(d);
            }
        }
        let marks: Vec<Dart> = ed.tracked_marks().to_vec();
        used.extend(marks.iter().copied());
        for d in ed.live_darts().collect::<Vec<_>>() {
            if !ed.alive(d) || d.0 > ed.twin(d).0 {
                continue;
            }
            let t = ed.twin(d);
            if used.contains(&d) || used.contains(&t) {
                continue;
            }
            // Removing an edge with one face on both sides would change the
            // surface; removing one beside a marked face would corrupt the
            // boundary walk.
            if ed.same_face(d, t) {
                continue;
            }
            if marks.iter().any(|&m| ed.same_face(d, m) || ed.same_face(t, m)) {
                continue;
            }
            ed.delete_edge(d);
            changed = true;
        }
        let mut pinned: Vec<Dart> = Vec::new();
        for p in ed.tracked_paths() {
            if !p.closed {
                pinned.push(p.darts[0]);
                pinned.push(*p.darts.last().unwrap());
            }
        }
        let pinned: Vec<Dart> = pinned
            .iter()
            .map(|&d| d)
            .chain(marks.iter().copied())
            .collect();
        for d in ed.live_darts().collect::<Vec<_>>() {
            if !ed.alive(d) {
                continue;
            }
            let b = ed.next(d);
            if b == d || ed.next(b) != d || ed.twin(d) == b {
                continue;
            }
            // Path endpoints live at the head of the last dart; compare at
            // the vertex either way.
            let protected = pinned.iter().any(|&x| {
                ed.alive(x) && (ed.same_vertex(x, d) || ed.same_vertex(ed.twin(x), d))
            });
            if protected {
                continue;
            }
            ed.smooth_vertex(d);
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

fn try_remove(
    surface: &Surface,
    systems: &[Vec<Path>],
    mv: &BigonMove,
) -> Result<(Surface, Vec<Vec<Path>>)> {
    let mut ed = Editor::new(&surface.map);
    let mut handles: Vec<Vec<usize>> = Vec::with_capacity(systems.len());
    for sys in systems {
        handles.push(sys.iter().map(|p| ed.track_path(p.clone())).collect());
    }
    let mark_handles: Vec<usize> =
        surface.boundary.iter().map(|m| ed.track_mark(m.dart)).collect();
    remove_bigon(&mut ed, handles[mv.b_sys][mv.b_path], mv)?;
    tidy(&mut ed);
    let (map, paths, marks) = ed.freeze();
    let boundary = surface
        .boundary
        .iter()
        .zip(&mark_handles)
        .map(|(m, &h)| BoundaryMark { dart: marks[h], label: m.label.clone() })
        .collect();
    let out_surface = Surface::new(map, boundary)?;
    let out_systems = handles
        .iter()
        .map(|hs| hs.iter().map(|&h| paths[h].clone()).collect())
        .collect();
    Ok((out_surface, out_systems))
}

/// Remove bigons between the given systems until none remain, moving only
/// the systems flagged movable. The stationary systems' strands are never
/// split, crossed, or rerouted. Returns the new surface and the transported
/// systems; the map is compacted, so dart numbering changes.
pub fn minimal_position(
    surface: &Surface,
    systems: &[Vec<Path>],
    movable: &[bool],
) -> Result<(Surface, Vec<Vec<Path>>)> {
    assert_eq!(systems.len(), movable.len());
    let mut cur_s = surface.clone();
    let mut cur_sys: Vec<Vec<Path>> = systems.to_vec();
    // Each removal cancels exactly one pair of crossings.
    let cap = total_crossings(&cur_s, &cur_sys) / 2 + 1;
    for _ in 0..=cap as u32 {
        let candidates = bigon_candidates(&cur_s, &cur_sys, movable);
        if candidates.is_empty() {
            return Ok((cur_s, cur_sys));
        }
        let before = total_crossings(&cur_s, &cur_sys);
        let mut advanced = false;
        let mut last_err = None;
        for mv in &candidates {
            match try_remove(&cur_s, &cur_sys, mv) {
                Ok((s2, sys2)) => {
                    debug_assert_eq!(total_crossings(&s2, &sys2) + 2, before);
                    cur_s = s2;
                    cur_sys = sys2;
                    advanced = true;
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        if !advanced {
            return Err(last_err.unwrap());
        }
    }
    Err(Error::SearchExhausted { what: "bigon removal".into(), depth: cap as u32 })
}

/// Do two disjoint closed curves bound an annulus between them? True when
/// some complementary region has Euler characteristic zero and exactly two
/// boundary cycles, one traced by each curve.
pub fn cobound_annulus(surface: &Surface, a: &Path, b: &Path) -> bool {
    let asys = [a];
    let bsys = [b];
    if !meetings(&surface.map, &asys, &bsys).crossings.is_empty() {
        return false;
    }
    let walls: &[&[&Path]] = &[&asys, &bsys];
    let analysis = regions(surface, walls);
    analysis.regions.iter().any(|r| {
        r.euler == 0
            && r.cycles.len() == 2
            && matches!(
                (cycle_sys(&r.cycles[0]), cycle_sys(&r.cycles[1])),
                (Some(x), Some(y)) if x != y
            )
    })
}

fn cycle_sys(cycle: &[WallSide]) -> Option<usize> {
    let mut out = None;
    for w in cycle {
        let WallKind::Strand { sys, .. } = w.kind else {
            return None;
        };
        if *out.get_or_insert(sys) != sys {
            return None;
        }
    }
    out
}

/// Does the closed curve bound a disk? True when some complementary region
/// is a disk whose whole boundary lies on the curve.
pub fn bounds_disk(surface: &Surface, c: &Path) -> bool {
    let csys = [c];
    let walls: &[&[&Path]] = &[&csys];
    let analysis = regions(surface, walls);
    analysis
        .regions
        .iter()
        .any(|r| r.is_disk() && cycle_sys(&r.cycles[0]).is_some())
}

fn same_cycle(a: &[Dart], b: &[Dart]) -> bool {
    a.len() == b.len()
        && !a.is_empty()
        && (0..a.len()).any(|r| (0..a.len()).all(|i| a[i] == b[(i + r) % a.len()]))
}

/// Are two embedded closed curves ambient-isotopic? The second curve is
/// slid to minimal position against the first; isotopic curves then either
/// coincide, cobound an annulus, or both bound disks. The curves must be
/// identical or transversal (no shared edges).
pub fn isotopic_curves(surface: &Surface, a: &Path, b: &Path) -> Result<bool> {
    assert!(a.closed && b.closed);
    check_embedded(&surface.map, &[a])?;
    check_embedded(&surface.map, &[b])?;
    let b_rev: Vec<Dart> = b.darts.iter().rev().map(|&d| surface.map.twin(d)).collect();
    if same_cycle(&a.darts, &b.darts) || same_cycle(&a.darts, &b_rev) {
        return Ok(true);
    }
    let overlap: HashSet<Dart> =
        b.darts.iter().flat_map(|&d| [d, surface.map.twin(d)]).collect();
    if a.darts.iter().any(|d| overlap.contains(d)) {
        return Err(Error::InvalidCurve(
            "curves share an edge but are not identical".into(),
        ));
    }
    let systems = vec![vec![a.clone()], vec![b.clone()]];
    let (s2, sys2) = minimal_position(surface, &systems, &[false, true])?;
    let (a2, b2) = (&sys2[0][0], &sys2[1][0]);
    if !meetings(&s2.map, &[a2], &[b2]).crossings.is_empty() {
        return Ok(false);
    }
    Ok(cobound_annulus(&s2, a2, b2) || (bounds_disk(&s2, a2) && bounds_disk(&s2, b2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::geometric_matrix;
    use crate::map::Editor;
    use crate::offset::{anchor_on, link, offset_cycle};
    use crate::surface::{polygon_surface, standard_page, SideSpec};

    fn torus() -> Surface {
        polygon_surface(&[
            SideSpec::glue("x"),
            SideSpec::glue("y"),
            SideSpec::glue_inv("x"),
            SideSpec::glue_inv("y"),
        ])
        .unwrap()
        .0
    }

    #[test]
    fn finger_bigon_roundtrip() {
        let s = torus();
        let mut ed = Editor::new(&s.map);
        let hc = ed.track_path(Path::closed(vec![Dart(0)]));
        let cp = ed.path(hc).clone();
        let off = offset_cycle(&mut ed, &cp, Side::Left).unwrap();
        let hd = ed.track_path(off);
        // Subdivide the copy to make room for a finger across the original
        // and back: two cancelling crossings bounding an empty bigon.
        let cdart = ed.path(hd).darts[0];
        let (cont1, back1) = ed.split_edge(cdart);
        let (cont2, back2) = ed.split_edge(cont1);
        let h1 = {
            let orig = ed.path(hc).darts[0];
            orig
        };
        let th1 = ed.twin(h1);
        let sel_start = if ed.same_face(cont1, h1) { cont1 } else { back1 };
        assert!(ed.same_face(sel_start, h1));
        let a1 = anchor_on(&mut ed, h1);
        let ch1 = link(&mut ed, sel_start, a1.cont);
        let a2 = anchor_on(&mut ed, th1);
        let ch2 = link(&mut ed, a1.back, a2.cont);
        let sel_end = if ed.same_face(a2.back, cont2) { cont2 } else { back2 };
        let ch3 = link(&mut ed, a2.back, sel_end);
        {
            let p = ed.path_mut(hd);
            let pos = p.darts.iter().position(|&d| d == cont1).unwrap();
            p.darts.splice(pos..pos + 1, [ch1, ch2, ch3]);
        }
        let (map, paths, _) = ed.freeze();
        let s1 = Surface::new(map, vec![]).unwrap();
        let (c1, d1) = (paths[hc].clone(), paths[hd].clone());
        check_embedded(&s1.map, &[&c1]).unwrap();
        check_embedded(&s1.map, &[&d1]).unwrap();
        let m = meetings(&s1.map, &[&c1], &[&d1]);
        assert_eq!(m.crossings.len(), 2);
        assert_eq!(m.crossings[0].sign + m.crossings[1].sign, 0);
        assert!(m.tangencies.is_empty());

        // One bigon sweep restores disjointness; the stationary curve keeps
        // its crossing pattern with the meridian.
        let systems = vec![vec![c1], vec![d1]];
        let (s2, sys2) = minimal_position(&s1, &systems, &[false, true]).unwrap();
        let (ca, da) = (&sys2[0][0], &sys2[1][0]);
        check_embedded(&s2.map, &[ca]).unwrap();
        check_embedded(&s2.map, &[da]).unwrap();
        let m2 = meetings(&s2.map, &[ca], &[da]);
        assert!(m2.crossings.is_empty());
        assert!(m2.tangencies.is_empty());
        assert_eq!(s2.genus().unwrap(), 1);
        assert!(cobound_annulus(&s2, ca, da));
    }

    #[test]
    fn arc_finger_bigon_roundtrip() {
        // Same roundtrip with open paths on a disk page: an arc and a
        // finger over it, both ends pinned.
        let page = standard_page(0, 1).unwrap();
        let mut ed = Editor::new(&page.surface.map);
        let hm = ed.track_mark(page.surface.boundary[0].dart);
        let a1 = anchor_on(&mut ed, Dart(0));
        let a2 = anchor_on(&mut ed, a1.cont);
        let a3 = anchor_on(&mut ed, a2.cont);
        let chord_a = link(&mut ed, a1.cont, a2.cont);
        let ta = ed.twin(chord_a);
        let ha = ed.track_path(Path::open(vec![chord_a]));
        let finger = route_prescribed(&mut ed, a3.cont, &[chord_a, ta], a2.cont);
        let hf = ed.track_path(finger);
        let (map, paths, marks) = ed.freeze();
        let s1 = Surface::new(
            map,
            vec![BoundaryMark { dart: marks[hm], label: "b".into() }],
        )
        .unwrap();
        let m = meetings(&s1.map, &[&paths[ha]], &[&paths[hf]]);
        assert_eq!(m.crossings.len(), 2);

        let systems = vec![vec![paths[ha].clone()], vec![paths[hf].clone()]];
        let (s2, sys2) = minimal_position(&s1, &systems, &[false, true]).unwrap();
        let (aa, fa) = (&sys2[0][0], &sys2[1][0]);
        assert!(!aa.closed && !fa.closed);
        let m2 = meetings(&s2.map, &[aa], &[fa]);
        assert!(m2.crossings.is_empty());
        assert!(m2.tangencies.is_empty());
        assert_eq!(s2.boundary.len(), 1);
        let info = &s2.classify().unwrap()[0];
        assert_eq!((info.genus, info.boundary_faces), (0, 1));
    }

    #[test]
    fn isotopy_test_separates_parallel_from_crossing() {
        let s = torus();
        let mut ed = Editor::new(&s.map);
        let hc = ed.track_path(Path::closed(vec![Dart(0)]));
        let hy = ed.track_path(Path::closed(vec![Dart(1)]));
        let cp = ed.path(hc).clone();
        let off = offset_cycle(&mut ed, &cp, Side::Right).unwrap();
        let ho = ed.track_path(off);
        let (map, paths, _) = ed.freeze();
        let s1 = Surface::new(map, vec![]).unwrap();
        // A parallel copy is isotopic; the dual loop is not; a curve is
        // isotopic to itself.
        assert!(isotopic_curves(&s1, &paths[hc], &paths[ho]).unwrap());
        assert!(isotopic_curves(&s1, &paths[hc], &paths[hc]).unwrap());
        assert!(!isotopic_curves(&s1, &paths[hc], &paths[hy]).unwrap());
        // The copy still meets the dual loop once: the slide machinery is
        // not consulted for already-minimal pairs.
        let g = geometric_matrix(&s1.map, &[&paths[ho]], &[&paths[hy]]);
        assert_eq!(g, vec![vec![1]]);
    }
}
