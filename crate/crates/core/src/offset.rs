//! Drawing operations: parallel copies of curves, prescribed-crossing
//! routing, and kinks.
//!
//! All construction goes through two primitives. An *anchor* splits an edge
//! at a new valence-2 vertex; its two corners face the two sides of the
//! edge, and a path crossing there enters through one corner and leaves
//! through the other, which lands the four darts in alternating rotation
//! order (a genuine transversal crossing). A *link* joins two anchors (or
//! any two corners of one face) by a chord. The corner handed to `chord` is
//! always "the corner before dart x", so entering an anchor targets its
//! `cont` dart and leaving targets its `back` dart.

use crate::curves::crossing_probe;
use crate::error::{Error, Result};
use crate::map::{Dart, Editor, Path};

/// Side of a directed strand, relative to its travel direction. The face of
/// a dart lies on its left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// The darts hanging off a passage on one side, in the order the strand's
/// parallel copy would cross them while traveling alongside. Each entry is
/// the dart whose own face is the side the crossing approaches from, ready
/// for `anchor_on`.
pub fn hanging_darts(ed: &Editor, p_in: Dart, p_out: Dart, side: Side) -> Vec<Dart> {
    // Rotation from p_out: (p_out, R sector..., p_in, L sector...).
    let mut right = Vec::new();
    let mut left = Vec::new();
    let mut d = ed.next(p_out);
    let mut in_right = true;
    while d != p_out {
        if d == p_in {
            in_right = false;
        } else if in_right {
            right.push(d);
        } else {
            left.push(d);
        }
        d = ed.next(d);
    }
    match side {
        // Crossing order runs from the in-edge around to the out-edge: a
        // counterclockwise scan on the left, clockwise on the right. A
        // clockwise sweep crosses each edge from its twin's face.
        Side::Left => left,
        Side::Right => {
            right.reverse();
            right.iter().map(|&h| ed.twin(h)).collect()
        }
    }
}

/// An edge split prepared for a transversal crossing.
#[derive(Debug, Clone, Copy)]
pub struct Anchor {
    /// Continuation of the split dart; the entry corner (same side as the
    /// face of the dart that was split).
    pub cont: Dart,
    /// New twin of the split dart; the exit corner on the far side.
    pub back: Dart,
}

/// Split the edge of `h` for a crossing approached from `face(h)`'s side.
pub fn anchor_on(ed: &mut Editor, h: Dart) -> Anchor {
    let (cont, back) = ed.split_edge(h);
    Anchor { cont, back }
}

/// Chord from the corner before `from` to the corner before `to`; both must
/// be corners of one face.
pub fn link(ed: &mut Editor, from: Dart, to: Dart) -> Dart {
    assert!(
        ed.same_face(from, to),
        "link corners lie on different faces ({from} vs {to})"
    );
    ed.chord(from, to).0
}

/// Parallel copy of an embedded closed curve on the given side. Fails if the
/// curve bounds a face-disk on that side (there is nothing to run parallel
/// through). The copy crosses exactly the edges hanging off the curve's
/// vertices on that side, so it meets every other strand the same way the
/// original does.
pub fn offset_cycle(ed: &mut Editor, path: &Path, side: Side) -> Result<Path> {
    assert!(path.closed);
    let m = path.darts.len();
    let mut plan: Vec<Vec<Dart>> = Vec::with_capacity(m);
    for i in 0..m {
        let p_out = path.darts[i];
        let p_in = ed.twin(path.darts[(i + m - 1) % m]);
        plan.push(hanging_darts(ed, p_in, p_out, side));
    }
    if plan.iter().all(|h| h.is_empty()) {
        return Err(Error::InvalidCurve(
            "cannot offset: curve bounds a disk on that side".into(),
        ));
    }
    let mut anchors: Vec<Anchor> = Vec::new();
    for hang in &plan {
        for &h in hang {
            anchors.push(anchor_on(ed, h));
        }
    }
    let mut chords = Vec::with_capacity(anchors.len());
    for k in 0..anchors.len() {
        let from = anchors[k].back;
        let to = anchors[(k + 1) % anchors.len()].cont;
        chords.push(link(ed, from, to));
    }
    Ok(Path::closed(chords))
}

/// Parallel copy of a strand segment, spliced between two prepared corners.
/// `segment` lists consecutive darts of the strand; hanging edges are
/// crossed at the interior vertices only. `start` and `end` are corner darts
/// (the chord attaches before them) supplied by the caller.
pub fn offset_open(
    ed: &mut Editor,
    segment: &[Dart],
    side: Side,
    start: Dart,
    end: Dart,
) -> Result<Path> {
    let mut plan: Vec<Vec<Dart>> = Vec::new();
    for i in 1..segment.len() {
        let p_out = segment[i];
        let p_in = ed.twin(segment[i - 1]);
        plan.push(hanging_darts(ed, p_in, p_out, side));
    }
    let mut anchors: Vec<Anchor> = Vec::new();
    for hang in &plan {
        for &h in hang {
            anchors.push(anchor_on(ed, h));
        }
    }
    let mut chords = Vec::with_capacity(anchors.len() + 1);
    let mut cur = start;
    for a in &anchors {
        chords.push(link(ed, cur, a.cont));
        cur = a.back;
    }
    chords.push(link(ed, cur, end));
    Ok(Path::open(chords))
}

/// Route a strand from one corner to another, crossing exactly the listed
/// edge sides in order. Each listed dart is approached from its own face's
/// side. Used for fingers, bridges, and lassos where the crossing sequence
/// is known.
pub fn route_prescribed(
    ed: &mut Editor,
    start: Dart,
    crossings: &[Dart],
    end: Dart,
) -> Path {
    let mut chords = Vec::with_capacity(crossings.len() + 1);
    let mut cur = start;
    for &h in crossings {
        let a = anchor_on(ed, h);
        chords.push(link(ed, cur, a.cont));
        cur = a.back;
    }
    chords.push(link(ed, cur, end));
    Path::open(chords)
}

/// Insert a small self-crossing loop into a tracked path at the edge of
/// `path[step]`, on the given side. Adds one vertex (the crossing), one
/// self-edge, and one monogon face, leaving the surface unchanged. Returns
/// the sign of the new self-crossing (first passage under, second over).
pub fn insert_kink(ed: &mut Editor, handle: usize, step: usize, side: Side) -> i8 {
    let q = ed.path(handle).darts[step];
    // After the split the tracked path runs [..., q, cont, ...]. The loop
    // pair goes into the corner on the requested side of the strand; the
    // dart the path traverses first is the one that interleaves the two
    // passages.
    let (cont, back) = ed.split_edge(q);
    let (la, lb) = ed.loop_edge_before(if side == Side::Left { cont } else { back });
    let x = if side == Side::Left { la } else { lb };
    let p = ed.path_mut(handle);
    let pos = p.darts.iter().position(|&d| d == cont).unwrap();
    p.darts.insert(pos, x);
    crossing_probe(|d| ed.next(d), back, x, ed.twin(x), cont)
        .expect("kink loop must cross its strand")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{algebraic_matrix, check_embedded, geometric_matrix, meetings, regions};
    use crate::map::Editor;
    use crate::surface::{polygon_surface, standard_page, SideSpec, Surface};

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
    fn offset_on_torus_is_parallel() {
        let s = torus();
        let curve = Path::closed(vec![Dart(0)]);
        let y = Path::closed(vec![Dart(1)]);
        let mut ed = Editor::new(&s.map);
        let hc = ed.track_path(curve.clone());
        let hy = ed.track_path(y.clone());
        let cpath = ed.path(hc).clone();
        let off = offset_cycle(&mut ed, &cpath, Side::Left).unwrap();
        let ho = ed.track_path(off);
        let (map, paths, _) = ed.freeze();
        let s2 = Surface::new(map, vec![]).unwrap();
        let (c, o, y) = (&paths[hc], &paths[ho], &paths[hy]);
        check_embedded(&s2.map, &[c, o]).unwrap();
        // The copy crosses the other loop exactly like the original.
        let g = geometric_matrix(&s2.map, &[o], &[y]);
        assert_eq!(g, vec![vec![1]]);
        let a = algebraic_matrix(&s2.map, &[c], &[y]);
        let ao = algebraic_matrix(&s2.map, &[o], &[y]);
        assert_eq!(a, ao);
        // Original and copy are disjoint and cobound: the torus cut along
        // both is two annuli.
        assert!(meetings(&s2.map, &[c], &[o]).crossings.is_empty());
        assert!(meetings(&s2.map, &[c], &[o]).tangencies.is_empty());
        let csys: [&Path; 1] = [c];
        let osys: [&Path; 1] = [o];
        let walls: &[&[&Path]] = &[&csys, &osys];
        let analysis = regions(&s2, walls);
        assert_eq!(analysis.regions.len(), 2);
        for r in &analysis.regions {
            assert_eq!(r.euler, 0);
            assert_eq!(r.cycles.len(), 2);
        }
        // Each corridor cycle is traced by a single strand.
        for r in &analysis.regions {
            for cyc in &r.cycles {
                let sys_ids: std::collections::BTreeSet<usize> = cyc
                    .iter()
                    .map(|w| match w.kind {
                        crate::curves::WallKind::Strand { sys, .. } => sys,
                        _ => usize::MAX,
                    })
                    .collect();
                assert_eq!(sys_ids.len(), 1);
            }
        }
    }

    #[test]
    fn offsets_on_both_sides_differ() {
        let s = torus();
        let curve = Path::closed(vec![Dart(0)]);
        let mut ed = Editor::new(&s.map);
        let hc = ed.track_path(curve);
        let cpath = ed.path(hc).clone();
        let l = offset_cycle(&mut ed, &cpath, Side::Left).unwrap();
        let hl = ed.track_path(l);
        let r = offset_cycle(&mut ed, &cpath, Side::Right).unwrap();
        let hr = ed.track_path(r);
        let (map, paths, _) = ed.freeze();
        let s2 = Surface::new(map, vec![]).unwrap();
        check_embedded(&s2.map, &[&paths[hc], &paths[hl], &paths[hr]]).unwrap();
        // Three disjoint parallel circles cut the torus into three annuli.
        let c: [&Path; 1] = [&paths[hc]];
        let l: [&Path; 1] = [&paths[hl]];
        let r: [&Path; 1] = [&paths[hr]];
        let walls: &[&[&Path]] = &[&c, &l, &r];
        let analysis = regions(&s2, walls);
        assert_eq!(analysis.regions.len(), 3);
        assert!(analysis.regions.iter().all(|g| g.euler == 0 && g.cycles.len() == 2));
    }

    #[test]
    fn offset_of_disk_bounding_side_fails() {
        // A contractible loop inside the monogon disk bounds a face-disk on
        // one side; the offset on that side has nothing to run through.
        let page = standard_page(0, 1).unwrap();
        let mut ed = Editor::new(&page.surface.map);
        let a1 = anchor_on(&mut ed, Dart(0));
        let (c1, _) = ed.chord(a1.cont, a1.cont);
        let lp = Path::closed(vec![c1]);
        ed.track_path(lp.clone());
        let res_l = offset_cycle(&mut ed, &lp, Side::Left);
        let res_r = offset_cycle(&mut ed, &lp, Side::Right);
        assert!(res_l.is_err() || res_r.is_err());
    }

    #[test]
    fn prescribed_route_crosses_in_order() {
        // Disk with one chord A; route a second strand across A twice
        // (a finger) and check the two crossings have opposite signs.
        let page = standard_page(0, 1).unwrap();
        let mut ed = Editor::new(&page.surface.map);
        let a1 = anchor_on(&mut ed, Dart(0));
        let a2 = anchor_on(&mut ed, a1.cont);
        let a3 = anchor_on(&mut ed, a2.cont);
        let chord_a = link(&mut ed, a1.cont, a2.cont);
        let ta = ed.twin(chord_a);
        let ha = ed.track_path(Path::open(vec![chord_a]));
        // In from one side, back out through the far piece.
        let finger = route_prescribed(&mut ed, a3.cont, &[chord_a, ta], a2.cont);
        let hf = ed.track_path(finger);
        let (map, paths, _) = ed.freeze();
        map.check_path(&paths[ha]).unwrap();
        map.check_path(&paths[hf]).unwrap();
        check_embedded(&map, &[&paths[hf]]).unwrap();
        let m = meetings(&map, &[&paths[ha]], &[&paths[hf]]);
        assert_eq!(m.crossings.len(), 2);
        assert!(m.tangencies.is_empty());
        assert_eq!(m.crossings[0].sign + m.crossings[1].sign, 0);
    }

    #[test]
    fn kink_preserves_surface_and_crosses_itself() {
        let s = torus();
        let mut signs = Vec::new();
        for side in [Side::Left, Side::Right] {
            let mut ed = Editor::new(&s.map);
            let h = ed.track_path(Path::closed(vec![Dart(0)]));
            let sign = insert_kink(&mut ed, h, 0, side);
            let (map, paths, _) = ed.freeze();
            map.check_path(&paths[h]).unwrap();
            let infos = map.classify(&[]).unwrap();
            assert_eq!(infos.len(), 1);
            assert_eq!(infos[0].genus, 1, "kink changed the surface");
            // A monogon face appeared.
            let orb = map.orbits();
            assert!(orb.face_reps.iter().any(|&f| map.face_walk(f).len() == 1));
            // Exactly one self-crossing (each meeting is listed in both
            // passage orders, with opposite signs).
            let m = meetings(&map, &[&paths[h]], &[&paths[h]]);
            assert_eq!(m.crossings.len(), 2);
            assert_eq!(m.crossings[0].sign + m.crossings[1].sign, 0);
            // The returned sign is the one with the passages in path order.
            let first = m
                .crossings
                .iter()
                .find(|c| c.on_a.1 < c.on_b.1)
                .expect("one entry orders the passages along the path");
            assert_eq!(first.sign, sign);
            signs.push(sign);
        }
        // Opposite sides give opposite kinks.
        assert_eq!(signs[0] + signs[1], 0);
    }
}
