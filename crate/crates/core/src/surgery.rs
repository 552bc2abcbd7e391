//! Surgery: cut a surface along disjoint embedded closed curves and cap the
//! resulting boundary circles with disks.
//!
//! The construction never leaves the map category. Each curve edge splits
//! into a left and a right copy; each curve vertex splits into a left and a
//! right vertex carrying the rotation sectors on its side. The two cap disks
//! per curve then appear on their own as the faces traced by the new copies,
//! so capping costs nothing extra. Euler characteristic rises by 2 per
//! curve.

use crate::curves::check_embedded;
use crate::error::{Error, Result};
use crate::map::{fresh_cell, Cell, CombMap, Dart, Path};
use crate::surface::Surface;

/// The two cap disks produced by cutting along one curve, with the two
/// parallel copies of the curve bounding them. "Left" is the side the face
/// orientation convention puts on the left of the curve's travel direction.
#[derive(Debug, Clone)]
pub struct CurveCaps {
    /// A dart whose face is the left cap.
    pub left_face: Dart,
    /// A dart whose face is the right cap.
    pub right_face: Dart,
    pub left_copy: Path,
    pub right_copy: Path,
}

#[derive(Debug, Clone)]
pub struct SurgeryOutcome {
    pub surface: Surface,
    /// Carried paths, in input order. Darts are unchanged: carried systems
    /// must be vertex-disjoint from the cut curves.
    pub carried: Vec<Path>,
    pub caps: Vec<CurveCaps>,
}

/// Cut along every curve in `cut` simultaneously and cap. The cut curves
/// must form an embedded system of closed curves away from the boundary;
/// `carry` paths must not share a vertex with any cut curve.
pub fn cut_and_cap(surface: &Surface, cut: &[&Path], carry: &[&Path]) -> Result<SurgeryOutcome> {
    let map = &surface.map;
    for p in cut {
        if !p.closed {
            return Err(Error::SurgeryObstruction("cut path is not a closed curve".into()));
        }
    }
    check_embedded(map, cut).map_err(|e| Error::SurgeryObstruction(e.to_string()))?;

    let orbits = map.orbits();
    let mut cut_vertex = vec![false; orbits.vertex_reps.len()];
    for p in cut {
        for &d in &p.darts {
            cut_vertex[orbits.vertex_id[d.idx()]] = true;
        }
    }
    let at_boundary = surface.boundary_vertex_darts();
    for p in cut {
        for &d in &p.darts {
            if at_boundary[d.idx()] {
                return Err(Error::SurgeryObstruction(format!(
                    "cut curve passes through a boundary vertex at {d}"
                )));
            }
        }
    }
    for p in carry {
        for &d in &p.darts {
            if cut_vertex[orbits.vertex_id[d.idx()]]
                || cut_vertex[orbits.vertex_id[map.twin(d).idx()]]
            {
                return Err(Error::SurgeryObstruction(format!(
                    "carried path touches a cut vertex at {d}"
                )));
            }
        }
    }

    // Growable copies of the map's tables. The old curve darts become the
    // left copies in place; right copies are fresh.
    let n0 = map.dart_count();
    let mut next: Vec<u32> = map.raw_next();
    let mut twin: Vec<u32> = map.raw_twin();
    let mut edge_cell: Vec<Cell> = map.raw_edge_cells().to_vec();
    let mut face_cell: Vec<Cell> = map.raw_face_cells().to_vec();
    let alloc = |edge: Cell, face: Cell,
                     next: &mut Vec<u32>,
                     twin: &mut Vec<u32>,
                     edge_cell: &mut Vec<Cell>,
                     face_cell: &mut Vec<Cell>|
     -> u32 {
        let d = next.len() as u32;
        next.push(d);
        twin.push(d);
        edge_cell.push(edge);
        face_cell.push(face);
        d
    };

    let mut caps = Vec::with_capacity(cut.len());
    for p in cut {
        let m = p.darts.len();
        let cap_l = fresh_cell();
        let cap_r = fresh_cell();
        // Right copies, one edge per curve edge.
        let mut right = Vec::with_capacity(m);
        for &a in &p.darts {
            let t = map.twin(a);
            let ar = alloc(
                map.edge_cell(a),
                cap_r,
                &mut next,
                &mut twin,
                &mut edge_cell,
                &mut face_cell,
            );
            let art = alloc(
                map.edge_cell(t),
                map.face_cell(t),
                &mut next,
                &mut twin,
                &mut edge_cell,
                &mut face_cell,
            );
            twin[ar as usize] = art;
            twin[art as usize] = ar;
            right.push((ar, art));
        }
        // Left copies are the old darts; their outward side becomes the cap.
        for &a in &p.darts {
            face_cell[map.twin(a).idx()] = cap_l;
        }
        // Rotation surgery at each curve vertex. Original rotation at the
        // tail of darts[i], starting from the out-dart:
        //   (a_i, M_1..M_p, in_i, N_1..N_q)
        // where in_i = twin(darts[i-1]). The left vertex keeps the N sector,
        // the right vertex takes M with the fresh copies.
        for i in 0..m {
            let a = p.darts[i];
            let inward = map.twin(p.darts[(i + m - 1) % m]);
            let (ar, _) = right[i];
            let (_, prev_art) = right[(i + m - 1) % m];
            // Collect the old rotation once, before edits at this vertex.
            let cycle = map.vertex_walk(a);
            let in_pos = cycle
                .iter()
                .position(|&d| d == inward)
                .expect("curve in-dart missing from rotation");
            let msec: Vec<Dart> = cycle[1..in_pos].to_vec();
            let nsec: Vec<Dart> = cycle[in_pos + 1..].to_vec();
            // Left vertex: (inward, N..., a).
            let mut lcycle: Vec<u32> = Vec::new();
            lcycle.push(inward.0);
            lcycle.extend(nsec.iter().map(|d| d.0));
            lcycle.push(a.0);
            for w in 0..lcycle.len() {
                let from = lcycle[w];
                let to = lcycle[(w + 1) % lcycle.len()];
                next[from as usize] = to;
            }
            // Right vertex: (ar_i, M..., prev_art).
            let mut rcycle: Vec<u32> = Vec::new();
            rcycle.push(ar);
            rcycle.extend(msec.iter().map(|d| d.0));
            rcycle.push(prev_art);
            for w in 0..rcycle.len() {
                let from = rcycle[w];
                let to = rcycle[(w + 1) % rcycle.len()];
                next[from as usize] = to;
            }
        }
        caps.push(CurveCaps {
            left_face: map.twin(p.darts[0]),
            right_face: Dart(right[0].0),
            left_copy: Path::closed(p.darts.clone()),
            right_copy: Path::closed(right.iter().map(|&(ar, _)| Dart(ar)).collect()),
        });
    }
    let _ = n0;

    let new_map = CombMap::from_parts(next, twin, edge_cell, face_cell)?;
    let new_surface = Surface::new(new_map, surface.boundary.clone())?;
    let carried = carry.iter().map(|p| (*p).clone()).collect();
    // The construction is only correct if every copy still walks.
    for cap in &caps {
        new_surface.map.check_path(&cap.left_copy)?;
        new_surface.map.check_path(&cap.right_copy)?;
    }
    Ok(SurgeryOutcome { surface: new_surface, carried, caps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{is_separating, itinerary, regions, WallKind};
    use crate::map::Editor;
    use crate::surface::{polygon_surface, standard_page, SideSpec};
    use std::collections::BTreeSet;

    /// Independent oracle: predict the cut-and-capped surface's component
    /// classification from region analysis alone. Each complementary region
    /// becomes a component; each of its cut-curve boundary cycles gets a cap
    /// (+1 to the Euler characteristic), while surface-boundary cycles stay.
    /// Returns a sorted list of (euler, boundary_circles, genus).
    fn predict(surface: &Surface, cut: &[&Path]) -> Vec<(i64, usize, u32)> {
        let walls: &[&[&Path]] = &[cut];
        let analysis = regions(surface, walls);
        let mut out = Vec::new();
        for r in &analysis.regions {
            let mut strand_cycles = 0usize;
            let mut boundary_cycles = 0usize;
            for cyc in &r.cycles {
                let kinds: BTreeSet<bool> = cyc
                    .iter()
                    .map(|w| matches!(w.kind, WallKind::SurfaceBoundary))
                    .collect();
                assert_eq!(kinds.len(), 1, "mixed wall cycle impossible away from boundary");
                if kinds.contains(&true) {
                    boundary_cycles += 1;
                } else {
                    strand_cycles += 1;
                }
            }
            let euler = r.euler + strand_cycles as i64;
            let closed = euler + boundary_cycles as i64;
            assert_eq!(closed % 2, 0);
            out.push((euler, boundary_cycles, ((2 - closed) / 2) as u32));
        }
        out.sort();
        out
    }

    fn outcome_shape(out: &SurgeryOutcome) -> Vec<(i64, usize, u32)> {
        let mut shape: Vec<(i64, usize, u32)> = out
            .surface
            .classify()
            .unwrap()
            .iter()
            .map(|c| (c.euler, c.boundary_faces, c.genus))
            .collect();
        shape.sort();
        shape
    }

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

    fn genus2() -> Surface {
        polygon_surface(&[
            SideSpec::glue("a"),
            SideSpec::glue("b"),
            SideSpec::glue_inv("a"),
            SideSpec::glue_inv("b"),
            SideSpec::glue("c"),
            SideSpec::glue("d"),
            SideSpec::glue_inv("c"),
            SideSpec::glue_inv("d"),
        ])
        .unwrap()
        .0
    }

    /// A closed curve crossing the glued edge of polygon side `side` once:
    /// split that edge and join the two corners at the new vertex by a chord
    /// through the interior face.
    fn seam_core(surface: &Surface, side: u32) -> (Surface, Path) {
        let mut ed = Editor::new(&surface.map);
        let marks: Vec<usize> =
            surface.boundary.iter().map(|m| ed.track_mark(m.dart)).collect();
        let (cont, back) = ed.split_edge(Dart(side));
        let (c, _ct) = ed.chord(cont, back);
        let h = ed.track_path(Path::closed(vec![c]));
        let (map, paths, markd) = ed.freeze();
        let boundary = surface
            .boundary
            .iter()
            .zip(marks.iter())
            .map(|(m, &h)| crate::surface::BoundaryMark {
                dart: markd[h],
                label: m.label.clone(),
            })
            .collect();
        let s = Surface::new(map, boundary).unwrap();
        let p = paths[h].clone();
        s.map.check_path(&p).unwrap();
        (s, p)
    }

    #[test]
    fn torus_cut_cap_gives_sphere() {
        let s = torus();
        let (s, core) = seam_core(&s, 0);
        let predicted = predict(&s, &[&core]);
        let out = cut_and_cap(&s, &[&core], &[]).unwrap();
        assert_eq!(outcome_shape(&out), predicted);
        assert_eq!(outcome_shape(&out), vec![(2, 0, 0)]);
        // Both copies of the curve bound their caps: walks of equal length.
        assert_eq!(out.caps.len(), 1);
        let caps = &out.caps[0];
        assert_eq!(
            out.surface.map.face_walk(caps.left_face).len(),
            caps.left_copy.darts.len()
        );
        assert_eq!(
            out.surface.map.face_walk(caps.right_face).len(),
            caps.right_copy.darts.len()
        );
    }

    #[test]
    fn genus2_single_cut() {
        let s = genus2();
        let (s, core) = seam_core(&s, 0);
        assert!(!is_separating(&s, &core));
        let predicted = predict(&s, &[&core]);
        let out = cut_and_cap(&s, &[&core], &[]).unwrap();
        assert_eq!(outcome_shape(&out), predicted);
        assert_eq!(outcome_shape(&out), vec![(0, 0, 1)]);
    }

    #[test]
    fn genus2_double_cut_carries_nothing() {
        let s = genus2();
        let (s, core_a) = seam_core(&s, 0);
        let (s, core_c) = {
            // Second core on the other handle; rebuild so both live in one map.
            let mut ed = Editor::new(&s.map);
            let ha = ed.track_path(core_a.clone());
            let (cont, back) = ed.split_edge(Dart(4));
            let (c, _ct) = ed.chord(cont, back);
            let hc = ed.track_path(Path::closed(vec![c]));
            let (map, paths, _) = ed.freeze();
            let s = Surface::new(map, vec![]).unwrap();
            let a = paths[ha].clone();
            let c = paths[hc].clone();
            (s, (a, c))
        };
        let (core_a, core_c) = core_c;
        let predicted = predict(&s, &[&core_a, &core_c]);
        let out = cut_and_cap(&s, &[&core_a, &core_c], &[]).unwrap();
        assert_eq!(outcome_shape(&out), predicted);
        assert_eq!(outcome_shape(&out), vec![(2, 0, 0)]);
    }

    #[test]
    fn annulus_page_cut_along_core() {
        let page = standard_page(0, 2).unwrap();
        let t_side = page.layout.side_named("t0").unwrap().0;
        let (s, core) = seam_core(&page.surface, t_side as u32);
        let predicted = predict(&s, &[&core]);
        let out = cut_and_cap(&s, &[&core], &[]).unwrap();
        assert_eq!(outcome_shape(&out), predicted);
        // Two disks, each keeping one original boundary circle.
        assert_eq!(outcome_shape(&out), vec![(1, 1, 0), (1, 1, 0)]);
        assert_eq!(out.surface.boundary.len(), 2);
    }

    #[test]
    fn carried_path_survives_with_itinerary() {
        let s = genus2();
        let (s, both) = {
            let mut ed = Editor::new(&s.map);
            let (cont_a, back_a) = ed.split_edge(Dart(0));
            let (ca, _) = ed.chord(cont_a, back_a);
            let ha = ed.track_path(Path::closed(vec![ca]));
            let (cont_c, back_c) = ed.split_edge(Dart(4));
            let (cc, _) = ed.chord(cont_c, back_c);
            let hc = ed.track_path(Path::closed(vec![cc]));
            let (map, paths, _) = ed.freeze();
            let s = Surface::new(map, vec![]).unwrap();
            (s, (paths[ha].clone(), paths[hc].clone()))
        };
        let (core_a, core_c) = both;
        let tracked: BTreeSet<_> =
            [s.map.edge_cell(Dart(4)), s.map.edge_cell(Dart(6))].into_iter().collect();
        let before = itinerary(&s.map, &core_c, Some(&tracked));
        assert_eq!(before.len(), 1);
        let out = cut_and_cap(&s, &[&core_a], &[&core_c]).unwrap();
        let after = itinerary(&out.surface.map, &out.carried[0], Some(&tracked));
        assert_eq!(before, after);
    }

    #[test]
    fn obstructions_reported() {
        let page = standard_page(0, 2).unwrap();
        let t_side = page.layout.side_named("t0").unwrap().0;
        let (s, core) = seam_core(&page.surface, t_side as u32);
        // Cutting along an open path is rejected.
        let open = Path::open(core.darts.clone());
        assert!(matches!(
            cut_and_cap(&s, &[&open], &[]),
            Err(Error::SurgeryObstruction(_))
        ));
        // A "curve" through a boundary vertex is rejected: boundary walks
        // pass through every free-side corner.
        let walk = s.boundary_walk("b0").unwrap();
        let loop_on_boundary = Path::closed(walk.clone());
        assert!(matches!(
            cut_and_cap(&s, &[&loop_on_boundary], &[]),
            Err(Error::SurgeryObstruction(_))
        ));
        // Carrying the cut curve itself is rejected.
        assert!(matches!(
            cut_and_cap(&s, &[&core], &[&core]),
            Err(Error::SurgeryObstruction(_))
        ));
    }
}
