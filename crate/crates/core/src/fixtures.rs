//! Small surfaces with curves in known positions, shared by unit tests.

use crate::curves::{algebraic_matrix, check_embedded, Curve, CurveSystem, CurveTag};
use crate::map::{Dart, Editor, Path};
use crate::offset::anchor_on;
use crate::surface::{polygon_surface, SideSpec, Surface};
use crate::transforms::Workbench;

pub fn square() -> [SideSpec; 4] {
    [
        SideSpec::glue("x"),
        SideSpec::glue("y"),
        SideSpec::glue_inv("x"),
        SideSpec::glue_inv("y"),
    ]
}

pub fn essential(paths: Vec<Path>) -> CurveSystem {
    CurveSystem::new(
        paths
            .into_iter()
            .map(|path| Curve { path, tag: CurveTag::Essential })
            .collect(),
    )
}

/// Two one-vertex tori joined by a neck: curve pair (x0, x1) against
/// (y0, y1), dual handle by handle, with the neck as a ready-made slide band.
pub fn two_tori_bench() -> (Workbench, Vec<Dart>) {
    let (t1, _) = polygon_surface(&square()).unwrap();
    let (t2, _) = polygon_surface(&square()).unwrap();
    let (map, shift) = t1.map.disjoint_union(&t2.map);
    let mut ed = Editor::new(&map);
    let (neck, _) = ed.chord(Dart(0), Dart(shift));
    let (map, _, _) = ed.freeze();
    let surface = Surface::new(map, vec![]).unwrap();
    let fam_a = essential(vec![
        Path::closed(vec![Dart(0)]),
        Path::closed(vec![Dart(shift)]),
    ]);
    let fam_b = essential(vec![
        Path::closed(vec![Dart(1)]),
        Path::closed(vec![Dart(shift + 1)]),
    ]);
    (Workbench::new(surface, vec![fam_a, fam_b], vec![]), vec![neck])
}

/// A curve on the one-vertex torus meeting the x handle curve twice with the
/// same sign: drawn by splitting x and routing a strand across x and y once
/// more. Candidate routings are tried on throwaway copies until one is
/// embedded with pairing entry ±2, so the obstruction fixtures are real by
/// construction.
pub fn one_two_pair() -> (Surface, CurveSystem, CurveSystem) {
    let (t, _) = polygon_surface(&square()).unwrap();
    for swap_ends in [false, true] {
        for first_y in [false, true] {
            for x_choice in 0..4usize {
                for y_choice in 0..2usize {
                    let mut ed = Editor::new(&t.map);
                    let hx = ed.track_path(Path::closed(vec![Dart(0)]));
                    let (cont_x, back_x) = ed.split_edge(Dart(0));
                    let xc = match x_choice {
                        0 => Dart(0),
                        1 => cont_x,
                        2 => ed.twin(Dart(0)),
                        _ => ed.twin(cont_x),
                    };
                    let yc = if y_choice == 0 { Dart(1) } else { ed.twin(Dart(1)) };
                    let (start, end) =
                        if swap_ends { (back_x, cont_x) } else { (cont_x, back_x) };
                    let order = if first_y { [yc, xc] } else { [xc, yc] };
                    let mut cur = start;
                    let mut chords = Vec::new();
                    let mut ok = true;
                    for h in order {
                        let a = anchor_on(&mut ed, h);
                        if !ed.same_face(cur, a.cont) {
                            ok = false;
                            break;
                        }
                        chords.push(ed.chord(cur, a.cont).0);
                        cur = a.back;
                    }
                    if !ok || !ed.same_face(cur, end) {
                        continue;
                    }
                    chords.push(ed.chord(cur, end).0);
                    let c = Path::closed(chords);
                    let (map, paths, _) = ed.freeze();
                    let surface = Surface::new(map, vec![]).unwrap();
                    let x = paths[hx].clone();
                    // The two curves cross at the split vertex by design, so
                    // each is checked on its own.
                    if check_embedded(&surface.map, &[&x]).is_err()
                        || check_embedded(&surface.map, &[&c]).is_err()
                    {
                        continue;
                    }
                    let m = algebraic_matrix(&surface.map, &[&x], &[&c]);
                    if m[0][0].abs() == 2 {
                        return (surface, essential(vec![x]), essential(vec![c]));
                    }
                }
            }
        }
    }
    panic!("no embedded double-crossing routing found");
}
