//! Surfaces with labeled boundary, and polygon presentations.
//!
//! A `Surface` is a combinatorial map plus a set of marked boundary faces,
//! each carrying a distinct label. The main constructor builds a surface
//! from a polygon whose sides are either glued in pairs (orientation-
//! reversing, so the result is oriented) or left free; free sides assemble
//! into the boundary circles.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::map::{CombMap, ComponentInfo, Dart};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMark {
    /// Any dart on the boundary face's walk.
    pub dart: Dart,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    pub map: CombMap,
    pub boundary: Vec<BoundaryMark>,
}

impl Surface {
    pub fn new(map: CombMap, boundary: Vec<BoundaryMark>) -> Result<Surface> {
        let orbits = map.orbits();
        let mut seen_faces = vec![false; orbits.face_reps.len()];
        let mut labels: Vec<&str> = Vec::new();
        for mark in &boundary {
            if mark.dart.idx() >= map.dart_count() {
                return Err(Error::InvalidMap(format!("boundary witness {} out of range", mark.dart)));
            }
            let f = orbits.face_id[mark.dart.idx()];
            if seen_faces[f] {
                return Err(Error::InvalidMap(format!(
                    "two boundary marks on the face of {}",
                    mark.dart
                )));
            }
            seen_faces[f] = true;
            if labels.contains(&mark.label.as_str()) {
                return Err(Error::InvalidMap(format!(
                    "duplicate boundary label {:?}",
                    mark.label
                )));
            }
            labels.push(&mark.label);
        }
        Ok(Surface { map, boundary })
    }

    pub fn classify(&self) -> Result<Vec<ComponentInfo>> {
        let marks: Vec<Dart> = self.boundary.iter().map(|m| m.dart).collect();
        self.map.classify(&marks)
    }

    pub fn is_connected(&self) -> bool {
        self.map.components().1 == 1
    }

    /// Genus of a connected surface.
    pub fn genus(&self) -> Result<u32> {
        let infos = self.classify()?;
        if infos.len() != 1 {
            return Err(Error::InvalidDiagram(format!(
                "expected a connected surface, found {} components",
                infos.len()
            )));
        }
        Ok(infos[0].genus)
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn boundary_mark(&self, label: &str) -> Option<&BoundaryMark> {
        self.boundary.iter().find(|m| m.label == label)
    }

    /// Walk of the boundary face with the given label.
    pub fn boundary_walk(&self, label: &str) -> Result<Vec<Dart>> {
        let mark = self
            .boundary_mark(label)
            .ok_or_else(|| Error::InvalidDiagram(format!("no boundary labeled {label:?}")))?;
        Ok(self.map.face_walk(mark.dart))
    }

    /// True if `d`'s face is one of the marked boundary faces.
    pub fn on_boundary_face(&self, d: Dart) -> bool {
        self.boundary.iter().any(|m| self.map.same_face(m.dart, d))
    }

    /// Darts whose tail vertex touches some boundary face.
    pub fn boundary_vertex_darts(&self) -> Vec<bool> {
        let orbits = self.map.orbits();
        let mut at_boundary_vertex = vec![false; self.map.dart_count()];
        let mut vertex_hit = vec![false; orbits.vertex_reps.len()];
        for mark in &self.boundary {
            for d in self.map.face_walk(mark.dart) {
                vertex_hit[orbits.vertex_id[d.idx()]] = true;
            }
        }
        for d in self.map.darts() {
            at_boundary_vertex[d.idx()] = vertex_hit[orbits.vertex_id[d.idx()]];
        }
        at_boundary_vertex
    }
}

/// One polygon side: glued to the like-named side (with opposite `inverse`
/// flags) or free. Free sides may name the boundary circle they end up on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideSpec {
    Glue { name: String, inverse: bool },
    Free { boundary_label: Option<String> },
}

impl SideSpec {
    pub fn glue(name: &str) -> SideSpec {
        SideSpec::Glue { name: name.into(), inverse: false }
    }
    pub fn glue_inv(name: &str) -> SideSpec {
        SideSpec::Glue { name: name.into(), inverse: true }
    }
    pub fn free() -> SideSpec {
        SideSpec::Free { boundary_label: None }
    }
    pub fn free_labeled(label: &str) -> SideSpec {
        SideSpec::Free { boundary_label: Some(label.into()) }
    }
}

/// Where each polygon side ended up in the built map. Render uses this to
/// recover the polygon picture, and builders use it to draw on sides.
#[derive(Debug, Clone)]
pub struct PolygonLayout {
    pub sides: Vec<SideInfo>,
}

#[derive(Debug, Clone)]
pub struct SideInfo {
    pub spec: SideSpec,
    /// Interior-walk dart of this side (runs corner i to corner i+1).
    pub fwd: Dart,
    /// Partner side index for glued sides.
    pub glued_to: Option<usize>,
    /// Boundary label this side ended up on, for free sides.
    pub on_boundary: Option<String>,
}

impl PolygonLayout {
    pub fn side_named(&self, name: &str) -> Option<(usize, usize)> {
        let mut found = None;
        for (i, s) in self.sides.iter().enumerate() {
            if let SideSpec::Glue { name: n, inverse } = &s.spec {
                if n == name {
                    let f = found.get_or_insert((usize::MAX, usize::MAX));
                    if !*inverse {
                        f.0 = i;
                    } else {
                        f.1 = i;
                    }
                }
            }
        }
        found
    }
}

/// Build a surface from a single polygon. Returns the surface and the side
/// layout. Glued sides are identified with a reversal (the oriented double
/// of each label), so the result is always oriented; a label appearing twice
/// with the same `inverse` flag is rejected as non-orientable input.
pub fn polygon_surface(spec: &[SideSpec]) -> Result<(Surface, PolygonLayout)> {
    let n = spec.len();
    if n == 0 {
        return Err(Error::InvalidMap("empty polygon".into()));
    }
    // Match up glue labels.
    let mut partner: Vec<Option<usize>> = vec![None; n];
    {
        let mut by_name: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, s) in spec.iter().enumerate() {
            if let SideSpec::Glue { name, .. } = s {
                by_name.entry(name).or_default().push(i);
            }
        }
        for (name, sides) in by_name {
            if sides.len() != 2 {
                return Err(Error::InvalidMap(format!(
                    "glue label {name:?} appears {} times, need exactly 2",
                    sides.len()
                )));
            }
            let (a, b) = (sides[0], sides[1]);
            let inv = |i: usize| matches!(&spec[i], SideSpec::Glue { inverse: true, .. });
            if inv(a) == inv(b) {
                return Err(Error::NonOrientable(format!(
                    "label {name:?} glued to itself without reversal"
                )));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
    }
    // Darts: fwd_i = i for every side; bwd darts for free sides follow.
    let mut bwd: Vec<Option<u32>> = vec![None; n];
    let mut m = n as u32;
    for (i, p) in partner.iter().enumerate() {
        if p.is_none() {
            bwd[i] = Some(m);
            m += 1;
        }
    }
    let total = m as usize;
    let mut twin = vec![0u32; total];
    for i in 0..n {
        match partner[i] {
            Some(j) => {
                twin[i] = j as u32;
            }
            None => {
                let b = bwd[i].unwrap();
                twin[i] = b;
                twin[b as usize] = i as u32;
            }
        }
    }
    // Face walks: the interior cycle plus one outer cycle per boundary
    // circle. The rotation is recovered from them: next(d) = phi(twin(d)).
    let mut phi = vec![u32::MAX; total];
    for i in 0..n {
        phi[i] = ((i + 1) % n) as u32;
    }
    // Outer walks: after bwd_i comes bwd of the previous free side around
    // the identified corner. Jumps pass through glued sides: arriving at
    // corner i means also being at corner partner(i-1) (corners i and i+1
    // bracket side i; gluing side a to side b identifies corner a with
    // corner b+1 and corner a+1 with corner b).
    let prev_free = |i: usize| -> Result<usize> {
        let mut k = i;
        let mut steps = 0;
        loop {
            let side = (k + n - 1) % n;
            match partner[side] {
                None => return Ok(side),
                Some(p) => {
                    k = p;
                }
            }
            steps += 1;
            if steps > n {
                return Err(Error::InvalidMap("corner identification does not close".into()));
            }
        }
    };
    for i in 0..n {
        if let Some(b) = bwd[i] {
            let j = prev_free(i)?;
            phi[b as usize] = bwd[j].unwrap();
        }
    }
    let mut next = vec![0u32; total];
    for d in 0..total {
        next[twin[d] as usize] = phi[d];
    }
    let map = CombMap::from_permutations(next, twin.clone())?;

    // Boundary faces: orbits of phi among bwd darts. Deterministic label
    // assignment: components ordered by their smallest side index.
    let mut boundary: Vec<BoundaryMark> = Vec::new();
    let mut on_boundary: Vec<Option<String>> = vec![None; n];
    let mut seen = vec![false; total];
    let mut auto = 0;
    for i in 0..n {
        let Some(b) = bwd[i] else { continue };
        if seen[b as usize] {
            continue;
        }
        // Collect the cycle.
        let mut cycle_sides = Vec::new();
        let mut d = b;
        loop {
            seen[d as usize] = true;
            let side = twin[d as usize] as usize;
            cycle_sides.push(side);
            d = phi[d as usize];
            if d == b {
                break;
            }
        }
        let mut label: Option<String> = None;
        for &s in &cycle_sides {
            if let SideSpec::Free { boundary_label: Some(l) } = &spec[s] {
                match &label {
                    None => label = Some(l.clone()),
                    Some(prev) if prev == l => {}
                    Some(prev) => {
                        return Err(Error::InvalidMap(format!(
                            "boundary labels {prev:?} and {l:?} on the same circle"
                        )));
                    }
                }
            }
        }
        let label = label.unwrap_or_else(|| {
            let l = format!("b{auto}");
            auto += 1;
            l
        });
        for &s in &cycle_sides {
            on_boundary[s] = Some(label.clone());
        }
        boundary.push(BoundaryMark { dart: Dart(b), label });
    }
    let surface = Surface::new(map, boundary)?;
    let layout = PolygonLayout {
        sides: spec
            .iter()
            .enumerate()
            .map(|(i, s)| SideInfo {
                spec: s.clone(),
                fwd: Dart(i as u32),
                glued_to: partner[i],
                on_boundary: on_boundary[i].clone(),
            })
            .collect(),
    };
    Ok((surface, layout))
}

/// A compact oriented surface presented as a polygon: the page of an open
/// book, with its handle structure remembered.
#[derive(Debug, Clone)]
pub struct Page {
    pub surface: Surface,
    pub layout: PolygonLayout,
    /// Page genus.
    pub genus: u32,
    /// Number of boundary circles.
    pub boundary: u32,
    /// Names of the genus handle pairs, in order: ("x0","y0"), ("x1","y1"), ...
    pub handle_pairs: Vec<(String, String)>,
    /// Names of the boundary-joining handles: "t0", "t1", ...
    pub tunnel_handles: Vec<String>,
}

impl Page {
    /// Arc count of the page's cut system: 2*genus + boundary - 1.
    pub fn arc_count(&self) -> u32 {
        2 * self.genus + self.boundary.saturating_sub(1)
    }
}

/// Standard page of genus `p` with `b >= 1` boundary circles: a polygon with
/// `p` handle pairs and `b-1` tunnel handles, with a free gap side between
/// consecutive feet so every handle has boundary on both sides of each foot.
pub fn standard_page(p: u32, b: u32) -> Result<Page> {
    if b == 0 {
        return Err(Error::InvalidParams("a page needs at least one boundary circle".into()));
    }
    let mut spec = Vec::new();
    let mut handle_pairs = Vec::new();
    let mut tunnel_handles = Vec::new();
    for i in 0..p {
        let x = format!("x{i}");
        let y = format!("y{i}");
        spec.push(SideSpec::glue(&x));
        spec.push(SideSpec::free());
        spec.push(SideSpec::glue(&y));
        spec.push(SideSpec::free());
        spec.push(SideSpec::glue_inv(&x));
        spec.push(SideSpec::free());
        spec.push(SideSpec::glue_inv(&y));
        spec.push(SideSpec::free());
        handle_pairs.push((x, y));
    }
    for j in 0..b.saturating_sub(1) {
        let t = format!("t{j}");
        spec.push(SideSpec::glue(&t));
        spec.push(SideSpec::free());
        spec.push(SideSpec::glue_inv(&t));
        spec.push(SideSpec::free());
        tunnel_handles.push(t);
    }
    spec.push(SideSpec::free());
    let (surface, layout) = polygon_surface(&spec)?;
    let infos = surface.classify()?;
    debug_assert_eq!(infos.len(), 1);
    debug_assert_eq!(infos[0].genus, p);
    debug_assert_eq!(surface.boundary_count(), b as usize);
    Ok(Page { surface, layout, genus: p, boundary: b, handle_pairs, tunnel_handles })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monogon_disk() {
        let (s, _) = polygon_surface(&[SideSpec::free()]).unwrap();
        let infos = s.classify().unwrap();
        assert_eq!(infos[0].euler, 1);
        assert_eq!(infos[0].genus, 0);
        assert_eq!(s.boundary_count(), 1);
    }

    #[test]
    fn square_torus() {
        let spec = vec![
            SideSpec::glue("x"),
            SideSpec::glue("y"),
            SideSpec::glue_inv("x"),
            SideSpec::glue_inv("y"),
        ];
        let (s, _) = polygon_surface(&spec).unwrap();
        let infos = s.classify().unwrap();
        assert_eq!(infos[0].genus, 1);
        assert_eq!(infos[0].euler, 0);
        assert_eq!(s.boundary_count(), 0);
        assert_eq!(infos[0].vertices, 1);
    }

    #[test]
    fn genus_two_octagon() {
        let spec = vec![
            SideSpec::glue("a"),
            SideSpec::glue("b"),
            SideSpec::glue_inv("a"),
            SideSpec::glue_inv("b"),
            SideSpec::glue("c"),
            SideSpec::glue("d"),
            SideSpec::glue_inv("c"),
            SideSpec::glue_inv("d"),
        ];
        let (s, _) = polygon_surface(&spec).unwrap();
        assert_eq!(s.classify().unwrap()[0].genus, 2);
    }

    #[test]
    fn same_sign_gluing_rejected() {
        let spec = vec![SideSpec::glue("x"), SideSpec::glue("x")];
        match polygon_surface(&spec) {
            Err(Error::NonOrientable(_)) => {}
            other => panic!("expected NonOrientable, got {other:?}"),
        }
    }

    #[test]
    fn unmatched_label_rejected() {
        let spec = vec![SideSpec::glue("x"), SideSpec::free()];
        assert!(polygon_surface(&spec).is_err());
    }

    #[test]
    fn conflicting_boundary_labels_rejected() {
        // Both free sides of this bigon lie on the same circle.
        let spec = vec![
            SideSpec::free_labeled("left"),
            SideSpec::free_labeled("right"),
        ];
        assert!(polygon_surface(&spec).is_err());
    }

    #[test]
    fn standard_pages_classify() {
        for (p, b) in [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1), (2, 3), (3, 2)] {
            let page = standard_page(p, b).unwrap();
            let infos = page.surface.classify().unwrap();
            assert_eq!(infos.len(), 1, "page ({p},{b}) disconnected");
            assert_eq!(infos[0].genus, p, "page ({p},{b}) genus");
            assert_eq!(page.surface.boundary_count(), b as usize, "page ({p},{b}) boundary");
            assert_eq!(infos[0].euler, 2 - 2 * p as i64 - b as i64);
        }
    }

    #[test]
    fn page_boundary_labels_deterministic() {
        let page = standard_page(1, 2).unwrap();
        let labels: Vec<&str> = page.surface.boundary.iter().map(|m| m.label.as_str()).collect();
        assert_eq!(labels, vec!["b0", "b1"]);
        assert!(page.surface.boundary_walk("b0").is_ok());
        assert!(page.surface.boundary_walk("nope").is_err());
    }

    #[test]
    fn boundary_vertex_darts_cover_free_sides() {
        let page = standard_page(1, 1).unwrap();
        let at = page.surface.boundary_vertex_darts();
        // Every polygon corner touches the boundary on this page (each
        // corner class contains a free-side endpoint).
        for s in &page.layout.sides {
            assert!(at[s.fwd.idx()]);
        }
    }
}
