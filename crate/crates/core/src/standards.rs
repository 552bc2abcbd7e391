//! Standard-position certificates for pairs of curve families.
//!
//! Two curve families of a diagram are *standard* when, up to isotopy, their
//! curves pair off: some pairs meet exactly once (handle duals), the rest are
//! parallel copies, and nothing else touches. This module detects that
//! pattern, computes the homology invariants that can rule it out outright,
//! and searches for slide sequences witnessing it when it is not yet visible.
//!
//! Certification is tiered. Tier 0 looks for the pattern directly. Tier 1
//! replays a caller-supplied slide witness on a scratch copy and re-checks
//! the pattern — a witness is never taken on faith, so stale or corrupted
//! move lists degrade the answer instead of forging it. Tier 2 runs a bounded
//! beam search over slides. If all of that fails but the pairing matrix has
//! unit elementary divisors, the pair is certified at homology level only.

use std::collections::VecDeque;

use crate::curves::{
    algebraic_matrix, check_embedded, geometric_matrix, meetings, CurveSystem, CurveTag,
};
use crate::diagram::PairWitness;
use crate::error::{Error, Result};
use crate::isotopy::{isotopic_curves, minimal_position};
use crate::map::{Dart, Path};
use crate::params::TrisectionParams;
use crate::surface::Surface;
use crate::surgery::cut_and_cap;
use crate::transforms::{replay, Move, Workbench};

/// How hard `certify_pair` may work to exhibit a slide witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Maximum number of slides in a searched witness. Zero disables search.
    pub depth: u32,
    /// Positions kept per search layer.
    pub beam: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { depth: 6, beam: 8 }
    }
}

/// What backs a standardness certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// A (possibly empty) slide sequence after which the pair meets in the
    /// standard pattern. Always verified by replay before being issued.
    WitnessMoves,
    /// The pairing matrix has unit elementary divisors but no slide witness
    /// was found within budget. The pair may still standardize at a greater
    /// search depth.
    HomologyOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardnessCertificate {
    pub kind: CertificateKind,
    /// Slides on a two-family workbench (families 0 and 1) bringing the pair
    /// to standard position; empty when it is already there.
    pub moves: Vec<Move>,
    /// Handles surviving the pairing: essential curves minus pairing rank,
    /// plus the arc count of the pages.
    pub computed_k: u32,
}

/// How the curves of two families in standard position pair off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMatch {
    /// Index pairs (first family, second family) crossing exactly once.
    pub dual: Vec<(usize, usize)>,
    /// Index pairs matched by isotopy.
    pub parallel: Vec<(usize, usize)>,
}

/// Detect standard position. After putting both families in minimal
/// position, every curve must either cross exactly one curve of the other
/// family exactly once — with both partners essential — or be parallel to a
/// distinct curve of its own kind. Returns the matching, or `None` when the
/// families are not standard as drawn.
pub fn standard_pattern(
    surface: &Surface,
    fam_a: &CurveSystem,
    fam_b: &CurveSystem,
) -> Result<Option<PairMatch>> {
    if fam_a.len() != fam_b.len() {
        return Ok(None);
    }
    let n = fam_a.len();
    if n == 0 {
        return Ok(Some(PairMatch { dual: Vec::new(), parallel: Vec::new() }));
    }
    let systems: Vec<Vec<Path>> = [fam_a, fam_b]
        .iter()
        .map(|f| f.paths().into_iter().cloned().collect())
        .collect();
    let (flat, sys) = minimal_position(surface, &systems, &[true, true])?;
    let a: Vec<&Path> = sys[0].iter().collect();
    let b: Vec<&Path> = sys[1].iter().collect();
    let geo = geometric_matrix(&flat.map, &a, &b);

    let mut a_used = vec![false; n];
    let mut b_used = vec![false; n];
    let mut dual = Vec::new();
    for i in 0..n {
        for j in 0..n {
            match geo[i][j] {
                0 => {}
                1 => {
                    // A second crossing in the same row or column, or a
                    // crossing involving a separating curve, is not standard.
                    if a_used[i] || b_used[j] {
                        return Ok(None);
                    }
                    if fam_a.curves[i].tag != CurveTag::Essential
                        || fam_b.curves[j].tag != CurveTag::Essential
                    {
                        return Ok(None);
                    }
                    a_used[i] = true;
                    b_used[j] = true;
                    dual.push((i, j));
                }
                _ => return Ok(None),
            }
        }
    }

    // Leftovers must pair off by isotopy. Parallel partners of one class are
    // interchangeable, so first-fit cannot paint itself into a corner.
    let mut parallel = Vec::new();
    for i in 0..n {
        if a_used[i] {
            continue;
        }
        let mut found = None;
        for j in 0..n {
            if b_used[j] || fam_a.curves[i].tag != fam_b.curves[j].tag {
                continue;
            }
            if isotopic_curves(&flat, a[i], b[j])? {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => {
                b_used[j] = true;
                parallel.push((i, j));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(PairMatch { dual, parallel }))
}

/// Certify that two curve families form a standard pair for `params`:
/// right curve counts and kinds, pages of the prescribed shape after
/// cutting, unit elementary divisors in the pairing matrix, and — witnessed
/// by slides — the standard intersection pattern.
///
/// An `Err` means the pair can never be standard for these parameters
/// (`HomologyObstruction` when the pairing matrix proves it). An `Ok`
/// certificate is `WitnessMoves` when standard position was exhibited and
/// `HomologyOnly` when only the necessary homology conditions were checked.
pub fn certify_pair(
    surface: &Surface,
    fam_a: &CurveSystem,
    fam_b: &CurveSystem,
    params: &TrisectionParams,
    witness: Option<&PairWitness>,
    opts: &CertifyOptions,
) -> Result<StandardnessCertificate> {
    params.validate()?;
    let expected = params.family_size();
    for (name, fam) in [("first", fam_a), ("second", fam_b)] {
        if fam.len() != expected {
            return Err(Error::InvalidDiagram(format!(
                "{name} family has {} curves, expected {expected}",
                fam.len()
            )));
        }
        let essential =
            fam.curves.iter().filter(|c| c.tag == CurveTag::Essential).count();
        if essential != params.essential_curves() as usize {
            return Err(Error::InvalidDiagram(format!(
                "{name} family has {essential} essential curves, expected {}",
                params.essential_curves()
            )));
        }
        check_embedded(&surface.map, &fam.paths())?;
        page_check(surface, fam, params, name)?;
    }
    let meet = meetings(&surface.map, &fam_a.paths(), &fam_b.paths());
    if !meet.tangencies.is_empty() {
        return Err(Error::InvalidDiagram(
            "families meet tangentially; perturb them apart before certifying".into(),
        ));
    }

    let pairing: Vec<Vec<i128>> =
        algebraic_matrix(&surface.map, &fam_a.paths(), &fam_b.paths())
            .into_iter()
            .map(|row| row.into_iter().map(i128::from).collect())
            .collect();
    let divisors = smith_diagonal(&pairing);
    if let Some(bad) = divisors.iter().find(|d| **d >= 2) {
        return Err(Error::HomologyObstruction(format!(
            "pairing matrix has elementary divisor {bad}; no slide sequence can standardize the pair"
        )));
    }
    let rank = divisors.iter().filter(|d| **d != 0).count() as u32;
    let gp = params.essential_curves();
    if rank > gp {
        return Err(Error::InvalidDiagram(format!(
            "pairing rank {rank} exceeds the {gp} essential curves per family"
        )));
    }
    let computed_k = gp - rank + params.rank_lower_bound();

    if let Some(pm) = standard_pattern(surface, fam_a, fam_b)? {
        // In standard position the dual pairs carry the whole rank, so the
        // essential parallels must account for exactly the surviving handles.
        let essential_parallel = pm
            .parallel
            .iter()
            .filter(|(i, _)| fam_a.curves[*i].tag == CurveTag::Essential)
            .count() as u32;
        if essential_parallel + params.rank_lower_bound() != computed_k {
            return Err(Error::InvalidDiagram(format!(
                "pattern shows {essential_parallel} surviving handles but the pairing says {}",
                computed_k - params.rank_lower_bound()
            )));
        }
        return Ok(StandardnessCertificate {
            kind: CertificateKind::WitnessMoves,
            moves: Vec::new(),
            computed_k,
        });
    }

    if let Some(w) = witness {
        if let Some(cert) = replay_witness(surface, fam_a, fam_b, w, computed_k)? {
            return Ok(cert);
        }
    }

    if opts.depth > 0 && opts.beam > 0 {
        let bench = Workbench::new(
            surface.clone(),
            vec![fam_a.clone(), fam_b.clone()],
            Vec::new(),
        );
        if let Some(moves) = search_standard(&bench, opts)? {
            return Ok(StandardnessCertificate {
                kind: CertificateKind::WitnessMoves,
                moves,
                computed_k,
            });
        }
    }

    Ok(StandardnessCertificate {
        kind: CertificateKind::HomologyOnly,
        moves: Vec::new(),
        computed_k,
    })
}

/// Cut along the family and compare what is left against the prescribed
/// pages (one sphere for closed parameters).
pub(crate) fn page_check(
    surface: &Surface,
    fam: &CurveSystem,
    params: &TrisectionParams,
    name: &str,
) -> Result<()> {
    let cut = cut_and_cap(surface, &fam.paths(), &[])?;
    let mut got: Vec<(u32, usize)> = cut
        .surface
        .classify()?
        .iter()
        .map(|c| (c.genus, c.boundary_faces))
        .collect();
    got.sort_unstable();
    let mut want: Vec<(u32, usize)> = if params.is_closed() {
        vec![(0, 0)]
    } else {
        params.pages.iter().map(|p| (p.p, p.b as usize)).collect()
    };
    want.sort_unstable();
    if got != want {
        return Err(Error::InvalidDiagram(format!(
            "cutting along the {name} family leaves pages {got:?}, expected {want:?}"
        )));
    }
    Ok(())
}

fn replay_witness(
    surface: &Surface,
    fam_a: &CurveSystem,
    fam_b: &CurveSystem,
    w: &PairWitness,
    computed_k: u32,
) -> Result<Option<StandardnessCertificate>> {
    let mut bench = Workbench::new(
        surface.clone(),
        vec![fam_a.clone(), fam_b.clone()],
        Vec::new(),
    );
    if replay(&mut bench, &w.moves).is_err() {
        return Ok(None);
    }
    match standard_pattern(&bench.surface, &bench.families[0], &bench.families[1])? {
        Some(_) => Ok(Some(StandardnessCertificate {
            kind: CertificateKind::WitnessMoves,
            moves: w.moves.clone(),
            computed_k,
        })),
        None => Ok(None),
    }
}

/// Beam search over curve slides for a position where `standard_pattern`
/// matches. Deterministic: candidates are generated in index order, layers
/// are sorted stably by crossing count, and duplicate positions are pruned.
fn search_standard(bench: &Workbench, opts: &CertifyOptions) -> Result<Option<Vec<Move>>> {
    struct Node {
        bench: Workbench,
        moves: Vec<Move>,
        score: usize,
    }
    // Dedup key that ignores ancestry ids: slides allocate fresh ids, so two
    // structurally equal candidates reached along different routes would never
    // compare equal as whole benches.
    fn key(bench: &Workbench) -> (Vec<u32>, Vec<u32>, Vec<CurveSystem>) {
        (bench.surface.map.raw_next(), bench.surface.map.raw_twin(), bench.families.clone())
    }
    let mut layer = vec![Node {
        score: bench.cross_family_crossings(),
        bench: bench.clone(),
        moves: Vec::new(),
    }];
    for _ in 0..opts.depth {
        let mut next: Vec<Node> = Vec::new();
        for node in &layer {
            for family in 0..node.bench.families.len() {
                let n = node.bench.families[family].len();
                for moved in 0..n {
                    for over in 0..n {
                        if moved == over {
                            continue;
                        }
                        for band in shortest_bands(&node.bench, family, moved, over, 4) {
                            let mut candidate = node.bench.clone();
                            if candidate.slide_curve(family, moved, over, &band).is_err() {
                                continue;
                            }
                            let mut moves = node.moves.clone();
                            moves.push(Move::CurveSlide { family, moved, over, band });
                            if standard_pattern(
                                &candidate.surface,
                                &candidate.families[0],
                                &candidate.families[1],
                            )?
                            .is_some()
                            {
                                return Ok(Some(moves));
                            }
                            next.push(Node {
                                score: candidate.cross_family_crossings(),
                                bench: candidate,
                                moves,
                            });
                        }
                    }
                }
            }
        }
        next.sort_by_key(|n| n.score);
        let mut pruned: Vec<Node> = Vec::new();
        let mut kept_keys: Vec<(Vec<u32>, Vec<u32>, Vec<CurveSystem>)> = Vec::new();
        for node in next {
            if pruned.len() == opts.beam {
                break;
            }
            let k = key(&node.bench);
            if kept_keys.contains(&k) {
                continue;
            }
            kept_keys.push(k);
            pruned.push(node);
        }
        if pruned.is_empty() {
            return Ok(None);
        }
        layer = pruned;
    }
    Ok(None)
}

/// Up to `limit` shortest candidate slide bands from the `moved` curve to the
/// `over` curve of one family: edge paths through the complement of the
/// family, starting on the moved curve, ending on the target, with interior
/// away from all family curves and every vertex off the boundary. Ordered by
/// length then dart sequence, so callers trying them in order are
/// deterministic.
pub fn shortest_bands(
    bench: &Workbench,
    family: usize,
    moved: usize,
    over: usize,
    limit: usize,
) -> Vec<Vec<Dart>> {
    let Some(fam) = bench.families.get(family) else {
        return Vec::new();
    };
    if moved == over || moved >= fam.len() || over >= fam.len() || limit == 0 {
        return Vec::new();
    }
    let map = &bench.surface.map;
    let orbits = map.orbits();
    let vcount = orbits.vertex_reps.len();
    let vertex_of = |d: Dart| orbits.vertex_id[d.idx()];

    let mut family_vertex = vec![false; vcount];
    let mut family_edge = vec![false; orbits.edge_reps.len()];
    for path in fam.paths() {
        for &d in &path.darts {
            family_vertex[vertex_of(d)] = true;
            family_edge[orbits.edge_id[d.idx()]] = true;
        }
    }
    // Bands hugging the boundary leave no room for the detour strand.
    let mut blocked = vec![false; vcount];
    for (idx, at) in bench.surface.boundary_vertex_darts().iter().enumerate() {
        if *at {
            blocked[orbits.vertex_id[idx]] = true;
        }
    }
    let mut target = vec![false; vcount];
    for &d in &fam.paths()[over].darts {
        if !blocked[vertex_of(d)] {
            target[vertex_of(d)] = true;
        }
    }

    // Multi-source BFS from the moved curve. Family vertices are opaque
    // except as terminals on the target curve, family edges are never used.
    let mut dist = vec![usize::MAX; vcount];
    let mut parent: Vec<Option<Dart>> = vec![None; vcount];
    let mut queue = VecDeque::new();
    for &d in &fam.paths()[moved].darts {
        let v = vertex_of(d);
        if !blocked[v] && dist[v] != 0 {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let mut out = map.vertex_walk(orbits.vertex_reps[v]);
        out.sort_unstable();
        for d in out {
            if family_edge[orbits.edge_id[d.idx()]] {
                continue;
            }
            let u = vertex_of(map.twin(d));
            if blocked[u] || target[u] || family_vertex[u] || dist[u] != usize::MAX {
                continue;
            }
            dist[u] = dist[v] + 1;
            parent[u] = Some(d);
            queue.push_back(u);
        }
    }

    // Every dart landing on the target from a reached vertex yields one
    // candidate; distinct final darts give distinct attachment sides.
    let mut found: Vec<Vec<Dart>> = Vec::new();
    for idx in 0..map.dart_count() {
        let d = Dart(idx as u32);
        if family_edge[orbits.edge_id[idx]] {
            continue;
        }
        let tail = vertex_of(d);
        if !target[vertex_of(map.twin(d))] || dist[tail] == usize::MAX || blocked[tail] {
            continue;
        }
        if family_vertex[tail] && dist[tail] != 0 {
            continue;
        }
        let mut band = vec![d];
        let mut v = tail;
        while let Some(p) = parent[v] {
            band.push(p);
            v = vertex_of(p);
        }
        band.reverse();
        found.push(band);
    }
    found.sort_by(|x, y| (x.len(), x.as_slice()).cmp(&(y.len(), y.as_slice())));
    found.truncate(limit);
    found
}

/// Diagonal of the Smith normal form: nonnegative entries, each dividing the
/// next, zeros trailing, `min(rows, cols)` of them.
pub fn smith_diagonal(rows: &[Vec<i128>]) -> Vec<i128> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    let n = r.min(c);
    if n == 0 {
        return Vec::new();
    }
    let mut m = rows.to_vec();
    debug_assert!(m.iter().all(|row| row.len() == c), "ragged matrix");
    for t in 0..n {
        reduce_block(&mut m, t);
    }
    let mut diag: Vec<i128> = (0..n).map(|i| m[i][i].abs()).collect();
    // diag(a, b) and diag(gcd, lcm) are equivalent: sweep until the
    // divisibility chain holds and zeros sit at the end.
    loop {
        let mut settled = true;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (diag[i], diag[j]);
                if b != 0 && (a == 0 || b % a != 0) {
                    let g = gcd(a, b);
                    diag[i] = g;
                    diag[j] = a / g * b;
                    settled = false;
                }
            }
        }
        if settled {
            return diag;
        }
    }
}

/// Clear row and column `t` with the pivot at `(t, t)`. Remainders become
/// the next pivot, so the pivot's magnitude strictly drops each retry.
fn reduce_block(m: &mut [Vec<i128>], t: usize) {
    let r = m.len();
    let c = m[0].len();
    'retry: loop {
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if m[i][j] != 0
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { return };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let p = m[t][t];
        for i in t + 1..r {
            let q = m[i][t] / p;
            if q != 0 {
                for j in t..c {
                    m[i][j] -= q * m[t][j];
                }
            }
            if m[i][t] != 0 {
                continue 'retry;
            }
        }
        for j in t + 1..c {
            let q = m[t][j] / p;
            if q != 0 {
                for i in t..r {
                    m[i][j] -= q * m[i][t];
                }
            }
            if m[t][j] != 0 {
                continue 'retry;
            }
        }
        return;
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
