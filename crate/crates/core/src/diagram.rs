//! Relative trisection diagrams: a compact surface carrying three curve
//! families, the parameters they claim to realize, and the move log that
//! produced them.
//!
//! Validation is layered. Structural checks (counts, embeddedness, page
//! shapes) are cheap and unconditional; each of the three family pairs is
//! then certified for standard position, reusing recorded slide witnesses
//! where they still replay. A diagram is `Valid` when every pair carries a
//! slide witness, `ValidHomologically` when some pair passed only the
//! homology-level tests, and `Invalid` when any check fails outright.

use crate::curves::{check_embedded, is_separating, CurveSystem, CurveTag};
use crate::error::Result;
use crate::map::Dart;
use crate::params::{PageShape, Ranks, TrisectionParams};
use crate::standards::{
    certify_pair, page_check, CertificateKind, CertifyOptions, StandardnessCertificate,
};
use crate::surface::{polygon_surface, standard_page, SideSpec, Surface};
use crate::transforms::{Move, Workbench};

pub const FAMILY_NAMES: [&str; 3] = ["alpha", "beta", "gamma"];

/// Recorded slides bringing one pair of families to standard position.
///
/// Witnesses are hints, not trusted facts: certification replays them on a
/// scratch copy and re-checks the pattern, so a stale witness costs at most
/// a search, and a corrupted one can never forge a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWitness {
    /// Dart count of the surface the recorded ids were written against. Ids
    /// at or past this mark refer to darts the moves themselves create
    /// during replay.
    pub base_darts: usize,
    /// Slides on the two-family workbench of the pair.
    pub moves: Vec<Move>,
}

impl PairWitness {
    /// Realign after the surface grew by appended darts: replay-time ids
    /// shift past the new end, recorded surface ids stay. Best effort —
    /// replay verification has the final word.
    fn shift_for_growth(&mut self, new_darts: usize) {
        if new_darts <= self.base_darts {
            return;
        }
        let delta = new_darts - self.base_darts;
        for mv in &mut self.moves {
            if let Move::CurveSlide { band, .. } | Move::ArcSlide { band, .. } = mv {
                for d in band {
                    if d.idx() >= self.base_darts {
                        *d = Dart((d.idx() + delta) as u32);
                    }
                }
            }
        }
        self.base_darts = new_darts;
    }
}

/// Construction history: every move applied to the diagram, and per family
/// pair an optional slide witness for standard position. `witnesses[j]`
/// speaks for the pair (family j, family j+1).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    pub log: Vec<Move>,
    pub witnesses: [Option<PairWitness>; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramStatus {
    /// Every check passed and all three pairs carry slide witnesses.
    Valid,
    /// Every check passed but at least one pair was certified only at
    /// homology level.
    ValidHomologically,
    Invalid,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub status: DiagramStatus,
    pub checks: Vec<CheckResult>,
    /// Certificate for pair (j, j+1), when certification got that far.
    pub pair_certificates: [Option<StandardnessCertificate>; 3],
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A relative trisection diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeTrisectionDiagram {
    pub surface: Surface,
    pub families: [CurveSystem; 3],
    pub params: TrisectionParams,
    pub provenance: Provenance,
}

impl RelativeTrisectionDiagram {
    pub fn new(
        surface: Surface,
        families: [CurveSystem; 3],
        params: TrisectionParams,
    ) -> RelativeTrisectionDiagram {
        RelativeTrisectionDiagram { surface, families, params, provenance: Provenance::default() }
    }

    /// The trivial diagram over one page: the page itself, no curves.
    pub fn trivial(p: u32, b: u32) -> Result<RelativeTrisectionDiagram> {
        let page = standard_page(p, b)?;
        let params = TrisectionParams::trivial(vec![PageShape { p, b }])?;
        Ok(RelativeTrisectionDiagram::new(page.surface, empty_families(), params))
    }

    /// The genus-zero closed diagram: a sphere with no curves.
    pub fn sphere() -> Result<RelativeTrisectionDiagram> {
        let (surface, _) =
            polygon_surface(&[SideSpec::glue("e"), SideSpec::glue_inv("e")])?;
        let params = TrisectionParams::closed(0, 0)?;
        Ok(RelativeTrisectionDiagram::new(surface, empty_families(), params))
    }

    pub fn family(&self, j: usize) -> &CurveSystem {
        &self.families[j]
    }

    pub fn alpha(&self) -> &CurveSystem {
        &self.families[0]
    }

    pub fn beta(&self) -> &CurveSystem {
        &self.families[1]
    }

    pub fn gamma(&self) -> &CurveSystem {
        &self.families[2]
    }

    /// All three families on a workbench, ready for moves.
    pub fn bench(&self) -> Workbench {
        Workbench::new(self.surface.clone(), self.families.to_vec(), Vec::new())
    }

    /// The two families of pair `j` — (j, j+1) — on a workbench.
    pub fn pair_bench(&self, j: usize) -> Workbench {
        Workbench::new(
            self.surface.clone(),
            vec![self.families[j % 3].clone(), self.families[(j + 1) % 3].clone()],
            Vec::new(),
        )
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&CertifyOptions::default())
    }

    pub fn validate_with(&self, opts: &CertifyOptions) -> ValidationReport {
        let mut checks = Vec::new();
        let mut certs: [Option<StandardnessCertificate>; 3] = [None, None, None];

        push(
            &mut checks,
            "parameters",
            self.params
                .validate()
                .map(|()| format!("({})", self.params))
                .map_err(|e| e.to_string()),
        );
        push(&mut checks, "surface", self.surface_check());
        let at_boundary = self.surface.boundary_vertex_darts();
        for (j, name) in FAMILY_NAMES.iter().enumerate() {
            push(
                &mut checks,
                &format!("family {name}"),
                self.family_check(j, &at_boundary),
            );
        }

        let ks = self.params.ranks.triple();
        for j in 0..3 {
            let name =
                format!("pair {}-{}", FAMILY_NAMES[j], FAMILY_NAMES[(j + 1) % 3]);
            match certify_pair(
                &self.surface,
                &self.families[j],
                &self.families[(j + 1) % 3],
                &self.params,
                self.provenance.witnesses[j].as_ref(),
                opts,
            ) {
                Ok(cert) => {
                    let outcome = match cert.kind {
                        CertificateKind::WitnessMoves => "slide witness",
                        CertificateKind::HomologyOnly => "homology only",
                    };
                    let result = if cert.computed_k == ks[j] {
                        Ok(format!("k = {}, {outcome}", cert.computed_k))
                    } else {
                        Err(format!(
                            "pair computes k = {}, parameters declare {}",
                            cert.computed_k, ks[j]
                        ))
                    };
                    push(&mut checks, &name, result);
                    certs[j] = Some(cert);
                }
                Err(e) => push(&mut checks, &name, Err(e.to_string())),
            }
        }

        let status = if checks.iter().any(|c| !c.passed) {
            DiagramStatus::Invalid
        } else if certs.iter().all(|c| {
            matches!(
                c,
                Some(StandardnessCertificate { kind: CertificateKind::WitnessMoves, .. })
            )
        }) {
            DiagramStatus::Valid
        } else {
            DiagramStatus::ValidHomologically
        };
        ValidationReport { status, checks, pair_certificates: certs }
    }

    fn surface_check(&self) -> std::result::Result<String, String> {
        let infos = self.surface.classify().map_err(|e| e.to_string())?;
        if infos.len() != 1 {
            return Err(format!("surface has {} components", infos.len()));
        }
        let genus = infos[0].genus;
        if genus != self.params.genus {
            return Err(format!(
                "surface genus {genus}, parameters declare {}",
                self.params.genus
            ));
        }
        let want: usize = self.params.pages.iter().map(|p| p.b as usize).sum();
        let got = self.surface.boundary_count();
        if got != want {
            return Err(format!("{got} boundary circles, pages account for {want}"));
        }
        Ok(format!("genus {genus}, {got} boundary circles"))
    }

    fn family_check(
        &self,
        j: usize,
        at_boundary: &[bool],
    ) -> std::result::Result<String, String> {
        let fam = &self.families[j];
        if fam.len() != self.params.family_size() {
            return Err(format!(
                "{} curves, expected {}",
                fam.len(),
                self.params.family_size()
            ));
        }
        let essential =
            fam.curves.iter().filter(|c| c.tag == CurveTag::Essential).count();
        if essential != self.params.essential_curves() as usize {
            return Err(format!(
                "{essential} essential curves, expected {}",
                self.params.essential_curves()
            ));
        }
        check_embedded(&self.surface.map, &fam.paths()).map_err(|e| e.to_string())?;
        for (i, curve) in fam.curves.iter().enumerate() {
            if curve.path.darts.iter().any(|d| at_boundary[d.idx()]) {
                return Err(format!("curve {i} touches the boundary"));
            }
            let separating = is_separating(&self.surface, &curve.path);
            if separating != (curve.tag == CurveTag::Separating) {
                return Err(format!(
                    "curve {i} is tagged {:?} but is{} separating",
                    curve.tag,
                    if separating { "" } else { " not" }
                ));
            }
        }
        page_check(&self.surface, fam, &self.params, FAMILY_NAMES[j])
            .map_err(|e| e.to_string())?;
        Ok(format!("{} curves", fam.len()))
    }

    /// Slide one curve of a family over another. The two pairs that involve
    /// the family lose their witnesses; the third keeps its own, to be
    /// re-verified by replay on the next validation.
    pub fn slide(
        &mut self,
        family: usize,
        moved: usize,
        over: usize,
        band: &[Dart],
    ) -> Result<i8> {
        let mut bench = self.bench();
        let sign = bench.slide_curve(family, moved, over, band)?;
        self.adopt(bench);
        self.provenance.log.push(Move::CurveSlide {
            family,
            moved,
            over,
            band: band.to_vec(),
        });
        for j in 0..3 {
            if j == family || (j + 1) % 3 == family {
                self.provenance.witnesses[j] = None;
            }
        }
        Ok(sign)
    }

    /// Stabilize in the given sector: one new handle, one new curve per
    /// family, the sector's rank up by one. Stabilization only appends
    /// darts, so retained witnesses are realigned rather than dropped.
    pub fn stabilize(&mut self, sector: usize) -> Result<()> {
        let mut bench = self.bench();
        bench.stabilize(sector)?;
        let new_darts = bench.surface.map.dart_count();
        self.adopt(bench);
        self.params = self.params.stabilized(sector);
        self.provenance.log.push(Move::StabilizeSector { sector });
        for w in self.provenance.witnesses.iter_mut().flatten() {
            w.shift_for_growth(new_darts);
        }
        Ok(())
    }

    /// Stabilize until the sector ranks agree, lowest sector first. Returns
    /// the sectors stabilized, in order.
    pub fn balance(&mut self) -> Result<Vec<usize>> {
        let mut done = Vec::new();
        loop {
            let ks = self.params.ranks.triple();
            let max = *ks.iter().max().expect("three sectors");
            match (0..3).find(|&j| ks[j] < max) {
                Some(j) => {
                    self.stabilize(j)?;
                    done.push(j);
                }
                None => return Ok(done),
            }
        }
    }

    /// Interior connected sum with another diagram: surfaces joined by a
    /// neck, families merged sector by sector, parameters added. All
    /// witnesses are dropped — every pair's geometry changed.
    pub fn connected_sum(&mut self, other: &RelativeTrisectionDiagram) -> Result<()> {
        let mut bench = self.bench();
        bench.connected_sum(&other.bench())?;
        self.adopt(bench);
        let ks = self.params.ranks.triple();
        let ko = other.params.ranks.triple();
        let mut pages = self.params.pages.clone();
        pages.extend(other.params.pages.iter().cloned());
        self.params = TrisectionParams {
            genus: self.params.genus + other.params.genus,
            ranks: Ranks::Sectors([ks[0] + ko[0], ks[1] + ko[1], ks[2] + ko[2]])
                .normalized(),
            pages,
        };
        self.provenance.log.push(Move::ConnectedSum { other: Box::new(other.clone()) });
        self.provenance.witnesses = [None, None, None];
        Ok(())
    }

    fn adopt(&mut self, bench: Workbench) {
        let Workbench { surface, families, arcs: _ } = bench;
        self.surface = surface;
        let mut it = families.into_iter();
        self.families = [
            it.next().expect("alpha"),
            it.next().expect("beta"),
            it.next().expect("gamma"),
        ];
    }
}

fn empty_families() -> [CurveSystem; 3] {
    [CurveSystem::new(vec![]), CurveSystem::new(vec![]), CurveSystem::new(vec![])]
}

fn push(
    checks: &mut Vec<CheckResult>,
    name: &str,
    result: std::result::Result<String, String>,
) {
    let (passed, detail) = match result {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    checks.push(CheckResult { name: name.to_string(), passed, detail });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{essential, one_two_pair};
    use crate::map::Editor;
    use crate::offset::{offset_cycle, Side};
    use crate::standards::shortest_bands;

    fn assert_valid(report: &ValidationReport) {
        assert_eq!(
            report.status,
            DiagramStatus::Valid,
            "failures: {:?}",
            report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn trivial_page_diagrams_validate() {
        for (p, b) in [(0, 1), (0, 2), (1, 1), (1, 2)] {
            let d = RelativeTrisectionDiagram::trivial(p, b).unwrap();
            let report = d.validate();
            assert_valid(&report);
            let ks = d.params.ranks.triple();
            for j in 0..3 {
                let cert = report.pair_certificates[j].as_ref().unwrap();
                assert_eq!(cert.computed_k, ks[j], "page ({p},{b}), pair {j}");
            }
        }
    }

    #[test]
    fn sphere_diagram_validates() {
        let d = RelativeTrisectionDiagram::sphere().unwrap();
        assert_valid(&d.validate());
        assert_eq!(d.params.manifold_euler(), 2);
    }

    #[test]
    fn euler_counts_match_known_manifolds() {
        // Four-ball, round one-handle, page-times-disk thickening.
        assert_eq!(
            RelativeTrisectionDiagram::trivial(0, 1).unwrap().params.manifold_euler(),
            1
        );
        assert_eq!(
            RelativeTrisectionDiagram::trivial(0, 2).unwrap().params.manifold_euler(),
            0
        );
        assert_eq!(
            RelativeTrisectionDiagram::trivial(1, 1).unwrap().params.manifold_euler(),
            -1
        );
    }

    #[test]
    fn stabilization_keeps_validity_and_euler() {
        let mut d = RelativeTrisectionDiagram::trivial(0, 2).unwrap();
        let euler = d.params.manifold_euler();
        d.stabilize(1).unwrap();
        assert_eq!(d.params.genus, 1);
        assert_eq!(d.params.ranks.triple(), [1, 2, 1]);
        assert_eq!(d.params.manifold_euler(), euler);
        assert_eq!(d.provenance.log, vec![Move::StabilizeSector { sector: 1 }]);
        assert_valid(&d.validate());

        d.stabilize(0).unwrap();
        assert_eq!(d.params.ranks.triple(), [2, 2, 1]);
        assert_eq!(d.params.manifold_euler(), euler);
        assert_valid(&d.validate());
    }

    #[test]
    fn balancing_equalizes_ranks() {
        let mut d = RelativeTrisectionDiagram::trivial(0, 2).unwrap();
        d.stabilize(2).unwrap();
        let euler = d.params.manifold_euler();
        assert_eq!(d.params.balancing_deficit(), 2);
        let done = d.balance().unwrap();
        assert_eq!(done, vec![0, 1]);
        assert_eq!(d.params.ranks, Ranks::Balanced(2));
        assert_eq!(d.params.genus, 3);
        assert_eq!(d.params.manifold_euler(), euler);
        assert_valid(&d.validate());
    }

    #[test]
    fn mismatched_parameters_invalidate() {
        let mut d = RelativeTrisectionDiagram::trivial(0, 2).unwrap();
        d.params = TrisectionParams::trivial(vec![PageShape { p: 1, b: 1 }]).unwrap();
        let report = d.validate();
        assert_eq!(report.status, DiagramStatus::Invalid);
        assert!(report.failures().any(|c| c.name == "surface"));
    }

    #[test]
    fn misassigned_ranks_invalidate() {
        let mut d = RelativeTrisectionDiagram::trivial(0, 2).unwrap();
        d.stabilize(0).unwrap();
        // Within bounds, but credited to the wrong sectors.
        d.params.ranks = Ranks::Sectors([1, 2, 1]);
        let report = d.validate();
        assert_eq!(report.status, DiagramStatus::Invalid);
        let failed: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["pair alpha-beta", "pair beta-gamma"]);
    }

    #[test]
    fn pairing_obstruction_invalidates() {
        let (surface, fam_a, fam_b) = one_two_pair();
        // Third family: a parallel copy of the first, so one pair stays
        // standard while two carry the doubled pairing.
        let x = fam_a.curves[0].path.clone();
        let c = fam_b.curves[0].path.clone();
        let mut ed = Editor::new(&surface.map);
        let hx = ed.track_path(x.clone());
        let hc = ed.track_path(c.clone());
        let copy = offset_cycle(&mut ed, &x, Side::Right).unwrap();
        let (map, paths, _) = ed.freeze();
        let surface = Surface::new(map, vec![]).unwrap();
        let d = RelativeTrisectionDiagram::new(
            surface,
            [
                essential(vec![paths[hx].clone()]),
                essential(vec![paths[hc].clone()]),
                essential(vec![copy]),
            ],
            TrisectionParams::closed(1, 1).unwrap(),
        );
        let report = d.validate();
        assert_eq!(report.status, DiagramStatus::Invalid);
        let obstructed: Vec<_> = report
            .failures()
            .filter(|c| c.detail.contains("divisor"))
            .map(|c| c.name.clone())
            .collect();
        assert_eq!(obstructed, vec!["pair alpha-beta", "pair beta-gamma"]);
        assert!(report.pair_certificates[2].is_some());
    }

    #[test]
    fn connected_sum_composes_parameters() {
        let mut d1 = RelativeTrisectionDiagram::trivial(0, 2).unwrap();
        d1.stabilize(0).unwrap();
        let d2 = RelativeTrisectionDiagram::trivial(1, 1).unwrap();
        let e1 = d1.params.manifold_euler();
        let e2 = d2.params.manifold_euler();

        d1.connected_sum(&d2).unwrap();
        assert_eq!(d1.params.genus, 2);
        assert_eq!(d1.params.ranks.triple(), [4, 3, 3]);
        assert_eq!(
            d1.params.pages,
            vec![PageShape { p: 0, b: 2 }, PageShape { p: 1, b: 1 }]
        );
        assert_eq!(d1.params.manifold_euler(), e1 + e2 - 2);
        assert_eq!(d1.provenance.witnesses, [None, None, None]);
        assert!(matches!(
            d1.provenance.log.last(),
            Some(Move::ConnectedSum { .. })
        ));
        assert_valid(&d1.validate());
    }

    #[test]
    fn slide_keeps_only_the_untouched_witness() {
        let mut d = RelativeTrisectionDiagram::trivial(1, 1).unwrap();
        d.stabilize(0).unwrap();
        d.stabilize(0).unwrap();
        assert_valid(&d.validate());
        let fresh = || {
            Some(PairWitness {
                base_darts: d.surface.map.dart_count(),
                moves: vec![],
            })
        };
        d.provenance.witnesses = [fresh(), fresh(), fresh()];

        let bench = d.bench();
        let mut slid = false;
        for band in shortest_bands(&bench, 0, 0, 1, 8) {
            if d.slide(0, 0, 1, &band).is_ok() {
                slid = true;
                break;
            }
        }
        assert!(slid, "no legal band between the alpha cores");
        assert!(d.provenance.witnesses[0].is_none());
        assert!(d.provenance.witnesses[1].is_some());
        assert!(d.provenance.witnesses[2].is_none());
        assert!(matches!(
            d.provenance.log.last(),
            Some(Move::CurveSlide { family: 0, .. })
        ));

        // The slid pairs are rediscovered by search, so the diagram is
        // still recognized as the same trisection.
        assert_valid(&d.validate());
    }
}
