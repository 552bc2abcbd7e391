//! Numerical trisection parameters: central-surface genus, the three sector
//! ranks, and the page shape attached to each boundary component.
//!
//! Everything here is integer bookkeeping; no surface is consulted. The one
//! nontrivial fact is the admissible range of a sector rank `k`,
//!
//! ```text
//!     l  <=  k  <=  g - p + l,        l = sum_i (2*p_i + b_i - 1),
//! ```
//!
//! whose endpoints are realized by the trivial diagram (`g = p`, `k = l`,
//! every curve family empty) and by fully stabilizing. The upper bound is
//! equivalently `g + sum_i (p_i + b_i - 1)`. Both bounds are exercised by the
//! rejection-boundary tests below.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Topological type of one boundary component's page: a compact connected
/// orientable surface of genus `p` with `b >= 1` boundary circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PageShape {
    pub p: u32,
    pub b: u32,
}

impl PageShape {
    pub fn new(p: u32, b: u32) -> Self {
        PageShape { p, b }
    }

    /// Number of arcs in any cut system for this page, `2p + b - 1`; equals
    /// the number of 1-handles in a decomposition with a single 0-handle,
    /// and `1 - euler()`.
    pub fn arc_count(self) -> u32 {
        2 * self.p + self.b - 1
    }

    pub fn euler(self) -> i64 {
        2 - 2 * i64::from(self.p) - i64::from(self.b)
    }
}

/// Ranks of the three 4-dimensional 1-handlebody sectors.
///
/// Sector indices are 0-based throughout the library: sector `j` is the piece
/// whose rank is checked against the curve pair (family `j`, family `j+1`),
/// with families in the fixed order α, β, γ and indices mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ranks {
    /// All three sectors share one rank.
    Balanced(u32),
    /// Per-sector ranks `[k1, k2, k3]`.
    Sectors([u32; 3]),
}

impl Ranks {
    pub fn triple(self) -> [u32; 3] {
        match self {
            Ranks::Balanced(k) => [k, k, k],
            Ranks::Sectors(ks) => ks,
        }
    }

    /// The common rank, if the three sectors agree.
    pub fn balanced(self) -> Option<u32> {
        let [a, b, c] = self.triple();
        (a == b && b == c).then_some(a)
    }

    pub fn is_balanced(self) -> bool {
        self.balanced().is_some()
    }

    /// Collapse a `Sectors` value with three equal entries to `Balanced`.
    pub fn normalized(self) -> Ranks {
        match self.balanced() {
            Some(k) => Ranks::Balanced(k),
            None => self,
        }
    }

    pub fn min(self) -> u32 {
        self.triple().into_iter().min().unwrap()
    }

    pub fn max(self) -> u32 {
        self.triple().into_iter().max().unwrap()
    }

    pub fn sum(self) -> u32 {
        self.triple().into_iter().sum()
    }

    /// Ranks after one stabilization in `sector` (0-based).
    pub fn bumped(self, sector: usize) -> Ranks {
        assert!(sector < 3, "sector index out of range");
        let mut ks = self.triple();
        ks[sector] += 1;
        Ranks::Sectors(ks).normalized()
    }
}

impl fmt::Display for Ranks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.normalized() {
            Ranks::Balanced(k) => write!(f, "{k}"),
            Ranks::Sectors([a, b, c]) => write!(f, "{a},{b},{c}"),
        }
    }
}

/// The numerical data of a (relative) trisection diagram: genus `g` of the
/// central surface, sector ranks, and one [`PageShape`] per boundary
/// component. An empty page list is a closed diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrisectionParams {
    pub genus: u32,
    pub ranks: Ranks,
    pub pages: Vec<PageShape>,
}

impl TrisectionParams {
    pub fn new(genus: u32, ranks: Ranks, pages: Vec<PageShape>) -> Result<Self> {
        let params = TrisectionParams { genus, ranks, pages };
        params.validate()?;
        Ok(params)
    }

    pub fn balanced(genus: u32, k: u32, pages: Vec<PageShape>) -> Result<Self> {
        Self::new(genus, Ranks::Balanced(k), pages)
    }

    pub fn sectors(genus: u32, ks: [u32; 3], pages: Vec<PageShape>) -> Result<Self> {
        Self::new(genus, Ranks::Sectors(ks), pages)
    }

    pub fn closed(genus: u32, k: u32) -> Result<Self> {
        Self::new(genus, Ranks::Balanced(k), Vec::new())
    }

    /// Parameters of the trivial diagram on the given pages: the central
    /// surface is the boundary-connected chain of the pages themselves
    /// (`g = p`), every rank is pinned to `l`, and all curve families consist
    /// of separating curves only.
    pub fn trivial(pages: Vec<PageShape>) -> Result<Self> {
        let p: u32 = pages.iter().map(|pg| pg.p).sum();
        let l: u32 = pages.iter().map(|pg| pg.arc_count()).sum();
        Self::new(p, Ranks::Balanced(l), pages)
    }

    /// Number of boundary components `m`.
    pub fn boundary_components(&self) -> usize {
        self.pages.len()
    }

    pub fn is_closed(&self) -> bool {
        self.pages.is_empty()
    }

    /// Total page genus `p`.
    pub fn page_genus(&self) -> u32 {
        self.pages.iter().map(|pg| pg.p).sum()
    }

    /// Total number of boundary circles `b` of the central surface.
    pub fn boundary_circles(&self) -> u32 {
        self.pages.iter().map(|pg| pg.b).sum()
    }

    /// Total cut-system size `l = Σ_i (2 p_i + b_i - 1)`.
    pub fn arc_count(&self) -> u32 {
        self.pages.iter().map(|pg| pg.arc_count()).sum()
    }

    /// Number of non-separating curves per family, `g - p`.
    pub fn essential_curves(&self) -> u32 {
        self.genus - self.page_genus()
    }

    /// Number of separating curves per family, `m - 1` (0 when closed).
    pub fn separating_curves(&self) -> usize {
        self.boundary_components().saturating_sub(1)
    }

    /// Total curves per family.
    pub fn family_size(&self) -> usize {
        self.essential_curves() as usize + self.separating_curves()
    }

    /// Smallest admissible sector rank, `l`.
    pub fn rank_lower_bound(&self) -> u32 {
        self.arc_count()
    }

    /// Largest admissible sector rank, `g - p + l`.
    pub fn rank_upper_bound(&self) -> i64 {
        i64::from(self.genus) - i64::from(self.page_genus()) + i64::from(self.arc_count())
    }

    pub fn validate(&self) -> Result<()> {
        for (i, page) in self.pages.iter().enumerate() {
            if page.b == 0 {
                return Err(Error::InvalidParams(format!(
                    "page {i} has no boundary circles (b must be >= 1)"
                )));
            }
        }
        let lower = i64::from(self.rank_lower_bound());
        let upper = self.rank_upper_bound();
        // `lower <= upper` iff `g >= p`, so the range check also rules out a
        // central surface of smaller genus than its own pages.
        let (kmin, kmax) = (self.ranks.min(), self.ranks.max());
        if i64::from(kmin) < lower || i64::from(kmax) > upper {
            return Err(Error::InvalidParams(format!(
                "sector ranks {} outside admissible range {} <= k <= {} for genus {} and pages {:?}",
                self.ranks,
                lower,
                upper,
                self.genus,
                self.pages.iter().map(|pg| (pg.p, pg.b)).collect::<Vec<_>>(),
            )));
        }
        Ok(())
    }

    /// Euler characteristic `2 - 2g - b` of the central surface.
    pub fn surface_euler(&self) -> i64 {
        2 - 2 * i64::from(self.genus) - i64::from(self.boundary_circles())
    }

    /// Euler characteristic of the 4-manifold these parameters describe,
    /// by inclusion–exclusion over the decomposition: three sectors of rank
    /// `k_j` (χ = 1 - k_j), three pairwise compression bodies (χ(Σ) plus one
    /// per attached 2-handle, of which there are `g - p + m - 1`), and the
    /// central surface counted once:
    ///
    /// ```text
    ///     χ(X) = 2 + g + 3p + 2b - 3m - (k1 + k2 + k3)
    /// ```
    ///
    /// Stabilization adds 1 to `g` and to one `k_j`, so this is a move
    /// invariant; generators cross-check it against their handle counts.
    pub fn manifold_euler(&self) -> i64 {
        2 + i64::from(self.genus) + 3 * i64::from(self.page_genus())
            + 2 * i64::from(self.boundary_circles())
            - 3 * self.boundary_components() as i64
            - i64::from(self.ranks.sum())
    }

    /// Parameters after one stabilization in `sector` (0-based): genus and
    /// the chosen sector rank each grow by 1, pages are untouched.
    pub fn stabilized(&self, sector: usize) -> TrisectionParams {
        TrisectionParams {
            genus: self.genus + 1,
            ranks: self.ranks.bumped(sector),
            pages: self.pages.clone(),
        }
    }

    /// Fewest stabilizations that equalize the sector ranks: each adds 1 to
    /// exactly one sector, so the optimum raises every sector to the current
    /// maximum.
    pub fn balancing_deficit(&self) -> u32 {
        let m = self.ranks.max();
        self.ranks.triple().into_iter().map(|k| m - k).sum()
    }

    /// Parameters after minimal balancing.
    pub fn balanced_form(&self) -> TrisectionParams {
        TrisectionParams {
            genus: self.genus + self.balancing_deficit(),
            ranks: Ranks::Balanced(self.ranks.max()),
            pages: self.pages.clone(),
        }
    }
}

/// `(g,k;p1,b1;...;pm,bm)` when balanced, `(g;k1,k2,k3;p1,b1;...)` otherwise;
/// page groups are dropped for closed diagrams.
impl fmt::Display for TrisectionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        match self.ranks.normalized() {
            Ranks::Balanced(k) => write!(f, "{},{}", self.genus, k)?,
            Ranks::Sectors([a, b, c]) => write!(f, "{};{},{},{}", self.genus, a, b, c)?,
        }
        for page in &self.pages {
            write!(f, ";{},{}", page.p, page.b)?;
        }
        write!(f, ")")
    }
}

impl FromStr for TrisectionParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |msg: &str| Error::Parse { line: 0, msg: format!("{msg} in {s:?}") };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| parse_err("expected parenthesized parameter tuple"))?;
        let groups: Vec<Vec<u32>> = inner
            .split(';')
            .map(|group| {
                group
                    .split(',')
                    .map(|n| n.trim().parse::<u32>().map_err(|e| parse_err(&e.to_string())))
                    .collect()
            })
            .collect::<Result<_>>()?;
        let (genus, ranks, pages_from) = match groups[0].as_slice() {
            [g, k] => (*g, Ranks::Balanced(*k), 1),
            [g] => match groups.get(1).map(Vec::as_slice) {
                Some([a, b, c]) => (*g, Ranks::Sectors([*a, *b, *c]), 2),
                _ => return Err(parse_err("expected three sector ranks after genus")),
            },
            _ => return Err(parse_err("expected (g,k;...) or (g;k1,k2,k3;...)")),
        };
        let pages = groups[pages_from..]
            .iter()
            .map(|group| match group.as_slice() {
                [p, b] => Ok(PageShape::new(*p, *b)),
                _ => Err(parse_err("expected page group p,b")),
            })
            .collect::<Result<Vec<_>>>()?;
        TrisectionParams::new(genus, ranks, pages)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pages(shapes: &[(u32, u32)]) -> Vec<PageShape> {
        shapes.iter().map(|&(p, b)| PageShape::new(p, b)).collect()
    }

    #[test]
    fn documented_parameter_sets_are_admissible() {
        let unbalanced = TrisectionParams::sectors(6, [3, 4, 3], pages(&[(1, 2)])).unwrap();
        assert_eq!(unbalanced.to_string(), "(6;3,4,3;1,2)");
        assert_eq!(unbalanced.family_size(), 5);
        assert_eq!(unbalanced.arc_count(), 3);

        let captioned = TrisectionParams::balanced(8, 5, pages(&[(1, 2)])).unwrap();
        assert_eq!(captioned.to_string(), "(8,5;1,2)");

        let balanced = unbalanced.balanced_form();
        assert_eq!(balanced.to_string(), "(8,4;1,2)");
        assert_eq!(balanced.family_size(), 7);
        // Balancing preserves the 4-manifold; the captioned parameter set
        // does not match the stabilization arithmetic and is kept distinct.
        assert_eq!(balanced.manifold_euler(), unbalanced.manifold_euler());
        assert_ne!(captioned.manifold_euler(), unbalanced.manifold_euler());
    }

    #[test]
    fn trivial_diagram_pins_rank_to_arc_count() {
        let trivial = TrisectionParams::trivial(pages(&[(1, 2)])).unwrap();
        assert_eq!(trivial.to_string(), "(1,3;1,2)");
        assert_eq!(trivial.rank_lower_bound(), trivial.ranks.max());
        assert!(TrisectionParams::balanced(1, 2, pages(&[(1, 2)])).is_err());
        assert!(TrisectionParams::balanced(1, 4, pages(&[(1, 2)])).is_err());

        let two_pages = TrisectionParams::trivial(pages(&[(0, 2), (1, 1)])).unwrap();
        assert_eq!(two_pages.genus, 1);
        assert_eq!(two_pages.ranks, Ranks::Balanced(1 + 2));
        assert_eq!(two_pages.family_size(), 1); // one separating curve, no essential
    }

    #[test]
    fn closed_params_use_genus_range() {
        for k in 0..=3 {
            assert_eq!(TrisectionParams::closed(3, k).is_ok(), k <= 3);
        }
        assert!(TrisectionParams::closed(2, 3).is_err());
        let sphere = TrisectionParams::closed(0, 0).unwrap();
        assert_eq!(sphere.manifold_euler(), 2);
        assert_eq!(sphere.family_size(), 0);
        let projective = TrisectionParams::closed(1, 0).unwrap();
        assert_eq!(projective.manifold_euler(), 3);
    }

    #[test]
    fn pages_need_boundary() {
        assert!(TrisectionParams::balanced(2, 2, pages(&[(1, 0)])).is_err());
    }

    #[test]
    fn balancing_examples() {
        // Pages (0,2) have l = 1, so every triple below stays admissible.
        let deficit = |ks: [u32; 3]| {
            TrisectionParams::new(9, Ranks::Sectors(ks), pages(&[(0, 2)]))
                .unwrap()
                .balancing_deficit()
        };
        assert_eq!(deficit([3, 4, 3]), 2);
        assert_eq!(deficit([1, 2, 3]), 3);
        assert_eq!(deficit([4, 4, 4]), 0);
    }

    #[test]
    fn display_parse_round_trip() {
        for text in ["(6;3,4,3;1,2)", "(8,5;1,2)", "(3,1)", "(5;2,3,4)", "(2,3;0,2;0,1)"] {
            let params: TrisectionParams = text.parse().unwrap();
            assert_eq!(params.to_string(), text);
        }
        assert!("(6;3,4;1,2)".parse::<TrisectionParams>().is_err());
        assert!("8,5;1,2".parse::<TrisectionParams>().is_err());
        assert!("(1,0;1,2)".parse::<TrisectionParams>().is_err()); // fails validation
    }

    proptest! {
        /// The admissible range is exactly `l ..= g - p + l`: `l - 1` is
        /// rejected, both endpoints are accepted, and one past the upper
        /// bound is rejected.
        #[test]
        fn rejection_boundary(
            shapes in proptest::collection::vec((0u32..=2, 1u32..=3), 1..=3),
            extra_genus in 0u32..=4,
        ) {
            let pgs = pages(&shapes);
            let p: u32 = pgs.iter().map(|pg| pg.p).sum();
            let l: u32 = pgs.iter().map(|pg| pg.arc_count()).sum();
            let g = p + extra_genus;

            prop_assert!(TrisectionParams::balanced(g, l, pgs.clone()).is_ok());
            prop_assert!(TrisectionParams::balanced(g, g - p + l, pgs.clone()).is_ok());
            prop_assert!(TrisectionParams::balanced(g, g - p + l + 1, pgs.clone()).is_err());
            if l > 0 {
                prop_assert!(TrisectionParams::balanced(g, l - 1, pgs.clone()).is_err());
            }
            // An unbalanced triple is admissible iff its min and max are.
            let mixed = TrisectionParams::sectors(g, [l, g - p + l, l], pgs.clone());
            prop_assert!(mixed.is_ok());
            let low = TrisectionParams::sectors(g + 1, [l + 1, l.saturating_sub(1), l], pgs);
            prop_assert_eq!(low.is_ok(), l == 0);
        }

        /// Stabilizing in any sector preserves the derived 4-manifold Euler
        /// characteristic and admissibility.
        #[test]
        fn stabilization_invariants(
            shapes in proptest::collection::vec((0u32..=2, 1u32..=3), 1..=2),
            extra_genus in 0u32..=3,
            sectors in proptest::collection::vec(0usize..3, 0..=4),
        ) {
            let pgs = pages(&shapes);
            let mut params = TrisectionParams::trivial(pgs).unwrap();
            params.genus += extra_genus;
            let chi = params.manifold_euler();
            for s in sectors {
                let next = params.stabilized(s);
                prop_assert!(next.validate().is_ok());
                prop_assert_eq!(next.manifold_euler(), chi);
                prop_assert_eq!(next.genus, params.genus + 1);
                prop_assert_eq!(next.ranks.triple()[s], params.ranks.triple()[s] + 1);
                params = next;
            }
        }
    }
}
