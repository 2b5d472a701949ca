//! The toroidal `n x n` board modeled on `Z_n^2`.
//!
//! The first coordinate indexes the column and the second the row. Residues
//! are stored 0-based; [`BoardPoint::one_based`] gives the `1..=n`
//! representatives used when printing boards, so the 0-based cell `(0, 0)`
//! is printed as `(1, 1)`, the southwestern square.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A cell of `Z_n^2`: column `a`, row `b`.
///
/// Ordering is row-major (by row, then column), which is the order used for
/// reports and serialized covers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoardPoint {
    pub a: u32,
    pub b: u32,
}

impl BoardPoint {
    pub fn new(n: u32, a: u32, b: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("board order must be at least 1"));
        }
        if a >= n || b >= n {
            return Err(invalid!("cell ({a}, {b}) is not a residue pair modulo {n}"));
        }
        Ok(BoardPoint { a, b })
    }

    /// Builds a cell from the `1..=n` representatives.
    pub fn from_one_based(n: u32, a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(invalid!("1-based cell ({a}, {b}) outside 1..={n}"));
        }
        BoardPoint::new(n, a - 1, b - 1)
    }

    pub fn one_based(self) -> (u32, u32) {
        (self.a + 1, self.b + 1)
    }

    pub fn is_valid(self, n: u32) -> bool {
        self.a < n && self.b < n
    }

    pub fn translate(self, n: u32, s: u32, t: u32) -> Self {
        BoardPoint {
            a: (self.a + s % n) % n,
            b: (self.b + t % n) % n,
        }
    }

    fn row_major_key(self) -> (u32, u32) {
        (self.b, self.a)
    }
}

impl Ord for BoardPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.row_major_key().cmp(&other.row_major_key())
    }
}

impl PartialOrd for BoardPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoardPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.one_based();
        write!(f, "({a},{b})")
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoardVariant {
    /// All of `Z_n^2`.
    Full,
    /// `Z_n^2` without the main diagonal `{(t, t)}`.
    Punctured,
}

impl BoardVariant {
    pub fn contains(self, p: BoardPoint) -> bool {
        match self {
            BoardVariant::Full => true,
            BoardVariant::Punctured => p.a != p.b,
        }
    }

    /// Cells of the variant in row-major order.
    pub fn cells(self, n: u32) -> Vec<BoardPoint> {
        (0..n)
            .flat_map(|b| (0..n).map(move |a| BoardPoint { a, b }))
            .filter(|&p| self.contains(p))
            .collect()
    }

    pub fn cell_count(self, n: u32) -> usize {
        let n = n as usize;
        match self {
            BoardVariant::Full => n * n,
            BoardVariant::Punctured => n * n - n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoardVariant::Full => "full",
            BoardVariant::Punctured => "punctured",
        }
    }
}

impl std::str::FromStr for BoardVariant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(BoardVariant::Full),
            "punctured" => Ok(BoardVariant::Punctured),
            other => Err(invalid!("unknown board variant {other:?}")),
        }
    }
}

/// A set of quower centers claimed to cover a board variant.
///
/// Centers may lie on the main diagonal even for the punctured variant: the
/// punctured board is covered by quowers of the full board.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoardCover {
    n: u32,
    variant: BoardVariant,
    centers: Vec<BoardPoint>,
}

impl BoardCover {
    pub fn new(
        n: u32,
        variant: BoardVariant,
        centers: impl IntoIterator<Item = BoardPoint>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("board order must be at least 1"));
        }
        let set: BTreeSet<BoardPoint> = centers.into_iter().collect();
        if let Some(bad) = set.iter().find(|p| !p.is_valid(n)) {
            return Err(invalid!(
                "center ({}, {}) is not a cell of Z_{n}^2",
                bad.a,
                bad.b
            ));
        }
        Ok(BoardCover {
            n,
            variant,
            centers: set.into_iter().collect(),
        })
    }

    pub fn from_one_based(n: u32, variant: BoardVariant, centers: &[(u32, u32)]) -> Result<Self> {
        let pts = centers
            .iter()
            .map(|&(a, b)| BoardPoint::from_one_based(n, a, b))
            .collect::<Result<Vec<_>>>()?;
        BoardCover::new(n, variant, pts)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn variant(&self) -> BoardVariant {
        self.variant
    }

    /// Centers in row-major order, without duplicates.
    pub fn centers(&self) -> &[BoardPoint] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Same centers, reinterpreted against another variant.
    pub fn with_variant(&self, variant: BoardVariant) -> BoardCover {
        BoardCover {
            variant,
            ..self.clone()
        }
    }

    pub fn one_based_centers(&self) -> Vec<(u32, u32)> {
        self.centers.iter().map(|p| p.one_based()).collect()
    }
}

/// Outcome of a brute-force cover check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport<T> {
    pub covered: bool,
    /// Every missed element, in the checker's enumeration order.
    pub uncovered: Vec<T>,
}

impl<T> CoverReport<T> {
    pub(crate) fn from_uncovered(uncovered: Vec<T>) -> Self {
        CoverReport {
            covered: uncovered.is_empty(),
            uncovered,
        }
    }
}

fn check_point(n: u32, p: BoardPoint) -> Result<()> {
    if n == 0 {
        return Err(invalid!("board order must be at least 1"));
    }
    if !p.is_valid(n) {
        return Err(invalid!(
            "cell ({}, {}) is not a residue pair modulo {n}",
            p.a,
            p.b
        ));
    }
    Ok(())
}

/// `b - a mod n`. Two cells share a diagonal iff they have the same delta.
pub fn delta(n: u32, p: BoardPoint) -> u32 {
    (p.b + n - p.a % n) % n
}

/// Whether `cell` lies on the column, row or diagonal of `center`.
pub fn in_quower(n: u32, center: BoardPoint, cell: BoardPoint) -> bool {
    cell.a == center.a || cell.b == center.b || delta(n, cell) == delta(n, center)
}

/// The quower of `p`: its column, its row and its `(+1, +1)` diagonal.
pub fn quower(n: u32, p: BoardPoint) -> Result<BTreeSet<BoardPoint>> {
    check_point(n, p)?;
    Ok(quower_cells(n, p).collect())
}

pub(crate) fn quower_cells(n: u32, p: BoardPoint) -> impl Iterator<Item = BoardPoint> {
    (0..n).flat_map(move |t| {
        [
            BoardPoint { a: p.a, b: t },
            BoardPoint { a: t, b: p.b },
            p.translate(n, t, t),
        ]
    })
}

/// Brute-force check that the quowers of `cover` cover every cell of its variant.
pub fn is_cover(cover: &BoardCover) -> CoverReport<BoardPoint> {
    let n = cover.n as usize;
    let mut marked = vec![false; n * n];
    for &c in &cover.centers {
        for cell in quower_cells(cover.n, c) {
            marked[cell.b as usize * n + cell.a as usize] = true;
        }
    }
    let uncovered = cover
        .variant
        .cells(cover.n)
        .into_iter()
        .filter(|p| !marked[p.b as usize * n + p.a as usize])
        .collect();
    CoverReport::from_uncovered(uncovered)
}

/// Text picture of a cover with row `n` on top and column 1 on the left.
///
/// `Q` marks a center, `.` a covered cell, `x` an uncovered cell and a space
/// a cell outside the variant.
pub fn render_ascii(cover: &BoardCover) -> String {
    let n = cover.n;
    let report = is_cover(cover);
    let mut out = String::new();
    for b in (0..n).rev() {
        for a in 0..n {
            let p = BoardPoint { a, b };
            let ch = if cover.centers.binary_search(&p).is_ok() {
                'Q'
            } else if !cover.variant.contains(p) {
                ' '
            } else if report.uncovered.binary_search(&p).is_ok() {
                'x'
            } else {
                '.'
            };
            out.push(ch);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(a: u32, b: u32) -> BoardPoint {
        BoardPoint { a, b }
    }

    /// Per-cell membership test, independent of the union-marking in `is_cover`.
    fn is_cover_by_membership(cover: &BoardCover) -> CoverReport<BoardPoint> {
        let uncovered = cover
            .variant()
            .cells(cover.n())
            .into_iter()
            .filter(|&cell| {
                !cover
                    .centers()
                    .iter()
                    .any(|&c| in_quower(cover.n(), c, cell))
            })
            .collect();
        CoverReport::from_uncovered(uncovered)
    }

    #[test]
    fn single_cell_board() {
        let q = quower(1, pt(0, 0)).unwrap();
        assert_eq!(q.into_iter().collect::<Vec<_>>(), vec![pt(0, 0)]);
    }

    #[test]
    fn quower_on_six_board() {
        let q = quower(6, pt(1, 5)).unwrap();
        assert_eq!(q.len(), 16);
        for t in 0..6 {
            assert!(q.contains(&pt(1, t)));
            assert!(q.contains(&pt(t, 5)));
            assert!(q.contains(&pt((1 + t) % 6, (5 + t) % 6)));
        }
    }

    #[test]
    fn quower_fills_two_board() {
        assert_eq!(quower(2, pt(0, 0)).unwrap().len(), 4);
    }

    #[test]
    fn quower_rejects_bad_residue() {
        assert!(quower(4, pt(4, 0)).is_err());
        assert!(quower(0, pt(0, 0)).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(6, pt(1, 5)), 4);
        assert_eq!(delta(4, pt(3, 0)), 1);
        for n in 1..8 {
            for a in 0..n {
                assert_eq!(delta(n, pt(a, a)), 0);
            }
        }
    }

    #[test]
    fn figure_cover_of_six_board() {
        let cover =
            BoardCover::from_one_based(6, BoardVariant::Full, &[(2, 6), (4, 4), (6, 2)]).unwrap();
        assert_eq!(cover.centers(), &[pt(5, 1), pt(3, 3), pt(1, 5)]);
        assert!(is_cover(&cover).covered);
    }

    #[test]
    fn empty_cover_misses_everything() {
        let cover = BoardCover::new(3, BoardVariant::Full, []).unwrap();
        let report = is_cover(&cover);
        assert!(!report.covered);
        assert_eq!(report.uncovered, BoardVariant::Full.cells(3));
        assert_eq!(report.uncovered.len(), 9);
    }

    #[test]
    fn punctured_five_with_two_centers() {
        let cover = BoardCover::new(5, BoardVariant::Punctured, [pt(0, 1), pt(2, 0)]).unwrap();
        let report = is_cover(&cover);
        assert_eq!(report, is_cover_by_membership(&cover));
        assert!(!report.covered);
        assert_eq!(report.uncovered, vec![pt(3, 2), pt(1, 3), pt(4, 3)]);
    }

    #[test]
    fn empty_punctured_board_of_order_one() {
        let cover = BoardCover::new(1, BoardVariant::Punctured, []).unwrap();
        assert!(is_cover(&cover).covered);
    }

    #[test]
    fn duplicate_centers_collapse() {
        let cover = BoardCover::new(4, BoardVariant::Full, [pt(1, 1), pt(1, 1)]).unwrap();
        assert_eq!(cover.len(), 1);
        assert!(BoardCover::new(4, BoardVariant::Full, [pt(1, 4)]).is_err());
    }

    #[test]
    fn ascii_puts_top_row_first() {
        let cover = BoardCover::new(2, BoardVariant::Punctured, [pt(0, 1)]).unwrap();
        assert_eq!(render_ascii(&cover), "Q \n .\n");
    }

    fn board_and_point() -> impl Strategy<Value = (u32, BoardPoint)> {
        (2u32..20).prop_flat_map(|n| (Just(n), (0..n, 0..n).prop_map(|(a, b)| pt(a, b))))
    }

    proptest! {
        #[test]
        fn quower_size_is_three_lines(( n, p) in board_and_point()) {
            prop_assert_eq!(quower(n, p).unwrap().len() as u32, 3 * n - 2);
        }

        #[test]
        fn delta_characterizes_diagonal((n, p) in board_and_point(), x in 0u32..20, y in 0u32..20) {
            let x = pt(x % n, y % n);
            let on_diag = (0..n).any(|t| p.translate(n, t, t) == x);
            prop_assert_eq!(on_diag, delta(n, x) == delta(n, p));
        }

        #[test]
        fn quower_translation_equivariant((n, p) in board_and_point(), s in 0u32..40, t in 0u32..40) {
            let moved = quower(n, p.translate(n, s, t)).unwrap();
            let image: BTreeSet<_> = quower(n, p).unwrap().into_iter().map(|c| c.translate(n, s, t)).collect();
            prop_assert_eq!(moved, image);
        }

        #[test]
        fn punctured_cells_drop_zero_delta(n in 1u32..25) {
            let cells = BoardVariant::Punctured.cells(n);
            let expected: Vec<_> = BoardVariant::Full.cells(n).into_iter().filter(|&p| delta(n, p) != 0).collect();
            prop_assert_eq!(cells.len(), BoardVariant::Punctured.cell_count(n));
            prop_assert_eq!(cells, expected);
        }

        #[test]
        fn union_marking_matches_membership(
            n in 1u32..12,
            punctured in any::<bool>(),
            raw in proptest::collection::vec((0u32..12, 0u32..12), 0..8),
        ) {
            let variant = if punctured { BoardVariant::Punctured } else { BoardVariant::Full };
            let cover = BoardCover::new(n, variant, raw.into_iter().map(|(a, b)| pt(a % n, b % n))).unwrap();
            prop_assert_eq!(is_cover(&cover), is_cover_by_membership(&cover));
        }
    }
}
