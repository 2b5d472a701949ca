//! Minimum set cover: instances for quower boards and wind roses, an exact
//! branch-and-bound solver, a greedy heuristic and a CPLEX-LP exporter.

mod lp;
mod solver;

pub use lp::{read_lp, write_lp, write_lp_string};
pub use solver::{solve_exact, solve_greedy, SearchStats, SolveOptions, SolveResult, Status};

use std::fmt;

use crate::board::{quower_cells, BoardPoint, BoardVariant};
use crate::error::{invalid, Result};
use crate::projective::{Plane, ProjPoint};

/// Name of an element or candidate, stable across runs and exports.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Index(usize),
    Cell(BoardPoint),
    /// Canonical homogeneous coordinates as field element indices.
    Point([u32; 3]),
}

impl Label {
    pub fn point(p: ProjPoint) -> Label {
        Label::Point(p.coords().map(|c| c.index()))
    }

    fn suffix(&self) -> String {
        match self {
            Label::Index(i) => i.to_string(),
            Label::Cell(p) => format!("{}_{}", p.a, p.b),
            Label::Point([x, y, z]) => format!("{x}_{y}_{z}"),
        }
    }

    /// Inverse of the `_`-joined suffix used in variable and row names.
    fn from_suffix(s: &str) -> Option<Label> {
        let parts: Option<Vec<u32>> = s.split('_').map(|p| p.parse().ok()).collect();
        match *parts?.as_slice() {
            [i] => Some(Label::Index(i as usize)),
            [a, b] => Some(Label::Cell(BoardPoint { a, b })),
            [x, y, z] => Some(Label::Point([x, y, z])),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.suffix())
    }
}

/// Where an instance came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Board { n: u32, variant: BoardVariant },
    WindRose { q: u32 },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub label: Label,
    /// Sorted, duplicate-free element indices.
    pub elements: Vec<usize>,
}

/// A group of candidates of which some minimum cover is guaranteed to use
/// at least one (whenever the universe is nonempty). Derived from a group of
/// instance symmetries acting transitively on the group's orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryHint {
    pub candidates: Vec<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe_size: usize,
    element_labels: Vec<Label>,
    candidates: Vec<Candidate>,
    origin: Origin,
    symmetry: Option<SymmetryHint>,
}

impl SetCoverInstance {
    pub fn new(
        element_labels: Vec<Label>,
        candidates: Vec<Candidate>,
        origin: Origin,
    ) -> Result<Self> {
        let universe_size = element_labels.len();
        let mut candidates = candidates;
        for c in &mut candidates {
            c.elements.sort_unstable();
            c.elements.dedup();
            if let Some(&e) = c.elements.iter().find(|&&e| e >= universe_size) {
                return Err(invalid!(
                    "candidate {} names element {e} outside a universe of {universe_size}",
                    c.label
                ));
            }
        }
        Ok(SetCoverInstance {
            universe_size,
            element_labels,
            candidates,
            origin,
            symmetry: None,
        })
    }

    pub fn with_symmetry(mut self, hint: SymmetryHint) -> Result<Self> {
        if hint.candidates.iter().any(|&c| c >= self.candidates.len()) {
            return Err(invalid!("symmetry hint names a candidate out of range"));
        }
        self.symmetry = Some(hint);
        Ok(self)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn element_labels(&self) -> &[Label] {
        &self.element_labels
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn symmetry(&self) -> Option<&SymmetryHint> {
        self.symmetry.as_ref()
    }

    /// Elements no candidate covers.
    pub fn uncoverable(&self) -> Vec<usize> {
        let mut hit = vec![false; self.universe_size];
        for c in &self.candidates {
            for &e in &c.elements {
                hit[e] = true;
            }
        }
        (0..self.universe_size).filter(|&e| !hit[e]).collect()
    }

    pub fn ensure_feasible(&self) -> Result<()> {
        let missing = self.uncoverable();
        if missing.is_empty() {
            Ok(())
        } else {
            let names: Vec<String> = missing
                .iter()
                .take(8)
                .map(|&e| self.element_labels[e].to_string())
                .collect();
            Err(invalid!(
                "{} elements are covered by no candidate (first: {})",
                missing.len(),
                names.join(", ")
            ))
        }
    }

    /// Whether the candidates at `chosen` cover every element.
    pub fn covers(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.universe_size];
        for &c in chosen {
            for &e in &self.candidates[c].elements {
                hit[e] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }
}

/// One candidate per cell `p` of `Z_n^2`, covering `QW(p)` restricted to the
/// variant's cells.
///
/// The instance carries a symmetry hint. On the full board translations act
/// transitively, so some minimum cover contains `(0, 0)`. On the punctured
/// board the diagonal translations `(a, b) -> (a + t, b + t)` still preserve
/// the instance, so some minimum cover has a center in column 0.
pub fn build_board_instance(n: u32, variant: BoardVariant) -> Result<SetCoverInstance> {
    if n == 0 {
        return Err(invalid!("board order must be at least 1"));
    }
    let cells = variant.cells(n);
    let mut index = vec![usize::MAX; (n * n) as usize];
    for (i, p) in cells.iter().enumerate() {
        index[(p.b * n + p.a) as usize] = i;
    }
    let candidates: Vec<Candidate> = BoardVariant::Full
        .cells(n)
        .into_iter()
        .map(|p| {
            let elements = quower_cells(n, p)
                .map(|c| index[(c.b * n + c.a) as usize])
                .filter(|&i| i != usize::MAX)
                .collect();
            Candidate {
                label: Label::Cell(p),
                elements,
            }
        })
        .collect();
    let hint = match variant {
        BoardVariant::Full => SymmetryHint {
            candidates: vec![0],
            reason: "translations act transitively: fix a center at (0,0)".into(),
        },
        BoardVariant::Punctured => SymmetryHint {
            candidates: (0..n as usize).map(|b| b * n as usize).collect(),
            reason: "diagonal translations: fix a center in column 0".into(),
        },
    };
    SetCoverInstance::new(
        cells.into_iter().map(Label::Cell).collect(),
        candidates,
        Origin::Board { n, variant },
    )?
    .with_symmetry(hint)
}

/// One candidate per point `p` of `PG(2, q)`, covering `W(p)`.
pub fn build_windrose_instance(q: u32) -> Result<SetCoverInstance> {
    build_windrose_instance_on(&Plane::new(q)?)
}

pub fn build_windrose_instance_on(plane: &Plane) -> Result<SetCoverInstance> {
    let candidates = plane
        .points()
        .iter()
        .map(|&p| Candidate {
            label: Label::point(p),
            elements: plane
                .wind_rose(p)
                .into_iter()
                .map(|x| plane.index_of(x))
                .collect(),
        })
        .collect();
    SetCoverInstance::new(
        plane.points().iter().map(|&p| Label::point(p)).collect(),
        candidates,
        Origin::WindRose { q: plane.q() },
    )
}
