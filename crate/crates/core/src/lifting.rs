//! Conversion between quower covers of the punctured board over
//! `Z_{q-1}` and wind-rose covers of `PG(2, q)`.
//!
//! Fixing a generator `g` of `F_q*`, the map `ψ(i, j) = (g^i : g^j : 1)` is a
//! bijection from `Z_{q-1}^2` onto the midland points, carrying each quower
//! onto the midland part of a wind rose and the main diagonal onto the
//! midland part of the line through `(0:0:1)` and `(1:1:0)`. A punctured
//! board cover `X` therefore lifts to the wind-rose cover
//! `ψ(X) ∪ {(0:0:1), (1:1:0)}`. In the other direction, a small enough cover
//! is first exchanged into one with a single cardinal and a single coast
//! member, then moved by an automorphism so those two are `(0:0:1)` and
//! `(1:1:0)`, and the remaining midland members are read back through `ψ`.

use std::collections::BTreeSet;

use crate::board::{is_cover, BoardCover, BoardPoint, BoardVariant};
use crate::error::{invalid, Error, Result};
use crate::field::FieldElement;
use crate::projective::{Automorphism, Plane, PointClass, ProjPoint, ShortCover};

/// `ψ` for a fixed plane, using the field's canonical generator.
#[derive(Clone, Debug)]
pub struct PsiMap<'a> {
    plane: &'a Plane,
    generator: FieldElement,
}

impl<'a> PsiMap<'a> {
    pub fn new(plane: &'a Plane) -> Result<Self> {
        if plane.q() < 3 {
            return Err(Error::Unsupported(format!(
                "Z_{}^2 has no punctured board to speak of",
                plane.q() - 1
            )));
        }
        Ok(PsiMap {
            plane,
            generator: plane.field().generator(),
        })
    }

    pub fn plane(&self) -> &Plane {
        self.plane
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Board order `q - 1`.
    pub fn n(&self) -> u32 {
        self.plane.q() - 1
    }

    pub fn forward(&self, x: BoardPoint) -> Result<ProjPoint> {
        if !x.is_valid(self.n()) {
            return Err(invalid!(
                "({}, {}) is not a cell of Z_{}^2",
                x.a,
                x.b,
                self.n()
            ));
        }
        let f = self.plane.field();
        self.plane
            .point([f.exp(x.a as u64), f.exp(x.b as u64), f.one()])
    }

    pub fn backward(&self, p: ProjPoint) -> Result<BoardPoint> {
        if p.class() != PointClass::Midland {
            return Err(invalid!(
                "{} is not a midland point",
                self.plane.format_point(p)
            ));
        }
        let f = self.plane.field();
        let [x, y, _] = p.coords();
        Ok(BoardPoint {
            a: f.dlog(x)?,
            b: f.dlog(y)?,
        })
    }
}

/// `(1:1:0)`, the coast point paired with `(0:0:1)` by the correspondence.
pub fn unit_coast(plane: &Plane) -> ProjPoint {
    let one = plane.field().one();
    plane
        .point([one, one, plane.field().zero()])
        .expect("nonzero")
}

/// `ψ(X) ∪ {(0:0:1), (1:1:0)}` without checking that `X` covers anything.
pub fn lift_points(psi: &PsiMap, cover: &BoardCover) -> Result<Vec<ProjPoint>> {
    if cover.n() != psi.n() {
        return Err(invalid!(
            "a cover of Z_{}^2 cannot lift to PG(2, {})",
            cover.n(),
            psi.plane().q()
        ));
    }
    let mut points = cover
        .centers()
        .iter()
        .map(|&x| psi.forward(x))
        .collect::<Result<Vec<_>>>()?;
    points.push(psi.plane().cardinal(2));
    points.push(unit_coast(psi.plane()));
    Ok(points)
}

/// Short cover of `F_q^3` built from a quower cover of the punctured board
/// over `Z_{q-1}`. The board cover must be valid on the punctured board; its
/// declared variant is not consulted.
pub fn lift(cover: &BoardCover, plane: &Plane) -> Result<ShortCover> {
    if plane.q() < 5 {
        return Err(Error::Unsupported(format!(
            "lifting needs q ≥ 5, got q = {}",
            plane.q()
        )));
    }
    let psi = PsiMap::new(plane)?;
    if cover.n() != psi.n() {
        return Err(invalid!(
            "a cover of Z_{}^2 cannot lift to PG(2, {})",
            cover.n(),
            plane.q()
        ));
    }
    let report = is_cover(&cover.with_variant(BoardVariant::Punctured));
    if !report.covered {
        return Err(invalid!(
            "the board cover misses {} cells of the punctured board",
            report.uncovered.len()
        ));
    }
    let points = lift_points(&psi, cover)?;
    ShortCover::new(
        plane.field_arc().clone(),
        points.into_iter().map(|p| p.vector()).collect(),
    )
}

/// Canonical points spanned by the centers of a short cover, deduplicated.
pub fn cover_points(plane: &Plane, cover: &ShortCover) -> Result<Vec<ProjPoint>> {
    if cover.q() != plane.q() {
        return Err(invalid!(
            "cover over GF({}) used with PG(2, {})",
            cover.q(),
            plane.q()
        ));
    }
    let set = cover
        .centers()
        .iter()
        .map(|&v| plane.span(v))
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(set.into_iter().collect())
}

fn check_size(plane: &Plane, len: usize) -> Result<()> {
    let q = plane.q() as usize;
    if len + 2 > q {
        return Err(Error::Unsupported(format!(
            "{len} wind roses exceed q - 2 = {} for q = {q}",
            q.saturating_sub(2)
        )));
    }
    Ok(())
}

fn dump(plane: &Plane, cover: &BTreeSet<ProjPoint>) -> String {
    let pts: Vec<String> = cover.iter().map(|&p| plane.format_point(p)).collect();
    format!("[{}]", pts.join(", "))
}

fn reverify(plane: &Plane, cover: &BTreeSet<ProjPoint>, step: &str) -> Result<()> {
    let pts: Vec<ProjPoint> = cover.iter().copied().collect();
    let report = plane.wind_rose_report(&pts);
    if report.covered {
        Ok(())
    } else {
        Err(Error::Invariant(format!(
            "{step} left {} points uncovered; cover {}",
            report.uncovered.len(),
            dump(plane, cover)
        )))
    }
}

/// Coast points of the side `<c_i, c_j>`, i.e. zero exactly at coordinate `k`.
fn on_side(p: ProjPoint, k: usize) -> bool {
    p.class() == PointClass::Coast && p.coords()[k].is_zero()
}

fn cardinal_index(p: ProjPoint) -> Option<usize> {
    (p.class() == PointClass::Cardinal).then(|| {
        p.coords()
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero")
    })
}

/// Smallest point of the line `<u, v>` in class `class`.
fn smallest_on_line(
    plane: &Plane,
    u: ProjPoint,
    v: ProjPoint,
    class: PointClass,
) -> Option<ProjPoint> {
    plane
        .line_through(u, v)
        .into_iter()
        .find(|p| p.class() == class)
}

/// Exchanges wind roses until the cover has exactly one cardinal and one
/// coast member, never growing it. Returns every intermediate cover: the
/// deduplicated input first and the normalized cover last, each verified.
pub fn normalize_cover_traced(plane: &Plane, wr: &[ProjPoint]) -> Result<Vec<Vec<ProjPoint>>> {
    let mut cover: BTreeSet<ProjPoint> = wr.iter().copied().collect();
    check_size(plane, cover.len())?;
    let report = plane.wind_rose_report(wr);
    if !report.covered {
        return Err(invalid!(
            "not a wind-rose cover: {} points uncovered",
            report.uncovered.len()
        ));
    }
    let mut trace = vec![cover.iter().copied().collect::<Vec<_>>()];
    let mut record = |cover: &BTreeSet<ProjPoint>, step: &str| -> Result<()> {
        reverify(plane, cover, step)?;
        trace.push(cover.iter().copied().collect());
        Ok(())
    };

    let cardinals: Vec<ProjPoint> = cover
        .iter()
        .copied()
        .filter(|p| p.class() == PointClass::Cardinal)
        .collect();
    match cardinals.len() {
        0 => {
            // One coast point per side is forced; trade the ones on the two
            // sides through c1 for c1 and the meet of their lines to c2, c3.
            let [c1, c2, c3] = plane.cardinals();
            let pick = |k: usize| cover.iter().copied().find(|&p| on_side(p, k));
            let (p2, p3) = match (pick(0), pick(1), pick(2)) {
                (Some(_), Some(p2), Some(p3)) => (p2, p3),
                _ => {
                    return Err(Error::Invariant(format!(
                        "no cardinal and some side has no coast member; cover {}",
                        dump(plane, &cover)
                    )))
                }
            };
            let x = plane.meet((c2, p2), (c3, p3))?;
            let before: BTreeSet<ProjPoint> = plane
                .wind_rose(p2)
                .union(&plane.wind_rose(p3))
                .copied()
                .collect();
            let after: BTreeSet<ProjPoint> = plane
                .wind_rose(c1)
                .union(&plane.wind_rose(x))
                .copied()
                .collect();
            if !before.is_subset(&after) {
                return Err(Error::Invariant(format!(
                    "W({}) ∪ W({}) is not inside W(c1) ∪ W({}); cover {}",
                    plane.format_point(p2),
                    plane.format_point(p3),
                    plane.format_point(x),
                    dump(plane, &cover)
                )));
            }
            cover.remove(&p2);
            cover.remove(&p3);
            cover.insert(c1);
            cover.insert(x);
            record(&cover, "coast exchange")?;
        }
        1 => {}
        k => {
            if k == 3 {
                let third = cardinals[2];
                cover.remove(&third);
                record(&cover, "dropping a redundant cardinal")?;
            }
            let (keep, other) = (cardinals[0], cardinals[1]);
            let i = cardinal_index(keep).expect("cardinal");
            let j = cardinal_index(other).expect("cardinal");
            let k = 3 - i - j;
            let y = smallest_on_line(plane, other, plane.cardinal(k), PointClass::Coast)
                .expect("a side has coast points");
            cover.remove(&other);
            cover.insert(y);
            record(&cover, "cardinal exchange")?;
        }
    }

    // Exactly one cardinal c_i now; keep one coast member on the opposite
    // side and move every other coast member p onto the midland line <p, c_m>.
    let ci = cover
        .iter()
        .copied()
        .find(|p| p.class() == PointClass::Cardinal)
        .expect("one cardinal");
    let i = cardinal_index(ci).expect("cardinal");
    let kept = cover
        .iter()
        .copied()
        .find(|&p| on_side(p, i))
        .ok_or_else(|| {
            Error::Invariant(format!(
                "no coast member opposite {}; cover {}",
                plane.format_point(ci),
                dump(plane, &cover)
            ))
        })?;
    let others: Vec<ProjPoint> = cover
        .iter()
        .copied()
        .filter(|&p| p.class() == PointClass::Coast && p != kept)
        .collect();
    for p in others {
        let m = p
            .coords()
            .iter()
            .position(|c| c.is_zero())
            .expect("coast point");
        let x = smallest_on_line(plane, p, plane.cardinal(m), PointClass::Midland)
            .expect("a coast-to-cardinal line has midland points");
        cover.remove(&p);
        cover.insert(x);
        record(&cover, "coast elimination")?;
    }
    Ok(trace)
}

pub fn normalize_cover(plane: &Plane, wr: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
    Ok(normalize_cover_traced(plane, wr)?
        .pop()
        .expect("trace holds the input"))
}

/// The automorphism taking the cover's cardinal member to `(0:0:1)` and its
/// coast member to `(1:1:0)`.
pub fn normalizing_automorphism(plane: &Plane, wr: &[ProjPoint]) -> Result<Automorphism> {
    let by_class =
        |class| -> Vec<ProjPoint> { wr.iter().copied().filter(|p| p.class() == class).collect() };
    let (cards, coasts) = (by_class(PointClass::Cardinal), by_class(PointClass::Coast));
    if cards.len() != 1 || coasts.len() != 1 {
        return Err(invalid!(
            "expected one cardinal and one coast member, found {} and {}",
            cards.len(),
            coasts.len()
        ));
    }
    let t = cardinal_index(cards[0]).expect("cardinal");
    let y = coasts[0];
    if !y.coords()[t].is_zero() {
        return Err(invalid!(
            "coast member {} does not lie opposite {}",
            plane.format_point(y),
            plane.format_point(cards[0])
        ));
    }
    let rest: Vec<usize> = (0..3).filter(|&i| i != t).collect();
    let perm = [rest[0], rest[1], t];
    let f = plane.field();
    let scale = [
        f.inv(y.coords()[perm[0]])?,
        f.inv(y.coords()[perm[1]])?,
        f.one(),
    ];
    Automorphism::new(perm, scale)
}

/// Reads a normalized wind-rose cover back as a punctured board cover over
/// `Z_{q-1}` of size `|wr| - 2`.
pub fn extract(plane: &Plane, wr: &[ProjPoint]) -> Result<BoardCover> {
    if plane.q() < 7 {
        return Err(Error::Unsupported(format!(
            "extraction needs q ≥ 7 (covers of size at most q - 2), got q = {}",
            plane.q()
        )));
    }
    let set: BTreeSet<ProjPoint> = wr.iter().copied().collect();
    let wr: Vec<ProjPoint> = set.into_iter().collect();
    check_size(plane, wr.len())?;
    let report = plane.wind_rose_report(&wr);
    if !report.covered {
        return Err(invalid!(
            "not a wind-rose cover: {} points uncovered",
            report.uncovered.len()
        ));
    }
    let f = normalizing_automorphism(plane, &wr)?;
    let psi = PsiMap::new(plane)?;
    let centers = wr
        .iter()
        .filter(|p| p.class() == PointClass::Midland)
        .map(|&p| psi.backward(plane.apply_automorphism(&f, p)))
        .collect::<Result<Vec<_>>>()?;
    let cover = BoardCover::new(psi.n(), BoardVariant::Punctured, centers)?;
    let report = is_cover(&cover);
    if !report.covered {
        return Err(Error::Invariant(format!(
            "extracted board cover misses {} cells",
            report.uncovered.len()
        )));
    }
    Ok(cover)
}
