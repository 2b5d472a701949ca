//! The projective plane `PG(2, q)`, wind roses and radius-1 extended balls
//! in `F_q^3`.
//!
//! Points are stored in canonical form: the last nonzero homogeneous
//! coordinate is scaled to 1, so midland points read `(a:b:1)` and equal
//! spans give identical values.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::board::CoverReport;
use crate::error::{invalid, Result};
use crate::field::{field, FieldElement, FieldSpec};

/// A vector of `F_q^3`; the zero vector is allowed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector3(pub [FieldElement; 3]);

impl Vector3 {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|c| !c.is_zero()).count()
    }
}

/// A point of `PG(2, q)` in canonical homogeneous coordinates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint([FieldElement; 3]);

impl ProjPoint {
    pub fn coords(&self) -> [FieldElement; 3] {
        self.0
    }

    /// The canonical spanning vector.
    pub fn vector(&self) -> Vector3 {
        Vector3(self.0)
    }

    pub fn class(&self) -> PointClass {
        match self.vector().weight() {
            1 => PointClass::Cardinal,
            2 => PointClass::Coast,
            _ => PointClass::Midland,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    /// Exactly one nonzero coordinate.
    Cardinal,
    /// Exactly two nonzero coordinates.
    Coast,
    /// All three coordinates nonzero.
    Midland,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Cardinal => "cardinal",
            PointClass::Coast => "coast",
            PointClass::Midland => "midland",
        })
    }
}

/// A family of radius-1 extended balls, given by nonzero center vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortCover {
    field: Arc<FieldSpec>,
    centers: Vec<Vector3>,
}

impl ShortCover {
    pub fn new(field: Arc<FieldSpec>, centers: Vec<Vector3>) -> Result<Self> {
        for v in &centers {
            if v.is_zero() {
                return Err(invalid!("extended ball centers must be nonzero"));
            }
            if !v.0.iter().all(|&c| field.contains(c)) {
                return Err(invalid!(
                    "center {v:?} is not a vector of GF({})^3",
                    field.q()
                ));
            }
        }
        Ok(ShortCover { field, centers })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn centers(&self) -> &[Vector3] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// A projective automorphism fixing the cardinal points as a set:
/// `f(x)_i = scale[i] * x[perm[i]]`, coordinates indexed from 0.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    perm: [usize; 3],
    scale: [FieldElement; 3],
}

impl Automorphism {
    pub fn new(perm: [usize; 3], scale: [FieldElement; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &perm {
            if i > 2 || seen[i] {
                return Err(invalid!(
                    "{perm:?} is not a permutation of the three coordinates"
                ));
            }
            seen[i] = true;
        }
        if scale.iter().any(|s| s.is_zero()) {
            return Err(invalid!("automorphism scalings must be nonzero"));
        }
        Ok(Automorphism { perm, scale })
    }

    pub fn identity(field: &FieldSpec) -> Self {
        Automorphism {
            perm: [0, 1, 2],
            scale: [field.one(); 3],
        }
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn scale(&self) -> [FieldElement; 3] {
        self.scale
    }
}

/// `PG(2, q)` over a fixed field, with its points enumerated in lexicographic
/// order of canonical coordinates.
#[derive(Clone, Debug)]
pub struct Plane {
    field: Arc<FieldSpec>,
    points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
}

impl Plane {
    pub fn new(q: u32) -> Result<Plane> {
        Ok(Plane::over(Arc::new(field(q)?)))
    }

    pub fn over(field: Arc<FieldSpec>) -> Plane {
        let mut points: Vec<ProjPoint> = Vec::new();
        for x in field.elements() {
            for y in field.elements() {
                for z in field.elements() {
                    let v = Vector3([x, y, z]);
                    if !v.is_zero() && is_canonical(&field, &v) {
                        points.push(ProjPoint(v.0));
                    }
                }
            }
        }
        points.sort();
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Plane {
            field,
            points,
            index,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// All `q^2 + q + 1` points, sorted.
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn index_of(&self, p: ProjPoint) -> usize {
        self.index[&p]
    }

    pub fn point_at(&self, i: usize) -> ProjPoint {
        self.points[i]
    }

    /// The cardinal point `c_{i+1}`, i.e. the span of the basis vector `e_{i+1}`.
    pub fn cardinal(&self, i: usize) -> ProjPoint {
        let mut c = [self.field.zero(); 3];
        c[i] = self.field.one();
        ProjPoint(c)
    }

    pub fn cardinals(&self) -> [ProjPoint; 3] {
        [self.cardinal(0), self.cardinal(1), self.cardinal(2)]
    }

    pub fn vector(&self, coords: [FieldElement; 3]) -> Result<Vector3> {
        if !coords.iter().all(|&c| self.field.contains(c)) {
            return Err(invalid!("{coords:?} is not a vector of GF({})^3", self.q()));
        }
        Ok(Vector3(coords))
    }

    /// Vector with prime-subfield coordinates `n mod p`.
    pub fn int_vector(&self, coords: [u64; 3]) -> Vector3 {
        Vector3(coords.map(|c| self.field.from_int(c)))
    }

    /// The span of a nonzero vector.
    pub fn span(&self, v: Vector3) -> Result<ProjPoint> {
        if v.is_zero() {
            return Err(invalid!("the zero vector spans no point"));
        }
        let last = v.0.iter().rposition(|c| !c.is_zero()).expect("nonzero");
        let inv = self.field.inv(v.0[last])?;
        Ok(ProjPoint(v.0.map(|c| self.field.mul(c, inv))))
    }

    pub fn point(&self, coords: [FieldElement; 3]) -> Result<ProjPoint> {
        self.span(self.vector(coords)?)
    }

    pub fn int_point(&self, coords: [u64; 3]) -> Result<ProjPoint> {
        self.span(self.int_vector(coords))
    }

    pub fn classify(&self, p: ProjPoint) -> PointClass {
        p.class()
    }

    pub fn is_on_span(&self, p: ProjPoint, v: Vector3) -> bool {
        !v.is_zero() && self.span(v).map(|s| s == p).unwrap_or(false)
    }

    fn add(&self, u: Vector3, v: Vector3) -> Vector3 {
        let f = &self.field;
        Vector3([0, 1, 2].map(|i| f.add(u.0[i], v.0[i])))
    }

    fn scale(&self, t: FieldElement, v: Vector3) -> Vector3 {
        Vector3(v.0.map(|c| self.field.mul(t, c)))
    }

    fn sub(&self, u: Vector3, v: Vector3) -> Vector3 {
        let f = &self.field;
        Vector3([0, 1, 2].map(|i| f.sub(u.0[i], v.0[i])))
    }

    fn cross(&self, u: Vector3, v: Vector3) -> Vector3 {
        let f = &self.field;
        let [a, b, c] = u.0;
        let [x, y, z] = v.0;
        Vector3([
            f.sub(f.mul(b, z), f.mul(c, y)),
            f.sub(f.mul(c, x), f.mul(a, z)),
            f.sub(f.mul(a, y), f.mul(b, x)),
        ])
    }

    /// The line `<u, v>`; by convention `<u, u> = {u}`.
    pub fn line_through(&self, u: ProjPoint, v: ProjPoint) -> BTreeSet<ProjPoint> {
        let mut line = BTreeSet::new();
        line.insert(u);
        if u == v {
            return line;
        }
        for t in self.field.elements() {
            let w = self.add(v.vector(), self.scale(t, u.vector()));
            line.insert(self.span(w).expect("u and v are independent"));
        }
        line
    }

    /// Intersection of the distinct lines `<u1, v1>` and `<u2, v2>`.
    pub fn meet(
        &self,
        (u1, v1): (ProjPoint, ProjPoint),
        (u2, v2): (ProjPoint, ProjPoint),
    ) -> Result<ProjPoint> {
        if u1 == v1 || u2 == v2 {
            return Err(invalid!("a line needs two distinct points"));
        }
        let l1 = self.cross(u1.vector(), v1.vector());
        let l2 = self.cross(u2.vector(), v2.vector());
        let x = self.cross(l1, l2);
        if x.is_zero() {
            return Err(invalid!("the two lines coincide"));
        }
        self.span(x)
    }

    /// `W(p)`: the union of the lines joining `p` to the three cardinal points.
    pub fn wind_rose(&self, p: ProjPoint) -> BTreeSet<ProjPoint> {
        self.cardinals()
            .into_iter()
            .flat_map(|c| self.line_through(p, c))
            .collect()
    }

    /// Wind rose as a membership mask over [`Plane::points`].
    pub fn wind_rose_mask(&self, p: ProjPoint) -> Vec<bool> {
        let mut mask = vec![false; self.points.len()];
        for x in self.wind_rose(p) {
            mask[self.index_of(x)] = true;
        }
        mask
    }

    /// Points of the plane missed by the wind roses of `centers`.
    pub fn wind_rose_report(&self, centers: &[ProjPoint]) -> CoverReport<ProjPoint> {
        let mut marked = vec![false; self.points.len()];
        for &c in centers {
            for x in self.wind_rose(c) {
                marked[self.index_of(x)] = true;
            }
        }
        let uncovered = self
            .points
            .iter()
            .zip(&marked)
            .filter(|(_, &m)| !m)
            .map(|(&p, _)| p)
            .collect();
        CoverReport::from_uncovered(uncovered)
    }

    /// All `q^3` vectors in lexicographic order.
    pub fn vectors(&self) -> impl Iterator<Item = Vector3> + '_ {
        let f = &self.field;
        f.elements().flat_map(move |x| {
            f.elements()
                .flat_map(move |y| f.elements().map(move |z| Vector3([x, y, z])))
        })
    }

    /// Whether `x` is within Hamming distance 1 of the span of `v`.
    pub fn ball_contains(&self, v: Vector3, x: Vector3) -> Result<bool> {
        if v.is_zero() {
            return Err(invalid!("extended ball center must be nonzero"));
        }
        Ok(self.ball_contains_unchecked(v, x))
    }

    fn ball_contains_unchecked(&self, v: Vector3, x: Vector3) -> bool {
        self.field
            .elements()
            .any(|t| self.sub(x, self.scale(t, v)).weight() <= 1)
    }

    /// Brute-force check over all of `F_q^3`.
    pub fn is_short_cover(&self, cover: &ShortCover) -> Result<CoverReport<Vector3>> {
        if cover.q() != self.q() || cover.field.modulus() != self.field.modulus() {
            return Err(invalid!(
                "cover over GF({}) checked against PG(2, {})",
                cover.q(),
                self.q()
            ));
        }
        let uncovered = self
            .vectors()
            .filter(|&x| {
                !cover
                    .centers
                    .iter()
                    .any(|&v| self.ball_contains_unchecked(v, x))
            })
            .collect();
        Ok(CoverReport::from_uncovered(uncovered))
    }

    /// Compares wind-rose coverage of the plane with ball coverage of
    /// `F_q^3` for the same centers. The two always agree; a `false` return
    /// signals a defect in one of the checkers.
    pub fn equivalence_check(&self, points: &[ProjPoint], reps: &[Vector3]) -> Result<bool> {
        if points.len() != reps.len() {
            return Err(invalid!(
                "{} points but {} representatives",
                points.len(),
                reps.len()
            ));
        }
        for (&p, &v) in points.iter().zip(reps) {
            if !self.is_on_span(p, v) {
                return Err(invalid!("{v:?} does not span {}", self.format_point(p)));
            }
        }
        let roses = self.wind_rose_report(points).covered;
        let balls = self
            .is_short_cover(&ShortCover::new(self.field.clone(), reps.to_vec())?)?
            .covered;
        Ok(roses == balls)
    }

    pub fn apply_automorphism_vector(&self, f: &Automorphism, v: Vector3) -> Vector3 {
        Vector3([0, 1, 2].map(|i| self.field.mul(f.scale[i], v.0[f.perm[i]])))
    }

    pub fn apply_automorphism(&self, f: &Automorphism, p: ProjPoint) -> ProjPoint {
        self.span(self.apply_automorphism_vector(f, p.vector()))
            .expect("automorphisms are invertible")
    }

    /// `a:b:c` with each coordinate printed by [`FieldSpec::format`].
    pub fn format_point(&self, p: ProjPoint) -> String {
        let [a, b, c] = p.0;
        format!(
            "{}:{}:{}",
            self.field.format(a),
            self.field.format(b),
            self.field.format(c)
        )
    }

    /// Parses `a:b:c` into the canonical point.
    pub fn parse_point(&self, s: &str) -> Result<ProjPoint> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid!("expected a:b:c, got {s:?}"));
        }
        let coords = [
            self.field.parse(parts[0])?,
            self.field.parse(parts[1])?,
            self.field.parse(parts[2])?,
        ];
        self.point(coords)
    }

    /// Coefficient-vector triple of a vector, for serialization.
    pub fn vector_coeffs(&self, v: Vector3) -> [Vec<u32>; 3] {
        v.0.map(|c| self.field.coeffs(c))
    }

    pub fn vector_from_coeffs(&self, coeffs: &[Vec<u32>]) -> Result<Vector3> {
        if coeffs.len() != 3 {
            return Err(invalid!("a vector of F_q^3 needs 3 coordinates"));
        }
        Ok(Vector3([
            self.field.element(&coeffs[0])?,
            self.field.element(&coeffs[1])?,
            self.field.element(&coeffs[2])?,
        ]))
    }
}

fn is_canonical(field: &FieldSpec, v: &Vector3) -> bool {
    v.0.iter()
        .rev()
        .find(|c| !c.is_zero())
        .is_some_and(|&c| c == field.one())
}
