//! Vectors, point sets, lines, spheres and hyperplanes in F_q^d.
//!
//! Points of F_q^d are indexed lexicographically: the first coordinate is the
//! most significant digit in base q. A [`PointSet`] is a bitmap over that
//! index space.

use std::fmt;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Upper bound on q^d for any [`Space`].
pub const MAX_POINTS: u128 = 1 << 24;

/// The vector space F_q^d.
#[derive(Clone, PartialEq, Eq)]
pub struct Space {
    field: Field,
    d: usize,
    size: usize,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.field.q(), self.d)
    }
}

impl Space {
    pub fn new(field: &Field, d: usize) -> Result<Space> {
        if d == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        let size = (field.q() as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if size > MAX_POINTS {
            return Err(Error::SpaceTooLarge(size));
        }
        Ok(Space { field: field.clone(), d, size: size as usize })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    /// Number of points, q^d.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn check(&self, x: &[Elem]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.len() });
        }
        if x.iter().any(|&c| !self.field.contains(c)) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn index_of(&self, x: &[Elem]) -> Result<usize> {
        self.check(x)?;
        Ok(self.index_unchecked(x))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, x: &[Elem]) -> usize {
        let q = self.q();
        x.iter().fold(0, |acc, c| acc * q + c.index())
    }

    pub fn point(&self, index: usize) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.d];
        self.write_point(index, &mut out);
        out
    }

    pub fn write_point(&self, mut index: usize, out: &mut [Elem]) {
        let q = self.q();
        for slot in out.iter_mut().rev() {
            *slot = Elem((index % q) as u32);
            index /= q;
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.size).map(move |i| self.point(i))
    }

    pub fn origin(&self) -> Vec<Elem> {
        vec![Elem::ZERO; self.d]
    }

    /// Builds a vector from integer coordinates (reduced into the prime subfield).
    pub fn vector(&self, coords: &[i64]) -> Vec<Elem> {
        coords.iter().map(|&c| self.field.from_int(c)).collect()
    }

    /// x . y = x_1 y_1 + ... + x_d y_d.
    pub fn dot(&self, x: &[Elem], y: &[Elem]) -> Result<Elem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.field.dot(x, y))
    }

    /// ||x|| = x . x (a quadratic form, not a metric).
    pub fn norm(&self, x: &[Elem]) -> Result<Elem> {
        self.dot(x, x)
    }

    pub fn sub(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        x.iter().zip(y).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn add(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn scale(&self, t: Elem, x: &[Elem]) -> Vec<Elem> {
        x.iter().map(|&a| self.field.mul(t, a)).collect()
    }
}

pub fn is_zero_vector(x: &[Elem]) -> bool {
    x.iter().all(|c| c.is_zero())
}

/// A coordinate in serialized form: an integer over a prime field, the
/// polynomial-basis coefficient list otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Int(u64),
    Coeffs(Vec<u64>),
}

pub fn coord_of(field: &Field, x: Elem) -> Coord {
    if field.is_prime_field() {
        Coord::Int(x.index() as u64)
    } else {
        Coord::Coeffs(field.coeffs(x))
    }
}

pub fn elem_of(field: &Field, c: &Coord) -> Result<Elem> {
    let e = match c {
        Coord::Int(v) if field.is_prime_field() => {
            field.element(*v as usize).ok_or_else(|| Error::Malformed(format!("{v} is not in F_{}", field.q())))?
        }
        Coord::Int(v) => field.from_int(*v as i64),
        Coord::Coeffs(cs) => {
            if cs.iter().any(|&v| v >= field.p()) {
                return Err(Error::Malformed(format!("coefficients {cs:?} out of range")));
            }
            field.from_coeffs(cs)?
        }
    };
    Ok(e)
}

/// A subset of F_q^d.
#[derive(Clone)]
pub struct PointSet {
    space: Space,
    bits: BitVec,
    len: usize,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.bits == other.bits
    }
}

impl Eq for PointSet {}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet({:?}, {} points)", self.space, self.len)
    }
}

impl PointSet {
    pub fn empty(space: &Space) -> PointSet {
        PointSet { space: space.clone(), bits: bitvec![0; space.size()], len: 0 }
    }

    pub fn full(space: &Space) -> PointSet {
        PointSet { space: space.clone(), bits: bitvec![1; space.size()], len: space.size() }
    }

    pub fn from_indices(space: &Space, indices: impl IntoIterator<Item = usize>) -> Result<PointSet> {
        let mut set = PointSet::empty(space);
        for i in indices {
            if i >= space.size() {
                return Err(Error::SizeOutOfRange { size: i, available: space.size() });
            }
            set.insert_index(i);
        }
        Ok(set)
    }

    pub fn from_points<I>(space: &Space, points: I) -> Result<PointSet>
    where
        I: IntoIterator,
        I::Item: AsRef<[Elem]>,
    {
        let mut set = PointSet::empty(space);
        for x in points {
            set.insert(x.as_ref())?;
        }
        Ok(set)
    }

    /// All points satisfying a predicate, scanning the whole space.
    pub fn from_predicate(space: &Space, mut pred: impl FnMut(&[Elem]) -> bool) -> PointSet {
        let mut set = PointSet::empty(space);
        let mut buf = vec![Elem::ZERO; space.d()];
        for i in 0..space.size() {
            space.write_point(i, &mut buf);
            if pred(&buf) {
                set.insert_index(i);
            }
        }
        set
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn d(&self) -> usize {
        self.space.d()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, x: &[Elem]) -> Result<bool> {
        let i = self.space.index_of(x)?;
        Ok(self.insert_index(i))
    }

    pub fn insert_index(&mut self, i: usize) -> bool {
        let fresh = !self.bits[i];
        if fresh {
            self.bits.set(i, true);
            self.len += 1;
        }
        fresh
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        self.space.check(x).is_ok() && self.bits[self.space.index_unchecked(x)]
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn contains_origin(&self) -> bool {
        self.bits[0]
    }

    /// Member indices in ascending (lexicographic) order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn points(&self) -> Vec<Vec<Elem>> {
        self.indices().map(|i| self.space.point(i)).collect()
    }

    /// Member coordinates laid out contiguously, `d` per point.
    pub fn flat_coords(&self) -> Vec<Elem> {
        let d = self.d();
        let mut out = vec![Elem::ZERO; self.len * d];
        for (chunk, i) in out.chunks_mut(d).zip(self.indices()) {
            self.space.write_point(i, chunk);
        }
        out
    }

    fn same_space(&self, other: &PointSet) -> Result<()> {
        if self.space.field() != other.space.field() {
            return Err(Error::FieldMismatch);
        }
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch { expected: self.d(), found: other.d() });
        }
        Ok(())
    }

    fn combine(&self, other: &PointSet, op: impl Fn(bool, bool) -> bool) -> Result<PointSet> {
        self.same_space(other)?;
        let bits: BitVec = self.bits.iter().zip(other.bits.iter()).map(|(a, b)| op(*a, *b)).collect();
        let len = bits.count_ones();
        Ok(PointSet { space: self.space.clone(), bits, len })
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.combine(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Sorted list of coordinate tuples.
    pub fn to_coords(&self) -> Vec<Vec<Coord>> {
        let field = self.field();
        self.indices()
            .map(|i| self.space.point(i).into_iter().map(|c| coord_of(field, c)).collect())
            .collect()
    }

    pub fn from_coords(space: &Space, coords: &[Vec<Coord>]) -> Result<PointSet> {
        let mut set = PointSet::empty(space);
        for tuple in coords {
            let x = tuple.iter().map(|c| elem_of(space.field(), c)).collect::<Result<Vec<_>>>()?;
            set.insert(&x)?;
        }
        Ok(set)
    }
}

/// The punctured line {t k : t in F_q^*}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub direction: Vec<Elem>,
    pub points: Vec<Vec<Elem>>,
}

pub fn line_points(space: &Space, k: &[Elem]) -> Result<Line> {
    space.check(k)?;
    if is_zero_vector(k) {
        return Err(Error::ZeroDirection);
    }
    let points = space.field().nonzero_elements().map(|t| space.scale(t, k)).collect();
    Ok(Line { direction: k.to_vec(), points })
}

/// |E ∩ l_k|, probing the q - 1 points of the punctured line.
pub fn line_intersection_count(set: &PointSet, k: &[Elem]) -> Result<usize> {
    let space = set.space();
    space.check(k)?;
    if is_zero_vector(k) {
        return Err(Error::ZeroDirection);
    }
    let field = space.field();
    let mut buf = vec![Elem::ZERO; k.len()];
    let mut count = 0;
    for t in field.nonzero_elements() {
        for (b, &c) in buf.iter_mut().zip(k) {
            *b = field.mul(t, c);
        }
        if set.contains_index(space.index_unchecked(&buf)) {
            count += 1;
        }
    }
    Ok(count)
}

/// S_r = {x : x . x = r}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sphere {
    pub radius: Elem,
    pub points: PointSet,
}

impl Sphere {
    pub fn cardinality(&self) -> usize {
        self.points.len()
    }
}

/// Enumerates the sphere by a full scan of F_q^d.
pub fn sphere_points(space: &Space, r: Elem) -> Sphere {
    let field = space.field().clone();
    let points = PointSet::from_predicate(space, |x| field.dot(x, x) == r);
    Sphere { radius: r, points }
}

/// Normal vector scaled so its first nonzero coordinate is one.
pub fn canonical_normal(field: &Field, n: &[Elem]) -> Option<Vec<Elem>> {
    let lead = *n.iter().find(|c| !c.is_zero())?;
    let inv = field.inv(lead)?;
    Some(n.iter().map(|&c| field.mul(inv, c)).collect())
}

/// One representative normal per projective class, in lexicographic order.
pub fn canonical_normals(space: &Space) -> impl Iterator<Item = Vec<Elem>> + '_ {
    let one = space.field().one();
    space
        .points()
        .skip(1)
        .filter(move |n| n.iter().find(|c| !c.is_zero()) == Some(&one))
}

/// The hyperplane {x : x . n = 0}.
#[derive(Debug, Clone)]
pub struct Hyperplane {
    pub normal: Vec<Elem>,
    pub points: PointSet,
}

/// Every hyperplane through the origin, each exactly once.
pub fn hyperplanes_through_origin(space: &Space) -> Result<impl Iterator<Item = Hyperplane> + '_> {
    if space.d() < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: space.d() });
    }
    let field = space.field().clone();
    Ok(canonical_normals(space).map(move |normal| {
        let points = PointSet::from_predicate(space, |x| field.dot(x, &normal).is_zero());
        Hyperplane { normal, points }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn space(p: u64, s: u32, d: usize) -> Space {
        Space::new(&make_field(p, s, None).unwrap(), d).unwrap()
    }

    #[test]
    fn dot_and_norm_examples() {
        let sp = space(5, 1, 2);
        assert_eq!(sp.dot(&sp.vector(&[1, 0]), &sp.vector(&[0, 1])).unwrap(), Elem::ZERO);
        assert_eq!(sp.norm(&sp.vector(&[1, 2])).unwrap(), Elem::ZERO);
        let sp3 = space(3, 1, 3);
        assert_eq!(sp3.norm(&sp3.vector(&[1, 1, 1])).unwrap(), Elem::ZERO);
        assert!(matches!(sp.dot(&sp.vector(&[1]), &sp.vector(&[1, 2])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn point_indexing_is_lexicographic() {
        let sp = space(3, 1, 2);
        let pts: Vec<_> = sp.points().collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        for (i, x) in pts.iter().enumerate() {
            assert_eq!(sp.index_of(x).unwrap(), i);
        }
    }

    #[test]
    fn line_examples() {
        let sp = space(3, 1, 2);
        let l = line_points(&sp, &sp.vector(&[1, 0])).unwrap();
        assert_eq!(l.points, vec![sp.vector(&[1, 0]), sp.vector(&[2, 0])]);
        let sp5 = space(5, 1, 2);
        assert_eq!(line_points(&sp5, &sp5.vector(&[1, 2])).unwrap().points.len(), 4);
        assert_eq!(line_points(&sp5, &sp5.origin()).unwrap_err(), Error::ZeroDirection);
    }

    #[test]
    fn scaled_directions_give_the_same_line() {
        let sp = space(7, 1, 2);
        for k in sp.points().skip(1) {
            let base: PointSet = PointSet::from_points(&sp, line_points(&sp, &k).unwrap().points).unwrap();
            for t in sp.field().nonzero_elements() {
                let other = PointSet::from_points(&sp, line_points(&sp, &sp.scale(t, &k)).unwrap().points).unwrap();
                assert_eq!(base, other);
            }
        }
    }

    #[test]
    fn sphere_examples() {
        let f5 = make_field(5, 1, None).unwrap();
        let sp = Space::new(&f5, 2).unwrap();
        assert_eq!(sphere_points(&sp, f5.one()).cardinality(), 4);
        let sp3 = space(3, 1, 2);
        assert_eq!(sphere_points(&sp3, sp3.field().one()).cardinality(), 4);
        let sp1 = space(7, 1, 1);
        let s = sphere_points(&sp1, sp1.field().one());
        assert_eq!(s.points.points(), vec![sp1.vector(&[1]), sp1.vector(&[6])]);
    }

    #[test]
    fn circle_count_is_p_minus_eta_minus_one() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let f = make_field(p, 1, None).unwrap();
            let sp = Space::new(&f, 2).unwrap();
            let eta = f.eta(f.from_int(-1)) as i64;
            for r in f.nonzero_elements() {
                assert_eq!(sphere_points(&sp, r).cardinality() as i64, p as i64 - eta);
            }
        }
    }

    #[test]
    fn hyperplane_enumeration() {
        let sp = space(3, 1, 2);
        let hs: Vec<_> = hyperplanes_through_origin(&sp).unwrap().collect();
        assert_eq!(hs.len(), 4);
        assert!(hs.iter().all(|h| h.points.len() == 3 && h.points.contains_origin()));
        let sp3 = space(3, 1, 3);
        assert_eq!(hyperplanes_through_origin(&sp3).unwrap().count(), 13);
        assert!(hyperplanes_through_origin(&space(3, 1, 1)).is_err());
    }

    #[test]
    fn every_nonzero_point_lies_in_the_expected_number_of_hyperplanes() {
        for (p, s, d) in [(3, 1, 3), (5, 1, 2), (3, 2, 2)] {
            let sp = space(p, s, d);
            let q = sp.q();
            let hs: Vec<_> = hyperplanes_through_origin(&sp).unwrap().collect();
            let n_h = (q.pow(d as u32) - 1) / (q - 1);
            assert_eq!(hs.len(), n_h);
            let mut hits = vec![0usize; sp.size()];
            for h in &hs {
                assert_eq!(h.points.len(), q.pow(d as u32 - 1));
                for i in h.points.indices() {
                    hits[i] += 1;
                }
            }
            let per_point = (q.pow(d as u32 - 1) - 1) / (q - 1);
            assert!(hits[1..].iter().all(|&h| h == per_point));
            let total: usize = hits[1..].iter().sum();
            assert_eq!(total, n_h * (q.pow(d as u32 - 1) - 1));
        }
    }

    #[test]
    fn line_intersection_examples() {
        let sp = space(5, 1, 2);
        let k = sp.vector(&[1, 2]);
        let line = PointSet::from_points(&sp, line_points(&sp, &k).unwrap().points).unwrap();
        assert_eq!(line_intersection_count(&line, &k).unwrap(), 4);
        assert_eq!(line_intersection_count(&PointSet::empty(&sp), &k).unwrap(), 0);
        let circle = sphere_points(&sp, sp.field().one()).points;
        for k in sp.points().skip(1) {
            assert!(line_intersection_count(&circle, &k).unwrap() <= 2);
        }
    }

    #[test]
    fn set_algebra_and_coords_roundtrip() {
        let sp = space(3, 2, 2);
        let a = PointSet::from_indices(&sp, [0, 5, 17, 80]).unwrap();
        let b = PointSet::from_indices(&sp, [5, 6, 80]).unwrap();
        assert_eq!(a.union(&b).unwrap().len(), 5);
        assert_eq!(a.intersection(&b).unwrap().len(), 2);
        assert_eq!(a.difference(&b).unwrap().len(), 2);
        let coords = a.to_coords();
        assert!(matches!(coords[0][0], Coord::Coeffs(_)));
        assert_eq!(PointSet::from_coords(&sp, &coords).unwrap(), a);
        let other = space(3, 1, 2);
        assert!(a.union(&PointSet::empty(&other)).is_err());
    }
}
