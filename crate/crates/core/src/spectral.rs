//! Character-sum Fourier analysis on F_q^d.
//!
//! The forward transform carries the normalisation
//! `f^(k) = q^{-d} sum_x chi(-x.k) f(x)` and the inverse is
//! `f(x) = sum_k chi(x.k) f^(k)`. Both are evaluated as direct character sums.
//! Because `chi(-x.k)` factors over coordinates, [`fourier_transform`] applies
//! the one-dimensional direct sum along each axis in turn (cost `d q^{d+1}`);
//! [`fourier_transform_direct`] is the literal `q^{2d}` double sum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{PointSet, Space};

/// Tolerance for character-sum identities, per summand.
pub const CHAR_SUM_TOL: f64 = 1e-9;

/// Values of a transform at every frequency, indexed like the points of the space.
#[derive(Debug, Clone)]
pub struct SpectralTable {
    space: Space,
    values: Vec<Complex64>,
}

impl SpectralTable {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at_index(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn get(&self, k: &[Elem]) -> Result<Complex64> {
        Ok(self.values[self.space.index_of(k)?])
    }

    /// CSV with one row per frequency: the coordinates of k, then re, im.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let d = self.space.d();
        let mut header: Vec<String> = (0..d).map(|i| format!("k{i}")).collect();
        header.push("re".into());
        header.push("im".into());
        w.write_record(&header).map_err(csv_err)?;
        let field = self.space.field();
        for (i, v) in self.values.iter().enumerate() {
            let mut row: Vec<String> = self.space.point(i).into_iter().map(|c| field.format(c)).collect();
            row.push(v.re.to_string());
            row.push(v.im.to_string());
            w.write_record(&row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Malformed(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Malformed(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Malformed(e.to_string())
}

/// The indicator function of a point set.
pub fn indicator(set: &PointSet) -> Vec<Complex64> {
    let mut f = vec![Complex64::new(0.0, 0.0); set.space().size()];
    for i in set.indices() {
        f[i] = Complex64::new(1.0, 0.0);
    }
    f
}

fn check_len(space: &Space, f: &[Complex64]) -> Result<()> {
    if f.len() != space.size() {
        return Err(Error::DimensionMismatch { expected: space.size(), found: f.len() });
    }
    Ok(())
}

/// `kernel[k * q + x] = chi(sign * k * x)`.
fn character_kernel(field: &Field, negate: bool) -> Vec<Complex64> {
    let q = field.q();
    let mut kernel = Vec::with_capacity(q * q);
    for k in field.elements() {
        for x in field.elements() {
            let kx = field.mul(k, x);
            kernel.push(field.chi(if negate { field.neg(kx) } else { kx }));
        }
    }
    kernel
}

fn transform_axes(space: &Space, data: &mut [Complex64], kernel: &[Complex64]) {
    let q = space.q();
    let d = space.d();
    for axis in 0..d {
        let stride = q.pow((d - 1 - axis) as u32);
        let block = stride * q;
        data.par_chunks_mut(block).for_each(|chunk| {
            let mut line = vec![Complex64::new(0.0, 0.0); q];
            for offset in 0..stride {
                for (x, slot) in line.iter_mut().enumerate() {
                    *slot = chunk[offset + x * stride];
                }
                for k in 0..q {
                    let row = &kernel[k * q..(k + 1) * q];
                    let acc = row.iter().zip(&line).fold(Complex64::new(0.0, 0.0), |acc, (c, v)| acc + c * v);
                    chunk[offset + k * stride] = acc;
                }
            }
        });
    }
}

pub fn fourier_transform(space: &Space, f: &[Complex64]) -> Result<SpectralTable> {
    check_len(space, f)?;
    let mut data = f.to_vec();
    transform_axes(space, &mut data, &character_kernel(space.field(), true));
    let norm = (space.size() as f64).recip();
    data.iter_mut().for_each(|v| *v *= norm);
    Ok(SpectralTable { space: space.clone(), values: data })
}

/// The literal double sum over (k, x); `q^{2d}` terms.
pub fn fourier_transform_direct(space: &Space, f: &[Complex64]) -> Result<SpectralTable> {
    check_len(space, f)?;
    let field = space.field();
    let norm = (space.size() as f64).recip();
    let support: Vec<(Vec<Elem>, Complex64)> = (0..space.size())
        .filter(|&i| f[i] != Complex64::new(0.0, 0.0))
        .map(|i| (space.point(i), f[i]))
        .collect();
    let values = (0..space.size())
        .into_par_iter()
        .map(|ki| {
            let k = space.point(ki);
            let sum = support
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, (x, v)| acc + field.chi(field.neg(field.dot(x, &k))) * v);
            sum * norm
        })
        .collect();
    Ok(SpectralTable { space: space.clone(), values })
}

pub fn fourier_invert(table: &SpectralTable) -> Vec<Complex64> {
    let mut data = table.values.clone();
    transform_axes(&table.space, &mut data, &character_kernel(table.space.field(), false));
    data
}

/// Transform of the indicator of `set`.
pub fn transform_set(set: &PointSet) -> SpectralTable {
    fourier_transform(set.space(), &indicator(set)).expect("indicator has the right length")
}

/// Gauss sum `sum_c chi(j c^2)`.
pub fn gauss_sum(field: &Field, j: Elem) -> Result<Complex64> {
    if j.is_zero() {
        return Err(Error::ZeroParameter);
    }
    Ok(field.elements().map(|c| field.chi(field.mul(j, field.square(c)))).sum())
}

/// The unit `K` with `gauss_sum(1) = K sqrt(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaussConstant {
    One,
    MinusOne,
    I,
    MinusI,
}

impl GaussConstant {
    pub fn value(self) -> Complex64 {
        match self {
            GaussConstant::One => Complex64::new(1.0, 0.0),
            GaussConstant::MinusOne => Complex64::new(-1.0, 0.0),
            GaussConstant::I => Complex64::new(0.0, 1.0),
            GaussConstant::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

pub fn gauss_constant(field: &Field) -> Result<GaussConstant> {
    let k = gauss_sum(field, field.one())? / (field.q() as f64).sqrt();
    let tol = CHAR_SUM_TOL * field.q() as f64;
    [GaussConstant::One, GaussConstant::MinusOne, GaussConstant::I, GaussConstant::MinusI]
        .into_iter()
        .find(|c| (c.value() - k).norm() <= tol)
        .ok_or_else(|| Error::Malformed(format!("Gauss constant {k} is not a fourth root of unity")))
}

/// Kloosterman sum `sum_{t != 0} chi(a t + 1/t)`.
pub fn kloosterman_sum(field: &Field, a: Elem) -> Complex64 {
    field
        .nonzero_elements()
        .map(|t| {
            let ti = field.inv(t).expect("t is nonzero");
            field.chi(field.add(field.mul(a, t), ti))
        })
        .sum()
}

/// Closed form for the transform of the sphere indicator:
/// `q^{-1} delta(k) + K^d q^{-(d+2)/2} sum_{j != 0} chi(||k||/(4j) + r j) eta^d(-j)`.
#[derive(Debug, Clone)]
pub struct SphereTransform {
    space: Space,
    radius: Elem,
    constant: GaussConstant,
    scale: Complex64,
    quarter: Elem,
    /// (j, 1/j, eta^d(-j)) for every nonzero j
    terms: Vec<(Elem, Elem, f64)>,
}

impl SphereTransform {
    pub fn new(space: &Space, radius: Elem) -> Result<SphereTransform> {
        if space.d() < 2 {
            return Err(Error::DimensionTooSmall { min: 2, found: space.d() });
        }
        let field = space.field();
        let d = space.d();
        let q = field.q() as f64;
        let constant = gauss_constant(field)?;
        let scale = constant.value().powu(d as u32) * q.powf(-(d as f64 + 2.0) / 2.0);
        let quarter = field.inv(field.from_int(4)).expect("4 is a unit in odd characteristic");
        let terms = field
            .nonzero_elements()
            .map(|j| {
                let eta = if d.is_multiple_of(2) { 1.0 } else { field.eta(field.neg(j)) as f64 };
                (j, field.inv(j).expect("nonzero"), eta)
            })
            .collect();
        Ok(SphereTransform { space: space.clone(), radius, constant, scale, quarter, terms })
    }

    pub fn constant(&self) -> GaussConstant {
        self.constant
    }

    /// The j-sum, which depends on k only through ||k||.
    pub fn j_sum(&self, norm_k: Elem) -> Complex64 {
        let field = self.space.field();
        let a = field.mul(norm_k, self.quarter);
        self.terms
            .iter()
            .map(|&(j, ji, eta)| field.chi(field.add(field.mul(a, ji), field.mul(self.radius, j))) * eta)
            .sum()
    }

    /// The closed form at every frequency, indexed like the points of the space.
    pub fn eval_all(&self) -> Vec<Complex64> {
        let field = self.space.field();
        let by_norm: Vec<Complex64> = field.elements().map(|t| self.j_sum(t) * self.scale).collect();
        let mut out: Vec<Complex64> = (0..self.space.size())
            .into_par_iter()
            .map_init(
                || vec![Elem::ZERO; self.space.d()],
                |buf, i| {
                    self.space.write_point(i, buf);
                    by_norm[field.dot(buf, buf).index()]
                },
            )
            .collect();
        out[0] += 1.0 / field.q() as f64;
        out
    }

    pub fn eval(&self, k: &[Elem]) -> Result<Complex64> {
        self.space.check(k)?;
        let field = self.space.field();
        let delta = if k.iter().all(|c| c.is_zero()) { 1.0 / field.q() as f64 } else { 0.0 };
        Ok(self.j_sum(field.dot(k, k)) * self.scale + delta)
    }
}

pub fn sphere_ft_closed_form(space: &Space, r: Elem, k: &[Elem]) -> Result<Complex64> {
    SphereTransform::new(space, r)?.eval(k)
}

/// How the collapsed "cosine" expression relates to the direct j-sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignRelation {
    Equal,
    Negated,
    Mismatch,
}

/// Odd-dimension reduction of the j-sum
/// `sum_{j != 0} chi(||k||/(4j) + r j) eta(-j)`.
///
/// `printed` is `K sqrt(q) eta(-||k||^2) (chi(2 theta) + chi(-2 theta))` with
/// `theta^2 = r ||k|| / 4` (zero when that is a non-square). `corrected` uses
/// `eta(-||k||)` in place of `eta(-||k||^2)`; the direct sum always agrees with it,
/// so the printed form is off by the factor `eta(r)`.
#[derive(Debug, Clone)]
pub struct CosineReduction {
    pub direct: Complex64,
    pub theta: Option<Elem>,
    pub printed: Complex64,
    pub corrected: Complex64,
    pub relation: SignRelation,
    pub eta_r: i8,
}

pub fn cosine_reduction(field: &Field, r: Elem, norm_k: Elem) -> Result<CosineReduction> {
    if r.is_zero() || norm_k.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let quarter = field.inv(field.from_int(4)).expect("odd characteristic");
    let a = field.mul(norm_k, quarter);
    let direct: Complex64 = field
        .nonzero_elements()
        .map(|j| {
            let ji = field.inv(j).expect("nonzero");
            field.chi(field.add(field.mul(a, ji), field.mul(r, j))) * field.eta(field.neg(j)) as f64
        })
        .sum();
    let theta = field.sqrt(field.mul(r, a));
    let zero = Complex64::new(0.0, 0.0);
    let (printed, corrected) = match theta {
        Some(t) => {
            let two_t = field.add(t, t);
            let cosine = field.chi(two_t) + field.chi(field.neg(two_t));
            let base = gauss_constant(field)?.value() * (field.q() as f64).sqrt() * cosine;
            let printed = base * field.eta(field.neg(field.square(norm_k))) as f64;
            let corrected = base * field.eta(field.neg(norm_k)) as f64;
            (printed, corrected)
        }
        None => (zero, zero),
    };
    let tol = CHAR_SUM_TOL * field.q() as f64;
    let relation = if (direct - printed).norm() <= tol {
        SignRelation::Equal
    } else if (direct + printed).norm() <= tol {
        SignRelation::Negated
    } else {
        SignRelation::Mismatch
    };
    Ok(CosineReduction { direct, theta, printed, corrected, relation, eta_r: field.eta(r) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::geometry::sphere_points;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn transform_of_whole_space_is_delta() {
        let f = make_field(5, 1, None).unwrap();
        let sp = Space::new(&f, 2).unwrap();
        let t = transform_set(&PointSet::full(&sp));
        assert!(close(t.at_index(0), 1.0.into(), 1e-12));
        assert!(t.values()[1..].iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn transform_of_origin_is_flat() {
        let f = make_field(3, 2, None).unwrap();
        let sp = Space::new(&f, 2).unwrap();
        let t = transform_set(&PointSet::from_indices(&sp, [0]).unwrap());
        let v = 1.0 / 81.0;
        assert!(t.values().iter().all(|z| close(*z, v.into(), 1e-12)));
    }

    #[test]
    fn separable_transform_matches_direct_double_sum() {
        for (p, s, d) in [(3, 1, 3), (5, 1, 2), (3, 2, 2), (7, 1, 2)] {
            let f = make_field(p, s, None).unwrap();
            let sp = Space::new(&f, d).unwrap();
            let vals: Vec<Complex64> = (0..sp.size())
                .map(|i| Complex64::new(((i * 7) % 5) as f64 - 2.0, ((i * 3) % 4) as f64))
                .collect();
            let a = fourier_transform(&sp, &vals).unwrap();
            let b = fourier_transform_direct(&sp, &vals).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!(close(*x, *y, 1e-12));
            }
            let back = fourier_invert(&a);
            for (x, y) in back.iter().zip(&vals) {
                assert!(close(*x, *y, 1e-9));
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        let g = gauss_sum(&f3, f3.one()).unwrap();
        assert!(close(g, Complex64::new(0.0, 3f64.sqrt()), 1e-12));
        assert_eq!(gauss_constant(&f3).unwrap(), GaussConstant::I);
        let f5 = make_field(5, 1, None).unwrap();
        assert!(close(gauss_sum(&f5, f5.one()).unwrap(), 5f64.sqrt().into(), 1e-12));
        assert_eq!(gauss_constant(&f5).unwrap(), GaussConstant::One);
        assert_eq!(gauss_sum(&f5, f5.zero()).unwrap_err(), Error::ZeroParameter);
    }

    #[test]
    fn kloosterman_examples() {
        let f3 = make_field(3, 1, None).unwrap();
        assert!(close(kloosterman_sum(&f3, f3.one()), (-1.0).into(), 1e-12));
        for (p, s) in [(3, 1), (7, 1), (3, 2), (5, 2)] {
            let f = make_field(p, s, None).unwrap();
            assert!(close(kloosterman_sum(&f, f.zero()), (-1.0).into(), 1e-9));
            for a in f.nonzero_elements() {
                let k = kloosterman_sum(&f, a);
                assert!(k.norm() <= 2.0 * (f.q() as f64).sqrt() + 1e-9);
                assert!(k.im.abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_matches_direct_sphere_transform() {
        for (p, s, d) in [(3, 1, 2), (5, 1, 3), (3, 2, 2), (7, 1, 2), (3, 1, 4)] {
            let f = make_field(p, s, None).unwrap();
            let sp = Space::new(&f, d).unwrap();
            for r in f.elements() {
                let sphere = sphere_points(&sp, r);
                let direct = fourier_transform_direct(&sp, &indicator(&sphere.points)).unwrap();
                let closed = SphereTransform::new(&sp, r).unwrap();
                let bulk = closed.eval_all();
                for (i, v) in direct.values().iter().enumerate() {
                    assert!(close(bulk[i], closed.eval(&sp.point(i)).unwrap(), 1e-12));
                    let c = closed.eval(&sp.point(i)).unwrap();
                    assert!(close(*v, c, 1e-9), "q={} d={d} r={r:?} k={i}: {v} vs {c}", f.q());
                }
            }
        }
    }

    #[test]
    fn cosine_reduction_is_off_by_eta_r() {
        for (p, s) in [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (3, 3)] {
            let f = make_field(p, s, None).unwrap();
            let tol = 1e-9 * f.q() as f64;
            for r in f.nonzero_elements() {
                for nk in f.nonzero_elements() {
                    let c = cosine_reduction(&f, r, nk).unwrap();
                    assert!(close(c.direct, c.corrected, tol));
                    match c.theta {
                        None => {
                            assert!(c.direct.norm() <= tol);
                            assert_eq!(c.relation, SignRelation::Equal);
                        }
                        Some(_) if c.eta_r == 1 => assert_eq!(c.relation, SignRelation::Equal),
                        Some(_) => assert_eq!(c.relation, SignRelation::Negated),
                    }
                }
            }
        }
    }

    #[test]
    fn spectral_table_csv_has_one_row_per_frequency() {
        let f = make_field(3, 1, None).unwrap();
        let sp = Space::new(&f, 2).unwrap();
        let csv = transform_set(&PointSet::full(&sp)).to_csv().unwrap();
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.starts_with("k0,k1,re,im"));
    }
}
