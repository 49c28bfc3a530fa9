//! Incidence counts, dot-product and distance sets, and the inequality checks
//! built on them.
//!
//! All counts are exact integers. Only the spectral side of the L2 inequality
//! is a float.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::geometry::{hyperplanes_through_origin, is_zero_vector, PointSet, Space};
use crate::report::{BoundReport, Measurement};
use crate::spectral::transform_set;

/// Relative tolerance for the float side of the L2 inequality and identity.
pub const L2_REL_TOL: f64 = 1e-6;

/// nu(t) = #{(x, y) in E x E : x . y = t} for every t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceProfile {
    field: Field,
    d: usize,
    setsize: usize,
    nu: Vec<u64>,
}

impl IncidenceProfile {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn setsize(&self) -> usize {
        self.setsize
    }

    /// Indexed by `Elem::index`.
    pub fn nu(&self) -> &[u64] {
        &self.nu
    }

    pub fn nu_at(&self, t: Elem) -> u64 {
        self.nu[t.index()]
    }

    /// R(t) = nu(t) - |E|^2 / q.
    pub fn remainder(&self, t: Elem) -> Ratio<i128> {
        let q = self.field.q() as i128;
        let e = self.setsize as i128;
        Ratio::new(self.nu_at(t) as i128 * q - e * e, q)
    }

    pub fn sum_nu_squared(&self) -> u128 {
        self.nu.iter().map(|&v| v as u128 * v as u128).sum()
    }

    /// The support of nu, which is the dot-product set.
    pub fn support(&self) -> ValueSet {
        ValueSet::from_mask(&self.field, self.nu.iter().map(|&v| v > 0).collect())
    }
}

/// A subset of F_q, used for dot-product and distance sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSet {
    field: Field,
    mask: Vec<bool>,
}

pub type DotProductSet = ValueSet;
pub type DistanceSet = ValueSet;

impl ValueSet {
    fn from_mask(field: &Field, mask: Vec<bool>) -> ValueSet {
        ValueSet { field: field.clone(), mask }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn contains(&self, t: Elem) -> bool {
        self.mask[t.index()]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.field.elements().filter(|&t| self.contains(t)).collect()
    }

    pub fn covers_nonzero(&self) -> bool {
        self.field.nonzero_elements().all(|t| self.contains(t))
    }

    pub fn covers_all(&self) -> bool {
        self.mask.iter().all(|&b| b)
    }

    /// Elements rendered with `Field::format`.
    pub fn formatted(&self) -> Vec<String> {
        self.elements().into_iter().map(|t| self.field.format(t)).collect()
    }
}

fn nonempty(set: &PointSet) -> Result<()> {
    if set.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

/// nu and N_orth = sum_x sum_t h_x(t)^2 with h_x(t) = #{y in E : x . y = t},
/// from a single pass over E x E.
fn incidence_pass(set: &PointSet) -> (Vec<u64>, u128) {
    let field = set.field();
    let q = field.q();
    let d = set.d();
    let flat = set.flat_coords();
    flat.par_chunks(d)
        .fold(
            || (vec![0u64; q], 0u128, vec![0u64; q]),
            |(mut nu, mut orth, mut h), x| {
                h.iter_mut().for_each(|v| *v = 0);
                for y in flat.chunks(d) {
                    h[field.dot(x, y).index()] += 1;
                }
                for (n, &c) in nu.iter_mut().zip(&h) {
                    *n += c;
                    orth += c as u128 * c as u128;
                }
                (nu, orth, h)
            },
        )
        .map(|(nu, orth, _)| (nu, orth))
        .reduce(
            || (vec![0u64; q], 0u128),
            |(mut a, oa), (b, ob)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                (a, oa + ob)
            },
        )
}

pub fn nu_profile(set: &PointSet) -> Result<IncidenceProfile> {
    nonempty(set)?;
    let (nu, _) = incidence_pass(set);
    Ok(IncidenceProfile { field: set.field().clone(), d: set.d(), setsize: set.len(), nu })
}

/// nu(t) through the character identity `q^{-1} sum_s sum_{x,y} chi(s (x . y - t))`.
pub fn nu_profile_spectral(set: &PointSet) -> Result<Vec<f64>> {
    nonempty(set)?;
    let field = set.field();
    let points = set.points();
    let mut dots = Vec::with_capacity(points.len() * points.len());
    for x in &points {
        for y in &points {
            dots.push(field.dot(x, y));
        }
    }
    let q = field.q() as f64;
    Ok(field
        .elements()
        .map(|t| {
            let total: Complex64 = field
                .elements()
                .map(|s| dots.iter().map(|&v| field.chi(field.mul(s, field.sub(v, t)))).sum::<Complex64>())
                .sum();
            total.re / q
        })
        .collect())
}

/// N_orth = #{(x, y, y') in E^3 : (y' - y) . x = 0}.
pub fn orthogonal_triples(set: &PointSet) -> Result<u128> {
    nonempty(set)?;
    Ok(incidence_pass(set).1)
}

/// The literal triple loop for N_orth.
pub fn orthogonal_triples_brute(set: &PointSet) -> Result<u128> {
    nonempty(set)?;
    let space = set.space();
    let points = set.points();
    let count = points
        .par_iter()
        .map(|x| {
            let mut c = 0u128;
            for y in &points {
                for y2 in &points {
                    if space.field().dot(&space.sub(y2, y), x).is_zero() {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    Ok(count)
}

pub fn dot_product_set(set: &PointSet) -> Result<DotProductSet> {
    Ok(nu_profile(set)?.support())
}

/// Delta(E) = {||x - y|| : x, y in E}.
pub fn distance_set(set: &PointSet) -> Result<DistanceSet> {
    nonempty(set)?;
    let field = set.field();
    let d = set.d();
    let flat = set.flat_coords();
    let n = set.len();
    let mask = (0..n)
        .into_par_iter()
        .fold(
            || vec![false; field.q()],
            |mut mask, i| {
                let x = &flat[i * d..(i + 1) * d];
                for y in flat[i * d..].chunks(d) {
                    let dist = x.iter().zip(y).fold(field.zero(), |acc, (&a, &b)| {
                        field.add(acc, field.square(field.sub(a, b)))
                    });
                    mask[dist.index()] = true;
                }
                mask
            },
        )
        .reduce(
            || vec![false; field.q()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    Ok(ValueSet::from_mask(field, mask))
}

/// |E ∩ l_k| for every k, indexed like the points of the space (zero at k = 0).
pub fn line_counts(set: &PointSet) -> Vec<u64> {
    let space = set.space();
    let field = space.field();
    let mut counts = vec![0u64; space.size()];
    let mut buf = vec![Elem::ZERO; space.d()];
    for x in set.points() {
        if is_zero_vector(&x) {
            continue;
        }
        for t in field.nonzero_elements() {
            for (b, &c) in buf.iter_mut().zip(&x) {
                *b = field.mul(t, c);
            }
            counts[space.index_of(&buf).expect("scaled point stays in the space")] += 1;
        }
    }
    counts
}

/// sum_{k != 0} |E ∩ l_k| |E^(k)|^2.
pub fn mattila_sum(set: &PointSet) -> Result<f64> {
    nonempty(set)?;
    let table = transform_set(set);
    let counts = line_counts(set);
    Ok(counts
        .iter()
        .zip(table.values())
        .skip(1)
        .filter(|(&c, _)| c > 0)
        .map(|(&c, v)| c as f64 * v.norm_sqr())
        .sum())
}

/// The L2 inequality `sum_t nu(t)^2 <= |E|^4/q + |E| q^{2d-1} M + (q-1)/q |E|^3 E(0)`
/// together with the exact intermediate step `sum_t nu(t)^2 <= |E| N_orth`.
#[derive(Debug, Clone)]
pub struct L2Check {
    pub report: BoundReport,
    pub intermediate: BoundReport,
    pub sum_nu_squared: u128,
    pub n_orth: u128,
    pub mattila: f64,
    /// |(|E| N_orth) - rhs| / rhs; the right-hand side equals |E| N_orth exactly.
    pub identity_relative_error: f64,
    /// (q-1)/q |E|^3 E(0), the origin term used in `report`.
    pub origin_term: f64,
    /// (q-1)/q |E|^2 E(0), the smaller origin term of the theorem statement.
    pub printed_origin_term: f64,
}

pub fn l2_rhs(field: &Field, d: usize, setsize: usize, mattila: f64, has_origin: bool) -> f64 {
    let q = field.q() as f64;
    let e = setsize as f64;
    let origin = if has_origin { (q - 1.0) / q * e.powi(3) } else { 0.0 };
    e.powi(4) / q + e * q.powi(2 * d as i32 - 1) * mattila + origin
}

pub fn verify_l2_bound(set: &PointSet) -> Result<L2Check> {
    nonempty(set)?;
    let field = set.field();
    let d = set.d();
    let e = set.len();
    let (nu, n_orth) = incidence_pass(set);
    let sum_nu_squared: u128 = nu.iter().map(|&v| v as u128 * v as u128).sum();
    let mattila = mattila_sum(set)?;
    let has_origin = set.contains_origin();
    let rhs = l2_rhs(field, d, e, mattila, has_origin);
    let q = field.q() as f64;
    let ef = e as f64;
    let e0 = if has_origin { 1.0 } else { 0.0 };
    let combinatorial = e as f64 * n_orth as f64;
    let report = BoundReport::float("l2_incidence", field, d, e, sum_nu_squared as f64, rhs, L2_REL_TOL * rhs.abs());
    let intermediate = BoundReport::exact(
        "l2_cauchy_schwarz",
        field,
        d,
        e,
        sum_nu_squared as i128,
        e as i128 * n_orth as i128,
    );
    Ok(L2Check {
        report,
        intermediate,
        sum_nu_squared,
        n_orth,
        mattila,
        identity_relative_error: (combinatorial - rhs).abs() / rhs.abs(),
        origin_term: (q - 1.0) / q * ef.powi(3) * e0,
        printed_origin_term: (q - 1.0) / q * ef.powi(2) * e0,
    })
}

/// Squared pointwise bound at the worst t:
/// `(nu(t) q - |E|^2)^2 <= q^2 |E|^2 q^{d-1}` for t != 0, with `q^d` at t = 0.
#[derive(Debug, Clone)]
pub struct PointwiseCheck {
    pub report: BoundReport,
    pub worst_t: Elem,
    /// Every t passes, not only the worst.
    pub all_pass: bool,
}

pub fn pointwise_sides(profile: &IncidenceProfile, t: Elem) -> (i128, i128) {
    let q = profile.field.q() as i128;
    let e = profile.setsize as i128;
    let d = profile.d as u32;
    let num = profile.nu_at(t) as i128 * q - e * e;
    let power = if t.is_zero() { q.pow(d) } else { q.pow(d - 1) };
    (num * num, q * q * e * e * power)
}

pub fn verify_pointwise_bound(set: &PointSet) -> Result<PointwiseCheck> {
    let profile = nu_profile(set)?;
    let field = profile.field.clone();
    let (worst_t, (lhs, rhs)) = field
        .elements()
        .map(|t| (t, pointwise_sides(&profile, t)))
        .min_by_key(|(_, (l, r))| r - l)
        .expect("field is nonempty");
    let report = BoundReport::exact("pointwise_incidence", &field, profile.d, profile.setsize, lhs, rhs);
    let all_pass = report.pass;
    Ok(PointwiseCheck { report, worst_t, all_pass })
}

/// Coverage of F_q^* by dot products and of F_q by distances, with the
/// hypotheses under which each is guaranteed.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub dot_products: DotProductSet,
    pub distances: DistanceSet,
    /// |E| > q^{(d+1)/2}
    pub dot_hypothesis: bool,
    /// |E| >= 4 q^{(d+1)/2}
    pub distance_hypothesis: bool,
    /// |E|^4 / sum_t nu(t)^2, a lower bound for |Pi(E)|.
    pub cauchy_schwarz_lower: Ratio<i128>,
    /// Theorem-backed checks; hypothesis-gated ones appear only when the hypothesis holds.
    pub reports: Vec<BoundReport>,
}

pub fn coverage_report(set: &PointSet) -> Result<CoverageReport> {
    let profile = nu_profile(set)?;
    let field = set.field();
    let d = set.d();
    let e = set.len() as i128;
    let q = field.q() as i128;
    let dot_products = profile.support();
    let distances = distance_set(set)?;
    let threshold = q.pow(d as u32 + 1);
    let dot_hypothesis = e * e > threshold;
    let distance_hypothesis = e * e >= 16 * threshold;
    let snu = profile.sum_nu_squared() as i128;
    let cauchy_schwarz_lower = Ratio::new(e.pow(4), snu);

    let mut reports = vec![BoundReport::exact(
        "dot_cauchy_schwarz",
        field,
        d,
        set.len(),
        e.pow(4),
        dot_products.len() as i128 * snu,
    )];
    if dot_hypothesis {
        let missing = field.nonzero_elements().filter(|&t| !dot_products.contains(t)).count();
        reports.push(BoundReport::exact("dot_coverage", field, d, set.len(), missing as i128, 0));
    }
    if distance_hypothesis {
        let missing = field.elements().filter(|&t| !distances.contains(t)).count();
        reports.push(BoundReport::exact("distance_coverage", field, d, set.len(), missing as i128, 0));
    }
    Ok(CoverageReport { dot_products, distances, dot_hypothesis, distance_hypothesis, cauchy_schwarz_lower, reports })
}

/// Hyperplane-section statistics of a subset of a sphere.
#[derive(Debug, Clone)]
pub struct UniformityCheck {
    pub radius: Elem,
    /// max_H |E ∩ H| over hyperplanes through the origin
    pub max_section: usize,
    /// max_H |E ∩ H| q / |E|
    pub c_measured: f64,
    pub distances: DistanceSet,
    /// |Delta(E)| / q
    pub distance_ratio: f64,
    /// q / (1 + 2 C + 2 q / |E|), the dot-product lower bound implied by C
    pub implied_dot_lower: f64,
    pub measurements: Vec<Measurement>,
}

pub fn sphere_uniformity_check(set: &PointSet) -> Result<UniformityCheck> {
    nonempty(set)?;
    let space: &Space = set.space();
    let field = space.field();
    let d = space.d();
    let points = set.points();
    let radius = field.dot(&points[0], &points[0]);
    if points.iter().any(|x| field.dot(x, x) != radius) {
        return Err(Error::NotOnSphere);
    }
    let max_section = hyperplanes_through_origin(space)?
        .map(|h| h.points.intersection(set).map(|s| s.len()).unwrap_or(0))
        .max()
        .unwrap_or(0);
    let q = field.q() as f64;
    let e = set.len() as f64;
    let c_measured = max_section as f64 * q / e;
    let distances = distance_set(set)?;
    let distance_ratio = distances.len() as f64 / q;
    let implied_dot_lower = q / (1.0 + 2.0 * c_measured + 2.0 * q / e);
    let measurements = vec![
        Measurement::new("uniformity_constant", field, d, set.len(), c_measured),
        Measurement::new("distance_ratio", field, d, set.len(), distance_ratio),
        Measurement::new("implied_dot_lower", field, d, set.len(), implied_dot_lower),
    ];
    Ok(UniformityCheck { radius, max_section, c_measured, distances, distance_ratio, implied_dot_lower, measurements })
}

/// The conditional dot-product statement for A ⊆ F_q^*:
/// with M = max_{t != 0,1} |A ∩ tA|^2, C_uni = M q / |A|^2 and C_size = |A|^2 / q,
/// `|2A^2| >= q C_size / (2 C_size + C_uni)`, checked as
/// `q |A|^4 <= |2A^2| (2 |A|^4 + M q^2)`.
#[derive(Debug, Clone)]
pub struct PairSimilarity {
    pub report: BoundReport,
    pub max_overlap: u64,
    pub c_uni: f64,
    pub c_size: f64,
    pub two_a_squared: usize,
    /// False for singletons, where C_uni = 0 and the inequality can fail; the
    /// report is then only a measurement.
    pub theorem_applies: bool,
}

pub fn pair_similarity_check(field: &Field, a: &[Elem]) -> Result<PairSimilarity> {
    let set: BTreeSet<Elem> = a.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.contains(&field.zero()) {
        return Err(Error::ZeroInSet);
    }
    let n = set.len() as i128;
    let q = field.q() as i128;
    let max_overlap = field
        .nonzero_elements()
        .filter(|&t| t != field.one())
        .map(|t| {
            let hits = set.iter().filter(|&&x| set.contains(&field.mul(t, x))).count() as u64;
            hits * hits
        })
        .max()
        .unwrap_or(0);
    let members: Vec<Elem> = set.iter().copied().collect();
    let two_a_squared = sum_of_products(field, &members, 2).len();
    let lhs = q * n.pow(4);
    let rhs = two_a_squared as i128 * (2 * n.pow(4) + max_overlap as i128 * q * q);
    let report = BoundReport::exact("pair_similarity", field, 2, set.len(), lhs, rhs);
    Ok(PairSimilarity {
        report,
        max_overlap,
        c_uni: max_overlap as f64 * q as f64 / (n * n) as f64,
        c_size: (n * n) as f64 / q as f64,
        two_a_squared,
        theorem_applies: set.len() >= 2,
    })
}

/// dA^2 = {a_1 a_1' + ... + a_d a_d' : a_i, a_i' in A}, as a membership mask.
pub(crate) fn sum_of_products(field: &Field, a: &[Elem], d: usize) -> BTreeSet<Elem> {
    let products: BTreeSet<Elem> = a.iter().flat_map(|&x| a.iter().map(move |&y| field.mul(x, y))).collect();
    let mut acc: BTreeSet<Elem> = [field.zero()].into();
    for _ in 0..d {
        acc = acc.iter().flat_map(|&s| products.iter().map(move |&p| field.add(s, p))).collect();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::geometry::sphere_points;

    fn space(p: u64, s: u32, d: usize) -> Space {
        Space::new(&make_field(p, s, None).unwrap(), d).unwrap()
    }

    fn pseudo_random_set(sp: &Space, salt: usize) -> PointSet {
        PointSet::from_indices(sp, (0..sp.size()).filter(|i| (i * 2654435761 + salt * 40503) % 7 < 3)).unwrap()
    }

    #[test]
    fn singleton_profile() {
        let sp = space(5, 1, 2);
        let x = sp.vector(&[1, 2]);
        let prof = nu_profile(&PointSet::from_points(&sp, [&x]).unwrap()).unwrap();
        let t = sp.norm(&x).unwrap();
        for s in sp.field().elements() {
            assert_eq!(prof.nu_at(s), u64::from(s == t));
        }
    }

    #[test]
    fn full_space_profile() {
        for (p, s, d) in [(3, 1, 2), (5, 1, 2), (3, 1, 3), (3, 2, 2)] {
            let sp = space(p, s, d);
            let q = sp.q() as u64;
            let d = d as u32;
            let prof = nu_profile(&PointSet::full(&sp)).unwrap();
            assert_eq!(prof.nu()[0], q.pow(2 * d - 1) + q.pow(d) - q.pow(d - 1));
            for &v in &prof.nu()[1..] {
                assert_eq!(v, q.pow(2 * d - 1) - q.pow(d - 1));
            }
            let qi = q as i128;
            assert_eq!(prof.remainder(sp.field().one()), Ratio::from_integer(-(qi.pow(d - 1))));
            assert_eq!(prof.remainder(sp.field().zero()), Ratio::from_integer(qi.pow(d) - qi.pow(d - 1)));
        }
    }

    #[test]
    fn double_loop_matches_character_identity() {
        for (p, s, salt) in [(3, 1, 1), (5, 1, 2), (3, 2, 3)] {
            let sp = space(p, s, 2);
            let set = pseudo_random_set(&sp, salt);
            let prof = nu_profile(&set).unwrap();
            let spec = nu_profile_spectral(&set).unwrap();
            assert_eq!(prof.nu().iter().sum::<u64>(), (set.len() * set.len()) as u64);
            for (a, b) in prof.nu().iter().zip(spec) {
                assert!((*a as f64 - b).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn orthogonal_triples_match_brute_force_and_spectral_identity() {
        for (p, d, salt) in [(3, 2, 1), (5, 2, 4), (3, 3, 2), (7, 2, 5)] {
            let sp = space(p, 1, d);
            let mut set = pseudo_random_set(&sp, salt);
            set.insert_index(0);
            let fast = orthogonal_triples(&set).unwrap();
            assert_eq!(fast, orthogonal_triples_brute(&set).unwrap());
            let check = verify_l2_bound(&set).unwrap();
            assert!(check.identity_relative_error < 1e-9, "{}", check.identity_relative_error);
            assert!(check.report.pass && check.intermediate.pass);
        }
    }

    #[test]
    fn mattila_sum_of_origin_is_zero_and_sphere_bound_holds() {
        let sp = space(5, 1, 3);
        assert_eq!(mattila_sum(&PointSet::from_indices(&sp, [0]).unwrap()).unwrap(), 0.0);
        let sphere = sphere_points(&sp, sp.field().one()).points;
        let m = mattila_sum(&sphere).unwrap();
        let q = sp.q() as f64;
        let e = sphere.len() as f64;
        assert!(m <= 2.0 * e * q.powi(-3) + 1e-12);
    }

    #[test]
    fn l2_on_full_space_and_single_point() {
        let sp = space(3, 1, 2);
        let full = verify_l2_bound(&PointSet::full(&sp)).unwrap();
        assert!(full.report.pass);
        let one = verify_l2_bound(&PointSet::from_points(&sp, [sp.vector(&[1, 1])]).unwrap()).unwrap();
        assert_eq!(one.sum_nu_squared, 1);
        assert!(one.report.pass);
    }

    #[test]
    fn pointwise_bound_on_adversarial_sets() {
        let sp = space(7, 1, 2);
        let sets = [
            PointSet::full(&sp),
            sphere_points(&sp, sp.field().one()).points,
            PointSet::from_predicate(&sp, |x| x[1].is_zero()),
            pseudo_random_set(&sp, 9),
        ];
        for set in &sets {
            let check = verify_pointwise_bound(set).unwrap();
            assert!(check.report.pass, "{}", check.report);
        }
    }

    #[test]
    fn isotropic_line_has_only_zero_dots_and_distances() {
        let sp = space(5, 1, 2);
        let f = sp.field().clone();
        let set = PointSet::from_points(&sp, f.elements().map(|t| vec![t, f.mul(f.from_int(2), t)])).unwrap();
        assert_eq!(dot_product_set(&set).unwrap().elements(), vec![f.zero()]);
        assert_eq!(distance_set(&set).unwrap().elements(), vec![f.zero()]);
        let cov = coverage_report(&set).unwrap();
        assert!(!cov.dot_hypothesis);
    }

    #[test]
    fn sphere_distances_are_affine_in_dots() {
        let sp = space(7, 1, 2);
        let f = sp.field().clone();
        let r = f.from_int(3);
        let set = sphere_points(&sp, r).points;
        let pts = set.points();
        let mut expect = BTreeSet::new();
        for x in &pts {
            for y in &pts {
                let s = f.dot(x, y);
                let two = f.from_int(2);
                expect.insert(f.sub(f.mul(two, r), f.mul(two, s)));
            }
        }
        assert_eq!(distance_set(&set).unwrap().elements(), expect.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn coverage_exhaustive_q3() {
        let sp = space(3, 1, 2);
        let mut checked = 0;
        for mask in 0u32..512 {
            if mask.count_ones() < 6 {
                continue;
            }
            let set = PointSet::from_indices(&sp, (0..9).filter(|i| mask >> i & 1 == 1)).unwrap();
            let cov = coverage_report(&set).unwrap();
            assert!(cov.dot_hypothesis && cov.dot_products.covers_nonzero());
            assert!(cov.reports.iter().all(|r| r.pass));
            checked += 1;
        }
        assert_eq!(checked, 130);
    }

    #[test]
    fn uniformity_of_full_circle_and_concentrated_set() {
        let sp = space(5, 1, 3);
        let f = sp.field().clone();
        let sphere = sphere_points(&sp, f.one()).points;
        let u = sphere_uniformity_check(&sphere).unwrap();
        assert!(u.c_measured < 2.0);
        let section = PointSet::from_predicate(&sp, |x| f.dot(x, x) == f.one() && x[2].is_zero());
        let v = sphere_uniformity_check(&section).unwrap();
        assert!((v.c_measured - 5.0).abs() < 1e-12);
        let off = PointSet::from_points(&sp, [sp.vector(&[1, 0, 0]), sp.vector(&[1, 1, 0])]).unwrap();
        assert_eq!(sphere_uniformity_check(&off).unwrap_err(), Error::NotOnSphere);
    }

    #[test]
    fn pair_similarity_on_multiplicative_group() {
        let f = make_field(7, 1, None).unwrap();
        let all: Vec<Elem> = f.nonzero_elements().collect();
        let ps = pair_similarity_check(&f, &all).unwrap();
        assert_eq!(ps.max_overlap, 36);
        assert!(ps.report.pass && ps.theorem_applies);
        assert_eq!(pair_similarity_check(&f, &[f.zero()]).unwrap_err(), Error::ZeroInSet);
        assert_eq!(pair_similarity_check(&f, &[]).unwrap_err(), Error::EmptySet);
        let single = pair_similarity_check(&f, &[f.one()]).unwrap();
        assert!(!single.theorem_applies && !single.report.pass);
    }

    #[test]
    fn pair_similarity_holds_for_every_subset_of_size_two_or_more() {
        for p in [3u64, 5, 7] {
            let f = make_field(p, 1, None).unwrap();
            let nz: Vec<Elem> = f.nonzero_elements().collect();
            for mask in 1u32..(1 << nz.len()) {
                if mask.count_ones() < 2 {
                    continue;
                }
                let a: Vec<Elem> = nz.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
                assert!(pair_similarity_check(&f, &a).unwrap().report.pass);
            }
        }
    }
}
