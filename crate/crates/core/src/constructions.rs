//! Explicit point sets with small distance or dot-product sets, each re-checked
//! against its claimed property before it is returned.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::geometry::{is_zero_vector, sphere_points, Coord, PointSet, Space};
use crate::incidence::{distance_set, dot_product_set, sum_of_products};
use crate::report::BoundReport;

/// Default limit on the number of triples enumerated for the full Gram census.
pub const DEFAULT_CENSUS_CAP: u128 = 100_000_000;

/// The first (a, b, c), all nonzero, with a^2 + b^2 + c^2 = 0, in lexicographic order.
pub fn null_triple(field: &Field) -> Result<[Elem; 3]> {
    for a in field.nonzero_elements() {
        for b in field.nonzero_elements() {
            let ab = field.add(field.square(a), field.square(b));
            for c in field.nonzero_elements() {
                if field.add(ab, field.square(c)).is_zero() {
                    return Ok([a, b, c]);
                }
            }
        }
    }
    Err(Error::NoNullVector(3))
}

/// Rank of a list of vectors, by Gaussian elimination.
pub fn rank(field: &Field, vectors: &[Vec<Elem>]) -> usize {
    let mut rows: Vec<Vec<Elem>> = vectors.to_vec();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        let pivot_row: Vec<Elem> = rows[r].iter().map(|&x| field.mul(inv, x)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, p));
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Largest dimension of a totally isotropic subspace of F_q^n under the dot product.
pub fn isotropic_index(field: &Field, n: usize) -> usize {
    if field.minus_one_is_square() || n % 4 != 2 {
        n / 2
    } else {
        n / 2 - 1
    }
}

fn embed(n: usize, offset: usize, block: &[Elem]) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; n];
    v[offset..offset + block.len()].copy_from_slice(block);
    v
}

/// The two null vectors (a, b, c, 0) and (0, -c, b, a) of a 4-block.
fn paired_block(field: &Field, [a, b, c]: [Elem; 3]) -> [[Elem; 4]; 2] {
    [[a, b, c, Elem::ZERO], [Elem::ZERO, field.neg(c), b, a]]
}

/// A basis of a totally isotropic subspace of F_q^n of dimension `isotropic_index(n)`.
pub fn isotropic_basis(field: &Field, n: usize) -> Result<Vec<Vec<Elem>>> {
    let mut basis = Vec::new();
    if let Some(i) = field.sqrt(field.neg(field.one())) {
        for k in 0..n / 2 {
            basis.push(embed(n, 2 * k, &[field.one(), i]));
        }
    } else if n >= 3 {
        let triple = null_triple(field)?;
        for k in 0..n / 4 {
            for v in paired_block(field, triple) {
                basis.push(embed(n, 4 * k, &v));
            }
        }
        if n % 4 == 3 {
            basis.push(embed(n, n - 3, &triple));
        }
    }
    debug_assert_eq!(basis.len(), isotropic_index(field, n));
    Ok(basis)
}

/// Mutually orthogonal null vectors spanning a totally isotropic subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullBasis {
    pub dimension: usize,
    pub vectors: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullBasisCheck {
    pub null: bool,
    pub orthogonal: bool,
    pub independent: bool,
    pub rank: usize,
}

impl NullBasisCheck {
    pub fn pass(&self) -> bool {
        self.null && self.orthogonal && self.independent
    }
}

impl NullBasis {
    pub fn verify(&self, field: &Field) -> NullBasisCheck {
        let vs = &self.vectors;
        let null = vs.iter().all(|v| v.len() == self.dimension && !is_zero_vector(v) && field.dot(v, v).is_zero());
        let orthogonal = vs.iter().enumerate().all(|(i, v)| vs[i + 1..].iter().all(|w| field.dot(v, w).is_zero()));
        let rank = rank(field, vs);
        NullBasisCheck { null, orthogonal, independent: rank == vs.len(), rank }
    }
}

/// D/2 mutually orthogonal, independent null vectors in F_q^D.
///
/// When -1 is a non-square and D = 2 mod 4 the substitute 6-block
/// ((a,b,c),0), (0,(a,b,c)), (v - w, 0) with v = (-b/c, a/c, 0), w = (0, -c/a, b/a)
/// is built and re-checked; v - w is a multiple of (a, b, c), so the check fails
/// and the error reports the largest dimension that does exist.
pub fn null_basis(field: &Field, dimension: usize) -> Result<NullBasis> {
    if dimension % 2 == 1 {
        return Err(Error::DimensionOdd(dimension));
    }
    if dimension < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: dimension });
    }
    let minus_one_square = field.minus_one_is_square();
    if !minus_one_square && dimension == 2 {
        return Err(Error::NoNullVector(2));
    }
    let basis = if minus_one_square || dimension.is_multiple_of(4) {
        NullBasis { dimension, vectors: isotropic_basis(field, dimension)? }
    } else {
        let triple = null_triple(field)?;
        let [a, b, c] = triple;
        let ai = field.inv(a).expect("nonzero");
        let ci = field.inv(c).expect("nonzero");
        let v = [field.neg(field.mul(b, ci)), field.mul(a, ci), field.zero()];
        let w = [field.zero(), field.neg(field.mul(c, ai)), field.mul(b, ai)];
        let v_minus_w: Vec<Elem> = v.iter().zip(&w).map(|(&x, &y)| field.sub(x, y)).collect();
        let mut vectors = vec![
            embed(dimension, 0, &triple),
            embed(dimension, 3, &triple),
            embed(dimension, 0, &v_minus_w),
        ];
        for k in 0..(dimension - 6) / 4 {
            for blk in paired_block(field, triple) {
                vectors.push(embed(dimension, 6 + 4 * k, &blk));
            }
        }
        NullBasis { dimension, vectors }
    };
    let check = basis.verify(field);
    if check.pass() {
        return Ok(basis);
    }
    Err(Error::IsotropicDimensionUnavailable {
        dimension,
        requested: dimension / 2,
        available: isotropic_index(field, dimension),
        reason: format!(
            "-1 is a non-square in F_{q}, so F_{q}^{dimension} carries no totally isotropic subspace of half \
             dimension when {dimension} = 2 mod 4; the substitute basis has rank {rank} \
             (null: {null}, orthogonal: {orth})",
            q = field.q(),
            rank = check.rank,
            null = check.null,
            orth = check.orthogonal,
        ),
    })
}

/// {start + j step : 0 <= j < n}.
pub fn arithmetic_progression(field: &Field, start: Elem, step: Elem, n: usize) -> Result<Vec<Elem>> {
    if n == 0 {
        return Err(Error::ZeroParameter);
    }
    let mut out = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    let mut x = start;
    for _ in 0..n {
        if !seen.insert(x) {
            return Err(Error::CollisionDetected);
        }
        out.push(x);
        x = field.add(x, step);
    }
    Ok(out)
}

/// {a - a' : a, a' in A}.
pub fn difference_set(field: &Field, a: &[Elem]) -> BTreeSet<Elem> {
    a.iter().flat_map(|&x| a.iter().map(move |&y| field.sub(x, y))).collect()
}

/// One re-checked property of an emitted set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl ClaimCheck {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> ClaimCheck {
        ClaimCheck { name: name.to_string(), pass, detail: detail.into() }
    }
}

/// An emitted set, the parameters that reproduce it, and the re-checked claims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConstruction", into = "RawConstruction")]
pub struct ConstructionOutput {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub claim: String,
    pub set: PointSet,
    pub checks: Vec<ClaimCheck>,
}

impl ConstructionOutput {
    pub fn verified(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// The checks as exact reports (`lhs` = 0 on success, 1 on failure).
    pub fn reports(&self) -> Vec<BoundReport> {
        self.checks
            .iter()
            .map(|c| {
                BoundReport::exact(
                    &format!("{}:{}", self.name, c.name),
                    self.set.field(),
                    self.set.d(),
                    self.set.len(),
                    i128::from(!c.pass),
                    0,
                )
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RawConstruction {
    name: String,
    field: FieldSpec,
    d: usize,
    params: BTreeMap<String, Value>,
    claim: String,
    size: usize,
    points: Vec<Vec<Coord>>,
    checks: Vec<ClaimCheck>,
    verified: bool,
}

impl From<ConstructionOutput> for RawConstruction {
    fn from(c: ConstructionOutput) -> RawConstruction {
        let verified = c.verified();
        RawConstruction {
            name: c.name,
            field: c.set.field().spec().clone(),
            d: c.set.d(),
            params: c.params,
            claim: c.claim,
            size: c.set.len(),
            points: c.set.to_coords(),
            checks: c.checks,
            verified,
        }
    }
}

impl TryFrom<RawConstruction> for ConstructionOutput {
    type Error = Error;

    fn try_from(raw: RawConstruction) -> Result<ConstructionOutput> {
        let field = Field::new(raw.field.p, raw.field.s, Some(&raw.field.modulus))?;
        let space = Space::new(&field, raw.d)?;
        let set = PointSet::from_coords(&space, &raw.points)?;
        if set.len() != raw.size {
            return Err(Error::Malformed(format!("size {} but {} distinct points", raw.size, set.len())));
        }
        Ok(ConstructionOutput { name: raw.name, params: raw.params, claim: raw.claim, set, checks: raw.checks })
    }
}

fn fmt_set(field: &Field, s: impl IntoIterator<Item = Elem>) -> String {
    let v: Vec<String> = s.into_iter().map(|x| field.format(x)).collect();
    format!("{{{}}}", v.join(","))
}

fn field_params(field: &Field) -> BTreeMap<String, Value> {
    let spec = field.spec();
    BTreeMap::from([
        ("p".to_string(), json!(spec.p)),
        ("s".to_string(), json!(spec.s)),
        ("modulus".to_string(), json!(spec.modulus)),
    ])
}

/// All points sum_i t_i basis_i + offset over t in F_q^m.
fn span_points(field: &Field, basis: &[Vec<Elem>], offset: &[Elem]) -> Vec<Vec<Elem>> {
    let mut out = vec![offset.to_vec()];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * field.q());
        for x in &out {
            for t in field.elements() {
                next.push(x.iter().zip(b).map(|(&xi, &bi)| field.add(xi, field.mul(t, bi))).collect());
            }
        }
        out = next;
    }
    out
}

/// E = span(isotropic basis) + A u with A = {0, 1, ..., n-1}, in odd dimension d.
///
/// The first d-1 coordinates carry a totally isotropic subspace of dimension
/// (d-1)/2 orthogonal to u. When that needs a null triple in the last three
/// coordinates, u = (0, ..., -b, a, 0) and ||u|| = -c^2.
pub fn progression_null_set(field: &Field, d: usize, n: usize) -> Result<ConstructionOutput> {
    if d.is_multiple_of(2) {
        return Err(Error::DimensionEven(d));
    }
    if d < 3 {
        return Err(Error::DimensionTooSmall { min: 3, found: d });
    }
    if n as u64 > field.p() {
        return Err(Error::ProgressionTooLong { n, p: field.p() });
    }
    let space = Space::new(field, d)?;
    let progression = arithmetic_progression(field, field.zero(), field.one(), n)?;
    let m = (d - 1) / 2;
    let (basis, u) = if field.minus_one_is_square() || (d - 1).is_multiple_of(4) {
        let basis: Vec<Vec<Elem>> = isotropic_basis(field, d - 1)?.into_iter().map(|mut v| {
            v.push(field.zero());
            v
        }).collect();
        (basis, embed(d, d - 1, &[field.one()]))
    } else {
        let triple = null_triple(field)?;
        let [a, b, _] = triple;
        let mut basis: Vec<Vec<Elem>> = isotropic_basis(field, d - 3)?
            .into_iter()
            .map(|mut v| {
                v.extend([Elem::ZERO; 3]);
                v
            })
            .collect();
        basis.push(embed(d, d - 3, &triple));
        (basis, embed(d, d - 3, &[field.neg(b), a, field.zero()]))
    };
    debug_assert_eq!(basis.len(), m);
    let mut set = PointSet::empty(&space);
    let lattice = span_points(field, &basis, &space.origin());
    for &alpha in &progression {
        let shift = space.scale(alpha, &u);
        for h in &lattice {
            set.insert(&space.add(h, &shift))?;
        }
    }

    let q = field.q();
    let norm_u = field.dot(&u, &u);
    let norm_u_inv = field.inv(norm_u).expect("u is anisotropic");
    let points = set.points();
    let pair_identity = points.iter().all(|x| {
        let ax = field.mul(field.dot(x, &u), norm_u_inv);
        points.iter().all(|y| {
            let ay = field.mul(field.dot(y, &u), norm_u_inv);
            let diff = space.sub(x, y);
            field.dot(&diff, &diff) == field.mul(field.square(field.sub(ax, ay)), norm_u)
        })
    });
    let delta = distance_set(&set)?;
    let expected_size = q.pow(m as u32) * n;
    let mut checks = vec![
        ClaimCheck::new("size", set.len() == expected_size, format!("|E| = {} (q^m n = {expected_size})", set.len())),
        ClaimCheck::new("pair_distances", pair_identity, "||x - y|| = (a - a')^2 ||u|| for every pair"),
        ClaimCheck::new(
            "distance_count",
            delta.len() < 2 * n,
            format!("Delta(E) = {} has {} <= {} elements", fmt_set(field, delta.elements()), delta.len(), 2 * n - 1),
        ),
    ];
    if 2 * n - 1 < q {
        checks.push(ClaimCheck::new("distances_incomplete", !delta.covers_all(), "Delta(E) != F_q"));
    }
    let mut params = field_params(field);
    params.insert("d".into(), json!(d));
    params.insert("n".into(), json!(n));
    Ok(ConstructionOutput {
        name: "progression-null-set".into(),
        params,
        claim: format!("|Delta(E)| <= {} for |E| = q^{m} n", 2 * n - 1),
        set,
        checks,
    })
}

/// E = {t u : t in A, u in C_p} in F_{p^2}^2, where A is the index-`divisor`
/// subgroup of F_{p^2}^* and C_p the unit circle over F_p.
pub fn subgroup_circle_set(p: u64, divisor: u64) -> Result<ConstructionOutput> {
    let field = Field::new(p, 2, None)?;
    if divisor < 2 {
        return Err(Error::DivisorTooSmall);
    }
    if !(p + 1).is_multiple_of(divisor) {
        return Err(Error::NotDivisor { divisor, target: p + 1 });
    }
    let q = field.q() as u64;
    let order = (q - 1) / divisor;
    let subgroup: BTreeSet<Elem> = (0..order).map(|k| field.exp(k * divisor)).collect();
    let space = Space::new(&field, 2)?;
    let prime: Vec<Elem> = field.elements().filter(|&x| field.in_prime_subfield(x)).collect();
    let circle: Vec<[Elem; 2]> = prime
        .iter()
        .flat_map(|&x| prime.iter().map(move |&y| [x, y]))
        .filter(|v| field.dot(v, v) == field.one())
        .collect();
    let mut set = PointSet::empty(&space);
    for &t in &subgroup {
        for u in &circle {
            set.insert(&space.scale(t, u))?;
        }
    }

    let eta = if p % 4 == 1 { 1 } else { -1 };
    let expected = ((p as i64 - eta) as u64 / 2) * order;
    let dots = dot_product_set(&set)?;
    let inside = dots.elements().iter().all(|x| x.is_zero() || subgroup.contains(x));
    let prime_in = prime.iter().filter(|x| !x.is_zero()).all(|x| subgroup.contains(x));
    let checks = vec![
        ClaimCheck::new("prime_subgroup", prime_in, "F_p^* is contained in A"),
        ClaimCheck::new("proper", (subgroup.len() as u64) < q - 1, format!("|A| = {} < q - 1", subgroup.len())),
        ClaimCheck::new("size", set.len() as u64 == expected, format!("|E| = {} ((p -+ 1)/2 (q-1)/s = {expected})", set.len())),
        ClaimCheck::new(
            "dots_in_subgroup",
            inside,
            format!("Pi(E) = {} lies in A u {{0}}", fmt_set(&field, dots.elements())),
        ),
        ClaimCheck::new("dots_incomplete", (dots.len() as u64) < q, format!("|Pi(E)| = {} < {q}", dots.len())),
    ];
    let mut params = field_params(&field);
    params.insert("divisor".into(), json!(divisor));
    Ok(ConstructionOutput {
        name: "subgroup-circle-set".into(),
        params,
        claim: format!("Pi(E) lies in A u {{0}}, |Pi(E)| <= {}", subgroup.len() + 1),
        set,
        checks,
    })
}

fn minus_one_nonsquare(field: &Field) -> Result<()> {
    if field.minus_one_is_square() {
        Err(Error::MinusOneIsSquare)
    } else {
        Ok(())
    }
}

/// From each antipodal pair {z, -z} on the sphere of radius r in F_q^3, the one
/// with the smaller index.
pub fn antipodal_free_sphere_subset(field: &Field, r: Elem) -> Result<PointSet> {
    minus_one_nonsquare(field)?;
    if r.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let space = Space::new(field, 3)?;
    let sphere = sphere_points(&space, r).points;
    let mut z = PointSet::empty(&space);
    for i in sphere.indices() {
        let x = space.point(i);
        let neg: Vec<Elem> = x.iter().map(|&c| field.neg(c)).collect();
        if i < space.index_of(&neg)? {
            z.insert_index(i);
        }
    }
    Ok(z)
}

fn dots_avoid(field: &Field, points: &[Vec<Elem>], bad: Elem) -> bool {
    points.iter().all(|x| points.iter().all(|y| field.dot(x, y) != bad))
}

/// E = Z_2 x H on the sphere of radius r in F_q^d, with H totally isotropic in
/// the last d-3 coordinates.
pub fn sphere_product_counterexample(field: &Field, d: usize, r: Elem) -> Result<ConstructionOutput> {
    minus_one_nonsquare(field)?;
    if d < 6 {
        return Err(Error::DimensionTooSmall { min: 6, found: d });
    }
    let z2 = antipodal_free_sphere_subset(field, r)?;
    let iso = isotropic_basis(field, d - 3)?;
    let m = iso.len();
    let space = Space::new(field, d)?;
    let lattice = span_points(field, &iso, &vec![Elem::ZERO; d - 3]);
    let mut set = PointSet::empty(&space);
    for z in z2.points() {
        for h in &lattice {
            let mut x = z.clone();
            x.extend_from_slice(h);
            set.insert(&x)?;
        }
    }

    let points = set.points();
    let on_sphere = points.iter().all(|x| field.dot(x, x) == r);
    let minus_r = field.neg(r);
    let four_r = field.mul(field.from_int(4), r);
    let delta = distance_set(&set)?;
    let expected = z2.len() * field.q().pow(m as u32);
    let checks = vec![
        ClaimCheck::new("on_sphere", on_sphere, "every point has norm r"),
        ClaimCheck::new("size", set.len() == expected, format!("|E| = {} (|Z_2| q^{m} = {expected})", set.len())),
        ClaimCheck::new("dots_avoid_minus_r", dots_avoid(field, &points, minus_r), "x . y != -r for all x, y"),
        ClaimCheck::new(
            "distance_absent",
            !delta.contains(four_r),
            format!("4r = {} not in Delta(E) = {}", field.format(four_r), fmt_set(field, delta.elements())),
        ),
    ];
    let mut params = field_params(field);
    params.insert("d".into(), json!(d));
    params.insert("r".into(), json!(field.format(r)));
    params.insert("isotropic_dimension".into(), json!(m));
    Ok(ConstructionOutput {
        name: "sphere-product".into(),
        params,
        claim: format!("{} is not a distance of E on S^{}", field.format(four_r), d - 1),
        set,
        checks,
    })
}

/// Distinct Gram matrices (upper triangle) of triples, with how many triples give each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramClass {
    pub gram: [String; 6],
    pub triples: u64,
}

/// What the complement of u inside u^perp supports, for u = (a, b, c, 0, 0).
///
/// u^perp = W + <u> with W spanned by (c, 0, -a, 0, 0), e_4, e_5; Gram
/// matrices of triples in u^perp depend only on their W components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct D5Census {
    pub q: u64,
    pub null_triple: [String; 3],
    /// Gram matrix of the W basis, row-major.
    pub complement_gram: Vec<String>,
    pub complement_discriminant_is_square: bool,
    /// Norm-1 vectors of W.
    pub unit_vectors: u64,
    /// Ordered pairs of orthogonal norm-1 vectors of W.
    pub orthonormal_pairs: u64,
    /// Ordered triples of W with Gram matrix the identity.
    pub orthonormal_triples: u64,
    /// Norm patterns (|f1|, |f2|, |f3|), all nonzero, of pairwise orthogonal triples of W.
    pub diagonal_patterns: Vec<[String; 3]>,
    /// Every Gram matrix of a triple of W, present when q^9 is within the cap.
    pub gram_census: Option<Vec<GramClass>>,
    pub gram_census_note: String,
}

fn sym_key(g: [Elem; 6]) -> [u32; 6] {
    g.map(|e| e.index() as u32)
}

pub fn d5_census(field: &Field, cap: u128) -> Result<D5Census> {
    minus_one_nonsquare(field)?;
    let [a, b, c] = null_triple(field)?;
    let basis: Vec<Vec<Elem>> = vec![
        vec![c, field.zero(), field.neg(a), field.zero(), field.zero()],
        embed(5, 3, &[field.one()]),
        embed(5, 4, &[field.one()]),
    ];
    let w: Vec<Vec<Elem>> = span_points(field, &basis, &[Elem::ZERO; 5]);
    let gram: Vec<Elem> = basis.iter().flat_map(|x| basis.iter().map(|y| field.dot(x, y))).collect();
    let det = {
        let g = |i: usize, j: usize| gram[3 * i + j];
        let t1 = field.mul(g(0, 0), field.sub(field.mul(g(1, 1), g(2, 2)), field.mul(g(1, 2), g(2, 1))));
        let t2 = field.mul(g(0, 1), field.sub(field.mul(g(1, 0), g(2, 2)), field.mul(g(1, 2), g(2, 0))));
        let t3 = field.mul(g(0, 2), field.sub(field.mul(g(1, 0), g(2, 1)), field.mul(g(1, 1), g(2, 0))));
        field.add(field.sub(t1, t2), t3)
    };
    let one = field.one();
    let norms: Vec<Elem> = w.iter().map(|x| field.dot(x, x)).collect();
    let units: Vec<usize> = (0..w.len()).filter(|&i| norms[i] == one).collect();
    let mut orthonormal_pairs = 0u64;
    let mut orthonormal_triples = 0u64;
    for &i in &units {
        for &j in &units {
            if field.dot(&w[i], &w[j]).is_zero() {
                orthonormal_pairs += 1;
                for &k in &units {
                    if field.dot(&w[i], &w[k]).is_zero() && field.dot(&w[j], &w[k]).is_zero() {
                        orthonormal_triples += 1;
                    }
                }
            }
        }
    }
    let anisotropic: Vec<usize> = (0..w.len()).filter(|&i| !norms[i].is_zero()).collect();
    let mut patterns = BTreeSet::new();
    for &i in &anisotropic {
        for &j in &anisotropic {
            if !field.dot(&w[i], &w[j]).is_zero() {
                continue;
            }
            for &k in &anisotropic {
                if field.dot(&w[i], &w[k]).is_zero() && field.dot(&w[j], &w[k]).is_zero() {
                    patterns.insert([norms[i], norms[j], norms[k]]);
                }
            }
        }
    }
    let norm_of: HashMap<&[Elem], Elem> = w.iter().map(|x| (x.as_slice(), field.dot(x, x))).collect();
    let total = (w.len() as u128).pow(3);
    let (gram_census, gram_census_note) = if total <= cap {
        let mut classes: HashMap<[u32; 6], ([Elem; 6], u64)> = HashMap::new();
        for x in &w {
            for y in &w {
                let xy = field.dot(x, y);
                for z in &w {
                    let g = [norm_of[x.as_slice()], xy, field.dot(x, z), norm_of[y.as_slice()], field.dot(y, z), norm_of[z.as_slice()]];
                    classes.entry(sym_key(g)).or_insert((g, 0)).1 += 1;
                }
            }
        }
        let mut list: Vec<_> = classes.into_iter().collect();
        list.sort_by_key(|(k, _)| *k);
        let list: Vec<GramClass> = list
            .into_iter()
            .map(|(_, (g, n))| GramClass { gram: g.map(|e| field.format(e)), triples: n })
            .collect();
        let note = format!("{} distinct Gram matrices over {total} triples", list.len());
        (Some(list), note)
    } else {
        (None, format!("full census of {total} triples exceeds the cap {cap}"))
    };
    Ok(D5Census {
        q: field.q() as u64,
        null_triple: [a, b, c].map(|e| field.format(e)),
        complement_gram: gram.iter().map(|&e| field.format(e)).collect(),
        complement_discriminant_is_square: field.sqrt(det).is_some(),
        unit_vectors: units.len() as u64,
        orthonormal_pairs,
        orthonormal_triples,
        diagonal_patterns: patterns.into_iter().map(|p| p.map(|e| field.format(e))).collect(),
        gram_census,
        gram_census_note,
    })
}

/// E = {t u + z_1 f_1 + z_2 f_2 + z_3 f_3 : t in F_q, z in Z_2} on S^4 for a
/// null u and an orthonormal triple f in u^perp. When no such triple exists the
/// error carries the census as JSON.
pub fn sphere_counterexample_d5(field: &Field, cap: u128) -> Result<ConstructionOutput> {
    minus_one_nonsquare(field)?;
    let [a, b, c] = null_triple(field)?;
    let u = vec![a, b, c, field.zero(), field.zero()];
    let basis: Vec<Vec<Elem>> = vec![
        vec![c, field.zero(), field.neg(a), field.zero(), field.zero()],
        embed(5, 3, &[field.one()]),
        embed(5, 4, &[field.one()]),
    ];
    let w = span_points(field, &basis, &[Elem::ZERO; 5]);
    let one = field.one();
    let units: Vec<&Vec<Elem>> = w.iter().filter(|x| field.dot(x, x) == one).collect();
    let frame = units.iter().find_map(|f1| {
        units.iter().filter(|f| field.dot(f1, f).is_zero()).find_map(|f2| {
            units
                .iter()
                .find(|f| field.dot(f1, f).is_zero() && field.dot(f2, f).is_zero())
                .map(|f3| [(*f1).clone(), (*f2).clone(), (*f3).clone()])
        })
    });
    let Some(frame) = frame else {
        let census = d5_census(field, cap)?;
        let body = serde_json::to_string(&census).map_err(|e| Error::Malformed(e.to_string()))?;
        return Err(Error::SearchExhausted(body));
    };

    let space = Space::new(field, 5)?;
    let z2 = antipodal_free_sphere_subset(field, one)?;
    let mut set = PointSet::empty(&space);
    for z in z2.points() {
        let lz = (0..3).fold(space.origin(), |acc, i| space.add(&acc, &space.scale(z[i], &frame[i])));
        for t in field.elements() {
            set.insert(&space.add(&space.scale(t, &u), &lz))?;
        }
    }
    let points = set.points();
    let minus_one = field.neg(one);
    let four = field.from_int(4);
    let delta = distance_set(&set)?;
    let expected = field.q() * z2.len();
    let checks = vec![
        ClaimCheck::new("on_sphere", points.iter().all(|x| field.dot(x, x) == one), "every point has norm 1"),
        ClaimCheck::new("size", set.len() == expected, format!("|E| = {} (q |Z_2| = {expected})", set.len())),
        ClaimCheck::new("dots_avoid_minus_one", dots_avoid(field, &points, minus_one), "x . y != -1"),
        ClaimCheck::new("distance_absent", !delta.contains(four), "4 not in Delta(E)"),
    ];
    let mut params = field_params(field);
    params.insert("d".into(), json!(5));
    Ok(ConstructionOutput {
        name: "sphere-d5".into(),
        params,
        claim: "4 is not a distance of E on S^4".into(),
        set,
        checks,
    })
}

/// E = {(t, i t) : t in F_q} with i^2 = -1.
pub fn isotropic_line_set(field: &Field) -> Result<ConstructionOutput> {
    let i = field.sqrt(field.neg(field.one())).ok_or(Error::MinusOneNotSquare)?;
    let space = Space::new(field, 2)?;
    let set = PointSet::from_points(&space, field.elements().map(|t| vec![t, field.mul(i, t)]))?;
    let delta = distance_set(&set)?;
    let dots = dot_product_set(&set)?;
    let q = field.q();
    let checks = vec![
        ClaimCheck::new("size", set.len() == q, format!("|E| = {}", set.len())),
        ClaimCheck::new("single_distance", delta.elements() == vec![field.zero()], "Delta(E) = {0}"),
        ClaimCheck::new("single_dot", dots.elements() == vec![field.zero()], "Pi(E) = {0}"),
    ];
    let mut params = field_params(field);
    params.insert("i".into(), json!(field.format(i)));
    Ok(ConstructionOutput { name: "isotropic-line-set".into(), params, claim: "|Delta(E)| = 1".into(), set, checks })
}

/// A.A, A+A and dA^2 with the two dA^2 statements.
#[derive(Debug, Clone)]
pub struct PointwiseSets {
    pub products: BTreeSet<Elem>,
    pub sums: BTreeSet<Elem>,
    pub d_a_squared: BTreeSet<Elem>,
    /// |A|^{2d} > q^{d+1}
    pub coverage_hypothesis: bool,
    /// Present when the hypothesis holds: no element of F_q^* is missing from dA^2.
    pub coverage: Option<BoundReport>,
    /// With A' = A \ {0}: q |A'|^{2d-1} <= |dA^2| (|A'|^{2d-1} + q^d).
    pub size_bound: BoundReport,
}

pub fn pointwise_sets(field: &Field, a: &[Elem], d: usize) -> Result<PointwiseSets> {
    let members: Vec<Elem> = a.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if members.is_empty() {
        return Err(Error::EmptySet);
    }
    if d == 0 {
        return Err(Error::ZeroParameter);
    }
    let products: BTreeSet<Elem> = members.iter().flat_map(|&x| members.iter().map(move |&y| field.mul(x, y))).collect();
    let sums: BTreeSet<Elem> = members.iter().flat_map(|&x| members.iter().map(move |&y| field.add(x, y))).collect();
    let d_a_squared = sum_of_products(field, &members, d);
    let overflow = || Error::ConfigInvalid(format!("|A| = {} and d = {d} overflow exact arithmetic", members.len()));
    let q = field.q() as i128;
    let n = members.len() as i128;
    let e = d as u32;
    let lhs_cov = n.checked_pow(2 * e).ok_or_else(overflow)?;
    let rhs_cov = q.checked_pow(e + 1).ok_or_else(overflow)?;
    let coverage_hypothesis = lhs_cov > rhs_cov;
    let coverage = coverage_hypothesis.then(|| {
        let missing = field.nonzero_elements().filter(|t| !d_a_squared.contains(t)).count();
        BoundReport::exact("sum_product_coverage", field, d, members.len(), missing as i128, 0)
    });
    let nz = members.iter().filter(|x| !x.is_zero()).count() as i128;
    let pow = nz.checked_pow(2 * e - 1).ok_or_else(overflow)?;
    let qd = q.checked_pow(e).ok_or_else(overflow)?;
    let size_bound = BoundReport::exact(
        "sum_product_size",
        field,
        d,
        members.len(),
        q.checked_mul(pow).ok_or_else(overflow)?,
        (d_a_squared.len() as i128).checked_mul(pow + qd).ok_or_else(overflow)?,
    );
    Ok(PointwiseSets { products, sums, d_a_squared, coverage_hypothesis, coverage, size_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f(p: u64, s: u32) -> Field {
        make_field(p, s, None).unwrap()
    }

    fn ints(field: &Field, v: &[i64]) -> Vec<Elem> {
        v.iter().map(|&x| field.from_int(x)).collect()
    }

    #[test]
    fn null_basis_examples() {
        let f5 = f(5, 1);
        let b = null_basis(&f5, 4).unwrap();
        assert_eq!(b.vectors, vec![ints(&f5, &[1, 2, 0, 0]), ints(&f5, &[0, 0, 1, 2])]);
        let f3 = f(3, 1);
        let b = null_basis(&f3, 4).unwrap();
        assert_eq!(b.vectors, vec![ints(&f3, &[1, 1, 1, 0]), ints(&f3, &[0, 2, 1, 1])]);
        assert!(b.verify(&f3).pass());
        assert_eq!(null_basis(&f3, 2).unwrap_err(), Error::NoNullVector(2));
        assert_eq!(null_basis(&f3, 5).unwrap_err(), Error::DimensionOdd(5));
    }

    #[test]
    fn half_dimensional_isotropic_space_missing_in_f3_6() {
        let f3 = f(3, 1);
        match null_basis(&f3, 6).unwrap_err() {
            Error::IsotropicDimensionUnavailable { requested, available, .. } => {
                assert_eq!((requested, available), (3, 2));
            }
            e => panic!("{e}"),
        }
        // brute force: no 3 independent, pairwise orthogonal null vectors in F_3^6
        let sp = Space::new(&f3, 6).unwrap();
        let nulls: Vec<Vec<Elem>> = sp.points().skip(1).filter(|x| f3.dot(x, x).is_zero()).collect();
        let mut best = 0;
        for (i, x) in nulls.iter().enumerate() {
            for (j, y) in nulls.iter().enumerate().skip(i + 1) {
                if !f3.dot(x, y).is_zero() || rank(&f3, &[x.clone(), y.clone()]) < 2 {
                    continue;
                }
                best = best.max(2);
                for z in &nulls[j + 1..] {
                    if f3.dot(x, z).is_zero()
                        && f3.dot(y, z).is_zero()
                        && rank(&f3, &[x.clone(), y.clone(), z.clone()]) == 3
                    {
                        best = 3;
                    }
                }
            }
        }
        assert_eq!(best, 2);
    }

    #[test]
    fn isotropic_basis_reaches_index() {
        for (p, s) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1)] {
            let field = f(p, s);
            for n in 1..12 {
                let basis = isotropic_basis(&field, n).unwrap();
                assert_eq!(basis.len(), isotropic_index(&field, n));
                let nb = NullBasis { dimension: n, vectors: basis };
                assert!(nb.vectors.is_empty() || nb.verify(&field).pass());
            }
        }
    }

    #[test]
    fn arithmetic_progressions() {
        let f7 = f(7, 1);
        let ap = arithmetic_progression(&f7, f7.zero(), f7.one(), 3).unwrap();
        assert_eq!(ap, ints(&f7, &[0, 1, 2]));
        assert_eq!(difference_set(&f7, &ap).len(), 5);
        assert_eq!(difference_set(&f7, &ap[..1]).len(), 1);
        let f9 = f(3, 2);
        let x = f9.from_coeffs(&[0, 1]).unwrap();
        assert!(arithmetic_progression(&f9, f9.zero(), x, 3).is_ok());
        assert_eq!(arithmetic_progression(&f9, f9.zero(), x, 4).unwrap_err(), Error::CollisionDetected);
    }

    #[test]
    fn progression_null_set_examples() {
        let c = progression_null_set(&f(5, 1), 3, 3).unwrap();
        assert!(c.verified(), "{:?}", c.checks);
        assert_eq!(c.set.len(), 15);
        assert_eq!(distance_set(&c.set).unwrap().elements(), ints(&f(5, 1), &[0, 1, 4]));
        let c = progression_null_set(&f(3, 1), 5, 1).unwrap();
        assert!(c.verified());
        assert_eq!(distance_set(&c.set).unwrap().len(), 1);
        for (p, d, n) in [(3, 3, 2), (7, 3, 3), (7, 5, 2), (3, 7, 2), (5, 5, 2)] {
            let c = progression_null_set(&f(p, 1), d, n).unwrap();
            assert!(c.verified(), "p={p} d={d} {:?}", c.checks);
        }
        assert_eq!(progression_null_set(&f(5, 1), 4, 2).unwrap_err(), Error::DimensionEven(4));
        assert_eq!(progression_null_set(&f(5, 1), 3, 6).unwrap_err(), Error::ProgressionTooLong { n: 6, p: 5 });
    }

    #[test]
    fn subgroup_circle_examples() {
        let c = subgroup_circle_set(3, 2).unwrap();
        assert!(c.verified(), "{:?}", c.checks);
        assert_eq!(c.set.len(), 8);
        assert!(dot_product_set(&c.set).unwrap().len() <= 5);
        for (p, s) in [(5, 2), (5, 3), (7, 2), (7, 4), (11, 3)] {
            assert!(subgroup_circle_set(p, s).unwrap().verified());
        }
        assert_eq!(subgroup_circle_set(3, 1).unwrap_err(), Error::DivisorTooSmall);
        assert_eq!(subgroup_circle_set(5, 4).unwrap_err(), Error::NotDivisor { divisor: 4, target: 6 });
    }

    #[test]
    fn antipodal_free_subsets() {
        for p in [3, 7] {
            let field = f(p, 1);
            let z = antipodal_free_sphere_subset(&field, field.one()).unwrap();
            let sp = z.space().clone();
            assert_eq!(z.len() * 2, sphere_points(&sp, field.one()).cardinality());
            assert!(dots_avoid(&field, &z.points(), field.neg(field.one())));
        }
        assert_eq!(antipodal_free_sphere_subset(&f(5, 1), f(5, 1).one()).unwrap_err(), Error::MinusOneIsSquare);
    }

    #[test]
    fn sphere_products() {
        let f3 = f(3, 1);
        let c7 = sphere_product_counterexample(&f3, 7, f3.one()).unwrap();
        assert!(c7.verified(), "{:?}", c7.checks);
        assert_eq!(c7.set.len(), 27);
        let c6 = sphere_product_counterexample(&f3, 6, f3.one()).unwrap();
        assert!(c6.verified(), "{:?}", c6.checks);
        assert_eq!(c6.set.len(), 9);
        let f7 = f(7, 1);
        assert!(sphere_product_counterexample(&f7, 6, f7.one()).unwrap().verified());
        assert_eq!(sphere_product_counterexample(&f3, 5, f3.one()).unwrap_err(), Error::DimensionTooSmall { min: 6, found: 5 });
    }

    #[test]
    fn sphere_product_on_nonsquare_radius_is_rechecked() {
        let f3 = f(3, 1);
        let c = sphere_product_counterexample(&f3, 7, f3.from_int(2)).unwrap();
        assert!(!c.checks.iter().find(|k| k.name == "dots_avoid_minus_r").unwrap().pass);
        assert!(!c.verified());
    }

    #[test]
    fn d5_search_exhausts_with_census() {
        let f3 = f(3, 1);
        match sphere_counterexample_d5(&f3, DEFAULT_CENSUS_CAP).unwrap_err() {
            Error::SearchExhausted(body) => {
                let census: D5Census = serde_json::from_str(&body).unwrap();
                assert_eq!(census.orthonormal_triples, 0);
                assert!(!census.complement_discriminant_is_square);
                let g = census.gram_census.unwrap();
                assert_eq!(g.iter().map(|c| c.triples).sum::<u64>(), 27u64.pow(3));
                let identity = ["1", "0", "0", "1", "0", "1"].map(String::from);
                assert!(g.iter().all(|c| c.gram != identity));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn isotropic_line() {
        let c = isotropic_line_set(&f(5, 1)).unwrap();
        assert!(c.verified());
        assert_eq!(c.set.len(), 5);
        assert_eq!(isotropic_line_set(&f(3, 1)).unwrap_err(), Error::MinusOneNotSquare);
    }

    #[test]
    fn pointwise_set_examples() {
        let f7 = f(7, 1);
        let s = pointwise_sets(&f7, &[f7.one()], 3).unwrap();
        assert_eq!(s.d_a_squared.into_iter().collect::<Vec<_>>(), vec![f7.from_int(3)]);
        let all: Vec<Elem> = f7.elements().collect();
        let s = pointwise_sets(&f7, &all, 2).unwrap();
        assert_eq!(s.d_a_squared.len(), 7);
        assert!(s.coverage.unwrap().pass && s.size_bound.pass);
        assert_eq!(pointwise_sets(&f7, &[], 2).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn sum_product_statements_hold_exhaustively() {
        for (p, s, d) in [(3, 2, 2), (5, 1, 2), (7, 1, 2), (7, 1, 3), (5, 1, 3)] {
            let field = f(p, s);
            let el: Vec<Elem> = field.elements().collect();
            for mask in 1u32..(1 << el.len()) {
                let a: Vec<Elem> = el.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
                let r = pointwise_sets(&field, &a, d).unwrap();
                assert!(r.size_bound.pass, "q={} A={a:?} {}", field.q(), r.size_bound);
                if let Some(c) = r.coverage {
                    assert!(c.pass);
                }
            }
        }
    }

    #[test]
    fn construction_output_roundtrip() {
        let c = subgroup_circle_set(3, 2).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: ConstructionOutput = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let c = isotropic_line_set(&f(5, 1)).unwrap();
        let back: ConstructionOutput = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn constructions_are_deterministic() {
        let f3 = f(3, 1);
        assert_eq!(
            sphere_product_counterexample(&f3, 7, f3.one()).unwrap(),
            sphere_product_counterexample(&f3, 7, f3.one()).unwrap()
        );
    }
}
