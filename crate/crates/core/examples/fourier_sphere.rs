//! Fourier transform of a sphere: separable DFT vs the closed form.

use std::fmt::Write;

use ffgeom::geometry::sphere_points;
use ffgeom::spectral::{cosine_reduction, transform_set, SphereTransform};
use ffgeom::{Field, Result, Space};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f = Field::prime(7)?;
    let space = Space::new(&f, 3)?;
    let r = f.from_int(2);

    let sphere = sphere_points(&space, r);
    let table = transform_set(&sphere.points);
    let closed = SphereTransform::new(&space, r)?;
    let predicted = closed.eval_all();
    let err = table
        .values()
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let _ = writeln!(out, "|S_2| = {} in F_7^3, constant {:?}", sphere.cardinality(), closed.constant());
    let _ = writeln!(out, "max |DFT - closed form| = {err:.2e}");

    // The two-dimensional cosine form, printed factor against the corrected one.
    let plane = Field::prime(11)?;
    for (rv, kv) in [(1, 4), (2, 2), (3, 1), (2, 1)] {
        let c = cosine_reduction(&plane, plane.from_int(rv), plane.from_int(kv))?;
        let _ = writeln!(
            out,
            "q=11 r={rv} |k|={kv}: direct {:.4}  printed {:.4}  eta(r)={:+}  {:?}",
            c.direct, c.printed, c.eta_r, c.relation
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
