//! Dot-product and distance sets of large random sets, against the coverage thresholds.

use std::fmt::Write;

use ffgeom::harness::random_point_set;
use ffgeom::incidence::coverage_report;
use ffgeom::{Field, Result, Space};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f = Field::prime(3)?;
    let space = Space::new(&f, 4)?;
    // q^{d+1} = 243, so 16 points clear the dot threshold and 63 the distance one.
    for size in [10, 16, 40, 63, 81] {
        let set = random_point_set(&space, size, 11)?;
        let c = coverage_report(&set)?;
        let _ = writeln!(
            out,
            "|E|={size:>3}  dots {}/{} (hyp {})  distances {}/{} (hyp {})  CS lower {:.2}",
            c.dot_products.len(),
            f.q(),
            c.dot_hypothesis,
            c.distances.len(),
            f.q(),
            c.distance_hypothesis,
            *c.cauchy_schwarz_lower.numer() as f64 / *c.cauchy_schwarz_lower.denom() as f64
        );
        for r in &c.reports {
            let _ = writeln!(out, "    {r}");
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
