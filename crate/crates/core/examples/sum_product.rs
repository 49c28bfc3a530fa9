//! Products, sums and dA^2 for subsets of F_q, with the size and coverage statements.

use std::fmt::Write;

use ffgeom::constructions::{arithmetic_progression, pointwise_sets};
use ffgeom::harness::random_subset;
use ffgeom::{Field, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f = Field::prime(31)?;
    let ap = arithmetic_progression(&f, f.one(), f.from_int(2), 6)?;
    let random = random_subset(&f, 6, 3)?;
    for (label, a) in [("progression", ap), ("random", random)] {
        for d in [2, 3] {
            let s = pointwise_sets(&f, &a, d)?;
            let _ = writeln!(
                out,
                "{label:<11} d={d} |A.A|={:>2} |A+A|={:>2} |dA^2|={:>2} coverage hyp {}  {}",
                s.products.len(),
                s.sums.len(),
                s.d_a_squared.len(),
                s.coverage_hypothesis,
                s.size_bound
            );
            if let Some(c) = &s.coverage {
                let _ = writeln!(out, "    {c}");
            }
        }
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
