//! Gauss sum constants and the Weil bound for Kloosterman sums.

use std::fmt::Write;

use ffgeom::spectral::{gauss_constant, gauss_sum, kloosterman_sum};
use ffgeom::{Field, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    for (p, s) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)] {
        let f = Field::new(p, s, None)?;
        let g = gauss_sum(&f, f.one())?;
        let weil = 2.0 * (f.q() as f64).sqrt();
        let worst = f
            .nonzero_elements()
            .map(|a| kloosterman_sum(&f, a).norm())
            .fold(0.0, f64::max);
        let _ = writeln!(
            out,
            "q={:>2}  G_1 = {:+.3}{:+.3}i  K = {:?}  max|Kl| = {:.3} <= {:.3}",
            f.q(),
            g.re,
            g.im,
            gauss_constant(&f)?,
            worst,
            weil
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
