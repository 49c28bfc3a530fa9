//! Totally isotropic subspaces: which dimensions exist, and when a null basis is unavailable.

use std::fmt::Write;

use ffgeom::constructions::{isotropic_basis, isotropic_index, null_basis, null_triple};
use ffgeom::{Field, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    for p in [3, 5, 7] {
        let f = Field::prime(p)?;
        let triple = null_triple(&f).ok().map(|t| t.map(|x| f.format(x)));
        let _ = writeln!(out, "q={p} -1 square: {} null triple {:?}", f.minus_one_is_square(), triple);
        for n in 3..=7 {
            let basis = isotropic_basis(&f, n)?;
            let _ = writeln!(out, "  F_{p}^{n}: Witt index {} basis {}", isotropic_index(&f, n), basis.len());
        }
        // Ambient dimension D; the basis has D/2 vectors when it exists.
        for dim in [2, 4, 6, 8] {
            match null_basis(&f, dim) {
                Ok(b) => {
                    let _ = writeln!(out, "  null basis in F_{p}^{dim}: {} vectors pass={}", b.vectors.len(), b.verify(&f).pass());
                }
                Err(e) => {
                    let _ = writeln!(out, "  null basis in F_{p}^{dim}: {e}");
                }
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
