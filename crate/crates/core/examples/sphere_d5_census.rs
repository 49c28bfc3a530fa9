//! The five-dimensional sphere search and the census explaining why it comes up empty.

use std::fmt::Write;

use ffgeom::constructions::{d5_census, sphere_counterexample_d5};
use ffgeom::{Error, Field, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f = Field::prime(3)?;
    let census = d5_census(&f, 100_000_000)?;
    let _ = writeln!(
        out,
        "q=3 null triple {:?}, complement discriminant square: {}",
        census.null_triple, census.complement_discriminant_is_square
    );
    let _ = writeln!(
        out,
        "unit vectors {}  orthonormal pairs {}  orthonormal triples {}",
        census.unit_vectors, census.orthonormal_pairs, census.orthonormal_triples
    );
    let _ = writeln!(out, "diagonal norm patterns: {:?}", census.diagonal_patterns);
    if let Some(g) = &census.gram_census {
        let _ = writeln!(out, "{} distinct Gram matrices ({})", g.len(), census.gram_census_note);
    }
    match sphere_counterexample_d5(&f, 100_000_000) {
        Ok(c) => {
            let _ = writeln!(out, "found |E| = {}", c.set.len());
        }
        Err(Error::SearchExhausted(_)) => {
            let _ = writeln!(out, "search exhausted");
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
