//! Hyperplane sections of sphere subsets and the pair-similarity check on subsets of F_q^*.

use std::fmt::Write;

use ffgeom::constructions::antipodal_free_sphere_subset;
use ffgeom::harness::random_subset;
use ffgeom::incidence::{pair_similarity_check, sphere_uniformity_check};
use ffgeom::{Field, Result};

pub fn run() -> Result<String> {
    let mut out = String::new();
    for p in [7, 11] {
        let f = Field::prime(p)?;
        let set = antipodal_free_sphere_subset(&f, f.one())?;
        let u = sphere_uniformity_check(&set)?;
        let _ = writeln!(
            out,
            "q={p} |E|={} max section {} C={:.3} |Delta|/q={:.3} implied dot lower {:.2}",
            set.len(),
            u.max_section,
            u.c_measured,
            u.distance_ratio,
            u.implied_dot_lower
        );
    }

    let f = Field::prime(13)?;
    for (size, seed) in [(1, 0), (3, 1), (6, 2)] {
        let a: Vec<_> = random_subset(&f, size + 1, seed)?.into_iter().filter(|x| !x.is_zero()).take(size).collect();
        let ps = pair_similarity_check(&f, &a)?;
        let _ = writeln!(
            out,
            "A={:?} |2A^2|={} C_uni={:.2} C_size={:.2} applies={} {}",
            a.iter().map(|&x| f.format(x)).collect::<Vec<_>>(),
            ps.two_a_squared,
            ps.c_uni,
            ps.c_size,
            ps.theorem_applies,
            ps.report
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
