//! Dot-product incidence counts of a random set, with the pointwise and L2 bounds.

use std::fmt::Write;

use ffgeom::harness::random_point_set;
use ffgeom::incidence::{nu_profile, verify_l2_bound, verify_pointwise_bound};
use ffgeom::{Field, Result, Space};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f = Field::prime(5)?;
    let space = Space::new(&f, 3)?;
    let set = random_point_set(&space, 40, 7)?;

    let profile = nu_profile(&set)?;
    for t in f.elements() {
        let _ = writeln!(out, "nu({}) = {:>4}  R = {}", f.format(t), profile.nu_at(t), profile.remainder(t));
    }
    let pw = verify_pointwise_bound(&set)?;
    let _ = writeln!(out, "pointwise at t={}: {} <= {} ({})", f.format(pw.worst_t), pw.report.lhs, pw.report.rhs, pw.all_pass);
    let l2 = verify_l2_bound(&set)?;
    let _ = writeln!(
        out,
        "L2: {} <= {:.1}  pass={}  |E| N_orth = {}  identity error {:.1e}",
        l2.sum_nu_squared,
        l2.report.rhs.as_f64(),
        l2.report.pass,
        set.len() as u128 * l2.n_orth,
        l2.identity_relative_error
    );
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
