//! The explicit constructions, each re-checked after it is built.

use std::fmt::Write;

use ffgeom::constructions::{
    isotropic_line_set, progression_null_set, sphere_product_counterexample, subgroup_circle_set, ConstructionOutput,
};
use ffgeom::{Field, Result};

fn describe(out: &mut String, c: &ConstructionOutput) {
    let _ = writeln!(out, "{}: |E| = {}, claim {:?}, verified {}", c.name, c.set.len(), c.claim, c.verified());
    for check in &c.checks {
        let _ = writeln!(out, "    [{}] {} {}", if check.pass { "ok" } else { "!!" }, check.name, check.detail);
    }
}

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f5 = Field::prime(5)?;
    let f3 = Field::prime(3)?;
    describe(&mut out, &progression_null_set(&f5, 3, 4)?);
    describe(&mut out, &subgroup_circle_set(5, 3)?);
    describe(&mut out, &sphere_product_counterexample(&f3, 6, f3.one())?);
    describe(&mut out, &isotropic_line_set(&f5)?);

    // Serialized output re-reads to the same construction.
    let c = isotropic_line_set(&f5)?;
    let json = serde_json::to_string(&c).expect("construction serializes");
    let back: ConstructionOutput = serde_json::from_str(&json).expect("construction parses");
    let _ = writeln!(out, "json round trip: {}", back == c);
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
