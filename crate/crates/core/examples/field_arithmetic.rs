//! Arithmetic in F_9 = F_3[x]/(x^2 + 1): tables, characters and square roots.

use std::fmt::Write;

use ffgeom::{field_arithmetic, ArithOp, Field, Result, Scalar};

pub fn run() -> Result<String> {
    let mut out = String::new();
    let f = Field::new(3, 2, None)?;
    let _ = writeln!(out, "F_{} modulus {:?}", f.q(), f.spec().modulus);

    let x = Scalar::from_coeffs(&f, &[0, 1])?;
    let y = Scalar::from_coeffs(&f, &[2, 1])?;
    for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div] {
        let z = field_arithmetic(&x, Some(&y), op)?;
        let _ = writeln!(out, "{:?}: {:?} . {:?} = {:?}", op, x.coeffs(), y.coeffs(), z.coeffs());
    }
    // x^2 = -1 in this field.
    let minus_one = x.pow(2)?;
    let _ = writeln!(out, "x^2 = {:?}, eta(-1) = {}", minus_one.coeffs(), minus_one.eta());

    let g = f.primitive_element();
    let _ = writeln!(out, "primitive element {} of order {:?}", f.format(g), f.order(g));
    for a in f.nonzero_elements() {
        let root = f.sqrt(a).map(|r| f.format(r)).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>6}  log {:>2}  tr {}  eta {:>2}  sqrt {}",
            f.format(a),
            f.log(a).unwrap_or(0),
            f.format(f.trace(a)),
            f.eta(a),
            root
        );
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
