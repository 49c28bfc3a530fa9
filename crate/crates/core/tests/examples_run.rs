// Each example is compiled in as a module and its output spot-checked.

#[path = "../examples/constructions.rs"]
mod constructions;
#[path = "../examples/dot_distance_coverage.rs"]
mod dot_distance_coverage;
#[path = "../examples/field_arithmetic.rs"]
mod field_arithmetic;
#[path = "../examples/fourier_sphere.rs"]
mod fourier_sphere;
#[path = "../examples/gauss_kloosterman.rs"]
mod gauss_kloosterman;
#[path = "../examples/incidence_bounds.rs"]
mod incidence_bounds;
#[path = "../examples/null_bases.rs"]
mod null_bases;
#[path = "../examples/sphere_d5_census.rs"]
mod sphere_d5_census;
#[path = "../examples/sphere_uniformity.rs"]
mod sphere_uniformity;
#[path = "../examples/sum_product.rs"]
mod sum_product;
#[path = "../examples/sweep_report.rs"]
mod sweep_report;

#[test]
fn field_arithmetic_example() {
    let out = field_arithmetic::run().unwrap();
    assert!(out.contains("x^2 = [2, 0], eta(-1) = 1"));
    assert_eq!(out.lines().filter(|l| l.contains("log")).count(), 8);
}

#[test]
fn fourier_sphere_example() {
    let out = fourier_sphere::run().unwrap();
    assert!(out.contains("Negated"));
    assert!(out.contains("|S_2| = 42"));
}

#[test]
fn gauss_kloosterman_example() {
    let out = gauss_kloosterman::run().unwrap();
    assert!(out.contains("K = MinusI"));
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn incidence_bounds_example() {
    let out = incidence_bounds::run().unwrap();
    assert!(out.contains("(true)"));
    assert!(out.contains("pass=true"));
}

#[test]
fn coverage_example() {
    let out = dot_distance_coverage::run().unwrap();
    assert!(!out.contains("FAIL"));
    assert!(out.contains("distance_coverage"));
}

#[test]
fn sphere_uniformity_example() {
    let out = sphere_uniformity::run().unwrap();
    assert!(out.contains("C=1.333"));
    // Only the singleton may fail, and it is flagged as outside the theorem.
    for line in out.lines().filter(|l| l.contains("FAIL")) {
        assert!(line.contains("applies=false"), "{line}");
    }
}

#[test]
fn null_bases_example() {
    let out = null_bases::run().unwrap();
    assert_eq!(out.matches("largest available: 2").count(), 2);
}

#[test]
fn constructions_example() {
    let out = constructions::run().unwrap();
    assert_eq!(out.matches("verified true").count(), 4);
    assert!(out.contains("json round trip: true"));
}

#[test]
fn sphere_d5_census_example() {
    let out = sphere_d5_census::run().unwrap();
    assert!(out.contains("orthonormal triples 0"));
    assert!(out.contains("search exhausted"));
}

#[test]
fn sum_product_example() {
    let out = sum_product::run().unwrap();
    assert_eq!(out.matches("PASS sum_product_size").count(), 4);
}

#[test]
fn sweep_report_example() {
    let out = sweep_report::run().unwrap();
    assert!(out.contains("0 failed, exit code 0"));
    assert!(out.contains("bound,q,s,d,setsize"));
}
