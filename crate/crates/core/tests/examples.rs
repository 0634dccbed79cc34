mod padic_arithmetic {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/padic_arithmetic.rs"));
}

#[test]
fn padic_arithmetic_runs() {
    padic_arithmetic::run_example().expect("padic_arithmetic example should run");
}

mod howell_form {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/howell_form.rs"));
}

#[test]
fn howell_form_runs() {
    howell_form::run_example().expect("howell_form example should run");
}

mod cartan_subgroups {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cartan_subgroups.rs"));
}

#[test]
fn cartan_subgroups_runs() {
    cartan_subgroups::run_example().expect("cartan_subgroups example should run");
}

mod h1_cohomology {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/h1_cohomology.rs"));
}

#[test]
fn h1_cohomology_runs() {
    h1_cohomology::run_example().expect("h1_cohomology example should run");
}

mod kummer_degrees {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kummer_degrees.rs"));
}

#[test]
fn kummer_degrees_runs() {
    kummer_degrees::run_example().expect("kummer_degrees example should run");
}

mod cm_counterexample {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cm_counterexample.rs"));
}

#[test]
fn cm_counterexample_runs() {
    cm_counterexample::run_example().expect("cm_counterexample example should run");
}

mod growth_and_bounds {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/growth_and_bounds.rs"));
}

#[test]
fn growth_and_bounds_runs() {
    growth_and_bounds::run_example().expect("growth_and_bounds example should run");
}

mod verification_suites {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verification_suites.rs"));
}

#[test]
fn verification_suites_runs() {
    verification_suites::run_example().expect("verification_suites example should run");
}
