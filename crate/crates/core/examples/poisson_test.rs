// Bootstrap goodness-of-fit test of a Poisson law on a small count sample.
//
// ```bash
// cargo run --example poisson_test
// ```

use iawd::{bootstrap_test, Family, Sample, StatKind, WeightSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let counts = Sample::new_counts(vec![0.0, 1.0, 3.0, 2.0, 0.0, 1.0, 4.0, 2.0, 1.0, 1.0, 0.0, 2.0])?;
    let weight = WeightSpec::gauss(1.0)?;
    let outcome = bootstrap_test(&counts, Family::Poisson, weight, StatKind::T, 500, 0.05, 42)?;
    println!("T = {:.5}", outcome.statistic);
    println!("critical value at 5% = {:.5}", outcome.critical_value);
    println!("p = {:.3}, rejected = {}", outcome.p_value, outcome.rejected);

    // the sorted replicates answer other levels without rerunning
    for alpha in [0.01, 0.1, 0.2] {
        println!("reject at {alpha}: {}", outcome.rejects_at(alpha));
    }

    // the same seed reproduces the outcome bit for bit
    let again = bootstrap_test(&counts, Family::Poisson, weight, StatKind::T, 500, 0.05, 42)?;
    assert_eq!(outcome, again);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("poisson_test example");
}
