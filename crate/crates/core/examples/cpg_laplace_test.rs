// Laplace-side test of the compound Poisson gamma law on rainfall-like data:
// many dry days, occasional small amounts.
//
// ```bash
// cargo run --example cpg_laplace_test
// ```

use iawd::oracle::{oracle_config, u_statistic_oracle};
use iawd::sampling::sample_null;
use iawd::{bootstrap_test, estimate, u_statistic_cpg, Family, FamilySpec, RngStream, StatKind, WeightSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let truth = FamilySpec::cp_gamma(0.79, 0.30, 0.0088)?;
    let rain = sample_null(&truth, 365, RngStream::new(2024, 0));
    let dry = rain.values().iter().filter(|v| **v == 0.0).count();
    println!("{dry} dry days out of 365");

    let fitted = estimate(Family::CpGamma, &rain)?;
    println!("fitted (λ, α, β) = {:?}", fitted.params().as_slice());

    // the closed-form double sum agrees with direct integration
    let head = iawd::Sample::new(rain.values()[..20].to_vec())?;
    let head_fit = estimate(Family::CpGamma, &head).unwrap_or(fitted.clone());
    let u = u_statistic_cpg(&head, head_fit.params(), 1.0)?;
    let oracle = u_statistic_oracle(&head, head_fit.params(), 1.0, &oracle_config())?;
    println!("U on the first 20 days: {u:.8} (oracle {oracle:.8})");

    let outcome = bootstrap_test(&rain, Family::CpGamma, WeightSpec::laplace(1.0)?, StatKind::U, 200, 0.05, 7)?;
    println!(
        "U = {:.6}, p = {:.3}, redrawn replicates = {}",
        outcome.statistic, outcome.p_value, outcome.redraws
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("cpg_laplace_test example");
}
