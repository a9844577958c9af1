// Moment estimators for every null family, including a sample whose
// compound Poisson gamma moment equations have no admissible solution.
//
// ```bash
// cargo run --example estimate_parameters
// ```

use iawd::sampling::sample_null;
use iawd::{estimate, Error, Family, FamilySpec, RngStream, Sample};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let truths = [
        FamilySpec::poisson(3.0)?,
        FamilySpec::dickman(1.5)?,
        FamilySpec::gamma(2.0, 0.5)?,
        FamilySpec::cp_exp(2.0, 1.0)?,
        FamilySpec::cp_gamma(3.0, 2.0, 1.5)?,
    ];
    for truth in &truths {
        let data = sample_null(truth, 20_000, RngStream::new(7, 0));
        let fitted = estimate(truth.family(), &data)?;
        println!("{:?}: true {:?}, fitted {:?}", truth.family(), truth.params().as_slice(), fitted.params().as_slice());
    }

    // zero sample skewness forces a negative rate: no admissible solution
    let flat = Sample::new(vec![1.0, 2.0, 3.0])?;
    match estimate(Family::CpGamma, &flat) {
        Err(Error::InvalidMomentSolution(msg)) => println!("[1, 2, 3] under CPG: {msg}"),
        other => return Err(format!("expected InvalidMomentSolution, got {other:?}").into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("estimate_parameters example");
}
