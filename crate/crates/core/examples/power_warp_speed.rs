// Power of the Poisson test against a discrete uniform alternative, by the
// warp-speed method and by repeating the full bootstrap.
//
// ```bash
// cargo run --release --example power_warp_speed
// ```

use iawd::bootstrap::full_bootstrap_power;
use iawd::{warp_speed_power, AltFamily, AltSpec, FailurePolicy, Family, FamilySpec, Procedure, Source, StatKind, WeightSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let procedure = Procedure::new(Family::Poisson, WeightSpec::gauss(1.0)?, StatKind::T)?;
    let rows = [
        Source::Null(FamilySpec::poisson(1.0)?),
        Source::Alt(AltSpec::new(AltFamily::DiscreteUniform, vec![1.0])?),
    ];
    for source in &rows {
        let warp = warp_speed_power(source, &procedure, 50, 400, 0.1, 11, FailurePolicy::Redraw)?;
        let full = full_bootstrap_power(source, &procedure, 50, 40, 99, 0.1, 12, FailurePolicy::Redraw)?;
        println!(
            "{}: warp speed {:.3} ({} reps), full bootstrap {:.3} ({} reps)",
            source.label(),
            warp.rate,
            warp.repetitions,
            full.rate,
            full.repetitions
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("power_warp_speed example");
}
