// Closed-form kernels against the brute-force quadrature oracle.
//
// The statistic is a double sum of kernel values; the oracle integrates the
// squared empirical discrepancy against the weight directly. Both must agree.
//
// ```bash
// cargo run --example kernels_and_oracle
// ```

use iawd::oracle::{oracle_config, t_statistic_oracle};
use iawd::sampling::sample_null;
use iawd::{t_statistic, FamilySpec, KernelTriple, PsiKernel, RngStream, WeightSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = FamilySpec::gamma(2.0, 1.0)?;
    for weight in [WeightSpec::gauss(1.0)?, WeightSpec::exp_abs(1.0)?] {
        let kernels = KernelTriple::new(&spec, &weight)?;
        println!("{:?} kernels ({:?})", weight.shape(), kernels.provenance());
        for r in [0.0, 0.5, 2.0] {
            let (p1, p2, p3) = (kernels.psi1(r)?, kernels.psi2(r)?, kernels.psi3(r)?);
            println!("  r = {r}: Ψ1 = {p1:.6}, Ψ2 = {p2:.6}, Ψ3 = {p3:.6}");
        }

        let data = sample_null(&spec, 10, RngStream::new(3, 0));
        let fast = t_statistic(&data, &spec, &kernels)?;
        let slow = t_statistic_oracle(&data, &spec, &weight, &oracle_config())?;
        println!("  T = {fast:.10}, oracle = {slow:.10}");
        assert!((fast - slow).abs() <= 1e-8 * slow.abs().max(1e-12));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("kernels_and_oracle example");
}
