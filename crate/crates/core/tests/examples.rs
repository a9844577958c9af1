//! Every example doubles as a smoke test.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $name() {
            $name::run_example().expect($file);
        }
    };
}

example!(poisson_test, "poisson_test.rs");
example!(estimate_parameters, "estimate_parameters.rs");
example!(kernels_and_oracle, "kernels_and_oracle.rs");
example!(samplers, "samplers.rs");
example!(cpg_laplace_test, "cpg_laplace_test.rs");
example!(power_warp_speed, "power_warp_speed.rs");
example!(power_study, "power_study.rs");
