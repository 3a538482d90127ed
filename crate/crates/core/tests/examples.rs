//! Every runnable example must run to completion.

macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(n_inner_products, "n_inner_products.rs", n_inner_products_runs);
example!(quotient_space, "quotient_space.rs", quotient_space_runs);
example!(frame_bounds, "frame_bounds.rs", frame_bounds_runs);
example!(douglas_factorization, "douglas_factorization.rs", douglas_factorization_runs);
example!(kframe_constructions, "kframe_constructions.rs", kframe_constructions_runs);
example!(tight_kframes, "tight_kframes.rs", tight_kframes_runs);
example!(random_certification, "random_certification.rs", random_certification_runs);
example!(instance_files, "instance_files.rs", instance_files_runs);
