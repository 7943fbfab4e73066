macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            #![allow(dead_code)]
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));

            #[test]
            fn runs() {
                run_example().unwrap();
            }
        }
    };
}

example!(exact_numbers, "exact_numbers.rs");
example!(evaluate, "evaluate.rs");
example!(toffoli, "toffoli.rs");
example!(circuits, "circuits.rs");
example!(rewriting, "rewriting.rs");
example!(check_rules, "check_rules.rs");
example!(random_terms, "random_terms.rs");
