//! Every example must run to completion.

macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));

            #[test]
            fn runs() {
                run_example().expect(concat!($file, " should run"));
            }
        }
    };
}

example!(order_book, "order_book.rs");
example!(zi_traders, "zi_traders.rs");
example!(przi_distribution, "przi_distribution.rs");
example!(lut_cache, "lut_cache.rs");
example!(hill_climber, "hill_climber.rs");
example!(micro_price, "micro_price.rs");
example!(market_session, "market_session.rs");
example!(fitness_landscape, "fitness_landscape.rs");
example!(recurrence_plot, "recurrence_plot.rs");
example!(impact_scenario, "impact_scenario.rs");
example!(experiment_files, "experiment_files.rs");
