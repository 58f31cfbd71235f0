//! Run the randomized lemma suite with a small trial count.

use persep::lemmas::{run_suite, DEFAULT_SEED};
use persep::Tolerance;

fn main() -> persep::Result<()> {
    for tally in run_suite(25, DEFAULT_SEED, &Tolerance::default())? {
        println!("{:<24} {}/{}", tally.name, tally.passed, tally.trials);
    }
    Ok(())
}
