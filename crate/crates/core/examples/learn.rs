//! End to end: a task whose smallest separator is a disjunction of two
//! size-8 patterns, out of reach of enumeration alone.
//!
//! Pass a task file to learn that instead.

use ltlf_learn::benchgen::sample_for_formula;
use ltlf_learn::ltl::parse_formula;
use ltlf_learn::pipeline::{learn, LearnerConfig};
use ltlf_learn::trace::{parse_sample, Alphabet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let sample = match std::env::args().nth(1) {
        Some(path) => parse_sample(&std::fs::read_to_string(path).unwrap()).unwrap(),
        None => {
            let ab = Alphabet::with_default_names(3).unwrap();
            let target =
                parse_formula("F(p0 & X!(p1 & X!(p2))) | F(p2 & X!(p0 & X!(p1)))", &ab).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            sample_for_formula(&target, ab, 16, 20, 20, &mut rng, 1_000_000).unwrap()
        }
    };

    let r = learn(&sample, &LearnerConfig::default()).unwrap();
    println!("status  {:?}", r.status);
    if let Some(f) = &r.formula {
        println!(
            "formula {} (size {})",
            f.display(sample.alphabet()),
            f.size()
        );
    }
    if let Some(m) = r.method {
        println!("method  {}", m.as_str());
    }
    if let Some(w) = r.witness {
        println!("witness positive {} / negative {}", w.pos, w.neg);
    }
    println!("time    {:.1?}", r.elapsed);
    println!(
        "stats   {}",
        serde_json::to_string_pretty(&r.stats).unwrap()
    );
}
