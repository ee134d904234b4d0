//! Seeded benchmark tasks from each family.

use ltlf_learn::benchgen::{gen_formula, gen_task, Family, TaskSpec};
use ltlf_learn::trace::{serialize_sample, Alphabet};

fn main() {
    let families = [
        Family::OrderedSequence { n: 3 },
        Family::Subword {
            word: vec![0, 1, 0],
        },
        Family::Subset { props: vec![0, 2] },
        Family::Hamming,
        Family::RandomConjuncts { m: 2 },
        Family::RandomBoolComb {
            factors: 2,
            pattern_len: 3,
        },
    ];
    for fam in families {
        let spec = TaskSpec::new(fam, 8, 3, 3, 42);
        let ab = Alphabet::with_default_names(spec.n_props).unwrap();
        let target = match gen_formula(&spec) {
            Ok(f) => f.display(&ab).to_string(),
            Err(_) => "(none)".into(),
        };
        match gen_task(&spec) {
            Ok(s) => println!(
                "# {} target {target}\n{}",
                spec.family,
                serialize_sample(&s)
            ),
            Err(e) => println!("# {}: {e}\n", spec.family),
        }
    }
}
