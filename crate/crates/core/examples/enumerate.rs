//! Size-ordered enumeration with observational equivalence.

use ltlf_learn::enumerator::{vfb_bounded, EnumConfig};
use ltlf_learn::ltl::OperatorSet;
use ltlf_learn::trace::parse_sample;

const TASK: &str = "\
1,0;1,0;0,1;1,0;1,0
0,1;1,0;1,0;1,0
---
1,0;0,1;1,0;0,1
1,0;1,0;0,1
---
a,b
";

fn main() {
    let sample = parse_sample(TASK).unwrap();
    let ab = sample.alphabet();

    // Stop below the separator's size to look at the bank itself.
    let out = vfb_bounded(&sample, &OperatorSet::default(), &EnumConfig::bounded(2));
    println!(
        "{} candidates, {} kept up to size 2",
        out.candidates,
        out.bank.len()
    );
    for size in 1..=out.bank.max_size() {
        let names: Vec<String> = out
            .bank
            .by_size(size)
            .map(|i| {
                format!(
                    "{} [{}]",
                    out.bank.formula(i).display(ab),
                    out.bank.vector(i).bits()
                )
            })
            .collect();
        println!("  size {size}: {}", names.join(", "));
    }

    let out = vfb_bounded(&sample, &OperatorSet::default(), &EnumConfig::bounded(8));
    let phi = out.solution.expect("a separator of size 3 exists");
    println!(
        "\nfirst separator: {} (size {}), {} candidates",
        phi.display(ab),
        phi.size(),
        out.candidates
    );
}
