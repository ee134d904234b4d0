//! Boolean Set Cover on a three-set instance: existence, witness solution and
//! beam search.

use ltlf_learn::bits::Bits;
use ltlf_learn::boolset::{
    beam_search, existence_check, witness_solution, BeamConfig, BscInstance,
};

fn bits(s: &str) -> Bits {
    Bits::from_fn(s.len(), |i| s.as_bytes()[i] == b'1')
}

fn main() {
    // Universe p1 p2 p3 n1 n2 n3.
    let inst = BscInstance::new(
        3,
        3,
        vec![
            (bits("100000"), 1),
            (bits("011001"), 1),
            (bits("111010"), 1),
        ],
    );
    for (i, (s, st)) in inst.sets().iter().zip(inst.states()).enumerate() {
        println!(
            "S{i} = {}  sat {}  score {}",
            s.members, st.0.sat, st.0.score
        );
    }
    println!("existence: {:?}", existence_check(&inst));

    let w = witness_solution(&inst).unwrap();
    println!("witness solution: {w} (weight {})", w.weight());

    let out = beam_search(&inst, &BeamConfig::default());
    let theta = out.result.comb();
    println!(
        "beam search: {theta} (weight {}, solution {}, {} candidates)",
        theta.weight(),
        out.result.is_solution(),
        out.candidates
    );

    let blocked = BscInstance::new(1, 1, vec![(bits("11"), 1), (bits("01"), 1)]);
    println!(
        "\nwhen every set with p1 also holds n1: {:?}",
        existence_check(&blocked)
    );
}
