//! Divide and conquer around a deliberately weak beam search.

use ltlf_learn::bits::Bits;
use ltlf_learn::boolset::{
    beam_search, div_conq, existence_check, BeamConfig, BscInstance, DivConqConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (n_pos, n_neg) = (12, 12);
    let sets: Vec<(Bits, usize)> = (0..20)
        .map(|_| {
            (
                Bits::from_fn(n_pos + n_neg, |_| rng.gen_bool(0.5)),
                rng.gen_range(1..4),
            )
        })
        .collect();
    let inst = BscInstance::new(n_pos, n_neg, sets);
    println!("existence: {:?}", existence_check(&inst));

    let narrow = BeamConfig {
        beam_width: 2,
        max_weight: 7,
        ..BeamConfig::default()
    };
    let alone = beam_search(&inst, &narrow);
    println!(
        "beam alone: solution {}, best weight {}",
        alone.result.is_solution(),
        alone.result.comb().weight()
    );

    let (res, stats) = div_conq(
        &inst,
        |sub| Some(beam_search(sub, &narrow).result.into_comb()),
        &DivConqConfig::default(),
    );
    match res {
        Ok(theta) => println!(
            "divide and conquer: weight {}, valid {}, depth {}, {} solver calls, {} base cases",
            theta.weight(),
            inst.is_solution(&theta),
            stats.max_depth,
            stats.solver_calls,
            stats.base_cases
        ),
        Err(e) => println!("divide and conquer: {e}"),
    }
}
